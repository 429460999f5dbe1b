use lgisog_core::cmtools::{class_number, isogenous_order_ratio_check, reduced_forms};
use lgisog_core::ellcurves::quadfield::rat;
use lgisog_core::ellcurves::{
    count_points_fp, curve_from_j, curve_from_j_over, default_modpoly_dir, global_isogeny_test,
    load_modular_polynomial, local_isogeny_test, local_scan, quadratic_twist, reduce_and_count,
    EllipticCurveDesc, PrimeReduction, QuadFieldElem, SUPPORTED_ELLS,
};
use lgisog_core::field::primes_up_to;
use lgisog_core::gl2::{char_poly_reducible, Gl2Matrix};
use lgisog_core::survey::{exceptional_bound, survey, Classification, NumberFieldDesc};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> QuadFieldElem {
    QuadFieldElem::rational(rat(n, d))
}

fn x0_5(t: i64) -> QuadFieldElem {
    let t = q(t, 1);
    let a = &(&t.pow(2) + &(&q(10, 1) * &t)) + &q(5, 1);
    &a.pow(3) / &t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hasse_and_companion_matrix(a in -50i64..50, b in -50i64..50, pi in 0usize..40) {
        let p = primes_up_to(200)[pi + 1];
        let e = EllipticCurveDesc::new(q(a, 1), q(b, 1));
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        for r in reduce_and_count(&e, p).unwrap() {
            if let PrimeReduction::Good(fd) = r {
                prop_assert!(fd.satisfies_hasse());
                for ell in [3u64, 5, 7, 11] {
                    if p % ell == 0 {
                        continue;
                    }
                    let m = Gl2Matrix::new(0, -(fd.q as i64), 1, fd.a, ell as u32).unwrap();
                    prop_assert_eq!(local_isogeny_test(&fd, ell).unwrap(), char_poly_reducible(&m));
                }
            }
        }
    }

    #[test]
    fn twist_keeps_local_verdicts(n in 1i64..5000, den in 1i64..50, ti in 0usize..6) {
        let j = q(n, den);
        prop_assume!(j != q(1728, 1));
        let d = [-1i64, 2, 3, -7, 5, -2][ti];
        let e = curve_from_j(&j).unwrap();
        let et = quadratic_twist(&e, d).unwrap();
        for ell in [5u64, 7] {
            let s1 = local_scan(&e, ell, 400).unwrap();
            let s2 = local_scan(&et, ell, 400).unwrap();
            for a in &s1.entries {
                if let Some(b) = s2.entries.iter().find(|b| b.p == a.p && b.root == a.root) {
                    if (2 * d).unsigned_abs() % a.p != 0 {
                        prop_assert_eq!(a.reducible, b.reducible);
                        prop_assert_eq!(a.a.abs(), b.a.abs());
                    }
                }
            }
        }
    }

    #[test]
    fn global_isogeny_implies_local(t in prop::sample::select(vec![-7i64, -3, -2, -1, 1, 2, 3, 4, 6, 9, 11])) {
        let phi5 = load_modular_polynomial(5, &default_modpoly_dir()).unwrap();
        let j = x0_5(t);
        prop_assume!(!j.is_zero() && j != q(1728, 1));
        let g = global_isogeny_test(&j, 1, &phi5).unwrap();
        prop_assert!(g.has_isogeny_over_k);
        let s = local_scan(&curve_from_j(&j).unwrap(), 5, 1000).unwrap();
        prop_assert!(s.all_pass());
    }

    #[test]
    fn bound_is_monotone(d in 1u64..20, disc in -500i64..500, dd in 0u64..5, ddisc in 0i64..50) {
        prop_assume!(disc != 0 && d > 1);
        let k1 = NumberFieldDesc::general(d, disc).unwrap();
        let k2 = NumberFieldDesc::general(d + dd, disc.signum() * (disc.abs() + ddisc)).unwrap();
        prop_assert!(exceptional_bound(&k1) <= exceptional_bound(&k2));
    }

    #[test]
    fn forms_are_reduced_primitive(n in 1i64..2000) {
        let d = -4 * n + [0i64, 1][(n % 2) as usize];
        for f in reduced_forms(d).unwrap() {
            prop_assert!(f.is_reduced() && f.is_primitive());
            prop_assert_eq!(f.disc(), d);
        }
    }
}

#[test]
fn fp_counts_match_naive_enumeration() {
    for p in [3u64, 5, 7, 11, 13] {
        for (a, b) in [(1u64, 0u64), (0, 1), (2, 3)] {
            let mut n = 1;
            for x in 0..p {
                for y in 0..p {
                    if (y * y) % p == (x * x * x + a * x + b) % p {
                        n += 1;
                    }
                }
            }
            assert_eq!(count_points_fp(a, b, p), n);
        }
    }
    assert_eq!(count_points_fp(1, 0, 3), 4);
}

#[test]
fn ratio_formula_grid() {
    for d in [-3i64, -4, -7, -8, -11, -15, -19, -20] {
        for ell in [3u64, 5, 7] {
            if d % ell as i64 == 0 {
                continue;
            }
            let r = isogenous_order_ratio_check(d, ell).unwrap();
            assert!(r.matches, "D = {d}, l = {ell}: {r:?}");
            if r.unit_index == 1 {
                assert!(r.at_least_ell_minus_one);
            }
        }
    }
    assert_eq!(class_number(-4).unwrap(), 1);
}

#[test]
fn shipped_modular_polynomials_validate() {
    for ell in SUPPORTED_ELLS {
        let p = load_modular_polynomial(ell, &default_modpoly_dir()).unwrap();
        assert!(p.validate().is_ok());
    }
}

#[test]
fn survey_small_primes_and_determinism() {
    let k = NumberFieldDesc::rationals();
    let js: Vec<QuadFieldElem> = [(5, 7), (2268945, 128), (-3, 2), (100, 1), (1728, 1)]
        .iter()
        .map(|&(n, d)| q(n, d))
        .collect();
    for ell in [2u32, 3] {
        let phi = load_modular_polynomial(ell, &default_modpoly_dir()).unwrap();
        let a = survey(&k, ell as u64, &js, 500, &phi).unwrap();
        let b = survey(&k, ell as u64, &js, 500, &phi).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a[4].verdict().is_none());
        for v in a.iter().filter_map(|e| e.verdict()) {
            assert_ne!(v.classification, Classification::ExceptionalCandidate);
        }
    }
}

#[test]
fn exceptional_candidates_split_over_the_extension() {
    let phi7 = load_modular_polynomial(7, &default_modpoly_dir()).unwrap();
    let k = NumberFieldDesc::rationals();
    let js = vec![q(2268945, 128), q(3, 1), x0_5(2)];
    for e in survey(&k, 7, &js, 2000, &phi7).unwrap() {
        let v = e.verdict().unwrap();
        if v.classification == Classification::ExceptionalCandidate {
            assert!(v.global_over_ext);
        }
        if v.classification == Classification::GloballyIsogenous {
            assert_eq!(v.pass_fraction, 1.0);
        }
    }
    // over Q(sqrt 5) the same j stays a candidate at 7
    let k5 = NumberFieldDesc::quadratic(5).unwrap();
    let v = survey(&k5, 7, &[q(2268945, 128)], 600, &phi7).unwrap();
    let v = v[0].verdict().unwrap();
    assert_eq!(v.classification, Classification::ExceptionalCandidate);
    assert!(v.global_over_ext);
    let _ = curve_from_j_over(&q(2268945, 128), 5).unwrap();
}
