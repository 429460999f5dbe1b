use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::EllipticCurveDesc;
use super::quadfield::QuadFieldElem;
use crate::error::{Error, Result};
use crate::field::{kronecker_prime, pow_mod, primes_up_to, sqrt_mod};
use crate::gl2::poly_reducible;

/// Frobenius data at a good prime of residue degree f over p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// Image of sqrt(D) in F_p for a split prime.
    pub root: Option<u64>,
    pub n_points: u64,
    /// q + 1 - N
    pub a: i64,
}

impl FrobeniusData {
    pub fn satisfies_hasse(&self) -> bool {
        (self.a as i128).pow(2) <= 4 * self.q as i128
    }

    /// q mod l, the value of the cyclotomic character at Frobenius.
    pub fn det_class(&self, ell: u64) -> u64 {
        self.q % ell
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PrimeReduction {
    Good(FrobeniusData),
    Bad { p: u64, q: u64, root: Option<u64> },
    Ramified { p: u64 },
}

fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = (x.denom() % &pb + &pb) % &pb;
    if den.is_zero() {
        return None;
    }
    let num = (x.numer() % &pb + &pb) % &pb;
    let num = num.to_u64().unwrap();
    let den = den.to_u64().unwrap();
    Some(num * pow_mod(den, p - 2, p) % p)
}

/// a + b sqrt D mod a degree-one prime sending sqrt D to `root`.
fn reduce_split(x: &QuadFieldElem, p: u64, root: u64) -> Option<u64> {
    let a = rational_mod(x.a(), p)?;
    let b = rational_mod(x.b(), p)?;
    Some((a + b * root) % p)
}

fn reduce_inert(x: &QuadFieldElem, p: u64) -> Option<(u64, u64)> {
    Some((rational_mod(x.a(), p)?, rational_mod(x.b(), p)?))
}

fn square_chars(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[(x * x % p) as usize] = 1;
    }
    chi
}

/// #E(F_p) for y^2 = x^3 + a x + b, p odd.
pub fn count_points_fp(a: u64, b: u64, p: u64) -> u64 {
    let chi = square_chars(p);
    let mut sum: i64 = 0;
    for x in 0..p {
        let rhs = ((x * x % p * x) % p + a * x % p + b) % p;
        sum += chi[rhs as usize] as i64;
    }
    (p as i64 + 1 + sum) as u64
}

/// #E(F_{p^2}) with F_{p^2} = F_p[s]/(s^2 - d), d a nonsquare mod p.
pub fn count_points_fp2(a: (u64, u64), b: (u64, u64), d: u64, p: u64) -> u64 {
    let chi = square_chars(p);
    let mul = |x: (u64, u64), y: (u64, u64)| {
        (
            (x.0 * y.0 + x.1 * y.1 % p * d) % p,
            (x.0 * y.1 + x.1 * y.0) % p,
        )
    };
    let mut sum: i64 = 0;
    for x0 in 0..p {
        for x1 in 0..p {
            let x = (x0, x1);
            let x3 = mul(mul(x, x), x);
            let ax = mul(a, x);
            let z = ((x3.0 + ax.0 + b.0) % p, (x3.1 + ax.1 + b.1) % p);
            let norm = (z.0 * z.0 % p + p - z.1 * z.1 % p * d % p) % p;
            sum += chi[norm as usize] as i64;
        }
    }
    (p as i64 * p as i64 + 1 + sum) as u64
}

/// Reductions of E at the primes of its field above the odd rational prime p.
pub fn reduce_and_count(e: &EllipticCurveDesc, p: u64) -> Result<Vec<PrimeReduction>> {
    if p == 2 || !crate::field::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let d = e.field();
    if d == 1 {
        return Ok(vec![reduce_split_prime(e, p, None)]);
    }
    match kronecker_prime(d, p) {
        0 => Ok(vec![PrimeReduction::Ramified { p }]),
        1 => {
            let r = sqrt_mod(d.rem_euclid(p as i64) as u64, p).unwrap();
            let mut roots = vec![r, (p - r) % p];
            roots.sort_unstable();
            Ok(roots
                .into_iter()
                .map(|r| reduce_split_prime(e, p, Some(r)))
                .collect())
        }
        _ => {
            let dm = d.rem_euclid(p as i64) as u64;
            let q = p * p;
            let bad = PrimeReduction::Bad { p, q, root: None };
            let (Some(a), Some(b), Some(disc)) = (
                reduce_inert(e.a(), p),
                reduce_inert(e.b(), p),
                reduce_inert(e.disc(), p),
            ) else {
                return Ok(vec![bad]);
            };
            if disc == (0, 0) {
                return Ok(vec![bad]);
            }
            let n = count_points_fp2(a, b, dm, p);
            Ok(vec![PrimeReduction::Good(FrobeniusData {
                p,
                f: 2,
                q,
                root: None,
                n_points: n,
                a: q as i64 + 1 - n as i64,
            })])
        }
    }
}

fn reduce_split_prime(e: &EllipticCurveDesc, p: u64, root: Option<u64>) -> PrimeReduction {
    let red = |x: &QuadFieldElem| match root {
        Some(r) => reduce_split(x, p, r),
        None => rational_mod(x.a(), p),
    };
    let bad = PrimeReduction::Bad { p, q: p, root };
    let (Some(a), Some(b), Some(disc)) = (red(e.a()), red(e.b()), red(e.disc())) else {
        return bad;
    };
    if disc == 0 {
        return bad;
    }
    let n = count_points_fp(a, b, p);
    PrimeReduction::Good(FrobeniusData {
        p,
        f: 1,
        q: p,
        root,
        n_points: n,
        a: p as i64 + 1 - n as i64,
    })
}

/// Does x^2 - a x + q have a root mod l?
pub fn local_isogeny_test(fd: &FrobeniusData, ell: u64) -> Result<bool> {
    if fd.q % ell == 0 {
        return Err(Error::PrimeAboveEll { q: fd.q, ell });
    }
    let t = fd.a.rem_euclid(ell as i64) as u32;
    let n = (fd.q % ell) as u32;
    Ok(poly_reducible(t, n, ell as u32))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub p: u64,
    pub q: u64,
    pub root: Option<u64>,
    pub a: i64,
    pub reducible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPrime {
    pub p: u64,
    pub q: Option<u64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalScanReport {
    pub ell: u64,
    pub field: i64,
    pub bound: u64,
    pub entries: Vec<ScanEntry>,
    pub skipped: Vec<SkippedPrime>,
    pub good: usize,
    pub passed: usize,
}

impl LocalScanReport {
    pub fn pass_fraction(&self) -> f64 {
        if self.good == 0 {
            0.0
        } else {
            self.passed as f64 / self.good as f64
        }
    }

    /// Every good prime in the window passes (and there is at least one).
    pub fn all_pass(&self) -> bool {
        self.good > 0 && self.passed == self.good
    }

    pub fn failures(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| !e.reducible)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ell": self.ell,
            "field": {"D": self.field},
            "bound": self.bound,
            "good": self.good,
            "passed": self.passed,
            "pass_fraction": self.pass_fraction(),
            "failures": self.failures().map(|e| serde_json::json!({"p": e.p, "q": e.q, "a": e.a})).collect::<Vec<_>>(),
            "skipped": self.skipped,
        })
    }
}

/// Local l-isogeny test at every good prime of norm <= bound not above l.
pub fn local_scan(e: &EllipticCurveDesc, ell: u64, bound: u64) -> Result<LocalScanReport> {
    if !crate::field::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if bound < 100 {
        return Err(Error::InvalidArgument(format!(
            "prime bound {bound} is below 100"
        )));
    }
    let d = e.field();
    let per_prime: Vec<Result<(Vec<ScanEntry>, Vec<SkippedPrime>)>> = primes_up_to(bound)
        .into_par_iter()
        .map(|p| {
            let mut entries = Vec::new();
            let mut skipped = Vec::new();
            if p == 2 {
                skipped.push(SkippedPrime {
                    p,
                    q: None,
                    reason: "p = 2".into(),
                });
                return Ok((entries, skipped));
            }
            if d != 1 && kronecker_prime(d, p) == -1 && p * p > bound {
                return Ok((entries, skipped));
            }
            for red in reduce_and_count(e, p)? {
                match red {
                    PrimeReduction::Ramified { p } => skipped.push(SkippedPrime {
                        p,
                        q: Some(p),
                        reason: "ramified".into(),
                    }),
                    PrimeReduction::Bad { p, q, .. } => skipped.push(SkippedPrime {
                        p,
                        q: Some(q),
                        reason: "bad reduction".into(),
                    }),
                    PrimeReduction::Good(fd) => {
                        if p == ell {
                            skipped.push(SkippedPrime {
                                p,
                                q: Some(fd.q),
                                reason: "above l".into(),
                            });
                            continue;
                        }
                        entries.push(ScanEntry {
                            p,
                            q: fd.q,
                            root: fd.root,
                            a: fd.a,
                            reducible: local_isogeny_test(&fd, ell)?,
                        });
                    }
                }
            }
            Ok((entries, skipped))
        })
        .collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for r in per_prime {
        let (e, s) = r?;
        entries.extend(e);
        skipped.extend(s);
    }
    let good = entries.len();
    let passed = entries.iter().filter(|e| e.reducible).count();
    Ok(LocalScanReport {
        ell,
        field: d,
        bound,
        entries,
        skipped,
        good,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellcurves::curve::curve_from_j;
    use crate::ellcurves::quadfield::rat;
    use crate::gl2::{char_poly_reducible, Gl2Matrix};

    fn curve(a: i64, b: i64, d: i64) -> EllipticCurveDesc {
        EllipticCurveDesc::over(QuadFieldElem::from_int(a), QuadFieldElem::from_int(b), d).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_points_fp(1, 0, 3), 4);
        let r = reduce_and_count(&curve(1, 0, 1), 3).unwrap();
        match &r[0] {
            PrimeReduction::Good(fd) => assert_eq!(fd.a, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brute_force_oracle() {
        // direct (x, y) enumeration
        for p in [5u64, 7, 11, 13, 17] {
            for (a, b) in [(1u64, 1u64), (2, 3), (4, 0)] {
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
    }

    #[test]
    fn fp2_count_matches_frobenius_recurrence() {
        // #E(F_{p^2}) = p^2 + 1 - (a_p^2 - 2p)
        for p in [5u64, 7, 11, 13] {
            let d = (2..p)
                .find(|&x| kronecker_prime(x as i64, p) == -1)
                .unwrap();
            let np = count_points_fp(1, 1, p);
            let ap = p as i64 + 1 - np as i64;
            let n2 = count_points_fp2((1, 0), (1, 0), d, p);
            assert_eq!(
                n2 as i64,
                (p * p) as i64 + 1 - (ap * ap - 2 * p as i64),
                "p={p}"
            );
        }
    }

    #[test]
    fn bad_and_hasse() {
        let e = curve(-56, 4848, 1);
        for p in [5u64, 7, 11, 13] {
            for r in reduce_and_count(&e, p).unwrap() {
                if let PrimeReduction::Good(fd) = r {
                    assert!(fd.satisfies_hasse());
                }
            }
        }
        let e = curve(1, 1, 1); // disc 31
        assert!(matches!(
            reduce_and_count(&e, 31).unwrap()[0],
            PrimeReduction::Bad { .. }
        ));
    }

    #[test]
    fn local_test_examples() {
        let fd = |a: i64, q: u64| FrobeniusData {
            p: q,
            f: 1,
            q,
            root: None,
            n_points: 0,
            a,
        };
        assert!(local_isogeny_test(&fd(12, 11), 7).unwrap());
        // -44 = 5 is not a square mod 7
        assert!(!local_isogeny_test(&fd(0, 11), 7).unwrap());
        assert!(local_isogeny_test(&fd(0, 7), 7).is_err());
        assert!(local_isogeny_test(&fd(2, 5), 2).unwrap());
        assert!(!local_isogeny_test(&fd(1, 5), 2).unwrap());
    }

    #[test]
    fn companion_matrix_equivalence() {
        for ell in [2u64, 3, 5, 7, 11] {
            for q in [3u64, 5, 13, 17, 29] {
                if q % ell == 0 {
                    continue;
                }
                for a in -10i64..=10 {
                    let fd = FrobeniusData {
                        p: q,
                        f: 1,
                        q,
                        root: None,
                        n_points: 0,
                        a,
                    };
                    let m = Gl2Matrix::new(0, -(q as i64), 1, a, ell as u32).unwrap();
                    assert_eq!(
                        local_isogeny_test(&fd, ell).unwrap(),
                        char_poly_reducible(&m)
                    );
                }
            }
        }
    }

    #[test]
    fn exceptional_pair_scan_small() {
        let e = curve_from_j(&QuadFieldElem::rational(rat(2268945, 128))).unwrap();
        let r = local_scan(&e, 7, 2000).unwrap();
        assert!(r.all_pass());
        let r = local_scan(&e, 11, 2000).unwrap();
        assert!(!r.all_pass());
    }
}
