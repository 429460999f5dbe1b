//! The curve E': v^2 = u^3 - 1715u + 33614 and its map to j-invariants with
//! locally-everywhere 7-isogenies.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadfield::{check_field, QuadFieldElem};
use crate::error::{Error, Result};

pub const ELKIES_A: i64 = -1715;
pub const ELKIES_B: i64 = 33614;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurvePoint {
    pub u: QuadFieldElem,
    pub v: QuadFieldElem,
}

fn k(n: i64) -> QuadFieldElem {
    QuadFieldElem::from_int(n)
}

fn rhs(u: &QuadFieldElem) -> QuadFieldElem {
    &(&u.pow(3) + &(&k(ELKIES_A) * u)) + &k(ELKIES_B)
}

pub fn on_elkies_curve(u: &QuadFieldElem, v: &QuadFieldElem) -> bool {
    v.pow(2) == rhs(u)
}

/// The parameter t = (7u - v + 343) / (2v). On the curve
/// (u + 49)/v = v/(u^2 - 49u + 686), which extends t to (-49, 0).
pub fn elkies7_t(u: &QuadFieldElem, v: &QuadFieldElem) -> Result<QuadFieldElem> {
    if !on_elkies_curve(u, v) {
        return Err(Error::NotOnCurve);
    }
    let half = QuadFieldElem::rational(BigRational::new(1.into(), 2.into()));
    if !v.is_zero() {
        let num = &(&(&k(7) * u) - v) + &k(343);
        return Ok(&num / &(&k(2) * v));
    }
    let q = &(&u.pow(2) - &(&k(49) * u)) + &k(686);
    if q.is_zero() {
        return Err(Error::TwoTorsionPole);
    }
    Ok(&(&(&k(7) * v) / &(&k(2) * &q)) - &half)
}

/// j = -(t-3)^3 (t-2) (t^2+t-5)^3 (t^2+t+2)^3 (t^4-3t^3+2t^2+3t+1)^3 / (t^3-2t^2-t+1)^7
pub fn elkies7_j_of_t(t: &QuadFieldElem) -> Result<QuadFieldElem> {
    let p = |cs: &[i64]| cs.iter().fold(k(0), |acc, &c| &(&acc * t) + &k(c));
    let den = p(&[1, -2, -1, 1]);
    if den.is_zero() {
        return Err(Error::CuspidalParameter);
    }
    let num = &(&(&(&p(&[1, -3]).pow(3) * &p(&[1, -2])) * &p(&[1, 1, -5]).pow(3))
        * &p(&[1, 1, 2]).pow(3))
        * &p(&[1, -3, 2, 3, 1]).pow(3);
    Ok(-&(&num / &den.pow(7)))
}

/// j-invariant attached to an affine point of E'.
pub fn elkies7_j(u: &QuadFieldElem, v: &QuadFieldElem) -> Result<QuadFieldElem> {
    elkies7_j_of_t(&elkies7_t(u, v)?)
}

/// `None` stands for the point at infinity.
pub fn elkies7_j_point(p: Option<&CurvePoint>) -> Result<QuadFieldElem> {
    match p {
        None => Err(Error::PointAtInfinity),
        Some(p) => elkies7_j(&p.u, &p.v),
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Affine points of E' over Q(sqrt field) (field = 1 for Q) found by
/// x-enumeration. Over Q: u = a/c^2 with |a| <= H, c^2 <= H. Over Q(sqrt D):
/// u = (a + b sqrt D)/c with |a|, |b| <= H, c <= sqrt H.
pub fn elkies7_point_search(field: i64, height: u64) -> Result<Vec<CurvePoint>> {
    check_field(field)?;
    if height == 0 {
        return Err(Error::InvalidArgument(
            "height bound must be at least 1".into(),
        ));
    }
    let h = height as i64;
    let cmax = isqrt(height).max(1) as i64;
    let candidates: Vec<QuadFieldElem> = if field == 1 {
        (1..=cmax)
            .flat_map(|c| {
                (-h..=h).filter_map(move |a| {
                    let u = BigRational::new(BigInt::from(a), BigInt::from(c * c));
                    // keep each u once, in lowest terms
                    (u.denom() == &BigInt::from(c * c)).then(|| QuadFieldElem::rational(u))
                })
            })
            .collect()
    } else {
        let mut v = vec![];
        for c in 1..=cmax {
            for a in -h..=h {
                for b in -h..=h {
                    let x = QuadFieldElem::new(
                        BigRational::new(a.into(), c.into()),
                        BigRational::new(b.into(), c.into()),
                        field,
                    )
                    .unwrap();
                    if x.denominator() == BigInt::from(c) {
                        v.push(x);
                    }
                }
            }
        }
        v
    };
    let mut pts: Vec<CurvePoint> = candidates
        .par_iter()
        .flat_map_iter(|u| {
            let r = rhs(u);
            let mut out = vec![];
            if let Some(v) = r.sqrt() {
                let v = v.in_field(field);
                if !v.is_zero() {
                    out.push(CurvePoint {
                        u: u.clone(),
                        v: -&v,
                    });
                }
                out.push(CurvePoint { u: u.clone(), v });
            }
            out.into_iter()
        })
        .collect();
    pts.sort_by_key(point_key);
    pts.dedup();
    Ok(pts)
}

fn point_key(p: &CurvePoint) -> [BigRational; 5] {
    let (ua, ub) = (p.u.a().clone(), p.u.b().clone());
    [
        ua.abs() + ub.abs(),
        ua,
        ub,
        p.v.a().clone(),
        p.v.b().clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellcurves::quadfield::rat;

    #[test]
    fn two_torsion_point_gives_the_rational_pair() {
        let u = k(-49);
        let v = k(0);
        assert!(on_elkies_curve(&u, &v));
        let t = elkies7_t(&u, &v).unwrap();
        assert_eq!(t, QuadFieldElem::rational(rat(-1, 2)));
        assert_eq!(
            elkies7_j(&u, &v).unwrap(),
            QuadFieldElem::rational(rat(2268945, 128))
        );
    }

    #[test]
    fn errors() {
        assert_eq!(elkies7_j_point(None), Err(Error::PointAtInfinity));
        assert_eq!(elkies7_j(&k(0), &k(1)), Err(Error::NotOnCurve));
        // the other 2-torsion points (49 +- 7 sqrt -7)/2
        let u = QuadFieldElem::new(rat(49, 2), rat(7, 2), -7).unwrap();
        assert!(on_elkies_curve(&u, &k(0)));
        assert_eq!(elkies7_j(&u, &k(0)), Err(Error::TwoTorsionPole));
        // t^3 - 2t^2 - t + 1 is irreducible, so no t of degree <= 2 reaches the guard
        assert!(elkies7_j_of_t(&k(5)).is_ok());
    }

    #[test]
    fn search_over_q() {
        let pts = elkies7_point_search(1, 60).unwrap();
        assert!(pts.iter().any(|p| p.u == k(-49) && p.v.is_zero()));
        for p in &pts {
            assert!(on_elkies_curve(&p.u, &p.v));
        }
    }

    #[test]
    fn search_over_gaussian_field() {
        let pts = elkies7_point_search(-1, 60).unwrap();
        let want = CurvePoint {
            u: k(-57),
            v: QuadFieldElem::new(rat(0, 1), rat(232, 1), -1).unwrap(),
        };
        assert!(pts.contains(&want));
        for p in &pts {
            assert!(on_elkies_curve(&p.u, &p.v));
        }
    }
}
