use serde::{Deserialize, Serialize};

use super::quadfield::{check_field, QuadFieldElem};
use crate::error::{Error, Result};

/// y^2 = x^3 + A x + B over Q(sqrt D) (D = 1 for Q).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveDesc {
    a: QuadFieldElem,
    b: QuadFieldElem,
    field: i64,
    /// 4A^3 + 27B^2
    disc: QuadFieldElem,
    j: QuadFieldElem,
}

fn field_of(xs: &[&QuadFieldElem]) -> Result<i64> {
    let mut d = 1;
    for x in xs {
        if !x.is_rational() {
            if d != 1 && d != x.d() {
                return Err(Error::InvalidArgument(
                    "coefficients live in different quadratic fields".into(),
                ));
            }
            d = x.d();
        }
    }
    Ok(d)
}

impl EllipticCurveDesc {
    pub fn new(a: QuadFieldElem, b: QuadFieldElem) -> Result<Self> {
        let field = field_of(&[&a, &b])?;
        Self::over(a, b, field)
    }

    /// Curve regarded over Q(sqrt field) even when A, B are rational.
    pub fn over(a: QuadFieldElem, b: QuadFieldElem, field: i64) -> Result<Self> {
        check_field(field)?;
        let f = field_of(&[&a, &b])?;
        if f != 1 && f != field {
            return Err(Error::InvalidArgument(format!(
                "coefficients are not in Q(sqrt {field})"
            )));
        }
        let a = a.in_field(field);
        let b = b.in_field(field);
        let four_a3 = &QuadFieldElem::from_int(4) * &a.pow(3);
        let disc = &four_a3 + &(&QuadFieldElem::from_int(27) * &b.pow(2));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let j = &(&QuadFieldElem::from_int(1728) * &four_a3) / &disc;
        Ok(Self {
            a,
            b,
            field,
            disc,
            j,
        })
    }

    pub fn a(&self) -> &QuadFieldElem {
        &self.a
    }

    pub fn b(&self) -> &QuadFieldElem {
        &self.b
    }

    /// D with the curve defined over Q(sqrt D).
    pub fn field(&self) -> i64 {
        self.field
    }

    pub fn disc(&self) -> &QuadFieldElem {
        &self.disc
    }

    pub fn j_invariant(&self) -> &QuadFieldElem {
        &self.j
    }

    /// A and B both rational.
    pub fn has_rational_model(&self) -> bool {
        self.a.is_rational() && self.b.is_rational()
    }

    pub fn contains(&self, x: &QuadFieldElem, y: &QuadFieldElem) -> bool {
        let rhs = &(&x.pow(3) + &(&self.a * x)) + &self.b;
        y.pow(2) == rhs
    }
}

/// E_j : A = 3j(1728 - j), B = 2j(1728 - j)^2, over the field of j.
pub fn curve_from_j(j: &QuadFieldElem) -> Result<EllipticCurveDesc> {
    curve_from_j_over(j, if j.is_rational() { 1 } else { j.d() })
}

pub fn curve_from_j_over(j: &QuadFieldElem, field: i64) -> Result<EllipticCurveDesc> {
    if j.is_zero() || *j == QuadFieldElem::from_int(1728) {
        return Err(Error::ExcludedJ(j.to_string()));
    }
    let k = &QuadFieldElem::from_int(1728) - j;
    let a = &(&QuadFieldElem::from_int(3) * j) * &k;
    let b = &(&(&QuadFieldElem::from_int(2) * j) * &k) * &k;
    EllipticCurveDesc::over(a, b, field)
}

/// (A, B) -> (A D^2, B D^3).
pub fn quadratic_twist(e: &EllipticCurveDesc, d: i64) -> Result<EllipticCurveDesc> {
    if d == 0 || (d != 1 && !crate::field::is_squarefree(d)) {
        return Err(Error::InvalidArgument(format!(
            "twist by {d}: not squarefree"
        )));
    }
    let dd = QuadFieldElem::from_int(d);
    EllipticCurveDesc::over(&e.a * &dd.pow(2), &e.b * &dd.pow(3), e.field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellcurves::quadfield::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn from_j_examples() {
        let j = QuadFieldElem::rational(rat(2268945, 128));
        assert_eq!(curve_from_j(&j).unwrap().j_invariant(), &j);
        assert!(matches!(
            curve_from_j(&QuadFieldElem::from_int(1728)),
            Err(Error::ExcludedJ(_))
        ));
        assert!(curve_from_j(&QuadFieldElem::from_int(0)).is_err());
    }

    #[test]
    fn singular_rejected() {
        let e = EllipticCurveDesc::new(QuadFieldElem::from_int(-3), QuadFieldElem::from_int(2));
        assert_eq!(e, Err(Error::SingularCurve));
    }

    #[test]
    fn random_round_trips_and_twists() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(-100_000i64..100_000);
            let d = rng.gen_range(1i64..1000);
            let j = QuadFieldElem::rational(rat(n, d));
            if j.is_zero() || j == QuadFieldElem::from_int(1728) {
                continue;
            }
            let e = curve_from_j(&j).unwrap();
            assert_eq!(e.j_invariant(), &j);
            let t = [-1i64, 2, 3, -7, 5, 1][rng.gen_range(0..6)];
            assert_eq!(quadratic_twist(&e, t).unwrap().j_invariant(), &j);
        }
        let e = curve_from_j(&QuadFieldElem::from_int(5)).unwrap();
        assert_eq!(quadratic_twist(&e, 1).unwrap(), e);
    }

    #[test]
    fn quadratic_j() {
        let j = QuadFieldElem::new(rat(1, 2), rat(3, 1), 5).unwrap();
        let e = curve_from_j(&j).unwrap();
        assert_eq!(e.field(), 5);
        assert_eq!(e.j_invariant(), &j);
    }
}
