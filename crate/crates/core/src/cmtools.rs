//! Class numbers of imaginary quadratic orders by reduced-form counting.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, kronecker_prime};

/// a x^2 + b xy + c y^2
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let Bqf { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }
}

fn check_disc(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::InvalidDiscriminant(d, "must be negative"));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d, "must be 0 or 1 mod 4"));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant D, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<Bqf>> {
    check_disc(d)?;
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    let mut forms: Vec<Bqf> = (1..=amax)
        .into_par_iter()
        .flat_map_iter(|a| {
            (-a..=a).filter_map(move |b| {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    return None;
                }
                let f = Bqf {
                    a,
                    b,
                    c: num / (4 * a),
                };
                (f.is_reduced() && f.is_primitive()).then_some(f)
            })
        })
        .collect();
    forms.sort();
    Ok(forms)
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(reduced_forms(d)?.len())
}

/// Discriminant of the maximal order of an imaginary quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => crate::field::is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && crate::field::is_squarefree(m)
        }
        _ => false,
    }
}

/// [O* : O'*] for O of discriminant D and O' of conductor l.
pub fn unit_index(d: i64) -> i64 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRatioReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub ell: u64,
    pub h: usize,
    pub h_sub: usize,
    /// h(l^2 D) / h(D) from form counts, as "n/d".
    pub ratio_counted: String,
    /// (l - (D/l)) / [O* : O'*]
    pub ratio_formula: String,
    #[serde(rename = "match")]
    pub matches: bool,
    pub unit_index: i64,
    /// ratio >= l - 1, the inequality used when the unit index is 1.
    pub at_least_ell_minus_one: bool,
}

pub fn isogenous_order_ratio_check(d: i64, ell: u64) -> Result<OrderRatioReport> {
    check_disc(d)?;
    if !is_fundamental(d) {
        return Err(Error::InvalidDiscriminant(d, "not fundamental"));
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if d % ell as i64 == 0 {
        return Err(Error::InvalidArgument(format!("{ell} divides {d}")));
    }
    let l = ell as i64;
    let h = class_number(d)?;
    let h_sub = class_number(l * l * d)?;
    let counted = Ratio::new(h_sub as i64, h as i64);
    let u = unit_index(d);
    let formula = Ratio::new(l - kronecker_prime(d, ell) as i64, u);
    Ok(OrderRatioReport {
        d,
        ell,
        h,
        h_sub,
        ratio_counted: counted.to_string(),
        ratio_formula: formula.to_string(),
        matches: counted == formula,
        unit_index: u,
        at_least_ell_minus_one: counted >= Ratio::from_integer(l - 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmGuard {
    pub ell: u64,
    pub degree: u64,
    /// l > 2d + 1: an exceptional pair for a field of degree d has no CM.
    pub excludes_cm: bool,
    /// Upper bound 2d on h(O')/h(O) available in the CM case.
    pub ratio_upper_bound: u64,
}

pub fn cm_guard(ell: u64, degree: u64) -> Result<CmGuard> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(CmGuard {
        ell,
        degree,
        excludes_cm: ell > 2 * degree + 1,
        ratio_upper_bound: 2 * degree,
    })
}
