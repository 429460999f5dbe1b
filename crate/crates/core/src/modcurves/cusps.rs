//! Level-5 structures on the 5-gon, in exponent form: mu_5 x Z/5 is written
//! additively, (zeta_5^w, a) as (w, a).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl2::Gl2Matrix;
use crate::grouplab::v4_preimage_mod5;

/// Images ((w1, a1), (w2, a2)) of the standard basis of F_5^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CuspDatum {
    pub e1: (u8, u8),
    pub e2: (u8, u8),
}

fn m5(x: i64) -> u8 {
    x.rem_euclid(5) as u8
}

impl CuspDatum {
    /// Rejects data whose two images are dependent.
    pub fn new(w1: i64, a1: i64, w2: i64, a2: i64) -> Result<Self> {
        let c = Self {
            e1: (m5(w1), m5(a1)),
            e2: (m5(w2), m5(a2)),
        };
        if c.pairing() == 0 {
            return Err(Error::InvalidArgument(format!(
                "{c} is not a level structure"
            )));
        }
        Ok(c)
    }

    /// w1 a2 - w2 a1 mod 5.
    pub fn pairing(&self) -> u8 {
        m5(self.e1.0 as i64 * self.e2.1 as i64 - self.e2.0 as i64 * self.e1.1 as i64)
    }

    /// The datum attached to zeta_5: ((1, 0), (0, 1)).
    pub fn distinguished() -> Self {
        Self {
            e1: (1, 0),
            e2: (0, 1),
        }
    }
}

impl fmt::Display for CuspDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}), ({}, {}))",
            self.e1.0, self.e1.1, self.e2.0, self.e2.1
        )
    }
}

/// (w, a) -> (eps w + alpha a, eps a) on both basis images.
pub fn cusp_aut_action(eps: i8, alpha: u8, c: CuspDatum) -> CuspDatum {
    let act = |(w, a): (u8, u8)| {
        let (w, a, e, al) = (w as i64, a as i64, eps as i64, alpha as i64);
        (m5(e * w + al * a), m5(e * a))
    };
    CuspDatum {
        e1: act(c.e1),
        e2: act(c.e2),
    }
}

/// Precompose the level structure with g: e1 -> phi(g e1), e2 -> phi(g e2).
pub fn cusp_matrix_action(g: &Gl2Matrix, c: CuspDatum) -> Result<CuspDatum> {
    if g.ell() != 5 {
        return Err(Error::ModulusMismatch(5, g.ell()));
    }
    let [a, b, cc, d] = g.entries().map(|x| x as i64);
    let comb = |x: i64, y: i64| {
        (
            m5(x * c.e1.0 as i64 + y * c.e2.0 as i64),
            m5(x * c.e1.1 as i64 + y * c.e2.1 as i64),
        )
    };
    Ok(CuspDatum {
        e1: comb(a, cc),
        e2: comb(b, d),
    })
}

/// sigma_c : zeta_5 -> zeta_5^c scales every exponent w by c.
pub fn cusp_galois_action(c: u8, datum: CuspDatum) -> CuspDatum {
    let s = |(w, a): (u8, u8)| (m5(w as i64 * c as i64), a);
    CuspDatum {
        e1: s(datum.e1),
        e2: s(datum.e2),
    }
}

fn aut_orbit(c: CuspDatum) -> BTreeSet<CuspDatum> {
    let mut out = BTreeSet::new();
    for eps in [1i8, -1] {
        for alpha in 0..5 {
            out.insert(cusp_aut_action(eps, alpha, c));
        }
    }
    out
}

/// Closure of `c` under {+-1} x mu_5 and the given matrices.
pub fn cusp_class(c: CuspDatum, group: &[Gl2Matrix]) -> Result<BTreeSet<CuspDatum>> {
    let mut class: BTreeSet<CuspDatum> = BTreeSet::from([c]);
    let mut frontier = vec![c];
    while let Some(x) = frontier.pop() {
        let mut next: Vec<CuspDatum> = aut_orbit(x).into_iter().collect();
        for g in group {
            next.push(cusp_matrix_action(g, x)?);
        }
        for y in next {
            if class.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCheck {
    pub c: u8,
    pub image: CuspDatum,
    /// The conjugated datum lies in the {+-1} x mu_5 orbit.
    pub same_cusp_on_x5: bool,
    /// The conjugated datum lies in the class under {+-1} x mu_5 and G.
    pub class_stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspCertificate {
    pub stable: bool,
    pub distinguished: CuspDatum,
    pub aut_orbit: Vec<CuspDatum>,
    pub class_size: usize,
    pub checks: Vec<GaloisCheck>,
}

/// Stability of the distinguished cusp of X_{V4}(5) under Gal(Q(zeta_5)/Q(sqrt 5)) = {1, 4}.
pub fn cusp_galois_stability() -> CuspCertificate {
    let group = v4_preimage_mod5();
    let c0 = CuspDatum::distinguished();
    let orbit = aut_orbit(c0);
    let class = cusp_class(c0, group.elements()).expect("mod 5 matrices");
    let checks: Vec<GaloisCheck> = [1u8, 4]
        .into_iter()
        .map(|c| {
            let image = cusp_galois_action(c, c0);
            GaloisCheck {
                c,
                image,
                same_cusp_on_x5: orbit.contains(&image),
                class_stable: class.contains(&image),
            }
        })
        .collect();
    CuspCertificate {
        stable: checks.iter().all(|k| k.class_stable),
        distinguished: c0,
        aut_orbit: orbit.into_iter().collect(),
        class_size: class.len(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aut_action_examples() {
        let c = CuspDatum::distinguished();
        assert_eq!(cusp_aut_action(1, 0, c), c);
        assert_eq!(
            cusp_aut_action(-1, 0, c),
            CuspDatum::new(-1, 0, 0, -1).unwrap()
        );
        assert_eq!(aut_orbit(c).len(), 10);
    }

    #[test]
    fn matrix_action_examples() {
        let c = CuspDatum::distinguished();
        assert_eq!(cusp_matrix_action(&Gl2Matrix::identity(5), c).unwrap(), c);
        let conj = cusp_galois_action(4, c);
        assert_eq!(conj, CuspDatum::new(-1, 0, 0, 1).unwrap());
        let g = Gl2Matrix::new(-1, 0, 0, 1, 5).unwrap();
        assert_eq!(cusp_matrix_action(&g, conj).unwrap(), c);
        assert!(cusp_matrix_action(&Gl2Matrix::identity(7), c).is_err());
    }

    #[test]
    fn pairing_is_nonzero_under_all_actions() {
        let c = CuspDatum::distinguished();
        let v4 = v4_preimage_mod5();
        for x in cusp_class(c, v4.elements()).unwrap() {
            assert_ne!(x.pairing(), 0);
        }
        assert!(CuspDatum::new(1, 0, 2, 0).is_err());
    }

    #[test]
    fn stability_certificate() {
        let cert = cusp_galois_stability();
        assert!(cert.stable);
        assert!(cert.checks[0].same_cusp_on_x5);
        assert!(!cert.checks[1].same_cusp_on_x5);
        assert!(cert.checks[1].class_stable);
    }
}
