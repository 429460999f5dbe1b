use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, legendre, PrimeField};
use crate::gl2::Gl2Matrix;
use crate::grouplab::{polyhedral_generators, ProjKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    #[serde(rename = "split")]
    SplitNormalizer,
    A4,
    S4,
    A5,
    #[serde(rename = "borel")]
    Borel,
    #[serde(rename = "psl")]
    Full,
    #[serde(rename = "custom")]
    Custom,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::SplitNormalizer => "split",
            CurveKind::A4 => "A4",
            CurveKind::S4 => "S4",
            CurveKind::A5 => "A5",
            CurveKind::Borel => "borel",
            CurveKind::Full => "psl",
            CurveKind::Custom => "custom",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(CurveKind::SplitNormalizer),
            "A4" | "a4" => Ok(CurveKind::A4),
            "S4" | "s4" => Ok(CurveKind::S4),
            "A5" | "a5" => Ok(CurveKind::A5),
            "borel" => Ok(CurveKind::Borel),
            "psl" => Ok(CurveKind::Full),
            other => Err(Error::InvalidArgument(format!(
                "unknown curve kind {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenusMethod {
    Closed,
    Cosets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub ell: u64,
    pub kind: CurveKind,
    pub method: GenusMethod,
    pub mu: Option<u64>,
    pub nu2: Option<u64>,
    pub nu3: Option<u64>,
    pub nu_inf: Option<u64>,
    pub genus: i64,
}

fn exact_div(ell: u64, numerator: i128, denominator: i128) -> Result<i64> {
    if numerator % denominator != 0 {
        return Err(Error::NonIntegralGenus {
            ell,
            numerator,
            denominator,
        });
    }
    Ok((numerator / denominator) as i64)
}

fn check_prime(ell: u64, min: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell < min {
        return Err(Error::InvalidArgument(format!(
            "l = {ell} must be at least {min}"
        )));
    }
    Ok(())
}

/// (l^2 - 8l + 11 - 4 (-3/l)) / 24.
pub fn genus_split_closed(ell: u64) -> Result<i64> {
    check_prime(ell, 5)?;
    let l = ell as i128;
    let num = l * l - 8 * l + 11 - 4 * legendre(-3, ell) as i128;
    exact_div(ell, num, 24)
}

pub fn genus_exceptional_closed(ell: u64, kind: CurveKind) -> Result<i64> {
    check_prime(ell, 5)?;
    let l = ell as i128;
    let e2: i128 = if ell % 4 == 1 { 1 } else { -1 };
    let e3: i128 = if ell % 3 == 1 { 1 } else { -1 };
    let cube = l * l * l - 6 * l * l;
    let (num, den) = match kind {
        CurveKind::A4 => (cube - 51 * l + 294 + 18 * e2 + 32 * e3, 288),
        CurveKind::S4 => (cube - 87 * l + 582 + 54 * e2 + 32 * e3, 576),
        CurveKind::A5 => (cube - 171 * l + 1446 + 90 * e2 + 80 * e3, 1440),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no exceptional closed form for {}",
                other.name()
            )))
        }
    };
    exact_div(ell, num, den)
}

pub fn genus_closed(ell: u64, kind: CurveKind) -> Result<GenusReport> {
    let genus = match kind {
        CurveKind::SplitNormalizer => genus_split_closed(ell)?,
        CurveKind::A4 | CurveKind::S4 | CurveKind::A5 => genus_exceptional_closed(ell, kind)?,
        CurveKind::Borel | CurveKind::Full => {
            return Err(Error::InvalidArgument(format!(
                "no closed form for {}; use the coset method",
                kind.name()
            )))
        }
        CurveKind::Custom => {
            return Err(Error::InvalidArgument(
                "custom subgroups need cosets".into(),
            ))
        }
    };
    Ok(GenusReport {
        ell,
        kind,
        method: GenusMethod::Closed,
        mu: None,
        nu2: None,
        nu3: None,
        nu_inf: None,
        genus,
    })
}

/// Generators in PGL_2(F_l) of the named subgroup.
pub fn named_subgroup(ell: u32, kind: CurveKind) -> Result<Vec<Gl2Matrix>> {
    let f = PrimeField::new(ell as u64)?;
    let g = f.generator();
    let gens = match kind {
        CurveKind::SplitNormalizer => {
            vec![Gl2Matrix::diag(g, 1, ell), Gl2Matrix::new(0, 1, 1, 0, ell)?]
        }
        CurveKind::Borel => vec![Gl2Matrix::diag(g, 1, ell), Gl2Matrix::new(1, 1, 0, 1, ell)?],
        CurveKind::Full => vec![
            Gl2Matrix::new(1, 1, 0, 1, ell)?,
            Gl2Matrix::new(0, -1, 1, 0, ell)?,
        ],
        CurveKind::A4 | CurveKind::S4 | CurveKind::A5 => {
            let pk = match kind {
                CurveKind::A4 => ProjKind::A4,
                CurveKind::S4 => ProjKind::S4,
                _ => ProjKind::A5,
            };
            polyhedral_generators(ell, pk)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "PGL_2(F_{ell}) has no {} subgroup",
                        kind.name()
                    ))
                })?
                .to_vec()
        }
        CurveKind::Custom => {
            return Err(Error::InvalidArgument(
                "custom kind has no fixed subgroup".into(),
            ))
        }
    };
    Ok(gens)
}

/// Elements of PSL_2(F_l) as determinant-1 matrices normalized modulo -I.
struct Psl2 {
    ell: u32,
    f: PrimeField,
}

impl Psl2 {
    fn normalize(&self, m: [u32; 4]) -> [u32; 4] {
        let first = m.iter().copied().find(|&x| x != 0).unwrap();
        if first * 2 > self.ell {
            m.map(|x| self.f.neg(x))
        } else {
            m
        }
    }

    fn key(m: [u32; 4]) -> u64 {
        m.iter().fold(0u64, |acc, &x| (acc << 16) | x as u64)
    }

    fn mul(&self, x: [u32; 4], y: [u32; 4]) -> [u32; 4] {
        let f = &self.f;
        self.normalize([
            f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
            f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
            f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
            f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
        ])
    }

    fn elements(&self) -> Vec<[u32; 4]> {
        let l = self.ell;
        let f = &self.f;
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    let ds: Vec<u32> = if a != 0 {
                        vec![f.mul(f.add(1, f.mul(b, c)), f.inv(a).unwrap())]
                    } else if f.mul(b, c) == l - 1 {
                        (0..l).collect()
                    } else {
                        Vec::new()
                    };
                    for d in ds {
                        let m = self.normalize([a, b, c, d]);
                        if seen.insert(Self::key(m)) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Lift of a PGL_2 element with square determinant.
    fn lift(&self, g: &Gl2Matrix) -> Option<[u32; 4]> {
        let det = g.det();
        if !self.f.is_square(det) {
            return None;
        }
        let r = crate::field::sqrt_mod(det as u64, self.ell as u64)? as u32;
        let s = self.f.inv(r)?;
        Some(self.normalize(g.entries().map(|x| self.f.mul(x, s))))
    }
}

/// Genus of X_H for H = <gens> in PGL_2(F_l), computed on the right cosets of
/// H cap PSL_2(F_l) in PSL_2(F_l).
pub fn genus_from_cosets(ell: u32, gens: &[Gl2Matrix], kind: CurveKind) -> Result<GenusReport> {
    let f = PrimeField::new(ell as u64)?;
    if let Some(g) = gens.iter().find(|g| g.ell() != ell) {
        return Err(Error::ModulusMismatch(ell, g.ell()));
    }
    let psl = Psl2 { ell, f };

    // projective closure of H, then its square-determinant part lifted to PSL_2
    let id = Gl2Matrix::identity(ell);
    let mut h_seen = HashSet::from([id]);
    let mut h_elems = vec![id];
    let mut i = 0;
    while i < h_elems.len() {
        for g in gens {
            let y = h_elems[i].mul_unchecked(g).projective_normal_form();
            if h_seen.insert(y) {
                h_elems.push(y);
            }
        }
        i += 1;
    }
    let hbar: Vec<[u32; 4]> = h_elems.iter().filter_map(|g| psl.lift(g)).collect();

    let elements = psl.elements();
    let index: HashMap<u64, u32> = elements
        .iter()
        .enumerate()
        .map(|(k, m)| (Psl2::key(*m), k as u32))
        .collect();
    let unassigned = u32::MAX;
    let mut coset_of = vec![unassigned; elements.len()];
    let mut reps: Vec<[u32; 4]> = Vec::new();
    for (k, g) in elements.iter().enumerate() {
        if coset_of[k] != unassigned {
            continue;
        }
        let id = reps.len() as u32;
        for h in &hbar {
            coset_of[index[&Psl2::key(psl.mul(*h, *g))] as usize] = id;
        }
        reps.push(*g);
    }
    let mu = reps.len();

    let perm = |x: [u32; 4]| -> Vec<u32> {
        let x = psl.normalize(x);
        reps.iter()
            .map(|g| coset_of[index[&Psl2::key(psl.mul(*g, x))] as usize])
            .collect()
    };
    let s = perm([0, ell - 1, 1, 0]);
    let r = perm([0, ell - 1, 1, 1]);
    let t = perm([1, 1, 0, 1]);
    let fixed = |p: &[u32]| {
        p.iter()
            .enumerate()
            .filter(|(k, &v)| *k as u32 == v)
            .count() as u64
    };
    let nu2 = fixed(&s);
    let nu3 = fixed(&r);
    let mut seen = vec![false; mu];
    let mut nu_inf = 0u64;
    for start in 0..mu {
        if seen[start] {
            continue;
        }
        nu_inf += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = t[k] as usize;
        }
    }
    let num = 12 + mu as i128 - 3 * nu2 as i128 - 4 * nu3 as i128 - 6 * nu_inf as i128;
    let genus = exact_div(ell as u64, num, 12)?;
    Ok(GenusReport {
        ell: ell as u64,
        kind,
        method: GenusMethod::Cosets,
        mu: Some(mu as u64),
        nu2: Some(nu2),
        nu3: Some(nu3),
        nu_inf: Some(nu_inf),
        genus,
    })
}

pub fn genus_from_cosets_named(ell: u32, kind: CurveKind) -> Result<GenusReport> {
    genus_from_cosets(ell, &named_subgroup(ell, kind)?, kind)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierRow {
    pub ell: u64,
    pub split_genus: i64,
    pub a4_genus: Option<i64>,
    pub s4_genus: Option<i64>,
    pub a5_genus: Option<i64>,
    pub certified: bool,
}

/// Genera of the split-normalizer curve, and of the A4/S4/A5 curves where
/// l = 1 mod 12/24/60, for primes 11 <= l <= ell_max.
pub fn finiteness_frontier(ell_max: u64) -> Result<Vec<FrontierRow>> {
    let mut rows = Vec::new();
    for ell in crate::field::primes_up_to(ell_max)
        .into_iter()
        .filter(|&l| l >= 11)
    {
        let split_genus = genus_split_closed(ell)?;
        let opt = |m: u64, k: CurveKind| -> Result<Option<i64>> {
            if ell % m == 1 {
                genus_exceptional_closed(ell, k).map(Some)
            } else {
                Ok(None)
            }
        };
        let a4_genus = opt(12, CurveKind::A4)?;
        let s4_genus = opt(24, CurveKind::S4)?;
        let a5_genus = opt(60, CurveKind::A5)?;
        let certified = split_genus >= 2
            && [a4_genus, s4_genus, a5_genus]
                .iter()
                .flatten()
                .all(|&g| g >= 2);
        rows.push(FrontierRow {
            ell,
            split_genus,
            a4_genus,
            s4_genus,
            a5_genus,
            certified,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_closed_examples() {
        assert_eq!(genus_split_closed(7).unwrap(), 0);
        assert_eq!(genus_split_closed(11).unwrap(), 2);
        assert_eq!(genus_split_closed(13).unwrap(), 3);
        assert!(genus_split_closed(3).is_err());
        assert!(genus_split_closed(15).is_err());
    }

    #[test]
    fn exceptional_closed_examples() {
        assert_eq!(genus_exceptional_closed(13, CurveKind::A4).unwrap(), 3);
        assert_eq!(genus_exceptional_closed(73, CurveKind::S4).unwrap(), 610);
        assert_eq!(genus_exceptional_closed(61, CurveKind::A5).unwrap(), 136);
        assert!(matches!(
            genus_exceptional_closed(7, CurveKind::A5),
            Err(Error::NonIntegralGenus { .. })
        ));
    }

    #[test]
    fn coset_examples() {
        let full = genus_from_cosets_named(7, CurveKind::Full).unwrap();
        assert_eq!((full.mu, full.genus), (Some(1), 0));
        let x0 = genus_from_cosets_named(7, CurveKind::Borel).unwrap();
        assert_eq!((x0.mu, x0.nu_inf, x0.genus), (Some(8), Some(2), 0));
        let x0_11 = genus_from_cosets_named(11, CurveKind::Borel).unwrap();
        assert_eq!(x0_11.genus, 1);
        let sp = genus_from_cosets_named(11, CurveKind::SplitNormalizer).unwrap();
        assert_eq!(sp.genus, 2);
    }

    #[test]
    fn reports_satisfy_integer_identity() {
        for ell in [5u32, 7, 11, 13, 17] {
            for kind in [CurveKind::SplitNormalizer, CurveKind::Borel] {
                let r = genus_from_cosets_named(ell, kind).unwrap();
                let lhs = 12 * (r.genus - 1)
                    + 3 * r.nu2.unwrap() as i64
                    + 4 * r.nu3.unwrap() as i64
                    + 6 * r.nu_inf.unwrap() as i64;
                assert_eq!(lhs, r.mu.unwrap() as i64);
            }
        }
    }

    #[test]
    fn frontier_starts_at_eleven() {
        let rows = finiteness_frontier(13).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].ell, rows[0].split_genus), (11, 2));
        assert_eq!((rows[1].split_genus, rows[1].a4_genus), (3, Some(3)));
        assert!(rows.iter().all(|r| r.certified));
    }
}
