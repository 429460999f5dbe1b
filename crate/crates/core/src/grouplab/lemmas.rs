//! Structural checks on exceptional subgroups. Violations are data.

use serde::{Deserialize, Serialize};

use super::classify::ProjKind;
use super::enumerate::{enumerate_exceptional, ExceptionalEntry, ScanMode};
use super::{is_exceptional_group, saturate_with_scalars};
use crate::error::Result;
use crate::field::PrimeField;
use crate::gl2::{proj_order, projective_line, Gl2Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Position of the offending entry in the scan report.
    pub entry: usize,
    pub check: String,
    pub detail: String,
}

fn violation(entry: usize, check: &str, detail: String) -> Violation {
    Violation {
        entry,
        check: check.to_string(),
        detail,
    }
}

/// Exceptional entries with non-square determinants, checked against the
/// dihedral / split-Cartan description.
pub fn verify_lemma_split(ell: u32) -> Result<Vec<Violation>> {
    Ok(enumerate_exceptional(ell, ScanMode::Split)?.violations)
}

/// Exceptional entries with square determinants, checked against the
/// dihedral / A4 / S4 / A5 description.
pub fn verify_lemma_sl2(ell: u32) -> Result<Vec<Violation>> {
    Ok(enumerate_exceptional(ell, ScanMode::Sl2)?.violations)
}

/// Does the group stabilize some unordered pair of distinct points of P^1?
pub(crate) fn stabilizes_pair(ell: u32, gens: &[Gl2Matrix]) -> bool {
    let line = projective_line(ell);
    for (i, &p) in line.iter().enumerate() {
        for &q in &line[i + 1..] {
            let stable = gens.iter().all(|g| {
                let (gp, gq) = (g.act(p), g.act(q));
                (gp == p && gq == q) || (gp == q && gq == p)
            });
            if stable {
                return true;
            }
        }
    }
    false
}

pub fn check_entry(index: usize, e: &ExceptionalEntry) -> Vec<Violation> {
    let ell = e.group.ell();
    let l = ell as usize;
    let cls = &e.classification;
    let mut out = Vec::new();
    if !is_exceptional_group(&e.group) {
        out.push(violation(
            index,
            "exceptional",
            "entry is not exceptional".into(),
        ));
    }
    if ell == 2 || ell == 3 {
        out.push(violation(
            index,
            "small-ell",
            format!("exceptional group at l = {ell}"),
        ));
        return out;
    }
    let in_split_normalizer = stabilizes_pair(ell, e.group.generators());
    let has_two_orbit = e.orbit_sizes.contains(&2);

    if !cls.in_psl {
        if l % 4 != 3 {
            out.push(violation(
                index,
                "ell-mod-4",
                format!("l = {ell} is not 3 mod 4"),
            ));
        }
        match (cls.kind, cls.n) {
            (ProjKind::Dihedral, Some(n)) if n > 1 && n % 2 == 1 && ((l - 1) / 2) % n == 0 => {}
            _ => out.push(violation(
                index,
                "dihedral-odd",
                format!("image {:?} with n = {:?}", cls.kind, cls.n),
            )),
        }
        if !in_split_normalizer || cls.proj_order >= 2 * (l - 1) {
            out.push(violation(
                index,
                "proper-split-cartan",
                format!(
                    "pair stabilized: {in_split_normalizer}, projective order {}",
                    cls.proj_order
                ),
            ));
        }
        if !has_two_orbit {
            out.push(violation(
                index,
                "orbit-two",
                format!("orbit sizes {:?}", e.orbit_sizes),
            ));
        }
        if let Some(bad) = cyclic_preimage_nonsquare_det(e) {
            out.push(violation(
                index,
                "cyclic-det-squares",
                format!("determinant {bad} of the cyclic preimage is not a square"),
            ));
        }
        if ((l - 1) * (l - 1)) % e.group.order() != 0 {
            out.push(violation(
                index,
                "order-divides",
                format!("|G| = {} does not divide (l-1)^2", e.group.order()),
            ));
        }
    } else {
        if l % 4 != 1 {
            out.push(violation(
                index,
                "ell-mod-4",
                format!("l = {ell} is not 1 mod 4"),
            ));
        }
        match (cls.kind, cls.n) {
            (ProjKind::Dihedral, Some(n)) => {
                if n <= 1 || (l - 1) % n != 0 {
                    out.push(violation(
                        index,
                        "dihedral-divides",
                        format!("n = {n} does not divide l - 1"),
                    ));
                }
                if !in_split_normalizer {
                    out.push(violation(
                        index,
                        "split-cartan",
                        "dihedral image not conjugate into the split-Cartan normalizer".into(),
                    ));
                }
                if !has_two_orbit {
                    out.push(violation(
                        index,
                        "orbit-two",
                        format!("orbit sizes {:?}", e.orbit_sizes),
                    ));
                }
            }
            (ProjKind::A4, _) | (ProjKind::S4, _) | (ProjKind::A5, _) => {
                let m = match cls.kind {
                    ProjKind::A4 => 12,
                    ProjKind::S4 => 24,
                    _ => 60,
                };
                if l % m != 1 {
                    out.push(violation(
                        index,
                        "congruence",
                        format!("{} image but l = {ell} is not 1 mod {m}", cls.kind.name()),
                    ));
                }
            }
            _ => out.push(violation(
                index,
                "sl2-type",
                format!("image {:?} with n = {:?}", cls.kind, cls.n),
            )),
        }
    }
    out
}

/// Determinant of the scalar-saturated preimage of a maximal cyclic subgroup
/// that fails to be a square, if any.
fn cyclic_preimage_nonsquare_det(e: &ExceptionalEntry) -> Option<u32> {
    let ell = e.group.ell();
    let n = e.classification.n? as u64;
    let c = e.group.elements().iter().find(|g| proj_order(g) == n)?;
    let preimage = saturate_with_scalars(ell, &[*c]).ok()?;
    let f = PrimeField::new(ell as u64).ok()?;
    preimage
        .determinants()
        .into_iter()
        .find(|&d| !f.is_square(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuous_branches() {
        assert!(verify_lemma_split(5).unwrap().is_empty());
        assert!(enumerate_exceptional(5, ScanMode::Split)
            .unwrap()
            .entries
            .is_empty());
        assert!(verify_lemma_sl2(7).unwrap().is_empty());
        assert!(enumerate_exceptional(7, ScanMode::Sl2)
            .unwrap()
            .entries
            .is_empty());
    }

    #[test]
    fn eleven_has_no_violations() {
        let r = enumerate_exceptional(11, ScanMode::All).unwrap();
        assert!(!r.entries.is_empty());
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn pair_stabilizer() {
        let w = Gl2Matrix::new(0, 1, 1, 0, 7).unwrap();
        assert!(stabilizes_pair(7, &[w, Gl2Matrix::diag(2, 1, 7)]));
        let u = Gl2Matrix::new(1, 1, 0, 1, 7).unwrap();
        assert!(!stabilizes_pair(7, &[u]));
    }
}
