//! Explicit subgroups of GL_2(F_l): closure, projective images, the
//! "exceptional" predicate (every element fixes a line, the group fixes none),
//! orbit structure on P^1, classification, and exhaustive scans.

mod classify;
mod enumerate;
mod lemmas;

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::gl2::{fixed_points, gl2_order, projective_line, Gl2Matrix, ProjPoint};

pub use classify::{proj_classify, ProjClassification, ProjKind};
pub use enumerate::{
    enumerate_exceptional, enumerate_exceptional_with, polyhedral_generators, ExceptionalEntry,
    ExceptionalScanReport, ScanMode, ScanOptions, ScanStrategy, DEFAULT_EXHAUSTIVE_CAP,
};
pub use lemmas::{check_entry, verify_lemma_sl2, verify_lemma_split, Violation};

/// A finite subgroup of GL_2(F_l), with its full sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDesc {
    ell: u32,
    generators: Vec<Gl2Matrix>,
    elements: Vec<Gl2Matrix>,
}

impl SubgroupDesc {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn generators(&self) -> &[Gl2Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Gl2Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Gl2Matrix) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Image in PGL_2(F_l) as sorted projective normal forms.
    pub fn projective_image(&self) -> Vec<Gl2Matrix> {
        let mut image: Vec<Gl2Matrix> = self
            .elements
            .iter()
            .map(Gl2Matrix::projective_normal_form)
            .collect();
        image.sort();
        image.dedup();
        image
    }

    /// Determinants of all elements, sorted and deduplicated.
    pub fn determinants(&self) -> Vec<u32> {
        let mut dets: Vec<u32> = self.elements.iter().map(Gl2Matrix::det).collect();
        dets.sort_unstable();
        dets.dedup();
        dets
    }
}

/// Subgroup generated by `gens`, capped at |GL_2(F_l)| elements.
pub fn closure(ell: u32, gens: &[Gl2Matrix]) -> Result<SubgroupDesc> {
    closure_capped(ell, gens, gl2_order(ell as u64) as usize)
}

/// Breadth-first product closure. Every generator must have modulus `ell`.
pub fn closure_capped(ell: u32, gens: &[Gl2Matrix], cap: usize) -> Result<SubgroupDesc> {
    if let Some(g) = gens.iter().find(|g| g.ell() != ell) {
        return Err(Error::ModulusMismatch(ell, g.ell()));
    }
    let id = Gl2Matrix::identity(ell);
    let mut seen: HashSet<Gl2Matrix> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul_unchecked(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::ClosureCap { cap });
                }
                queue.push_back(y);
            }
        }
    }
    // finite group: closure under products of generators already contains inverses
    let mut elements: Vec<Gl2Matrix> = seen.into_iter().collect();
    elements.sort();
    Ok(SubgroupDesc {
        ell,
        generators: gens.to_vec(),
        elements,
    })
}

/// Saturate by the scalar matrices: the full preimage of the projective image.
pub fn saturate_with_scalars(ell: u32, gens: &[Gl2Matrix]) -> Result<SubgroupDesc> {
    let field = crate::field::PrimeField::new(ell as u64)?;
    let mut all = gens.to_vec();
    all.push(Gl2Matrix::scalar(field.generator(), ell));
    closure(ell, &all)
}

/// Points of P^1(F_l) fixed by every element of the group.
pub fn common_fixed_points(group: &SubgroupDesc) -> Vec<ProjPoint> {
    let mut common = projective_line(group.ell);
    for g in &group.generators {
        common.retain(|&p| g.act(p) == p);
    }
    common
}

/// True iff every element fixes a point of P^1(F_l) but the group fixes none.
pub fn is_exceptional_group(group: &SubgroupDesc) -> bool {
    common_fixed_points(group).is_empty()
        && group.elements.iter().all(|g| !fixed_points(g).is_empty())
}

/// Anything whose action on P^1 is given by a list of generators.
pub trait ActsOnLine {
    fn line_ell(&self) -> u32;
    fn line_generators(&self) -> Vec<Gl2Matrix>;
}

impl ActsOnLine for Gl2Matrix {
    fn line_ell(&self) -> u32 {
        self.ell()
    }

    fn line_generators(&self) -> Vec<Gl2Matrix> {
        vec![*self]
    }
}

impl ActsOnLine for SubgroupDesc {
    fn line_ell(&self) -> u32 {
        self.ell
    }

    fn line_generators(&self) -> Vec<Gl2Matrix> {
        self.generators.clone()
    }
}

/// Orbit partition of P^1(F_l), as points grouped by orbit (sorted).
pub fn orbits<T: ActsOnLine + ?Sized>(x: &T) -> Vec<Vec<ProjPoint>> {
    orbits_of(x.line_ell(), &x.line_generators())
}

pub(crate) fn orbits_of(ell: u32, gens: &[Gl2Matrix]) -> Vec<Vec<ProjPoint>> {
    let n = ell as usize + 1;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![ProjPoint::from_index(start, ell)];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in gens {
                let q = g.act(p);
                let qi = q.index(ell);
                if !seen[qi] {
                    seen[qi] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort();
        out.push(orbit);
    }
    out
}

/// Multiset of orbit sizes on P^1(F_l), ascending.
pub fn orbit_structure<T: ActsOnLine + ?Sized>(x: &T) -> Vec<usize> {
    let mut sizes: Vec<usize> = orbits(x).iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes
}

/// Scalar-saturated preimage of the Klein four-group image mod 5.
pub fn v4_preimage_mod5() -> SubgroupDesc {
    let gens = [
        Gl2Matrix::new(0, -1, 1, 0, 5).unwrap(),
        Gl2Matrix::new(1, 0, 0, -1, 5).unwrap(),
        Gl2Matrix::new(0, 1, 1, 0, 5).unwrap(),
    ];
    saturate_with_scalars(5, &gens).unwrap()
}

/// Normalizer of the diagonal split Cartan subgroup.
pub fn split_cartan_normalizer(ell: u32) -> Result<SubgroupDesc> {
    let field = crate::field::PrimeField::new(ell as u64)?;
    let g = field.generator();
    let gens = [
        Gl2Matrix::diag(g, 1, ell),
        Gl2Matrix::diag(1, g, ell),
        Gl2Matrix::new(0, 1, 1, 0, ell)?,
    ];
    closure(ell, &gens)
}

/// Upper-triangular Borel subgroup.
pub fn borel(ell: u32) -> Result<SubgroupDesc> {
    let field = crate::field::PrimeField::new(ell as u64)?;
    let g = field.generator();
    let gens = [
        Gl2Matrix::diag(g, 1, ell),
        Gl2Matrix::diag(1, g, ell),
        Gl2Matrix::new(1, 1, 0, 1, ell)?,
    ];
    closure(ell, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::proj_order;

    #[test]
    fn closure_examples() {
        assert_eq!(closure(5, &[]).unwrap().order(), 1);
        let s = Gl2Matrix::new(0, -1, 1, 0, 5).unwrap();
        let c4 = closure(5, &[s]).unwrap();
        let mut expected = vec![Gl2Matrix::identity(5), s, Gl2Matrix::scalar(4, 5), s.pow(3)];
        expected.sort();
        assert_eq!(c4.elements(), expected.as_slice());

        let v4 = v4_preimage_mod5();
        assert_eq!(v4.order(), 16);
        let normalizer = split_cartan_normalizer(5).unwrap();
        assert_eq!(normalizer.order(), 32);
        assert!(v4.elements().iter().all(|g| normalizer.contains(g)));
    }

    #[test]
    fn closure_rejects_mixed_moduli_and_caps() {
        let s5 = Gl2Matrix::new(0, -1, 1, 0, 5).unwrap();
        assert!(closure(7, &[s5]).is_err());
        let u = Gl2Matrix::new(1, 1, 0, 1, 7).unwrap();
        assert!(matches!(
            closure_capped(7, &[u], 3),
            Err(Error::ClosureCap { cap: 3 })
        ));
    }

    #[test]
    fn exceptional_examples() {
        assert!(!is_exceptional_group(&borel(7).unwrap()));
        assert!(is_exceptional_group(&v4_preimage_mod5()));
        let s = Gl2Matrix::new(0, -1, 1, 0, 7).unwrap();
        assert!(fixed_points(&s).is_empty());
        let g = Gl2Matrix::new(1, 1, 0, 1, 7).unwrap();
        let t = Gl2Matrix::new(0, 1, 1, 0, 7).unwrap();
        let full = closure(7, &[g, t, Gl2Matrix::diag(3, 1, 7)]).unwrap();
        assert_eq!(full.order() as u64, gl2_order(7));
        assert!(full.contains(&s));
        assert!(!is_exceptional_group(&full));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_structure(&Gl2Matrix::identity(7)), vec![1; 8]);
        let f = crate::field::PrimeField::new(5).unwrap();
        let h = Gl2Matrix::diag(f.generator(), 1, 5);
        assert_eq!(proj_order(&h), 4);
        assert_eq!(orbit_structure(&h), vec![1, 1, 4]);
        assert_eq!(orbit_structure(&v4_preimage_mod5()), vec![2, 2, 2]);
    }

    #[test]
    fn orbit_count_formula_for_split_elements() {
        // diagonalizable nonscalar h: number of orbits = 2 + (l - 1)/ord(h)
        for ell in [5u32, 7, 11, 13] {
            let f = crate::field::PrimeField::new(ell as u64).unwrap();
            for x in 2..ell {
                let h = Gl2Matrix::diag(x, 1, ell);
                let ord = proj_order(&h) as usize;
                assert_eq!(orbit_structure(&h).len(), 2 + (ell as usize - 1) / ord);
                assert_eq!(ord as u64, f.order(x));
            }
        }
    }

    #[test]
    fn lagrange() {
        for ell in [3u32, 5, 7] {
            for g in [split_cartan_normalizer(ell).unwrap(), borel(ell).unwrap()] {
                assert_eq!(gl2_order(ell as u64) % g.order() as u64, 0);
            }
        }
    }
}
