use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify_image, ProjClassification, ProjKind};
use super::lemmas::{check_entry, Violation};
use super::{orbit_structure, saturate_with_scalars, SubgroupDesc};
use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField};
use crate::gl2::{char_poly_reducible, fixed_points, projective_line, Gl2Matrix};

/// Largest l scanned exhaustively unless overridden.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Determinants not all squares.
    Split,
    /// Determinants all squares.
    Sl2,
    All,
}

impl ScanMode {
    pub fn name(self) -> &'static str {
        match self {
            ScanMode::Split => "split",
            ScanMode::Sl2 => "sl2",
            ScanMode::All => "all",
        }
    }

    fn admits(self, in_psl: bool) -> bool {
        match self {
            ScanMode::Split => !in_psl,
            ScanMode::Sl2 => in_psl,
            ScanMode::All => true,
        }
    }
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(ScanMode::Split),
            "sl2" => Ok(ScanMode::Sl2),
            "all" => Ok(ScanMode::All),
            other => Err(Error::InvalidArgument(format!("unknown scan mode {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanStrategy {
    /// Every subgroup class of PGL_2(F_l).
    Exhaustive,
    /// Subgroups of the split-Cartan normalizer plus A4/S4/A5 candidates.
    Targeted,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub exhaustive_cap: u32,
    /// `None` picks exhaustive up to the cap and targeted above it.
    pub strategy: Option<ScanStrategy>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            strategy: None,
        }
    }
}

/// One exceptional subgroup class, stored as its scalar-saturated preimage.
#[derive(Debug, Clone)]
pub struct ExceptionalEntry {
    pub group: SubgroupDesc,
    /// Generators of the projective image (normal forms).
    pub proj_generators: Vec<Gl2Matrix>,
    pub classification: ProjClassification,
    pub orbit_sizes: Vec<usize>,
    pub min_orbit: usize,
}

#[derive(Debug, Clone)]
pub struct ExceptionalScanReport {
    pub ell: u32,
    pub mode: ScanMode,
    pub strategy: ScanStrategy,
    pub entries: Vec<ExceptionalEntry>,
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
struct GroupJson<'a> {
    order: usize,
    kind: &'a str,
    n: Option<usize>,
    proj_order: usize,
    det_squares: bool,
    orbit_sizes: &'a [usize],
    generators: Vec<[u32; 4]>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    ell: u32,
    mode: &'a str,
    strategy: ScanStrategy,
    groups: Vec<GroupJson<'a>>,
    violations: &'a [Violation],
}

impl ExceptionalScanReport {
    pub fn to_json(&self) -> serde_json::Value {
        let groups = self
            .entries
            .iter()
            .map(|e| GroupJson {
                order: e.group.order(),
                kind: e.classification.kind.name(),
                n: e.classification.n,
                proj_order: e.classification.proj_order,
                det_squares: e.classification.in_psl,
                orbit_sizes: &e.orbit_sizes,
                generators: e
                    .group
                    .generators()
                    .iter()
                    .map(Gl2Matrix::entries)
                    .collect(),
            })
            .collect();
        serde_json::to_value(ReportJson {
            ell: self.ell,
            mode: self.mode.name(),
            strategy: self.strategy,
            groups,
            violations: &self.violations,
        })
        .expect("report serializes")
    }
}

pub fn enumerate_exceptional(ell: u32, mode: ScanMode) -> Result<ExceptionalScanReport> {
    enumerate_exceptional_with(ell, mode, ScanOptions::default())
}

pub fn enumerate_exceptional_with(
    ell: u32,
    mode: ScanMode,
    opts: ScanOptions,
) -> Result<ExceptionalScanReport> {
    if !is_prime(ell as u64) {
        return Err(Error::NotPrime(ell as u64));
    }
    PrimeField::new(ell as u64)?;
    let strategy = opts.strategy.unwrap_or(if ell <= opts.exhaustive_cap {
        ScanStrategy::Exhaustive
    } else {
        ScanStrategy::Targeted
    });
    if strategy == ScanStrategy::Exhaustive && ell > opts.exhaustive_cap {
        return Err(Error::EnumerationCap {
            ell,
            cap: opts.exhaustive_cap,
        });
    }
    let images: Vec<Vec<Gl2Matrix>> = match strategy {
        ScanStrategy::Exhaustive => {
            let universe = Universe::new(ell, &pgl2_generators(ell))?;
            universe.exceptional_classes()
        }
        ScanStrategy::Targeted => {
            let normalizer = Universe::new(ell, &split_normalizer_generators(ell))?;
            let mut out = normalizer.exceptional_classes();
            out.extend(exceptional_type_candidates(ell));
            out
        }
    };

    let mut entries = Vec::new();
    for gens in images {
        let group = saturate_with_scalars(ell, &gens)?;
        let image = group.projective_image();
        let classification = classify_image(ell, &image, &group.determinants());
        if !mode.admits(classification.in_psl) {
            continue;
        }
        let orbit_sizes = orbit_structure(&group);
        let min_orbit = orbit_sizes.first().copied().unwrap_or(0);
        entries.push(ExceptionalEntry {
            group,
            proj_generators: gens,
            classification,
            orbit_sizes,
            min_orbit,
        });
    }
    entries.sort_by(|a, b| {
        (
            a.classification.proj_order,
            a.classification.kind,
            a.group.elements(),
        )
            .cmp(&(
                b.classification.proj_order,
                b.classification.kind,
                b.group.elements(),
            ))
    });
    let violations = entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| check_entry(i, e))
        .collect();
    Ok(ExceptionalScanReport {
        ell,
        mode,
        strategy,
        entries,
        violations,
    })
}

fn pgl2_generators(ell: u32) -> Vec<Gl2Matrix> {
    let g = PrimeField::new(ell as u64).unwrap().generator();
    vec![
        Gl2Matrix::from_raw([1, 1, 0, 1], ell),
        Gl2Matrix::from_raw([0, 1, 1, 0], ell),
        Gl2Matrix::diag(g, 1, ell),
    ]
}

fn split_normalizer_generators(ell: u32) -> Vec<Gl2Matrix> {
    let g = PrimeField::new(ell as u64).unwrap().generator();
    vec![
        Gl2Matrix::diag(g, 1, ell),
        Gl2Matrix::from_raw([0, 1, 1, 0], ell),
    ]
}

/// A subgroup U of PGL_2(F_l) with its multiplication table.
struct Universe {
    ell: u32,
    elems: Vec<Gl2Matrix>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    reducible: Vec<bool>,
}

impl Universe {
    fn new(ell: u32, gens: &[Gl2Matrix]) -> Result<Self> {
        let id = Gl2Matrix::identity(ell);
        let gens: Vec<Gl2Matrix> = gens.iter().map(Gl2Matrix::projective_normal_form).collect();
        let mut index: HashMap<Gl2Matrix, u32> = HashMap::from([(id, 0)]);
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in &gens {
                let y = elems[i].mul_unchecked(g).projective_normal_form();
                if !index.contains_key(&y) {
                    index.insert(y, elems.len() as u32);
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mul: Vec<u32> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let p = elems[k / n]
                    .mul_unchecked(&elems[k % n])
                    .projective_normal_form();
                index[&p]
            })
            .collect();
        let inv = elems
            .iter()
            .map(|g| index[&g.inverse().projective_normal_form()])
            .collect();
        let reducible = elems.iter().map(char_poly_reducible).collect();
        Ok(Self {
            ell,
            elems,
            mul,
            inv,
            reducible,
        })
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn m(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.len() + b as usize]
    }

    /// Closure of `gens`; `None` as soon as an element without fixed points appears.
    fn closure_reducible(&self, gens: &[u32]) -> Option<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.m(out[i], g);
                if !seen[y as usize] {
                    if !self.reducible[y as usize] {
                        return None;
                    }
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        Some(out)
    }

    fn conjugate(&self, h: &[u32], u: u32) -> Vec<u32> {
        let ui = self.inv[u as usize];
        let mut c: Vec<u32> = h.iter().map(|&x| self.m(self.m(u, x), ui)).collect();
        c.sort_unstable();
        c
    }

    fn generating_set(&self, h: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut span = vec![0u32];
        for &x in h {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure_reducible(&gens).unwrap_or_else(|| {
                    let mut all = h.to_vec();
                    all.sort_unstable();
                    all
                });
            }
        }
        gens
    }

    /// Conjugacy classes (under U) of subgroups made of elements with fixed
    /// points, built bottom-up; returns generators of the exceptional ones.
    fn exceptional_classes(&self) -> Vec<Vec<Gl2Matrix>> {
        let mut registry: HashSet<Vec<u32>> = HashSet::new();
        let mut classes: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let trivial = vec![0u32];
        registry.insert(trivial.clone());
        let mut queue = vec![(trivial, Vec::<u32>::new())];
        while let Some((h, gens)) = queue.pop() {
            let candidates: Vec<Option<(Vec<u32>, Vec<u32>)>> = (0..self.len() as u32)
                .into_par_iter()
                .map(|x| {
                    if !self.reducible[x as usize] || h.binary_search(&x).is_ok() {
                        return None;
                    }
                    let mut g = gens.clone();
                    g.push(x);
                    self.closure_reducible(&g).map(|c| (c, g))
                })
                .collect();
            for (c, g) in candidates.into_iter().flatten() {
                if registry.contains(&c) {
                    continue;
                }
                let mut canonical = c.clone();
                for u in 0..self.len() as u32 {
                    let conj = self.conjugate(&c, u);
                    if conj < canonical {
                        canonical = conj.clone();
                    }
                    registry.insert(conj);
                }
                classes.push((canonical, c.clone()));
                queue.push((c, g));
            }
        }
        classes.sort();
        classes
            .into_iter()
            .filter(|(canonical, _)| self.no_common_fixed_point(canonical))
            .map(|(canonical, _)| {
                self.generating_set(&canonical)
                    .into_iter()
                    .map(|i| self.elems[i as usize])
                    .collect()
            })
            .collect()
    }

    fn no_common_fixed_point(&self, h: &[u32]) -> bool {
        projective_line(self.ell)
            .into_iter()
            .all(|p| h.iter().any(|&x| self.elems[x as usize].act(p) != p))
    }
}

/// Involutions used to seed polyhedral searches: [[0, -1], [1, 0]] with
/// determinant 1 and [[0, v], [1, 0]] with nonsquare determinant.
fn seed_involutions(ell: u32) -> [Gl2Matrix; 2] {
    let f = PrimeField::new(ell as u64).unwrap();
    let nonsquare = (2..ell).find(|&x| !f.is_square(x)).unwrap();
    [
        Gl2Matrix::from_raw([0, ell - 1, 1, 0], ell),
        Gl2Matrix::from_raw([0, f.neg(nonsquare), 1, 0], ell),
    ]
}

/// One A4, S4 or A5 subgroup of PGL_2(F_l) generated by the involution `s`
/// and a trace-1 element of determinant 1, per type found.
fn polyhedral_from(ell: u32, s: Gl2Matrix) -> Vec<(ProjKind, [Gl2Matrix; 2], Vec<Gl2Matrix>)> {
    let f = PrimeField::new(ell as u64).unwrap();
    let mut out: Vec<(ProjKind, [Gl2Matrix; 2], Vec<Gl2Matrix>)> = Vec::new();
    for a in 0..ell {
        let d = f.sub(1, a);
        for b in 1..ell {
            let c = f.mul(f.sub(f.mul(a, d), 1), f.inv(b).unwrap());
            let r = Gl2Matrix::from_raw([a, b, c, d], ell);
            let Some(image) = small_closure(&[s, r], 60) else {
                continue;
            };
            if !matches!(image.len(), 12 | 24 | 60) {
                continue;
            }
            let kind = classify_image(ell, &image, &[]).kind;
            if matches!(kind, ProjKind::A4 | ProjKind::S4 | ProjKind::A5)
                && out.iter().all(|(k, _, _)| *k != kind)
            {
                out.push((kind, [s, r], image));
                if out.len() == 3 {
                    return out;
                }
            }
        }
    }
    out
}

/// Generators of an A4, S4 or A5 subgroup of PGL_2(F_l), preferring one
/// inside PSL_2(F_l). `None` when no such subgroup exists.
pub fn polyhedral_generators(ell: u32, kind: ProjKind) -> Option<[Gl2Matrix; 2]> {
    if ell < 5 || !is_prime(ell as u64) {
        return None;
    }
    seed_involutions(ell).into_iter().find_map(|s| {
        polyhedral_from(ell, s)
            .into_iter()
            .find(|(k, _, _)| *k == kind)
            .map(|(_, g, _)| g)
    })
}

/// Exceptional A4, S4 and A5 subgroups, one representative per type and
/// involution class.
fn exceptional_type_candidates(ell: u32) -> Vec<Vec<Gl2Matrix>> {
    if ell < 5 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in seed_involutions(ell) {
        for (_, gens, image) in polyhedral_from(ell, s) {
            let exceptional = image.iter().all(|g| !fixed_points(g).is_empty())
                && projective_line(ell)
                    .into_iter()
                    .all(|p| image.iter().any(|g| g.act(p) != p));
            if exceptional {
                out.push(gens.to_vec());
            }
        }
    }
    out
}

fn small_closure(gens: &[Gl2Matrix], cap: usize) -> Option<Vec<Gl2Matrix>> {
    let ell = gens[0].ell();
    let gens: Vec<Gl2Matrix> = gens.iter().map(Gl2Matrix::projective_normal_form).collect();
    let id = Gl2Matrix::identity(ell);
    let mut seen = HashSet::from([id]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in &gens {
            let y = out[i].mul_unchecked(g).projective_normal_form();
            if seen.insert(y) {
                if seen.len() > cap {
                    return None;
                }
                out.push(y);
            }
        }
        i += 1;
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplab::is_exceptional_group;

    #[test]
    fn nothing_at_two_and_three() {
        for ell in [2u32, 3] {
            let r = enumerate_exceptional(ell, ScanMode::All).unwrap();
            assert!(r.entries.is_empty(), "l={ell}");
        }
    }

    #[test]
    fn five_sl2_is_dihedral_dividing_eight() {
        let r = enumerate_exceptional(5, ScanMode::Sl2).unwrap();
        assert!(!r.entries.is_empty());
        for e in &r.entries {
            assert_eq!(e.classification.kind, ProjKind::Dihedral);
            assert_eq!(8 % e.classification.proj_order, 0);
            assert!(is_exceptional_group(&e.group));
        }
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(enumerate_exceptional(5, ScanMode::Split)
            .unwrap()
            .entries
            .is_empty());
    }

    #[test]
    fn seven_split_branch() {
        let r = enumerate_exceptional(7, ScanMode::All).unwrap();
        assert!(!r.entries.is_empty());
        for e in &r.entries {
            assert!(!e.classification.in_psl);
            assert_eq!(e.classification.kind, ProjKind::Dihedral);
            assert_eq!(e.classification.n, Some(3));
            assert!(e.orbit_sizes.contains(&2));
        }
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn cap_is_enforced() {
        let opts = ScanOptions {
            exhaustive_cap: 7,
            strategy: Some(ScanStrategy::Exhaustive),
        };
        assert!(matches!(
            enumerate_exceptional_with(11, ScanMode::All, opts),
            Err(Error::EnumerationCap { ell: 11, cap: 7 })
        ));
        assert!(enumerate_exceptional(9, ScanMode::All).is_err());
    }

    #[test]
    fn targeted_mode_agrees_with_exhaustive_at_eleven() {
        let ex = enumerate_exceptional(11, ScanMode::All).unwrap();
        let opts = ScanOptions {
            exhaustive_cap: 13,
            strategy: Some(ScanStrategy::Targeted),
        };
        let tg = enumerate_exceptional_with(11, ScanMode::All, opts).unwrap();
        let kinds = |r: &ExceptionalScanReport| {
            let mut v: Vec<(ProjKind, usize)> = r
                .entries
                .iter()
                .map(|e| (e.classification.kind, e.classification.proj_order))
                .collect();
            v.sort();
            v
        };
        assert_eq!(kinds(&ex), kinds(&tg));
    }

    #[test]
    fn targeted_finds_a4_at_thirteen_and_s4_at_seventy_three() {
        let opts = ScanOptions {
            exhaustive_cap: 0,
            strategy: Some(ScanStrategy::Targeted),
        };
        let r = enumerate_exceptional_with(13, ScanMode::Sl2, opts).unwrap();
        assert!(r
            .entries
            .iter()
            .any(|e| e.classification.kind == ProjKind::A4));
        let r = enumerate_exceptional_with(73, ScanMode::Sl2, opts).unwrap();
        assert!(r
            .entries
            .iter()
            .any(|e| e.classification.kind == ProjKind::S4));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
