//! Fields, the bound l_K, and the end-to-end exceptional-pair survey.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cmtools::{cm_guard, CmGuard};
use crate::ellcurves::{
    curve_from_j_over, elkies7_j, elkies7_point_search, global_isogeny_test, local_scan,
    CurvePoint, GlobalWitness, ModularPolynomial, QuadFieldElem,
};
use crate::error::{Error, Result};
use crate::field::{is_prime, is_squarefree, primes_up_to};
use crate::grouplab::{enumerate_exceptional, ScanMode};
use crate::modcurves::{cusp_galois_stability, CuspCertificate};

pub const DEFAULT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberFieldDesc {
    pub degree: u64,
    pub disc: i64,
    /// K = Q(sqrt D) when the degree is at most 2 (D = 1 for Q).
    pub quadratic: Option<i64>,
}

impl NumberFieldDesc {
    pub fn rationals() -> Self {
        Self {
            degree: 1,
            disc: 1,
            quadratic: Some(1),
        }
    }

    /// Q(sqrt D); D = 1 gives Q.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 1 {
            return Ok(Self::rationals());
        }
        if d == 0 || !is_squarefree(d) {
            return Err(Error::InvalidArgument(format!("{d} is not squarefree")));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Self {
            degree: 2,
            disc,
            quadratic: Some(d),
        })
    }

    /// Any degree, known only through (d, Delta).
    pub fn general(degree: u64, disc: i64) -> Result<Self> {
        if degree == 0 || disc == 0 {
            return Err(Error::InvalidArgument(
                "degree and discriminant must be nonzero".into(),
            ));
        }
        if degree == 1 && disc != 1 {
            return Err(Error::InvalidArgument("Q has discriminant 1".into()));
        }
        if degree == 1 {
            return Ok(Self::rationals());
        }
        Ok(Self {
            degree,
            disc,
            quadratic: None,
        })
    }

    pub fn field_sqrt(&self) -> Option<i64> {
        self.quadratic
    }
}

/// l_K = max(|Delta|, 6d + 1).
pub fn exceptional_bound(k: &NumberFieldDesc) -> u64 {
    k.disc.unsigned_abs().max(6 * k.degree + 1)
}

/// Primes l = 3 mod 4 with 7 <= l <= 6d + 1.
pub fn prime_window(degree: u64) -> Vec<u64> {
    primes_up_to(6 * degree + 1)
        .into_iter()
        .filter(|&l| l >= 7 && l % 4 == 3)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JClass {
    Generic,
    #[serde(rename = "1728")]
    J1728,
    #[serde(rename = "0")]
    J0,
}

impl std::str::FromStr for JClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Self::Generic),
            "1728" => Ok(Self::J1728),
            "0" => Ok(Self::J0),
            _ => Err(Error::Parse(format!("unknown j class {s:?}"))),
        }
    }
}

/// Degree d' of an extension giving semistable reduction (up to twist)
/// at a prime above l. For l = 2, 3 the classes of 0 and 1728 coincide.
pub fn semistable_degree(j: JClass, ell: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    Ok(match (j, ell) {
        (JClass::Generic, _) => 1,
        (_, 2) => 12,
        (_, 3) => 6,
        (JClass::J1728, _) => 2,
        (JClass::J0, _) => 3,
    })
}

/// sqrt(l*) with l* = (-1/l) l.
pub fn ell_star(ell: u64) -> i64 {
    if ell % 4 == 1 {
        ell as i64
    } else {
        -(ell as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchTest {
    pub ell: u64,
    pub ell_star: i64,
    /// sqrt(l*) in K; for fields known only by (d, Delta) this is "l divides Delta".
    pub contains: bool,
    pub proxy: bool,
}

pub fn sqrt_branch(k: &NumberFieldDesc, ell: u64) -> Result<BranchTest> {
    if !is_prime(ell) || ell == 2 {
        return Err(Error::InvalidArgument(format!("{ell} is not an odd prime")));
    }
    let s = ell_star(ell);
    let (contains, proxy) = match k.quadratic {
        Some(d) => (d == s, false),
        None => (k.disc % ell as i64 == 0, true),
    };
    Ok(BranchTest {
        ell,
        ell_star: s,
        contains,
        proxy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    ExceptionalCandidate,
    GloballyIsogenous,
    LocallyFailing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyVerdict {
    pub ell: u64,
    pub j: QuadFieldElem,
    pub bound: u64,
    pub good_primes: usize,
    pub pass_fraction: f64,
    /// First prime ideal (p, q, a_q) whose test fails.
    pub first_failure: Option<(u64, u64, i64)>,
    pub global_over_k: bool,
    pub global_over_ext: bool,
    pub witness: Option<GlobalWitness>,
    pub classification: Classification,
    pub cm_guard: CmGuard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SurveyEntry {
    Ok(SurveyVerdict),
    Failed { j: String, error: String },
}

impl SurveyEntry {
    pub fn verdict(&self) -> Option<&SurveyVerdict> {
        match self {
            Self::Ok(v) => Some(v),
            Self::Failed { .. } => None,
        }
    }
}

pub fn survey_one(
    k: &NumberFieldDesc,
    ell: u64,
    j: &QuadFieldElem,
    bound: u64,
    phi: &ModularPolynomial,
) -> Result<SurveyVerdict> {
    let d = k
        .quadratic
        .ok_or_else(|| Error::InvalidArgument("the survey needs Q or a quadratic field".into()))?;
    if phi.ell() as u64 != ell {
        return Err(Error::ModulusMismatch(ell as u32, phi.ell()));
    }
    let e = curve_from_j_over(j, d)?;
    let scan = local_scan(&e, ell, bound)?;
    let g = global_isogeny_test(j, d, phi)?;
    let frac = scan.pass_fraction();
    let first_failure = scan.failures().next().map(|f| (f.p, f.q, f.a));
    let classification = if g.has_isogeny_over_k {
        Classification::GloballyIsogenous
    } else if scan.all_pass() {
        Classification::ExceptionalCandidate
    } else {
        Classification::LocallyFailing
    };
    Ok(SurveyVerdict {
        ell,
        j: j.clone(),
        bound,
        good_primes: scan.good,
        pass_fraction: frac,
        first_failure,
        global_over_k: g.has_isogeny_over_k,
        global_over_ext: g.has_isogeny_over_ext,
        witness: g.witness,
        classification,
        cm_guard: cm_guard(ell, k.degree)?,
    })
}

/// One verdict per j, in input order; a failing j is reported, not fatal.
pub fn survey(
    k: &NumberFieldDesc,
    ell: u64,
    js: &[QuadFieldElem],
    bound: u64,
    phi: &ModularPolynomial,
) -> Result<Vec<SurveyEntry>> {
    if !is_prime(ell) || ell > exceptional_bound(k) {
        return Err(Error::InvalidArgument(format!(
            "l = {ell} is not a prime in [2, {}]",
            exceptional_bound(k)
        )));
    }
    if k.quadratic.is_none() {
        return Err(Error::InvalidArgument(
            "the survey needs Q or a quadratic field".into(),
        ));
    }
    Ok(js
        .par_iter()
        .map(|j| match survey_one(k, ell, j, bound, phi) {
            Ok(v) => SurveyEntry::Ok(v),
            Err(e) => SurveyEntry::Failed {
                j: j.to_string(),
                error: e.to_string(),
            },
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElkiesSurvey {
    pub field: i64,
    pub height: u64,
    pub points: Vec<CurvePoint>,
    /// Points that do not map to a usable j (2-torsion poles, j = 0, 1728).
    pub skipped: Vec<(CurvePoint, String)>,
    pub entries: Vec<SurveyEntry>,
    /// Distinct j-invariants classified as exceptional candidates.
    pub candidates: Vec<QuadFieldElem>,
}

/// Points of E' up to height H, mapped to j and surveyed at l = 7.
pub fn elkies7_survey(
    field: i64,
    height: u64,
    bound: u64,
    phi7: &ModularPolynomial,
) -> Result<ElkiesSurvey> {
    let k = NumberFieldDesc::quadratic(field)?;
    let points = elkies7_point_search(field, height)?;
    let mut js: Vec<QuadFieldElem> = vec![];
    let mut skipped = vec![];
    for p in &points {
        match elkies7_j(&p.u, &p.v) {
            Ok(j) if j.is_zero() || j == QuadFieldElem::from_int(1728) => {
                skipped.push((p.clone(), Error::ExcludedJ(j.to_string()).to_string()))
            }
            Ok(j) => {
                if !js.contains(&j) {
                    js.push(j)
                }
            }
            Err(e) => skipped.push((p.clone(), e.to_string())),
        }
    }
    let entries = survey(&k, 7, &js, bound, phi7)?;
    let candidates = entries
        .iter()
        .filter_map(|e| e.verdict())
        .filter(|v| v.classification == Classification::ExceptionalCandidate)
        .map(|v| v.j.clone())
        .collect();
    Ok(ElkiesSurvey {
        field,
        height,
        points,
        skipped,
        entries,
        candidates,
    })
}

/// The curve y^2 = x^3 - 56x + 4848.
pub fn five_witness_j() -> QuadFieldElem {
    crate::ellcurves::EllipticCurveDesc::new(
        QuadFieldElem::from_int(-56),
        QuadFieldElem::from_int(4848),
    )
    .expect("nonsingular")
    .j_invariant()
    .clone()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldAtFive {
    #[serde(rename = "D")]
    pub d: i64,
    pub contains_sqrt5: bool,
    /// Exceptional pairs at 5 are possible only if sqrt 5 is in K.
    pub exceptional_possible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveReport {
    pub cusp: CuspCertificate,
    /// Exceptional subgroups at l = 5 whose determinants are not all squares.
    pub non_psl_exceptional_groups: usize,
    pub exceptional_groups: usize,
    pub witness: SurveyVerdict,
    pub fields: Vec<FieldAtFive>,
    pub holds: bool,
}

/// Cusp certificate, the sqrt 5 obstruction from the subgroup scan, and a
/// concrete candidate over Q(sqrt 5).
pub fn five_infinitude_check(
    bound: u64,
    phi5: &ModularPolynomial,
    fields: &[i64],
) -> Result<FiveReport> {
    let cusp = cusp_galois_stability();
    let scan = enumerate_exceptional(5, ScanMode::All)?;
    let non_psl = scan
        .entries
        .iter()
        .filter(|e| !e.classification.in_psl)
        .count();
    let k = NumberFieldDesc::quadratic(5)?;
    let witness = survey_one(&k, 5, &five_witness_j(), bound, phi5)?;
    let fields = fields
        .iter()
        .map(|&d| {
            let contains = d == 5;
            FieldAtFive {
                d,
                contains_sqrt5: contains,
                exceptional_possible: contains && non_psl == 0,
            }
        })
        .collect();
    let holds = cusp.stable
        && non_psl == 0
        && !scan.entries.is_empty()
        && witness.classification == Classification::ExceptionalCandidate;
    Ok(FiveReport {
        cusp,
        non_psl_exceptional_groups: non_psl,
        exceptional_groups: scan.entries.len(),
        witness,
        fields,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(exceptional_bound(&NumberFieldDesc::rationals()), 7);
        assert_eq!(
            exceptional_bound(&NumberFieldDesc::quadratic(-1).unwrap()),
            13
        );
        assert_eq!(
            exceptional_bound(&NumberFieldDesc::quadratic(5).unwrap()),
            13
        );
        assert_eq!(
            exceptional_bound(&NumberFieldDesc::general(3, -23).unwrap()),
            23
        );
        assert!(NumberFieldDesc::general(1, 5).is_err());
        assert_eq!(NumberFieldDesc::quadratic(-7).unwrap().disc, -7);
        assert_eq!(NumberFieldDesc::quadratic(2).unwrap().disc, 8);
    }

    #[test]
    fn windows() {
        assert_eq!(prime_window(1), vec![7]);
        assert_eq!(prime_window(2), vec![7, 11]);
        assert_eq!(prime_window(3), vec![7, 11, 19]);
    }

    #[test]
    fn semistable_table() {
        assert_eq!(semistable_degree(JClass::Generic, 7).unwrap(), 1);
        assert_eq!(semistable_degree(JClass::J1728, 7).unwrap(), 2);
        assert_eq!(semistable_degree(JClass::J0, 5).unwrap(), 3);
        assert_eq!(semistable_degree(JClass::J0, 3).unwrap(), 6);
        assert_eq!(semistable_degree(JClass::J0, 2).unwrap(), 12);
        assert_eq!(semistable_degree(JClass::J1728, 3).unwrap(), 6);
    }

    #[test]
    fn branch() {
        let k = NumberFieldDesc::quadratic(-7).unwrap();
        assert!(sqrt_branch(&k, 7).unwrap().contains);
        assert!(!sqrt_branch(&k, 11).unwrap().contains);
        assert!(
            sqrt_branch(&NumberFieldDesc::quadratic(5).unwrap(), 5)
                .unwrap()
                .contains
        );
        let t = sqrt_branch(&NumberFieldDesc::general(3, -23).unwrap(), 23).unwrap();
        assert!(t.contains && t.proxy);
    }
}
