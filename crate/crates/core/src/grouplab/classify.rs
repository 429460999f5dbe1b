use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::SubgroupDesc;
use crate::field::PrimeField;
use crate::gl2::{proj_order, Gl2Matrix};

/// Isomorphism type of a subgroup of PGL_2(F_l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProjKind {
    #[serde(rename = "cyclic")]
    Cyclic,
    #[serde(rename = "dihedral")]
    Dihedral,
    #[serde(rename = "borel-reducible")]
    BorelReducible,
    A4,
    S4,
    A5,
    #[serde(rename = "psl-containing")]
    PslContaining,
}

impl ProjKind {
    pub fn name(self) -> &'static str {
        match self {
            ProjKind::Cyclic => "cyclic",
            ProjKind::Dihedral => "dihedral",
            ProjKind::BorelReducible => "borel-reducible",
            ProjKind::A4 => "A4",
            ProjKind::S4 => "S4",
            ProjKind::A5 => "A5",
            ProjKind::PslContaining => "psl-containing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjClassification {
    pub kind: ProjKind,
    /// Cyclic order, or half the order for dihedral images.
    pub n: Option<usize>,
    /// Order of the projective image.
    pub proj_order: usize,
    pub in_psl: bool,
    /// Subgroup of F_l^* generated by the determinants, sorted.
    pub det_group: Vec<u32>,
}

fn det_subgroup(ell: u32, dets: &[u32]) -> Vec<u32> {
    let f = PrimeField::new(ell as u64).expect("prime modulus");
    let mut seen: BTreeSet<u32> = BTreeSet::from([1 % ell.max(2)]);
    let mut frontier: Vec<u32> = seen.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for &d in dets {
            let y = f.mul(x, d);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn psl_order(ell: u64) -> u64 {
    if ell == 2 {
        6
    } else {
        ell * (ell * ell - 1) / 2
    }
}

/// Names the projective image of `group` following Dickson's list.
pub fn proj_classify(group: &SubgroupDesc) -> ProjClassification {
    let ell = group.ell();
    let image = group.projective_image();
    classify_image(ell, &image, &group.determinants())
}

pub(crate) fn classify_image(ell: u32, image: &[Gl2Matrix], dets: &[u32]) -> ProjClassification {
    let det_group = det_subgroup(ell, dets);
    let f = PrimeField::new(ell as u64).expect("prime modulus");
    let in_psl = det_group.iter().all(|&d| f.is_square(d));
    let order = image.len();
    let orders: Vec<u64> = image.iter().map(proj_order).collect();
    let profile: BTreeSet<u64> = orders.iter().copied().collect();
    let (kind, n) =
        if order as u64 >= psl_order(ell as u64) && order as u64 % psl_order(ell as u64) == 0 {
            (ProjKind::PslContaining, None)
        } else if orders.iter().any(|&o| o as usize == order) {
            (ProjKind::Cyclic, Some(order))
        } else if order % 2 == 0 && order >= 4 && is_dihedral(image, &orders) {
            (ProjKind::Dihedral, Some(order / 2))
        } else {
            let p: Vec<u64> = profile.iter().copied().collect();
            match (order, p.as_slice()) {
                (12, [1, 2, 3]) => (ProjKind::A4, None),
                (24, [1, 2, 3, 4]) => (ProjKind::S4, None),
                (60, [1, 2, 3, 5]) => (ProjKind::A5, None),
                _ => (ProjKind::BorelReducible, None),
            }
        };
    ProjClassification {
        kind,
        n,
        proj_order: order,
        in_psl,
        det_group,
    }
}

/// Index-2 cyclic subgroup whose complement consists of involutions.
fn is_dihedral(image: &[Gl2Matrix], orders: &[u64]) -> bool {
    let half = image.len() / 2;
    for (i, &o) in orders.iter().enumerate() {
        if o as usize != half {
            continue;
        }
        let c = image[i];
        let mut cyclic = HashSet::new();
        let mut x = c;
        for _ in 0..half {
            cyclic.insert(x.projective_normal_form());
            x = x.mul_unchecked(&c);
        }
        let complement_involutions = image
            .iter()
            .zip(orders)
            .filter(|(g, _)| !cyclic.contains(*g))
            .all(|(_, &o)| o == 2);
        if complement_involutions {
            return true;
        }
    }
    false
}
