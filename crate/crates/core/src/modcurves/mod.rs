//! Genera of modular curves X_H(l), by closed form and by coset counting, and
//! the cusp bookkeeping on X(5).

mod cusps;
mod genus;

pub use cusps::{
    cusp_aut_action, cusp_class, cusp_galois_action, cusp_galois_stability, cusp_matrix_action,
    CuspCertificate, CuspDatum, GaloisCheck,
};
pub use genus::{
    finiteness_frontier, genus_closed, genus_exceptional_closed, genus_from_cosets,
    genus_from_cosets_named, genus_split_closed, named_subgroup, CurveKind, FrontierRow,
    GenusMethod, GenusReport,
};
