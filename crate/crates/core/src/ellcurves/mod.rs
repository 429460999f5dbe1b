//! Elliptic curves over Q and quadratic fields: point counts, local and global
//! isogeny tests, modular polynomials.

pub mod curve;
pub mod elkies;
pub mod frobenius;
pub mod global;
pub mod modpoly;
pub mod poly;
pub mod quadfield;

pub use curve::{curve_from_j, curve_from_j_over, quadratic_twist, EllipticCurveDesc};
pub use elkies::{
    elkies7_j, elkies7_j_of_t, elkies7_j_point, elkies7_point_search, elkies7_t, on_elkies_curve,
    CurvePoint,
};
pub use frobenius::{
    count_points_fp, count_points_fp2, local_isogeny_test, local_scan, reduce_and_count,
    FrobeniusData, LocalScanReport, PrimeReduction, ScanEntry, SkippedPrime,
};
pub use global::{global_isogeny_test, global_isogeny_test_ext, GlobalTestResult, GlobalWitness};
pub use modpoly::{
    default_modpoly_dir, load_modular_polynomial, modpoly_path, ModularPolynomial, SUPPORTED_ELLS,
};
pub use quadfield::QuadFieldElem;
