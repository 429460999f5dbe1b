//! Computational toolkit for the local-global principle for l-isogenies of
//! elliptic curves over number fields.

pub mod cmtools;
pub mod ellcurves;
pub mod error;
pub mod field;
pub mod gl2;
pub mod grouplab;
pub mod modcurves;
pub mod survey;

pub use cmtools::Bqf;
pub use ellcurves::{
    EllipticCurveDesc, FrobeniusData, GlobalTestResult, LocalScanReport, ModularPolynomial,
    QuadFieldElem,
};
pub use error::{Error, ModPolyError, Result};
pub use field::PrimeField;
pub use gl2::{Gl2Matrix, ProjPoint};
pub use grouplab::{ProjClassification, ProjKind, SubgroupDesc};
pub use survey::{NumberFieldDesc, SurveyVerdict};
