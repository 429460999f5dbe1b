use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range")]
    ModulusOutOfRange(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("matrix is singular mod {0}")]
    Singular(u32),
    #[error("closure exceeded the size cap of {cap} elements")]
    ClosureCap { cap: usize },
    #[error("exhaustive enumeration is capped at l = {cap}, got {ell}")]
    EnumerationCap { ell: u32, cap: u32 },
    #[error("genus formula is not integral for l = {ell} ({numerator}/{denominator})")]
    NonIntegralGenus {
        ell: u64,
        numerator: i128,
        denominator: i128,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular curve (4A^3 + 27B^2 = 0)")]
    SingularCurve,
    #[error("j-invariant {0} is excluded (j = 0 and j = 1728 are not supported)")]
    ExcludedJ(String),
    #[error("q = {q} is divisible by l = {ell}")]
    PrimeAboveEll { q: u64, ell: u64 },
    #[error("modular polynomial: {0}")]
    ModPoly(#[from] ModPolyError),
    #[error("degenerate polynomial: Phi_l(j, Y) vanishes identically")]
    DegeneratePolynomial,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("the point at infinity has no affine coordinates")]
    PointAtInfinity,
    #[error("t has a pole at this point (v = 0 away from (-49, 0))")]
    TwoTorsionPole,
    #[error("denominator t^3 - 2t^2 - t + 1 vanishes")]
    CuspidalParameter,
    #[error("discriminant {0} is not valid here: {1}")]
    InvalidDiscriminant(i64, &'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModPolyError {
    #[error("io error reading {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares l = {found}, expected {expected}")]
    EllMismatch { expected: u32, found: u32 },
    #[error("symmetry violated at ({i}, {j})")]
    Symmetry { i: usize, j: usize },
    #[error("degree check failed: {0}")]
    Degree(String),
    #[error("Kronecker congruence fails at X^{i} Y^{j}")]
    Kronecker { i: usize, j: usize },
    #[error("l = {0} is not supported")]
    Unsupported(u32),
}
