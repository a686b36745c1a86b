use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root {index} of P_{degree}(q) has imaginary part {imag:e} (real part {real})")]
    RootReality {
        degree: usize,
        index: usize,
        real: f64,
        imag: f64,
    },

    #[error("roots of P_{degree}(q) are not simple: minimum gap {gap:e}")]
    RootMultiplicity { degree: usize, gap: f64 },

    #[error("equal charges (Z1 = Z2): the angular equation is a Mathieu equation and has no polynomial truncation")]
    SymmetricCase,

    #[error("branch index {branch} out of range 1..={max}")]
    BranchOutOfRange { branch: usize, max: usize },

    #[error("{coord} = {value} outside the {what} domain")]
    Domain {
        what: &'static str,
        coord: &'static str,
        value: f64,
    },

    #[error("root continuation ambiguous near R = {r} after {refinements} refinements")]
    BranchCrossing { r: f64, refinements: u32 },

    #[error("Mathieu characteristic value did not converge (truncation {truncation})")]
    Convergence { truncation: usize },

    #[error("normalization integral diverges: {0}")]
    NormalizationDivergence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root q = {0} is not rational; no exact value available")]
    InexactRoot(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
