use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("precision exhausted in {context}: need t-precision {needed}, have {available}")]
    PrecisionExhausted {
        context: String,
        needed: i64,
        available: i64,
    },
    #[error("non-integral element{}", match .t_exponent { Some(e) => alloc::format!(" at t^{}", e), None => String::new() })]
    NonIntegral { t_exponent: Option<i64> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not invertible to the available precision")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDataError {
    #[error("invalid root system {label}{rank}: valid types are A_n (n>=1), B_n (n>=2), C_n (n>=3), D_n (n>=4), E_6, E_7, E_8, F_4, G_2")]
    InvalidType { label: char, rank: usize },
    #[error("simple root index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("beta = alpha_{0} lies in the Levi subset")]
    BetaInLevi(usize),
    #[error("parabolic is not maximal: the Levi must contain every simple root except beta")]
    NotMaximal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("matrix is not square of size {0}")]
    Shape(usize),
    #[error("cocycle is not invertible: {0}")]
    NotInvertible(String),
    #[error("determinant is not 1 for an SL cocycle")]
    NotSpecialLinear,
    #[error("entry ({row}, {col}) is not integral over the valuation ring (at t^{t_exponent})")]
    NonIntegralEntry {
        row: usize,
        col: usize,
        t_exponent: i64,
    },
    #[error("operation requires a cocycle over a field, got base {0}")]
    WrongBase(&'static str),
    #[error("cochain is not a coboundary for twist {twist}: class {class:?}")]
    NotCoboundary { twist: i64, class: Vec<String> },
    #[error("Birkhoff certificate failed: {0}")]
    Certificate(String),
}

impl BundleError {
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(
            self,
            BundleError::Algebra(AlgebraError::PrecisionExhausted { .. })
        )
    }
}
