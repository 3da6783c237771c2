use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("pseudo-division needs a divisor of positive degree in variable {var}")]
    ZeroDegreeDivisor { var: usize },
    #[error("matrix pseudo-remainder needs deg f <= 2d - 1 (deg f = {deg_f}, d = {d})")]
    MatrixPremDegree { deg_f: u32, d: u32 },
    #[error("subresultant index {j} outside 0..={max}")]
    SubresultantIndex { j: u32, max: u32 },
    #[error("subresultant of two polynomials constant in variable {var}")]
    SubresultantConstants { var: usize },
    #[error("not a triangular set: {0}")]
    NotTriangular(String),
    #[error("not a normalized chain: {0}")]
    NotNormalized(String),
    #[error("chain is not regular: leading coefficient at level {level} is a zero divisor")]
    NotRegular { level: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency fault: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
