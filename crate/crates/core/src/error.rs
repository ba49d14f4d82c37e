use thiserror::Error;

use crate::simplex::RealizationClass;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix is singular (|det| = {det:e} below threshold {threshold:e})")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error("distance argument {argument} outside the valid range for the {geometry} formula")]
    DomainError { argument: f64, geometry: &'static str },

    #[error("vertex {vertex}: submatrix signature ({positive},{negative},{zero}) is not proper, ideal or outer")]
    AmbiguousSignature {
        vertex: usize,
        positive: usize,
        negative: usize,
        zero: usize,
    },

    #[error("no gains in the search schedule give a contraction (best norm {best_norm})")]
    NoContraction { best_norm: f64 },

    #[error("parameters of class {0:?} are not solved by the edge-condition solver")]
    InvalidClass(RealizationClass),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
