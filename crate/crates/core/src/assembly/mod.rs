//! Assembly of the three matrices of the projection equation `A X B = C`:
//! the edge mass matrix `A`, the temporal Gram matrix `B` and the source
//! matrix `C`.

mod dense;
mod dump;
mod source;
mod sparse;
mod spatial;
mod temporal;

pub use dense::DofMatrix;
pub use dump::{write_dense_matrix, write_sparse_matrix, write_tridiag_matrix};
pub use source::{assemble_source_matrix, SourceAssembly};
pub use sparse::{SparseSymMatrix, TriDiagMatrix};
pub use spatial::assemble_spatial_mass;
pub use temporal::assemble_temporal_gram;

pub(crate) use dense::dot;
pub(crate) use source::{par_elements, SpaceTimeIntegrator};

use crate::basis::BasisError;
use crate::fields::FieldError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssemblyError {
    #[error("mass matrix needs a quadrature rule of order >= 2, got {0}")]
    MassQuadratureTooLow(usize),
    #[error("quadrature rule of dimension {rule} used on a {mesh}-dimensional domain")]
    QuadratureDimension { mesh: usize, rule: usize },
    #[error("target time span [{}, {}] is not inside the source span [{}, {}]", .target.0, .target.1, .available.0, .available.1)]
    SpanNotCovered { target: (f64, f64), available: (f64, f64) },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
