//! Spatial and temporal bases: Whitney edge functions, temporal hat
//! functions and the quadrature rules used to integrate them.

mod quadrature;
mod temporal;
mod whitney;

pub use quadrature::{simplex_quadrature, QuadratureRule, MAX_QUADRATURE_ORDER};
pub use temporal::TemporalGrid;
pub use whitney::{constant_field_dofs, whitney_edge_eval, whitney_local, LocalEdgeValues};

pub(crate) use whitney::whitney_oriented;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("a temporal grid needs at least two nodes, got {0}")]
    GridTooShort(usize),
    #[error("time node {0} is not finite")]
    NonFiniteTime(usize),
    #[error("time nodes must be strictly increasing (node {0} does not exceed its predecessor)")]
    NonMonotoneTime(usize),
    #[error("time {t} outside the grid span [{start}, {end}]")]
    TimeOutOfSpan { t: f64, start: f64, end: f64 },
    #[error("time node {index} out of range (grid has {count} nodes)")]
    NodeOutOfRange { index: usize, count: usize },
    #[error("no quadrature rule of order {order} in dimension {dim} (orders 1..=6, dimensions 1..=3)")]
    UnsupportedQuadrature { dim: usize, order: usize },
}
