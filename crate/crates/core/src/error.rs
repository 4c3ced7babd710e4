use crate::assembly::AssemblyError;
use crate::basis::BasisError;
use crate::fields::FieldError;
use crate::mesh::MeshError;
use crate::solver::{SolveReport, SolverError};
use crate::{ParseError, Point};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(
        "conjugate gradients did not converge: relative residual {:e} after {} iterations",
        .0.relative_residual,
        .0.iterations
    )]
    NotConverged(Box<SolveReport>),
    #[error("point ({}, {}, {}) lies outside the target mesh", .0[0], .0[1], .0[2])]
    OutsideTarget(Point),
    #[error("a probe series needs at least two samples, got {0}")]
    TooFewSamples(usize),
}
