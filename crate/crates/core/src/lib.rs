//! Space-time Galerkin projection of vector fields.
//!
//! A field known on a *source* mesh and time grid is transferred to a
//! *target* mesh and time grid by minimising the permeability-weighted
//! space-time error
//!
//! ```text
//! ε = ∫_T ∫_D (μ/2) ‖H_target − H_source‖²
//! ```
//!
//! over the tensor-product space of lowest-order Whitney edge functions (in
//! space) and piecewise-linear hat functions (in time). The stationarity
//! conditions give the matrix equation `A X B = C` with the edge mass matrix
//! `A`, the temporal Gram matrix `B` and the source matrix `C`; it is solved
//! matrix-free with conjugate gradients on `(Bᵀ ⊗ A) vec(X) = vec(C)`.
//!
//! ```
//! use stgp::prelude::*;
//!
//! let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 4, 1.0).unwrap();
//! let edges = EdgeTable::build(&mesh);
//! let grid = TemporalGrid::uniform(0.0, 1.0, 5).unwrap();
//! let source = AnalyticField::Constant([1.0, -2.0, 0.0]);
//!
//! let problem = ProjectionProblem::new(&mesh, &edges, &grid, &source);
//! let result = project(&problem).unwrap();
//! assert!(result.diagnostics.relative_error < 1e-8);
//! ```
//!
//! The guide in `book/` walks through the method chapter by chapter.

pub mod assembly;
pub mod basis;
pub mod fields;
pub mod mesh;
pub mod projection;
pub mod solver;
mod error;
mod text;

pub use error::Error;
pub use text::ParseError;

/// Physical point. Two-dimensional meshes keep the third coordinate at zero.
pub type Point = [f64; 3];
/// Field value; components beyond the mesh dimension are zero.
pub type Vector = [f64; 3];

pub mod prelude {
    pub use crate::assembly::{
        assemble_source_matrix, assemble_spatial_mass, assemble_temporal_gram, DofMatrix,
        SparseSymMatrix, TriDiagMatrix,
    };
    pub use crate::basis::{constant_field_dofs, simplex_quadrature, QuadratureRule, TemporalGrid};
    pub use crate::fields::{
        read_field, write_field, AnalyticField, DiscreteField, FnField, OutsidePolicy, SourceField,
    };
    pub use crate::mesh::{
        generate_annulus_mesh, generate_structured_mesh, read_mesh, write_mesh, EdgeTable, Mesh,
        MeshKind, PointLocator,
    };
    pub use crate::projection::{
        error_norm, eval_projected, probe_timeseries, project, project_with, ProjectionProblem,
        ProjectionResult, ProjectionSettings,
    };
    pub use crate::solver::{
        apply_operator, cg_solve, dense_oracle_solve, Preconditioner, SolveReport, SolverConfig,
    };
    pub use crate::{Error, Point, Vector};
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/space-time-projection.md")]
    mod space_time_projection {}
    #[doc = include_str!("../../../book/src/edge-elements.md")]
    mod edge_elements {}
    #[doc = include_str!("../../../book/src/temporal-basis.md")]
    mod temporal_basis {}
    #[doc = include_str!("../../../book/src/kronecker-solver.md")]
    mod kronecker_solver {}
    #[doc = include_str!("../../../book/src/source-fields.md")]
    mod source_fields {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/file-formats.md")]
    mod file_formats {}
}
