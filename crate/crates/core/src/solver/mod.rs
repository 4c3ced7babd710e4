//! Matrix-free conjugate gradients for `A X B = C`, and a dense Kronecker
//! direct solve used as a test oracle.
//!
//! `X` is vectorised column by column, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

mod cg;
mod oracle;

pub use cg::{cg_solve, cg_solve_from, SolveReport};
pub use oracle::{dense_oracle_solve, ORACLE_MAX_UNKNOWNS};

use crate::assembly::{DofMatrix, SparseSymMatrix, TriDiagMatrix};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("dimension mismatch: A is {a}x{a}, B is {b}x{b}, X/C is {rows}x{cols}")]
    DimensionMismatch { a: usize, b: usize, rows: usize, cols: usize },
    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),
    #[error("maximum iteration count must be at least 1")]
    InvalidMaxIterations,
    #[error("right-hand side contains non-finite values")]
    NonFinite,
    #[error("dense oracle limited to {limit} unknowns, got {size}")]
    OracleTooLarge { size: usize, limit: usize },
    #[error("dense Kronecker matrix is singular")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    None,
    #[default]
    Jacobi,
}

impl FromStr for Preconditioner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Preconditioner::None),
            "jacobi" => Ok(Preconditioner::Jacobi),
            other => Err(format!("unknown preconditioner `{other}` (expected none or jacobi)")),
        }
    }
}

impl fmt::Display for Preconditioner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preconditioner::None => "none",
            Preconditioner::Jacobi => "jacobi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative Frobenius residual `‖A X B − C‖ / ‖C‖` at which to stop.
    pub tolerance: f64,
    /// `None` means `10 · M · N`.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            max_iterations: None,
            preconditioner: Preconditioner::Jacobi,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(SolverError::InvalidTolerance(self.tolerance));
        }
        if self.max_iterations == Some(0) {
            return Err(SolverError::InvalidMaxIterations);
        }
        Ok(())
    }

    pub fn iteration_limit(&self, unknowns: usize) -> usize {
        self.max_iterations.unwrap_or(10 * unknowns).max(1)
    }
}

fn check_shapes(a: &SparseSymMatrix, b: &TriDiagMatrix, x: &DofMatrix) -> Result<(), SolverError> {
    if x.rows() != a.dim() || x.cols() != b.dim() {
        return Err(SolverError::DimensionMismatch {
            a: a.dim(),
            b: b.dim(),
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    Ok(())
}

/// `Y = A X B`, the Kronecker operator applied to `vec(X)`.
pub fn apply_operator(a: &SparseSymMatrix, b: &TriDiagMatrix, x: &DofMatrix) -> Result<DofMatrix, SolverError> {
    check_shapes(a, b, x)?;
    let mut work = DofMatrix::zeros(x.rows(), x.cols());
    let mut y = DofMatrix::zeros(x.rows(), x.cols());
    apply_into(a, b, x, &mut work, &mut y);
    Ok(y)
}

/// Shapes are assumed checked. `work` receives `A X`.
pub(crate) fn apply_into(a: &SparseSymMatrix, b: &TriDiagMatrix, x: &DofMatrix, work: &mut DofMatrix, y: &mut DofMatrix) {
    let m = x.rows();
    if m == 0 {
        return;
    }
    work.as_mut_slice()
        .par_chunks_mut(m)
        .zip(x.as_slice().par_chunks(m))
        .for_each(|(out, col)| a.mul_vec(col, out));
    let n = x.cols();
    let (diag, off) = (b.diagonal(), b.off_diagonal());
    let ax = work.as_slice();
    y.as_mut_slice().par_chunks_mut(m).enumerate().for_each(|(j, out)| {
        let here = &ax[j * m..(j + 1) * m];
        for (i, v) in out.iter_mut().enumerate() {
            *v = diag[j] * here[i];
        }
        if j > 0 {
            let left = &ax[(j - 1) * m..j * m];
            for (i, v) in out.iter_mut().enumerate() {
                *v += off[j - 1] * left[i];
            }
        }
        if j + 1 < n {
            let right = &ax[(j + 1) * m..(j + 2) * m];
            for (i, v) in out.iter_mut().enumerate() {
                *v += off[j] * right[i];
            }
        }
    });
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use nalgebra::DMatrix;
    use rand::Rng;

    pub fn random_spd<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
        let r = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        &r * r.transpose() + DMatrix::identity(n, n) * (n as f64 * 0.1)
    }

    pub fn random_tridiag<R: Rng>(rng: &mut R, n: usize) -> TriDiagMatrix {
        // Gram matrix of hats on a random grid
        let mut times = vec![0.0];
        for _ in 1..n {
            times.push(times.last().unwrap() + rng.gen_range(0.1..2.0));
        }
        if n == 1 {
            return TriDiagMatrix::new(vec![rng.gen_range(0.5..2.0)], vec![]);
        }
        crate::assembly::assemble_temporal_gram(&crate::basis::TemporalGrid::new(times).unwrap())
    }

    pub fn random_dofs<R: Rng>(rng: &mut R, m: usize, n: usize) -> DofMatrix {
        DofMatrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0))
    }

    /// Explicit `kron(Bᵀ, A)` built entry by entry.
    pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        let (m, n) = (a.nrows(), b.nrows());
        DMatrix::from_fn(m * n, m * n, |r, c| b[(c / m, r / m)] * a[(r % m, c % m)])
    }
}
