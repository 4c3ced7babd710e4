use super::{apply_into, check_shapes, Preconditioner, SolverConfig, SolverError};
use crate::assembly::{dot, DofMatrix, SparseSymMatrix, TriDiagMatrix};
use std::time::Instant;

/// A converged recurrence is re-checked against the true residual; if they
/// disagree the iteration restarts from the true residual, at most this often.
const MAX_RESTARTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// True residual `‖A X B − C‖_F / ‖C‖_F` of the returned iterate.
    pub relative_residual: f64,
    pub converged: bool,
    pub wall_time: f64,
    pub preconditioner: Preconditioner,
}

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// On non-convergence the iterate with the smallest recurrence residual is
/// returned together with `converged = false`; deciding whether that is fatal
/// is up to the caller.
pub fn cg_solve(
    a: &SparseSymMatrix,
    b: &TriDiagMatrix,
    c: &DofMatrix,
    config: &SolverConfig,
) -> Result<(DofMatrix, SolveReport), SolverError> {
    cg_solve_from(a, b, c, &DofMatrix::zeros(c.rows(), c.cols()), config)
}

/// As [`cg_solve`], starting from `initial`.
pub fn cg_solve_from(
    a: &SparseSymMatrix,
    b: &TriDiagMatrix,
    c: &DofMatrix,
    initial: &DofMatrix,
    config: &SolverConfig,
) -> Result<(DofMatrix, SolveReport), SolverError> {
    let start = Instant::now();
    config.validate()?;
    check_shapes(a, b, c)?;
    check_shapes(a, b, initial)?;
    if !c.is_finite() || !initial.is_finite() {
        return Err(SolverError::NonFinite);
    }
    let (m, n) = c.shape();
    let report = |iterations, relative_residual, converged| SolveReport {
        iterations,
        relative_residual,
        converged,
        wall_time: start.elapsed().as_secs_f64(),
        preconditioner: config.preconditioner,
    };

    let c_norm = c.frobenius_norm();
    if c_norm == 0.0 {
        return Ok((DofMatrix::zeros(m, n), report(0, 0.0, true)));
    }

    let inverse_diagonal: Option<Vec<f64>> = match config.preconditioner {
        Preconditioner::None => None,
        Preconditioner::Jacobi => {
            let (da, db) = (a.diagonal(), b.diagonal());
            Some(db.iter().flat_map(|bj| da.iter().map(move |ai| 1.0 / (ai * bj))).collect())
        }
    };
    let precondition = |r: &DofMatrix, z: &mut DofMatrix| match &inverse_diagonal {
        None => z.as_mut_slice().copy_from_slice(r.as_slice()),
        Some(d) => {
            for ((zi, ri), di) in z.as_mut_slice().iter_mut().zip(r.as_slice()).zip(d) {
                *zi = ri * di;
            }
        }
    };

    let limit = config.iteration_limit(m * n);
    let mut work = DofMatrix::zeros(m, n);
    let mut q = DofMatrix::zeros(m, n);
    let mut x = initial.clone();
    let mut r = true_residual(a, b, c, &x, &mut work, &mut q);
    let mut z = DofMatrix::zeros(m, n);
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(r.as_slice(), z.as_slice());

    let mut best = x.clone();
    let mut best_norm = r.frobenius_norm();
    let mut iterations = 0;
    let mut restarts = 0;
    loop {
        let r_norm = r.frobenius_norm();
        if r_norm < best_norm {
            best_norm = r_norm;
            best.as_mut_slice().copy_from_slice(x.as_slice());
        }
        if r_norm <= config.tolerance * c_norm {
            let actual = true_residual(a, b, c, &x, &mut work, &mut q);
            let actual_norm = actual.frobenius_norm();
            if actual_norm <= config.tolerance * c_norm || restarts == MAX_RESTARTS {
                let converged = actual_norm <= config.tolerance * c_norm;
                return Ok((x, report(iterations, actual_norm / c_norm, converged)));
            }
            restarts += 1;
            r = actual;
            precondition(&r, &mut z);
            p.as_mut_slice().copy_from_slice(z.as_slice());
            rz = dot(r.as_slice(), z.as_slice());
            continue;
        }
        if iterations == limit {
            break;
        }
        apply_into(a, b, &p, &mut work, &mut q);
        let pq = dot(p.as_slice(), q.as_slice());
        if !(pq > 0.0) {
            break;
        }
        let alpha = rz / pq;
        for ((xi, ri), (pi, qi)) in x
            .as_mut_slice()
            .iter_mut()
            .zip(r.as_mut_slice())
            .zip(p.as_slice().iter().zip(q.as_slice()))
        {
            *xi += alpha * pi;
            *ri -= alpha * qi;
        }
        precondition(&r, &mut z);
        let rz_next = dot(r.as_slice(), z.as_slice());
        let beta = rz_next / rz;
        rz = rz_next;
        for (pi, zi) in p.as_mut_slice().iter_mut().zip(z.as_slice()) {
            *pi = zi + beta * *pi;
        }
        iterations += 1;
    }

    let actual = true_residual(a, b, c, &best, &mut work, &mut q).frobenius_norm();
    Ok((best, report(iterations, actual / c_norm, false)))
}

fn true_residual(
    a: &SparseSymMatrix,
    b: &TriDiagMatrix,
    c: &DofMatrix,
    x: &DofMatrix,
    work: &mut DofMatrix,
    out: &mut DofMatrix,
) -> DofMatrix {
    apply_into(a, b, x, work, out);
    c.add_scaled(-1.0, out)
}
