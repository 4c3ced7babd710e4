use super::{check_shapes, SolverError};
use crate::assembly::{DofMatrix, SparseSymMatrix, TriDiagMatrix};
use nalgebra::{DMatrix, DVector};

pub const ORACLE_MAX_UNKNOWNS: usize = 2000;

/// Solves `A X B = C` by forming `kron(Bᵀ, A)` densely and LU-factorising it.
/// Only meant for small verification instances.
pub fn dense_oracle_solve(a: &SparseSymMatrix, b: &TriDiagMatrix, c: &DofMatrix) -> Result<DofMatrix, SolverError> {
    check_shapes(a, b, c)?;
    let (m, n) = c.shape();
    let size = m * n;
    if size > ORACLE_MAX_UNKNOWNS {
        return Err(SolverError::OracleTooLarge {
            size,
            limit: ORACLE_MAX_UNKNOWNS,
        });
    }
    if !c.is_finite() {
        return Err(SolverError::NonFinite);
    }
    let a = a.to_dense();
    // row (i, j), column (k, l) holds B_lj A_ik
    let k = DMatrix::from_fn(size, size, |r, col| b.get(col / m, r / m) * a[(r % m, col % m)]);
    let rhs = DVector::from_column_slice(c.as_slice());
    let x = k.lu().solve(&rhs).ok_or(SolverError::Singular)?;
    if !x.iter().all(|v| v.is_finite()) {
        return Err(SolverError::Singular);
    }
    Ok(DofMatrix::from_column_major(m, n, x.as_slice().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::super::apply_operator;
    use super::super::testing::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_case() {
        let a = SparseSymMatrix::from_triplets(1, vec![(0, 0, 2.0)]);
        let b = TriDiagMatrix::new(vec![3.0], vec![]);
        let x = dense_oracle_solve(&a, &b, &DofMatrix::from_column_major(1, 1, vec![12.0])).unwrap();
        assert!((x[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn identity_returns_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_dofs(&mut rng, 4, 3);
        let x = dense_oracle_solve(&SparseSymMatrix::identity(4), &TriDiagMatrix::identity(3), &c).unwrap();
        assert!(x.max_abs_difference(&c) < 1e-15);
    }

    #[test]
    fn residual_small_for_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = SparseSymMatrix::from_dense(&random_spd(&mut rng, 4));
        let b = random_tridiag(&mut rng, 3);
        let c = random_dofs(&mut rng, 4, 3);
        let x = dense_oracle_solve(&a, &b, &c).unwrap();
        let r = apply_operator(&a, &b, &x).unwrap().add_scaled(-1.0, &c);
        assert!(r.frobenius_norm() < 1e-12);
    }

    #[test]
    fn size_guard_and_singular() {
        let a = SparseSymMatrix::identity(50);
        let b = TriDiagMatrix::identity(41);
        let err = dense_oracle_solve(&a, &b, &DofMatrix::zeros(50, 41)).unwrap_err();
        assert_eq!(err, SolverError::OracleTooLarge { size: 2050, limit: 2000 });
        let zero = SparseSymMatrix::from_triplets(2, vec![(0, 0, 1.0)]);
        let err = dense_oracle_solve(&zero, &TriDiagMatrix::identity(1), &DofMatrix::zeros(2, 1)).unwrap_err();
        assert_eq!(err, SolverError::Singular);
    }
}
