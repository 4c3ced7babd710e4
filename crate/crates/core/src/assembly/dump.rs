//! `stgp-matrix` debug dumps.
//!
//! ```text
//! stgp-matrix 1
//! kind sparse-sym        # or tridiag, dense
//! dim 16 nnz 58          # `dim N` for tridiag, `rows M cols N` for dense
//! 0 0 0.3333333333333333 # upper-triangle triplets, or one line per dense row
//! ```

use super::{DofMatrix, SparseSymMatrix, TriDiagMatrix};
use crate::text::write_real;
use std::fmt::Write as _;

pub fn write_sparse_matrix(a: &SparseSymMatrix) -> String {
    let upper: Vec<(usize, usize, f64)> = (0..a.dim())
        .flat_map(|i| a.row(i).filter(move |&(j, _)| j >= i).map(move |(j, v)| (i, j, v)))
        .collect();
    let mut out = format!("stgp-matrix 1\nkind sparse-sym\ndim {} nnz {}\n", a.dim(), upper.len());
    for (i, j, v) in upper {
        let _ = write!(out, "{i} {j} ");
        write_real(&mut out, v);
        out.push('\n');
    }
    out
}

pub fn write_tridiag_matrix(b: &TriDiagMatrix) -> String {
    let mut out = format!("stgp-matrix 1\nkind tridiag\ndim {}\n", b.dim());
    for i in 0..b.dim() {
        let _ = write!(out, "{i} {i} ");
        write_real(&mut out, b.diagonal()[i]);
        out.push('\n');
        if i + 1 < b.dim() {
            let _ = write!(out, "{i} {} ", i + 1);
            write_real(&mut out, b.off_diagonal()[i]);
            out.push('\n');
        }
    }
    out
}

pub fn write_dense_matrix(c: &DofMatrix) -> String {
    let mut out = format!("stgp-matrix 1\nkind dense\nrows {} cols {}\n", c.rows(), c.cols());
    for i in 0..c.rows() {
        for (j, v) in c.row(i).enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write_real(&mut out, v);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dumps_have_expected_shape() {
        let b = TriDiagMatrix::new(vec![1.0, 2.0], vec![0.5]);
        assert_eq!(write_tridiag_matrix(&b), "stgp-matrix 1\nkind tridiag\ndim 2\n0 0 1\n0 1 0.5\n1 1 2\n");
        let a = SparseSymMatrix::from_triplets(2, vec![(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)]);
        assert_eq!(write_sparse_matrix(&a), "stgp-matrix 1\nkind sparse-sym\ndim 2 nnz 3\n0 0 2\n0 1 -1\n1 1 2\n");
        let c = DofMatrix::from_fn(2, 2, |i, j| (i + 2 * j) as f64);
        assert_eq!(write_dense_matrix(&c), "stgp-matrix 1\nkind dense\nrows 2 cols 2\n0 2\n1 3\n");
    }
}
