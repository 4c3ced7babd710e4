use nalgebra::DMatrix;

/// Symmetric sparse matrix in compressed-row form.
///
/// Both triangles are stored so a row-wise product needs no transposed pass;
/// constructors guarantee structural symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds from `(row, col, value)` triplets of the *full* matrix.
    /// Duplicates are summed in input order, so equal inputs give bitwise
    /// equal matrices. Missing mirror entries are not added: callers pass
    /// both `(i, j)` and `(j, i)`.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside a {n}x{n} matrix");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSymMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect())
    }

    /// Keeps the entries of a dense symmetric matrix that are non-zero.
    pub fn from_dense(dense: &DMatrix<f64>) -> Self {
        assert_eq!(dense.nrows(), dense.ncols());
        let n = dense.nrows();
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = 0.5 * (dense[(i, j)] + dense[(j, i)]);
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, triplets)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries (both triangles).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut sum = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                sum += self.values[k] * x[self.col_idx[k]];
            }
            *yi = sum;
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SparseSymMatrix {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut dense = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                dense[(i, j)] = v;
            }
        }
        dense
    }

    /// Largest `|a_ij − a_ji|` relative to the largest magnitude entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst / scale
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagMatrix {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TriDiagMatrix {
    /// `off[j]` is the entry at `(j, j + 1)` and `(j + 1, j)`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty() && off.len() + 1 == diag.len(), "off-diagonal must have n - 1 entries");
        TriDiagMatrix { diag, off }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![1.0; n], vec![0.0; n.saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.off[i]
        } else if j + 1 == i {
            self.off[j]
        } else {
            0.0
        }
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        assert!(x.len() == n && y.len() == n);
        for i in 0..n {
            let mut sum = self.diag[i] * x[i];
            if i > 0 {
                sum += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                sum += self.off[i] * x[i + 1];
            }
            y[i] = sum;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.get(i, j))
    }
}
