use std::ops::{Index, IndexMut};

/// Dense `M × N` matrix stored column-major: column `j` holds every edge
/// coefficient at time node `j`, and the raw storage is `vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DofMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DofMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Wraps column-major storage. Panics if the length does not match.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "storage length must be rows * cols");
        DofMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        DofMatrix { rows, cols, data }
    }

    /// Matrix whose every column equals `column`.
    pub fn repeat_column(column: &[f64], cols: usize) -> Self {
        let mut data = Vec::with_capacity(column.len() * cols);
        for _ in 0..cols {
            data.extend_from_slice(column);
        }
        DofMatrix {
            rows: column.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Column-major storage, i.e. `vec(X)`.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.cols).map(move |j| self.data[i + j * self.rows])
    }

    pub fn frobenius_norm(&self) -> f64 {
        dot(&self.data, &self.data).sqrt()
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &DofMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        dot(&self.data, &other.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> DofMatrix {
        let data = self.data.iter().map(|v| v * factor).collect();
        DofMatrix { data, ..*self }
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, factor: f64, other: &DofMatrix) -> DofMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + factor * b)
            .collect();
        DofMatrix { data, ..*self }
    }

    /// `‖self − other‖_F / ‖other‖_F`, or the absolute difference when
    /// `other` is zero.
    pub fn relative_difference(&self, other: &DofMatrix) -> f64 {
        let diff = self.add_scaled(-1.0, other).frobenius_norm();
        let reference = other.frobenius_norm();
        if reference > 0.0 {
            diff / reference
        } else {
            diff
        }
    }

    pub fn max_abs_difference(&self, other: &DofMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for DofMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl IndexMut<(usize, usize)> for DofMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

/// Sequential dot product; the fixed summation order keeps results bitwise
/// reproducible.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_layout() {
        let x = DofMatrix::from_fn(2, 3, |i, j| (10 * i + j) as f64);
        assert_eq!(x.as_slice(), &[0.0, 10.0, 1.0, 11.0, 2.0, 12.0]);
        assert_eq!(x.column(1), &[1.0, 11.0]);
        assert_eq!(x[(1, 2)], 12.0);
        assert_eq!(x.row(1).collect::<Vec<_>>(), vec![10.0, 11.0, 12.0]);
    }

    #[test]
    fn norms_and_differences() {
        let x = DofMatrix::from_column_major(2, 1, vec![3.0, 4.0]);
        assert_eq!(x.frobenius_norm(), 5.0);
        let y = x.scaled(2.0);
        assert_eq!(y.relative_difference(&x), 1.0);
        assert_eq!(x.add_scaled(-0.5, &y), DofMatrix::zeros(2, 1));
    }
}
