//! Quadrature on the reference interval, triangle and tetrahedron.
//!
//! Orders 1 and 2 use the classical symmetric rules. Higher orders use
//! collapsed (Duffy) tensor products of Gauss-Legendre rules, whose nodes are
//! computed by Newton iteration so the weights are accurate to machine
//! precision and always positive.

use super::BasisError;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dim: usize,
    order: usize,
    /// Barycentric coordinates (first `dim + 1` entries used).
    points: Vec<[f64; 4]>,
    weights: Vec<f64>,
}

pub const MAX_QUADRATURE_ORDER: usize = 6;

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Polynomial degree integrated exactly.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn points(&self) -> &[[f64; 4]] {
        &self.points
    }

    /// Weights summing to the reference measure (1, 1/2 or 1/6).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Points and weights on `[0, 1]`; only meaningful for `dim == 1`.
    pub fn interval_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().zip(&self.weights).map(|(p, &w)| (p[1], w))
    }
}

/// Quadrature rule on the reference simplex of dimension `dim` exact for
/// polynomials of degree `order`.
pub fn simplex_quadrature(dim: usize, order: usize) -> Result<QuadratureRule, BasisError> {
    if !(1..=3).contains(&dim) || !(1..=MAX_QUADRATURE_ORDER).contains(&order) {
        return Err(BasisError::UnsupportedQuadrature { dim, order });
    }
    let (points, weights) = match (dim, order) {
        (1, _) => {
            let (x, w) = gauss_legendre_unit(order / 2 + 1);
            (x.iter().map(|&x| [1.0 - x, x, 0.0, 0.0]).collect(), w)
        }
        (2, 1) => (vec![[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]], vec![0.5]),
        (2, 2) => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            (
                vec![[a, b, b, 0.0], [b, a, b, 0.0], [b, b, a, 0.0]],
                vec![1.0 / 6.0; 3],
            )
        }
        (3, 1) => (vec![[0.25; 4]], vec![1.0 / 6.0]),
        (3, 2) => {
            let sqrt5 = 5f64.sqrt();
            let a = (5.0 + 3.0 * sqrt5) / 20.0;
            let b = (5.0 - sqrt5) / 20.0;
            (
                vec![[a, b, b, b], [b, a, b, b], [b, b, a, b], [b, b, b, a]],
                vec![1.0 / 24.0; 4],
            )
        }
        _ => collapsed_rule(dim, order),
    };
    Ok(QuadratureRule {
        dim,
        order,
        points,
        weights,
    })
}

fn collapsed_rule(dim: usize, order: usize) -> (Vec<[f64; 4]>, Vec<f64>) {
    // the Duffy Jacobian adds up to dim - 1 degrees in the collapsed directions
    let n = (order + dim).div_ceil(2);
    let (x, w) = gauss_legendre_unit(n);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    if dim == 2 {
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in x.iter().enumerate() {
                let xi = u;
                let eta = v * (1.0 - u);
                points.push([1.0 - xi - eta, xi, eta, 0.0]);
                weights.push(w[i] * w[j] * (1.0 - u));
            }
        }
    } else {
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in x.iter().enumerate() {
                for (k, &s) in x.iter().enumerate() {
                    let xi = u;
                    let eta = v * (1.0 - u);
                    let zeta = s * (1.0 - u) * (1.0 - v);
                    points.push([1.0 - xi - eta - zeta, xi, eta, zeta]);
                    weights.push(w[i] * w[j] * w[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
                }
            }
        }
    }
    (points, weights)
}

/// `n`-point Gauss-Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            derivative = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        if dp != 0.0 {
            derivative = dp;
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        // x is the i-th largest root on [-1, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
