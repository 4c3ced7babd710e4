//! Simplicial meshes (triangles in 2D, tetrahedra in 3D) with a piecewise
//! constant permeability per element.

mod edges;
mod generate;
mod io;
mod locate;

pub use edges::{EdgeTable, LocalEdge, LOCAL_EDGES_TET, LOCAL_EDGES_TRI};
pub use generate::{generate_annulus_mesh, generate_structured_mesh, MeshKind};
pub use io::{read_mesh, write_mesh};
pub use locate::{LocationResult, LocationStatus, PointLocator, DEFAULT_LOCATE_TOL};

use crate::{Point, Vector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("mesh dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("node {node} has a non-finite coordinate")]
    NonFiniteNode { node: usize },
    #[error("node {node} of a 2D mesh has a non-zero z coordinate")]
    NonPlanarNode { node: usize },
    #[error("element {element} has {found} nodes, expected {expected}")]
    WrongArity { element: usize, found: usize, expected: usize },
    #[error("element {element} references node {node} but the mesh has {count} nodes")]
    NodeOutOfRange { element: usize, node: usize, count: usize },
    #[error("element {element} repeats a node")]
    RepeatedNode { element: usize },
    #[error("element {element} is degenerate (signed measure {measure:e})")]
    Degenerate { element: usize, measure: f64 },
    #[error("expected one permeability per element ({elements}), got {found}")]
    MuCount { elements: usize, found: usize },
    #[error("permeability of element {element} must be finite and strictly positive, got {value}")]
    InvalidMu { element: usize, value: f64 },
    #[error("mesh has no elements")]
    Empty,
    #[error("structured mesh needs at least one subdivision")]
    ZeroSubdivisions,
}

/// A validated simplicial mesh.
///
/// Coordinates are stored as 3-vectors; for 2D meshes the third coordinate is
/// always zero. Elements are stored flat with stride `dim + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    nodes: Vec<Point>,
    elements: Vec<usize>,
    mu: Vec<f64>,
}

/// Affine geometry of one element: barycentric gradients and the inverse map
/// used to compute barycentric coordinates of a physical point.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub dim: usize,
    pub vertices: [Point; 4],
    /// Gradient of each barycentric coordinate (first `dim + 1` used).
    pub grads: [Vector; 4],
    /// Absolute value of the Jacobian determinant of the reference map.
    pub jacobian: f64,
    /// Length, area or volume of the element.
    pub measure: f64,
}

impl ElementGeometry {
    /// Barycentric coordinates of `x`; they sum to one up to rounding.
    pub fn barycentric(&self, x: &Point) -> [f64; 4] {
        let d = self.dim;
        let p0 = self.vertices[0];
        let rel = [x[0] - p0[0], x[1] - p0[1], x[2] - p0[2]];
        let mut lambda = [0.0; 4];
        let mut tail = 0.0;
        for k in 1..=d {
            lambda[k] = dot(&self.grads[k], &rel);
            tail += lambda[k];
        }
        lambda[0] = 1.0 - tail;
        lambda
    }

    pub fn point(&self, lambda: &[f64]) -> Point {
        let mut x = [0.0; 3];
        for (a, l) in lambda.iter().enumerate().take(self.dim + 1) {
            for c in 0..3 {
                x[c] += l * self.vertices[a][c];
            }
        }
        x
    }

    pub fn centroid(&self) -> Point {
        let w = 1.0 / (self.dim + 1) as f64;
        self.point(&[w; 4][..self.dim + 1])
    }

    pub fn diameter(&self) -> f64 {
        let mut longest: f64 = 0.0;
        for a in 0..=self.dim {
            for b in a + 1..=self.dim {
                longest = longest.max(distance(&self.vertices[a], &self.vertices[b]));
            }
        }
        longest
    }
}

impl Mesh {
    /// Builds and validates a mesh. `elements` holds `dim + 1` node indices per
    /// simplex, `mu` one permeability per element.
    pub fn new(
        dim: usize,
        nodes: Vec<Point>,
        elements: Vec<Vec<usize>>,
        mu: Vec<f64>,
    ) -> Result<Self, MeshError> {
        if dim != 2 && dim != 3 {
            return Err(MeshError::InvalidDimension(dim));
        }
        let arity = dim + 1;
        let mut flat = Vec::with_capacity(elements.len() * arity);
        for (e, element) in elements.iter().enumerate() {
            if element.len() != arity {
                return Err(MeshError::WrongArity {
                    element: e,
                    found: element.len(),
                    expected: arity,
                });
            }
            flat.extend_from_slice(element);
        }
        Self::from_flat(dim, nodes, flat, mu)
    }

    pub(crate) fn from_flat(
        dim: usize,
        nodes: Vec<Point>,
        elements: Vec<usize>,
        mu: Vec<f64>,
    ) -> Result<Self, MeshError> {
        if dim != 2 && dim != 3 {
            return Err(MeshError::InvalidDimension(dim));
        }
        let mesh = Mesh {
            dim,
            nodes,
            elements,
            mu,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    fn validate(&self) -> Result<(), MeshError> {
        for (n, p) in self.nodes.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(MeshError::NonFiniteNode { node: n });
            }
            if self.dim == 2 && p[2] != 0.0 {
                return Err(MeshError::NonPlanarNode { node: n });
            }
        }
        let count = self.element_count();
        if count == 0 {
            return Err(MeshError::Empty);
        }
        if self.mu.len() != count {
            return Err(MeshError::MuCount {
                elements: count,
                found: self.mu.len(),
            });
        }
        for (e, &value) in self.mu.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(MeshError::InvalidMu { element: e, value });
            }
        }
        let scale = self.bbox_scale().max(f64::MIN_POSITIVE);
        let threshold = 1e-14 * scale.powi(self.dim as i32);
        for e in 0..count {
            let element = self.element(e);
            for (k, &node) in element.iter().enumerate() {
                if node >= self.nodes.len() {
                    return Err(MeshError::NodeOutOfRange {
                        element: e,
                        node,
                        count: self.nodes.len(),
                    });
                }
                if element[..k].contains(&node) {
                    return Err(MeshError::RepeatedNode { element: e });
                }
            }
            let measure = self.signed_measure(e);
            if measure.abs() <= threshold {
                return Err(MeshError::Degenerate {
                    element: e,
                    measure,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len() / (self.dim + 1)
    }

    pub fn element(&self, e: usize) -> &[usize] {
        let arity = self.dim + 1;
        &self.elements[e * arity..(e + 1) * arity]
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.elements.chunks_exact(self.dim + 1)
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Returns a copy with every permeability multiplied by `factor`.
    pub fn with_scaled_mu(&self, factor: f64) -> Result<Self, MeshError> {
        let mu = self.mu.iter().map(|m| m * factor).collect();
        Self::from_flat(self.dim, self.nodes.clone(), self.elements.clone(), mu)
    }

    /// Returns a copy with the permeabilities replaced.
    pub fn with_mu(&self, mu: Vec<f64>) -> Result<Self, MeshError> {
        Self::from_flat(self.dim, self.nodes.clone(), self.elements.clone(), mu)
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.nodes {
            for c in 0..3 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        if self.nodes.is_empty() {
            return ([0.0; 3], [0.0; 3]);
        }
        (lo, hi)
    }

    /// Length of the bounding-box diagonal.
    pub fn bbox_scale(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        distance(&lo, &hi)
    }

    fn edge_vectors(&self, e: usize) -> [Vector; 3] {
        let element = self.element(e);
        let p0 = self.nodes[element[0]];
        let mut cols = [[0.0; 3]; 3];
        for k in 1..=self.dim {
            let p = self.nodes[element[k]];
            cols[k - 1] = [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]];
        }
        cols
    }

    /// Signed length/area/volume of element `e`.
    pub fn signed_measure(&self, e: usize) -> f64 {
        let cols = self.edge_vectors(e);
        match self.dim {
            2 => 0.5 * (cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]),
            _ => det3(&cols) / 6.0,
        }
    }

    /// Affine geometry of element `e`. Valid meshes never contain degenerate
    /// elements, so this cannot fail after construction.
    pub fn geometry(&self, e: usize) -> ElementGeometry {
        let element = self.element(e);
        let mut vertices = [[0.0; 3]; 4];
        for (k, &n) in element.iter().enumerate() {
            vertices[k] = self.nodes[n];
        }
        let cols = self.edge_vectors(e);
        let mut grads = [[0.0; 3]; 4];
        let jacobian;
        match self.dim {
            2 => {
                let det = cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1];
                // rows of the inverse of [c0 c1]
                grads[1] = [cols[1][1] / det, -cols[1][0] / det, 0.0];
                grads[2] = [-cols[0][1] / det, cols[0][0] / det, 0.0];
                jacobian = det.abs();
            }
            _ => {
                let det = det3(&cols);
                // rows of the inverse are cross products of the columns
                let c = cols;
                grads[1] = scale(&cross(&c[1], &c[2]), 1.0 / det);
                grads[2] = scale(&cross(&c[2], &c[0]), 1.0 / det);
                grads[3] = scale(&cross(&c[0], &c[1]), 1.0 / det);
                jacobian = det.abs();
            }
        }
        for k in 1..=self.dim {
            for c in 0..3 {
                grads[0][c] -= grads[k][c];
            }
        }
        let factorial = if self.dim == 2 { 2.0 } else { 6.0 };
        ElementGeometry {
            dim: self.dim,
            vertices,
            grads,
            jacobian,
            measure: jacobian / factorial,
        }
    }
}

pub(crate) fn dot(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Vector, b: &Vector) -> Vector {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: &Vector, s: f64) -> Vector {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn distance(a: &Point, b: &Point) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    dot(&d, &d).sqrt()
}

fn det3(c: &[Vector; 3]) -> f64 {
    dot(&c[0], &cross(&c[1], &c[2]))
}
