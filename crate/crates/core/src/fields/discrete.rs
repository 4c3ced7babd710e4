use super::{check_time, FieldError, OutsidePolicy, SourceField};
use crate::assembly::DofMatrix;
use crate::basis::{whitney_oriented, TemporalGrid};
use crate::mesh::{EdgeTable, LocationResult, Mesh, PointLocator, DEFAULT_LOCATE_TOL};
use crate::{Point, Vector};

/// Field given by edge DOFs on a mesh at the nodes of a time grid:
/// Whitney interpolation in space, linear interpolation in time.
#[derive(Debug, Clone)]
pub struct DiscreteField {
    mesh: Mesh,
    edges: EdgeTable,
    grid: TemporalGrid,
    dofs: DofMatrix,
    locator: PointLocator,
}

impl DiscreteField {
    pub fn new(mesh: Mesh, grid: TemporalGrid, dofs: DofMatrix) -> Result<Self, FieldError> {
        let edges = EdgeTable::build(&mesh);
        if dofs.shape() != (edges.len(), grid.len()) {
            return Err(FieldError::DimensionMismatch {
                edges: edges.len(),
                steps: grid.len(),
                found_rows: dofs.rows(),
                found_cols: dofs.cols(),
            });
        }
        if !dofs.is_finite() {
            return Err(FieldError::NonFinite);
        }
        let locator = PointLocator::new(&mesh);
        Ok(DiscreteField {
            mesh,
            edges,
            grid,
            dofs,
            locator,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn edges(&self) -> &EdgeTable {
        &self.edges
    }

    pub fn grid(&self) -> &TemporalGrid {
        &self.grid
    }

    pub fn dofs(&self) -> &DofMatrix {
        &self.dofs
    }

    pub fn locate(&self, x: &Point) -> LocationResult {
        self.locator.locate(&self.mesh, x, DEFAULT_LOCATE_TOL)
    }

    /// Evaluates the field, applying `policy` to points outside the mesh.
    pub fn eval_with(&self, x: &Point, t: f64, policy: OutsidePolicy) -> Result<Vector, FieldError> {
        match self.eval(x, t)? {
            Some(v) => Ok(v),
            None => match policy {
                OutsidePolicy::Zero => Ok([0.0; 3]),
                OutsidePolicy::Strict => Err(FieldError::Outside(*x)),
            },
        }
    }

    fn spatial_basis(&self, x: &Point) -> Option<(usize, crate::basis::LocalEdgeValues)> {
        let location = self.locate(x);
        if location.is_outside() {
            return None;
        }
        let geometry = self.mesh.geometry(location.element);
        let w = whitney_oriented(&geometry, &self.edges, location.element, &location.barycentric);
        Some((location.element, w))
    }

    fn combine(&self, element: usize, w: &[Vector], t: f64) -> Result<Vector, FieldError> {
        let (k, s) = self.grid.locate(t)?;
        let mut h = [0.0; 3];
        for (wl, local) in w.iter().zip(self.edges.element_edges(element)) {
            let coefficient = if s == 0.0 {
                self.dofs[(local.global, k)]
            } else if s == 1.0 {
                self.dofs[(local.global, k + 1)]
            } else {
                (1.0 - s) * self.dofs[(local.global, k)] + s * self.dofs[(local.global, k + 1)]
            };
            for c in 0..3 {
                h[c] += coefficient * wl[c];
            }
        }
        Ok(h)
    }
}

impl SourceField for DiscreteField {
    fn time_span(&self) -> (f64, f64) {
        self.grid.span()
    }

    fn time_nodes(&self) -> &[f64] {
        self.grid.times()
    }

    fn bounds(&self) -> Option<(Point, Point)> {
        Some(self.mesh.bounding_box())
    }

    fn eval(&self, x: &Point, t: f64) -> Result<Option<Vector>, FieldError> {
        check_time(self.grid.span(), t)?;
        match self.spatial_basis(x) {
            Some((element, w)) => Ok(Some(self.combine(element, &w, t)?)),
            None => Ok(None),
        }
    }

    fn eval_series(&self, x: &Point, times: &[f64], out: &mut [Vector]) -> Result<bool, FieldError> {
        for &t in times {
            check_time(self.grid.span(), t)?;
        }
        let Some((element, w)) = self.spatial_basis(x) else {
            return Ok(false);
        };
        for (t, slot) in times.iter().zip(out.iter_mut()) {
            *slot = self.combine(element, &w, *t)?;
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::constant_field_dofs;
    use crate::mesh::{generate_structured_mesh, MeshKind};
    use proptest::prelude::*;

    fn square_field(n: usize, grid: TemporalGrid, dofs: impl Fn(usize, usize) -> f64) -> DiscreteField {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, n, 1.0).unwrap();
        let m = EdgeTable::build(&mesh).len();
        let dofs = DofMatrix::from_fn(m, grid.len(), dofs);
        DiscreteField::new(mesh, grid, dofs).unwrap()
    }

    #[test]
    fn constant_field_reproduced() {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 3, 1.0).unwrap();
        let edges = EdgeTable::build(&mesh);
        let c = [0.7, -1.3, 0.0];
        let column = constant_field_dofs(&mesh, &edges, &c);
        let grid = TemporalGrid::uniform(0.0, 1.0, 4).unwrap();
        let field = DiscreteField::new(mesh, grid, DofMatrix::repeat_column(&column, 4)).unwrap();
        for (x, t) in [([0.1, 0.2, 0.0], 0.0), ([0.55, 0.9, 0.0], 0.37), ([0.99, 0.01, 0.0], 1.0)] {
            let h = field.eval_with(&x, t, OutsidePolicy::Strict).unwrap();
            assert!((h[0] - c[0]).abs() < 1e-13 && (h[1] - c[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn linear_interpolation_in_time() {
        let grid = TemporalGrid::uniform(0.0, 3.0, 4).unwrap();
        let field = square_field(2, grid, |_, j| j as f64);
        let unit = square_field(2, TemporalGrid::uniform(0.0, 3.0, 4).unwrap(), |_, _| 1.0);
        let x = [0.3, 0.6, 0.0];
        let h = field.eval_with(&x, 1.5, OutsidePolicy::Strict).unwrap();
        let s = unit.eval_with(&x, 1.5, OutsidePolicy::Strict).unwrap();
        assert!((h[0] - 1.5 * s[0]).abs() < 1e-14 && (h[1] - 1.5 * s[1]).abs() < 1e-14);
    }

    #[test]
    fn zero_dofs_and_outside_policies() {
        let field = square_field(2, TemporalGrid::uniform(0.0, 1.0, 2).unwrap(), |_, _| 0.0);
        assert_eq!(field.eval_with(&[0.5, 0.5, 0.0], 0.5, OutsidePolicy::Strict).unwrap(), [0.0; 3]);
        let outside = [1.5, 0.5, 0.0];
        assert_eq!(field.eval_with(&outside, 0.5, OutsidePolicy::Zero).unwrap(), [0.0; 3]);
        assert_eq!(
            field.eval_with(&outside, 0.5, OutsidePolicy::Strict),
            Err(FieldError::Outside(outside))
        );
        assert!(matches!(
            field.eval_with(&[0.5, 0.5, 0.0], 1.5, OutsidePolicy::Zero),
            Err(FieldError::TimeOutOfSpan { .. })
        ));
    }

    #[test]
    fn nodal_time_uses_one_column() {
        // column 1 holds NaN-free values; column 2 is huge, must not leak in at t_1
        let grid = TemporalGrid::uniform(0.0, 2.0, 3).unwrap();
        let field = square_field(1, grid, |i, j| if j == 2 { 1e300 } else { (i + 1) as f64 });
        let h = field.eval_with(&[0.2, 0.3, 0.0], 1.0, OutsidePolicy::Strict).unwrap();
        assert!(h[0].abs() < 100.0 && h[1].abs() < 100.0);
    }

    #[test]
    fn tangential_continuity_across_shared_edges() {
        let field = square_field(3, TemporalGrid::uniform(0.0, 1.0, 2).unwrap(), |i, _| {
            ((i * 7919) % 13) as f64 - 6.0
        });
        let mesh = field.mesh().clone();
        let edges = field.edges().clone();
        for (e, element) in mesh.elements().enumerate() {
            for (f, other) in mesh.elements().enumerate().skip(e + 1) {
                let shared: Vec<usize> = element.iter().copied().filter(|n| other.contains(n)).collect();
                if shared.len() != 2 {
                    continue;
                }
                let (pa, pb) = (mesh.nodes()[shared[0]], mesh.nodes()[shared[1]]);
                let tangent = [pb[0] - pa[0], pb[1] - pa[1], 0.0];
                let point = [0.3 * pa[0] + 0.7 * pb[0], 0.3 * pa[1] + 0.7 * pb[1], 0.0];
                let value_in = |el: usize| {
                    let g = mesh.geometry(el);
                    let w = whitney_oriented(&g, &edges, el, &g.barycentric(&point));
                    let h = field.combine(el, &w, 0.5).unwrap();
                    h[0] * tangent[0] + h[1] * tangent[1]
                };
                assert!((value_in(e) - value_in(f)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_mismatched_dofs() {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 1, 1.0).unwrap();
        let grid = TemporalGrid::uniform(0.0, 1.0, 2).unwrap();
        let err = DiscreteField::new(mesh, grid, DofMatrix::zeros(4, 2)).unwrap_err();
        assert!(matches!(err, FieldError::DimensionMismatch { edges: 5, .. }));
    }

    proptest! {
        #[test]
        fn evaluation_is_linear_in_dofs(
            a in -3.0f64..3.0, b in -3.0f64..3.0,
            x in 0.0f64..1.0, y in 0.0f64..1.0, t in 0.0f64..1.0,
            seed in 0u64..1000,
        ) {
            let grid = TemporalGrid::new(vec![0.0, 0.3, 1.0]).unwrap();
            let f1 = |i: usize, j: usize| (((i + 3 * j) as u64 * 2654435761 + seed) % 17) as f64 - 8.0;
            let f2 = |i: usize, j: usize| (((7 * i + j) as u64 * 40503 + seed) % 11) as f64 - 5.0;
            let one = square_field(2, grid.clone(), f1);
            let two = square_field(2, grid.clone(), f2);
            let mix = square_field(2, grid, |i, j| a * f1(i, j) + b * f2(i, j));
            let p = [x, y, 0.0];
            let h1 = one.eval_with(&p, t, OutsidePolicy::Strict).unwrap();
            let h2 = two.eval_with(&p, t, OutsidePolicy::Strict).unwrap();
            let hm = mix.eval_with(&p, t, OutsidePolicy::Strict).unwrap();
            for c in 0..2 {
                prop_assert!((hm[c] - (a * h1[c] + b * h2[c])).abs() < 1e-10);
            }
        }
    }
}
