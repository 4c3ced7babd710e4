use super::temporal::{time_points, TimePoint};
use super::{AssemblyError, DofMatrix};
use crate::basis::{whitney_oriented, LocalEdgeValues, QuadratureRule, TemporalGrid};
use crate::fields::{FieldError, OutsidePolicy, SourceField};
use crate::mesh::{EdgeTable, Mesh};
use crate::Vector;
use rayon::prelude::*;

/// Elements processed per parallel batch; results are merged in element
/// order, so the outcome does not depend on the number of worker threads.
const BATCH: usize = 256;

/// Source matrix `C` and the number of spatial quadrature points that fell
/// outside the source domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceAssembly {
    pub matrix: DofMatrix,
    pub outside_points: usize,
}

/// Source matrix `C_ij = ∫_T ∫_D μ w_i w_j · H_s`.
pub fn assemble_source_matrix(
    mesh: &Mesh,
    edges: &EdgeTable,
    grid: &TemporalGrid,
    source: &dyn SourceField,
    space_quad: &QuadratureRule,
    time_quad: &QuadratureRule,
    policy: OutsidePolicy,
) -> Result<SourceAssembly, AssemblyError> {
    let integrator = SpaceTimeIntegrator::new(mesh, edges, grid, source, space_quad, time_quad)?;
    let n = grid.len();
    let local_count = edges.edges_per_element();
    let mut matrix = DofMatrix::zeros(edges.len(), n);
    let mut outside_points = 0;
    par_elements(
        mesh.element_count(),
        |e| {
            let mut block = vec![0.0; local_count * n];
            let outside = integrator.visit_element(e, source, policy, |w, weight, values| {
                let Some(values) = values else { return };
                for (tp, h) in integrator.times.iter().zip(values) {
                    let scale = weight * tp.weight;
                    for (a, wa) in w.iter().enumerate() {
                        let v = scale * (wa[0] * h[0] + wa[1] * h[1] + wa[2] * h[2]);
                        block[a * n + tp.k] += (1.0 - tp.s) * v;
                        block[a * n + tp.k + 1] += tp.s * v;
                    }
                }
            })?;
            Ok::<_, AssemblyError>((block, outside))
        },
        |e, (block, outside)| {
            outside_points += outside;
            for (a, local) in edges.element_edges(e).iter().enumerate() {
                for j in 0..n {
                    matrix[(local.global, j)] += block[a * n + j];
                }
            }
        },
    )?;
    Ok(SourceAssembly {
        matrix,
        outside_points,
    })
}

/// Tensor-product quadrature over target elements and target time
/// intervals (split at source time nodes).
pub(crate) struct SpaceTimeIntegrator<'a> {
    mesh: &'a Mesh,
    edges: &'a EdgeTable,
    space: &'a QuadratureRule,
    pub times: Vec<TimePoint>,
    instants: Vec<f64>,
}

impl<'a> SpaceTimeIntegrator<'a> {
    pub fn new(
        mesh: &'a Mesh,
        edges: &'a EdgeTable,
        grid: &TemporalGrid,
        source: &dyn SourceField,
        space: &'a QuadratureRule,
        time: &QuadratureRule,
    ) -> Result<Self, AssemblyError> {
        if space.dim() != mesh.dim() {
            return Err(AssemblyError::QuadratureDimension {
                mesh: mesh.dim(),
                rule: space.dim(),
            });
        }
        let (start, end) = source.time_span();
        if grid.start() < start || grid.end() > end {
            return Err(AssemblyError::SpanNotCovered {
                target: grid.span(),
                available: (start, end),
            });
        }
        let times = time_points(grid, source.time_nodes(), time)?;
        let instants = times.iter().map(|p| p.t).collect();
        Ok(SpaceTimeIntegrator {
            mesh,
            edges,
            space,
            times,
            instants,
        })
    }

    /// Calls `f(w, μ·weight·|J|, values)` for every spatial quadrature point of
    /// element `e`, where `values` holds the source at every time point, or is
    /// `None` when the point lies outside the source under the zero policy.
    /// Returns the number of such outside points.
    pub fn visit_element(
        &self,
        e: usize,
        source: &dyn SourceField,
        policy: OutsidePolicy,
        mut f: impl FnMut(&LocalEdgeValues, f64, Option<&[Vector]>),
    ) -> Result<usize, AssemblyError> {
        let geometry = self.mesh.geometry(e);
        let mu = self.mesh.mu()[e];
        let mut values = vec![[0.0; 3]; self.instants.len()];
        let mut outside = 0;
        for (lambda, weight) in self.space.points().iter().zip(self.space.weights()) {
            let x = geometry.point(lambda);
            let w = whitney_oriented(&geometry, self.edges, e, lambda);
            let spatial_weight = mu * weight * geometry.jacobian;
            if source.eval_series(&x, &self.instants, &mut values)? {
                f(&w, spatial_weight, Some(&values));
            } else {
                match policy {
                    OutsidePolicy::Zero => {
                        outside += 1;
                        f(&w, spatial_weight, None);
                    }
                    OutsidePolicy::Strict => return Err(FieldError::Outside(x).into()),
                }
            }
        }
        Ok(outside)
    }
}

/// Computes per-element results in parallel batches and hands them to
/// `merge` strictly in element order.
pub(crate) fn par_elements<T, E>(
    count: usize,
    compute: impl Fn(usize) -> Result<T, E> + Sync,
    mut merge: impl FnMut(usize, T),
) -> Result<(), E>
where
    T: Send,
    E: Send,
{
    let mut start = 0;
    while start < count {
        let end = (start + BATCH).min(count);
        let results: Vec<Result<T, E>> = (start..end).into_par_iter().map(&compute).collect();
        for (offset, result) in results.into_iter().enumerate() {
            merge(start + offset, result?);
        }
        start = end;
    }
    Ok(())
}
