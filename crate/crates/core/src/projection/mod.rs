//! End-to-end projection: assemble, solve, and measure the space-time error.

use crate::assembly::{
    assemble_source_matrix, assemble_spatial_mass, assemble_temporal_gram, par_elements, DofMatrix,
    SpaceTimeIntegrator,
};
use crate::basis::{simplex_quadrature, whitney_oriented, QuadratureRule, TemporalGrid};
use crate::fields::{FieldError, OutsidePolicy, SourceField};
use crate::mesh::{EdgeTable, Mesh, PointLocator, DEFAULT_LOCATE_TOL};
use crate::solver::{cg_solve_from, SolveReport, SolverConfig};
use crate::{Error, Point, Vector};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSettings {
    /// Exactness order of the spatial rule used for `A`, `C` and the error.
    pub space_order: usize,
    /// Exactness order of the rule applied on each (split) time interval.
    pub time_order: usize,
    pub outside: OutsidePolicy,
    pub solver: SolverConfig,
    /// Return an unconverged solve instead of failing with
    /// [`Error::NotConverged`].
    pub allow_unconverged: bool,
    /// Warm start for the solver; zero when `None`.
    pub initial_guess: Option<DofMatrix>,
}

impl Default for ProjectionSettings {
    fn default() -> Self {
        ProjectionSettings {
            space_order: 4,
            time_order: 3,
            outside: OutsidePolicy::Zero,
            solver: SolverConfig::default(),
            allow_unconverged: false,
            initial_guess: None,
        }
    }
}

impl ProjectionSettings {
    fn rules(&self, dim: usize) -> Result<(QuadratureRule, QuadratureRule), Error> {
        Ok((simplex_quadrature(dim, self.space_order)?, simplex_quadrature(1, self.time_order)?))
    }
}

/// Target discretisation plus source field. The weight μ always comes from
/// the target mesh; a discrete source's own permeabilities are not used.
#[derive(Clone, Copy)]
pub struct ProjectionProblem<'a> {
    pub mesh: &'a Mesh,
    pub edges: &'a EdgeTable,
    pub grid: &'a TemporalGrid,
    pub source: &'a dyn SourceField,
}

impl<'a> ProjectionProblem<'a> {
    pub fn new(mesh: &'a Mesh, edges: &'a EdgeTable, grid: &'a TemporalGrid, source: &'a dyn SourceField) -> Self {
        ProjectionProblem {
            mesh,
            edges,
            grid,
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDiagnostics {
    /// `∫∫ (μ/2) ‖H_t − H_s‖²`
    pub error_norm: f64,
    /// `∫∫ (μ/2) ‖H_s‖²`
    pub source_energy: f64,
    /// `sqrt(error_norm / source_energy)`, zero for a zero source.
    pub relative_error: f64,
}

impl ErrorDiagnostics {
    fn new(error_norm: f64, source_energy: f64) -> Self {
        let relative_error = if source_energy > 0.0 {
            (error_norm / source_energy).sqrt()
        } else {
            0.0
        };
        ErrorDiagnostics {
            error_norm,
            source_energy,
            relative_error,
        }
    }
}

/// Wall-clock seconds per phase. Not covered by any determinism guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimings {
    pub assembly: f64,
    pub solve: f64,
    pub diagnostics: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// `X_ij`: edge `i`, time node `j`.
    pub dofs: DofMatrix,
    pub report: SolveReport,
    pub diagnostics: ErrorDiagnostics,
    /// Spatial quadrature points outside the source domain during assembly
    /// of `C` (zero policy only).
    pub outside_points: usize,
    /// `‖A X B − C‖_F / ‖C‖_F`
    pub galerkin_residual: f64,
    pub nnz_a: usize,
    pub timings: PhaseTimings,
}

/// Projects with default settings.
pub fn project(problem: &ProjectionProblem<'_>) -> Result<ProjectionResult, Error> {
    project_with(problem, &ProjectionSettings::default())
}

pub fn project_with(problem: &ProjectionProblem<'_>, settings: &ProjectionSettings) -> Result<ProjectionResult, Error> {
    let ProjectionProblem {
        mesh,
        edges,
        grid,
        source,
    } = *problem;
    let (space, time) = settings.rules(mesh.dim())?;

    let clock = Instant::now();
    let a = assemble_spatial_mass(mesh, edges, &space)?;
    let b = assemble_temporal_gram(grid);
    let c = assemble_source_matrix(mesh, edges, grid, source, &space, &time, settings.outside)?;
    let assembly = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let zero;
    let initial = match &settings.initial_guess {
        Some(x) => x,
        None => {
            zero = DofMatrix::zeros(edges.len(), grid.len());
            &zero
        }
    };
    let (dofs, report) = cg_solve_from(&a, &b, &c.matrix, initial, &settings.solver)?;
    let solve = clock.elapsed().as_secs_f64();
    if !report.converged && !settings.allow_unconverged {
        return Err(Error::NotConverged(Box::new(report)));
    }

    let clock = Instant::now();
    let diagnostics = error_norm_with(problem, &dofs, &space, &time, settings.outside)?;
    let timings = PhaseTimings {
        assembly,
        solve,
        diagnostics: clock.elapsed().as_secs_f64(),
    };
    Ok(ProjectionResult {
        dofs,
        galerkin_residual: report.relative_residual,
        report,
        diagnostics,
        outside_points: c.outside_points,
        nnz_a: a.nnz(),
        timings,
    })
}

/// Space-time error of the target field given by `dofs` against the source,
/// using the quadrature of the default settings.
pub fn error_norm(problem: &ProjectionProblem<'_>, dofs: &DofMatrix) -> Result<ErrorDiagnostics, Error> {
    let settings = ProjectionSettings::default();
    let (space, time) = settings.rules(problem.mesh.dim())?;
    error_norm_with(problem, dofs, &space, &time, settings.outside)
}

/// As [`error_norm`] with explicit rules and outside policy. Uses the same
/// integration points as the assembly of `C`.
pub fn error_norm_with(
    problem: &ProjectionProblem<'_>,
    dofs: &DofMatrix,
    space: &QuadratureRule,
    time: &QuadratureRule,
    policy: OutsidePolicy,
) -> Result<ErrorDiagnostics, Error> {
    let ProjectionProblem {
        mesh,
        edges,
        grid,
        source,
    } = *problem;
    if dofs.shape() != (edges.len(), grid.len()) {
        return Err(FieldError::DimensionMismatch {
            edges: edges.len(),
            steps: grid.len(),
            found_rows: dofs.rows(),
            found_cols: dofs.cols(),
        }
        .into());
    }
    let integrator = SpaceTimeIntegrator::new(mesh, edges, grid, source, space, time)?;
    let mut error = 0.0;
    let mut energy = 0.0;
    par_elements(
        mesh.element_count(),
        |e| {
            let map = edges.element_edges(e);
            let mut local = (0.0, 0.0);
            integrator.visit_element(e, source, policy, |w, weight, values| {
                for (r, tp) in integrator.times.iter().enumerate() {
                    let mut target = [0.0; 3];
                    for (wa, edge) in w.iter().zip(map) {
                        let coefficient =
                            (1.0 - tp.s) * dofs[(edge.global, tp.k)] + tp.s * dofs[(edge.global, tp.k + 1)];
                        for c in 0..3 {
                            target[c] += coefficient * wa[c];
                        }
                    }
                    let h = values.map_or([0.0; 3], |v| v[r]);
                    let scale = 0.5 * weight * tp.weight;
                    local.0 += scale * squared_distance(&target, &h);
                    local.1 += scale * (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
                }
            })?;
            Ok::<_, Error>(local)
        },
        |_, (e, s)| {
            error += e;
            energy += s;
        },
    )?;
    Ok(ErrorDiagnostics::new(error, energy))
}

fn squared_distance(a: &Vector, b: &Vector) -> f64 {
    (0..3).map(|c| (a[c] - b[c]) * (a[c] - b[c])).sum()
}

/// Projected field `H_t(x, t) = Σ_ij w_i(x) h_j(t) X_ij`.
pub fn eval_projected(
    dofs: &DofMatrix,
    mesh: &Mesh,
    edges: &EdgeTable,
    grid: &TemporalGrid,
    x: &Point,
    t: f64,
) -> Result<Vector, Error> {
    let probe = Probe::new(dofs, mesh, edges, grid, x)?;
    probe.at(t)
}

/// Samples the projected field at `x` on `samples` uniformly spaced times
/// covering the grid span, endpoints included.
pub fn probe_timeseries(
    dofs: &DofMatrix,
    mesh: &Mesh,
    edges: &EdgeTable,
    grid: &TemporalGrid,
    x: &Point,
    samples: usize,
) -> Result<Vec<(f64, Vector)>, Error> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let probe = Probe::new(dofs, mesh, edges, grid, x)?;
    let (start, end) = grid.span();
    (0..samples)
        .map(|k| {
            let t = if k + 1 == samples {
                end
            } else {
                start + (end - start) * k as f64 / (samples - 1) as f64
            };
            Ok((t, probe.at(t)?))
        })
        .collect()
}

/// A located point with its Whitney values, evaluated at many times.
struct Probe<'a> {
    dofs: &'a DofMatrix,
    grid: &'a TemporalGrid,
    globals: Vec<usize>,
    w: Vec<Vector>,
}

impl<'a> Probe<'a> {
    fn new(dofs: &'a DofMatrix, mesh: &Mesh, edges: &EdgeTable, grid: &'a TemporalGrid, x: &Point) -> Result<Self, Error> {
        if dofs.shape() != (edges.len(), grid.len()) {
            return Err(FieldError::DimensionMismatch {
                edges: edges.len(),
                steps: grid.len(),
                found_rows: dofs.rows(),
                found_cols: dofs.cols(),
            }
            .into());
        }
        let location = PointLocator::new(mesh).locate(mesh, x, DEFAULT_LOCATE_TOL);
        if location.is_outside() {
            return Err(Error::OutsideTarget(*x));
        }
        let e = location.element;
        let w = whitney_oriented(&mesh.geometry(e), edges, e, &location.barycentric).to_vec();
        let globals = edges.element_edges(e).iter().map(|l| l.global).collect();
        Ok(Probe { dofs, grid, globals, w })
    }

    fn at(&self, t: f64) -> Result<Vector, Error> {
        let (k, s) = self.grid.locate(t)?;
        let mut h = [0.0; 3];
        for (&i, wl) in self.globals.iter().zip(&self.w) {
            let coefficient = if s == 0.0 {
                self.dofs[(i, k)]
            } else if s == 1.0 {
                self.dofs[(i, k + 1)]
            } else {
                (1.0 - s) * self.dofs[(i, k)] + s * self.dofs[(i, k + 1)]
            };
            for c in 0..3 {
                h[c] += coefficient * wl[c];
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests;
