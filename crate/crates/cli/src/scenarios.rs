//! Reference scenarios shared by `stgp verify` and the acceptance suite.
//! Each returns the measured quantities; the callers own the thresholds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use stgp::prelude::*;
use stgp::{Point, Vector};

/// Solver settings plus a log of the Galerkin residual of every converged
/// projection run through it.
#[derive(Debug, Clone)]
pub struct Runner {
    pub solver: SolverConfig,
    pub allow_unconverged: bool,
    pub galerkin_residuals: Vec<f64>,
}

impl Default for Runner {
    fn default() -> Self {
        Runner::new(SolverConfig::default())
    }
}

impl Runner {
    pub fn new(solver: SolverConfig) -> Self {
        Runner {
            solver,
            allow_unconverged: false,
            galerkin_residuals: Vec::new(),
        }
    }

    /// A deliberately broken solver: one CG step, accepted as is.
    pub fn tampered() -> Self {
        Runner {
            solver: SolverConfig {
                tolerance: 0.5,
                max_iterations: Some(1),
                preconditioner: Preconditioner::None,
            },
            allow_unconverged: true,
            galerkin_residuals: Vec::new(),
        }
    }

    pub fn project(&mut self, problem: &ProjectionProblem<'_>, time_order: usize) -> Result<ProjectionResult, Error> {
        let settings = ProjectionSettings {
            time_order,
            solver: self.solver,
            allow_unconverged: self.allow_unconverged,
            ..Default::default()
        };
        let result = project_with(problem, &settings)?;
        if result.report.converged {
            self.galerkin_residuals.push(result.galerkin_residual);
        }
        Ok(result)
    }

    pub fn solve(&self, a: &SparseSymMatrix, b: &TriDiagMatrix, c: &DofMatrix) -> Result<DofMatrix, Error> {
        Ok(cg_solve(a, b, c, &self.solver)?.0)
    }

    /// Largest logged `‖A X B − C‖ / ‖C‖`.
    pub fn worst_galerkin_residual(&self) -> f64 {
        self.galerkin_residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn square(n: usize) -> (Mesh, EdgeTable) {
    let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, n, 1.0).expect("n > 0");
    let edges = EdgeTable::build(&mesh);
    (mesh, edges)
}

/// Structured mesh with interior nodes jittered by up to a fifth of the cell
/// size and random element permeabilities in `[0.5, 5]`.
pub fn random_mesh<R: Rng>(rng: &mut R, kind: MeshKind, n: usize) -> Mesh {
    let base = generate_structured_mesh(kind, n, 1.0).expect("n > 0");
    let h = 1.0 / n as f64;
    let dim = base.dim();
    let nodes: Vec<Point> = base
        .nodes()
        .iter()
        .map(|p| {
            let mut q = *p;
            let interior = (0..dim).all(|c| p[c] > 1e-12 && p[c] < 1.0 - 1e-12);
            if interior {
                for c in q.iter_mut().take(dim) {
                    *c += rng.gen_range(-0.2..0.2) * h;
                }
            }
            q
        })
        .collect();
    let mu = (0..base.element_count()).map(|_| rng.gen_range(0.5..5.0)).collect();
    Mesh::new(dim, nodes, base.elements().map(|e| e.to_vec()).collect(), mu).expect("small jitter keeps elements valid")
}

pub fn random_grid<R: Rng>(rng: &mut R, nodes: usize) -> TemporalGrid {
    let mut times = vec![rng.gen_range(-1.0..1.0)];
    for _ in 1..nodes {
        times.push(times.last().unwrap() + rng.gen_range(0.05..1.0));
    }
    TemporalGrid::new(times).expect("increasing")
}

/// One CG-versus-dense-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCase {
    pub unknowns: usize,
    pub relative_difference: f64,
}

/// Assembles `A` and `B` on random jittered meshes and grids with
/// `M·N ≤ max_unknowns`, draws a random `C`, and compares the CG solution
/// with the dense Kronecker solve.
pub fn oracle_equivalence(runner: &Runner, instances: usize, max_unknowns: usize, seed: u64) -> Result<Vec<OracleCase>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = [
        (MeshKind::UnitSquareTri, 1),
        (MeshKind::UnitSquareTri, 2),
        (MeshKind::UnitSquareTri, 3),
        (MeshKind::UnitCubeTet, 1),
    ];
    let mut cases = Vec::with_capacity(instances);
    while cases.len() < instances {
        let (kind, n) = shapes[rng.gen_range(0..shapes.len())];
        let mesh = random_mesh(&mut rng, kind, n);
        let edges = EdgeTable::build(&mesh);
        let max_nodes = max_unknowns / edges.len();
        if max_nodes < 2 {
            continue;
        }
        let nodes = rng.gen_range(2..=max_nodes);
        let grid = random_grid(&mut rng, nodes);
        let a = assemble_spatial_mass(&mesh, &edges, &simplex_quadrature(mesh.dim(), 2)?)?;
        let b = assemble_temporal_gram(&grid);
        let c = DofMatrix::from_fn(edges.len(), grid.len(), |_, _| rng.gen_range(-1.0..1.0));
        let oracle = dense_oracle_solve(&a, &b, &c)?;
        let x = runner.solve(&a, &b, &c)?;
        cases.push(OracleCase {
            unknowns: edges.len() * grid.len(),
            relative_difference: x.relative_difference(&oracle),
        });
    }
    Ok(cases)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfProjection {
    pub relative_error: f64,
    pub max_dof_difference: f64,
}

/// Projects a random discrete field onto its own mesh and grid.
pub fn self_projection(runner: &mut Runner, seed: u64) -> Result<SelfProjection, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = random_mesh(&mut rng, MeshKind::UnitSquareTri, 6);
    let edges = EdgeTable::build(&mesh);
    let grid = random_grid(&mut rng, 9);
    let dofs = DofMatrix::from_fn(edges.len(), grid.len(), |_, _| rng.gen_range(-1.0..1.0));
    let source = DiscreteField::new(mesh.clone(), grid.clone(), dofs.clone())?;
    let result = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &source), 3)?;
    Ok(SelfProjection {
        relative_error: result.diagnostics.relative_error,
        max_dof_difference: result.dofs.max_abs_difference(&dofs),
    })
}

/// Largest pointwise deviation when a constant held by a discrete field on
/// an `n_source` mesh is projected onto an `n_target` mesh and a different
/// time grid, sampled at `samples` random space-time points.
pub fn constant_reproduction(runner: &mut Runner, n_source: usize, n_target: usize, samples: usize, seed: u64) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value: Vector = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0];
    let (source_mesh, source_edges) = square(n_source);
    let source_grid = TemporalGrid::uniform(0.0, 1.0, 5)?;
    let column = constant_field_dofs(&source_mesh, &source_edges, &value);
    let source = DiscreteField::new(source_mesh, source_grid, DofMatrix::repeat_column(&column, 5))?;

    let (mesh, edges) = square(n_target);
    let grid = TemporalGrid::new(vec![0.0, 0.1, 0.45, 0.7, 1.0])?;
    let result = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &source), 3)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 0.0];
        let t = rng.gen_range(0.0..1.0);
        let h = eval_projected(&result.dofs, &mesh, &edges, &grid, &x, t)?;
        worst = worst.max((h[0] - value[0]).abs()).max((h[1] - value[1]).abs());
    }
    Ok(worst)
}

/// `(mesh size or time step, sqrt(ε))` for each refinement level.
pub type ConvergenceSeries = Vec<(f64, f64)>;

/// Projects `(sin πy, sin πx)`, constant in time, onto unit-square meshes.
pub fn spatial_convergence(runner: &mut Runner, levels: &[usize]) -> Result<ConvergenceSeries, Error> {
    let source = FnField::new(|x: &Point, _t: f64| [(PI * x[1]).sin(), (PI * x[0]).sin(), 0.0]);
    let grid = TemporalGrid::uniform(0.0, 1.0, 2)?;
    levels
        .iter()
        .map(|&n| {
            let (mesh, edges) = square(n);
            let result = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &source), 3)?;
            Ok((1.0 / n as f64, result.diagnostics.error_norm.sqrt()))
        })
        .collect()
}

/// Projects a spatially constant field with quadratic time dependence onto
/// uniform grids of `nodes` nodes over `[0, 1]`. The error integrand is then
/// quartic in time, so a three-point Gauss rule (order 5) is used per interval.
pub fn temporal_convergence(runner: &mut Runner, nodes: &[usize]) -> Result<ConvergenceSeries, Error> {
    let source = FnField::new(|_x: &Point, t: f64| {
        let s = 1.0 + 2.0 * t - 3.0 * t * t;
        [0.7 * s, -0.4 * s, 0.0]
    });
    let (mesh, edges) = square(3);
    nodes
        .iter()
        .map(|&count| {
            let grid = TemporalGrid::uniform(0.0, 1.0, count)?;
            let result = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &source), 5)?;
            Ok((1.0 / (count - 1) as f64, result.diagnostics.error_norm.sqrt()))
        })
        .collect()
}

/// Least-squares slope of `ln error` against `ln h`.
pub fn observed_slope(series: &[(f64, f64)]) -> f64 {
    let points: Vec<(f64, f64)> = series.iter().map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slopes between consecutive levels.
pub fn pairwise_slopes(series: &[(f64, f64)]) -> Vec<f64> {
    series
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleAnalog {
    pub pole_pairs: u32,
    pub source_steps: usize,
    pub target_steps: usize,
    /// Relative space-time error of the intermediate source field.
    pub source_relative_error: f64,
    pub target_relative_error: f64,
    pub outside_points: usize,
    /// Cyclic strict local maxima of `|H|²` over one revolution.
    pub local_maxima: usize,
    /// Cyclic excursions of `|H|²` above its mean over one revolution.
    pub excursions: usize,
    /// DFT amplitude of `|H|²` at `2p` cycles per revolution.
    pub projected_amplitude: f64,
    pub analytic_amplitude: f64,
}

impl MultipoleAnalog {
    pub fn amplitude_mismatch(&self) -> f64 {
        (self.projected_amplitude / self.analytic_amplitude - 1.0).abs()
    }
}

/// Samples per revolution of the probe series.
const PROBE_SAMPLES: usize = 720;

/// Desk-scale analog of projecting a machine field onto a stator mesh with
/// twice as many time steps.
///
/// A rotating `p = 6` multipole (one revolution per unit time) is first
/// projected onto a source annulus `0.85 ≤ r ≤ 1.05` with `source_steps`
/// steps; that discrete field is then projected onto a thinner, non-matching
/// target annulus `0.9 ≤ r ≤ 1` with `2 · source_steps` steps. `|H|²` at the
/// probe `(1, 0)` on the outer boundary is compared with the analytic field.
pub fn multipole_analog(runner: &mut Runner, source_steps: usize) -> Result<MultipoleAnalog, Error> {
    let pole_pairs = 6;
    let field = AnalyticField::RotatingMultipole {
        pole_pairs,
        amplitude: 1.0,
        omega: TAU * f64::from(pole_pairs),
    };
    let source_mesh = generate_annulus_mesh(0.85, 1.05, 12, 400, 0.013, 1.0)?;
    let source_edges = EdgeTable::build(&source_mesh);
    let source_grid = TemporalGrid::uniform(0.0, 1.0, source_steps + 1)?;
    let first = runner.project(&ProjectionProblem::new(&source_mesh, &source_edges, &source_grid, &field), 5)?;
    let source = DiscreteField::new(source_mesh, source_grid, first.dofs)?;

    let target_steps = 2 * source_steps;
    let mesh = generate_annulus_mesh(0.9, 1.0, 12, 360, 0.0, 1.0)?;
    let edges = EdgeTable::build(&mesh);
    let grid = TemporalGrid::uniform(0.0, 1.0, target_steps + 1)?;
    let result = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &source), 3)?;

    let probe = [1.0, 0.0, 0.0];
    let series = probe_timeseries(&result.dofs, &mesh, &edges, &grid, &probe, PROBE_SAMPLES + 1)?;
    // the last sample repeats the first one revolution later
    let projected: Vec<f64> = series[..PROBE_SAMPLES].iter().map(|(_, h)| norm_squared(h)).collect();
    let analytic: Vec<f64> = series[..PROBE_SAMPLES]
        .iter()
        .map(|(t, _)| norm_squared(&field.value(&probe, *t)))
        .collect();
    let harmonic = 2 * pole_pairs as usize;
    Ok(MultipoleAnalog {
        pole_pairs,
        source_steps,
        target_steps,
        source_relative_error: first.diagnostics.relative_error,
        target_relative_error: result.diagnostics.relative_error,
        outside_points: result.outside_points,
        local_maxima: cyclic_local_maxima(&projected),
        excursions: cyclic_excursions(&projected),
        projected_amplitude: dft_amplitude(&projected, harmonic),
        analytic_amplitude: dft_amplitude(&analytic, harmonic),
    })
}

fn norm_squared(h: &Vector) -> f64 {
    h[0] * h[0] + h[1] * h[1] + h[2] * h[2]
}

/// Samples strictly above the previous one and not below the next, cyclically.
pub fn cyclic_local_maxima(series: &[f64]) -> usize {
    let n = series.len();
    (0..n)
        .filter(|&i| series[i] > series[(i + n - 1) % n] && series[i] >= series[(i + 1) % n])
        .count()
}

/// Upward crossings of the series mean, cyclically.
pub fn cyclic_excursions(series: &[f64]) -> usize {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    (0..n)
        .filter(|&i| series[i] > mean && series[(i + n - 1) % n] <= mean)
        .count()
}

/// Amplitude of the `k`-th harmonic of a periodic series sampled uniformly
/// over one period.
pub fn dft_amplitude(series: &[f64], k: usize) -> f64 {
    let n = series.len();
    let (mut re, mut im) = (0.0, 0.0);
    for (i, y) in series.iter().enumerate() {
        let phase = TAU * ((k * i) % n) as f64 / n as f64;
        re += y * phase.cos();
        im -= y * phase.sin();
    }
    2.0 * re.hypot(im) / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariance {
    /// `‖X(αμ) − X(μ)‖ / ‖X(μ)‖`
    pub mu_scaling: f64,
    /// `‖X(aF + bG) − (a X(F) + b X(G))‖ / ‖a X(F) + b X(G)‖`
    pub linearity: f64,
}

/// μ-scaling and linearity of the projection on a graded-μ mesh.
pub fn invariance(runner: &mut Runner, seed: u64) -> Result<Invariance, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = random_mesh(&mut rng, MeshKind::UnitSquareTri, 6);
    let edges = EdgeTable::build(&mesh);
    let grid = random_grid(&mut rng, 7);
    let (t0, t1) = grid.span();
    let fc = move |x: &Point, t: f64| [(2.0 * x[1] + t).sin(), x[0] * (t - t0) * (t1 - t), 0.0];
    let gc = |x: &Point, t: f64| [x[0] * x[1], (3.0 * x[0] - t).cos(), 0.0];
    let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    let combined = FnField::new(move |x: &Point, t: f64| {
        let (u, v) = (fc(x, t), gc(x, t));
        [a * u[0] + b * v[0], a * u[1] + b * v[1], 0.0]
    });
    let (f, g) = (FnField::new(fc), FnField::new(gc));

    let base = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &f), 3)?.dofs;
    let alpha = rng.gen_range(1e-7..1e3);
    let scaled_mesh = mesh.with_scaled_mu(alpha)?;
    let scaled = runner.project(&ProjectionProblem::new(&scaled_mesh, &edges, &grid, &f), 3)?.dofs;
    let xg = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &g), 3)?.dofs;
    let xc = runner.project(&ProjectionProblem::new(&mesh, &edges, &grid, &combined), 3)?.dofs;
    let expected = base.scaled(a).add_scaled(b, &xg);
    Ok(Invariance {
        mu_scaling: scaled.relative_difference(&base),
        linearity: xc.relative_difference(&expected),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let series: Vec<(f64, f64)> = [0.25, 0.125, 0.0625].iter().map(|&h: &f64| (h, 3.0 * h.powi(2))).collect();
        assert!((observed_slope(&series) - 2.0).abs() < 1e-12);
        assert!(pairwise_slopes(&series).iter().all(|s| (s - 2.0).abs() < 1e-12));
    }

    #[test]
    fn harmonic_tools() {
        let n = 360;
        let series: Vec<f64> = (0..n).map(|i| 0.5 + 0.5 * (TAU * 12.0 * i as f64 / n as f64).cos()).collect();
        assert!((dft_amplitude(&series, 12) - 0.5).abs() < 1e-12);
        assert!(dft_amplitude(&series, 5) < 1e-12);
        assert_eq!(cyclic_local_maxima(&series), 12);
        assert_eq!(cyclic_excursions(&series), 12);
    }

    #[test]
    fn random_meshes_stay_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mesh = random_mesh(&mut rng, MeshKind::UnitCubeTet, 2);
            assert!((0..mesh.element_count()).all(|e| mesh.geometry(e).measure > 0.0));
        }
    }
}
