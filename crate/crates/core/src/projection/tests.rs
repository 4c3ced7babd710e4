use super::*;
use crate::basis::constant_field_dofs;
use crate::fields::{AnalyticField, DiscreteField, FnField};
use crate::mesh::{generate_structured_mesh, MeshKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(n: usize) -> (Mesh, EdgeTable) {
    let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, n, 1.0).unwrap();
    let edges = EdgeTable::build(&mesh);
    (mesh, edges)
}

fn smooth(x: &Point, t: f64) -> Vector {
    [(3.0 * x[1]).sin() * (1.0 + t), x[0] * x[0] - t * t, 0.0]
}

#[test]
fn self_projection_recovers_source_dofs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mesh, edges) = square(4);
    let grid = TemporalGrid::new(vec![0.0, 0.3, 0.5, 1.2]).unwrap();
    let dofs = DofMatrix::from_fn(edges.len(), grid.len(), |_, _| rng.gen_range(-1.0..1.0));
    let source = DiscreteField::new(mesh.clone(), grid.clone(), dofs.clone()).unwrap();
    let result = project(&ProjectionProblem::new(&mesh, &edges, &grid, &source)).unwrap();
    assert!(result.dofs.max_abs_difference(&dofs) < 1e-8);
    assert!(result.diagnostics.relative_error < 1e-8);
    assert_eq!(result.outside_points, 0);
}

#[test]
fn constant_reproduced_on_unrelated_mesh() {
    let (mesh, edges) = square(4);
    let grid = TemporalGrid::uniform(0.0, 2.0, 4).unwrap();
    let source = AnalyticField::Constant([1.0, 0.0, 0.0]);
    let result = project(&ProjectionProblem::new(&mesh, &edges, &grid, &source)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 0.0];
        let t = rng.gen_range(0.0..2.0);
        let h = eval_projected(&result.dofs, &mesh, &edges, &grid, &x, t).unwrap();
        assert!((h[0] - 1.0).abs() < 1e-8 && h[1].abs() < 1e-8, "{h:?}");
    }
}

#[test]
fn zero_source_gives_zero() {
    let (mesh, edges) = square(2);
    let grid = TemporalGrid::uniform(0.0, 1.0, 3).unwrap();
    let source = AnalyticField::Constant([0.0; 3]);
    let result = project(&ProjectionProblem::new(&mesh, &edges, &grid, &source)).unwrap();
    assert_eq!(result.dofs, DofMatrix::zeros(edges.len(), 3));
    assert_eq!(result.diagnostics.error_norm, 0.0);
    assert_eq!(result.diagnostics.relative_error, 0.0);
}

#[test]
fn error_norm_extremes() {
    let (mesh, edges) = square(3);
    let grid = TemporalGrid::uniform(0.0, 1.0, 3).unwrap();
    let value = [0.3, -0.8, 0.0];
    let source = AnalyticField::Constant(value);
    let problem = ProjectionProblem::new(&mesh, &edges, &grid, &source);
    let exact = DofMatrix::repeat_column(&constant_field_dofs(&mesh, &edges, &value), 3);
    let d = error_norm(&problem, &exact).unwrap();
    assert!(d.error_norm <= 1e-12 * d.source_energy);
    // (μ/2)|H|² over the unit square and unit time
    assert!((d.source_energy - 0.5 * (0.09 + 0.64)).abs() < 1e-14);
    let zero = error_norm(&problem, &DofMatrix::zeros(edges.len(), 3)).unwrap();
    assert_eq!(zero.error_norm, zero.source_energy);
}

#[test]
fn perturbing_converged_dofs_increases_error() {
    let (mesh, edges) = square(3);
    let grid = TemporalGrid::uniform(0.0, 1.0, 4).unwrap();
    let source = FnField::new(smooth);
    let problem = ProjectionProblem::new(&mesh, &edges, &grid, &source);
    let result = project(&problem).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let (i, j) = (rng.gen_range(0..edges.len()), rng.gen_range(0..grid.len()));
        for delta in [1e-3, -1e-3] {
            let mut perturbed = result.dofs.clone();
            perturbed[(i, j)] += delta;
            let d = error_norm(&problem, &perturbed).unwrap();
            assert!(d.error_norm > result.diagnostics.error_norm);
        }
    }
}

#[test]
fn nested_refinement_never_increases_error() {
    let source = FnField::new(smooth);
    let coarse_grid = TemporalGrid::uniform(0.0, 1.0, 3).unwrap();
    let fine_grid = TemporalGrid::uniform(0.0, 1.0, 5).unwrap();
    // 3-point Gauss in time integrates the quartic error integrand exactly
    let settings = ProjectionSettings {
        time_order: 5,
        ..Default::default()
    };
    let mut previous = f64::INFINITY;
    for n in [1, 2, 4, 8] {
        let (mesh, edges) = square(n);
        let coarse = project_with(&ProjectionProblem::new(&mesh, &edges, &coarse_grid, &source), &settings).unwrap();
        let fine = project_with(&ProjectionProblem::new(&mesh, &edges, &fine_grid, &source), &settings).unwrap();
        assert!(coarse.diagnostics.error_norm <= previous);
        assert!(fine.diagnostics.error_norm <= coarse.diagnostics.error_norm);
        assert!(coarse.diagnostics.error_norm <= coarse.diagnostics.source_energy);
        previous = coarse.diagnostics.error_norm;
    }
}

#[test]
fn mu_scaling_leaves_dofs_unchanged() {
    let (mesh, edges) = square(4);
    let mu = (0..mesh.element_count()).map(|e| 1.0 + (e % 5) as f64).collect();
    let mesh = mesh.with_mu(mu).unwrap();
    let scaled = mesh.with_scaled_mu(4e-7).unwrap();
    let grid = TemporalGrid::uniform(0.0, 1.0, 4).unwrap();
    let source = FnField::new(smooth);
    let x1 = project(&ProjectionProblem::new(&mesh, &edges, &grid, &source)).unwrap().dofs;
    let x2 = project(&ProjectionProblem::new(&scaled, &edges, &grid, &source)).unwrap().dofs;
    assert!(x2.relative_difference(&x1) < 1e-9);
}

#[test]
fn strict_policy_and_unconverged_solves() {
    let (mesh, edges) = square(2);
    let grid = TemporalGrid::uniform(0.0, 1.0, 3).unwrap();
    let (small, _) = square(1);
    let shrunk: Vec<Point> = small.nodes().iter().map(|p| [0.5 * p[0], p[1], 0.0]).collect();
    let small = Mesh::new(2, shrunk, small.elements().map(|e| e.to_vec()).collect(), vec![1.0; 2]).unwrap();
    let small_edges = EdgeTable::build(&small);
    let dofs = DofMatrix::repeat_column(&constant_field_dofs(&small, &small_edges, &[1.0, 0.0, 0.0]), 3);
    let source = DiscreteField::new(small, grid.clone(), dofs).unwrap();
    let problem = ProjectionProblem::new(&mesh, &edges, &grid, &source);
    let zero = project(&problem).unwrap();
    assert!(zero.outside_points > 0);
    let strict = ProjectionSettings {
        outside: OutsidePolicy::Strict,
        ..Default::default()
    };
    assert!(matches!(project_with(&problem, &strict), Err(Error::Assembly(_))));

    let starved = ProjectionSettings {
        solver: SolverConfig {
            max_iterations: Some(1),
            ..Default::default()
        },
        ..Default::default()
    };
    assert!(matches!(project_with(&problem, &starved), Err(Error::NotConverged(_))));
    let allowed = ProjectionSettings {
        allow_unconverged: true,
        ..starved
    };
    let result = project_with(&problem, &allowed).unwrap();
    assert!(!result.report.converged);
}

#[test]
fn warm_start_from_solution() {
    let (mesh, edges) = square(3);
    let grid = TemporalGrid::uniform(0.0, 1.0, 4).unwrap();
    let source = FnField::new(smooth);
    let problem = ProjectionProblem::new(&mesh, &edges, &grid, &source);
    let cold = project(&problem).unwrap();
    let settings = ProjectionSettings {
        initial_guess: Some(cold.dofs.clone()),
        ..Default::default()
    };
    let warm = project_with(&problem, &settings).unwrap();
    assert!(warm.report.iterations < cold.report.iterations);
}

#[test]
fn projected_field_evaluation() {
    let (mesh, edges) = square(2);
    let grid = TemporalGrid::uniform(0.0, 1.0, 3).unwrap();
    let column = constant_field_dofs(&mesh, &edges, &[2.0, 1.0, 0.0]);
    let mut dofs = DofMatrix::zeros(edges.len(), 3);
    dofs.column_mut(1).copy_from_slice(&column);
    let x = [0.31, 0.77, 0.0];
    let h = eval_projected(&dofs, &mesh, &edges, &grid, &x, 0.5).unwrap();
    assert!((h[0] - 2.0).abs() < 1e-12 && (h[1] - 1.0).abs() < 1e-12);
    assert_eq!(eval_projected(&dofs, &mesh, &edges, &grid, &x, 0.0).unwrap(), [0.0; 3]);
    let h = eval_projected(&dofs, &mesh, &edges, &grid, &x, 0.25).unwrap();
    assert!((h[0] - 1.0).abs() < 1e-12);
    assert!(matches!(
        eval_projected(&dofs, &mesh, &edges, &grid, &[2.0, 0.5, 0.0], 0.5),
        Err(Error::OutsideTarget(_))
    ));
    assert!(eval_projected(&dofs, &mesh, &edges, &grid, &x, 1.5).is_err());
}

#[test]
fn probe_series_shapes() {
    let (mesh, edges) = square(2);
    let grid = TemporalGrid::uniform(0.0, 3.0, 4).unwrap();
    let dofs = DofMatrix::repeat_column(&constant_field_dofs(&mesh, &edges, &[0.0, 5.0, 0.0]), 4);
    let x = [0.5, 0.5, 0.0];
    let ends = probe_timeseries(&dofs, &mesh, &edges, &grid, &x, 2).unwrap();
    assert_eq!(ends.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0.0, 3.0]);
    let series = probe_timeseries(&dofs, &mesh, &edges, &grid, &x, 31).unwrap();
    assert!(series.iter().all(|(_, h)| (h[1] - 5.0).abs() < 1e-12 && h[0].abs() < 1e-12));
    assert!(matches!(probe_timeseries(&dofs, &mesh, &edges, &grid, &x, 1), Err(Error::TooFewSamples(1))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn projection_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let (mesh, edges) = square(3);
        let grid = TemporalGrid::uniform(0.0, 1.0, 4).unwrap();
        let f = FnField::new(smooth);
        let g = AnalyticField::RotatingMultipole { pole_pairs: 2, amplitude: 1.0, omega: 3.0 };
        let g2 = g.clone();
        let combined = FnField::new(move |x: &Point, t: f64| {
            let (u, v) = (smooth(x, t), g2.value(x, t));
            [alpha * u[0] + beta * v[0], alpha * u[1] + beta * v[1], 0.0]
        });
        let run = |s: &dyn SourceField| project(&ProjectionProblem::new(&mesh, &edges, &grid, s)).unwrap().dofs;
        let expected = run(&f).scaled(alpha).add_scaled(beta, &run(&g));
        let actual = run(&combined);
        let scale = expected.frobenius_norm().max(1e-12);
        prop_assert!(actual.add_scaled(-1.0, &expected).frobenius_norm() <= 1e-9 * scale);
    }
}
