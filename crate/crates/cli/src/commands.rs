use crate::config::{ConfigError, RunConfig, SourceSpec, TimeSpec};
use crate::report::RunReport;
use crate::CliError;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;
use stgp::assembly::{write_dense_matrix, write_sparse_matrix, write_tridiag_matrix};
use stgp::fields::{read_field, write_field, DiscreteField, SourceField};
use stgp::mesh::{generate_structured_mesh, read_mesh, write_mesh, EdgeTable, Mesh, MeshKind};
use stgp::prelude::*;
use stgp::Error;

/// Environment variable overriding the `threads` config key.
pub const THREADS_ENV: &str = "STGP_THREADS";

/// Runs `stgp project`. The worker count comes from `STGP_THREADS`, then the
/// config, then rayon's default.
pub fn cmd_project(config_path: &Path) -> Result<RunReport, CliError> {
    let text = read_input(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let stem = config_path.file_stem().and_then(|s| s.to_str()).unwrap_or("stgp");
    let config = RunConfig::parse(&text, base, stem).map_err(|e| {
        CliError::Config(
            ConfigError {
                file: Some(config_path.to_path_buf()),
                ..e
            }
            .to_string(),
        )
    })?;
    for file in config.input_files() {
        if !file.is_file() {
            return Err(CliError::Config(format!("input file `{}` does not exist", file.display())));
        }
    }
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        ),
        Err(_) => config.threads,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_project(&config))
}

fn run_project(config: &RunConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(config.echo.clone());

    let mesh = load_mesh(&config.target_mesh)?;
    let edges = EdgeTable::build(&mesh);
    let grid = match &config.times {
        TimeSpec::List(times) => TemporalGrid::new(times.clone()),
        TimeSpec::Uniform { start, stop, count } => TemporalGrid::uniform(*start, *stop, *count),
    }
    .map_err(|e| CliError::Config(format!("bad time grid: {e}")))?;

    let discrete: DiscreteField;
    let analytic;
    let mut source_steps = None;
    let source: &dyn SourceField = match &config.source {
        SourceSpec::Analytic(field) => {
            analytic = field.clone();
            &analytic
        }
        SourceSpec::Discrete { mesh: mesh_path, field } => {
            let source_mesh = load_mesh(mesh_path)?;
            let file = read_field(&read_input(field)?).map_err(|e| parse_error(field, e))?;
            discrete = file
                .into_discrete(source_mesh)
                .map_err(|e| CliError::Config(format!("{}: {e}", field.display())))?;
            source_steps = Some(discrete.grid().len() - 1);
            &discrete
        }
    };

    let mut settings = ProjectionSettings {
        space_order: config.space_order,
        time_order: config.time_order,
        outside: config.outside,
        solver: config.solver,
        allow_unconverged: config.allow_unconverged,
        initial_guess: None,
    };
    if let Some(path) = &config.warm_start {
        let file = read_field(&read_input(path)?).map_err(|e| parse_error(path, e))?;
        if file.dofs.shape() != (edges.len(), grid.len()) {
            return Err(CliError::Config(format!(
                "{}: warm start is {}x{}, expected {}x{}",
                path.display(),
                file.dofs.rows(),
                file.dofs.cols(),
                edges.len(),
                grid.len()
            )));
        }
        settings.initial_guess = Some(file.dofs);
    }
    let read_time = start.elapsed().as_secs_f64();

    let problem = ProjectionProblem::new(&mesh, &edges, &grid, source);
    let result = project_with(&problem, &settings).map_err(|e| match e {
        Error::NotConverged(_) => CliError::Solver(e.to_string()),
        other => CliError::Config(other.to_string()),
    })?;

    report.problem = vec![
        ("dim", mesh.dim().to_string()),
        ("elements", mesh.element_count().to_string()),
        ("edges", edges.len().to_string()),
        ("time_nodes", grid.len().to_string()),
        ("time_steps", (grid.len() - 1).to_string()),
        ("unknowns", (edges.len() * grid.len()).to_string()),
        ("nnz_a", result.nnz_a.to_string()),
    ];
    if let Some(source_steps) = source_steps {
        report.problem.push(("source_time_steps", source_steps.to_string()));
        report
            .problem
            .push(("step_ratio", ((grid.len() - 1) as f64 / source_steps as f64).to_string()));
    }
    report.record_result(&result, config.solver.tolerance);

    let clock = Instant::now();
    let mesh_name = config
        .target_mesh
        .file_name()
        .map_or_else(|| "target".into(), |n| n.to_string_lossy().into_owned());
    write_output(&config.output_field, &write_field(&mesh_name, &grid, &result.dofs))?;
    for (k, x) in config.probes.iter().enumerate() {
        let series = probe_timeseries(&result.dofs, &mesh, &edges, &grid, x, config.probe_samples)
            .map_err(|e| CliError::Config(format!("probe {k}: {e}")))?;
        let path = config.output_probes.with_file_name(format!(
            "{}{k}.csv",
            config.output_probes.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())
        ));
        write_output(&path, &probe_csv(&series, mesh.dim()))?;
    }
    if let Some(dir) = &config.dump_matrices {
        dump_matrices(dir, &mesh, &edges, &grid, source, &settings)?;
    }
    report.timings.insert(0, ("read", read_time.to_string()));
    report.timings.push(("output", clock.elapsed().as_secs_f64().to_string()));
    report.timings.push(("total", start.elapsed().as_secs_f64().to_string()));
    report.timings.push(("threads", rayon::current_num_threads().to_string()));
    write_output(&config.output_report, &report.render())?;
    Ok(report)
}

fn dump_matrices(
    dir: &Path,
    mesh: &Mesh,
    edges: &EdgeTable,
    grid: &TemporalGrid,
    source: &dyn SourceField,
    settings: &ProjectionSettings,
) -> Result<(), CliError> {
    let fail = |e: Error| CliError::Config(e.to_string());
    let space = simplex_quadrature(mesh.dim(), settings.space_order).map_err(|e| fail(e.into()))?;
    let time = simplex_quadrature(1, settings.time_order).map_err(|e| fail(e.into()))?;
    let a = assemble_spatial_mass(mesh, edges, &space).map_err(|e| fail(e.into()))?;
    let c = assemble_source_matrix(mesh, edges, grid, source, &space, &time, settings.outside)
        .map_err(|e| fail(e.into()))?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write_output(&dir.join("a.matrix"), &write_sparse_matrix(&a))?;
    write_output(&dir.join("b.matrix"), &write_tridiag_matrix(&assemble_temporal_gram(grid)))?;
    write_output(&dir.join("c.matrix"), &write_dense_matrix(&c.matrix))
}

/// CSV with header `t,hx,hy[,hz]`.
pub fn probe_csv(series: &[(f64, stgp::Vector)], dim: usize) -> String {
    let mut out = String::from(if dim == 3 { "t,hx,hy,hz\n" } else { "t,hx,hy\n" });
    for (t, h) in series {
        let _ = write!(out, "{t}");
        for c in h.iter().take(dim) {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}

pub fn cmd_meshgen(kind: &str, n: usize, mu: f64, out: &Path) -> Result<Mesh, CliError> {
    let kind: MeshKind = kind.parse().map_err(CliError::Config)?;
    let mesh = generate_structured_mesh(kind, n, mu).map_err(|e| CliError::Config(e.to_string()))?;
    write_output(out, &write_mesh(&mesh))?;
    Ok(mesh)
}

/// Summary of a mesh or field file.
pub fn cmd_info(path: &Path) -> Result<String, CliError> {
    let text = read_input(path)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let mut out = String::new();
    if header.starts_with("stgp-mesh") {
        let mesh = read_mesh(&text).map_err(|e| parse_error(path, e))?;
        let edges = EdgeTable::build(&mesh);
        let (lo, hi) = mesh.bounding_box();
        let mu_min = mesh.mu().iter().copied().fold(f64::INFINITY, f64::min);
        let mu_max = mesh.mu().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, "kind = mesh");
        let _ = writeln!(out, "dim = {}", mesh.dim());
        let _ = writeln!(out, "nodes = {}", mesh.node_count());
        let _ = writeln!(out, "elements = {}", mesh.element_count());
        let _ = writeln!(out, "edges = {}", edges.len());
        let _ = writeln!(out, "mu = {mu_min} .. {mu_max}");
        let _ = writeln!(out, "bbox = {} {} {} .. {} {} {}", lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]);
    } else if header.starts_with("stgp-field") {
        let field = read_field(&text).map_err(|e| parse_error(path, e))?;
        let peak = field.dofs.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let _ = writeln!(out, "kind = field");
        let _ = writeln!(out, "mesh = {}", field.mesh_name);
        let _ = writeln!(out, "edges = {}", field.dofs.rows());
        let _ = writeln!(out, "time_nodes = {}", field.grid.len());
        let _ = writeln!(out, "time_span = {} .. {}", field.grid.start(), field.grid.end());
        let _ = writeln!(out, "max_abs_dof = {peak}");
    } else {
        return Err(CliError::Config(format!(
            "{}: not an stgp-mesh or stgp-field file",
            path.display()
        )));
    }
    Ok(out)
}

fn load_mesh(path: &Path) -> Result<Mesh, CliError> {
    read_mesh(&read_input(path)?).map_err(|e| parse_error(path, e))
}

fn parse_error(path: &Path, e: stgp::ParseError) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

/// Missing inputs are configuration errors; other read failures are I/O
/// errors.
fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::Config(format!("input file `{}` does not exist", path.display())),
        _ => CliError::io(path, e),
    })
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
