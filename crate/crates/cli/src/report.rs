//! Run report: `key = value` lines grouped in `[sections]`. Everything above
//! `[timings]` is reproducible; the timings section is not.

use std::fmt::Write as _;
use stgp::projection::ProjectionResult;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: Vec<(String, String)>,
    pub problem: Vec<(&'static str, String)>,
    pub solver: Vec<(&'static str, String)>,
    pub diagnostics: Vec<(&'static str, String)>,
    /// Seconds per phase, plus the worker count.
    pub timings: Vec<(&'static str, String)>,
}

impl RunReport {
    pub fn new(config: Vec<(String, String)>) -> Self {
        RunReport {
            config,
            problem: Vec::new(),
            solver: Vec::new(),
            diagnostics: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn record_result(&mut self, result: &ProjectionResult, tolerance: f64) {
        let r = &result.report;
        self.solver = vec![
            ("preconditioner", r.preconditioner.to_string()),
            ("tolerance", tolerance.to_string()),
            ("iterations", r.iterations.to_string()),
            ("relative_residual", r.relative_residual.to_string()),
            ("converged", r.converged.to_string()),
        ];
        let d = &result.diagnostics;
        self.diagnostics = vec![
            ("error_norm", d.error_norm.to_string()),
            ("source_energy", d.source_energy.to_string()),
            ("relative_error", d.relative_error.to_string()),
            ("galerkin_residual", result.galerkin_residual.to_string()),
            ("outside_points", result.outside_points.to_string()),
        ];
        self.timings.extend([
            ("assembly", result.timings.assembly.to_string()),
            ("solve", result.timings.solve.to_string()),
            ("diagnostics", result.timings.diagnostics.to_string()),
            ("cg_wall_time", r.wall_time.to_string()),
        ]);
    }

    /// Looks a value up in any section.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.problem
            .iter()
            .chain(&self.solver)
            .chain(&self.diagnostics)
            .chain(&self.timings)
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# stgp run report\n");
        out.push_str("\n[config]\n");
        for (k, v) in &self.config {
            let _ = writeln!(out, "{k} = {v}");
        }
        for (name, entries) in [
            ("problem", &self.problem),
            ("solver", &self.solver),
            ("diagnostics", &self.diagnostics),
            ("timings", &self.timings),
        ] {
            let _ = writeln!(out, "\n[{name}]");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }
}
