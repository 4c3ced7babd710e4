use crate::scenarios::{self, Runner};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Setting this environment variable to a non-empty value makes `verify`
/// run every check with a deliberately broken solver.
pub const TAMPER_ENV: &str = "STGP_VERIFY_TAMPER";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl FromStr for VerifyLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            other => Err(format!("unknown verify level `{other}` (expected quick or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                f,
                "{:<width$}  {}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(
            f,
            "{} checks, {} failed, {:.2} s",
            self.checks.len(),
            failed,
            self.seconds
        )
    }
}

pub fn cmd_verify(level: VerifyLevel) -> VerifySummary {
    let tampered = std::env::var(TAMPER_ENV).is_ok_and(|v| !v.is_empty());
    let runner = if tampered { Runner::tampered() } else { Runner::default() };
    run_checks(level, runner)
}

pub fn run_checks(level: VerifyLevel, mut runner: Runner) -> VerifySummary {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut push = |name, outcome: Result<(bool, String), stgp::Error>| {
        checks.push(match outcome {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
    };

    let instances = if level == VerifyLevel::Full { 40 } else { 10 };
    push(
        "cg-vs-dense-oracle",
        scenarios::oracle_equivalence(&runner, instances, 200, 1).map(|cases| {
            let worst = cases.iter().map(|c| c.relative_difference).fold(0.0, f64::max);
            (worst <= 1e-8, format!("{} instances, worst relative difference {worst:.2e}", cases.len()))
        }),
    );
    push(
        "self-projection",
        scenarios::self_projection(&mut runner, 2).map(|s| {
            (
                s.relative_error <= 1e-8 && s.max_dof_difference <= 1e-8,
                format!("relative error {:.2e}, max dof difference {:.2e}", s.relative_error, s.max_dof_difference),
            )
        }),
    );
    push(
        "mu-scaling-and-linearity",
        scenarios::invariance(&mut runner, 3).map(|i| {
            (
                i.mu_scaling <= 1e-8 && i.linearity <= 1e-8,
                format!("mu scaling {:.2e}, linearity {:.2e}", i.mu_scaling, i.linearity),
            )
        }),
    );
    push(
        "constant-reproduction",
        scenarios::constant_reproduction(&mut runner, 3, 4, 100, 4)
            .map(|worst| (worst <= 1e-7, format!("max pointwise deviation {worst:.2e}"))),
    );
    if level == VerifyLevel::Full {
        push(
            "spatial-convergence",
            scenarios::spatial_convergence(&mut runner, &[4, 8, 16]).map(|series| {
                let slope = scenarios::observed_slope(&series);
                ((0.8..=1.2).contains(&slope), format!("slope {slope:.3}"))
            }),
        );
        push(
            "temporal-convergence",
            scenarios::temporal_convergence(&mut runner, &[5, 9, 17]).map(|series| {
                let slope = scenarios::observed_slope(&series);
                ((1.7..=2.3).contains(&slope), format!("slope {slope:.3}"))
            }),
        );
        push(
            "rotating-multipole",
            scenarios::multipole_analog(&mut runner, 36).map(|m| {
                let mismatch = m.amplitude_mismatch();
                let peaks = 2 * m.pole_pairs as usize;
                (
                    m.local_maxima == peaks && m.excursions == peaks && mismatch <= 0.01,
                    format!("{} maxima, amplitude mismatch {:.2}%", m.local_maxima, 100.0 * mismatch),
                )
            }),
        );
    }
    let worst = runner.worst_galerkin_residual();
    let limit = 10.0 * runner.solver.tolerance;
    let runs = runner.galerkin_residuals.len();
    push(
        "galerkin-residual",
        Ok((runs > 0 && worst <= limit, format!("{runs} converged runs, worst {worst:.2e} (limit {limit:.0e})"))),
    );
    VerifySummary {
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}
