use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use stgp_cli::{cmd_info, cmd_meshgen, cmd_project, cmd_verify, CliError, VerifyLevel};

/// Space-time Galerkin projection of fields between meshes and time grids.
#[derive(Parser)]
#[command(name = "stgp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the projection described by a config file.
    Project { config: PathBuf },
    /// Write a structured mesh (unit-square-tri or unit-cube-tet).
    Meshgen {
        kind: String,
        n: usize,
        mu: f64,
        out: PathBuf,
    },
    /// Run the built-in verification checks.
    Verify { level: VerifyLevel },
    /// Summarise a mesh or field file.
    Info { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Project { config } => cmd_project(&config).map(|report| {
            let get = |k| report.get(k).unwrap_or("?");
            println!(
                "edges {} x time nodes {}: {} iterations, relative error {}",
                get("edges"),
                get("time_nodes"),
                get("iterations"),
                get("relative_error")
            );
        }),
        Command::Meshgen { kind, n, mu, out } => cmd_meshgen(&kind, n, mu, &out).map(|mesh| {
            println!("wrote {} ({} elements)", out.display(), mesh.element_count());
        }),
        Command::Verify { level } => {
            let summary = cmd_verify(level);
            println!("{summary}");
            if summary.passed() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::Info { file } => cmd_info(&file).map(|text| print!("{text}")),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stgp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
