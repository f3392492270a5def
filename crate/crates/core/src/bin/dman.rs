use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dman_core::report::Format;
use dman_core::scene::{emit_report, parse_scene, run_checks};

#[derive(Parser)]
#[command(name = "dman", version, about = "Exact verification of Dirac geometry scenes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check declared in a scene file.
    Check {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Keep only entries whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let Command::Check {
        scene,
        format,
        output,
        filter,
    } = Cli::parse().command;
    let text = match std::fs::read_to_string(&scene) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("dman: cannot read {}: {e}", scene.display());
            return ExitCode::from(3);
        }
    };
    let parsed = match parse_scene(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{e}", scene.display());
            return ExitCode::from(3);
        }
    };
    let mut report = run_checks(&parsed);
    if let Some(prefix) = &filter {
        report = report.filtered(prefix);
    }
    let format = match format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let color = std::env::var("DMAN_COLOR").is_ok_and(|v| v == "1");
    let bytes = emit_report(&report, format, color);
    let written = match &output {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::Write::write_all(&mut std::io::stdout().lock(), &bytes),
    };
    if let Err(e) = written {
        eprintln!("dman: cannot write report: {e}");
        return ExitCode::from(4);
    }
    ExitCode::from(report.exit_code() as u8)
}
