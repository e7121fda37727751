//! `k3fib`: classify the singular fibres of a fibration given by its
//! Weierstrass datum, or run the built-in verification suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use k3fib_core::classifier::dual_graph;
use k3fib_core::lattice::generic_fibre_config;
use k3fib_core::selfcheck::{run_suite, CheckReport};
use k3fib_core::{pipeline, Config, FibreKind, Options, PipelineError};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lattice,
    Toric,
    Monodromy,
    Counts,
    Weierstrass,
    All,
}

#[derive(Parser, Debug)]
#[command(name = "k3fib", version, about = "Singular fibres and invariants of K3-fibred threefolds")]
struct Args {
    /// Configuration file (TOML key = value, or JSON).
    #[arg(long, value_name = "PATH", required_unless_present_any = ["selfcheck", "emit_dual_graphs", "export_lattice"])]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Write `<type>.dot` for each fibre type in the report (every type when
    /// no input is given).
    #[arg(long, value_name = "DIR")]
    emit_dual_graphs: Option<PathBuf>,

    /// Write the curve configuration of a generic fibre as DOT and JSON.
    #[arg(long, value_name = "DIR")]
    export_lattice: Option<PathBuf>,

    #[arg(long, value_enum, value_name = "SUITE", conflicts_with = "input")]
    selfcheck: Option<Suite>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Config(_) => 2,
            CliError::Write { .. } => 4,
            CliError::Pipeline(e) => e.exit_code() as u8,
        }
    }
}

fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn write_file(path: PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|source| CliError::Write { path, source })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })
}

fn emit_graphs(dir: &Path, kinds: &[FibreKind]) -> Result<(), CliError> {
    ensure_dir(dir)?;
    for k in kinds {
        write_file(dir.join(format!("{}.dot", k.file_stem())), &dual_graph(*k).to_dot())?;
    }
    Ok(())
}

fn print_checks(reports: &[CheckReport], format: Format) -> bool {
    let ok = reports.iter().all(CheckReport::passed);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(reports).expect("serializable")),
        Format::Text => {
            for r in reports {
                print!("{r}");
            }
            let (n, failed) = reports.iter().fold((0, 0), |(n, f), r| (n + r.checks.len(), f + r.failures().count()));
            println!("{} checks, {failed} failed: {}", n, if ok { "OK" } else { "FAIL" });
        }
    }
    ok
}

fn run(args: &Args) -> Result<u8, CliError> {
    let mut status = 0;
    if let Some(dir) = &args.export_lattice {
        ensure_dir(dir)?;
        let cfg = generic_fibre_config();
        write_file(dir.join("generic_fibre.dot"), &cfg.to_dot())?;
        write_file(dir.join("generic_fibre.json"), &(cfg.to_json() + "\n"))?;
    }
    if let Some(suite) = args.selfcheck {
        let name = format!("{suite:?}").to_lowercase();
        let reports = run_suite(&name, args.seed).expect("every suite name is known");
        if !print_checks(&reports, args.format) {
            status = 3;
        }
    }
    match &args.input {
        Some(path) => {
            let config = load_config(path)?;
            let report = pipeline::run(&config, &Options { seed: args.seed })?;
            match args.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            if let Some(dir) = &args.emit_dual_graphs {
                let mut kinds: Vec<FibreKind> = report.places.iter().map(|p| p.fibre.fibre_type.kind).collect();
                kinds.dedup();
                emit_graphs(dir, &kinds)?;
            }
            // Explicit places may violate parity; the report is still printed.
            if !report.global.parity_ok {
                eprintln!("error: parity check failed: an odd number of points carry odd b");
                status = 3;
            }
        }
        None => {
            if let Some(dir) = &args.emit_dual_graphs {
                emit_graphs(dir, &FibreKind::all_with(1))?;
            }
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
