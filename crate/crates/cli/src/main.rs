mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::{Failure, Report};
use config::{RunConfig, Settings};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CONFIG: u8 = 3;

/// Classical weight verification and a spectral solver for the generalized
/// Helmholtz operator on the unit triangle.
#[derive(Parser, Debug)]
#[command(name = "cwf", version)]
struct Cli {
    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Also write the report into this directory.
    #[arg(long, global = true, env = "CWF_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Pearson, boundary and auxiliary-system checks for a weight and Phi.
    VerifyWeight,
    /// Table of moments mu(m, n) for m, n <= max-order.
    Moments,
    /// Nodes and weights of the collapsed Gauss-Jacobi rule.
    Quadrature,
    /// Galerkin solution of L u = f.
    Solve,
    /// Ritz values of L.
    Eig,
    /// Lowest Ritz values over a range of degrees.
    Converge,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::VerifyWeight => "verify-weight",
            Command::Moments => "moments",
            Command::Quadrature => "quadrature",
            Command::Solve => "solve",
            Command::Eig => "eig",
            Command::Converge => "converge",
        }
    }
}

/// Settings that may also come from the config file.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// General weight as `form:exponent; form:exponent; ...`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    factors: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi11: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi12: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi22: Option<String>,
    /// Domain edges as `form:n1,n2; ...` with outward normal directions.
    #[arg(long, global = true, allow_hyphen_values = true)]
    edges: Option<String>,
    #[arg(long, global = true)]
    degree: Option<String>,
    /// Right-hand side polynomial for `solve`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, global = true)]
    degree_min: Option<String>,
    #[arg(long, global = true)]
    degree_max: Option<String>,
    #[arg(long, global = true)]
    max_order: Option<String>,
    /// Points per direction for `quadrature`.
    #[arg(long, global = true)]
    nodes: Option<String>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Report file name (without extension) inside the output directory.
    #[arg(long, global = true)]
    output: Option<String>,
}

impl Overrides {
    fn apply(&self, s: &mut Settings) -> Result<()> {
        let pairs = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("factors", &self.factors),
            ("phi11", &self.phi11),
            ("phi12", &self.phi12),
            ("phi22", &self.phi22),
            ("edges", &self.edges),
            ("degree", &self.degree),
            ("f", &self.f),
            ("degree-min", &self.degree_min),
            ("degree-max", &self.degree_max),
            ("max-order", &self.max_order),
            ("nodes", &self.nodes),
            ("format", &self.format),
            ("output", &self.output),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        Ok(())
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    cli.overrides.apply(&mut settings)?;
    RunConfig::resolve(&settings)
}

fn write_report(dir: &Path, name: &str, ext: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{name}.{ext}"));
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cfg = load_config(cli).map_err(Failure::Config)?;
    let report = match cli.command {
        Command::VerifyWeight => commands::verify_weight(&cfg),
        Command::Moments => commands::moments(&cfg),
        Command::Quadrature => commands::quadrature(&cfg),
        Command::Solve => commands::solve(&cfg),
        Command::Eig => commands::eig(&cfg),
        Command::Converge => commands::converge(&cfg),
    }?;
    if let Some(dir) = &cli.out_dir {
        let name = cfg.output.as_deref().unwrap_or(cli.command.name());
        write_report(dir, name, &cfg.format.to_string(), &report.body).map_err(Failure::Config)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.body.as_bytes());
            for msg in &report.failed {
                eprintln!("FAIL {msg}");
            }
            if report.failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAIL)
            }
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e:#}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
