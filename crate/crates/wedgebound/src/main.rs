use anyhow::Context;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wedgebound::report::{emit_all_curves, run_suite, write_report, RunConfig, Suites};

#[derive(Parser, Debug)]
#[command(name = "wedgebound", version, about = "Verification suites for bound-state S-matrices and wedge-local fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults apply to missing fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for report.json and curve CSVs
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the S-matrix axiom tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Random seed for sampled checks
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Axioms, residue and auxiliary inequalities at the configured epsilon
    VerifySmatrix,
    /// Axiom and inequality scan over the configured epsilon list
    ScanEpsilon,
    /// Weak commutator, positivity and cross-term checks
    WeakCommutator,
    /// Hardy-space identities, factorization and symbol construction
    Factorize,
    /// Counterexample gallery
    Counterexamples,
    /// Every suite
    Full,
}

impl Command {
    fn suites(self) -> Suites {
        let mut s = Suites::none();
        match self {
            Command::VerifySmatrix => s.smatrix = true,
            Command::ScanEpsilon => s.epsilon_scan = true,
            Command::WeakCommutator => s.boundstate = true,
            Command::Factorize => s.hardy = true,
            Command::Counterexamples => s.counterexamples = true,
            Command::Full => s = Suites::all(),
        }
        s
    }
}

fn config_from(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::from_path(p).with_context(|| format!("loading {}", p.display()))?,
        None => RunConfig::default(),
    };
    config.suites = cli.command.suites();
    if let Some(t) = cli.tol {
        config.tolerances.axioms = t;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(dir) = &cli.out {
        config.output.report = Some(dir.join("report.json"));
        config.output.curves_dir = Some(dir.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let config = config_from(cli)?;
    let report = run_suite(&config)?;
    match &config.output.report {
        Some(path) => write_report(&report, path)?,
        None => println!("{}", report.to_json()?),
    }
    if let Some(dir) = &config.output.curves_dir {
        for p in emit_all_curves(&report, dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    for c in &report.checks {
        let tag = match (c.pass, c.mandatory) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        eprintln!("[{tag}] {}: {} ({:.3e}, threshold {:.1e})", c.suite, c.name, c.value, c.threshold);
    }
    for f in &report.failures {
        eprintln!("[FAIL] {} suite aborted: {}", f.suite, f.error);
    }
    for t in &report.timings {
        eprintln!("{}: {:.2} s", t.suite, t.seconds);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
