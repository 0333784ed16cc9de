//! Command-line front end for `pcm-core`.
//!
//! Exit codes: `0` when every check passes (degenerate checks included),
//! `1` when any check fails, `2` on usage or config errors.

pub mod config;
pub mod report;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::report::{Format, Report};
use crate::suites::Context;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pcm", version, about = "Check probabilistic cone metric spaces from a config file")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// T-norm, cone, metric and PCM axiom sweeps.
    CheckAxioms(RunArgs),
    /// Probabilistic diameter, FC-boundedness, non-diametral points and covers.
    Diameter(RunArgs),
    /// Separating balls, local bases and neighborhood monotonicity.
    HausdorffWitness(RunArgs),
    /// Convex-structure laws and the convexity conditions.
    Convexity(RunArgs),
    /// Self-map hypotheses and the common-fixed-point search.
    FixedPoint(RunArgs),
    /// Every suite that applies to the config.
    FullSuite(RunArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::CheckAxioms(a) => ("check-axioms", a),
            Command::Diameter(a) => ("diameter", a),
            Command::HausdorffWitness(a) => ("hausdorff-witness", a),
            Command::Convexity(a) => ("convexity", a),
            Command::FixedPoint(a) => ("fixed-point", a),
            Command::FullSuite(a) => ("full-suite", a),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Space definition (TOML).
    pub config: PathBuf,
    /// Overrides `grids.tolerance`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report (default).
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// One line per check.
    #[arg(long)]
    pub text: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` and runs the selected suite, writing the report to `stdout`
/// and diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (name, args) = cli.command.parts();
    let started = Instant::now();

    if let Some(t) = args.tol {
        if !(t.is_finite() && t > 0.0) {
            let _ = writeln!(stderr, "error: --tol must be positive, got {t}");
            return EXIT_USAGE;
        }
    }
    let config = match config::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let suite = format!("{name}/{}", config.name);
    let cx = match Context::new(config, args.tol, args.seed) {
        Ok(cx) => cx,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match name {
        "check-axioms" => suites::check_axioms(&cx),
        "diameter" => suites::diameter(&cx),
        "hausdorff-witness" => suites::hausdorff(&cx),
        "convexity" => suites::convexity(&cx),
        "fixed-point" => suites::fixed_point(&cx),
        _ => suites::full_suite(&cx),
    };
    let checks = match result {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {suite}: {e}");
            return EXIT_USAGE;
        }
    };
    let report = Report {
        suite,
        checks,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    let format = if args.text { Format::Text } else { Format::Json };
    let rendered = report.render(format);
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let _ = stdout.write_all(rendered.as_bytes());
    for c in report.checks.iter().filter(|c| c.status == pcm_core::Status::Fail) {
        let _ = writeln!(stderr, "FAIL {}", c.axiom_id);
    }
    if report.failed() {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}
