//! Command-line front end: verification suites, demos and flow tables.
//!
//! Exit codes: 0 when every report passes, 1 when any fails, 2 for
//! configuration or input errors.

pub mod demos;
pub mod error;
pub mod flows;
pub mod scenario;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lie_semigroup::VerificationReport;
use serde::Serialize;

pub use error::CliError;
use scenario::{Inputs, Scenario};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "liesemi", version, about = "Semigroup actions, evolution operators and semi-symmetries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite (`all` runs every suite)
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// overrides the suite's `action` expression
        #[arg(long)]
        action: Option<String>,
        /// JSON report path; overrides the scenario's `out`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named demo
    Demo {
        #[arg(long)]
        name: String,
    },
    /// Integrate a registered ODE with RK4 and write the trajectory as CSV
    Flow {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        y0: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List demos, suites and flow systems
    List,
}

/// Reports of one suite, in the order the suite produced them.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteRun {
    pub suite: String,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

/// The JSON document written to the report path.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteRun>,
}

fn error_report(suite: &str, e: &lie_semigroup::Error) -> VerificationReport {
    let grid = lie_semigroup::GridSummary {
        description: "not evaluated".into(),
        evaluated: 0,
        skipped: 0,
    };
    let mut r = VerificationReport::new(suite, f64::INFINITY, 0.0, grid).with_note(format!("error: {e}"));
    r.passed = false;
    r
}

/// Validates the scenario and runs the named suite, or every suite for `all`.
///
/// Configuration problems are errors; numerical failures inside a suite
/// become failing reports.
pub fn run_suite(scenario: &Scenario, name: &str) -> Result<RunReport, CliError> {
    let selected: Vec<&suites::Suite> = if name == "all" {
        suites::SUITES.iter().collect()
    } else {
        vec![suites::find(name).ok_or_else(|| {
            let known: Vec<&str> = suites::SUITES.iter().map(|s| s.name).collect();
            CliError::Config(format!("unknown suite `{name}`; known: all, {}", known.join(", ")))
        })?]
    };
    let qualified_only = name == "all";
    let declared: Vec<(&str, Inputs)> = selected.iter().map(|s| (s.name, s.inputs)).collect();
    scenario::check_names(scenario, &declared, qualified_only)?;
    let mut resolved = Vec::new();
    for s in &selected {
        resolved.push(scenario::resolve(scenario, s.name, &s.inputs, qualified_only)?);
    }
    let results: Vec<Result<Vec<VerificationReport>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .zip(&resolved)
            .map(|(s, r)| scope.spawn(move || (s.run)(r)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut runs = Vec::new();
    for (s, result) in selected.iter().zip(results) {
        let reports = match result {
            Ok(reports) => reports,
            Err(CliError::Core(e)) => vec![error_report(s.name, &e)],
            Err(e) => return Err(e),
        };
        runs.push(SuiteRun {
            suite: s.name.to_string(),
            passed: reports.iter().all(VerificationReport::succeeded),
            reports,
        });
    }
    Ok(RunReport {
        suite: name.to_string(),
        seed: scenario.seed(),
        passed: runs.iter().all(|r| r.passed),
        suites: runs,
    })
}

fn report_line(r: &VerificationReport) -> String {
    let verdict = if r.succeeded() {
        "PASS"
    } else if r.inconclusive {
        "INCONCLUSIVE"
    } else {
        "FAIL"
    };
    let mut line = format!(
        "{verdict} {}: max deviation {:.3e} (tol {:.1e}; {} evaluated, {} skipped; {})",
        r.suite, r.max_deviation, r.tolerance, r.grid.evaluated, r.grid.skipped, r.grid.description
    );
    for note in &r.notes {
        line.push_str(&format!("\n    {note}"));
    }
    if !r.succeeded() {
        for w in &r.witnesses {
            line.push_str(&format!("\n    witness {:?} -> {:?} {}", w.point, w.values, w.note));
        }
    }
    line
}

fn verify(
    out: &mut dyn Write,
    suite: Option<String>,
    scenario_path: Option<PathBuf>,
    seed: Option<u64>,
    action: Option<String>,
    report_path: Option<PathBuf>,
) -> Result<bool, CliError> {
    let mut scenario = match &scenario_path {
        Some(p) => Scenario::load(p)?,
        None => Scenario::default(),
    };
    let name = match (&suite, &scenario.suite) {
        (Some(cli), Some(file)) if cli != file => {
            return Err(CliError::Config(format!(
                "--suite {cli} conflicts with the scenario's suite {file}"
            )))
        }
        (Some(n), _) | (None, Some(n)) => n.clone(),
        (None, None) => return Err(CliError::Config("no suite given (use --suite or the scenario's `suite`)".into())),
    };
    if let Some(seed) = seed {
        scenario.seed = Some(seed);
    }
    if let Some(a) = action {
        let key = if name == "all" { "identity:action" } else { "action" };
        scenario.expressions.insert(key.to_string(), a);
    }
    let report = run_suite(&scenario, &name)?;
    for run in &report.suites {
        for r in &run.reports {
            writeln!(out, "{}", report_line(r))?;
        }
    }
    let total: usize = report.suites.iter().map(|s| s.reports.len()).sum();
    let passed: usize = report
        .suites
        .iter()
        .flat_map(|s| &s.reports)
        .filter(|r| r.succeeded())
        .count();
    writeln!(out, "{passed} of {total} reports passed (suite {name}, seed {})", report.seed)?;
    if let Some(path) = report_path.or(scenario.out.clone()) {
        let mut json = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
        json.push('\n');
        std::fs::write(&path, json)?;
        writeln!(out, "report written to {}", path.display())?;
    }
    Ok(report.passed)
}

fn list(out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "demos:")?;
    for d in demos::DEMOS {
        writeln!(out, "  {} ({})", d.name, d.anchor)?;
    }
    writeln!(out, "suites:")?;
    for s in suites::SUITES {
        writeln!(out, "  {:<24} {}", s.name, s.summary)?;
    }
    writeln!(out, "  {:<24} every suite above", "all")?;
    writeln!(out, "flow systems:")?;
    for s in flows::SYSTEMS {
        writeln!(out, "  {:<24} {}", s.name, s.summary)?;
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify {
            suite,
            scenario,
            seed,
            action,
            out: report,
        } => verify(out, suite, scenario, seed, action, report),
        Command::Demo { name } => {
            let demo = demos::find(&name).ok_or_else(|| CliError::Config(format!("unknown demo `{name}`")))?;
            write!(out, "{}", (demo.run)()?)?;
            Ok(true)
        }
        Command::Flow {
            system,
            t0,
            t1,
            steps,
            y0,
            out: path,
        } => {
            let sys = flows::find(&system).ok_or_else(|| CliError::Config(format!("unknown flow system `{system}`")))?;
            let traj = flows::run_flow(sys, t0, t1, y0, steps)?;
            std::fs::write(&path, traj.to_csv())?;
            let (t, y) = traj.last();
            writeln!(out, "{} rows written to {}; final state at t = {t}: {y:?}", traj.len(), path.display())?;
            Ok(true)
        }
        Command::List => list(out).map(|_| true),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}
