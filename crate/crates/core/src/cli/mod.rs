//! Command-line front end: problem documents, dispatch, verification and rendering.

mod report;
mod run;
mod spec;
mod verify;

use std::path::{Path, PathBuf};

use clap::Parser;
use rayon::prelude::*;

pub use report::{render, Check, Format, Line, Report};
pub use run::{run, Command};
pub use spec::{
    build_problem, parse_spec, GroupSpec, ModuleSpec, OptionsSpec, Problem, ProblemSpec, SesSpec,
    Settings, SCHEMA_VERSION,
};
pub use verify::{classification_in_caps, LEIBNIZ_SAMPLES};

use crate::cohom::TateConvention;
use crate::Error;

#[derive(Clone, Debug, Parser)]
#[command(
    name = "eqcohom",
    version,
    about = "Equivariant (co)homology of finite groups with operators"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Problem document, or a directory of documents for `verify`.
    pub spec: PathBuf,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<i64>,
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Maximum number of tuples per bar degree.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ConventionArg {
    Paper,
    Classical,
}

impl Args {
    /// Command-line flags override document options.
    fn apply(&self, s: &mut Settings) {
        if let Some(n) = self.max_degree {
            s.max_degree = n;
        }
        if let Some(n) = self.from {
            s.tate_from = n;
        }
        if let Some(n) = self.to {
            s.tate_to = n;
        }
        if let Some(c) = self.convention {
            s.convention = match c {
                ConventionArg::Paper => TateConvention::Paper,
                ConventionArg::Classical => TateConvention::Classical,
            };
        }
        if self.normalized {
            s.bar.normalized = true;
        }
        if let Some(n) = self.cap {
            s.bar.cap = n;
        }
        if let Some(n) = self.p {
            s.p = n;
        }
        if let Some(n) = self.q {
            s.q = n;
        }
        if let Some(n) = self.depth {
            s.depth = n;
        }
    }
}

/// Reads and validates a problem document.
pub fn load(path: &Path) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec {
        path: "$".into(),
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    build_problem(&parse_spec(&text)?)
}

fn run_file(args: &Args, path: &Path) -> Result<Report, Error> {
    let mut problem = load(path)?;
    args.apply(&mut problem.settings);
    run(args.command, &problem)
}

/// Sorted `*.json` files of a directory.
pub fn fixture_paths(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Spec {
        path: "$".into(),
        reason: format!("cannot read {}: {e}", dir.display()),
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Runs every fixture of a directory in parallel; sub-reports keep fixture order.
/// A fixture that errors is recorded as a failed check.
fn run_dir(args: &Args, dir: &Path) -> Result<Report, Error> {
    let paths = fixture_paths(dir)?;
    let results: Vec<(String, Result<Report, Error>)> = paths
        .par_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            (name, run_file(args, p))
        })
        .collect();
    let mut report = Report::new(args.command.name());
    report.setting("fixtures", results.len());
    for (name, res) in results {
        let sub = res.unwrap_or_else(|e| {
            let mut r = Report::new(args.command.name());
            r.check("completed", false, e.to_string());
            r
        });
        report.cases.push((name, sub));
    }
    Ok(report)
}

/// Outcome of a command line: a rendered report or an error message, and the exit status.
pub enum Outcome {
    Report(String, i32),
    Error(String, i32),
}

/// Runs the command line.
pub fn execute(args: &Args) -> Outcome {
    let result = if args.spec.is_dir() {
        run_dir(args, &args.spec)
    } else {
        run_file(args, &args.spec)
    };
    match result {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            Outcome::Report(render(&report, args.format), code)
        }
        Err(e) => Outcome::Error(format!("error: {e}\n"), e.exit_code()),
    }
}
