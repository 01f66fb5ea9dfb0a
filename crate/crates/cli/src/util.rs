//! Exit-code plumbing, input loading, and report emission shared by all
//! subcommands.

use std::fs;
use std::io::Read;
use std::path::Path;

use mwd_core::relation::{ParsedRelation, Relation};
use mwd_core::Error as CoreError;

/// Command failure carrying the process exit code:
/// 1 verification failure, 2 input error, 3 usage error, 4 cell budget.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn verification(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

pub fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Parse { .. }
            | CoreError::Json(_)
            | CoreError::DuplicateTuple(_)
            | CoreError::AtomOutOfRange { .. } => 2,
            CoreError::AxisOutOfRange { .. } | CoreError::ArityMismatch { .. } => 3,
            CoreError::CellBudget { .. } => 4,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

/// Enumeration cap, overridable through MWD_MAX_CELLS.
pub fn cell_cap() -> Result<usize, Failure> {
    match std::env::var("MWD_MAX_CELLS") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_CELLS),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(usage("MWD_MAX_CELLS is not valid unicode"))
        }
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("MWD_MAX_CELLS must be a positive integer, got {s:?}"))),
    }
}

#[derive(Copy, Clone, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Detect JSON by a leading '{', text otherwise.
    Auto,
    Text,
    Json,
}

/// Reads and parses a relation file; `-` reads standard input.
pub fn load_relation(path: &Path, format: Format) -> Result<ParsedRelation, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    let looks_json = text.trim_start().starts_with('{');
    match format {
        Format::Text if looks_json => {
            return Err(input_error("--format text, but the input looks like JSON"));
        }
        Format::Json if !looks_json => {
            return Err(input_error("--format json, but the input is not a JSON object"));
        }
        _ => {}
    }
    Ok(mwd_core::relation::parse_relation(&text)?)
}

/// Resolves an `--axis` selection, either a 0-based index or an axis name.
pub fn resolve_axis(r: &Relation, sel: &str) -> Result<usize, Failure> {
    if let Ok(k) = sel.parse::<usize>() {
        return if k < r.arity() {
            Ok(k)
        } else {
            Err(usage(format!("axis {k} out of range for arity {}", r.arity())))
        };
    }
    r.axis_by_label(sel).ok_or_else(|| {
        let names: Vec<&str> = r.axes().iter().map(|a| a.label.as_str()).collect();
        usage(format!("unknown axis {sel:?}; axes are {}", names.join(", ")))
    })
}

pub fn axis_labels(axes: &[mwd_core::relation::IndexSet]) -> Vec<String> {
    axes.iter().map(|a| a.label.clone()).collect()
}

pub fn axis_dims(axes: &[mwd_core::relation::IndexSet]) -> Vec<usize> {
    axes.iter().map(|a| a.len()).collect()
}

/// Writes the JSON report (compact, keys sorted) to stdout or `--output`.
pub fn emit(output: Option<&Path>, report: &serde_json::Value) -> Result<(), Failure> {
    let line = format!("{report}\n");
    match output {
        Some(path) => fs::write(path, line)
            .map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{line}");
            Ok(())
        }
    }
}

/// Runs `work` on a dedicated thread pool of `jobs` threads, so parallelism
/// is opt-in and reports stay deterministic (results are merged in task
/// order regardless of scheduling).
pub fn with_pool<T: Send>(
    jobs: usize,
    work: impl FnOnce() -> T + Send,
) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(work))
}
