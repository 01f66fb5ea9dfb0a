//! `mwd` — build the complexes a multiway relation generates, compute their
//! homology and persistence, and verify the equivalences relating them.

mod cmds;
mod reports;
mod util;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cmds::{Construction, Field, Side};
use util::{Failure, Format};

#[derive(Parser)]
#[command(
    name = "mwd",
    version,
    about = "Multiway Dowker complexes: construction, homology, persistence, verification",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 input error, \
                  3 usage error, 4 cell budget exceeded.\n\
                  MWD_MAX_CELLS caps cell enumeration (default 1000000)."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a complex and dump its maximal faces as JSON.
    Build(BuildArgs),
    /// Betti numbers (or integer homology) of a built complex.
    Homology(HomologyArgs),
    /// Run the invariant suite on a relation, or on random relations.
    Verify(VerifyArgs),
    /// Persistence diagrams of the filtrations a filtered relation carries.
    Persist(PersistArgs),
    /// Full atlas of a ternary relation: complexes, inclusions, maps.
    Ternary(TernaryArgs),
    /// Relative homology over the projection onto two chosen axes.
    Cofiber(CofiberArgs),
}

#[derive(Args)]
pub struct Common {
    /// Relation file, text or JSON ('-' reads stdin).
    pub input: PathBuf,
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
    /// Largest homological degree to report (must be >= 1).
    #[arg(long, default_value_t = 3, value_name = "D")]
    pub d_max: usize,
    /// Write the JSON report to this file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also print a human-readable summary to stderr.
    #[arg(long)]
    pub pretty: bool,
    /// Threads for independent complexes/diagrams; output is deterministic.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub jobs: usize,
}

impl Common {
    fn validate(&self) -> Result<(), Failure> {
        if self.d_max < 1 {
            return Err(util::usage("--d-max must be at least 1"));
        }
        if self.jobs < 1 {
            return Err(util::usage("--jobs must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub common: Common,
    /// What to build from the relation.
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// Axis (name or 0-based index) to quotient by or keep; repeatable.
    #[arg(long = "axis", value_name = "AXIS")]
    pub axes: Vec<String>,
    /// Which side of a binary relation carries the vertices (classic-dowker).
    #[arg(long, value_enum, default_value_t = Side::First)]
    pub side: Side,
}

#[derive(Args)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub build: BuildArgs,
    /// Coefficients: F2 Betti numbers, or integer homology with torsion.
    #[arg(long, value_enum, default_value_t = Field::F2)]
    pub field: Field,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Relation file (omit when using --random).
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
    /// Largest homological degree the suite checks.
    #[arg(long, default_value_t = 3, value_name = "D")]
    pub d_max: usize,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
    /// Threads across random instances; output is deterministic.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub jobs: usize,
    /// Verify this many random filtered relations instead of a file.
    #[arg(long, value_name = "N", requires = "dims")]
    pub random: Option<usize>,
    /// Axis sizes for --random, e.g. 3,3,3.
    #[arg(long, value_name = "D,D,...", requires = "random")]
    pub dims: Option<String>,
    /// Tuple density for --random, in [0, 1].
    #[arg(long, default_value_t = 0.5, requires = "random")]
    pub density: f64,
    /// RNG seed for --random.
    #[arg(long, default_value_t = 0, requires = "random")]
    pub seed: u64,
    /// Corrupt an internal complex so the suite must fail (exit 1).
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Args)]
pub struct PersistArgs {
    #[command(flatten)]
    pub common: Common,
    /// 'all' for the base filtration plus every axis, or one axis.
    #[arg(long, default_value = "all", value_name = "AXIS")]
    pub axis: String,
}

#[derive(Args)]
pub struct TernaryArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct CofiberArgs {
    #[command(flatten)]
    pub common: Common,
    /// The two axes kept by the projection, e.g. VF or V,F or 0,2.
    #[arg(long, value_name = "AB")]
    pub map: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mwd: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Build(args) => {
            args.common.validate()?;
            cmds::cmd_build(&args)
        }
        Cmd::Homology(args) => {
            args.build.common.validate()?;
            cmds::cmd_homology(&args)
        }
        Cmd::Verify(args) => verify::cmd_verify(&args),
        Cmd::Persist(args) => {
            args.common.validate()?;
            reports::cmd_persist(&args)
        }
        Cmd::Ternary(args) => {
            args.common.validate()?;
            reports::cmd_ternary(&args)
        }
        Cmd::Cofiber(args) => {
            args.common.validate()?;
            reports::cmd_cofiber(&args)
        }
    }
}
