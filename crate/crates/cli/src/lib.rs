//! Batch front end: loads algebra, map and graph files, runs one check and
//! prints a text or JSON report.
//!
//! Exit codes: 0 pass, 1 property failure (with witness), 2 input or usage
//! error, 3 cap exceeded.

mod commands;
mod dot;
mod load;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use gummcalc::{Caps, Error};

pub use dot::{graph_dot, lattice_dot};
pub use report::{OracleRun, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "gummcalc", version, about = "Finite universal-algebra workbench")]
struct Cli {
    /// Machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Print a DOT document (lattice for `con`, graph for `category`/`groupoid`).
    #[arg(long, global = true)]
    dot: bool,
    /// Search node budget, enumeration limit and largest lattice kept.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,
    /// Cross-run against the naive oracle where one exists.
    #[arg(long, global = true, hide = true)]
    oracle: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Congruence lattice.
    Con { file: PathBuf },
    /// Lattice conditions and term conditions.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Internal subtractions and their groups.
    Subtraction { file: PathBuf },
    /// Internal Mal'tsev operations.
    Maltsev { file: PathBuf },
    /// Diagonal punctuation.
    Dp { file: PathBuf },
    /// Universal abelian split epimorphism of a split epi.
    DpSplit {
        file: PathBuf,
        #[arg(long)]
        epi: PathBuf,
        #[arg(long)]
        section: PathBuf,
        /// Codomain algebra; defaults to the quotient by the kernel of the epi.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Direction of a surjection with centralizing kernel pair.
    Direction {
        file: PathBuf,
        #[arg(long)]
        onto: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Connector between two congruences.
    Connector {
        file: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
    },
    /// Groupoid structure from the connector on a reflexive graph.
    Groupoid { graph: PathBuf },
    /// Internal category structures on a reflexive graph.
    Category { graph: PathBuf },
    /// Axiom ∗ instances between two pointed algebras.
    AxiomStar {
        x: PathBuf,
        z: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Punctual relations and their instance checks.
    Punctual { x: PathBuf, z: PathBuf },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    Shifting { file: PathBuf },
    Modular { file: PathBuf },
    Cube { file: PathBuf },
    Hex {
        file: PathBuf,
        #[arg(long)]
        circ: String,
        #[arg(long)]
        upsilon: String,
    },
    Hypo {
        file: PathBuf,
        #[arg(long)]
        d: String,
        #[arg(long)]
        eps: String,
    },
}

/// Anything that stops a command before it produces a report.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

/// What a command hands back: a report, or a DOT document.
pub(crate) enum Output {
    Report(Report),
    Dot(String, Report),
}

pub(crate) struct Ctx {
    pub caps: Caps,
    pub oracle: bool,
    pub dot: bool,
}

/// Runs one command line, writing to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut caps = Caps::from_env();
    if let Some(n) = cli.cap {
        caps = caps.with_budget(n);
    }
    let ctx = Ctx { caps, oracle: cli.oracle, dot: cli.dot };
    let (check, inputs) = describe(&cli.cmd);
    let start = Instant::now();
    let result = dispatch(&cli.cmd, &ctx);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (mut report, dot) = match result {
        Ok(Output::Report(r)) => (r, None),
        Ok(Output::Dot(d, r)) => (r, Some(d)),
        Err(e) => (error_report(&check, &inputs, e), None),
    };
    if cli.timing {
        report.timing_ms = Some(elapsed);
    }
    let code = match (&report.status, &report.witness) {
        (Status::Error, _) if report.counts.contains_key("cap_exceeded") => 3,
        _ => report.exit_code(),
    };
    let written = match dot {
        Some(d) if report.status != Status::Error => out.write_all(d.as_bytes()),
        _ if cli.json => report.write_json(out),
        _ => report.write_text(out),
    };
    if written.is_err() {
        return 2;
    }
    code
}

fn error_report(check: &str, inputs: &[String], e: CliError) -> Report {
    let mut r = Report::new(check, inputs);
    r.summary = e.to_string();
    match e {
        CliError::Core(Error::OutsideGuarantees { witness, .. }) => {
            r.fail(witness);
        }
        CliError::Core(Error::NotUnique(_)) | CliError::Core(Error::NotGroup(_)) => {
            r.status = Status::Fail;
        }
        CliError::Core(Error::CapExceeded { .. }) => {
            r.status = Status::Error;
            r.count("cap_exceeded", 1);
        }
        _ => r.status = Status::Error,
    }
    r
}

fn describe(cmd: &Cmd) -> (String, Vec<String>) {
    let p = |p: &PathBuf| p.display().to_string();
    let (name, inputs): (&str, Vec<String>) = match cmd {
        Cmd::Con { file } => ("con", vec![p(file)]),
        Cmd::Check { which } => match which {
            CheckCmd::Shifting { file } => ("check shifting", vec![p(file)]),
            CheckCmd::Modular { file } => ("check modular", vec![p(file)]),
            CheckCmd::Cube { file } => ("check cube", vec![p(file)]),
            CheckCmd::Hex { file, .. } => ("check hex", vec![p(file)]),
            CheckCmd::Hypo { file, .. } => ("check hypo", vec![p(file)]),
        },
        Cmd::Subtraction { file } => ("subtraction", vec![p(file)]),
        Cmd::Maltsev { file } => ("maltsev", vec![p(file)]),
        Cmd::Dp { file } => ("dp", vec![p(file)]),
        Cmd::DpSplit { file, epi, section, .. } => ("dp-split", vec![p(file), p(epi), p(section)]),
        Cmd::Direction { file, onto, .. } => ("direction", vec![p(file), p(onto)]),
        Cmd::Connector { file, .. } => ("connector", vec![p(file)]),
        Cmd::Groupoid { graph } => ("groupoid", vec![p(graph)]),
        Cmd::Category { graph } => ("category", vec![p(graph)]),
        Cmd::AxiomStar { x, z, .. } => ("axiom-star", vec![p(x), p(z)]),
        Cmd::Punctual { x, z } => ("punctual", vec![p(x), p(z)]),
    };
    (name.to_string(), inputs)
}

fn dispatch(cmd: &Cmd, ctx: &Ctx) -> Result<Output, CliError> {
    use commands as c;
    let (check, inputs) = describe(cmd);
    let rep = Report::new(&check, &inputs);
    if ctx.dot && !matches!(cmd, Cmd::Con { .. } | Cmd::Category { .. } | Cmd::Groupoid { .. }) {
        return Err(CliError::Usage("--dot applies to con, category and groupoid".into()));
    }
    match cmd {
        Cmd::Con { file } => c::con(rep, file, ctx),
        Cmd::Check { which } => match which {
            CheckCmd::Shifting { file } => c::shifting(rep, file, ctx),
            CheckCmd::Modular { file } => c::modular(rep, file, ctx),
            CheckCmd::Cube { file } => c::cube(rep, file, ctx),
            CheckCmd::Hex { file, circ, upsilon } => c::hex(rep, file, circ, upsilon),
            CheckCmd::Hypo { file, d, eps } => c::hypo(rep, file, d, eps),
        },
        Cmd::Subtraction { file } => c::subtraction(rep, file, ctx),
        Cmd::Maltsev { file } => c::maltsev(rep, file, ctx),
        Cmd::Dp { file } => c::dp(rep, file, ctx),
        Cmd::DpSplit { file, epi, section, base } => c::dp_split(rep, file, epi, section, base.as_deref(), ctx),
        Cmd::Direction { file, onto, base } => c::direction(rep, file, onto, base.as_deref(), ctx),
        Cmd::Connector { file, r, s } => c::connector(rep, file, r, s, ctx),
        Cmd::Groupoid { graph } => c::groupoid(rep, graph, ctx),
        Cmd::Category { graph } => c::category(rep, graph, ctx),
        Cmd::AxiomStar { x, z, relation, t } => c::axiom_star(rep, x, z, relation.as_deref(), t.as_deref(), ctx),
        Cmd::Punctual { x, z } => c::punctual(rep, x, z, ctx),
    }
}
