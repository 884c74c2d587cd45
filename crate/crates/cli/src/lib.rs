//! The `edlab` command line: `analyze`, `table`, `alpha` and `selftest`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use edlab::db::{Database, COVERED_ORDER};
use edlab::dsl::{GapId, ManifestError};
use edlab::ed::export::{explanation, trace_text};
use edlab::ed::{alpha_ratio, EdError, Engine, Inference};
use edlab::group::morphism::DEFAULT_BUDGET;

pub mod render;
pub mod selftest;

pub use render::{OutputRecord, TableFormat};
pub use selftest::Level;

#[derive(Debug, Parser)]
#[command(name = "edlab", version, about = "Representation and essential dimension of groups of order at most 63")]
pub struct Cli {
    /// Manifest to load instead of the bundled one (or $EDLAB_MANIFEST).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Node budget for embedding searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Print derivation traces.
    #[arg(long, global = true, overrides_with = "no_trace")]
    pub trace: bool,
    #[arg(long = "no-trace", global = true)]
    pub no_trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants, characters, rd and the ed interval of one group.
    Analyze { order: usize, index: usize },
    /// One row per non-abelian group with order in `LO..HI`.
    Table {
        range: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
    },
    /// Minimum of ed/rd over groups of order at most N.
    Alpha { n: usize },
    /// Character-table checks, the expected-results regression, replay and idempotence.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown group {0}")]
    UnknownId(GapId),
    #[error("bad range {0:?}: expected LO..HI with 1 <= LO <= HI <= {COVERED_ORDER}")]
    BadRange(String),
    #[error("n must lie in 2..={COVERED_ORDER}, got {0}")]
    BadN(usize),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Ed(#[from] EdError),
    #[error("selftest failed")]
    Regression,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for failed checks, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Ed(_) | CliError::Regression | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::UnknownId(_) | CliError::BadRange(_) | CliError::BadN(_) | CliError::Manifest(_) => 2,
        }
    }
}

impl Cli {
    fn trace_or(&self, default: bool) -> bool {
        if self.trace {
            true
        } else if self.no_trace {
            false
        } else {
            default
        }
    }

    fn database(&self) -> Result<Database, CliError> {
        Ok(match &self.manifest {
            Some(path) => Database::load(path)?,
            None => Database::load_default()?,
        })
    }
}

/// Parses `LO..HI` with both ends inside the covered orders.
pub fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::BadRange(s.to_string());
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let lo: usize = a.trim().parse().map_err(|_| bad())?;
    let hi: usize = b.trim().parse().map_err(|_| bad())?;
    if lo < 1 || lo > hi || hi > COVERED_ORDER {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn infer(db: &Database, budget: u64) -> Result<Inference, CliError> {
    Ok(Engine::new(db, budget)?.run()?)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze { order, index } => analyze(cli, GapId::new(*order, *index), out),
        Command::Table { range, format } => {
            let (lo, hi) = parse_range(range)?;
            let db = cli.database()?;
            let inf = infer(&db, cli.budget)?;
            let rows = render::rows(&db, &inf, lo, hi, cli.trace_or(false));
            render::write_table(&rows, *format, out)
        }
        Command::Alpha { n } => {
            if !(2..=COVERED_ORDER).contains(n) {
                return Err(CliError::BadN(*n));
            }
            let db = cli.database()?;
            let inf = infer(&db, cli.budget)?;
            let report = alpha_ratio(&db, &inf, *n).ok_or(CliError::BadN(*n))?;
            writeln!(out, "{report}")?;
            writeln!(out, "{}", report.demonstration())?;
            Ok(())
        }
        Command::Selftest { level } => {
            let report = selftest::run(cli.manifest.as_deref(), *level, cli.budget)?;
            write!(out, "{report}")?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Regression)
            }
        }
    }
}

fn analyze(cli: &Cli, id: GapId, out: &mut dyn Write) -> Result<(), CliError> {
    let db = cli.database()?;
    let record = db.get(id).ok_or(CliError::UnknownId(id))?;
    let inf = infer(&db, cli.budget)?;
    let fact = inf.get(id).ok_or(CliError::UnknownId(id))?;
    let g = &record.group;
    let inv = g.invariants();
    let analysis = record.analysis().map_err(|e| EdError::CharacterTable {
        id,
        source: e.clone(),
    })?;
    let table = &analysis.table;

    writeln!(out, "{id} {}", record.entry.structure)?;
    writeln!(out, "  construction  {}", record.entry.expr)?;
    writeln!(
        out,
        "  order {}, exponent {}, {} classes, |Z| = {}, |G'| = {}",
        inv.order,
        inv.exponent,
        table.len(),
        inv.center_order,
        inv.derived_order
    )?;
    let degrees: Vec<String> = table.degrees.iter().map(usize::to_string).collect();
    writeln!(out, "  character degrees  {}", degrees.join(" "))?;
    let chosen: Vec<String> = analysis
        .witness
        .characters
        .iter()
        .map(|&i| format!("chi{} (degree {})", i + 1, table.degrees[i]))
        .collect();
    writeln!(out, "  rd {}  faithful sum {}", analysis.rd, chosen.join(" + "))?;
    writeln!(out, "  ed [{}, {}]  {}", fact.lo, fact.hi, explanation(fact))?;
    if cli.trace_or(true) {
        writeln!(out)?;
        write!(out, "{}", trace_text(fact))?;
    }
    Ok(())
}
