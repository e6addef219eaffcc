//! `wdorb`: counts, tables, point exports and verification for the
//! Prym-Teichmüller curves `W_D(4)`.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 data error,
//! 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use prym_orbifold::discriminant::{validate, Discriminant, DiscriminantError};
use prym_orbifold::forms::{
    enumerate_h2, enumerate_h3, orbifold_counts, FormsError, OrbifoldCounts, Triple,
};
use prym_orbifold::render::{export_csv, render_svg, PlotSpec};
use prym_orbifold::topology::{
    genus_from_invariants, parse_expected_csv, table_discriminants, CurveTopology, ExpectedRow,
    FixtureSet, TopologyError, TABLE1_EXPECTED_CSV,
};

pub mod verify;

pub const FIXTURES_ENV: &str = "WDORB_FIXTURES";
pub const EMPTY_WARNING: &str = "W_D(4) is empty for D≡5 mod 8";
const MAX_JOBS: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "wdorb",
    version,
    about = "Orbifold points on Prym-Teichmüller curves W_D(4)"
)]
pub struct Cli {
    /// Worker threads for ranged commands
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbifold point counts e2, e3, e4, e6
    Counts {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The triples of H2(D) or H3(D)
    Triples {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Genus and orbifold counts for a range of discriminants
    Table(TableArgs),
    /// Export orbifold points as SVG and/or CSV
    Points {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        order: u32,
        /// SVG output path, `-` for standard output
        #[arg(long)]
        svg: Option<PathBuf>,
        /// CSV output path, `-` for standard output
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the consistency checks for one D or a range
    Verify {
        #[arg(allow_negative_numbers = true)]
        d: Option<i64>,
        #[arg(long, requires = "max", conflicts_with = "d")]
        min: Option<i64>,
        #[arg(long, requires = "min", conflicts_with = "d")]
        max: Option<i64>,
        #[arg(long, value_enum, default_value_t = Depth::Fast)]
        depth: Depth,
    },
    /// Conductor and fundamental part of D
    Conductor {
        #[arg(allow_negative_numbers = true)]
        d: i64,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub min: i64,
    #[arg(long)]
    pub max: i64,
    /// χ/C fixture CSV; defaults to the shipped table
    #[arg(long, env = FIXTURES_ENV)]
    pub fixtures: Option<PathBuf>,
    /// Reference CSV with header `D,genus,e2,e3`; defaults to the shipped table
    #[arg(long)]
    pub expected: Option<PathBuf>,
    /// Compare every row against the reference
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Depth {
    Fast,
    Full,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<DiscriminantError> for CliError {
    fn from(e: DiscriminantError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<FormsError> for CliError {
    fn from(e: FormsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<TopologyError> for CliError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::EmptyCurve(_) | TopologyError::Discriminant(_) => {
                CliError::Domain(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCounts {
    #[serde(rename = "2")]
    pub e2: u64,
    #[serde(rename = "3")]
    pub e3: u64,
    #[serde(rename = "4")]
    pub e4: u64,
    #[serde(rename = "6")]
    pub e6: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleList {
    pub order: u32,
    pub values: Vec<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsRecord {
    #[serde(rename = "D")]
    pub d: i64,
    pub e: OrderCounts,
    pub h2_size: usize,
    pub h3_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<TripleList>,
}

impl CountsRecord {
    pub fn new(d: i64, c: &OrbifoldCounts) -> Self {
        CountsRecord {
            d,
            e: OrderCounts {
                e2: c.e2,
                e3: c.e3,
                e4: c.e4,
                e6: c.e6,
            },
            h2_size: c.h2_size,
            h3_size: c.h3_size,
            triples: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Counts { d, format } => counts(*d, *format, out, err),
        Command::Triples { d, order, format } => triples(*d, *order, *format, out, err),
        Command::Table(args) => table(args, &worker_pool(cli.jobs)?, out, err),
        Command::Points { d, order, svg, csv } => {
            points(*d, *order, svg.as_deref(), csv.as_deref(), out, err)
        }
        Command::Verify { d, min, max, depth } => {
            let (lo, hi) = match (d, min, max) {
                (Some(d), _, _) => (*d, *d),
                (None, Some(lo), Some(hi)) => (*lo, *hi),
                _ => return Err(CliError::Domain("verify needs D or --min/--max".into())),
            };
            verify::run_range(
                lo,
                hi,
                *depth,
                d.is_some(),
                &worker_pool(cli.jobs)?,
                out,
                err,
            )
        }
        Command::Conductor { d } => {
            let disc = validate(*d)?;
            writeln!(
                out,
                "D={} f0={} D0={}",
                disc.value(),
                disc.conductor(),
                disc.fundamental_part()
            )?;
            Ok(())
        }
    }
}

/// Bounded pool for fan-out over discriminants.
pub fn worker_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let n = jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map_or(1, |n| n.get())
                .min(MAX_JOBS)
        })
        .max(1);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Data(format!("worker pool: {e}")))
}

fn validated(d: i64, err: &mut dyn Write) -> Result<Discriminant, CliError> {
    let disc = validate(d)?;
    if disc.wd_empty() {
        writeln!(err, "warning: {EMPTY_WARNING} (D = {d})")?;
    }
    Ok(disc)
}

fn counts(
    d: i64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let disc = validated(d, err)?;
    let c = orbifold_counts(&disc)?;
    match format {
        Format::Text => writeln!(
            out,
            "D={d} e2={} e3={} e4={} e6={} |H2|={} |H3|={}",
            c.e2, c.e3, c.e4, c.e6, c.h2_size, c.h3_size
        )?,
        Format::Json => writeln!(out, "{}", to_json(&CountsRecord::new(d, &c))?)?,
        Format::Csv => {
            writeln!(out, "D,e2,e3,e4,e6,h2_size,h3_size")?;
            writeln!(
                out,
                "{d},{},{},{},{},{},{}",
                c.e2, c.e3, c.e4, c.e6, c.h2_size, c.h3_size
            )?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string(v).map_err(|e| CliError::Data(e.to_string()))
}

fn order_triples(disc: &Discriminant, order: u32) -> Vec<Triple> {
    if order == 2 {
        enumerate_h2(disc)
    } else {
        enumerate_h3(disc)
    }
}

fn triples(
    d: i64,
    order: u32,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let disc = validated(d, err)?;
    let ts = order_triples(&disc, order);
    match format {
        Format::Text => {
            for t in &ts {
                writeln!(out, "{t}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "a,b,c")?;
            for t in &ts {
                writeln!(out, "{},{},{}", t.a, t.b, t.c)?;
            }
        }
        Format::Json => {
            let mut rec = CountsRecord::new(d, &orbifold_counts(&disc)?);
            rec.triples = Some(TripleList {
                order,
                values: ts.iter().map(|t| [t.a, t.b, t.c]).collect(),
            });
            writeln!(out, "{}", to_json(&rec)?)?;
        }
    }
    Ok(())
}

fn write_target(path: &Path, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    if path == Path::new("-") {
        out.write_all(bytes)?;
    } else {
        fs::write(path, bytes)
            .map_err(|e| CliError::Data(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn points(
    d: i64,
    order: u32,
    svg: Option<&Path>,
    csv: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let disc = validated(d, err)?;
    let spec = if order == 2 {
        PlotSpec::order2(&disc)
    } else {
        PlotSpec::order3(&disc)
    }
    .map_err(|e| CliError::Domain(e.to_string()))?;
    if let Some(path) = svg {
        let bytes = render_svg(&spec).map_err(|e| CliError::Domain(e.to_string()))?;
        write_target(path, &bytes, out)?;
    }
    match (svg, csv) {
        (_, Some(path)) => write_target(path, &export_csv(&spec), out)?,
        (None, None) => out.write_all(&export_csv(&spec))?,
        _ => {}
    }
    Ok(())
}

fn load_fixtures(path: Option<&Path>) -> Result<FixtureSet, CliError> {
    match path {
        None => Ok(FixtureSet::shipped()),
        Some(p) => {
            let file = fs::File::open(p)
                .map_err(|e| CliError::Data(format!("fixtures {}: {e}", p.display())))?;
            Ok(FixtureSet::read_csv(io::BufReader::new(file))?)
        }
    }
}

fn load_expected(path: Option<&Path>) -> Result<Vec<ExpectedRow>, CliError> {
    let text = match path {
        None => TABLE1_EXPECTED_CSV.to_string(),
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::Data(format!("expected {}: {e}", p.display())))?,
    };
    Ok(parse_expected_csv(&text)?)
}

fn table(
    args: &TableArgs,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if args.min > args.max {
        return Err(CliError::Domain(format!(
            "empty range {}..{}",
            args.min, args.max
        )));
    }
    if args.min == args.max {
        let d = validate(args.min)?;
        if d.wd_empty() {
            return Err(CliError::Domain(format!(
                "{EMPTY_WARNING} (D = {})",
                args.min
            )));
        }
    }
    let fixtures = load_fixtures(args.fixtures.as_deref())?;
    let (lo, hi) = match (fixtures.iter().next(), fixtures.iter().last()) {
        (Some(a), Some(b)) => (a.d, b.d),
        _ => return Err(CliError::Data("fixture file has no rows".into())),
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for d in table_discriminants(args.min, args.max) {
        match fixtures.get(d.value()) {
            Some(_) => rows.push(d),
            None if d.value() < lo || d.value() > hi => skipped.push(d.value()),
            None => return Err(TopologyError::MissingFixture(d.value()).into()),
        }
    }
    if !skipped.is_empty() {
        writeln!(
            err,
            "note: no fixture rows outside D = {lo}..{hi}; skipped {skipped:?}"
        )?;
    }
    if rows.is_empty() {
        return Err(CliError::Data(format!(
            "no fixture rows for D in {}..{}",
            args.min, args.max
        )));
    }
    let expected = if args.check {
        Some(load_expected(args.expected.as_deref())?)
    } else {
        None
    };

    let results: Vec<(Discriminant, Result<CurveTopology, CliError>)> = pool.install(|| {
        rows.par_iter()
            .map(|d| {
                let r = orbifold_counts(d).map_err(CliError::from).and_then(|c| {
                    genus_from_invariants(fixtures.get(d.value()).unwrap(), &c, d)
                        .map_err(CliError::from)
                });
                (*d, r)
            })
            .collect()
    });

    let mut mismatches = 0;
    for (d, r) in results {
        let want = expected
            .as_ref()
            .and_then(|e| e.iter().find(|x| x.d == d.value()));
        match (r, &expected) {
            (Ok(t), _) => {
                let status = match (&expected, want) {
                    (None, _) => "",
                    (Some(_), None) => " UNCHECKED",
                    (Some(_), Some(w)) if (w.genus, w.e2, w.e3) == (t.genus, t.e2, t.e3) => {
                        " MATCH"
                    }
                    (Some(_), Some(_)) => {
                        mismatches += 1;
                        " MISMATCH"
                    }
                };
                writeln!(
                    out,
                    "D={} chi={} C={} h0={} e2={} e3={} e4={} e6={} g={}{status}",
                    t.d,
                    fmt_rational(t.chi),
                    t.cusps,
                    t.components,
                    t.e2,
                    t.e3,
                    t.e4,
                    t.e6,
                    t.genus
                )?;
            }
            // a fixture that yields no genus cannot match a reference row
            (Err(CliError::Data(msg)), Some(_)) => {
                mismatches += 1;
                writeln!(out, "D={} MISMATCH ({msg})", d.value())?;
            }
            (Err(e), _) => return Err(e),
        }
    }
    if mismatches > 0 {
        return Err(CliError::Verification(format!(
            "{mismatches} row(s) differ from the reference table"
        )));
    }
    Ok(())
}

fn fmt_rational(x: Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
