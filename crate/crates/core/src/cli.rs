//! The `miura` command-line front end.
//!
//! Results go to standard output as JSON (or JSONL for enumeration);
//! diagnostics go to standard error. Exit codes: 0 pass, 1 semantic failure,
//! 2 malformed input, 3 not applicable.

use std::fs;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builders;
use crate::error::Error;
use crate::io::{parse_graph, parse_numbering, Numbering, NumberingFile};
use crate::miura::miura_transform;
use crate::numbering::{exponent_of, radii_of, ExponentVector, Kind, Prime};
use crate::search::{self, CensusReport, EnumerationQuery};
use crate::semigraph::MarkedSemiGraph;
use crate::verify::{self, Status, TheoremReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;

/// Primes checked by `verify pp004` without `--p`.
pub const PP004_BOUND: u32 = 31;
/// Primes used by `verify p048|structure|miura` without `--p`.
pub const DEFAULT_PRIMES: [u32; 4] = [5, 7, 11, 13];

#[derive(Parser, Debug)]
#[command(
    name = "miura",
    version,
    about = "Balanced and strict numberings on trivalent semi-graphs",
    after_help = "Set MIURA_THREADS to a positive integer to cap the worker count."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a graph is a connected, stable, 3-regular marked semi-graph.
    Validate {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Stream every numbering of the given kind, one JSON object per line.
    Enumerate {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Count numberings, optionally split by exponent (strict) or radii (balanced).
    Count {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        by_exponent: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Backtracking)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Apply the Miura map to a strict numbering.
    Miura {
        numbering: PathBuf,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verifier. Without a graph, runs over the built-in corpus.
    Verify {
        #[arg(value_enum)]
        subject: Subject,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        graph: OptionalGraphArg,
    },
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Comma-separated integers, reduced mod p (so -1 means p-1).
    #[arg(long, allow_hyphen_values = true)]
    pub constraint: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct GraphArg {
    /// Graph JSON file.
    pub graph: Option<PathBuf>,
    /// Built-in graph: tripod, theta, dumbbell, loop_with_leg, lollipop,
    /// two_vertex_tree, figure or cycle:N.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
pub struct OptionalGraphArg {
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Jsonl,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Strict,
    Balanced,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Strict => Kind::Strict,
            KindArg::Balanced => Kind::Balanced,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Backtracking,
    Contraction,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Pp004,
    P048,
    Structure,
    Miura,
    Figure,
}

/// A failure that ends the command with the given exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidGraph(_) | Error::ConstraintArity { .. } | Error::NotStrict(_) => {
                EXIT_FAIL
            }
            _ => EXIT_MALFORMED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A closed downstream pipe (`miura enumerate ... | head`) is not an error.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure {
                code: EXIT_PASS,
                message: String::new(),
            };
        }
        Failure::malformed(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(f) = configure_threads() {
        let _ = writeln!(err, "error: {}", f.message);
        return f.code;
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MIURA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::malformed(format!(
            "MIURA_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { graph, format } => validate(&load_graph(&graph)?, format, out),
        Command::Enumerate {
            query,
            limit,
            format,
            graph,
        } => enumerate(&load_graph(&graph)?, &query, limit, format, out),
        Command::Count {
            query,
            by_exponent,
            method,
            format,
            graph,
        } => count(
            &load_graph(&graph)?,
            &query,
            by_exponent,
            method,
            format,
            out,
        ),
        Command::Miura {
            numbering,
            graph,
            format,
        } => apply_miura(&numbering, &load_graph(&graph)?, format, out),
        Command::Verify {
            subject,
            p,
            format,
            graph,
        } => run_verify(subject, p, &graph, format, out),
    }
}

fn load_graph(arg: &GraphArg) -> Result<MarkedSemiGraph, Failure> {
    load_named(arg.graph.as_ref(), arg.builtin.as_deref()).map(|(_, m)| m)
}

fn load_named(
    path: Option<&PathBuf>,
    builtin: Option<&str>,
) -> Result<(String, MarkedSemiGraph), Failure> {
    if let Some(name) = builtin {
        let m = builders::by_name(name)
            .ok_or_else(|| Failure::malformed(format!("unknown built-in graph `{name}`")))?;
        return Ok((name.to_string(), m));
    }
    let path = path.ok_or_else(|| Failure::malformed("no graph given"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    let m =
        parse_graph(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((name, m))
}

fn prime(p: u32) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

fn parse_constraint(p: Prime, raw: &str) -> Result<ExponentVector, Failure> {
    let raw = raw.trim();
    if raw.is_empty() || raw == "∅" {
        return Ok(ExponentVector::default());
    }
    let xs = raw
        .split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| {
                Failure::malformed(format!("constraint entry `{}` is not an integer", s.trim()))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExponentVector::from_integers(p, &xs))
}

fn build_query(q: &QueryArgs) -> Result<EnumerationQuery, Failure> {
    let p = prime(q.p)?;
    let mut query = EnumerationQuery::new(p, q.kind.into());
    if let Some(raw) = &q.constraint {
        query = query.with_constraint(parse_constraint(p, raw)?);
    }
    Ok(query)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn validate(m: &MarkedSemiGraph, format: Format, out: &mut dyn Write) -> Outcome {
    let report = m.validate();
    if format == Format::Table {
        for c in &report.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(out, "{mark:4} {}: {d}", c.name)?,
                None => writeln!(out, "{mark:4} {}", c.name)?,
            }
        }
        if let Some(t) = report.graph_type {
            writeln!(out, "type {t}")?;
        }
        if let Some(b) = report.betti {
            writeln!(out, "betti {b}")?;
        }
    } else {
        emit_json(out, &report)?;
    }
    Ok(if report.valid { EXIT_PASS } else { EXIT_FAIL })
}

/// A numbering line with the values it carries on the marked legs.
fn numbering_record(m: &MarkedSemiGraph, n: &Numbering) -> NumberingFile {
    let mut file = NumberingFile::from_numbering(m, n);
    match n {
        Numbering::Strict(a) => file.exponent = Some(exponent_of(m, a)),
        Numbering::Balanced(a) => file.radii = Some(radii_of(m, a)),
    }
    file
}

fn numbering_row(file: &NumberingFile) -> String {
    let values = file.edge_values.as_ref().or(file.branch_values.as_ref());
    let mut row: Vec<String> = values
        .into_iter()
        .flatten()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if let Some(e) = &file.exponent {
        row.push(format!("exponent={e}"));
    }
    if let Some(r) = &file.radii {
        row.push(format!("radii={r}"));
    }
    row.join(" ")
}

fn enumerate(
    m: &MarkedSemiGraph,
    q: &QueryArgs,
    limit: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let mut query = build_query(q)?;
    if let Some(n) = limit {
        query = query.with_limit(n);
    }
    let mut io_error = None;
    let mut first = true;
    if format == Format::Json {
        out.write_all(b"[")?;
    }
    search::for_each(m, &query, |n| {
        let record = numbering_record(m, &n);
        let written = match format {
            Format::Jsonl => emit_json(out, &record),
            Format::Table => writeln!(out, "{}", numbering_row(&record)),
            Format::Json => {
                let sep = if first { Ok(()) } else { out.write_all(b",") };
                sep.and_then(|_| serde_json::to_writer(&mut *out, &record).map_err(io::Error::from))
            }
        };
        first = false;
        match written {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                io_error = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if format == Format::Json {
        out.write_all(b"]\n")?;
    }
    Ok(EXIT_PASS)
}

fn census_table(out: &mut dyn Write, r: &CensusReport) -> io::Result<()> {
    writeln!(out, "{} total {}", r.method, r.total)?;
    for cell in r.by_exponent.iter().flatten() {
        writeln!(out, "  {} {}", cell.exponent, cell.count)?;
    }
    for w in &r.warnings {
        writeln!(out, "  warning: {w}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Agreement<'a> {
    agree: bool,
    reports: &'a [CensusReport],
}

fn count(
    m: &MarkedSemiGraph,
    q: &QueryArgs,
    by_exponent: bool,
    method: MethodArg,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let query = build_query(q)?.counting();
    let reports = match method {
        MethodArg::Backtracking => vec![search::count(m, &query, by_exponent)?],
        MethodArg::Contraction => vec![search::count_by_contraction(m, &query, by_exponent)?],
        MethodArg::Both => vec![
            search::count(m, &query, by_exponent)?,
            search::count_by_contraction(m, &query, by_exponent)?,
        ],
    };
    let agree = reports
        .windows(2)
        .all(|w| w[0].total == w[1].total && w[0].by_exponent == w[1].by_exponent);
    match (format, &reports[..]) {
        (Format::Table, _) => {
            for r in &reports {
                census_table(out, r)?;
            }
            if reports.len() > 1 {
                writeln!(
                    out,
                    "{}",
                    if agree {
                        "methods agree"
                    } else {
                        "METHODS DISAGREE"
                    }
                )?;
            }
        }
        (_, [single]) => emit_json(out, single)?,
        _ => emit_json(
            out,
            &Agreement {
                agree,
                reports: &reports,
            },
        )?,
    }
    Ok(if agree { EXIT_PASS } else { EXIT_FAIL })
}

fn apply_miura(
    path: &PathBuf,
    m: &MarkedSemiGraph,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_numbering(&text)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    m.graph_type()?;
    let a = match file.to_numbering(m)? {
        Numbering::Strict(a) => a,
        Numbering::Balanced(_) => {
            return Err(Error::NotStrict("input is a balanced edge numbering".into()).into())
        }
    };
    let image = miura_transform(m, &a)?;
    let mut record = NumberingFile::from_edges(m, &image.numbering);
    record.radii = Some(image.radii);
    if format == Format::Table {
        writeln!(out, "{}", numbering_row(&record))?;
    } else {
        emit_json(out, &record)?;
    }
    Ok(EXIT_PASS)
}

fn run_verify(
    subject: Subject,
    p: Option<u32>,
    graph: &OptionalGraphArg,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let primes: Vec<Prime> = match (p, subject) {
        (Some(p), _) => vec![prime(p)?],
        (None, Subject::Pp004) => Prime::up_to(PP004_BOUND),
        (None, Subject::Figure) => vec![prime(11)?],
        (None, _) => DEFAULT_PRIMES
            .iter()
            .map(|&p| prime(p))
            .collect::<Result<_, _>>()?,
    };
    let has_graph = graph.graph.is_some() || graph.builtin.is_some();

    let reports: Vec<TheoremReport> = match subject {
        Subject::Pp004 | Subject::Figure if has_graph => {
            return Err(Failure::malformed(format!(
                "`verify {}` takes no graph",
                subject_name(subject)
            )));
        }
        Subject::Pp004 => primes.iter().map(|&p| verify::verify_pp004(p)).collect(),
        Subject::Figure => {
            if primes[0].get() != 11 {
                let report = verify::verify_figure();
                let na = TheoremReport {
                    p: Some(primes[0].get()),
                    status: Status::NotApplicable,
                    observed: "the figure fixture is defined for p = 11 only".into(),
                    witnesses: Vec::new(),
                    ..report
                };
                print_reports(out, &[na], format)?;
                return Ok(EXIT_NOT_APPLICABLE);
            }
            vec![verify::verify_figure()]
        }
        Subject::P048 | Subject::Structure | Subject::Miura => {
            let graphs = if has_graph {
                vec![load_named(graph.graph.as_ref(), graph.builtin.as_deref())?]
            } else {
                builders::corpus()
            };
            let check = match subject {
                Subject::P048 => verify::verify_p048,
                Subject::Structure => verify::verify_p048_structure,
                _ => verify::verify_miura,
            };
            let mut reports = Vec::new();
            for (name, m) in &graphs {
                for &p in &primes {
                    reports.push(check(m, p)?.on_graph(name.clone()));
                }
            }
            // Over several cells, drop those the verifier does not apply to.
            if reports.len() > 1 && reports.iter().any(|r| r.status != Status::NotApplicable) {
                reports.retain(|r| r.status != Status::NotApplicable);
            }
            reports
        }
    };
    print_reports(out, &reports, format)?;
    Ok(exit_code(&reports))
}

fn subject_name(s: Subject) -> &'static str {
    match s {
        Subject::Pp004 => "pp004",
        Subject::P048 => "p048",
        Subject::Structure => "structure",
        Subject::Miura => "miura",
        Subject::Figure => "figure",
    }
}

fn exit_code(reports: &[TheoremReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        EXIT_FAIL
    } else if reports.iter().all(|r| r.status == Status::NotApplicable) {
        EXIT_NOT_APPLICABLE
    } else {
        EXIT_PASS
    }
}

fn print_reports(out: &mut dyn Write, reports: &[TheoremReport], format: Format) -> io::Result<()> {
    match (format, reports) {
        (Format::Table, _) => {
            for r in reports {
                let status = match r.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::NotApplicable => "N/A ",
                };
                let graph = r.graph.as_deref().unwrap_or("-");
                let p = r.p.map_or("-".to_string(), |p| p.to_string());
                writeln!(
                    out,
                    "{status} {:<10} {graph:<16} p={p:<3} {}",
                    r.theorem, r.observed
                )?;
            }
            Ok(())
        }
        (Format::Jsonl, _) => reports.iter().try_for_each(|r| emit_json(out, r)),
        (Format::Json, [single]) => emit_json(out, single),
        (Format::Json, _) => emit_json(out, &reports),
    }
}
