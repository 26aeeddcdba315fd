//! `ratlink`: invariants, censuses and counting tables for rational links.

mod oeis;
mod verify;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use ratlink::census::{run_census, CensusOptions, CountTable};
use ratlink::formulas::lambda_count;
use ratlink::numtheory::to_odd_cf;
use ratlink::plat::build_ps_diagram;
use ratlink::seifert::record_for;
use ratlink::{Error, Fraction, InvariantRecord, OrientationChoice};
use serde::Serialize;

/// Largest crossing number the brute-force census accepts.
const CENSUS_MAX_N: u64 = 26;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(1, format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::new(1, format!("write failed: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "ratlink", version, about = "Invariants and censuses of oriented rational links")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Number of pieces the census work is split into.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    shards: u64,
    /// Largest crossing number accepted by `table` and `verify`.
    #[arg(long, global = true, default_value_t = 300, value_parser = clap::value_parser!(u64).range(2..))]
    max_n: u64,
    /// Directory for downloaded b-files; RATLINK_OEIS_CACHE overrides the default.
    #[arg(long, global = true)]
    oeis_cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of the link p/q.
    Classify {
        /// The fraction, as p/q with 0 < p < q.
        pq: String,
        /// Orientation of a two-component link, + or -. Defaults to +.
        #[arg(allow_hyphen_values = true)]
        orientation: Option<String>,
        /// Also print the PS-form diagram as JSON.
        #[arg(long)]
        emit_diagram: bool,
    },
    /// Counts by deficiency for every n from 2 to N_MAX.
    Table {
        n_max: u64,
        /// Recount by exhaustive enumeration and compare.
        #[arg(long)]
        census: bool,
    },
    /// Run an identity suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        n_max: u64,
    },
    /// Compare link totals to an OEIS sequence.
    Oeis {
        id: String,
        n_max: u64,
        /// Use only the bundled prefix of the sequence.
        #[arg(long)]
        offline: bool,
        /// Fail instead of using the bundled prefix when the download fails.
        #[arg(long)]
        no_fallback: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Census,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Census => "census",
            Suite::All => "all",
        }
    }
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
struct Config {
    format: Format,
    max_n: u64,
    shard_count: usize,
    oeis_cache_dir: PathBuf,
}

impl Config {
    fn from_cli(cli: &Cli) -> Self {
        let oeis_cache_dir = std::env::var_os("RATLINK_OEIS_CACHE")
            .map(PathBuf::from)
            .or_else(|| cli.oeis_cache.clone())
            .unwrap_or_else(|| std::env::temp_dir().join("ratlink-oeis"));
        Config {
            format: cli.format,
            max_n: cli.max_n,
            shard_count: cli.shards as usize,
            oeis_cache_dir,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config::from_cli(&cli);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Classify { pq, orientation, emit_diagram } => {
            classify(&config, &mut out, &pq, orientation.as_deref(), emit_diagram)
        }
        Command::Table { n_max, census } => table(&config, &mut out, n_max, census),
        Command::Verify { suite, n_max } => verify_cmd(&config, &mut out, suite, n_max),
        Command::Oeis { id, n_max, offline, no_fallback } => {
            oeis_cmd(&config, &mut out, &id, n_max, offline, !no_fallback)
        }
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ratlink: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn core_failure(e: Error) -> Failure {
    let code = match e {
        Error::IllegalOrientation { .. } => 3,
        _ => 2,
    };
    Failure::new(code, e.to_string())
}

fn write_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::new(1, e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn classify(
    config: &Config,
    out: &mut impl Write,
    pq: &str,
    orientation: Option<&str>,
    emit_diagram: bool,
) -> Result<(), Failure> {
    let f: Fraction = pq.parse().map_err(core_failure)?;
    let o = match orientation {
        None if f.is_two_component() => OrientationChoice::Plus,
        None => OrientationChoice::Forced,
        Some("+") => OrientationChoice::Plus,
        Some("-") => OrientationChoice::Minus,
        Some(other) => return Err(Failure::new(2, format!("orientation must be + or -, got {other:?}"))),
    };
    let v = to_odd_cf(&f).map_err(core_failure)?;
    let diagram = build_ps_diagram(&v, o).map_err(core_failure)?;
    let record = record_for(&diagram).map_err(core_failure)?;
    match config.format {
        Format::Json => write_json(out, &record)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(RECORD_FIELDS)?;
            w.write_record(record_cells(&record))?;
            w.flush()?;
        }
        Format::Text => {
            for (k, v) in RECORD_FIELDS.iter().zip(record_cells(&record)) {
                writeln!(out, "{k}: {v}")?;
            }
        }
    }
    if emit_diagram {
        write_json(out, &diagram)?;
    }
    Ok(())
}

const RECORD_FIELDS: [&str; 11] = [
    "pq",
    "vector",
    "signed_vector",
    "n",
    "mu",
    "s",
    "genus",
    "braid",
    "deficiency",
    "type",
    "strongly_invertible",
];

fn record_cells(r: &InvariantRecord) -> [String; 11] {
    [
        r.pq.to_string(),
        r.vector.to_string(),
        r.signed_vector.to_string(),
        r.n.to_string(),
        r.mu.to_string(),
        r.s.to_string(),
        r.genus.to_string(),
        r.braid.to_string(),
        r.deficiency.to_string(),
        r.rtype.to_string(),
        r.strongly_invertible.map(|b| b.to_string()).unwrap_or_default(),
    ]
}

fn check_range(config: &Config, n_max: u64) -> Result<(), Failure> {
    if n_max < 2 || n_max > config.max_n {
        return Err(Failure::new(2, format!("n_max must lie in 2..={}, got {n_max}", config.max_n)));
    }
    Ok(())
}

fn check_census_range(n_max: u64) -> Result<(), Failure> {
    if n_max > CENSUS_MAX_N {
        return Err(Failure::new(
            2,
            format!("the census is limited to n <= {CENSUS_MAX_N}, got {n_max}"),
        ));
    }
    Ok(())
}

fn table(config: &Config, out: &mut impl Write, n_max: u64, census: bool) -> Result<(), Failure> {
    check_range(config, n_max)?;
    if census {
        check_census_range(n_max)?;
    }
    let mut tables = Vec::new();
    let mut mismatches = Vec::new();
    for n in 2..=n_max {
        let t = CountTable::from_formulas(n).map_err(core_failure)?;
        if census {
            let opts = CensusOptions { shards: config.shard_count, keep_entries_up_to: 0 };
            let c = run_census(n, &opts).map_err(core_failure)?.count_table();
            mismatches.extend(diff_tables(&t, &c));
        }
        tables.push(t);
    }
    write_tables(config.format, out, &tables)?;
    if let Some(first) = mismatches.first() {
        for m in &mismatches {
            eprintln!("mismatch: {m}");
        }
        return Err(Failure::new(4, format!("census disagrees with closed forms at {first}")));
    }
    Ok(())
}

fn diff_tables(formula: &CountTable, census: &CountTable) -> Vec<String> {
    let n = formula.n;
    let mut out = Vec::new();
    for (a, b) in formula.rows.iter().zip(&census.rows) {
        let cells = [
            ("r1", &a.r1, &b.r1),
            ("r3", &a.r3, &b.r3),
            ("rs3", &a.rs3, &b.rs3),
            ("lambda_nd", &a.lambda_nd, &b.lambda_nd),
        ];
        for (name, x, y) in cells {
            if x != y {
                out.push(format!("n = {n}, d = {}, {name}: formula {x}, census {y}", a.d));
            }
        }
    }
    if formula.rows.len() != census.rows.len() {
        out.push(format!("n = {n}: deficiency ranges differ"));
    }
    let totals = [
        ("lambda", &formula.lambda, &census.lambda),
        ("unoriented", &formula.unoriented, &census.unoriented),
        ("omega", &formula.omega, &census.omega),
        ("omega_sym", &formula.omega_sym, &census.omega_sym),
    ];
    for (name, x, y) in totals {
        if x != y {
            out.push(format!("n = {n}, {name}: formula {x}, census {y}"));
        }
    }
    out
}

fn write_tables(format: Format, out: &mut impl Write, tables: &[CountTable]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            for t in tables {
                write_json(out, t)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "d", "r1", "r3", "rs3", "lambda_nd"])?;
            for t in tables {
                for r in &t.rows {
                    w.write_record([
                        t.n.to_string(),
                        r.d.to_string(),
                        r.r1.to_string(),
                        r.r3.to_string(),
                        r.rs3.to_string(),
                        r.lambda_nd.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Format::Text => {
            let width = tables.iter().map(|t| t.rows.len()).max().unwrap_or(0);
            let mut header = vec!["n".to_string()];
            header.extend((0..width).map(|d| format!("d={d}")));
            header.push("total".into());
            writeln!(out, "{}", header.join(" | "))?;
            for t in tables {
                let mut cells = vec![t.n.to_string()];
                for d in 0..width {
                    cells.push(match t.rows.get(d) {
                        Some(r) => format!("{},{},{}", r.r1, r.r3, r.rs3),
                        None => String::new(),
                    });
                }
                cells.push(t.lambda.to_string());
                writeln!(out, "{}", cells.join(" | ").trim_end())?;
            }
        }
    }
    Ok(())
}

fn verify_cmd(config: &Config, out: &mut impl Write, suite: Suite, n_max: u64) -> Result<(), Failure> {
    check_range(config, n_max)?;
    if suite == Suite::Census {
        check_census_range(n_max)?;
    }
    let census_top = n_max.min(CENSUS_MAX_N);
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(verify::identities(n_max));
    }
    if matches!(suite, Suite::Census | Suite::All) {
        checks.extend(verify::census(census_top, config.shard_count));
    }
    if suite == Suite::All {
        checks.push(verify::published(n_max));
    }
    let report = verify::Report {
        suite: suite.name().into(),
        n_max,
        census_n_max: (suite != Suite::Identities).then_some(census_top),
        pass: checks.iter().all(|c| c.pass),
        checks,
    };
    match config.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["name", "pass", "detail"])?;
            for c in &report.checks {
                w.write_record([c.name, if c.pass { "true" } else { "false" }, &c.detail])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in &report.checks {
                writeln!(out, "{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
        }
    }
    match report.first_failure() {
        Some(c) => Err(Failure::new(5, format!("{} failed: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct TermCheck {
    n: u64,
    index: u64,
    #[serde(serialize_with = "ratlink::formulas::ser_big")]
    expected: BigUint,
    #[serde(serialize_with = "ser_opt_big")]
    sequence: Option<BigUint>,
    status: &'static str,
}

fn ser_opt_big<S: serde::Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ratlink::formulas::ser_big(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Serialize)]
struct OeisReport {
    id: &'static str,
    source: &'static str,
    n_max: u64,
    terms: Vec<TermCheck>,
    pass: bool,
}

fn oeis_cmd(
    config: &Config,
    out: &mut impl Write,
    id: &str,
    n_max: u64,
    offline: bool,
    fallback: bool,
) -> Result<(), Failure> {
    let seq = oeis::lookup(id).ok_or_else(|| Failure::new(2, format!("unsupported sequence {id:?}")))?;
    check_range(config, n_max)?;
    let (terms, source) = oeis::load(seq, offline, fallback, &config.oeis_cache_dir)?;
    let mut checks = Vec::new();
    let mut m = seq.first_index;
    while (seq.crossings)(m) <= n_max {
        let n = (seq.crossings)(m);
        let expected = lambda_count(n).map_err(core_failure)?;
        let got = terms.get(&m).cloned();
        let status = match &got {
            None => "missing",
            Some(v) if *v == expected => "match",
            Some(_) => "mismatch",
        };
        checks.push(TermCheck { n, index: m, expected, sequence: got, status });
        m += 1;
    }
    let report = OeisReport {
        id: seq.id,
        source: source.name(),
        n_max,
        pass: checks.iter().all(|c| c.status != "mismatch"),
        terms: checks,
    };
    match config.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "index", "expected", "sequence", "status"])?;
            for c in &report.terms {
                w.write_record([
                    c.n.to_string(),
                    c.index.to_string(),
                    c.expected.to_string(),
                    c.sequence.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                    c.status.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{} ({})", report.id, report.source)?;
            for c in &report.terms {
                let seq_v = c.sequence.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                writeln!(out, "n={} a({})={} expected={} {}", c.n, c.index, seq_v, c.expected, c.status)?;
            }
        }
    }
    if let Some(bad) = report.terms.iter().find(|c| c.status == "mismatch") {
        return Err(Failure::new(
            7,
            format!("{} a({}) differs from the count for n = {}", seq.id, bad.index, bad.n),
        ));
    }
    let missing: Vec<u64> = report.terms.iter().filter(|c| c.status == "missing").map(|c| c.n).collect();
    if !missing.is_empty() {
        eprintln!("note: {} has no terms for n in {missing:?}", source.name());
    }
    Ok(())
}
