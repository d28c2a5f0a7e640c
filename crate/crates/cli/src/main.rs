use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use qweb::analysis::{
    analyze, canonical_json, fixture_table, reproduce_table, sci3, table1_reference,
    AnalysisReport, ReferenceRow, COLUMNS,
};
use qweb::context::{
    context_interval, fit_params, fit_phases, ContextWeights, FitResult, FIT_RESIDUAL_LIMIT,
};
use qweb::corpus::{count_corpus, load_corpus, marginals, tokenize, CountTable, TokenizerConfig};
use qweb::interference::{interference_interval, interference_interval_raw};
use qweb::Error;

mod exit {
    pub const FAILURE: u8 = 1;
    pub const UNREADABLE: u8 = 2;
    pub const EMPTY_CORPUS: u8 = 3;
    pub const INVALID_TABLE: u8 = 4;
    pub const TABLE_DEVIATION: u8 = 5;
    pub const INVALID_INPUT: u8 = 6;
    pub const UNREACHABLE: u8 = 7;
}

#[derive(Parser)]
#[command(
    name = "qweb",
    version,
    about = "Occurrence, co-occurrence and interference probabilities for word triples"
)]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress standard output; only the exit code reports the result.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count documents containing terms A, B and X; prints a count table.
    Count {
        /// Directory of text files, or a JSON-lines file of {"id", "text"}.
        corpus: PathBuf,
        term_a: String,
        term_b: String,
        term_x: String,
    },
    /// Probabilities, extension class, interference interval and fit for a count table.
    Analyze(TableSource),
    /// Interference interval of a table, or context interval of given probabilities.
    Interval {
        #[command(flatten)]
        source: OptionalTableSource,
        #[arg(long, conflicts_with_all = ["table", "fixture"], requires = "mu_b")]
        mu_a: Option<f64>,
        #[arg(long, requires = "mu_a")]
        mu_b: Option<f64>,
        #[command(flatten)]
        weights: WeightFlags,
    },
    /// Fit model parameters reproducing a target probability.
    Fit {
        #[arg(long)]
        mu_a: f64,
        #[arg(long)]
        mu_b: f64,
        #[arg(long)]
        target: f64,
        #[command(flatten)]
        weights: WeightFlags,
        /// Fix the weights (0.5 unless overridden) and solve only for phases.
        #[arg(long)]
        paper_mode: bool,
    },
    /// Rebuild the Fruits/Vegetables exemplar table and compare to the published cells.
    Table1 {
        #[arg(long)]
        csv: bool,
        /// JSON array of reference rows to use instead of the bundled ones.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TableSource {
    /// Count table JSON file, or `-` for stdin.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    table: Option<PathBuf>,
    /// Name of a bundled exemplar (Apple, Parsley, ..., Lentils).
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct OptionalTableSource {
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, conflicts_with = "table")]
    fixture: Option<String>,
}

#[derive(Args)]
struct WeightFlags {
    #[arg(long)]
    p_a: Option<f64>,
    #[arg(long)]
    p_b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    c_prime: Option<f64>,
}

impl WeightFlags {
    fn any(&self) -> bool {
        self.p_a.is_some() || self.p_b.is_some() || self.c.is_some() || self.c_prime.is_some()
    }

    fn resolve(&self) -> Result<ContextWeights, Failure> {
        let d = ContextWeights::default();
        ContextWeights::new(
            self.p_a.unwrap_or(d.p_a),
            self.p_b.unwrap_or(d.p_b),
            self.c.unwrap_or(d.c),
            self.c_prime.unwrap_or(d.c_prime),
        )
        .map_err(|e| Failure::new(exit::INVALID_INPUT, e))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

fn library(e: Error) -> Failure {
    let code = match e {
        Error::InvalidInput(_) => exit::INVALID_INPUT,
        Error::InvalidTable(_) | Error::InconsistentRatios(_) => exit::INVALID_TABLE,
        Error::UnreachableTarget { .. } => exit::UNREACHABLE,
        Error::Io(_) => exit::UNREADABLE,
        _ => exit::FAILURE,
    };
    Failure::new(code, e)
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    canonical_json(value).map_err(|e| Failure::new(exit::FAILURE, e))
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut buffer = String::new();
        io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| Failure::new(exit::UNREADABLE, format!("stdin: {e}")))?;
        Ok(buffer)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::new(exit::UNREADABLE, format!("{}: {e}", path.display())))
    }
}

fn load_table(path: Option<&Path>, fixture: Option<&str>) -> Result<CountTable, Failure> {
    if let Some(name) = fixture {
        return fixture_table(name).map_err(|e| match e {
            Error::InvalidInput(_) => Failure::new(exit::INVALID_INPUT, e),
            other => Failure::new(exit::INVALID_TABLE, format!("fixture {name}: {other}")),
        });
    }
    let path = path.ok_or_else(|| Failure::new(exit::FAILURE, "no count table given"))?;
    let text = read_source(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(exit::INVALID_TABLE, format!("invalid count table: {e}")))
}

fn normalize_term(term: &str) -> Result<String, Failure> {
    let mut tokens = tokenize(term, &TokenizerConfig::default());
    if tokens.len() != 1 {
        return Err(Failure::new(
            exit::INVALID_INPUT,
            format!("term {term:?} is not a single word"),
        ));
    }
    Ok(tokens.remove(0))
}

fn cmd_count(corpus: &Path, a: &str, b: &str, x: &str) -> Result<String, Failure> {
    let (a, b, x) = (normalize_term(a)?, normalize_term(b)?, normalize_term(x)?);
    let documents = load_corpus(corpus, &TokenizerConfig::default()).map_err(|e| match e {
        Error::Io(_) => Failure::new(exit::UNREADABLE, e),
        other => Failure::new(exit::UNREADABLE, other),
    })?;
    if documents.is_empty() {
        return Err(Failure::new(
            exit::EMPTY_CORPUS,
            format!("{}: corpus is empty", corpus.display()),
        ));
    }
    let table = marginals(&count_corpus(&documents, &a, &b, &x));
    json(&table)
}

fn report_text(report: &AnalysisReport) -> String {
    let t = &report.table;
    let f = &report.fit;
    let mut out = String::new();
    out.push_str(&format!(
        "counts      n_a={} n_b={} n_ab={} n_ax={} n_bx={} n_abx={}\n",
        t.n_a(),
        t.n_b(),
        t.n_ab(),
        t.n_ax(),
        t.n_bx(),
        t.n_abx()
    ));
    out.push_str(&format!(
        "mu_a        {}\nmu_b        {}\nmu_ab       {}\n",
        sci3(report.triple.mu_a.value()),
        sci3(report.triple.mu_b.value()),
        sci3(report.triple.mu_ab_observed.value())
    ));
    out.push_str(&format!("extension   {:?}\n", report.extension));
    out.push_str(&format!(
        "interval    [{}, {}]\n",
        sci3(report.interference.lo.value()),
        sci3(report.interference.hi.value())
    ));
    out.push_str(&format!(
        "interference only  {}\n",
        report.interference_only_feasible
    ));
    out.push_str(&format!(
        "context only       {}\n",
        report.context_only_feasible
    ));
    out.push_str(&fit_text(f));
    out
}

fn fit_text(f: &FitResult) -> String {
    let p = &f.params;
    format!(
        "fit         {:?}\n  p_a={} p_b={} c={} c'={} phi={} phi'={}\n  residual={:e}\n",
        f.strategy,
        sci3(p.p_a),
        sci3(p.p_b),
        sci3(p.c),
        sci3(p.c_prime),
        sci3(p.phi),
        sci3(p.phi_prime),
        f.residual
    )
}

fn cmd_analyze(source: &TableSource, as_json: bool) -> Result<String, Failure> {
    let table = load_table(source.table.as_deref(), source.fixture.as_deref())?;
    let report = analyze(&table).map_err(library)?;
    if as_json {
        json(&report)
    } else {
        Ok(report_text(&report))
    }
}

fn cmd_interval(
    source: &OptionalTableSource,
    mu: Option<(f64, f64)>,
    weights: &WeightFlags,
    as_json: bool,
) -> Result<String, Failure> {
    if let Some((mu_a, mu_b)) = mu {
        let interval = context_interval(mu_a, mu_b, &weights.resolve()?).map_err(library)?;
        return if as_json {
            json(&interval)
        } else {
            Ok(format!(
                "[{}, {}]\n",
                sci3(interval.lo.value()),
                sci3(interval.hi.value())
            ))
        };
    }
    if weights.any() {
        return Err(Failure::new(
            exit::INVALID_INPUT,
            "weight flags require --mu-a and --mu-b",
        ));
    }
    let table = load_table(source.table.as_deref(), source.fixture.as_deref())?;
    let interval = interference_interval(&table).map_err(library)?;
    let raw = interference_interval_raw(&table).map_err(library)?;
    if as_json {
        let mut value: Value =
            serde_json::to_value(interval).map_err(|e| Failure::new(exit::FAILURE, e))?;
        value["raw_lo"] = raw.lo.into();
        value["raw_hi"] = raw.hi.into();
        json(&value)
    } else {
        Ok(format!(
            "[{}, {}]\n",
            sci3(interval.lo.value()),
            sci3(interval.hi.value())
        ))
    }
}

fn cmd_fit(
    mu_a: f64,
    mu_b: f64,
    target: f64,
    weights: &WeightFlags,
    paper_mode: bool,
    as_json: bool,
) -> Result<(String, bool), Failure> {
    let fit = if paper_mode || weights.any() {
        fit_phases(mu_a, mu_b, &weights.resolve()?, target)
    } else {
        fit_params(mu_a, mu_b, target)
    }
    .map_err(library)?;
    let ok = fit.residual <= FIT_RESIDUAL_LIMIT;
    let text = if as_json { json(&fit)? } else { fit_text(&fit) };
    Ok((text, ok))
}

fn cmd_table1(
    csv: bool,
    reference: Option<&Path>,
    as_json: bool,
) -> Result<(String, Vec<String>), Failure> {
    let rows: Vec<ReferenceRow> = match reference {
        Some(path) => serde_json::from_str(&read_source(path)?).map_err(|e| {
            Failure::new(exit::INVALID_TABLE, format!("invalid reference rows: {e}"))
        })?,
        None => table1_reference(),
    };
    let reproduction = reproduce_table(&rows);
    let deviations: Vec<String> = reproduction
        .deviations
        .iter()
        .map(|d| match (d.computed, d.relative_error) {
            (Some(c), Some(r)) => format!(
                "{} {}: computed {} published {} (relative error {:.2}%)",
                d.exemplar,
                d.column,
                sci3(c),
                sci3(d.published),
                100.0 * r
            ),
            _ => format!(
                "{} {}: not computable, published {}",
                d.exemplar,
                d.column,
                sci3(d.published)
            ),
        })
        .collect();

    let mut out = String::new();
    if as_json {
        out = json(&reproduction)?;
    } else if csv {
        out.push_str("exemplar,");
        out.push_str(&COLUMNS.join(","));
        out.push('\n');
        for row in &reproduction.rows {
            let cells: Vec<String> = match row.computed {
                Some(cells) => cells.iter().map(|v| v.to_string()).collect(),
                None => vec![String::new(); COLUMNS.len()],
            };
            out.push_str(&format!("{},{}\n", row.exemplar, cells.join(",")));
        }
    } else {
        out.push_str(&format!(
            "{:<12}{:>10}{:>10}{:>10}{:>10}{:>10}\n",
            "X", "mu_a", "mu_b", "mu_ab", "mu_min", "mu_max"
        ));
        for row in &reproduction.rows {
            out.push_str(&format!("{:<12}", row.exemplar));
            match (&row.computed, &row.error) {
                (Some(cells), _) => {
                    for (c, p) in cells.iter().zip(&row.published) {
                        let cell = sci3(*c);
                        let mark = if cell == sci3(*p) { ' ' } else { '*' };
                        out.push_str(&format!("{:>9}{}", cell, mark));
                    }
                }
                (None, error) => out.push_str(&format!(
                    "  ({})",
                    error.as_deref().unwrap_or("not computable")
                )),
            }
            out.push('\n');
        }
        out.push_str("* differs from the published value at three significant figures\n");
    }
    Ok((out, deviations))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Count {
            corpus,
            term_a,
            term_b,
            term_x,
        } => cmd_count(corpus, term_a, term_b, term_x),
        Command::Analyze(source) => cmd_analyze(source, cli.json),
        Command::Interval {
            source,
            mu_a,
            mu_b,
            weights,
        } => cmd_interval(source, mu_a.zip(*mu_b), weights, cli.json),
        Command::Fit {
            mu_a,
            mu_b,
            target,
            weights,
            paper_mode,
        } => {
            let (text, ok) = cmd_fit(*mu_a, *mu_b, *target, weights, *paper_mode, cli.json)?;
            if ok {
                Ok(text)
            } else {
                emit(cli, &text);
                Err(Failure::new(exit::UNREACHABLE, "fit residual exceeds 1e-9"))
            }
        }
        Command::Table1 { csv, reference } => {
            let (text, deviations) = cmd_table1(*csv, reference.as_deref(), cli.json)?;
            if deviations.is_empty() {
                Ok(text)
            } else {
                emit(cli, &text);
                Err(Failure::new(
                    exit::TABLE_DEVIATION,
                    format!(
                        "{} cells deviate from the published table:\n{}",
                        deviations.len(),
                        deviations.join("\n")
                    ),
                ))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) {
    if !cli.quiet {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::FAILURE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => {
            emit(&cli, &text);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("qweb: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
