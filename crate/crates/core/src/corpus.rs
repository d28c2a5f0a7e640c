//! Documents, presence counts for three words, and the count ratios built from them.
//!
//! A word "occurs" in a document when it appears at least once; term frequency
//! is ignored. Every count is a number of documents.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stemming {
    #[default]
    None,
    /// Strips a trailing plural `s` (not `ss`) from words longer than three letters.
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenizerConfig {
    pub stemming: Stemming,
}

/// Lowercases and splits on every non-alphabetic code point.
pub fn tokenize(raw_text: &str, config: &TokenizerConfig) -> Vec<String> {
    raw_text
        .split(|ch: char| !ch.is_alphabetic())
        .filter(|word| !word.is_empty())
        .map(|word| stem(word.to_lowercase(), config.stemming))
        .collect()
}

fn stem(word: String, stemming: Stemming) -> String {
    match stemming {
        Stemming::None => word,
        Stemming::Plural => {
            if word.chars().count() > 3 && word.ends_with('s') && !word.ends_with("ss") {
                let mut w = word;
                w.pop();
                w
            } else {
                word
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: String,
    tokens: Vec<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, tokens: Vec<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidInput("document id is empty".into()));
        }
        Ok(Document { id, tokens })
    }

    pub fn from_text(id: impl Into<String>, text: &str, config: &TokenizerConfig) -> Result<Self> {
        Document::new(id, tokenize(text, config))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn contains(&self, term: &str) -> bool {
        self.tokens.iter().any(|t| t == term)
    }
}

/// The eight disjoint presence/absence cells for words A, B and X.
///
/// Field names list A, B, X in order; an `n` prefix marks absence, so
/// `a_nb_x` counts documents containing A and X but not B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ThreeTermCounts {
    pub abx: u64,
    pub ab_nx: u64,
    pub a_nb_x: u64,
    pub a_nb_nx: u64,
    pub na_b_x: u64,
    pub na_b_nx: u64,
    pub na_nb_x: u64,
    pub na_nb_nx: u64,
}

impl ThreeTermCounts {
    pub fn cell(&self, a: bool, b: bool, x: bool) -> u64 {
        match (a, b, x) {
            (true, true, true) => self.abx,
            (true, true, false) => self.ab_nx,
            (true, false, true) => self.a_nb_x,
            (true, false, false) => self.a_nb_nx,
            (false, true, true) => self.na_b_x,
            (false, true, false) => self.na_b_nx,
            (false, false, true) => self.na_nb_x,
            (false, false, false) => self.na_nb_nx,
        }
    }

    fn cell_mut(&mut self, a: bool, b: bool, x: bool) -> &mut u64 {
        match (a, b, x) {
            (true, true, true) => &mut self.abx,
            (true, true, false) => &mut self.ab_nx,
            (true, false, true) => &mut self.a_nb_x,
            (true, false, false) => &mut self.a_nb_nx,
            (false, true, true) => &mut self.na_b_x,
            (false, true, false) => &mut self.na_b_nx,
            (false, false, true) => &mut self.na_nb_x,
            (false, false, false) => &mut self.na_nb_nx,
        }
    }

    pub fn record(&mut self, a: bool, b: bool, x: bool) {
        *self.cell_mut(a, b, x) += 1;
    }

    pub fn total(&self) -> u64 {
        self.abx
            + self.ab_nx
            + self.a_nb_x
            + self.a_nb_nx
            + self.na_b_x
            + self.na_b_nx
            + self.na_nb_x
            + self.na_nb_nx
    }

    pub fn merge(mut self, other: &ThreeTermCounts) -> Self {
        self.abx += other.abx;
        self.ab_nx += other.ab_nx;
        self.a_nb_x += other.a_nb_x;
        self.a_nb_nx += other.a_nb_nx;
        self.na_b_x += other.na_b_x;
        self.na_b_nx += other.na_b_nx;
        self.na_nb_x += other.na_nb_x;
        self.na_nb_nx += other.na_nb_nx;
        self
    }

    /// Recovers the six cells that feed the marginals of `table`. The two cells
    /// without A or B are not determined by it and are supplied by the caller.
    pub fn from_table(table: &CountTable, na_nb_x: u64, na_nb_nx: u64) -> Result<Self> {
        let a_nb_nx = (table.n_a + table.n_abx)
            .checked_sub(table.n_ab + table.n_ax)
            .ok_or_else(|| Error::InvalidTable("n_a - n_ab - n_ax + n_abx < 0".into()))?;
        let na_b_nx = (table.n_b + table.n_abx)
            .checked_sub(table.n_ab + table.n_bx)
            .ok_or_else(|| Error::InvalidTable("n_b - n_ab - n_bx + n_abx < 0".into()))?;
        Ok(ThreeTermCounts {
            abx: table.n_abx,
            ab_nx: table.n_ab - table.n_abx,
            a_nb_x: table.n_ax - table.n_abx,
            a_nb_nx,
            na_b_x: table.n_bx - table.n_abx,
            na_b_nx,
            na_nb_x,
            na_nb_nx,
        })
    }
}

/// Presence counts for terms `a`, `b`, `x` over `documents`. Documents are
/// counted in parallel; the result does not depend on the schedule.
pub fn count_corpus(documents: &[Document], a: &str, b: &str, x: &str) -> ThreeTermCounts {
    documents
        .par_iter()
        .fold(ThreeTermCounts::default, |mut acc, doc| {
            acc.record(doc.contains(a), doc.contains(b), doc.contains(x));
            acc
        })
        .reduce(ThreeTermCounts::default, |l, r| l.merge(&r))
}

/// Document counts for words A, B and X, `n_abx ≤ n_ab ≤ min(n_a, n_b)` etc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCountTable")]
pub struct CountTable {
    n_a: u64,
    n_b: u64,
    n_ab: u64,
    n_ax: u64,
    n_bx: u64,
    n_abx: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCountTable {
    n_a: u64,
    n_b: u64,
    n_ab: u64,
    n_ax: u64,
    n_bx: u64,
    n_abx: u64,
}

impl TryFrom<RawCountTable> for CountTable {
    type Error = Error;

    fn try_from(raw: RawCountTable) -> Result<Self> {
        CountTable::new(raw.n_a, raw.n_b, raw.n_ab, raw.n_ax, raw.n_bx, raw.n_abx)
    }
}

impl CountTable {
    pub fn new(n_a: u64, n_b: u64, n_ab: u64, n_ax: u64, n_bx: u64, n_abx: u64) -> Result<Self> {
        let checks = [
            (n_ab <= n_a, "n_ab > n_a"),
            (n_ab <= n_b, "n_ab > n_b"),
            (n_ax <= n_a, "n_ax > n_a"),
            (n_bx <= n_b, "n_bx > n_b"),
            (n_abx <= n_ab, "n_abx > n_ab"),
            (n_abx <= n_ax, "n_abx > n_ax"),
            (n_abx <= n_bx, "n_abx > n_bx"),
        ];
        if let Some((_, why)) = checks.iter().find(|(ok, _)| !ok) {
            return Err(Error::InvalidTable((*why).into()));
        }
        Ok(CountTable {
            n_a,
            n_b,
            n_ab,
            n_ax,
            n_bx,
            n_abx,
        })
    }

    pub fn n_a(&self) -> u64 {
        self.n_a
    }
    pub fn n_b(&self) -> u64 {
        self.n_b
    }
    pub fn n_ab(&self) -> u64 {
        self.n_ab
    }
    pub fn n_ax(&self) -> u64 {
        self.n_ax
    }
    pub fn n_bx(&self) -> u64 {
        self.n_bx
    }
    pub fn n_abx(&self) -> u64 {
        self.n_abx
    }
    /// Documents with A but not X.
    pub fn n_ax_not(&self) -> u64 {
        self.n_a - self.n_ax
    }
    /// Documents with B but not X.
    pub fn n_bx_not(&self) -> u64 {
        self.n_b - self.n_bx
    }
    /// Documents with A and B but not X.
    pub fn n_abx_not(&self) -> u64 {
        self.n_ab - self.n_abx
    }
}

/// Sums the disjoint cells into marginals, e.g. `n_a = abx + a_nb_x + ab_nx + a_nb_nx`.
pub fn marginals(counts: &ThreeTermCounts) -> CountTable {
    let n_abx = counts.abx;
    let n_ab = counts.abx + counts.ab_nx;
    let n_ax = counts.abx + counts.a_nb_x;
    let n_bx = counts.abx + counts.na_b_x;
    CountTable {
        n_a: n_ab + counts.a_nb_x + counts.a_nb_nx,
        n_b: n_ab + counts.na_b_x + counts.na_b_nx,
        n_ab,
        n_ax,
        n_bx,
        n_abx,
    }
}

/// `μ(A) = n_ax/n_a`, `μ(B) = n_bx/n_b` and the observed `n_abx/n_ab`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTriple {
    pub mu_a: Probability,
    pub mu_b: Probability,
    pub mu_ab_observed: Probability,
}

fn ratio(num: u64, den: u64, marginal: &'static str) -> Result<Probability> {
    if den == 0 {
        return Err(Error::ZeroDenominator { marginal });
    }
    Probability::from_computed(num as f64 / den as f64)
}

pub fn probabilities(table: &CountTable) -> Result<ProbabilityTriple> {
    Ok(ProbabilityTriple {
        mu_a: ratio(table.n_ax, table.n_a, "n_a")?,
        mu_b: ratio(table.n_bx, table.n_b, "n_b")?,
        mu_ab_observed: ratio(table.n_abx, table.n_ab, "n_ab")?,
    })
}

fn round_half_up(value: f64) -> u64 {
    (value + 0.5).floor() as u64
}

/// Rebuilds a table from totals and published ratios, rounding each product
/// half-up to the nearest count.
pub fn table_from_ratios(
    n_a: u64,
    n_b: u64,
    n_ab: u64,
    mu_a: f64,
    mu_b: f64,
    mu_ab: f64,
) -> Result<CountTable> {
    for (value, name) in [(mu_a, "mu_a"), (mu_b, "mu_b"), (mu_ab, "mu_ab")] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidInput(format!(
                "{name} = {value} outside [0, 1]"
            )));
        }
    }
    if n_a == 0 || n_b == 0 || n_ab == 0 {
        return Err(Error::InvalidInput("totals must be positive".into()));
    }
    CountTable::new(
        n_a,
        n_b,
        n_ab,
        round_half_up(mu_a * n_a as f64),
        round_half_up(mu_b * n_b as f64),
        round_half_up(mu_ab * n_ab as f64),
    )
    .map_err(|e| match e {
        Error::InvalidTable(why) => Error::InconsistentRatios(why),
        other => other,
    })
}

#[derive(Deserialize)]
struct JsonDocument {
    id: String,
    text: String,
}

/// Loads a directory of plain-text files (one document each, id = file name,
/// sorted by name) or a JSON-lines file of `{"id": ..., "text": ...}` records.
pub fn load_corpus(path: &Path, config: &TokenizerConfig) -> Result<Vec<Document>> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let meta = fs::metadata(path).map_err(io)?;
    if meta.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(io)?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(io)?
            .into_iter()
            .map(|entry| entry.path())
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        files
            .iter()
            .map(|file| {
                let bytes =
                    fs::read(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
                let id = file
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Document::from_text(id, &String::from_utf8_lossy(&bytes), config)
            })
            .collect()
    } else {
        let content = fs::read_to_string(path).map_err(io)?;
        parse_jsonl(&content, config)
    }
}

pub fn parse_jsonl(content: &str, config: &TokenizerConfig) -> Result<Vec<Document>> {
    content
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            let record: JsonDocument = serde_json::from_str(line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            Document::from_text(record.id, &record.text, config).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
