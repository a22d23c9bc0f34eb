//! Word-level baseline: pick the target word with the highest `Pr(t | s)`
//! given only the source structure's own head.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("baseline table is empty")]
    EmptyTable,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

pub const BASELINE_MAGIC: &str = "itlex-baseline v1";
pub const BASELINE_FILE: &str = "baseline.heads";

/// Co-occurrence counts of aligned source and target heads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaselineTable {
    cond: BTreeMap<String, BTreeMap<String, u64>>,
    target_totals: BTreeMap<String, u64>,
}

fn best(counts: &BTreeMap<String, u64>) -> Option<&str> {
    // BTreeMap iterates in token order, so the first maximum is the
    // lexicographically smallest one
    let mut winner: Option<(&str, u64)> = None;
    for (t, &c) in counts {
        if winner.is_none_or(|(_, w)| c > w) {
            winner = Some((t, c));
        }
    }
    winner.map(|(t, _)| t)
}

impl BaselineTable {
    pub fn add(&mut self, source: &str, target: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .cond
            .entry(source.to_string())
            .or_default()
            .entry(target.to_string())
            .or_insert(0) += count;
        *self.target_totals.entry(target.to_string()).or_insert(0) += count;
    }

    pub fn count(&self, source: &str, target: &str) -> u64 {
        self.cond
            .get(source)
            .and_then(|m| m.get(target))
            .copied()
            .unwrap_or(0)
    }

    /// Total count of pairs with `source` on the left.
    pub fn count_row(&self, source: &str) -> u64 {
        self.cond.get(source).map_or(0, |m| m.values().sum())
    }

    pub fn is_empty(&self) -> bool {
        self.target_totals.is_empty()
    }

    pub fn merge(&mut self, other: &BaselineTable) {
        for (s, t, c) in other.entries() {
            self.add(s, t, c);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.cond
            .iter()
            .flat_map(|(s, m)| m.iter().map(move |(t, &c)| (s.as_str(), t.as_str(), c)))
    }

    /// Add-λ estimate of `Pr(target | source)` over the table's target
    /// vocabulary.
    pub fn conditional(&self, source: &str, target: &str, lambda: f64) -> f64 {
        let row_total = self.count_row(source);
        let vocab = self.target_totals.len() as f64;
        (self.count(source, target) as f64 + lambda) / (row_total as f64 + lambda * vocab)
    }

    /// Most probable target for `source`. Add-λ smoothing shifts every entry
    /// of a row by the same amount, so the winner is the most frequent
    /// partner; unseen sources fall back to the most frequent target overall.
    pub fn select(&self, source: Option<&str>) -> Result<String, BaselineError> {
        let row = source.and_then(|s| self.cond.get(s));
        row.and_then(best)
            .or_else(|| best(&self.target_totals))
            .map(str::to_string)
            .ok_or(BaselineError::EmptyTable)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{BASELINE_MAGIC}");
        for (s, t, c) in self.entries() {
            let _ = writeln!(out, "pair {s} {t} {c}");
        }
        out
    }

    pub fn from_file_str(text: &str) -> Result<Self, BaselineError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l == BASELINE_MAGIC => {}
            _ => {
                return Err(BaselineError::Syntax {
                    line: 1,
                    message: "missing header".into(),
                })
            }
        }
        let mut table = BaselineTable::default();
        for (k, line) in lines {
            let fields: Vec<&str> = line.split(' ').collect();
            let err = || BaselineError::Syntax {
                line: k + 1,
                message: format!("bad entry `{line}`"),
            };
            match fields.as_slice() {
                ["pair", s, t, c] => table.add(s, t, c.parse().map_err(|_| err())?),
                _ => return Err(err()),
            }
        }
        Ok(table)
    }
}

pub fn baseline_train<'a>(
    head_pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> BaselineTable {
    let mut table = BaselineTable::default();
    for (s, t) in head_pairs {
        table.add(s, t, 1);
    }
    table
}

pub fn baseline_select(table: &BaselineTable, word: &str) -> Result<String, BaselineError> {
    table.select(Some(word))
}
