//! Accuracy evaluation, the word-level baseline and synthetic corpora.

mod baseline;
mod synth;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use baseline::{
    baseline_select, baseline_train, BaselineError, BaselineTable, BASELINE_FILE, BASELINE_MAGIC,
};
pub use synth::{gen_synthetic, SynthError, SynthSpec, SyntheticCorpus};

use crate::corpus::StructurePair;
use crate::extraction::{extract_corpus, CategoryMap, ExtractedSample};
use crate::itnet::Network;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    /// `correct / total`, or 0 when nothing was scored.
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    fn record(&mut self, ok: bool) {
        self.total += 1;
        self.correct += usize::from(ok);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub per_category: BTreeMap<String, Tally>,
    pub overall: Tally,
    /// Samples whose category had no network; scored as incorrect.
    pub missing_network: usize,
    /// Samples where the network could not select at all (empty
    /// vocabulary or no smoothing); scored as incorrect.
    pub failed_selections: usize,
    /// Selection calls that ran with at least one unknown input.
    pub calls_with_unknown: usize,
    pub selection_calls: usize,
}

impl EvalReport {
    pub fn unknown_input_rate(&self) -> f64 {
        if self.selection_calls == 0 {
            0.0
        } else {
            self.calls_with_unknown as f64 / self.selection_calls as f64
        }
    }

    fn record(&mut self, category: &str, ok: bool) {
        self.per_category
            .entry(category.to_string())
            .or_default()
            .record(ok);
        self.overall.record(ok);
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>8} {:>9}",
            "category", "correct", "total", "accuracy"
        );
        for (cat, t) in &self.per_category {
            let _ = writeln!(
                out,
                "{:<16} {:>8} {:>8} {:>9.4}",
                cat,
                t.correct,
                t.total,
                t.accuracy()
            );
        }
        let o = &self.overall;
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>8} {:>9.4}",
            "overall",
            o.correct,
            o.total,
            o.accuracy()
        );
        out
    }

    /// `key=value` lines, prefixed with `prefix` when it is non-empty.
    pub fn key_values(&self, prefix: &str) -> String {
        let p = if prefix.is_empty() {
            String::new()
        } else {
            format!("{prefix}_")
        };
        let mut out = String::new();
        let _ = writeln!(out, "{p}overall_correct={}", self.overall.correct);
        let _ = writeln!(out, "{p}overall_total={}", self.overall.total);
        let _ = writeln!(out, "{p}overall_accuracy={:?}", self.overall.accuracy());
        for (cat, t) in &self.per_category {
            let _ = writeln!(out, "{p}category_{cat}_correct={}", t.correct);
            let _ = writeln!(out, "{p}category_{cat}_total={}", t.total);
            let _ = writeln!(out, "{p}category_{cat}_accuracy={:?}", t.accuracy());
        }
        let _ = writeln!(out, "{p}missing_network={}", self.missing_network);
        let _ = writeln!(out, "{p}failed_selections={}", self.failed_selections);
        let _ = writeln!(out, "{p}unknown_input_rate={:?}", self.unknown_input_rate());
        out
    }
}

/// Scores each network on the samples extracted from `test_pairs`.
pub fn evaluate(
    networks: &BTreeMap<String, Network>,
    test_pairs: &[StructurePair],
    cmap: &CategoryMap,
) -> EvalReport {
    let (samples, _) = extract_corpus(test_pairs, cmap);
    evaluate_samples(networks, &samples)
}

pub fn evaluate_samples(
    networks: &BTreeMap<String, Network>,
    samples: &[ExtractedSample],
) -> EvalReport {
    let mut report = EvalReport::default();
    for ExtractedSample { sample, .. } in samples {
        let Some(net) = networks.get(&sample.category) else {
            report.missing_network += 1;
            report.record(&sample.category, false);
            continue;
        };
        let activation = net.activate(&sample.inputs);
        report.selection_calls += 1;
        if !activation.unknown_inputs.is_empty() {
            report.calls_with_unknown += 1;
        }
        match net.select(&sample.inputs) {
            Ok(winner) => report.record(&sample.category, winner == sample.output),
            Err(_) => {
                report.failed_selections += 1;
                report.record(&sample.category, false);
            }
        }
    }
    report
}

/// Source/target head pairs for the baseline, taken from the same aligned
/// structures that produce network samples.
pub fn head_pairs(samples: &[ExtractedSample]) -> impl Iterator<Item = (&str, &str)> {
    samples.iter().filter_map(|e| {
        e.source_head
            .as_ref()
            .map(|h| (h.as_str(), e.sample.output.as_str()))
    })
}

/// Scores the baseline on the same samples [`evaluate`] would use.
pub fn evaluate_baseline(
    table: &BaselineTable,
    test_pairs: &[StructurePair],
    cmap: &CategoryMap,
) -> EvalReport {
    let (samples, _) = extract_corpus(test_pairs, cmap);
    evaluate_baseline_samples(table, &samples)
}

pub fn evaluate_baseline_samples(table: &BaselineTable, samples: &[ExtractedSample]) -> EvalReport {
    let mut report = EvalReport::default();
    for e in samples {
        report.selection_calls += 1;
        let word = e.source_head.as_ref().map(|h| h.as_str());
        if word.is_none_or(|w| table.count_row(w) == 0) {
            report.calls_with_unknown += 1;
        }
        match table.select(word) {
            Ok(t) => report.record(&e.sample.category, t == e.sample.output),
            Err(_) => {
                report.failed_selections += 1;
                report.record(&e.sample.category, false);
            }
        }
    }
    report
}
