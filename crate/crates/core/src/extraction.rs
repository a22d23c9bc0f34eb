//! Label alignment of f-structure pairs and extraction of per-category
//! training samples.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::fstructure::{FStructure, Head};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryMapError {
    #[error("line {line}: expected `slot<TAB>category`")]
    Malformed { line: usize },
    #[error("line {line}: invalid slot label `{label}`")]
    BadLabel { line: usize, label: String },
    #[error("line {line}: invalid category name `{name}`")]
    BadCategory { line: usize, name: String },
}

/// Category names become file names, so they are restricted to
/// `[a-z0-9][a-z0-9_-]*` after case folding.
pub fn is_valid_category(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

/// Maps slot labels to the phrasal category whose network handles them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryMap {
    entries: BTreeMap<String, String>,
    default_category: String,
}

impl Default for CategoryMap {
    fn default() -> Self {
        let entries = [
            ("sentence", "s"),
            ("xcomp", "vp"),
            ("vcomp", "vp"),
            ("subj", "np"),
            ("obj", "np"),
            ("pp-adj", "pp"),
            ("adj", "ap"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        CategoryMap {
            entries,
            default_category: "other".to_string(),
        }
    }
}

impl CategoryMap {
    /// A map with no entries; every label goes to `default_category`.
    pub fn with_default(default_category: &str) -> Option<Self> {
        let d = default_category.to_lowercase();
        is_valid_category(&d).then(|| CategoryMap {
            entries: BTreeMap::new(),
            default_category: d,
        })
    }

    pub fn insert(&mut self, label: &str, category: &str) -> bool {
        let (label, category) = (label.to_lowercase(), category.to_lowercase());
        if !crate::fstructure::is_valid_label(&label) || !is_valid_category(&category) {
            return false;
        }
        self.entries.insert(label, category);
        true
    }

    pub fn category(&self, label: &str) -> &str {
        self.entries.get(label).unwrap_or(&self.default_category)
    }

    pub fn default_category(&self) -> &str {
        &self.default_category
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Reads `slot<TAB>category` lines. `*` as the slot sets the default.
    /// Blank lines and lines starting with `#` are skipped. Entries not
    /// mentioned in the file fall back to `other`.
    pub fn parse(text: &str) -> Result<Self, CategoryMapError> {
        let mut map = CategoryMap {
            entries: BTreeMap::new(),
            default_category: "other".into(),
        };
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let (slot, category) = raw
                .split_once('\t')
                .ok_or(CategoryMapError::Malformed { line })?;
            let (slot, category) = (slot.trim().to_lowercase(), category.trim().to_lowercase());
            if !is_valid_category(&category) {
                return Err(CategoryMapError::BadCategory {
                    line,
                    name: category,
                });
            }
            if slot == "*" {
                map.default_category = category;
            } else if crate::fstructure::is_valid_label(&slot) {
                map.entries.insert(slot, category);
            } else {
                return Err(CategoryMapError::BadLabel { line, label: slot });
            }
        }
        Ok(map)
    }
}

impl fmt::Display for CategoryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}\t{v}")?;
        }
        writeln!(f, "*\t{}", self.default_category)
    }
}

/// One training association for a category's network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplePair {
    pub category: String,
    pub inputs: BTreeSet<String>,
    pub output: String,
}

impl SamplePair {
    pub fn new<I, S>(category: &str, inputs: I, output: &str) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SamplePair {
            category: category.to_string(),
            inputs: inputs.into_iter().map(Into::into).collect(),
            output: output.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AlignDiagnostics {
    /// Immediate sub-structures, on either side, that found no partner.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment<'a> {
    pub pairs: Vec<(&'a FStructure, &'a FStructure)>,
    pub diagnostics: AlignDiagnostics,
}

/// Pairs `source` with `target`, then recursively pairs children that share
/// a label. The k-th child labelled `x` on one side goes with the k-th child
/// labelled `x` on the other. Output is in source document order.
pub fn align<'a>(source: &'a FStructure, target: &'a FStructure) -> Alignment<'a> {
    let mut out = Alignment {
        pairs: Vec::new(),
        diagnostics: AlignDiagnostics::default(),
    };
    align_into(source, target, &mut out);
    out
}

fn align_into<'a>(source: &'a FStructure, target: &'a FStructure, out: &mut Alignment<'a>) {
    out.pairs.push((source, target));

    let mut by_label: HashMap<&str, Vec<&FStructure>> = HashMap::new();
    for t in target.subs() {
        by_label.entry(t.label()).or_default().push(t);
    }
    let mut used: HashMap<&str, usize> = HashMap::new();
    let mut matched = 0;
    for s in source.subs() {
        let k = used.entry(s.label()).or_insert(0);
        match by_label.get(s.label()).and_then(|v| v.get(*k)) {
            Some(t) => {
                *k += 1;
                matched += 1;
                align_into(s, t, out);
            }
            None => out.diagnostics.skipped += 1,
        }
    }
    out.diagnostics.skipped += target.subs().count() - matched;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractDiagnostics {
    pub target_without_head: usize,
    pub source_without_head: usize,
}

/// A sample together with the source structure's own head, which the
/// word-level baseline uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedSample {
    pub sample: SamplePair,
    pub source_head: Option<Head>,
}

pub fn extract_detailed(
    pairs: &[(&FStructure, &FStructure)],
    cmap: &CategoryMap,
) -> (Vec<ExtractedSample>, ExtractDiagnostics) {
    let mut diag = ExtractDiagnostics::default();
    let mut out = Vec::new();
    for (src, tgt) in pairs {
        let Ok(output) = tgt.head() else {
            diag.target_without_head += 1;
            continue;
        };
        let source_head = src.head().ok();
        let inputs: BTreeSet<String> = source_head
            .iter()
            .cloned()
            .chain(src.subs().filter_map(|c| c.head().ok()))
            .map(Head::into_string)
            .collect();
        if inputs.is_empty() {
            diag.source_without_head += 1;
            continue;
        }
        out.push(ExtractedSample {
            sample: SamplePair {
                category: cmap.category(tgt.label()).to_string(),
                inputs,
                output: output.into_string(),
            },
            source_head,
        });
    }
    (out, diag)
}

pub fn extract_samples(
    pairs: &[(&FStructure, &FStructure)],
    cmap: &CategoryMap,
) -> (Vec<SamplePair>, ExtractDiagnostics) {
    let (detailed, diag) = extract_detailed(pairs, cmap);
    (detailed.into_iter().map(|e| e.sample).collect(), diag)
}

/// Totals over a whole corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusDiagnostics {
    pub aligned_pairs: usize,
    pub skipped_structures: usize,
    pub target_without_head: usize,
    pub source_without_head: usize,
}

/// Aligns and extracts every record of a corpus, in record order.
pub fn extract_corpus(
    corpus: &[(FStructure, FStructure)],
    cmap: &CategoryMap,
) -> (Vec<ExtractedSample>, CorpusDiagnostics) {
    let mut diag = CorpusDiagnostics::default();
    let mut out = Vec::new();
    for (src, tgt) in corpus {
        let alignment = align(src, tgt);
        diag.aligned_pairs += alignment.pairs.len();
        diag.skipped_structures += alignment.diagnostics.skipped;
        let (samples, d) = extract_detailed(&alignment.pairs, cmap);
        diag.target_without_head += d.target_without_head;
        diag.source_without_head += d.source_without_head;
        out.extend(samples);
    }
    (out, diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FStructure {
        FStructure::parse(s).unwrap()
    }

    const EN: &str = "[sentence [subj I] would [xcomp [subj I] like \
                      [xcomp [subj I] register [pp-adj for the conference]]]]";
    const DE: &str = "[sentence [subj Ich] werde [xcomp [subj Ich] gerne \
                      [xcomp [subj Ich] anmelden [pp-adj fuer der Konferenz]]]]";

    #[test]
    fn registration_pair_aligns_register_with_anmelden() {
        let (en, de) = (fs(EN), fs(DE));
        let a = align(&en, &de);
        let src = fs("[xcomp [subj I] register [pp-adj for the conference]]");
        let hit = a
            .pairs
            .iter()
            .find(|(s, _)| **s == src)
            .expect("register xcomp aligned");
        assert_eq!(hit.1.label(), "xcomp");
        assert_eq!(hit.1.head().unwrap().as_str(), "anmelden");
        assert_eq!(a.diagnostics.skipped, 0);
    }

    #[test]
    fn identity_alignment_pairs_everything_with_itself() {
        let en = fs(EN);
        let a = align(&en, &en);
        let mut all = Vec::new();
        en.walk(&mut |s| all.push(s));
        assert_eq!(a.pairs.len(), all.len());
        for ((s, t), n) in a.pairs.iter().zip(all) {
            assert!(std::ptr::eq(*s, n) && std::ptr::eq(*t, n));
        }
        assert_eq!(a.diagnostics.skipped, 0);
    }

    #[test]
    fn unmatched_children_are_skipped_and_counted() {
        let (s, t) = (fs("[vp [subj a] x [obj b]]"), fs("[vp [subj c] y]"));
        let a = align(&s, &t);
        assert_eq!(a.pairs.len(), 2);
        assert_eq!(a.pairs[1].0.label(), "subj");
        assert_eq!(a.pairs[1].1.head().unwrap().as_str(), "c");
        assert_eq!(a.diagnostics.skipped, 1);

        // unmatched on the target side count too
        let a = align(&t, &s);
        assert_eq!(a.diagnostics.skipped, 1);
    }

    #[test]
    fn repeated_labels_match_in_order() {
        let (s, t) = (
            fs("[s [np a] [np b] [np c]]"),
            fs("[s [np x] [pp q] [np y]]"),
        );
        let a = align(&s, &t);
        let heads: Vec<_> = a.pairs[1..]
            .iter()
            .map(|(s, t)| {
                (
                    s.head().unwrap().into_string(),
                    t.head().unwrap().into_string(),
                )
            })
            .collect();
        assert_eq!(
            heads,
            vec![("a".into(), "x".into()), ("b".into(), "y".into())]
        );
        // np c on the source, pp q on the target
        assert_eq!(a.diagnostics.skipped, 2);
    }

    #[test]
    fn extracts_the_anmelden_sample() {
        let s = fs("[xcomp [subj I] register [pp-adj for the conference]]");
        let t = fs("[xcomp [subj Ich] anmelden [pp-adj fuer der Konferenz]]");
        let (samples, _) = extract_samples(&[(&s, &t)], &CategoryMap::default());
        assert_eq!(
            samples[0],
            SamplePair::new("vp", ["i", "register", "conference"], "anmelden")
        );
    }

    #[test]
    fn trivial_np_sample() {
        let (s, t) = (fs("[np dog]"), fs("[np hund]"));
        let mut cmap = CategoryMap::default();
        assert!(cmap.insert("np", "np"));
        let (samples, d) = extract_samples(&align(&s, &t).pairs, &cmap);
        assert_eq!(samples, vec![SamplePair::new("np", ["dog"], "hund")]);
        assert_eq!(d, ExtractDiagnostics::default());
    }

    #[test]
    fn headless_children_are_left_out() {
        // own head + two of three children carry heads; `x` appears twice
        let s = fs("[vp x [a y] [b] [c x]]");
        let t = fs("[vp out]");
        let (samples, _) = extract_samples(&[(&s, &t)], &CategoryMap::default());
        let expected: BTreeSet<String> = ["x", "y"].into_iter().map(String::from).collect();
        assert_eq!(samples[0].inputs, expected);
        assert_eq!(samples[0].category, "other");
    }

    #[test]
    fn missing_heads_are_tallied() {
        let (s, t) = (fs("[vp [subj]]"), fs("[vp go [subj]]"));
        let (samples, d) = extract_samples(&align(&s, &t).pairs, &CategoryMap::default());
        assert!(samples.is_empty());
        assert_eq!(d.source_without_head, 1);
        assert_eq!(d.target_without_head, 1);
    }

    #[test]
    fn sentence_sample_uses_immediate_children_only() {
        let (en, de) = (fs(EN), fs(DE));
        let (samples, diag) = extract_corpus(&[(en, de)], &CategoryMap::default());
        assert_eq!(diag.aligned_pairs, 7);
        assert_eq!(
            samples[0].sample,
            SamplePair::new("s", ["would", "i", "like"], "werde")
        );
        assert_eq!(samples[0].source_head.as_ref().unwrap().as_str(), "would");
        let vp: Vec<_> = samples
            .iter()
            .filter(|e| e.sample.category == "vp")
            .collect();
        assert_eq!(vp.len(), 2);
        assert_eq!(vp[1].sample.output, "anmelden");
    }

    #[test]
    fn category_map_file() {
        let m = CategoryMap::parse("# comment\nxcomp\tVP\n\n*\tmisc\nsubj\tnp\n").unwrap();
        assert_eq!(m.category("xcomp"), "vp");
        assert_eq!(m.category("subj"), "np");
        assert_eq!(m.category("obj"), "misc");
        assert_eq!(CategoryMap::parse(&m.to_string()).unwrap(), m);

        assert_eq!(
            CategoryMap::parse("xcomp vp"),
            Err(CategoryMapError::Malformed { line: 1 })
        );
        assert!(matches!(
            CategoryMap::parse("xcomp\t"),
            Err(CategoryMapError::BadCategory { line: 1, .. })
        ));
        assert!(matches!(
            CategoryMap::parse("9x\tvp"),
            Err(CategoryMapError::BadLabel { line: 1, .. })
        ));
        assert!(matches!(
            CategoryMap::parse("x\tv/p"),
            Err(CategoryMapError::BadCategory { .. })
        ));
    }

    #[test]
    fn default_map() {
        let m = CategoryMap::default();
        for (slot, cat) in [
            ("sentence", "s"),
            ("xcomp", "vp"),
            ("vcomp", "vp"),
            ("subj", "np"),
            ("obj", "np"),
            ("pp-adj", "pp"),
            ("adj", "ap"),
            ("whatever", "other"),
        ] {
            assert_eq!(m.category(slot), cat);
        }
    }
}
