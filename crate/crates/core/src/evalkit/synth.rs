//! Seeded synthetic corpora whose correct target depends on the whole input
//! set rather than on the source head alone.
//!
//! Every category owns a block of source and target tokens. Source tokens
//! are split into heads and context words; each context word carries one of
//! `senses` senses. The target for a sample is fixed by the pair
//! (head, sense of context), so a selector that sees only the head cannot
//! tell the senses apart. A record looks like
//!
//! ```text
//! [xcomp [mod vp-m3] vp-h1]
//! [xcomp vp-t3]
//! ```
//!
//! With probability `noise` a sample's target is replaced by a uniformly
//! drawn target of its category, which caps attainable accuracy at
//! `1 - noise * (1 - 1/targets_per_category)`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::StructurePair;
use crate::extraction::CategoryMap;
use crate::fstructure::{FStructure, Item};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid synthetic corpus spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub categories: usize,
    /// Source tokens over all categories.
    pub in_vocab: usize,
    /// Target tokens over all categories.
    pub out_vocab: usize,
    pub senses: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            categories: 5,
            in_vocab: 50,
            out_vocab: 50,
            senses: 2,
            n_train: 500,
            n_test: 500,
            noise: 0.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub train: Vec<StructurePair>,
    pub test: Vec<StructurePair>,
    /// Noise-free target for every (category, input set).
    pub truth: BTreeMap<(String, BTreeSet<String>), String>,
    pub category_map: CategoryMap,
    /// Expected accuracy of the noise-free mapping on noisy data.
    pub bayes_rate: f64,
}

// The first five categories reuse the stock slot labels.
const SLOTS: [(&str, &str); 5] = [
    ("sentence", "s"),
    ("xcomp", "vp"),
    ("subj", "np"),
    ("pp-adj", "pp"),
    ("adj", "ap"),
];

fn slot(c: usize) -> (String, String) {
    match SLOTS.get(c) {
        Some(&(l, cat)) => (l.to_string(), cat.to_string()),
        None => (format!("slot{c}"), format!("c{c}")),
    }
}

struct Layout {
    heads: usize,
    contexts: usize,
    targets: usize,
}

impl SynthSpec {
    fn layout(&self) -> Result<Layout, SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if !(0.0..=1.0).contains(&self.noise) {
            return bad(format!("noise {} outside [0, 1]", self.noise));
        }
        if self.categories == 0 {
            return bad("need at least one category".into());
        }
        if self.senses < 2 {
            return bad("need at least two senses".into());
        }
        let sources = self.in_vocab / self.categories;
        let targets = self.out_vocab / self.categories;
        let heads = targets / self.senses;
        if heads == 0 {
            return bad(format!(
                "{} target tokens per category cannot cover {} senses",
                targets, self.senses
            ));
        }
        if sources < heads + self.senses {
            return bad(format!(
                "{sources} source tokens per category leave fewer context words than senses"
            ));
        }
        Ok(Layout {
            heads,
            contexts: sources - heads,
            targets,
        })
    }

    pub fn bayes_rate(&self) -> Result<f64, SynthError> {
        let l = self.layout()?;
        Ok(1.0 - self.noise * (1.0 - 1.0 / l.targets as f64))
    }
}

fn record(label: &str, head: &str, context: &str, target: &str) -> StructurePair {
    let ctx = FStructure::new("mod", vec![Item::Token(context.into())]).expect("valid");
    let src =
        FStructure::new(label, vec![Item::Sub(ctx), Item::Token(head.into())]).expect("valid");
    let tgt = FStructure::new(label, vec![Item::Token(target.into())]).expect("valid");
    (src, tgt)
}

pub fn gen_synthetic(spec: &SynthSpec) -> Result<SyntheticCorpus, SynthError> {
    let layout = spec.layout()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut category_map = CategoryMap::with_default("other").expect("valid");
    let mut truth = BTreeMap::new();
    for c in 0..spec.categories {
        let (label, cat) = slot(c);
        category_map.insert(&label, &cat);
        for h in 0..layout.heads {
            for m in 0..layout.contexts {
                let inputs = [format!("{cat}-h{h}"), format!("{cat}-m{m}")]
                    .into_iter()
                    .collect();
                let t = h * spec.senses + m % spec.senses;
                truth.insert((cat.clone(), inputs), format!("{cat}-t{t}"));
            }
        }
    }

    // u32 draws keep the stream identical across pointer widths
    let draw = |rng: &mut ChaCha8Rng| -> StructurePair {
        let c = rng.gen_range(0..spec.categories as u32) as usize;
        let h = rng.gen_range(0..layout.heads as u32) as usize;
        let m = rng.gen_range(0..layout.contexts as u32) as usize;
        let noisy = rng.gen_bool(spec.noise);
        let random_target = rng.gen_range(0..layout.targets as u32) as usize;
        let t = if noisy {
            random_target
        } else {
            h * spec.senses + m % spec.senses
        };
        let (label, cat) = slot(c);
        record(
            &label,
            &format!("{cat}-h{h}"),
            &format!("{cat}-m{m}"),
            &format!("{cat}-t{t}"),
        )
    };
    let train = (0..spec.n_train).map(|_| draw(&mut rng)).collect();
    let test = (0..spec.n_test).map(|_| draw(&mut rng)).collect();

    Ok(SyntheticCorpus {
        train,
        test,
        truth,
        category_map,
        bayes_rate: spec.bayes_rate()?,
    })
}
