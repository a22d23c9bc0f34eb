use std::collections::BTreeMap;

use super::NetError;
use crate::extraction::SamplePair;

pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Sufficient statistics of one category's network.
///
/// `c_in(i)` counts samples in which input `i` was active, `c_out(j)` counts
/// samples whose output was `j`, and `c_joint(i, j)` counts samples where
/// both held. Zero counts are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CountStore {
    category: String,
    lambda: f64,
    n_samples: u64,
    c_in: BTreeMap<String, u64>,
    c_out: BTreeMap<String, u64>,
    c_joint: BTreeMap<String, BTreeMap<String, u64>>,
}

fn check_lambda(lambda: f64) -> Result<(), NetError> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(NetError::InvalidLambda(lambda))
    }
}

impl CountStore {
    pub fn new(category: &str, lambda: f64) -> Result<Self, NetError> {
        check_lambda(lambda)?;
        Ok(CountStore {
            category: category.to_string(),
            lambda,
            n_samples: 0,
            c_in: BTreeMap::new(),
            c_out: BTreeMap::new(),
            c_joint: BTreeMap::new(),
        })
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn is_empty(&self) -> bool {
        self.n_samples == 0
    }

    pub fn c_in(&self, token: &str) -> u64 {
        self.c_in.get(token).copied().unwrap_or(0)
    }

    pub fn c_out(&self, token: &str) -> u64 {
        self.c_out.get(token).copied().unwrap_or(0)
    }

    pub fn c_joint(&self, input: &str, output: &str) -> u64 {
        self.c_joint
            .get(input)
            .and_then(|m| m.get(output))
            .copied()
            .unwrap_or(0)
    }

    pub fn inputs(&self) -> impl Iterator<Item = (&str, u64)> {
        self.c_in.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn outputs(&self) -> impl Iterator<Item = (&str, u64)> {
        self.c_out.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Non-zero joint counts, sorted by input then output.
    pub fn joints(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.c_joint
            .iter()
            .flat_map(|(i, m)| m.iter().map(move |(j, &c)| (i.as_str(), j.as_str(), c)))
    }

    pub fn input_vocab_len(&self) -> usize {
        self.c_in.len()
    }

    pub fn output_vocab_len(&self) -> usize {
        self.c_out.len()
    }

    /// Folds one sample into the counts.
    pub fn update(&mut self, sample: &SamplePair) -> Result<(), NetError> {
        if sample.category != self.category {
            return Err(NetError::CategoryMismatch {
                expected: self.category.clone(),
                found: sample.category.clone(),
            });
        }
        self.n_samples += 1;
        *self.c_out.entry(sample.output.clone()).or_insert(0) += 1;
        // `inputs` is a set, so each unit fires at most once per sample
        for i in &sample.inputs {
            *self.c_in.entry(i.clone()).or_insert(0) += 1;
            *self
                .c_joint
                .entry(i.clone())
                .or_default()
                .entry(sample.output.clone())
                .or_insert(0) += 1;
        }
        Ok(())
    }

    pub fn merge(&self, other: &CountStore) -> Result<CountStore, NetError> {
        if self.category != other.category {
            return Err(NetError::CategoryMismatch {
                expected: self.category.clone(),
                found: other.category.clone(),
            });
        }
        if self.lambda != other.lambda {
            return Err(NetError::LambdaMismatch {
                left: self.lambda,
                right: other.lambda,
            });
        }
        let mut out = self.clone();
        out.n_samples += other.n_samples;
        for (k, v) in &other.c_in {
            *out.c_in.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.c_out {
            *out.c_out.entry(k.clone()).or_insert(0) += v;
        }
        for (i, m) in &other.c_joint {
            let row = out.c_joint.entry(i.clone()).or_default();
            for (j, v) in m {
                *row.entry(j.clone()).or_insert(0) += v;
            }
        }
        Ok(out)
    }

    /// Rebuilds a store from raw count tables, checking every invariant.
    /// Zero entries are dropped.
    pub fn from_counts(
        category: &str,
        lambda: f64,
        n_samples: u64,
        c_in: impl IntoIterator<Item = (String, u64)>,
        c_out: impl IntoIterator<Item = (String, u64)>,
        c_joint: impl IntoIterator<Item = (String, String, u64)>,
    ) -> Result<CountStore, String> {
        check_lambda(lambda).map_err(|e| e.to_string())?;
        let mut store = CountStore::new(category, lambda).map_err(|e| e.to_string())?;
        store.n_samples = n_samples;
        store.c_in = c_in.into_iter().filter(|(_, c)| *c > 0).collect();
        store.c_out = c_out.into_iter().filter(|(_, c)| *c > 0).collect();
        for (i, j, c) in c_joint.into_iter().filter(|(_, _, c)| *c > 0) {
            store.c_joint.entry(i).or_default().insert(j, c);
        }
        store.check_invariants()?;
        Ok(store)
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        let total: u64 = self.c_out.values().sum();
        if total != self.n_samples {
            return Err(format!(
                "output counts sum to {total}, expected n = {}",
                self.n_samples
            ));
        }
        for (i, &c) in &self.c_in {
            if c > self.n_samples {
                return Err(format!(
                    "input `{i}` counted {c} times in {} samples",
                    self.n_samples
                ));
            }
        }
        for (i, j, c) in self.joints() {
            let bound = self.c_in(i).min(self.c_out(j));
            if c > bound {
                return Err(format!(
                    "joint count ({i}, {j}) = {c} exceeds marginal bound {bound}"
                ));
            }
        }
        Ok(())
    }
}

/// Returns `store` with `sample` folded in.
pub fn update_counts(mut store: CountStore, sample: &SamplePair) -> Result<CountStore, NetError> {
    store.update(sample)?;
    Ok(store)
}

pub fn merge_counts(a: &CountStore, b: &CountStore) -> Result<CountStore, NetError> {
    a.merge(b)
}

/// Single pass over `samples`.
pub fn train<'a>(
    category: &str,
    lambda: f64,
    samples: impl IntoIterator<Item = &'a SamplePair>,
) -> Result<CountStore, NetError> {
    samples
        .into_iter()
        .try_fold(CountStore::new(category, lambda)?, update_counts)
}

/// Trains one store per category in a single pass, keyed by category.
pub fn train_by_category<'a>(
    lambda: f64,
    samples: impl IntoIterator<Item = &'a SamplePair>,
) -> Result<BTreeMap<String, CountStore>, NetError> {
    let mut stores: BTreeMap<String, CountStore> = BTreeMap::new();
    for s in samples {
        if !stores.contains_key(&s.category) {
            stores.insert(s.category.clone(), CountStore::new(&s.category, lambda)?);
        }
        stores
            .get_mut(&s.category)
            .expect("inserted above")
            .update(s)?;
    }
    Ok(stores)
}
