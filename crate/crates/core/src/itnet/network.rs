use std::collections::{BTreeMap, BTreeSet};

use super::rank::rank_scores;
use super::{CountStore, NetError};
use crate::extraction::SamplePair;

/// Weight view over a [`CountStore`].
///
/// The vocabularies default to the tokens seen in the store. Extra tokens may
/// be declared with [`Network::with_vocab`]; they take part in smoothing like
/// any other unit with zero counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    store: CountStore,
    in_vocab: BTreeSet<String>,
    out_vocab: BTreeSet<String>,
    // n + λ|in|, n + λ|out|, n + λ|in||out|
    den_in: f64,
    den_out: f64,
    den_joint: f64,
}

/// Output of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activation {
    /// Log-domain score of every output unit.
    pub scores: BTreeMap<String, f64>,
    pub active_inputs: BTreeSet<String>,
    pub unknown_inputs: BTreeSet<String>,
}

impl Activation {
    /// Outputs best first, ties broken by token.
    pub fn ranking(&self) -> Vec<(String, f64)> {
        rank_scores(self.scores.iter().map(|(k, &v)| (k.clone(), v)).collect())
    }
}

impl Network {
    pub fn new(store: CountStore) -> Self {
        let in_vocab = store.inputs().map(|(t, _)| t.to_string()).collect();
        let out_vocab = store.outputs().map(|(t, _)| t.to_string()).collect();
        Self::assemble(store, in_vocab, out_vocab)
    }

    pub fn with_vocab<I, O, S, T>(store: CountStore, extra_in: I, extra_out: O) -> Self
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut in_vocab: BTreeSet<String> = store.inputs().map(|(t, _)| t.to_string()).collect();
        let mut out_vocab: BTreeSet<String> = store.outputs().map(|(t, _)| t.to_string()).collect();
        in_vocab.extend(extra_in.into_iter().map(Into::into));
        out_vocab.extend(extra_out.into_iter().map(Into::into));
        Self::assemble(store, in_vocab, out_vocab)
    }

    fn assemble(
        store: CountStore,
        in_vocab: BTreeSet<String>,
        out_vocab: BTreeSet<String>,
    ) -> Self {
        let mut net = Network {
            store,
            in_vocab,
            out_vocab,
            den_in: 0.0,
            den_out: 0.0,
            den_joint: 0.0,
        };
        net.refresh();
        net
    }

    fn refresh(&mut self) {
        let n = self.store.n_samples() as f64;
        let lambda = self.store.lambda();
        let (vi, vo) = (self.in_vocab.len() as f64, self.out_vocab.len() as f64);
        self.den_in = n + lambda * vi;
        self.den_out = n + lambda * vo;
        self.den_joint = n + lambda * vi * vo;
    }

    pub fn store(&self) -> &CountStore {
        &self.store
    }

    pub fn into_store(self) -> CountStore {
        self.store
    }

    pub fn category(&self) -> &str {
        self.store.category()
    }

    pub fn lambda(&self) -> f64 {
        self.store.lambda()
    }

    pub fn in_vocab(&self) -> &BTreeSet<String> {
        &self.in_vocab
    }

    pub fn out_vocab(&self) -> &BTreeSet<String> {
        &self.out_vocab
    }

    /// Adds one sample and refreshes the derived quantities.
    pub fn update(&mut self, sample: &SamplePair) -> Result<(), NetError> {
        self.store.update(sample)?;
        self.in_vocab.extend(sample.inputs.iter().cloned());
        self.out_vocab.insert(sample.output.clone());
        self.refresh();
        Ok(())
    }

    // A unit is usable when it is in the vocabulary and, without smoothing,
    // has actually been observed.
    fn is_known_input(&self, token: &str) -> bool {
        self.in_vocab.contains(token) && (self.lambda() > 0.0 || self.store.c_in(token) > 0)
    }

    fn is_known_output(&self, token: &str) -> bool {
        self.out_vocab.contains(token) && (self.lambda() > 0.0 || self.store.c_out(token) > 0)
    }

    fn raw_weight(&self, c_in: u64, c_out: u64, c_joint: u64) -> f64 {
        let l = self.lambda();
        let ratio = (c_joint as f64 + l) * self.den_in * self.den_out
            / (self.den_joint * (c_in as f64 + l) * (c_out as f64 + l));
        ratio.ln()
    }

    fn raw_bias(&self, c_out: u64) -> f64 {
        ((c_out as f64 + self.lambda()) / self.den_out).ln()
    }

    /// Connection weight between input `i` and output `j`. Without smoothing
    /// a pair that was never seen together weighs negative infinity.
    pub fn weight(&self, i: &str, j: &str) -> Result<f64, NetError> {
        if !self.is_known_input(i) {
            return Err(NetError::NotInVocabulary(i.to_string()));
        }
        if !self.is_known_output(j) {
            return Err(NetError::NotInVocabulary(j.to_string()));
        }
        Ok(self.raw_weight(
            self.store.c_in(i),
            self.store.c_out(j),
            self.store.c_joint(i, j),
        ))
    }

    /// Weight from the bias unit to output `j`: its log prior.
    pub fn bias(&self, j: &str) -> Result<f64, NetError> {
        if !self.is_known_output(j) {
            return Err(NetError::NotInVocabulary(j.to_string()));
        }
        Ok(self.raw_bias(self.store.c_out(j)))
    }

    /// Propagates the given input set to every output unit. Inputs outside
    /// the vocabulary are reported and ignored; with none left, the scores
    /// are the biases alone.
    pub fn activate<I, S>(&self, inputs: I) -> Activation
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut active_inputs = BTreeSet::new();
        let mut unknown_inputs = BTreeSet::new();
        for i in inputs {
            let i = i.as_ref();
            if self.is_known_input(i) {
                active_inputs.insert(i.to_string());
            } else {
                unknown_inputs.insert(i.to_string());
            }
        }
        let active: Vec<(&str, u64)> = active_inputs
            .iter()
            .map(|i| (i.as_str(), self.store.c_in(i)))
            .collect();

        let scores = self
            .out_vocab
            .iter()
            .map(|j| {
                let c_out = self.store.c_out(j);
                let score = if self.is_known_output(j) {
                    active.iter().fold(self.raw_bias(c_out), |acc, &(i, c_in)| {
                        acc + self.raw_weight(c_in, c_out, self.store.c_joint(i, j))
                    })
                } else {
                    f64::NEG_INFINITY
                };
                (j.clone(), score)
            })
            .collect();

        Activation {
            scores,
            active_inputs,
            unknown_inputs,
        }
    }

    /// The output unit that the input set activates most.
    pub fn select<I, S>(&self, inputs: I) -> Result<String, NetError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if self.out_vocab.is_empty() {
            return Err(NetError::EmptyVocabulary);
        }
        if self.lambda() <= 0.0 {
            return Err(NetError::SmoothingRequired);
        }
        let ranking = self.activate(inputs).ranking();
        Ok(ranking
            .into_iter()
            .next()
            .map(|(t, _)| t)
            .expect("non-empty vocabulary"))
    }
}

impl From<CountStore> for Network {
    fn from(store: CountStore) -> Self {
        Network::new(store)
    }
}
