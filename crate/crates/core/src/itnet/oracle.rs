//! Reference posterior computed straight from the counts.
//!
//! This is a naive-Bayes reading of the same statistics, written without the
//! weight machinery of [`Network`](super::Network): for each output `j` and
//! the `k` known inputs,
//!
//! ```text
//! u(j) = (1 - k) ln P(j) + Σ ln P(i, j) - Σ ln P(i)
//! ```
//!
//! which is algebraically the bias plus the summed PMI weights. The
//! normalized `exp(u)` is the posterior over outputs.

use std::collections::BTreeMap;

use super::rank::rank_scores;
use super::{CountStore, NetError};

struct Estimates<'a> {
    store: &'a CountStore,
    lambda: f64,
    n: f64,
    vi: f64,
    vo: f64,
}

impl Estimates<'_> {
    fn p_in(&self, i: &str) -> f64 {
        (self.store.c_in(i) as f64 + self.lambda) / (self.n + self.lambda * self.vi)
    }

    fn p_out(&self, j: &str) -> f64 {
        (self.store.c_out(j) as f64 + self.lambda) / (self.n + self.lambda * self.vo)
    }

    fn p_joint(&self, i: &str, j: &str) -> f64 {
        (self.store.c_joint(i, j) as f64 + self.lambda) / (self.n + self.lambda * self.vi * self.vo)
    }
}

fn log_scores<S: AsRef<str>>(
    store: &CountStore,
    inputs: &[S],
) -> Result<Vec<(String, f64)>, NetError> {
    if store.lambda() <= 0.0 {
        return Err(NetError::SmoothingRequired);
    }
    let est = Estimates {
        store,
        lambda: store.lambda(),
        n: store.n_samples() as f64,
        vi: store.input_vocab_len() as f64,
        vo: store.output_vocab_len() as f64,
    };
    let mut known: Vec<&str> = inputs
        .iter()
        .map(AsRef::as_ref)
        .filter(|i| store.c_in(i) > 0)
        .collect();
    known.sort_unstable();
    known.dedup();
    let k = known.len() as f64;
    let input_term: f64 = known.iter().map(|i| est.p_in(i).ln()).sum();

    Ok(store
        .outputs()
        .map(|(j, _)| {
            let joint_term: f64 = known.iter().map(|i| est.p_joint(i, j).ln()).sum();
            let u = (1.0 - k) * est.p_out(j).ln() + joint_term - input_term;
            (j.to_string(), u)
        })
        .collect())
}

/// Posterior probability of every output given `inputs`. Unknown inputs are
/// ignored. Requires a positive smoothing constant.
pub fn posterior_oracle<S: AsRef<str>>(
    store: &CountStore,
    inputs: &[S],
) -> Result<BTreeMap<String, f64>, NetError> {
    let u = log_scores(store, inputs)?;
    let max = u.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = u.iter().map(|(_, v)| (v - max).exp()).sum();
    Ok(u.into_iter()
        .map(|(j, v)| (j, (v - max).exp() / z))
        .collect())
}

/// Outputs ordered by oracle log-posterior under the shared tie rule.
pub fn oracle_ranking<S: AsRef<str>>(
    store: &CountStore,
    inputs: &[S],
) -> Result<Vec<(String, f64)>, NetError> {
    let u = log_scores(store, inputs)?;
    let max = u.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let lse = max + u.iter().map(|(_, v)| (v - max).exp()).sum::<f64>().ln();
    Ok(rank_scores(
        u.into_iter().map(|(j, v)| (j, v - lse)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::SamplePair;
    use crate::itnet::train;

    fn c0(lambda: f64) -> CountStore {
        let samples = [
            SamplePair::new("vp", ["eat", "apple"], "essen"),
            SamplePair::new("vp", ["eat", "bread"], "essen"),
            SamplePair::new("vp", ["drink", "water"], "trinken"),
        ];
        train("vp", lambda, &samples).unwrap()
    }

    #[test]
    fn normalized() {
        let p = posterior_oracle(&c0(0.5), &["eat"]).unwrap();
        assert!((p.values().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p["essen"] > p["trinken"]);
    }

    #[test]
    fn requires_smoothing() {
        assert_eq!(
            posterior_oracle(&c0(0.0), &["eat"]),
            Err(NetError::SmoothingRequired)
        );
    }

    #[test]
    fn empty_store_has_no_outputs() {
        let s = CountStore::new("vp", 0.5).unwrap();
        assert!(posterior_oracle(&s, &["a"]).unwrap().is_empty());
    }

    #[test]
    fn duplicates_and_unknowns_are_ignored() {
        let s = c0(0.5);
        assert_eq!(
            oracle_ranking(&s, &["water", "water", "tea"]).unwrap(),
            oracle_ranking(&s, &["water"]).unwrap()
        );
    }
}
