//! Information-theoretical associative networks.
//!
//! A network has one input unit per source-language item and one output unit
//! per target-language item. Its only state is a [`CountStore`] of
//! occurrence counts; connection weights are read off those counts on demand:
//!
//! * `w(i, j) = ln( P(i,j) / (P(i) P(j)) )`, the pointwise mutual information
//!   between input `i` and output `j`;
//! * `w0(j) = ln P(j)`, the weight from the always-on bias unit.
//!
//! All probabilities are add-λ estimates. Activating a set of inputs scores
//! every output with `w0(j) + Σ w(i, j)` and the best-scoring output is the
//! selected item.
//!
//! Training is a single pass of counting, and since the counts are the
//! canonical state, two stores can be merged and new samples folded in at any
//! time without loss.

mod model_file;
mod network;
mod oracle;
mod rank;
mod store;

pub use model_file::{
    load_model, model_path, save_model, ModelFileError, MODEL_EXTENSION, MODEL_MAGIC,
};
pub use network::{Activation, Network};
pub use oracle::{oracle_ranking, posterior_oracle};
pub use rank::{rank_scores, TIE_TOLERANCE};
pub use store::{
    merge_counts, train, train_by_category, update_counts, CountStore, DEFAULT_LAMBDA,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("sample category `{found}` does not match network category `{expected}`")]
    CategoryMismatch { expected: String, found: String },
    #[error("smoothing constants differ ({left} vs {right})")]
    LambdaMismatch { left: f64, right: f64 },
    #[error("smoothing constant must be finite and non-negative, got {0}")]
    InvalidLambda(f64),
    #[error("`{0}` is not in the network vocabulary")]
    NotInVocabulary(String),
    #[error("network has no output units")]
    EmptyVocabulary,
    #[error("selection needs a smoothing constant above zero")]
    SmoothingRequired,
}
