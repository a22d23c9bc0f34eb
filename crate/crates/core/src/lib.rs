//! Bilingual lexical selection with information-theoretical networks.
//!
//! Pairs of bracketed f-structures are aligned by slot label, turned into
//! per-category samples (source heads in, target head out) and counted into
//! one associative network per phrasal category. Selecting a target head is
//! a single forward pass: bias plus pointwise-mutual-information weights,
//! then argmax.
//!
//! ```
//! use itlex::extraction::SamplePair;
//! use itlex::itnet::{train, Network};
//!
//! let samples = [
//!     SamplePair::new("vp", ["eat", "apple"], "essen"),
//!     SamplePair::new("vp", ["drink", "water"], "trinken"),
//! ];
//! let net = Network::new(train("vp", 0.5, &samples).unwrap());
//! assert_eq!(net.select(["drink"]).unwrap(), "trinken");
//! ```

pub mod cli;
pub mod corpus;
pub mod evalkit;
pub mod extraction;
pub mod fstructure;
pub mod itnet;

pub use corpus::{parse_corpus, write_corpus, CorpusError};
pub use extraction::{align, extract_samples, CategoryMap, SamplePair};
pub use fstructure::{head_of, FStructure, Head, ParseError};
pub use itnet::{CountStore, NetError, Network};
