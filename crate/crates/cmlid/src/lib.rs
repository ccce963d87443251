//! Word-level language identification for romanized Telugu-English
//! code-mixed text.
//!
//! Four independently implemented token taggers share one corpus/feature
//! pipeline: multinomial Naive Bayes over TF-IDF vectors, a random forest
//! over count vectors, a first-order HMM decoded with Viterbi, and a
//! linear-chain CRF trained by L2-regularized maximum likelihood. The
//! [`eval`] module scores them (confusion matrices, per-label P/R/F1,
//! k-fold cross-validation) and [`model_file`] persists them in a
//! checksummed binary container.
//!
//! The corpus format is token-per-line with tab-separated columns
//! `surface [TAB pos [TAB label]]` and blank lines between sentences; the
//! label set is the closed four-way TE / EN / NE / UNIV.
//!
//! With the default `parallel` feature, tree training, CRF gradient
//! batches, and corpus tagging run on the rayon pool; disabling the
//! feature swaps in sequential fallbacks with bit-identical output.

pub mod baselines;
pub mod corpus;
pub mod crf;
pub mod error;
pub mod eval;
pub mod features;
pub mod hmm;
pub mod math;
pub mod model_file;
pub mod tagger;

mod dp;
mod par;

pub use error::{Error, Result};
