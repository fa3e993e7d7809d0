//! gramprobe: a desk-scale workbench for hunting "violation detector" features
//! in small language models.
//!
//! The pipeline: generate (or ingest) minimal-pair corpora, train a small
//! decoder-only transformer on the well-formed sentences, train a Top-K sparse
//! autoencoder on its residual stream, rank SAE features by how much more they
//! fire on ill-formed inputs, ablate the top candidates, and test whether the
//! ablation effects survive a conjunctive falsification test (F1/F2/F3) against
//! random-feature controls, with paired Wilcoxon statistics and Bonferroni
//! correction.
//!
//! Modules follow the pipeline order:
//!
//! - [`vocab`]: closed word-level vocabulary and whitespace tokenizer
//! - [`corpus`]: constraint grammars, BLiMP-format ingestion, stratified splits
//! - [`lm`]: the toy transformer (forward, likelihoods, training, splicing)
//! - [`sae`]: Top-K sparse autoencoder (encode/decode/ablate/train)
//! - [`sensitivity`]: per-feature sensitivity scores and candidate selection
//! - [`intervention`]: three-condition ablation runs and preference margins
//! - [`stats`]: Wilcoxon signed-rank tests and the F1/F2/F3 verdicts
//! - [`harness`]: experiment orchestration, reports, provenance

pub mod corpus;
pub mod error;
pub mod harness;
pub mod intervention;
pub mod lm;
pub mod sae;
pub mod seeding;
pub mod sensitivity;
pub mod stats;
pub mod vocab;

pub use error::{Error, Result};
