//! Measure how much a written draft adopts the wording, structure, meaning
//! and sentiment of AI suggestions.
//!
//! The crate is organized bottom-up:
//!
//! - [`text`] and [`pos`]: tokenization, sentence splitting, lemmas and
//!   coarse part-of-speech tags, all rule-based and deterministic.
//! - [`metrics`]: Jaccard overlap, POS TF-ISF cosine, embedding cosine and
//!   aspect sentiment match, assembled into a [`MetricVector`].
//! - [`embedding`]: remote and offline embedding providers.
//! - [`stats`]: t-tests, effect sizes and the Student t CDF.
//! - [`harness`]: corpus ingestion, counterfactual scoring, comparisons,
//!   report rendering and the synthetic-corpus generator.
//! - [`session`]: the event-sourced live writing-session service and its
//!   HTTP API.
//! - [`cli`] and [`selftest`]: the `adoptscope` command line.
//!
//! ```
//! use adoptscope::{Analyzer, HashEmbedder};
//!
//! let analyzer = Analyzer::shared();
//! let v = analyzer
//!     .score_texts("The cat sat down.", "The cat sat down.", &HashEmbedder)
//!     .unwrap();
//! assert_eq!(v.jaccard, 1.0);
//! ```

pub mod analyzer;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod pos;
pub mod selftest;
pub mod session;
pub mod stats;
pub mod text;

pub use analyzer::{Analyzer, ResourcePaths};
pub use embedding::{EmbedError, EmbeddingProvider, HashEmbedder, RemoteConfig, RemoteEmbedder};
pub use metrics::{Metric, MetricVector};
pub use pos::PosClass;
pub use text::Document;
