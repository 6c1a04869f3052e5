//! Batch analytics for long-running polarized debates on social media.
//!
//! The crate covers the full pipeline: corpus ingestion and filtering
//! ([`corpus`]), two-fold stance classification by hashtag rules and a
//! learned linear model ([`stance`]), topic discovery with coherence
//! scoring and period segmentation ([`topics`]), lexicon sentiment
//! ([`sentiment`]), and cross-cutting analyses such as stance time series,
//! bot-score joins, and mention influence ([`analytics`]).
//!
//! Everything is deterministic given its inputs and seeds: samplers and
//! trainers use seeded RNGs, map outputs are ordered, and report files are
//! byte-stable across reruns.

pub mod analytics;
pub mod corpus;
pub mod error;
pub mod report;
pub mod sentiment;
pub mod stance;
pub mod time;
pub mod topics;

pub use error::{Error, Result};
