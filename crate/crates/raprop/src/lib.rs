//! raprop: a microblog ranking engine.
//!
//! Each candidate tweet gets a learned Feature Score measuring the
//! trustworthiness of its source (user, tweet and linked-page features,
//! random-forest regression), which is then propagated one ply over a
//! pairwise content-agreement graph so that tweets that are both
//! well-sourced and independently corroborated rise to the top. The
//! crate also ships the FS/AG/recency/TF-IDF baselines, a judged-only
//! precision and MAP evaluation harness, and deterministic adversarial
//! corpus generators for property-style testing.
//!
//! The numeric pipeline is generic over the scalar type via
//! [`scalar::Real`] (f32 or f64); the aliases below fix f64, which is
//! what the CLI uses.

pub mod agreement;
pub mod candidate;
pub mod corpus;
pub mod eval;
pub mod features;
pub mod learner;
pub mod pipeline;
pub mod ranker;
pub mod scalar;
pub mod scenarios;
pub mod text;

pub use scalar::Real;

/// Default scalar type of the shipped pipeline.
pub type Score = f64;

pub type AgreementGraph = agreement::AgreementGraph<Score>;
pub type PosWeights = agreement::PosWeights<Score>;
pub type FeatureVector = features::FeatureVector<Score>;
pub type RandomForest = learner::RandomForest<Score>;
pub type RankedList = ranker::RankedList<Score>;
