//! End-to-end wiring: candidate sets to feature matrices to trained
//! forests to propagated rankings. The CLI and the scenario-driven
//! tests both build on these helpers.

use std::collections::HashMap;

use thiserror::Error;

use crate::agreement::{AgreementGraph, PosWeights, DEFAULT_EPSILON};
use crate::candidate::{CandidateError, CandidateSet};
use crate::corpus::{Corpus, CorpusError, PageRankTable};
use crate::features::{self, FeatureError, FEATURE_NAMES};
use crate::learner::{self, ForestParams, LearnError, RandomForest};
use crate::ranker::{self, RankError, RankedList, Strategy};
use crate::scalar::Real;
use crate::scenarios::Scenario;
use crate::text::Analyzer;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Candidate(#[from] CandidateError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("no usable training pairs: every judged tweet fell outside its candidate set")]
    NoTrainingData,
    #[error("strategy {0} needs a trained model (--model)")]
    NeedsModel(Strategy),
}

/// Imputed dense feature rows for every member of a candidate set,
/// parallel to the member order.
#[derive(Debug, Clone)]
pub struct SetFeatures<R> {
    pub ids: Vec<u64>,
    pub rows: Vec<Vec<R>>,
}

impl<R: Real> SetFeatures<R> {
    pub fn row_of(&self, tweet_id: u64) -> Option<&[R]> {
        self.ids
            .iter()
            .position(|&id| id == tweet_id)
            .map(|i| self.rows[i].as_slice())
    }
}

/// Extract and impute features for every candidate tweet.
pub fn feature_rows<R: Real>(
    set: &CandidateSet,
    corpus: &Corpus,
    pagerank: &PageRankTable,
) -> Result<SetFeatures<R>, PipelineError> {
    if set.is_empty() {
        return Ok(SetFeatures {
            ids: Vec::new(),
            rows: Vec::new(),
        });
    }
    let stems: Vec<String> = set.stems.iter().map(|s| s.stem.clone()).collect();
    let mut vectors = Vec::with_capacity(set.len());
    let mut ids = Vec::with_capacity(set.len());
    for member in &set.members {
        let user = corpus.user(member.record.user_id);
        vectors.push(features::extract_features::<R>(
            &member.record,
            user,
            pagerank,
            &set.query,
            &member.tokens,
            &stems,
            &set.idf,
        )?);
        ids.push(member.record.tweet_id);
    }
    let imputed = features::impute_missing(&vectors)?;
    let rows = imputed
        .iter()
        .map(|v| v.dense())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SetFeatures { ids, rows })
}

/// Predict raw trust scores and min-max normalize them over the set.
pub fn feature_scores<R: Real>(
    forest: &RandomForest<R>,
    features: &SetFeatures<R>,
) -> HashMap<u64, R> {
    let raw: Vec<R> = features
        .rows
        .iter()
        .map(|row| forest.predict(row))
        .collect();
    let normalized = learner::normalize_scores(&raw);
    features.ids.iter().copied().zip(normalized).collect()
}

/// The agreement graph of a candidate set under the default weights.
pub fn build_graph<R: Real>(set: &CandidateSet, weights: &PosWeights<R>) -> AgreementGraph<R> {
    AgreementGraph::build(
        &set.tokenized(),
        &set.stem_set(),
        &set.idf,
        weights,
        R::from_f64_lossy(DEFAULT_EPSILON),
    )
}

/// Assemble (row, target) training data from judged pairs, looking each
/// tweet up in its query's candidate set. Pairs whose tweet is not in
/// the candidate set are skipped; the skip count is returned.
/// Training rows, their targets and the count of judged pairs whose
/// tweet never made its query's candidate set.
pub type TrainingData<R> = (Vec<Vec<R>>, Vec<R>, usize);

pub fn training_data<R: Real>(
    sets: &[(&CandidateSet, &SetFeatures<R>)],
    pairs: &[(String, u64, i8)],
) -> Result<TrainingData<R>, PipelineError> {
    let by_query: HashMap<&str, &(&CandidateSet, &SetFeatures<R>)> = sets
        .iter()
        .map(|entry| (entry.0.query.query_id.as_str(), entry))
        .collect();
    let mut rows = Vec::new();
    let mut targets = Vec::new();
    let mut skipped = 0usize;
    for (query_id, tweet_id, label) in pairs {
        match by_query
            .get(query_id.as_str())
            .and_then(|(_, feats)| feats.row_of(*tweet_id))
        {
            Some(row) => {
                rows.push(row.to_vec());
                targets.push(learner::label_to_target::<R>(*label));
            }
            None => skipped += 1,
        }
    }
    if rows.is_empty() {
        return Err(PipelineError::NoTrainingData);
    }
    Ok((rows, targets, skipped))
}

/// Rank one candidate set under one strategy.
pub fn rank_with<R: Real>(
    set: &CandidateSet,
    strategy: Strategy,
    scores: Option<&HashMap<u64, R>>,
    graph: &AgreementGraph<R>,
    plies: u32,
) -> Result<RankedList<R>, PipelineError> {
    match strategy {
        Strategy::RaProp => {
            let scores = scores.ok_or(PipelineError::NeedsModel(strategy))?;
            Ok(ranker::rank_raprop(set, scores, graph, plies)?)
        }
        Strategy::FeatureScore => {
            let scores = scores.ok_or(PipelineError::NeedsModel(strategy))?;
            Ok(ranker::rank_fs(set, scores)?)
        }
        Strategy::Agreement => Ok(ranker::rank_ag(set, graph)),
        Strategy::Recency => Ok(ranker::rank_recency(set)),
        Strategy::TfIdf => Ok(ranker::rank_tfidf(set)),
    }
}

/// A scenario taken through the whole pipeline: candidates, features,
/// forest trained on the scenario's non-holdout gold, normalized
/// feature scores and the agreement graph.
#[derive(Debug)]
pub struct ScenarioRun<R> {
    pub corpus: Corpus,
    pub set: CandidateSet,
    pub features: SetFeatures<R>,
    pub forest: RandomForest<R>,
    pub scores: HashMap<u64, R>,
    pub graph: AgreementGraph<R>,
}

pub fn run_scenario<R: Real>(
    scenario: &Scenario,
    params: &ForestParams,
    n: usize,
) -> Result<ScenarioRun<R>, PipelineError> {
    let corpus = Corpus::new(scenario.tweets.clone(), scenario.users.clone())?;
    let analyzer = Analyzer::bundled();
    let set = {
        let tc = crate::candidate::TokenizedCorpus::new(&corpus, &analyzer);
        crate::candidate::mediator_candidates(&tc, &analyzer, &scenario.query, n)?
    };
    let features = feature_rows::<R>(&set, &corpus, &scenario.pagerank)?;
    let pairs = scenario.training_pairs();
    let (rows, targets, _skipped) = training_data(&[(&set, &features)], &pairs)?;
    let names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    let forest = learner::train(&rows, &targets, &names, params)?;
    let scores = feature_scores(&forest, &features);
    let graph = build_graph(&set, &PosWeights::default());
    Ok(ScenarioRun {
        corpus,
        set,
        features,
        forest,
        scores,
        graph,
    })
}
