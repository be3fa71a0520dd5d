//! Feature-score propagation over the agreement graph and the ranking
//! strategies: RAProp (propagated feature scores), FS (feature score
//! only), AG (agreement mass only), TS (recency, simulating native
//! search) and TFIDF.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::agreement::AgreementGraph;
use crate::candidate::CandidateSet;
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("no score supplied for tweet {0}")]
    MissingScore(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    RaProp,
    FeatureScore,
    Agreement,
    Recency,
    TfIdf,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::RaProp,
        Strategy::FeatureScore,
        Strategy::Agreement,
        Strategy::Recency,
        Strategy::TfIdf,
    ];

    pub fn run_tag(self) -> &'static str {
        match self {
            Strategy::RaProp => "RAProp",
            Strategy::FeatureScore => "FS",
            Strategy::Agreement => "AG",
            Strategy::Recency => "TS",
            Strategy::TfIdf => "TFIDF",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.run_tag())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .iter()
            .copied()
            .find(|st| st.run_tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy {s:?} (expected RAProp, FS, AG, TS or TFIDF)"))
    }
}

/// A scored, ordered result list for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList<R> {
    pub query_id: String,
    pub strategy: Strategy,
    pub plies: u32,
    pub entries: Vec<(u64, R)>,
}

impl<R: Real> RankedList<R> {
    /// TREC run format: `query_id Q0 tweet_id rank score run_tag`.
    pub fn to_trec_run(&self) -> String {
        let mut out = String::new();
        for (rank, (tweet_id, score)) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{} Q0 {} {} {:?} {}\n",
                self.query_id,
                tweet_id,
                rank + 1,
                score.to_f64().expect("score fits f64"),
                self.strategy.run_tag(),
            ));
        }
        out
    }
}

/// Parse a TREC run file written by [`RankedList::to_trec_run`].
pub fn parse_trec_run(content: &str) -> Result<RankedList<f64>, String> {
    let mut query_id: Option<String> = None;
    let mut strategy = Strategy::FeatureScore;
    let mut entries = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(format!("line {}: expected 6 columns", lineno + 1));
        }
        let qid = fields[0].to_string();
        if let Some(prev) = &query_id {
            if *prev != qid {
                return Err(format!("line {}: mixed query ids", lineno + 1));
            }
        } else {
            query_id = Some(qid);
        }
        let tweet_id: u64 = fields[2]
            .parse()
            .map_err(|e| format!("line {}: tweet id: {e}", lineno + 1))?;
        let score: f64 = fields[4]
            .parse()
            .map_err(|e| format!("line {}: score: {e}", lineno + 1))?;
        strategy = fields[5].parse()?;
        entries.push((tweet_id, score));
    }
    Ok(RankedList {
        query_id: query_id.ok_or("empty run file")?,
        strategy,
        plies: if strategy == Strategy::RaProp { 1 } else { 0 },
        entries,
    })
}

/// Apply `S' = S + W * S` the given number of times. Each ply reads the
/// previous ply's scores; zero plies is the identity. Every graph node
/// must have a score.
pub fn propagate<R: Real>(
    graph: &AgreementGraph<R>,
    scores: &HashMap<u64, R>,
    plies: u32,
) -> Result<HashMap<u64, R>, RankError> {
    let mut current: Vec<R> = graph
        .node_ids()
        .iter()
        .map(|id| scores.get(id).copied().ok_or(RankError::MissingScore(*id)))
        .collect::<Result<_, _>>()?;

    for _ in 0..plies {
        let mut next = current.clone();
        for (i, slot) in next.iter_mut().enumerate() {
            for &(j, w) in graph.neighbors(i) {
                *slot = *slot + w * current[j];
            }
        }
        current = next;
    }

    Ok(graph.node_ids().iter().copied().zip(current).collect())
}

/// Sort scored tweets: score descending, then recency (newest first),
/// then ascending tweet id. The same rule everywhere keeps strategies
/// comparable.
fn order_entries<R: Real>(set: &CandidateSet, mut scored: Vec<(u64, R)>) -> Vec<(u64, R)> {
    let ts: HashMap<u64, i64> = set
        .members
        .iter()
        .map(|m| (m.record.tweet_id, m.record.timestamp_ms))
        .collect();
    scored.sort_by(|(id_a, score_a), (id_b, score_b)| {
        score_b
            .partial_cmp(score_a)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| ts.get(id_b).cmp(&ts.get(id_a)))
            .then_with(|| id_a.cmp(id_b))
    });
    scored
}

fn member_scores<R: Real>(
    set: &CandidateSet,
    scores: &HashMap<u64, R>,
) -> Result<Vec<(u64, R)>, RankError> {
    set.members
        .iter()
        .map(|m| {
            let id = m.record.tweet_id;
            scores
                .get(&id)
                .copied()
                .map(|s| (id, s))
                .ok_or(RankError::MissingScore(id))
        })
        .collect()
}

/// RAProp: propagate feature scores over the agreement graph, then rank.
pub fn rank_raprop<R: Real>(
    set: &CandidateSet,
    feature_scores: &HashMap<u64, R>,
    graph: &AgreementGraph<R>,
    plies: u32,
) -> Result<RankedList<R>, RankError> {
    let propagated = propagate(graph, feature_scores, plies)?;
    let scored = member_scores(set, &propagated)?;
    Ok(RankedList {
        query_id: set.query.query_id.clone(),
        strategy: Strategy::RaProp,
        plies,
        entries: order_entries(set, scored),
    })
}

/// FS baseline: rank by the feature score alone.
pub fn rank_fs<R: Real>(
    set: &CandidateSet,
    feature_scores: &HashMap<u64, R>,
) -> Result<RankedList<R>, RankError> {
    let scored = member_scores(set, feature_scores)?;
    Ok(RankedList {
        query_id: set.query.query_id.clone(),
        strategy: Strategy::FeatureScore,
        plies: 0,
        entries: order_entries(set, scored),
    })
}

/// AG baseline: rank by total incident agreement (unweighted vote mass).
pub fn rank_ag<R: Real>(set: &CandidateSet, graph: &AgreementGraph<R>) -> RankedList<R> {
    let scored: Vec<(u64, R)> = set
        .members
        .iter()
        .map(|m| {
            let id = m.record.tweet_id;
            let mass = graph
                .index_of(id)
                .map(|i| graph.incident_weight(i))
                .unwrap_or_else(R::zero);
            (id, mass)
        })
        .collect();
    RankedList {
        query_id: set.query.query_id.clone(),
        strategy: Strategy::Agreement,
        plies: 0,
        entries: order_entries(set, scored),
    }
}

/// TS baseline: reverse chronological order, the native-search stand-in.
pub fn rank_recency<R: Real>(set: &CandidateSet) -> RankedList<R> {
    let scored: Vec<(u64, R)> = set
        .members
        .iter()
        .map(|m| {
            (
                m.record.tweet_id,
                R::from_i64(m.record.timestamp_ms).expect("timestamp fits scalar"),
            )
        })
        .collect();
    RankedList {
        query_id: set.query.query_id.clone(),
        strategy: Strategy::Recency,
        plies: 0,
        entries: order_entries(set, scored),
    }
}

/// TFIDF baseline: plain sum of TF * IDF over the query stems, no
/// proximity decay and no noun boost.
pub fn rank_tfidf<R: Real>(set: &CandidateSet) -> RankedList<R> {
    let scored: Vec<(u64, R)> = set
        .members
        .iter()
        .map(|m| {
            let mut score = R::zero();
            for qs in &set.stems {
                let count = m
                    .tokens
                    .agreement_tokens
                    .iter()
                    .filter(|t| t.stem == qs.stem)
                    .count();
                if count > 0 {
                    let idf_val: R = set.idf.idf(&qs.stem);
                    score = score + R::from_usize(count).unwrap() * idf_val;
                }
            }
            (m.record.tweet_id, score)
        })
        .collect();
    RankedList {
        query_id: set.query.query_id.clone(),
        strategy: Strategy::TfIdf,
        plies: 0,
        entries: order_entries(set, scored),
    }
}
