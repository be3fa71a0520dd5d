//! Candidate result set construction: mediator (most recent N keyword
//! matches, simulating search-API access) and non-mediator (top N by
//! noun-boosted TF-IDF over the whole corpus), with retweet/reply and
//! minimum-term filtering and one round of noun query expansion.

use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::agreement::IdfStats;
use crate::corpus::{Corpus, QuerySpec, TweetRecord};
use crate::scalar::Real;
use crate::text::{Analyzer, PosClass, TokenizedTweet};

/// Tweets kept per query before filtering.
pub const DEFAULT_CANDIDATE_N: usize = 2000;
/// Minimum term count a candidate tweet must have.
pub const MIN_TERMS: usize = 4;
/// Non-mediator selection weighs noun query terms this much higher.
pub const NOUN_BOOST: f64 = 10.0;
/// Number of nouns appended by query expansion.
pub const EXPANSION_TERMS: usize = 5;

#[derive(Debug, Error)]
pub enum CandidateError {
    #[error("query {0:?} has no usable terms after tokenization")]
    EmptyQuery(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionModel {
    Mediator,
    NonMediator,
}

/// One query term: its stem, word class and whether expansion added it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryStem {
    pub stem: String,
    pub pos: PosClass,
    pub from_expansion: bool,
}

/// A corpus tokenized once and shared across queries.
#[derive(Debug)]
pub struct TokenizedCorpus<'a> {
    pub corpus: &'a Corpus,
    tokens: Vec<TokenizedTweet>,
    corpus_idf: OnceLock<IdfStats>,
}

impl<'a> TokenizedCorpus<'a> {
    pub fn new(corpus: &'a Corpus, analyzer: &Analyzer) -> Self {
        let tokens: Vec<TokenizedTweet> = corpus
            .tweets
            .par_iter()
            .map(|t| analyzer.tokenize_tweet(t))
            .collect();
        Self {
            corpus,
            tokens,
            corpus_idf: OnceLock::new(),
        }
    }

    pub fn tokens(&self) -> &[TokenizedTweet] {
        &self.tokens
    }

    /// Document frequencies over the whole corpus; drives non-mediator
    /// selection. Computed on first use.
    pub fn corpus_idf(&self) -> &IdfStats {
        self.corpus_idf
            .get_or_init(|| IdfStats::compute(&self.tokens))
    }
}

/// A tweet admitted to a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub record: TweetRecord,
    pub tokens: TokenizedTweet,
}

/// The per-query candidate result set, carrying the expanded query, its
/// stems and the set-local document frequencies.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub query: QuerySpec,
    pub model: SelectionModel,
    pub members: Vec<Candidate>,
    pub stems: Vec<QueryStem>,
    pub original_stems: Vec<String>,
    pub idf: IdfStats,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn tokenized(&self) -> Vec<TokenizedTweet> {
        self.members.iter().map(|m| m.tokens.clone()).collect()
    }

    /// All query stems (original + expansion) as a set, for residual
    /// content computation.
    pub fn stem_set(&self) -> HashSet<String> {
        self.stems.iter().map(|s| s.stem.clone()).collect()
    }

    pub fn timestamp_of(&self, tweet_id: u64) -> Option<i64> {
        self.members
            .iter()
            .find(|m| m.record.tweet_id == tweet_id)
            .map(|m| m.record.timestamp_ms)
    }

    /// Check every structural candidate-set invariant; test support.
    pub fn check_invariants(&self, n: usize) -> Result<(), String> {
        if self.members.len() > n {
            return Err(format!("{} members exceed N={n}", self.members.len()));
        }
        let original_set: HashSet<String> = self.original_stems.iter().cloned().collect();
        for m in &self.members {
            if m.record.timestamp_ms > self.query.query_time_ms {
                return Err(format!("tweet {} is after query time", m.record.tweet_id));
            }
            if m.record.is_retweet || m.record.is_reply {
                return Err(format!("tweet {} is a retweet or reply", m.record.tweet_id));
            }
            if m.tokens.term_count() < MIN_TERMS {
                return Err(format!(
                    "tweet {} has fewer than {MIN_TERMS} terms",
                    m.record.tweet_id
                ));
            }
            if !m.tokens.matches_any_stem(&original_set) {
                return Err(format!(
                    "tweet {} lacks every pre-expansion query keyword",
                    m.record.tweet_id
                ));
            }
        }
        Ok(())
    }
}

/// Drop retweets and replies.
pub fn filter_retweets_replies(members: Vec<Candidate>) -> Vec<Candidate> {
    members
        .into_iter()
        .filter(|m| !m.record.is_retweet && !m.record.is_reply)
        .collect()
}

/// Keep tweets with at least `k` non-punctuation tokens.
pub fn min_term_filter(members: Vec<Candidate>, k: usize) -> Vec<Candidate> {
    members
        .into_iter()
        .filter(|m| m.tokens.term_count() >= k)
        .collect()
}

fn classify_query_stems(analyzer: &Analyzer, text: &str) -> Vec<QueryStem> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for tok in analyzer.tokenize(text) {
        if tok.is_stop || tok.pos == PosClass::Punctuation {
            continue;
        }
        if seen.insert(tok.stem.clone()) {
            out.push(QueryStem {
                stem: tok.stem,
                pos: tok.pos,
                from_expansion: false,
            });
        }
    }
    out
}

/// Append the top-5 noun stems by TF-IDF over the initial set to the
/// query. Ties break lexicographically; original terms are never removed.
pub fn expand_query(
    query: &QuerySpec,
    original: &[QueryStem],
    initial: &[Candidate],
) -> (QuerySpec, Vec<QueryStem>) {
    let original_set: HashSet<&str> = original.iter().map(|s| s.stem.as_str()).collect();
    let tokens: Vec<TokenizedTweet> = initial.iter().map(|m| m.tokens.clone()).collect();
    let idf = IdfStats::compute(&tokens);

    // Total noun-occurrence counts per stem over the initial set.
    let mut tf: std::collections::HashMap<&str, (usize, PosClass)> =
        std::collections::HashMap::new();
    for member in initial {
        for tok in &member.tokens.agreement_tokens {
            if !tok.pos.is_noun() || original_set.contains(tok.stem.as_str()) {
                continue;
            }
            let entry = tf.entry(tok.stem.as_str()).or_insert((0, tok.pos));
            entry.0 += 1;
            if tok.pos == PosClass::ProperNoun {
                entry.1 = PosClass::ProperNoun;
            }
        }
    }

    let mut scored: Vec<(f64, &str, PosClass)> = tf
        .into_iter()
        .map(|(stem, (count, pos))| (count as f64 * idf.idf::<f64>(stem), stem, pos))
        .collect();
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.1.cmp(b.1))
    });
    scored.truncate(EXPANSION_TERMS);

    let mut stems = original.to_vec();
    let mut text = query.text.clone();
    for (_, stem, pos) in &scored {
        text.push(' ');
        text.push_str(stem);
        stems.push(QueryStem {
            stem: stem.to_string(),
            pos: *pos,
            from_expansion: true,
        });
    }
    (
        QuerySpec {
            query_id: query.query_id.clone(),
            text,
            query_time_ms: query.query_time_ms,
        },
        stems,
    )
}

/// Plain TF-IDF similarity of a tweet to query stems, nouns boosted.
fn selection_score<R: Real>(tweet: &TokenizedTweet, stems: &[QueryStem], idf: &IdfStats) -> R {
    let boost = R::from_f64_lossy(NOUN_BOOST);
    let mut score = R::zero();
    for qs in stems {
        let count = tweet
            .agreement_tokens
            .iter()
            .filter(|t| t.stem == qs.stem)
            .count();
        if count == 0 {
            continue;
        }
        let tf = R::from_usize(count).unwrap();
        let idf_val: R = idf.idf(&qs.stem);
        let term = tf * idf_val;
        score = score + if qs.pos.is_noun() { term * boost } else { term };
    }
    score
}

fn select<R: Real>(
    tc: &TokenizedCorpus<'_>,
    pool: &[usize],
    stems: &[QueryStem],
    n: usize,
    model: SelectionModel,
) -> Vec<Candidate> {
    let stem_set: HashSet<String> = stems.iter().map(|s| s.stem.clone()).collect();
    let mut picked: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&i| tc.tokens()[i].matches_any_stem(&stem_set))
        .collect();
    match model {
        SelectionModel::Mediator => {
            picked.sort_by(|&a, &b| {
                let ta = &tc.corpus.tweets[a];
                let tb = &tc.corpus.tweets[b];
                tb.timestamp_ms
                    .cmp(&ta.timestamp_ms)
                    .then_with(|| ta.tweet_id.cmp(&tb.tweet_id))
            });
        }
        SelectionModel::NonMediator => {
            let idf = tc.corpus_idf();
            let scores: Vec<R> = picked
                .iter()
                .map(|&i| selection_score(&tc.tokens()[i], stems, idf))
                .collect();
            let mut order: Vec<usize> = (0..picked.len()).collect();
            order.sort_by(|&x, &y| {
                scores[y]
                    .partial_cmp(&scores[x])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| {
                        tc.corpus.tweets[picked[x]]
                            .tweet_id
                            .cmp(&tc.corpus.tweets[picked[y]].tweet_id)
                    })
            });
            picked = order.into_iter().map(|x| picked[x]).collect();
        }
    }
    picked.truncate(n);
    let members: Vec<Candidate> = picked
        .into_iter()
        .map(|i| Candidate {
            record: tc.corpus.tweets[i].clone(),
            tokens: tc.tokens()[i].clone(),
        })
        .collect();
    min_term_filter(filter_retweets_replies(members), MIN_TERMS)
}

fn build<R: Real>(
    tc: &TokenizedCorpus<'_>,
    analyzer: &Analyzer,
    query: &QuerySpec,
    n: usize,
    model: SelectionModel,
) -> Result<CandidateSet, CandidateError> {
    let original = classify_query_stems(analyzer, &query.text);
    if original.is_empty() {
        return Err(CandidateError::EmptyQuery(query.text.clone()));
    }
    let original_stems: Vec<String> = original.iter().map(|s| s.stem.clone()).collect();
    let original_set: HashSet<String> = original_stems.iter().cloned().collect();

    // Only tweets bearing a pre-expansion keyword are ever candidates;
    // expansion re-ranks this pool but cannot add keyword-free tweets.
    let pool: Vec<usize> = (0..tc.corpus.tweets.len())
        .filter(|&i| {
            tc.corpus.tweets[i].timestamp_ms <= query.query_time_ms
                && tc.tokens()[i].matches_any_stem(&original_set)
        })
        .collect();

    let initial = select::<R>(tc, &pool, &original, n, model);
    let (expanded_query, stems) = expand_query(query, &original, &initial);
    let members = select::<R>(tc, &pool, &stems, n, model);
    let idf = IdfStats::compute(&members.iter().map(|m| m.tokens.clone()).collect::<Vec<_>>());

    Ok(CandidateSet {
        query: expanded_query,
        model,
        members,
        stems,
        original_stems,
        idf,
    })
}

/// The most recent N keyword-matching tweets, filtered and expanded.
pub fn mediator_candidates(
    tc: &TokenizedCorpus<'_>,
    analyzer: &Analyzer,
    query: &QuerySpec,
    n: usize,
) -> Result<CandidateSet, CandidateError> {
    build::<f64>(tc, analyzer, query, n, SelectionModel::Mediator)
}

/// The top N tweets by noun-boosted TF-IDF over the whole corpus,
/// filtered and expanded.
pub fn nonmediator_candidates<R: Real>(
    tc: &TokenizedCorpus<'_>,
    analyzer: &Analyzer,
    query: &QuerySpec,
    n: usize,
) -> Result<CandidateSet, CandidateError> {
    build::<R>(tc, analyzer, query, n, SelectionModel::NonMediator)
}
