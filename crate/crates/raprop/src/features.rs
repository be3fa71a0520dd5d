//! Per-(tweet, query) feature extraction across the three ecosystem
//! layers (user profile, tweet content, linked web pages) plus the
//! proximity-decayed TF-IDF similarity, and population-average
//! imputation of missing values.

use thiserror::Error;

use crate::agreement::IdfStats;
use crate::corpus::{PageRankTable, QuerySpec, TweetRecord, UserProfile};
use crate::scalar::Real;
use crate::text::{PosClass, TokenizedTweet};

/// Decay constant of the proximity factor.
pub const PROXIMITY_WEIGHT: f64 = 0.2;

/// Emoticons scanned for by the smile/frown features.
pub const SMILES: [&str; 4] = [":)", ":-)", ":D", "(:"];
pub const FROWNS: [&str; 3] = [":(", ":-(", "):"];

pub const FEATURE_COUNT: usize = 17;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "followers",
    "friends",
    "verified",
    "account_age_days",
    "statuses",
    "is_retweet",
    "hashtag_count",
    "tweet_length_chars",
    "has_mention",
    "favorite_count",
    "retweet_count",
    "has_question",
    "has_exclaim",
    "has_smile",
    "has_frown",
    "mean_pagerank",
    "proximity_tfidf",
];

/// Feature indexes into a vector's value array.
pub mod feature {
    pub const FOLLOWERS: usize = 0;
    pub const FRIENDS: usize = 1;
    pub const VERIFIED: usize = 2;
    pub const ACCOUNT_AGE_DAYS: usize = 3;
    pub const STATUSES: usize = 4;
    pub const IS_RETWEET: usize = 5;
    pub const HASHTAG_COUNT: usize = 6;
    pub const TWEET_LENGTH_CHARS: usize = 7;
    pub const HAS_MENTION: usize = 8;
    pub const FAVORITE_COUNT: usize = 9;
    pub const RETWEET_COUNT: usize = 10;
    pub const HAS_QUESTION: usize = 11;
    pub const HAS_EXCLAIM: usize = 12;
    pub const HAS_SMILE: usize = 13;
    pub const HAS_FROWN: usize = 14;
    pub const MEAN_PAGERANK: usize = 15;
    pub const PROXIMITY_TFIDF: usize = 16;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("empty query: no stems to score against")]
    EmptyQuery,
    #[error("cannot impute an empty vector list")]
    EmptyVectorList,
    #[error("feature vector still has missing values")]
    Incomplete,
}

/// One tweet's features; `None` marks a missing value awaiting imputation.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<R> {
    values: [Option<R>; FEATURE_COUNT],
}

impl<R: Real> FeatureVector<R> {
    pub fn get(&self, index: usize) -> Option<R> {
        self.values[index]
    }

    pub fn set(&mut self, index: usize, value: Option<R>) {
        self.values[index] = value;
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Dense row for the learner; all fields must be present.
    pub fn dense(&self) -> Result<Vec<R>, FeatureError> {
        self.values
            .iter()
            .map(|v| v.ok_or(FeatureError::Incomplete))
            .collect()
    }
}

/// Proximity-decayed TF-IDF similarity of a tweet to the query:
/// `T * exp(-w * d / l)` where `T` sums TF * IDF over the query stems,
/// `l` is the deduplicated query stem count and `d` accumulates, per
/// query stem, the token distance to the nearest occurrence of any other
/// query stem (a stem absent from the tweet charges the tweet's token
/// count instead).
pub fn proximity_tfidf<R: Real>(
    tweet: &TokenizedTweet,
    query_stems: &[String],
    idf: &IdfStats,
) -> Result<R, FeatureError> {
    if query_stems.is_empty() {
        return Err(FeatureError::EmptyQuery);
    }
    let l = query_stems.len();

    // Occurrence positions per query stem, over the agreement token view
    // (URL chunks participate; noise tokens do not).
    let positions: Vec<Vec<usize>> = query_stems
        .iter()
        .map(|stem| {
            tweet
                .agreement_tokens
                .iter()
                .filter(|t| &t.stem == stem)
                .map(|t| t.position)
                .collect()
        })
        .collect();

    let mut similarity = R::zero();
    for (stem, occurrences) in query_stems.iter().zip(&positions) {
        if occurrences.is_empty() {
            continue;
        }
        let tf = R::from_usize(occurrences.len()).unwrap();
        let idf_val: R = idf.idf(stem);
        similarity = similarity + tf * idf_val;
    }

    let mut distance = 0usize;
    for (i, occurrences) in positions.iter().enumerate() {
        if occurrences.is_empty() {
            distance += tweet.tokens.len();
            continue;
        }
        let mut nearest: Option<usize> = None;
        for (j, other) in positions.iter().enumerate() {
            if i == j {
                continue;
            }
            for &p in occurrences {
                for &q in other {
                    let gap = p.abs_diff(q);
                    nearest = Some(nearest.map_or(gap, |n| n.min(gap)));
                }
            }
        }
        distance += nearest.unwrap_or(0);
    }

    let w = R::from_f64_lossy(PROXIMITY_WEIGHT);
    let d = R::from_usize(distance).unwrap();
    let l = R::from_usize(l).unwrap();
    Ok(similarity * (-(w * d) / l).exp())
}

/// Extract the full feature vector for one candidate tweet.
pub fn extract_features<R: Real>(
    record: &TweetRecord,
    user: Option<&UserProfile>,
    pagerank: &PageRankTable,
    query: &QuerySpec,
    tokenized: &TokenizedTweet,
    query_stems: &[String],
    idf: &IdfStats,
) -> Result<FeatureVector<R>, FeatureError> {
    let mut values: [Option<R>; FEATURE_COUNT] = [None; FEATURE_COUNT];

    let from_u64 = |v: u64| R::from_u64(v).expect("count fits scalar");
    let flag = |b: bool| if b { R::one() } else { R::zero() };

    if let Some(user) = user {
        values[feature::FOLLOWERS] = user.follower_count.map(from_u64);
        values[feature::FRIENDS] = user.friends_count.map(from_u64);
        values[feature::VERIFIED] = user.verified.map(flag);
        values[feature::ACCOUNT_AGE_DAYS] = user.created_at_ms.map(|created| {
            R::from_f64_lossy((query.query_time_ms - created) as f64 / 86_400_000.0)
        });
        values[feature::STATUSES] = user.statuses_count.map(from_u64);
    }

    values[feature::IS_RETWEET] = Some(flag(record.is_retweet));
    values[feature::HASHTAG_COUNT] = Some(
        R::from_usize(
            tokenized
                .tokens
                .iter()
                .filter(|t| t.pos == PosClass::Hashtag)
                .count(),
        )
        .unwrap(),
    );
    values[feature::TWEET_LENGTH_CHARS] = Some(R::from_usize(record.text.chars().count()).unwrap());
    values[feature::HAS_MENTION] = Some(flag(
        tokenized.tokens.iter().any(|t| t.pos == PosClass::Mention),
    ));
    values[feature::FAVORITE_COUNT] = Some(from_u64(record.favorite_count));
    values[feature::RETWEET_COUNT] = Some(from_u64(record.retweet_count));
    values[feature::HAS_QUESTION] = Some(flag(record.text.contains('?')));
    values[feature::HAS_EXCLAIM] = Some(flag(record.text.contains('!')));
    values[feature::HAS_SMILE] = Some(flag(SMILES.iter().any(|s| record.text.contains(s))));
    values[feature::HAS_FROWN] = Some(flag(FROWNS.iter().any(|s| record.text.contains(s))));

    let mut pagerank_sum = 0.0f64;
    let mut pagerank_hits = 0usize;
    for url in &record.urls {
        if let Some(score) = pagerank.get(url) {
            pagerank_sum += score;
            pagerank_hits += 1;
        }
    }
    values[feature::MEAN_PAGERANK] = if pagerank_hits > 0 {
        Some(R::from_f64_lossy(pagerank_sum / pagerank_hits as f64))
    } else {
        None
    };

    values[feature::PROXIMITY_TFIDF] = Some(proximity_tfidf(tokenized, query_stems, idf)?);

    Ok(FeatureVector { values })
}

/// Replace every missing field with the mean of its present values over
/// the candidate set; fields missing everywhere become zero.
pub fn impute_missing<R: Real>(
    vectors: &[FeatureVector<R>],
) -> Result<Vec<FeatureVector<R>>, FeatureError> {
    if vectors.is_empty() {
        return Err(FeatureError::EmptyVectorList);
    }
    let mut means = [R::zero(); FEATURE_COUNT];
    for (i, mean) in means.iter_mut().enumerate() {
        let mut sum = R::zero();
        let mut count = 0usize;
        for v in vectors {
            if let Some(x) = v.values[i] {
                sum = sum + x;
                count += 1;
            }
        }
        if count > 0 {
            *mean = sum / R::from_usize(count).unwrap();
        }
    }
    Ok(vectors
        .iter()
        .map(|v| {
            let mut out = v.clone();
            for (i, slot) in out.values.iter_mut().enumerate() {
                if slot.is_none() {
                    *slot = Some(means[i]);
                }
            }
            out
        })
        .collect())
}
