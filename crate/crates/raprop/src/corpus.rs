//! Offline dataset loading: tweets, user profiles, URL PageRank table,
//! queries and relevance judgments.
//!
//! All inputs are newline-delimited text files so fixtures stay diff-able:
//!
//! * tweets:   `id=.. user_id=.. ts_ms=.. is_rt=.. is_reply=.. fav=.. rt_count=.. [urls=a,b] text=..`
//!   (`text` is always the last key; its value runs to the end of the line)
//! * users:    `id=..` plus any of `followers= friends= verified= created_ms= statuses=`;
//!   absent keys mean the field is unknown
//! * qrels:    whitespace-separated `query_id 0 tweet_id label`, label in {-1,0,1}
//! * pagerank: tab-separated `url<TAB>score`, score in [0,10]
//! * queries:  tab-separated `query_id<TAB>text<TAB>query_time_ms`

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteIo {
        path: String,
        source: std::io::Error,
    },
    #[error("duplicate tweet id {0}")]
    DuplicateTweetId(u64),
    #[error("duplicate user id {0}")]
    DuplicateUserId(u64),
    #[error("{path}:{line}: bad relevance label {value:?} (expected -1, 0 or 1)")]
    BadLabel {
        path: String,
        line: usize,
        value: String,
    },
    #[error("{path}:{line}: duplicate judgment for query {query} tweet {tweet}")]
    DuplicateJudgment {
        path: String,
        line: usize,
        query: String,
        tweet: u64,
    },
    #[error("{path}:{line}: malformed line: {what}")]
    Malformed {
        path: String,
        line: usize,
        what: String,
    },
}

fn read_to_string(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// One tweet of the offline collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: u64,
    pub user_id: u64,
    /// Epoch milliseconds, UTC. Always positive.
    pub timestamp_ms: i64,
    pub text: String,
    pub is_retweet: bool,
    pub is_reply: bool,
    pub favorite_count: u64,
    pub retweet_count: u64,
    pub urls: Vec<String>,
}

/// Profile of a tweet author. Every field but the id may be unknown;
/// downstream feature imputation fills the gaps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UserProfile {
    pub user_id: u64,
    pub follower_count: Option<u64>,
    pub friends_count: Option<u64>,
    pub verified: Option<bool>,
    pub created_at_ms: Option<i64>,
    pub statuses_count: Option<u64>,
}

/// URL -> PageRank lookup with the population mean precomputed for imputation.
#[derive(Debug, Clone, Default)]
pub struct PageRankTable {
    scores: HashMap<String, f64>,
    population_mean: f64,
}

impl PageRankTable {
    pub fn from_entries(entries: impl IntoIterator<Item = (String, f64)>) -> Self {
        let mut scores = HashMap::new();
        for (url, score) in entries {
            scores.insert(normalize_url(&url), score);
        }
        let mut table = Self {
            scores,
            population_mean: 0.0,
        };
        table.recompute_mean();
        table
    }

    fn recompute_mean(&mut self) {
        self.population_mean = if self.scores.is_empty() {
            0.0
        } else {
            self.scores.values().sum::<f64>() / self.scores.len() as f64
        };
    }

    pub fn get(&self, url: &str) -> Option<f64> {
        self.scores.get(&normalize_url(url)).copied()
    }

    pub fn population_mean(&self) -> f64 {
        self.population_mean
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Entries in normalized-URL order, for deterministic serialization.
    pub fn sorted_entries(&self) -> Vec<(String, f64)> {
        let mut v: Vec<_> = self.scores.iter().map(|(u, s)| (u.clone(), *s)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// Lowercase the scheme and host of a URL and drop a single trailing slash,
/// so lookups are insensitive to the casing Twitter clients emit.
pub fn normalize_url(url: &str) -> String {
    let url = url.trim();
    let mut out = match url.find("://") {
        Some(idx) => {
            let (scheme, rest) = url.split_at(idx + 3);
            let host_end = rest.find('/').unwrap_or(rest.len());
            let (host, tail) = rest.split_at(host_end);
            format!(
                "{}{}{}",
                scheme.to_ascii_lowercase(),
                host.to_ascii_lowercase(),
                tail
            )
        }
        None => {
            let host_end = url.find('/').unwrap_or(url.len());
            let (host, tail) = url.split_at(host_end);
            format!("{}{}", host.to_ascii_lowercase(), tail)
        }
    };
    if out.ends_with('/') {
        out.pop();
    }
    out
}

/// Relevance judgments keyed by (query_id, tweet_id).
/// Labels: -1 untrustworthy, 0 irrelevant, 1 relevant.
#[derive(Debug, Clone, Default)]
pub struct GoldStandard {
    labels: HashMap<(String, u64), i8>,
}

impl GoldStandard {
    pub fn from_entries(entries: impl IntoIterator<Item = ((String, u64), i8)>) -> Self {
        Self {
            labels: entries.into_iter().collect(),
        }
    }

    pub fn label(&self, query_id: &str, tweet_id: u64) -> Option<i8> {
        self.labels.get(&(query_id.to_string(), tweet_id)).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of tweets judged relevant (label 1) for a query.
    pub fn relevant_count(&self, query_id: &str) -> usize {
        self.labels
            .iter()
            .filter(|((q, _), l)| q == query_id && **l == 1)
            .count()
    }

    /// All judged pairs in (query_id, tweet_id) order, for determinism.
    pub fn sorted_pairs(&self) -> Vec<(String, u64, i8)> {
        let mut v: Vec<_> = self
            .labels
            .iter()
            .map(|((q, t), l)| (q.clone(), *t, *l))
            .collect();
        v.sort();
        v
    }
}

/// One evaluation query. Tweets posted after `query_time_ms` are excluded
/// from its candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySpec {
    pub query_id: String,
    pub text: String,
    pub query_time_ms: i64,
}

/// Loaded tweet + user collections with an id index over users.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub tweets: Vec<TweetRecord>,
    pub users: Vec<UserProfile>,
    user_index: HashMap<u64, usize>,
}

impl Corpus {
    pub fn new(tweets: Vec<TweetRecord>, users: Vec<UserProfile>) -> Result<Self, CorpusError> {
        let mut seen = HashMap::new();
        for t in &tweets {
            if seen.insert(t.tweet_id, ()).is_some() {
                return Err(CorpusError::DuplicateTweetId(t.tweet_id));
            }
        }
        let mut user_index = HashMap::new();
        for (i, u) in users.iter().enumerate() {
            if user_index.insert(u.user_id, i).is_some() {
                return Err(CorpusError::DuplicateUserId(u.user_id));
            }
        }
        Ok(Self {
            tweets,
            users,
            user_index,
        })
    }

    pub fn user(&self, user_id: u64) -> Option<&UserProfile> {
        self.user_index.get(&user_id).map(|&i| &self.users[i])
    }
}

/// Per-file load outcome: how many lines were skipped and why.
#[derive(Debug, Clone, Default)]
pub struct FileReport {
    pub skipped: usize,
    pub warnings: Vec<String>,
}

impl FileReport {
    fn warn(&mut self, path: &Path, line: usize, msg: impl AsRef<str>) {
        self.warnings
            .push(format!("{}:{}: {}", path.display(), line, msg.as_ref()));
    }

    fn skip(&mut self, path: &Path, line: usize, msg: impl AsRef<str>) {
        self.skipped += 1;
        self.warn(path, line, msg);
    }
}

fn split_kv(field: &str) -> Option<(&str, &str)> {
    field.split_once('=')
}

fn parse_tweet_line(line: &str) -> Result<TweetRecord, String> {
    // `text=` starts the free-text tail; everything before it is key=value.
    let (head, text) = match line.split_once("text=") {
        Some((head, text)) => (head, text),
        None => return Err("missing text= field".into()),
    };
    let mut id = None;
    let mut user_id = None;
    let mut ts_ms = None;
    let mut is_rt = None;
    let mut is_reply = None;
    let mut fav = None;
    let mut rt_count = None;
    let mut urls = Vec::new();
    for field in head.split_whitespace() {
        let (key, value) = split_kv(field).ok_or_else(|| format!("bad field {field:?}"))?;
        match key {
            "id" => id = Some(value.parse::<u64>().map_err(|e| format!("id: {e}"))?),
            "user_id" => user_id = Some(value.parse::<u64>().map_err(|e| format!("user_id: {e}"))?),
            "ts_ms" => ts_ms = Some(value.parse::<i64>().map_err(|e| format!("ts_ms: {e}"))?),
            "is_rt" => is_rt = Some(parse_bool(value)?),
            "is_reply" => is_reply = Some(parse_bool(value)?),
            "fav" => fav = Some(value.parse::<u64>().map_err(|e| format!("fav: {e}"))?),
            "rt_count" => {
                rt_count = Some(value.parse::<u64>().map_err(|e| format!("rt_count: {e}"))?)
            }
            "urls" => {
                urls = value
                    .split(',')
                    .filter(|u| !u.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    let timestamp_ms = ts_ms.ok_or("missing ts_ms")?;
    if timestamp_ms <= 0 {
        return Err(format!("non-positive timestamp {timestamp_ms}"));
    }
    Ok(TweetRecord {
        tweet_id: id.ok_or("missing id")?,
        user_id: user_id.ok_or("missing user_id")?,
        timestamp_ms,
        text: text.to_string(),
        is_retweet: is_rt.ok_or("missing is_rt")?,
        is_reply: is_reply.ok_or("missing is_reply")?,
        favorite_count: fav.ok_or("missing fav")?,
        retweet_count: rt_count.ok_or("missing rt_count")?,
        urls,
    })
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        other => Err(format!("bad boolean {other:?}")),
    }
}

fn parse_user_line(line: &str) -> Result<UserProfile, String> {
    let mut profile = UserProfile::default();
    let mut saw_id = false;
    for field in line.split_whitespace() {
        let (key, value) = split_kv(field).ok_or_else(|| format!("bad field {field:?}"))?;
        match key {
            "id" => {
                profile.user_id = value.parse().map_err(|e| format!("id: {e}"))?;
                saw_id = true;
            }
            "followers" => {
                profile.follower_count = Some(value.parse().map_err(|e| format!("followers: {e}"))?)
            }
            "friends" => {
                profile.friends_count = Some(value.parse().map_err(|e| format!("friends: {e}"))?)
            }
            "verified" => profile.verified = Some(parse_bool(value)?),
            "created_ms" => {
                profile.created_at_ms = Some(value.parse().map_err(|e| format!("created_ms: {e}"))?)
            }
            "statuses" => {
                profile.statuses_count = Some(value.parse().map_err(|e| format!("statuses: {e}"))?)
            }
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    if !saw_id {
        return Err("missing id".into());
    }
    Ok(profile)
}

/// Load the tweets file. Malformed lines are skipped with a warning;
/// duplicate tweet ids are fatal.
pub fn load_tweets(path: &Path) -> Result<(Vec<TweetRecord>, FileReport), CorpusError> {
    let content = read_to_string(path)?;
    let mut tweets = Vec::new();
    let mut seen = HashMap::new();
    let mut report = FileReport::default();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_tweet_line(line) {
            Ok(tweet) => {
                if seen.insert(tweet.tweet_id, ()).is_some() {
                    return Err(CorpusError::DuplicateTweetId(tweet.tweet_id));
                }
                if tweet.text.chars().count() > 140 {
                    report.warn(
                        path,
                        lineno,
                        format!("tweet {} longer than 140 characters", tweet.tweet_id),
                    );
                }
                tweets.push(tweet);
            }
            Err(what) => report.skip(path, lineno, what),
        }
    }
    Ok((tweets, report))
}

/// Load the users file. Same skip/fatal policy as [`load_tweets`].
pub fn load_users(path: &Path) -> Result<(Vec<UserProfile>, FileReport), CorpusError> {
    let content = read_to_string(path)?;
    let mut users = Vec::new();
    let mut seen = HashMap::new();
    let mut report = FileReport::default();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_user_line(line) {
            Ok(user) => {
                if seen.insert(user.user_id, ()).is_some() {
                    return Err(CorpusError::DuplicateUserId(user.user_id));
                }
                users.push(user);
            }
            Err(what) => report.skip(path, lineno, what),
        }
    }
    Ok((users, report))
}

/// Load tweets and users together into a [`Corpus`].
pub fn load_corpus(
    tweets_path: &Path,
    users_path: &Path,
) -> Result<(Corpus, FileReport), CorpusError> {
    let (tweets, mut report) = load_tweets(tweets_path)?;
    let (users, user_report) = load_users(users_path)?;
    report.skipped += user_report.skipped;
    report.warnings.extend(user_report.warnings);
    let corpus = Corpus::new(tweets, users)?;
    Ok((corpus, report))
}

/// Load TREC-style qrels. Any label outside {-1, 0, 1} is fatal,
/// as is a repeated (query, tweet) pair.
pub fn load_qrels(path: &Path) -> Result<GoldStandard, CorpusError> {
    let content = read_to_string(path)?;
    let mut labels: HashMap<(String, u64), i8> = HashMap::new();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(CorpusError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                what: format!("expected 4 columns, got {}", fields.len()),
            });
        }
        let query_id = fields[0].to_string();
        let tweet_id: u64 = fields[2].parse().map_err(|e| CorpusError::Malformed {
            path: path.display().to_string(),
            line: lineno,
            what: format!("tweet id: {e}"),
        })?;
        let label: i64 = fields[3].parse().map_err(|_| CorpusError::BadLabel {
            path: path.display().to_string(),
            line: lineno,
            value: fields[3].to_string(),
        })?;
        if !(-1..=1).contains(&label) {
            return Err(CorpusError::BadLabel {
                path: path.display().to_string(),
                line: lineno,
                value: fields[3].to_string(),
            });
        }
        match labels.entry((query_id.clone(), tweet_id)) {
            Entry::Occupied(_) => {
                return Err(CorpusError::DuplicateJudgment {
                    path: path.display().to_string(),
                    line: lineno,
                    query: query_id,
                    tweet: tweet_id,
                })
            }
            Entry::Vacant(v) => {
                v.insert(label as i8);
            }
        }
    }
    Ok(GoldStandard { labels })
}

/// Load the URL PageRank table. Scores outside [0, 10] and malformed
/// lines are skipped with a warning.
pub fn load_pagerank(path: &Path) -> Result<(PageRankTable, FileReport), CorpusError> {
    let content = read_to_string(path)?;
    let mut report = FileReport::default();
    let mut scores = HashMap::new();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let Some((url, score)) = line.split_once('\t') else {
            report.skip(path, lineno, "expected url<TAB>score");
            continue;
        };
        let score: f64 = match score.trim().parse() {
            Ok(s) => s,
            Err(e) => {
                report.skip(path, lineno, format!("score: {e}"));
                continue;
            }
        };
        if !(0.0..=10.0).contains(&score) {
            report.skip(path, lineno, format!("score {score} outside [0,10]"));
            continue;
        }
        scores.insert(normalize_url(url), score);
    }
    let mut table = PageRankTable {
        scores,
        population_mean: 0.0,
    };
    table.recompute_mean();
    Ok((table, report))
}

/// Load the queries file: `query_id<TAB>text<TAB>query_time_ms` per line.
pub fn load_queries(path: &Path) -> Result<Vec<QuerySpec>, CorpusError> {
    let content = read_to_string(path)?;
    let mut queries = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(CorpusError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                what: format!("expected 3 tab-separated columns, got {}", fields.len()),
            });
        }
        let text = fields[1].trim().to_string();
        if text.is_empty() {
            return Err(CorpusError::Malformed {
                path: path.display().to_string(),
                line: lineno,
                what: "empty query text".into(),
            });
        }
        queries.push(QuerySpec {
            query_id: fields[0].to_string(),
            text,
            query_time_ms: fields[2]
                .trim()
                .parse()
                .map_err(|e| CorpusError::Malformed {
                    path: path.display().to_string(),
                    line: lineno,
                    what: format!("query_time_ms: {e}"),
                })?,
        });
    }
    Ok(queries)
}

fn create(path: &Path) -> Result<fs::File, CorpusError> {
    fs::File::create(path).map_err(|source| CorpusError::WriteIo {
        path: path.display().to_string(),
        source,
    })
}

fn wio(path: &Path, r: std::io::Result<()>) -> Result<(), CorpusError> {
    r.map_err(|source| CorpusError::WriteIo {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_tweets(path: &Path, tweets: &[TweetRecord]) -> Result<(), CorpusError> {
    let mut f = create(path)?;
    for t in tweets {
        let urls = if t.urls.is_empty() {
            String::new()
        } else {
            format!("urls={} ", t.urls.join(","))
        };
        wio(
            path,
            writeln!(
                f,
                "id={} user_id={} ts_ms={} is_rt={} is_reply={} fav={} rt_count={} {}text={}",
                t.tweet_id,
                t.user_id,
                t.timestamp_ms,
                t.is_retweet as u8,
                t.is_reply as u8,
                t.favorite_count,
                t.retweet_count,
                urls,
                t.text.replace('\n', " "),
            ),
        )?;
    }
    Ok(())
}

pub fn write_users(path: &Path, users: &[UserProfile]) -> Result<(), CorpusError> {
    let mut f = create(path)?;
    for u in users {
        let mut line = format!("id={}", u.user_id);
        if let Some(v) = u.follower_count {
            line.push_str(&format!(" followers={v}"));
        }
        if let Some(v) = u.friends_count {
            line.push_str(&format!(" friends={v}"));
        }
        if let Some(v) = u.verified {
            line.push_str(&format!(" verified={}", v as u8));
        }
        if let Some(v) = u.created_at_ms {
            line.push_str(&format!(" created_ms={v}"));
        }
        if let Some(v) = u.statuses_count {
            line.push_str(&format!(" statuses={v}"));
        }
        wio(path, writeln!(f, "{line}"))?;
    }
    Ok(())
}

pub fn write_pagerank(path: &Path, table: &PageRankTable) -> Result<(), CorpusError> {
    let mut f = create(path)?;
    for (url, score) in table.sorted_entries() {
        wio(path, writeln!(f, "{url}\t{score}"))?;
    }
    Ok(())
}

pub fn write_qrels(path: &Path, gold: &GoldStandard) -> Result<(), CorpusError> {
    let mut f = create(path)?;
    for (query, tweet, label) in gold.sorted_pairs() {
        wio(path, writeln!(f, "{query} 0 {tweet} {label}"))?;
    }
    Ok(())
}

pub fn write_queries(path: &Path, queries: &[QuerySpec]) -> Result<(), CorpusError> {
    let mut f = create(path)?;
    for q in queries {
        wio(
            path,
            writeln!(f, "{}\t{}\t{}", q.query_id, q.text, q.query_time_ms),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tmpfile(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn empty_tweets_file_loads_empty() {
        let f = tmpfile("");
        let (tweets, report) = load_tweets(f.path()).unwrap();
        assert!(tweets.is_empty());
        assert_eq!(report.skipped, 0);
    }

    #[test]
    fn malformed_tweet_line_is_skipped_and_counted() {
        let f = tmpfile(
            "id=1 user_id=10 ts_ms=1000 is_rt=0 is_reply=0 fav=0 rt_count=0 text=alpha beta\n\
             id=2 user_id=10 ts_ms=1001 is_rt=0 is_reply=0 fav=0 rt_count=0 text=gamma\n\
             id=3 user_id=11 ts_ms=1002 is_rt=0\n\
             id=4 user_id=11 ts_ms=1003 is_rt=1 is_reply=0 fav=2 rt_count=5 urls=http://a.com text=delta\n",
        );
        let (tweets, report) = load_tweets(f.path()).unwrap();
        assert_eq!(tweets.len(), 3);
        assert_eq!(report.skipped, 1);
        assert_eq!(tweets[2].urls, vec!["http://a.com".to_string()]);
        assert!(tweets[2].is_retweet);
    }

    #[test]
    fn duplicate_tweet_id_is_fatal() {
        let f = tmpfile(
            "id=42 user_id=1 ts_ms=1 is_rt=0 is_reply=0 fav=0 rt_count=0 text=a b c\n\
             id=42 user_id=2 ts_ms=2 is_rt=0 is_reply=0 fav=0 rt_count=0 text=d e f\n",
        );
        let err = load_tweets(f.path()).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateTweetId(42)));
    }

    #[test]
    fn qrels_single_lines() {
        let f = tmpfile("MB01 0 99 1\n");
        let gold = load_qrels(f.path()).unwrap();
        assert_eq!(gold.label("MB01", 99), Some(1));

        let f = tmpfile("MB01 0 99 -1\n");
        let gold = load_qrels(f.path()).unwrap();
        assert_eq!(gold.label("MB01", 99), Some(-1));
    }

    #[test]
    fn qrels_counts_two_queries_three_tweets_each() {
        let f = tmpfile(
            "MB01 0 1 1\nMB01 0 2 0\nMB01 0 3 -1\n\
             MB02 0 1 0\nMB02 0 2 1\nMB02 0 3 1\n",
        );
        let gold = load_qrels(f.path()).unwrap();
        assert_eq!(gold.len(), 6);
        assert_eq!(gold.relevant_count("MB02"), 2);
    }

    #[test]
    fn qrels_label_out_of_range_is_fatal_with_line() {
        let f = tmpfile("MB01 0 1 1\nMB01 0 2 2\n");
        match load_qrels(f.path()).unwrap_err() {
            CorpusError::BadLabel { line, value, .. } => {
                assert_eq!(line, 2);
                assert_eq!(value, "2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pagerank_mean_and_normalization() {
        let f = tmpfile("http://a.com\t7.0\nhttp://b.com\t3.0\n");
        let (table, report) = load_pagerank(f.path()).unwrap();
        assert_eq!(report.skipped, 0);
        assert!((table.population_mean() - 5.0).abs() < 1e-12);

        // case-insensitive host, trailing slash stripped
        let f = tmpfile("http://A.com/\t7.0\n");
        let (table, _) = load_pagerank(f.path()).unwrap();
        assert_eq!(table.get("http://a.com"), Some(7.0));
    }

    #[test]
    fn pagerank_empty_file_has_mean_zero() {
        let f = tmpfile("");
        let (table, _) = load_pagerank(f.path()).unwrap();
        assert!(table.is_empty());
        assert_eq!(table.population_mean(), 0.0);
    }

    #[test]
    fn pagerank_out_of_range_scores_are_skipped() {
        let f = tmpfile("http://a.com\t12.0\nhttp://b.com\t4.0\n");
        let (table, report) = load_pagerank(f.path()).unwrap();
        assert_eq!(report.skipped, 1);
        assert_eq!(table.len(), 1);
        assert!((table.population_mean() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn queries_parse_and_reject_empty_text() {
        let f = tmpfile("MB01\twhite house spokesman replaced\t1297000000000\n");
        let queries = load_queries(f.path()).unwrap();
        assert_eq!(queries.len(), 1);
        assert_eq!(queries[0].query_id, "MB01");

        let f = tmpfile("MB01\t  \t1297000000000\n");
        assert!(load_queries(f.path()).is_err());
    }

    #[test]
    fn corpus_round_trip() {
        let tweets = vec![
            TweetRecord {
                tweet_id: 1,
                user_id: 10,
                timestamp_ms: 1000,
                text: "storm warning on the coast".into(),
                is_retweet: false,
                is_reply: true,
                favorite_count: 3,
                retweet_count: 1,
                urls: vec!["http://news.example.com/a".into()],
            },
            TweetRecord {
                tweet_id: 2,
                user_id: 11,
                timestamp_ms: 2000,
                text: "all clear".into(),
                is_retweet: true,
                is_reply: false,
                favorite_count: 0,
                retweet_count: 0,
                urls: vec![],
            },
        ];
        let users = vec![
            UserProfile {
                user_id: 10,
                follower_count: Some(1200),
                friends_count: None,
                verified: Some(true),
                created_at_ms: Some(500),
                statuses_count: Some(40),
            },
            UserProfile {
                user_id: 11,
                ..Default::default()
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let tpath = dir.path().join("tweets.txt");
        let upath = dir.path().join("users.txt");
        write_tweets(&tpath, &tweets).unwrap();
        write_users(&upath, &users).unwrap();
        let (corpus, report) = load_corpus(&tpath, &upath).unwrap();
        assert_eq!(report.skipped, 0);
        assert_eq!(corpus.tweets, tweets);
        assert_eq!(corpus.users, users);
        assert_eq!(corpus.user(11), Some(&users[1]));
        assert_eq!(corpus.user(99), None);
    }

    #[test]
    fn long_tweet_warns_but_loads() {
        let long = "x".repeat(200);
        let f = tmpfile(&format!(
            "id=1 user_id=1 ts_ms=1 is_rt=0 is_reply=0 fav=0 rt_count=0 text={long}\n"
        ));
        let (tweets, report) = load_tweets(f.path()).unwrap();
        assert_eq!(tweets.len(), 1);
        assert_eq!(report.skipped, 0);
        assert_eq!(report.warnings.len(), 1);
    }
}
