//! Deterministic synthetic corpora with controlled agreement topology:
//! a spam cluster bridged to a trustworthy cluster by a quoting tweet,
//! a hijacked high-profile account whose hoax agrees with nothing, and
//! a breaking-news cluster competing with off-topic cliques.
//!
//! Vocabulary pools are disjoint across clusters except for deliberate
//! bridges and the query terms, so the graph structure is controlled;
//! all randomness comes from the ScenarioSpec seed and regeneration is
//! byte-identical.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{
    self, CorpusError, GoldStandard, PageRankTable, QuerySpec, TweetRecord, UserProfile,
};

const BASE_TS: i64 = 1_296_000_000_000;
const TS_STEP: i64 = 60_000;

const TRUSTED_URL: &str = "http://civicalerts.example.org/storm";
const SPAM_URL: &str = "http://grandprizes.example.biz/claim";
const CLUSTER_URL: &str = "http://rivernews.example.org/levels";
const CHAFF_URL: &str = "http://linkfarm.example.biz/feed";
const HOAX_URL: &str = "http://wirenews.example.com/flash";
const ONTOPIC_URL: &str = "http://quakecenter.example.org/report";

const TRUSTED_GLUE: [&str; 7] = [
    "evacuation",
    "coastline",
    "shelter",
    "landfall",
    "governor",
    "rescue",
    "seawall",
];
const SPAM_GLUE: [&str; 6] = ["jackpot", "casino", "lottery", "discount", "bonus", "prize"];
const CLUSTER_GLUE: [&str; 7] = [
    "confirms",
    "denies",
    "announces",
    "reaches",
    "explains",
    "carries",
    "receives",
];
const HOAX_WORDS: [&str; 8] = [
    "volcano", "asteroid", "meteor", "crater", "eruption", "lava", "magma", "tsunami",
];
const ONTOPIC_GLUE: [&str; 7] = [
    "epicenter",
    "aftershock",
    "magnitude",
    "seismograph",
    "tremor",
    "faultline",
    "richter",
];
/// Unique per-tweet filler drawn from lexicon adverbs: fillers vary the
/// texts without ever becoming noun expansion candidates or agreement
/// edges (each is used once per corpus).
const FILLER_POOL: [&str; 44] = [
    "really",
    "always",
    "often",
    "soon",
    "already",
    "almost",
    "perhaps",
    "maybe",
    "together",
    "later",
    "early",
    "today",
    "tomorrow",
    "yesterday",
    "away",
    "everywhere",
    "somewhere",
    "anywhere",
    "nowhere",
    "instead",
    "otherwise",
    "however",
    "therefore",
    "meanwhile",
    "certainly",
    "probably",
    "possibly",
    "quickly",
    "slowly",
    "carefully",
    "finally",
    "recently",
    "currently",
    "usually",
    "actually",
    "simply",
    "nearly",
    "exactly",
    "directly",
    "suddenly",
    "eventually",
    "definitely",
    "truly",
    "still",
];

const OFFTOPIC_GLUE: [[&str; 4]; 3] = [
    ["striker", "midfield", "goalkeeper", "penalty"],
    ["sequel", "trailer", "boxoffice", "premiere"],
    ["gadget", "firmware", "chipset", "handset"],
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("bad scenario sizes for {kind}: {what}")]
    BadSizes { kind: ScenarioKind, what: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad manifest: {0}")]
    Manifest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    SpamBridge,
    Hijacked,
    BreakingNews,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SpamBridge => "spam-bridge",
            ScenarioKind::Hijacked => "hijacked",
            ScenarioKind::BreakingNews => "breaking-news",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spam-bridge" => Ok(ScenarioKind::SpamBridge),
            "hijacked" => Ok(ScenarioKind::Hijacked),
            "breaking-news" => Ok(ScenarioKind::BreakingNews),
            other => Err(format!(
                "unknown scenario {other:?} (expected spam-bridge, hijacked or breaking-news)"
            )),
        }
    }
}

/// What to generate. `sizes` is kind-specific:
/// spam-bridge `[trusted, spam, bridges]`, hijacked
/// `[hoaxes, cluster, chaff]`, breaking-news
/// `[on_topic, decoys, clique...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub sizes: Vec<usize>,
}

impl ScenarioSpec {
    pub fn spam_bridge(seed: u64) -> Self {
        Self {
            kind: ScenarioKind::SpamBridge,
            seed,
            sizes: vec![8, 12, 1],
        }
    }

    pub fn hijacked(seed: u64) -> Self {
        Self {
            kind: ScenarioKind::Hijacked,
            seed,
            sizes: vec![1, 8, 6],
        }
    }

    pub fn breaking_news(seed: u64) -> Self {
        Self {
            kind: ScenarioKind::BreakingNews,
            seed,
            sizes: vec![12, 3, 4, 4, 4],
        }
    }

    pub fn default_for(kind: ScenarioKind, seed: u64) -> Self {
        match kind {
            ScenarioKind::SpamBridge => Self::spam_bridge(seed),
            ScenarioKind::Hijacked => Self::hijacked(seed),
            ScenarioKind::BreakingNews => Self::breaking_news(seed),
        }
    }
}

/// Tweet-id groups and training holdouts of a generated corpus; written
/// next to the data files so tests can assert the intended topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub query_id: String,
    pub groups: Vec<(String, Vec<u64>)>,
    /// Tweets excluded from forest training (their gold labels describe
    /// unseen adversaries, not training signal).
    pub holdout: Vec<u64>,
}

impl Manifest {
    pub fn group(&self, name: &str) -> &[u64] {
        self.groups
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, ids)| ids.as_slice())
            .unwrap_or(&[])
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("kind={}\n", self.kind));
        out.push_str(&format!("seed={}\n", self.seed));
        out.push_str(&format!("query={}\n", self.query_id));
        for (name, ids) in &self.groups {
            let ids: Vec<String> = ids.iter().map(u64::to_string).collect();
            out.push_str(&format!("group {name}={}\n", ids.join(",")));
        }
        let holdout: Vec<String> = self.holdout.iter().map(u64::to_string).collect();
        out.push_str(&format!("holdout={}\n", holdout.join(",")));
        out
    }

    pub fn parse(content: &str) -> Result<Self, ScenarioError> {
        let bad = |what: &str| ScenarioError::Manifest(what.to_string());
        let mut kind = None;
        let mut seed = None;
        let mut query_id = None;
        let mut groups = Vec::new();
        let mut holdout = Vec::new();
        let parse_ids = |value: &str| -> Result<Vec<u64>, ScenarioError> {
            value
                .split(',')
                .filter(|v| !v.is_empty())
                .map(|v| v.parse::<u64>().map_err(|e| bad(&format!("id: {e}"))))
                .collect()
        };
        for line in content.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("group ") {
                let (name, ids) = rest.split_once('=').ok_or_else(|| bad("group line"))?;
                groups.push((name.to_string(), parse_ids(ids)?));
            } else if let Some((key, value)) = line.split_once('=') {
                match key {
                    "kind" => kind = Some(value.parse::<ScenarioKind>().map_err(|e| bad(&e))?),
                    "seed" => seed = Some(value.parse().map_err(|_| bad("seed"))?),
                    "query" => query_id = Some(value.to_string()),
                    "holdout" => holdout = parse_ids(value)?,
                    other => return Err(bad(&format!("unknown key {other:?}"))),
                }
            } else {
                return Err(bad(&format!("unparseable line {line:?}")));
            }
        }
        Ok(Self {
            kind: kind.ok_or_else(|| bad("missing kind"))?,
            seed: seed.ok_or_else(|| bad("missing seed"))?,
            query_id: query_id.ok_or_else(|| bad("missing query"))?,
            groups,
            holdout,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let content = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&content)
    }
}

/// A generated corpus plus its query, judgments and manifest.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub tweets: Vec<TweetRecord>,
    pub users: Vec<UserProfile>,
    pub pagerank: PageRankTable,
    pub query: QuerySpec,
    pub gold: GoldStandard,
    pub manifest: Manifest,
}

impl Scenario {
    /// Judged (query, tweet, label) pairs minus the manifest holdouts;
    /// the training set for tiny scenario corpora, replacing the 5%
    /// random split that would starve a 20-tweet gold standard.
    pub fn training_pairs(&self) -> Vec<(String, u64, i8)> {
        let holdout: HashSet<u64> = self.manifest.holdout.iter().copied().collect();
        self.gold
            .sorted_pairs()
            .into_iter()
            .filter(|(_, id, _)| !holdout.contains(id))
            .collect()
    }

    /// Write the corpus files cmd-style: tweets.txt, users.txt,
    /// pagerank.tsv, queries.tsv, qrels.txt and manifest.txt.
    pub fn write_to(&self, dir: &Path) -> Result<ScenarioFiles, ScenarioError> {
        std::fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let files = ScenarioFiles::under(dir);
        corpus::write_tweets(&files.tweets, &self.tweets)?;
        corpus::write_users(&files.users, &self.users)?;
        corpus::write_pagerank(&files.pagerank, &self.pagerank)?;
        corpus::write_queries(&files.queries, std::slice::from_ref(&self.query))?;
        corpus::write_qrels(&files.qrels, &self.gold)?;
        std::fs::write(&files.manifest, self.manifest.to_text()).map_err(|source| {
            ScenarioError::Io {
                path: files.manifest.display().to_string(),
                source,
            }
        })?;
        Ok(files)
    }
}

/// Canonical file layout of a written scenario.
#[derive(Debug, Clone)]
pub struct ScenarioFiles {
    pub tweets: PathBuf,
    pub users: PathBuf,
    pub pagerank: PathBuf,
    pub queries: PathBuf,
    pub qrels: PathBuf,
    pub manifest: PathBuf,
}

impl ScenarioFiles {
    pub fn under(dir: &Path) -> Self {
        Self {
            tweets: dir.join("tweets.txt"),
            users: dir.join("users.txt"),
            pagerank: dir.join("pagerank.tsv"),
            queries: dir.join("queries.tsv"),
            qrels: dir.join("qrels.txt"),
            manifest: dir.join("manifest.txt"),
        }
    }
}

pub fn generate(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    match spec.kind {
        ScenarioKind::SpamBridge => gen_spam_bridge(spec),
        ScenarioKind::Hijacked => gen_hijacked(spec),
        ScenarioKind::BreakingNews => gen_breaking_news(spec),
    }
}

struct Builder {
    rng: ChaCha8Rng,
    tweets: Vec<TweetRecord>,
    users: Vec<UserProfile>,
    gold: Vec<((String, u64), i8)>,
    query_id: String,
    next_ts: i64,
    filler: usize,
}

/// Profile fields of a generated account.
struct ProfileSpec {
    followers: u64,
    friends: u64,
    verified: bool,
    age_days: i64,
    statuses: u64,
}

impl Builder {
    fn new(seed: u64, query_id: &str) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            tweets: Vec::new(),
            users: Vec::new(),
            gold: Vec::new(),
            query_id: query_id.to_string(),
            next_ts: BASE_TS,
            filler: 0,
        }
    }

    fn filler_word(&mut self) -> String {
        let i = self.filler;
        self.filler += 1;
        match FILLER_POOL.get(i) {
            Some(word) => word.to_string(),
            // Oversized custom specs fall back to synthetic words; these
            // tag as common nouns, unlike the pool's adverbs.
            None => {
                let i = i - FILLER_POOL.len();
                format!(
                    "extr{}{}",
                    (b'a' + (i / 26) as u8 % 26) as char,
                    (b'a' + (i % 26) as u8) as char
                )
            }
        }
    }

    /// A few glue words in seeded order so texts differ tweet to tweet.
    fn shuffled<'w>(&mut self, words: &[&'w str]) -> Vec<&'w str> {
        let mut out: Vec<&str> = words.to_vec();
        for i in (1..out.len()).rev() {
            let j = self.rng.random_range(0..=i);
            out.swap(i, j);
        }
        out
    }

    fn tweet(
        &mut self,
        id: u64,
        text: String,
        urls: Vec<String>,
        label: i8,
        favorites: u64,
        retweets: u64,
    ) -> u64 {
        let ts = self.next_ts;
        self.next_ts += TS_STEP;
        self.tweets.push(TweetRecord {
            tweet_id: id,
            user_id: id + 5000,
            timestamp_ms: ts,
            text,
            is_retweet: false,
            is_reply: false,
            favorite_count: favorites,
            retweet_count: retweets,
            urls,
        });
        self.gold.push(((self.query_id.clone(), id), label));
        id
    }

    fn profile(&mut self, tweet_id: u64, spec: ProfileSpec) {
        self.users.push(UserProfile {
            user_id: tweet_id + 5000,
            follower_count: Some(spec.followers),
            friends_count: Some(spec.friends),
            verified: Some(spec.verified),
            created_at_ms: Some(BASE_TS - spec.age_days * 86_400_000),
            statuses_count: Some(spec.statuses),
        });
    }

    fn finish(
        self,
        kind: ScenarioKind,
        seed: u64,
        query: QuerySpec,
        pagerank: PageRankTable,
        groups: Vec<(String, Vec<u64>)>,
        holdout: Vec<u64>,
    ) -> Scenario {
        Scenario {
            tweets: self.tweets,
            users: self.users,
            pagerank,
            gold: GoldStandard::from_entries(self.gold),
            query,
            manifest: Manifest {
                kind,
                seed,
                query_id: self.query_id,
                groups,
                holdout,
            },
        }
    }
}

fn expect_sizes(spec: &ScenarioSpec, at_least: usize) -> Result<(), ScenarioError> {
    if spec.sizes.len() < at_least || spec.sizes.contains(&0) {
        return Err(ScenarioError::BadSizes {
            kind: spec.kind,
            what: format!(
                "need at least {at_least} positive sizes, got {:?}",
                spec.sizes
            ),
        });
    }
    Ok(())
}

/// Two mutually-agreeing clusters, trustworthy and spam, joined only by
/// a bridge tweet that quotes trusted content while carrying the spam
/// URL. Trusted tweets share a rich story vocabulary; spam tweets share
/// an identical payload and URL.
pub fn gen_spam_bridge(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    expect_sizes(spec, 3)?;
    let (n_trusted, n_spam, n_bridge) = (spec.sizes[0], spec.sizes[1], spec.sizes[2]);
    let mut b = Builder::new(spec.seed, "SB1");

    // The bridge quotes the lexicographically last glue word: quoting
    // raises that word's set-wide TF and lowers its expansion rank, so
    // the quoted link survives query expansion.
    let quoted = *TRUSTED_GLUE.iter().max().unwrap();

    let mut trusted = Vec::new();
    for i in 0..n_trusted {
        let glue = b.shuffled(&TRUSTED_GLUE).join(" ");
        let filler = b.filler_word();
        let followers = 80_000 + b.rng.random_range(0..40_000);
        let favorites = followers / 40 + b.rng.random_range(0..50);
        let retweets = followers / 80 + b.rng.random_range(0..25);
        let id = b.tweet(
            101 + i as u64,
            format!("storm warning {glue} {filler}"),
            vec![TRUSTED_URL.to_string()],
            1,
            favorites,
            retweets,
        );
        let friends = 300 + b.rng.random_range(0..1500);
        let age_days = 800 + b.rng.random_range(0..1200);
        let statuses = 10_000 + b.rng.random_range(0..20_000);
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends,
                verified: true,
                age_days,
                statuses,
            },
        );
        trusted.push(id);
    }

    let mut spam = Vec::new();
    for i in 0..n_spam {
        let glue = b.shuffled(&SPAM_GLUE).join(" ");
        let followers = 10 + b.rng.random_range(0..80);
        let favorites = b.rng.random_range(0..3);
        let retweets = b.rng.random_range(0..2);
        let id = b.tweet(
            201 + i as u64,
            format!("storm {glue} {SPAM_URL}"),
            vec![SPAM_URL.to_string()],
            -1,
            favorites,
            retweets,
        );
        // One spam account has no crawled profile; imputation covers it.
        if i != 1 {
            let friends = 5 + b.rng.random_range(0..60);
            let age_days = 5 + b.rng.random_range(0..90);
            let statuses = 3 + b.rng.random_range(0..60);
            b.profile(
                id,
                ProfileSpec {
                    followers,
                    friends,
                    verified: false,
                    age_days,
                    statuses,
                },
            );
        }
        spam.push(id);
    }

    let mut bridges = Vec::new();
    for i in 0..n_bridge {
        let followers = 2 + b.rng.random_range(0..10);
        let favorites = b.rng.random_range(0..2);
        let id = b.tweet(
            301 + i as u64,
            format!(
                "storm {quoted} {} {} {SPAM_URL}",
                SPAM_GLUE[0], SPAM_GLUE[1]
            ),
            vec![SPAM_URL.to_string()],
            -1,
            favorites,
            0,
        );
        let friends = 5 + b.rng.random_range(0..40);
        let age_days = 3 + b.rng.random_range(0..30);
        let statuses = 1 + b.rng.random_range(0..15);
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends,
                verified: false,
                age_days,
                statuses,
            },
        );
        bridges.push(id);
    }

    let query = QuerySpec {
        query_id: "SB1".into(),
        text: "storm warning".into(),
        query_time_ms: BASE_TS + 10_000_000,
    };
    let pagerank =
        PageRankTable::from_entries([(TRUSTED_URL.to_string(), 8.5), (SPAM_URL.to_string(), 0.3)]);
    let holdout = bridges.clone();
    Ok(b.finish(
        ScenarioKind::SpamBridge,
        spec.seed,
        query,
        pagerank,
        vec![
            ("trusted".into(), trusted),
            ("spam".into(), spam),
            ("bridge".into(), bridges),
        ],
        holdout,
    ))
}

/// One hijacked high-profile account tweeting a hoax that agrees with
/// nothing, against a corroborated cluster of moderate accounts and
/// low-feature chaff that trains the forest's low end. The cluster's
/// shared vocabulary is verbs, which noun-only query expansion never
/// consumes, so the cluster keeps its full agreement glue and the
/// held-out hoax sits above the cluster on every feature the forest
/// can split on.
pub fn gen_hijacked(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    expect_sizes(spec, 3)?;
    let (n_hoax, n_cluster, n_chaff) = (spec.sizes[0], spec.sizes[1], spec.sizes[2]);
    let mut b = Builder::new(spec.seed, "HJ1");

    let mut cluster = Vec::new();
    for i in 0..n_cluster {
        let glue = b.shuffled(&CLUSTER_GLUE).join(" ");
        let filler = b.filler_word();
        let followers = 20_000 + b.rng.random_range(0..40_000);
        let favorites = 300 + b.rng.random_range(0..900);
        let retweets = 100 + b.rng.random_range(0..300);
        let id = b.tweet(
            201 + i as u64,
            format!("flood alert {glue} {filler}"),
            vec![CLUSTER_URL.to_string()],
            1,
            favorites,
            retweets,
        );
        let friends = 200 + b.rng.random_range(0..1800);
        let age_days = 500 + b.rng.random_range(0..1500);
        let statuses = 2_000 + b.rng.random_range(0..8_000);
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends,
                verified: i % 2 == 0,
                age_days,
                statuses,
            },
        );
        cluster.push(id);
    }

    let mut chaff = Vec::new();
    for i in 0..n_chaff {
        let words: Vec<String> = (0..4).map(|_| b.filler_word()).collect();
        let followers = 5 + b.rng.random_range(0..50);
        let favorites = b.rng.random_range(0..2);
        let id = b.tweet(
            301 + i as u64,
            format!("alert {}", words.join(" ")),
            vec![CHAFF_URL.to_string()],
            0,
            favorites,
            0,
        );
        // Every chaff account keeps its profile: an imputed profile
        // would average in the hoax's counts and land above the cluster,
        // handing the forest a high-feature irrelevant training row.
        let friends = 5 + b.rng.random_range(0..45);
        let age_days = 10 + b.rng.random_range(0..90);
        let statuses = 1 + b.rng.random_range(0..40);
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends,
                verified: false,
                age_days,
                statuses,
            },
        );
        chaff.push(id);
    }

    // The hoax tweets last, so it is the most recent tweet in the set.
    let mut hoaxes = Vec::new();
    for i in 0..n_hoax {
        let words = b.shuffled(&HOAX_WORDS).join(" ");
        let id = b.tweet(
            100 + i as u64,
            format!("flood alert {words}"),
            vec![HOAX_URL.to_string()],
            -1,
            120_000,
            60_000,
        );
        b.profile(
            id,
            ProfileSpec {
                followers: 5_000_000,
                friends: 50_000,
                verified: true,
                age_days: 3_000,
                statuses: 200_000,
            },
        );
        hoaxes.push(id);
    }

    let query = QuerySpec {
        query_id: "HJ1".into(),
        text: "flood alert".into(),
        query_time_ms: BASE_TS + 10_000_000,
    };
    let pagerank = PageRankTable::from_entries([
        (CLUSTER_URL.to_string(), 7.0),
        (HOAX_URL.to_string(), 9.0),
        (CHAFF_URL.to_string(), 0.5),
    ]);
    let holdout = hoaxes.clone();
    Ok(b.finish(
        ScenarioKind::Hijacked,
        spec.seed,
        query,
        pagerank,
        vec![
            ("hoax".into(), hoaxes),
            ("cluster".into(), cluster),
            ("chaff".into(), chaff),
        ],
        holdout,
    ))
}

/// One large on-topic cluster, several small off-topic cliques that
/// match the query terms only, and a few held-out high-feature decoys
/// tweeting about something else entirely.
pub fn gen_breaking_news(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    expect_sizes(spec, 3)?;
    let n_on = spec.sizes[0];
    let n_decoys = spec.sizes[1];
    let clique_sizes: Vec<usize> = spec.sizes[2..].to_vec();
    let mut b = Builder::new(spec.seed, "BN1");

    let mut on_topic = Vec::new();
    for i in 0..n_on {
        let glue = b.shuffled(&ONTOPIC_GLUE).join(" ");
        let filler = b.filler_word();
        let followers = 8_000 + b.rng.random_range(0..30_000);
        let favorites = 100 + b.rng.random_range(0..500);
        let retweets = 50 + b.rng.random_range(0..200);
        let id = b.tweet(
            101 + i as u64,
            format!("quake damage {glue} {filler}"),
            vec![ONTOPIC_URL.to_string()],
            1,
            favorites,
            retweets,
        );
        let friends = 100 + b.rng.random_range(0..1500);
        let age_days = 400 + b.rng.random_range(0..1600);
        let statuses = 1_000 + b.rng.random_range(0..5_000);
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends,
                verified: false,
                age_days,
                statuses,
            },
        );
        on_topic.push(id);
    }

    let mut groups: Vec<(String, Vec<u64>)> = Vec::new();
    for (c, &size) in clique_sizes.iter().enumerate() {
        let glue_pool = OFFTOPIC_GLUE[c % OFFTOPIC_GLUE.len()];
        let mut members = Vec::new();
        for i in 0..size {
            let glue = b.shuffled(&glue_pool).join(" ");
            let followers = 10 + b.rng.random_range(0..90);
            let favorites = b.rng.random_range(0..3);
            let retweets = b.rng.random_range(0..2);
            let id = b.tweet(
                201 + (c as u64) * 100 + i as u64,
                format!("damage {glue}"),
                vec![],
                0,
                favorites,
                retweets,
            );
            let friends = 10 + b.rng.random_range(0..80);
            let age_days = 20 + b.rng.random_range(0..300);
            let statuses = 1 + b.rng.random_range(0..50);
            b.profile(
                id,
                ProfileSpec {
                    followers,
                    friends,
                    verified: false,
                    age_days,
                    statuses,
                },
            );
            members.push(id);
        }
        groups.push((format!("off_clique_{c}"), members));
    }

    // Decoys last: most recent, so FS tie-breaks favor them.
    let mut decoys = Vec::new();
    for i in 0..n_decoys {
        let words: Vec<String> = (0..5).map(|_| b.filler_word()).collect();
        let followers = 2_000_000 + b.rng.random_range(0..1_000_000);
        let favorites = 80_000 + b.rng.random_range(0..10_000);
        let retweets = 30_000 + b.rng.random_range(0..5_000);
        let id = b.tweet(
            901 + i as u64,
            format!("quake {}", words.join(" ")),
            vec![HOAX_URL.to_string()],
            0,
            favorites,
            retweets,
        );
        b.profile(
            id,
            ProfileSpec {
                followers,
                friends: 20_000,
                verified: true,
                age_days: 2_500,
                statuses: 100_000,
            },
        );
        decoys.push(id);
    }

    let query = QuerySpec {
        query_id: "BN1".into(),
        text: "quake damage".into(),
        query_time_ms: BASE_TS + 10_000_000,
    };
    let pagerank =
        PageRankTable::from_entries([(ONTOPIC_URL.to_string(), 6.5), (HOAX_URL.to_string(), 9.0)]);
    let holdout = decoys.clone();
    let mut all_groups = vec![("on_topic".to_string(), on_topic)];
    all_groups.extend(groups);
    all_groups.push(("decoys".to_string(), decoys));
    Ok(b.finish(
        ScenarioKind::BreakingNews,
        spec.seed,
        query,
        pagerank,
        all_groups,
        holdout,
    ))
}
