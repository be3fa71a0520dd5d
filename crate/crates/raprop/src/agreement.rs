//! Pairwise content agreement and the agreement graph.
//!
//! Agreement between two tweets is a POS-weighted TF-IDF similarity over
//! their residual content (query stems removed), normalized by the larger
//! of the two maximal residual term frequencies. The graph holds one node
//! per candidate tweet and one undirected edge per agreeing pair.

use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::io::Write as _;
use std::path::Path;

use crate::scalar::Real;
use crate::text::{PosClass, TokenizedTweet};

/// Default threshold below which edges are dropped from the graph.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Per-class agreement weights. Topic-bearing classes score high, filler
/// classes low.
#[derive(Debug, Clone)]
pub struct PosWeights<R> {
    weights: [R; PosClass::ALL.len()],
}

impl<R: Real> Default for PosWeights<R> {
    fn default() -> Self {
        let mut weights = [R::one(); PosClass::ALL.len()];
        for (i, class) in PosClass::ALL.iter().enumerate() {
            weights[i] = R::from_f64_lossy(match class {
                PosClass::Url => 8.0,
                PosClass::Hashtag => 6.0,
                PosClass::ProperNoun => 4.0,
                PosClass::CommonNoun | PosClass::Adjective | PosClass::Adverb => 3.0,
                PosClass::Numeral => 2.0,
                PosClass::Pronoun | PosClass::Verb => 1.0,
                PosClass::Interjection | PosClass::Preposition => 0.5,
                PosClass::Existential => 0.2,
                PosClass::Mention => 1.0,
                // Stripped before agreement; weighted like Other for totality.
                PosClass::Determiner
                | PosClass::Conjunction
                | PosClass::Punctuation
                | PosClass::Other => 1.0,
            });
        }
        Self { weights }
    }
}

impl<R: Real> PosWeights<R> {
    pub fn weight(&self, class: PosClass) -> R {
        let idx = PosClass::ALL
            .iter()
            .position(|c| *c == class)
            .expect("every class listed");
        self.weights[idx]
    }
}

/// Document frequencies over a candidate set's agreement tokens.
#[derive(Debug, Clone, Default)]
pub struct IdfStats {
    n_docs: usize,
    df: HashMap<String, usize>,
}

impl IdfStats {
    /// Count document frequencies over the agreement tokens of a set.
    pub fn compute(tweets: &[TokenizedTweet]) -> Self {
        let mut df: HashMap<String, usize> = HashMap::new();
        for tweet in tweets {
            let distinct: HashSet<&str> = tweet
                .agreement_tokens
                .iter()
                .map(|t| t.stem.as_str())
                .collect();
            for stem in distinct {
                *df.entry(stem.to_string()).or_insert(0) += 1;
            }
        }
        Self {
            n_docs: tweets.len(),
            df,
        }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn df(&self, stem: &str) -> usize {
        self.df.get(stem).copied().unwrap_or(1).max(1)
    }

    /// IDF(t) = ln(N / df(t)); unseen stems count as df = 1. Zero on an
    /// empty set.
    pub fn idf<R: Real>(&self, stem: &str) -> R {
        if self.n_docs == 0 {
            return R::zero();
        }
        let n = R::from_usize(self.n_docs).expect("set size fits scalar");
        let df = R::from_usize(self.df(stem)).expect("df fits scalar");
        (n / df).ln()
    }

    pub fn is_empty(&self) -> bool {
        self.df.is_empty()
    }
}

/// Residual term frequency and best (highest-weight) class per stem.
fn residual_profile<'a, R: Real>(
    tweet: &'a TokenizedTweet,
    query_stems: &HashSet<String>,
    weights: &PosWeights<R>,
) -> HashMap<&'a str, (usize, PosClass)> {
    let mut profile: HashMap<&str, (usize, PosClass)> = HashMap::new();
    for token in &tweet.agreement_tokens {
        if query_stems.contains(&token.stem) {
            continue;
        }
        let entry = profile.entry(token.stem.as_str()).or_insert((0, token.pos));
        entry.0 += 1;
        if weights.weight(token.pos) > weights.weight(entry.1) {
            entry.1 = token.pos;
        }
    }
    profile
}

/// POS-weighted agreement of a tweet pair over residual content:
/// sum over shared stems of TF1 * TF2 * IDF^2 * P(class), divided by the
/// highest residual TF across the pair. Symmetric and non-negative.
pub fn agreement<R: Real>(
    a: &TokenizedTweet,
    b: &TokenizedTweet,
    query_stems: &HashSet<String>,
    idf: &IdfStats,
    weights: &PosWeights<R>,
) -> R {
    let prof_a = residual_profile(a, query_stems, weights);
    let prof_b = residual_profile(b, query_stems, weights);
    if prof_a.is_empty() || prof_b.is_empty() {
        return R::zero();
    }

    let mut shared: Vec<&str> = prof_a
        .keys()
        .filter(|stem| prof_b.contains_key(**stem))
        .copied()
        .collect();
    if shared.is_empty() {
        return R::zero();
    }
    // Summation in sorted stem order keeps results bit-stable run to run.
    shared.sort_unstable();

    let mut raw = R::zero();
    for stem in shared {
        let (tf_a, class_a) = prof_a[stem];
        let (tf_b, class_b) = prof_b[stem];
        let class = if weights.weight(class_a) >= weights.weight(class_b) {
            class_a
        } else {
            class_b
        };
        let idf_val: R = idf.idf(stem);
        let tf = R::from_usize(tf_a).unwrap() * R::from_usize(tf_b).unwrap();
        raw = raw + tf * idf_val * idf_val * weights.weight(class);
    }
    if raw == R::zero() {
        return R::zero();
    }

    let max_tf = |prof: &HashMap<&str, (usize, PosClass)>| {
        prof.values().map(|(tf, _)| *tf).max().unwrap_or(0)
    };
    let denom = max_tf(&prof_a).max(max_tf(&prof_b));
    raw / R::from_usize(denom).unwrap()
}

/// Undirected weighted graph over a candidate set's tweets.
#[derive(Debug, Clone)]
pub struct AgreementGraph<R> {
    node_ids: Vec<u64>,
    index: HashMap<u64, usize>,
    adjacency: Vec<Vec<(usize, R)>>,
}

impl<R: Real> AgreementGraph<R> {
    /// Score all stem-sharing pairs (found through an inverted index, so
    /// stem-disjoint pairs are never evaluated) and keep edges with
    /// agreement >= epsilon.
    pub fn build(
        tweets: &[TokenizedTweet],
        query_stems: &HashSet<String>,
        idf: &IdfStats,
        weights: &PosWeights<R>,
        epsilon: R,
    ) -> Self {
        let node_ids: Vec<u64> = tweets.iter().map(|t| t.tweet_id).collect();
        let index: HashMap<u64, usize> = node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();

        // Inverted index over residual stems.
        let mut postings: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, tweet) in tweets.iter().enumerate() {
            let mut distinct: Vec<&str> = tweet
                .agreement_tokens
                .iter()
                .filter(|t| !query_stems.contains(&t.stem))
                .map(|t| t.stem.as_str())
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            for stem in distinct {
                postings.entry(stem).or_default().push(i);
            }
        }

        let mut pairs: HashSet<(usize, usize)> = HashSet::new();
        for bucket in postings.values() {
            for (k, &i) in bucket.iter().enumerate() {
                for &j in &bucket[k + 1..] {
                    pairs.insert((i.min(j), i.max(j)));
                }
            }
        }
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();

        // Pair scoring is pure; scored in parallel, assembled in the
        // sorted pair order so the graph is identical run to run.
        let scored: Vec<(usize, usize, R)> = pairs
            .into_par_iter()
            .map(|(i, j)| {
                (
                    i,
                    j,
                    agreement(&tweets[i], &tweets[j], query_stems, idf, weights),
                )
            })
            .collect();
        let mut adjacency: Vec<Vec<(usize, R)>> = vec![Vec::new(); tweets.len()];
        for (i, j, w) in scored {
            if w >= epsilon && w > R::zero() {
                adjacency[i].push((j, w));
                adjacency[j].push((i, w));
            }
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|(j, _)| *j);
        }

        Self {
            node_ids,
            index,
            adjacency,
        }
    }

    /// Assemble a graph from explicit undirected edges, e.g. a reloaded
    /// edge-list dump. Self-edges are rejected; weights below epsilon
    /// are dropped.
    pub fn from_edges(node_ids: Vec<u64>, edges: &[(u64, u64, R)], epsilon: R) -> Self {
        let index: HashMap<u64, usize> = node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();
        let mut adjacency: Vec<Vec<(usize, R)>> = vec![Vec::new(); node_ids.len()];
        for &(a, b, w) in edges {
            let (Some(i), Some(j)) = (index.get(&a).copied(), index.get(&b).copied()) else {
                continue;
            };
            if i == j || w < epsilon || w <= R::zero() {
                continue;
            }
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|(j, _)| *j);
        }
        Self {
            node_ids,
            index,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_ids(&self) -> &[u64] {
        &self.node_ids
    }

    pub fn index_of(&self, tweet_id: u64) -> Option<usize> {
        self.index.get(&tweet_id).copied()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, R)] {
        &self.adjacency[node]
    }

    pub fn edge_weight(&self, a: u64, b: u64) -> Option<R> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        self.adjacency[i]
            .iter()
            .find(|(n, _)| *n == j)
            .map(|(_, w)| *w)
    }

    /// Undirected edges as (id_a, id_b, weight) with id_a's index < id_b's.
    pub fn edges(&self) -> Vec<(u64, u64, R)> {
        let mut out = Vec::new();
        for (i, list) in self.adjacency.iter().enumerate() {
            for &(j, w) in list {
                if i < j {
                    out.push((self.node_ids[i], self.node_ids[j], w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Total incident agreement of a node; the AG baseline's score.
    pub fn incident_weight(&self, node: usize) -> R {
        self.adjacency[node].iter().map(|(_, w)| *w).sum()
    }

    /// Connected components as sorted lists of node indexes.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for &(j, _) in &self.adjacency[i] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Debug dump: `tweet_id_a tweet_id_b weight` per line.
    pub fn write_edge_list(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        for (a, b, w) in self.edges() {
            writeln!(f, "{a} {b} {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Token;

    fn tweet(id: u64, stems: &[(&str, PosClass)]) -> TokenizedTweet {
        let tokens: Vec<Token> = stems
            .iter()
            .enumerate()
            .map(|(i, (stem, pos))| Token {
                surface: stem.to_string(),
                stem: stem.to_string(),
                pos: *pos,
                position: i,
                is_stop: false,
                titlecase: false,
            })
            .collect();
        TokenizedTweet {
            tweet_id: id,
            agreement_tokens: tokens.clone(),
            tokens,
        }
    }

    fn no_query() -> HashSet<String> {
        HashSet::new()
    }

    #[test]
    fn idf_values() {
        // A stem present in every tweet has IDF ln(1) = 0.
        let tweets: Vec<_> = (0..4)
            .map(|i| tweet(i, &[("common", PosClass::CommonNoun)]))
            .collect();
        let idf = IdfStats::compute(&tweets);
        assert_eq!(idf.idf::<f64>("common"), 0.0);

        // |R| = 10, df = 2 -> ln 5.
        let mut tweets: Vec<_> = (0..10)
            .map(|i| tweet(i, &[("filler", PosClass::CommonNoun)]))
            .collect();
        tweets[0].agreement_tokens.push(Token {
            surface: "obama".into(),
            stem: "obama".into(),
            pos: PosClass::ProperNoun,
            position: 1,
            is_stop: false,
            titlecase: false,
        });
        let obama = tweets[0].agreement_tokens[1].clone();
        tweets[1].agreement_tokens.push(obama);
        let idf = IdfStats::compute(&tweets);
        assert!((idf.idf::<f64>("obama") - 5.0f64.ln()).abs() < 1e-12);
        assert!((idf.idf::<f64>("obama") - 1.6094).abs() < 1e-4);

        // Empty set.
        let idf = IdfStats::compute(&[]);
        assert!(idf.is_empty());
        assert_eq!(idf.idf::<f64>("anything"), 0.0);
    }

    #[test]
    fn spec_proper_noun_case() {
        // 10 tweets; the first two share only "obama" (ProperNoun, TF 1
        // in both, df 2); all residual TFs are 1.
        let mut tweets = vec![
            tweet(
                0,
                &[("obama", PosClass::ProperNoun), ("spoke", PosClass::Verb)],
            ),
            tweet(
                1,
                &[("obama", PosClass::ProperNoun), ("visit", PosClass::Verb)],
            ),
        ];
        for i in 2..10 {
            tweets.push(tweet(i, &[("filler", PosClass::CommonNoun)]));
        }
        let idf = IdfStats::compute(&tweets);
        let w = PosWeights::<f64>::default();
        let got = agreement(&tweets[0], &tweets[1], &no_query(), &idf, &w);
        let expected = 5.0f64.ln().powi(2) * 4.0;
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 10.361).abs() < 1e-3);
    }

    #[test]
    fn disjoint_or_query_only_overlap_is_zero() {
        let a = tweet(0, &[("alpha", PosClass::CommonNoun)]);
        let b = tweet(1, &[("beta", PosClass::CommonNoun)]);
        let idf = IdfStats::compute(&[a.clone(), b.clone()]);
        let w = PosWeights::<f64>::default();
        assert_eq!(agreement(&a, &b, &no_query(), &idf, &w), 0.0);

        // Sharing only query stems: residual removes them.
        let a = tweet(
            0,
            &[
                ("storm", PosClass::CommonNoun),
                ("alpha", PosClass::CommonNoun),
            ],
        );
        let b = tweet(
            1,
            &[
                ("storm", PosClass::CommonNoun),
                ("beta", PosClass::CommonNoun),
            ],
        );
        let idf = IdfStats::compute(&[a.clone(), b.clone()]);
        let query: HashSet<String> = ["storm".to_string()].into();
        assert_eq!(agreement(&a, &b, &query, &idf, &w), 0.0);
    }

    #[test]
    fn symmetry_exact() {
        let a = tweet(
            0,
            &[
                ("flood", PosClass::CommonNoun),
                ("coast", PosClass::CommonNoun),
                ("flood", PosClass::CommonNoun),
            ],
        );
        let b = tweet(
            1,
            &[
                ("flood", PosClass::Hashtag),
                ("coast", PosClass::CommonNoun),
            ],
        );
        let pad = tweet(2, &[("other", PosClass::CommonNoun)]);
        let idf = IdfStats::compute(&[a.clone(), b.clone(), pad]);
        let w = PosWeights::<f64>::default();
        let ab = agreement(&a, &b, &no_query(), &idf, &w);
        let ba = agreement(&b, &a, &no_query(), &idf, &w);
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
    }

    #[test]
    fn cross_tweet_pos_conflict_takes_higher_weight() {
        // "flood" is a Hashtag (6.0) in one tweet, CommonNoun (3.0) in the
        // other; the pair scores with 6.0.
        let a = tweet(
            0,
            &[("flood", PosClass::CommonNoun), ("x", PosClass::CommonNoun)],
        );
        let b = tweet(
            1,
            &[("flood", PosClass::Hashtag), ("y", PosClass::CommonNoun)],
        );
        let idf = IdfStats::compute(&[a.clone(), b.clone()]);
        let w = PosWeights::<f64>::default();
        let got = agreement(&a, &b, &no_query(), &idf, &w);
        let idf_flood = (2.0f64 / 2.0).ln();
        // df("flood") = 2, so idf = 0 and the score collapses to zero here;
        // rebuild with a third tweet to give the stem a positive idf.
        assert_eq!(got, idf_flood * idf_flood * 6.0);

        let c = tweet(2, &[("z", PosClass::CommonNoun)]);
        let idf = IdfStats::compute(&[a.clone(), b.clone(), c]);
        let got = agreement(&a, &b, &no_query(), &idf, &w);
        let expected = (3.0f64 / 2.0).ln().powi(2) * 6.0;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn max_tf_normalization_uses_pair_max() {
        // Tweet a repeats "flood" 3 times, tweet b once; one more tweet
        // keeps idf positive. raw = 3*1*idf^2*3.0, denominator 3.
        let a = tweet(
            0,
            &[
                ("flood", PosClass::CommonNoun),
                ("flood", PosClass::CommonNoun),
                ("flood", PosClass::CommonNoun),
            ],
        );
        let b = tweet(1, &[("flood", PosClass::CommonNoun)]);
        let c = tweet(2, &[("other", PosClass::CommonNoun)]);
        let idf = IdfStats::compute(&[a.clone(), b.clone(), c]);
        let w = PosWeights::<f64>::default();
        let got = agreement(&a, &b, &no_query(), &idf, &w);
        let idf_flood = (3.0f64 / 2.0).ln();
        let expected = 3.0 * idf_flood * idf_flood * 3.0 / 3.0;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn graph_single_node_has_no_edges() {
        let tweets = vec![tweet(7, &[("alpha", PosClass::CommonNoun)])];
        let idf = IdfStats::compute(&tweets);
        let g =
            AgreementGraph::<f64>::build(&tweets, &no_query(), &idf, &PosWeights::default(), 1e-9);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.incident_weight(0), 0.0);
    }

    #[test]
    fn graph_triangle_is_symmetric() {
        let tweets = vec![
            tweet(
                1,
                &[
                    ("fire", PosClass::CommonNoun),
                    ("downtown", PosClass::CommonNoun),
                ],
            ),
            tweet(
                2,
                &[
                    ("fire", PosClass::CommonNoun),
                    ("smoke", PosClass::CommonNoun),
                ],
            ),
            tweet(
                3,
                &[
                    ("downtown", PosClass::CommonNoun),
                    ("smoke", PosClass::CommonNoun),
                ],
            ),
            tweet(4, &[("unrelated", PosClass::CommonNoun)]),
        ];
        let idf = IdfStats::compute(&tweets);
        let g =
            AgreementGraph::<f64>::build(&tweets, &no_query(), &idf, &PosWeights::default(), 1e-9);
        assert_eq!(g.edge_count(), 3);
        for (a, b, w) in g.edges() {
            assert_eq!(g.edge_weight(b, a), Some(w));
            assert!(w >= 1e-9);
        }
        assert_eq!(g.components().len(), 2);
    }

    #[test]
    fn stem_disjoint_pair_gets_no_edge_even_at_zero_epsilon() {
        let tweets = vec![
            tweet(1, &[("alpha", PosClass::CommonNoun)]),
            tweet(2, &[("beta", PosClass::CommonNoun)]),
        ];
        let idf = IdfStats::compute(&tweets);
        let g =
            AgreementGraph::<f64>::build(&tweets, &no_query(), &idf, &PosWeights::default(), 0.0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn graph_matches_exhaustive_oracle_small() {
        let stems = ["storm", "flood", "coast", "rain", "wind", "surge"];
        let mut tweets = Vec::new();
        for i in 0..12u64 {
            let a = stems[(i as usize) % stems.len()];
            let b = stems[(i as usize * 2 + 1) % stems.len()];
            tweets.push(tweet(
                i,
                &[(a, PosClass::CommonNoun), (b, PosClass::CommonNoun)],
            ));
        }
        let idf = IdfStats::compute(&tweets);
        let w = PosWeights::<f64>::default();
        let g = AgreementGraph::build(&tweets, &no_query(), &idf, &w, 1e-9);

        for i in 0..tweets.len() {
            for j in (i + 1)..tweets.len() {
                let direct = agreement(&tweets[i], &tweets[j], &no_query(), &idf, &w);
                let stored = g.edge_weight(tweets[i].tweet_id, tweets[j].tweet_id);
                if direct >= 1e-9 {
                    let got = stored.expect("edge present");
                    assert!((got - direct).abs() <= 1e-12);
                } else {
                    assert!(stored.is_none());
                }
            }
        }
    }

    #[test]
    fn query_invariance_property() {
        // Appending a query stem to both tweets leaves agreement unchanged.
        let mut a = tweet(
            0,
            &[
                ("flood", PosClass::CommonNoun),
                ("coast", PosClass::CommonNoun),
            ],
        );
        let mut b = tweet(
            1,
            &[
                ("flood", PosClass::CommonNoun),
                ("inland", PosClass::CommonNoun),
            ],
        );
        let c = tweet(2, &[("pad", PosClass::CommonNoun)]);
        let idf = IdfStats::compute(&[a.clone(), b.clone(), c.clone()]);
        let w = PosWeights::<f64>::default();
        let query: HashSet<String> = ["storm".to_string()].into();
        let before = agreement(&a, &b, &query, &idf, &w);

        for t in [&mut a, &mut b] {
            let pos = t.agreement_tokens.len();
            t.agreement_tokens.push(Token {
                surface: "storm".into(),
                stem: "storm".into(),
                pos: PosClass::CommonNoun,
                position: pos,
                is_stop: false,
                titlecase: false,
            });
        }
        let idf2 = IdfStats::compute(&[a.clone(), b.clone(), c]);
        let after = agreement(&a, &b, &query, &idf2, &w);
        assert_eq!(before, after);
    }
}
