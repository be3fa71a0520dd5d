//! Random-forest regression from feature vectors to a raw trust score,
//! plus the gold-standard split, score normalization and the text model
//! format.

mod tree;

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::GoldStandard;
use crate::scalar::Real;

pub use tree::{Node, RegressionTree};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("need at least 2 training samples, got {0}")]
    TooFewSamples(usize),
    #[error("feature row {row} has {got} values, expected {expected}")]
    DimensionMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("gold standard is empty")]
    EmptyGold,
    #[error("bad model file: {0}")]
    ModelFormat(String),
    #[error("cannot access model file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Forest hyperparameters. The bag size and leaf cap follow the usual
/// anti-overfitting setup for short-text ranking; the rest are
/// conventional defaults surfaced as CLI flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestParams {
    /// Bootstrap draws are organized into bags of this many rows; the
    /// sample size per tree is `bag_size * ceil(n / bag_size)`.
    pub bag_size: usize,
    pub max_leaves: usize,
    pub trees: usize,
    /// Fraction of features considered at each split.
    pub feature_subsample: f64,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            bag_size: 10,
            max_leaves: 20,
            trees: 100,
            feature_subsample: 1.0 / 3.0,
            seed: 0,
        }
    }
}

impl ForestParams {
    fn validate(&self) -> Result<(), LearnError> {
        if self.bag_size == 0 || self.max_leaves == 0 || self.trees == 0 {
            return Err(LearnError::ModelFormat(
                "bag_size, max_leaves and trees must be positive".into(),
            ));
        }
        if !(self.feature_subsample > 0.0 && self.feature_subsample <= 1.0) {
            return Err(LearnError::ModelFormat(
                "feature_subsample must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Bagged ensemble of regression trees; prediction is the tree mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest<R> {
    pub params: ForestParams,
    pub feature_names: Vec<String>,
    trees: Vec<RegressionTree<R>>,
}

/// Map a gold label to a regression target: relevant (1) trains toward 1,
/// irrelevant (0) and untrustworthy (-1) toward 0.
pub fn label_to_target<R: Real>(label: i8) -> R {
    if label == 1 {
        R::one()
    } else {
        R::zero()
    }
}

/// Train a forest. Each tree sees `bag_size * ceil(n / bag_size)`
/// bootstrap draws and is grown with a per-tree rng seeded as
/// `seed XOR tree_index`, so training parallelizes without losing
/// determinism.
pub fn train<R: Real>(
    rows: &[Vec<R>],
    targets: &[R],
    feature_names: &[String],
    params: &ForestParams,
) -> Result<RandomForest<R>, LearnError> {
    params.validate()?;
    if rows.len() < 2 {
        return Err(LearnError::TooFewSamples(rows.len()));
    }
    let n_features = feature_names.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n_features {
            return Err(LearnError::DimensionMismatch {
                row: i,
                got: row.len(),
                expected: n_features,
            });
        }
    }
    if targets.len() != rows.len() {
        return Err(LearnError::DimensionMismatch {
            row: targets.len(),
            got: targets.len(),
            expected: rows.len(),
        });
    }

    let n = rows.len();
    let draws = params.bag_size * n.div_ceil(params.bag_size);
    let split_features = ((n_features as f64 * params.feature_subsample).round() as usize)
        .clamp(1, n_features.max(1));

    let trees: Vec<RegressionTree<R>> = (0..params.trees)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ index as u64);
            let sample: Vec<usize> = (0..draws).map(|_| rng.random_range(0..n)).collect();
            RegressionTree::fit(
                rows,
                targets,
                &sample,
                params.max_leaves,
                split_features,
                &mut rng,
            )
        })
        .collect();

    Ok(RandomForest {
        params: params.clone(),
        feature_names: feature_names.to_vec(),
        trees,
    })
}

impl<R: Real> RandomForest<R> {
    /// Mean of the per-tree leaf values; bounded by the training target
    /// range since every leaf is a mean of targets.
    pub fn predict(&self, row: &[R]) -> R {
        let sum: R = self.trees.iter().map(|t| t.predict(row)).sum();
        sum / R::from_usize(self.trees.len()).unwrap()
    }

    pub fn trees(&self) -> &[RegressionTree<R>] {
        &self.trees
    }

    pub fn max_leaf_count(&self) -> usize {
        self.trees
            .iter()
            .map(RegressionTree::leaf_count)
            .max()
            .unwrap_or(0)
    }

    /// Versioned text serialization; floats round-trip exactly.
    pub fn to_model_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "raprop-forest v1");
        let _ = writeln!(out, "trees={}", self.params.trees);
        let _ = writeln!(out, "bag_size={}", self.params.bag_size);
        let _ = writeln!(out, "max_leaves={}", self.params.max_leaves);
        let _ = writeln!(out, "feature_subsample={:?}", self.params.feature_subsample);
        let _ = writeln!(out, "seed={}", self.params.seed);
        let _ = writeln!(out, "features={}", self.feature_names.join(","));
        for (i, tree) in self.trees.iter().enumerate() {
            let _ = writeln!(out, "tree {i}");
            for (n, node) in tree.nodes.iter().enumerate() {
                match node {
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => {
                        let _ = writeln!(
                            out,
                            "node {n} split {feature} {:?} {left} {right}",
                            threshold.to_f64().expect("threshold fits f64")
                        );
                    }
                    Node::Leaf { value } => {
                        let _ = writeln!(
                            out,
                            "node {n} leaf {:?}",
                            value.to_f64().expect("leaf fits f64")
                        );
                    }
                }
            }
            let _ = writeln!(out, "end");
        }
        out
    }

    pub fn from_model_string(content: &str) -> Result<Self, LearnError> {
        let bad = |what: &str| LearnError::ModelFormat(what.to_string());
        let mut lines = content.lines();
        if lines.next() != Some("raprop-forest v1") {
            return Err(bad("missing header"));
        }
        let mut header = std::collections::HashMap::new();
        let mut feature_names = Vec::new();
        for _ in 0..6 {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            let (key, value) = line.split_once('=').ok_or_else(|| bad("bad header line"))?;
            if key == "features" {
                feature_names = value.split(',').map(str::to_string).collect();
            } else {
                header.insert(key.to_string(), value.to_string());
            }
        }
        let get = |k: &str| -> Result<String, LearnError> {
            header
                .get(k)
                .cloned()
                .ok_or_else(|| bad(&format!("missing {k}")))
        };
        let params = ForestParams {
            trees: get("trees")?.parse().map_err(|_| bad("trees"))?,
            bag_size: get("bag_size")?.parse().map_err(|_| bad("bag_size"))?,
            max_leaves: get("max_leaves")?.parse().map_err(|_| bad("max_leaves"))?,
            feature_subsample: get("feature_subsample")?
                .parse()
                .map_err(|_| bad("feature_subsample"))?,
            seed: get("seed")?.parse().map_err(|_| bad("seed"))?,
        };

        let mut trees = Vec::with_capacity(params.trees);
        let parse_r = |s: &str| -> Result<R, LearnError> {
            let v: f64 = s.parse().map_err(|_| bad("bad float"))?;
            R::from_f64(v).ok_or_else(|| bad("float out of range"))
        };
        for index in 0..params.trees {
            let line = lines.next().ok_or_else(|| bad("missing tree"))?;
            if line != format!("tree {index}") {
                return Err(bad(&format!("expected tree {index}, got {line:?}")));
            }
            let mut nodes = Vec::new();
            loop {
                let line = lines.next().ok_or_else(|| bad("truncated tree"))?;
                if line == "end" {
                    break;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                match fields.as_slice() {
                    ["node", n, "split", feature, threshold, left, right] => {
                        if n.parse::<usize>().map_err(|_| bad("node index"))? != nodes.len() {
                            return Err(bad("node index out of order"));
                        }
                        nodes.push(Node::Split {
                            feature: feature.parse().map_err(|_| bad("feature index"))?,
                            threshold: parse_r(threshold)?,
                            left: left.parse().map_err(|_| bad("left index"))?,
                            right: right.parse().map_err(|_| bad("right index"))?,
                        });
                    }
                    ["node", n, "leaf", value] => {
                        if n.parse::<usize>().map_err(|_| bad("node index"))? != nodes.len() {
                            return Err(bad("node index out of order"));
                        }
                        nodes.push(Node::Leaf {
                            value: parse_r(value)?,
                        });
                    }
                    _ => return Err(bad(&format!("bad node line {line:?}"))),
                }
            }
            if nodes.is_empty() {
                return Err(bad("empty tree"));
            }
            trees.push(RegressionTree { nodes });
        }

        Ok(Self {
            params,
            feature_names,
            trees,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), LearnError> {
        std::fs::write(path, self.to_model_string()).map_err(|source| LearnError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LearnError> {
        let content = std::fs::read_to_string(path).map_err(|source| LearnError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_model_string(&content)
    }
}

/// Mean squared error of the forest on labeled rows.
pub fn mse<R: Real>(model: &RandomForest<R>, rows: &[Vec<R>], targets: &[R]) -> R {
    if rows.is_empty() {
        return R::zero();
    }
    let sum: R = rows
        .iter()
        .zip(targets)
        .map(|(row, y)| {
            let err = model.predict(row) - *y;
            err * err
        })
        .sum();
    sum / R::from_usize(rows.len()).unwrap()
}

/// Min-max normalization of raw scores onto [0, 1]; a constant batch
/// (or a single score) maps to 0.5 everywhere.
pub fn normalize_scores<R: Real>(raw: &[R]) -> Vec<R> {
    if raw.is_empty() {
        return Vec::new();
    }
    let mut min = raw[0];
    let mut max = raw[0];
    for &v in raw {
        if v < min {
            min = v;
        }
        if v > max {
            max = v;
        }
    }
    if max == min {
        let half = R::from_f64_lossy(0.5);
        return vec![half; raw.len()];
    }
    raw.iter().map(|&v| (v - min) / (max - min)).collect()
}

/// Disjoint 5% / 5% / 90% partition of the judged pairs, deterministic
/// for a given seed. Small gold sets fall back to floor proportions with
/// at least one training pair, and flag a warning.
#[derive(Debug, Clone)]
pub struct GoldSplit {
    pub train: Vec<(String, u64, i8)>,
    pub test: Vec<(String, u64, i8)>,
    pub rest: Vec<(String, u64, i8)>,
    pub warning: Option<String>,
}

pub fn split_gold(gold: &GoldStandard, seed: u64) -> Result<GoldSplit, LearnError> {
    if gold.is_empty() {
        return Err(LearnError::EmptyGold);
    }
    let mut pairs = gold.sorted_pairs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for i in (1..pairs.len()).rev() {
        let j = rng.random_range(0..=i);
        pairs.swap(i, j);
    }
    let n = pairs.len();
    let n_train = (n / 20).max(1).min(n);
    let n_test = (n / 20).max(1).min(n - n_train);
    let warning = (n < 20).then(|| {
        format!(
            "gold standard has only {n} pairs; using {n_train}/{n_test}/{} split",
            n - n_train - n_test
        )
    });
    let rest = pairs.split_off(n_train + n_test);
    let test = pairs.split_off(n_train);
    Ok(GoldSplit {
        train: pairs,
        test,
        rest,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::GoldStandard;

    fn step_data(n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 - (n as f64 / 2.0)]).collect();
        let targets: Vec<f64> = rows
            .iter()
            .map(|r| if r[0] < 0.0 { 0.0 } else { 1.0 })
            .collect();
        (rows, targets)
    }

    #[test]
    fn constant_labels_predict_the_constant() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64, (i % 3) as f64]).collect();
        let targets = vec![1.0; 30];
        let names = vec!["a".to_string(), "b".to_string()];
        let model = train(&rows, &targets, &names, &ForestParams::default()).unwrap();
        for row in &rows {
            assert_eq!(model.predict(row), 1.0);
        }
    }

    #[test]
    fn step_function_beats_mean_predictor() {
        let (rows, targets) = step_data(200);
        let names = vec!["x".to_string()];
        let params = ForestParams {
            seed: 11,
            ..Default::default()
        };
        let model = train(&rows, &targets, &names, &params).unwrap();
        let model_mse = mse(&model, &rows, &targets);
        // The mean predictor scores 0.25 on a balanced 0/1 step.
        assert!(
            model_mse < 0.25,
            "forest mse {model_mse} should beat the mean predictor"
        );
        assert!(model.max_leaf_count() <= params.max_leaves);
    }

    #[test]
    fn averaging_two_leaf_values() {
        let forest = RandomForest::<f64> {
            params: ForestParams {
                trees: 2,
                ..Default::default()
            },
            feature_names: vec!["x".to_string()],
            trees: vec![
                RegressionTree {
                    nodes: vec![Node::Leaf { value: 0.2 }],
                },
                RegressionTree {
                    nodes: vec![Node::Leaf { value: 0.6 }],
                },
            ],
        };
        assert!((forest.predict(&[0.0]) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn prediction_bounded_by_training_labels() {
        let (rows, targets) = step_data(100);
        let names = vec!["x".to_string()];
        let model = train(&rows, &targets, &names, &ForestParams::default()).unwrap();
        for probe in [-1000.0, -3.5, 0.0, 2.5, 1000.0] {
            let y = model.predict(&[probe]);
            assert!(
                (0.0..=1.0).contains(&y),
                "prediction {y} out of label range"
            );
        }
    }

    #[test]
    fn serialization_round_trips_and_is_deterministic() {
        let (rows, targets) = step_data(60);
        let names = vec!["x".to_string()];
        let params = ForestParams {
            trees: 10,
            seed: 99,
            ..Default::default()
        };
        let a = train(&rows, &targets, &names, &params).unwrap();
        let b = train(&rows, &targets, &names, &params).unwrap();
        assert_eq!(a.to_model_string(), b.to_model_string());

        let reloaded = RandomForest::<f64>::from_model_string(&a.to_model_string()).unwrap();
        assert_eq!(reloaded, a);
        assert_eq!(reloaded.to_model_string(), a.to_model_string());

        let different_seed = train(
            &rows,
            &targets,
            &names,
            &ForestParams {
                seed: 100,
                ..params
            },
        )
        .unwrap();
        assert_ne!(different_seed.to_model_string(), a.to_model_string());
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let rows = vec![vec![1.0]];
        let targets = vec![1.0];
        let names = vec!["x".to_string()];
        assert!(matches!(
            train(&rows, &targets, &names, &ForestParams::default()),
            Err(LearnError::TooFewSamples(1))
        ));
    }

    #[test]
    fn normalize_min_max_and_degenerate_cases() {
        let normalized = normalize_scores(&[0.2f64, 0.6, 1.0]);
        for (got, expected) in normalized.iter().zip([0.0, 0.5, 1.0]) {
            assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        }
        assert_eq!(normalize_scores(&[0.7f64, 0.7]), vec![0.5, 0.5]);
        assert_eq!(normalize_scores(&[3.0f64]), vec![0.5]);
        assert!(normalize_scores::<f64>(&[]).is_empty());
    }

    #[test]
    fn normalize_preserves_order() {
        let raw = vec![0.9f64, -0.3, 2.5, 0.0, 1.1];
        let normalized = normalize_scores(&raw);
        let order = |v: &[f64]| {
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
            idx
        };
        assert_eq!(order(&raw), order(&normalized));
        assert!(normalized.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    fn gold_of(n: usize) -> GoldStandard {
        GoldStandard::from_entries(
            (0..n).map(|i| (("Q1".to_string(), i as u64), if i % 2 == 0 { 1 } else { 0 })),
        )
    }

    #[test]
    fn split_proportions_and_determinism() {
        let gold = gold_of(100);
        let split = split_gold(&gold, 7).unwrap();
        assert_eq!(split.train.len(), 5);
        assert_eq!(split.test.len(), 5);
        assert_eq!(split.rest.len(), 90);
        assert!(split.warning.is_none());

        let again = split_gold(&gold, 7).unwrap();
        assert_eq!(split.train, again.train);
        assert_eq!(split.test, again.test);
        assert_eq!(split.rest, again.rest);

        // Disjoint partition covering all pairs.
        let mut all: Vec<_> = split
            .train
            .iter()
            .chain(&split.test)
            .chain(&split.rest)
            .cloned()
            .collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 100);
    }

    #[test]
    fn tiny_gold_gets_floor_split_with_warning() {
        let gold = gold_of(10);
        let split = split_gold(&gold, 1).unwrap();
        assert_eq!(split.train.len(), 1);
        assert_eq!(split.test.len(), 1);
        assert_eq!(split.rest.len(), 8);
        assert!(split.warning.is_some());

        assert!(matches!(
            split_gold(&GoldStandard::default(), 0),
            Err(LearnError::EmptyGold)
        ));
    }

    #[test]
    fn label_mapping() {
        assert_eq!(label_to_target::<f64>(1), 1.0);
        assert_eq!(label_to_target::<f64>(0), 0.0);
        assert_eq!(label_to_target::<f64>(-1), 0.0);
    }
}
