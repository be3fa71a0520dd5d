//! Axis-aligned regression trees grown best-first under a leaf budget.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Node<R> {
    Split {
        feature: usize,
        threshold: R,
        left: usize,
        right: usize,
    },
    Leaf {
        value: R,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree<R> {
    pub(crate) nodes: Vec<Node<R>>,
}

impl<R: Real> RegressionTree<R> {
    pub fn predict(&self, row: &[R]) -> R {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Grow a tree on the sampled rows: repeatedly apply the single best
    /// variance-reducing split until the leaf budget is hit or no split
    /// improves. Deterministic given the sample and rng state.
    pub fn fit(
        rows: &[Vec<R>],
        targets: &[R],
        sample: &[usize],
        max_leaves: usize,
        split_features: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let n_features = rows.first().map_or(0, Vec::len);
        let mut nodes = vec![Node::Leaf {
            value: mean(targets, sample),
        }];
        let mut pending: Vec<PendingLeaf<R>> = vec![PendingLeaf::new(
            0,
            sample.to_vec(),
            rows,
            targets,
            n_features,
            split_features,
            rng,
        )];
        let mut leaves = 1usize;

        while leaves < max_leaves {
            let mut best: Option<usize> = None;
            for (i, leaf) in pending.iter().enumerate() {
                let Some(split) = &leaf.split else { continue };
                let better = match best {
                    None => true,
                    Some(b) => split.gain > pending[b].split.as_ref().unwrap().gain,
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(best) = best else { break };

            let leaf = pending.swap_remove(best);
            let split = leaf.split.expect("picked leaves carry a split");
            let left_index = nodes.len();
            nodes.push(Node::Leaf {
                value: mean(targets, &split.left_rows),
            });
            let right_index = nodes.len();
            nodes.push(Node::Leaf {
                value: mean(targets, &split.right_rows),
            });
            nodes[leaf.node] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left: left_index,
                right: right_index,
            };
            leaves += 1;

            pending.push(PendingLeaf::new(
                left_index,
                split.left_rows,
                rows,
                targets,
                n_features,
                split_features,
                rng,
            ));
            pending.push(PendingLeaf::new(
                right_index,
                split.right_rows,
                rows,
                targets,
                n_features,
                split_features,
                rng,
            ));
        }

        Self { nodes }
    }
}

struct PendingLeaf<R> {
    node: usize,
    split: Option<BestSplit<R>>,
}

struct BestSplit<R> {
    gain: R,
    feature: usize,
    threshold: R,
    left_rows: Vec<usize>,
    right_rows: Vec<usize>,
}

impl<R: Real> PendingLeaf<R> {
    fn new(
        node: usize,
        rows_here: Vec<usize>,
        rows: &[Vec<R>],
        targets: &[R],
        n_features: usize,
        split_features: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let split = best_split(&rows_here, rows, targets, n_features, split_features, rng);
        Self { node, split }
    }
}

fn mean<R: Real>(targets: &[R], sample: &[usize]) -> R {
    if sample.is_empty() {
        return R::zero();
    }
    let sum: R = sample.iter().map(|&i| targets[i]).sum();
    sum / R::from_usize(sample.len()).unwrap()
}

fn sse<R: Real>(sum: R, sum_sq: R, n: usize) -> R {
    if n == 0 {
        return R::zero();
    }
    sum_sq - sum * sum / R::from_usize(n).unwrap()
}

/// Distinct feature indexes drawn without replacement, returned sorted so
/// the evaluation order is stable.
fn draw_features(n_features: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n_features).collect();
    let count = count.clamp(1, n_features.max(1));
    for i in 0..count.min(n_features) {
        let j = rng.random_range(i..n_features);
        all.swap(i, j);
    }
    let mut chosen = all[..count.min(n_features)].to_vec();
    chosen.sort_unstable();
    chosen
}

fn best_split<R: Real>(
    rows_here: &[usize],
    rows: &[Vec<R>],
    targets: &[R],
    n_features: usize,
    split_features: usize,
    rng: &mut ChaCha8Rng,
) -> Option<BestSplit<R>> {
    if rows_here.len() < 2 || n_features == 0 {
        return None;
    }
    let total_sum: R = rows_here.iter().map(|&i| targets[i]).sum();
    let total_sq: R = rows_here.iter().map(|&i| targets[i] * targets[i]).sum();
    let parent_sse = sse(total_sum, total_sq, rows_here.len());
    if parent_sse <= R::zero() {
        return None;
    }

    let mut best: Option<BestSplit<R>> = None;
    for feature in draw_features(n_features, split_features, rng) {
        let mut ordered: Vec<(R, usize)> =
            rows_here.iter().map(|&i| (rows[i][feature], i)).collect();
        ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

        let mut left_sum = R::zero();
        let mut left_sq = R::zero();
        for cut in 1..ordered.len() {
            let (value, row) = ordered[cut - 1];
            let y = targets[row];
            left_sum = left_sum + y;
            left_sq = left_sq + y * y;
            if ordered[cut].0 <= value {
                continue; // no boundary between equal feature values
            }
            let right_sum = total_sum - left_sum;
            let right_sq = total_sq - left_sq;
            let gain = parent_sse
                - sse(left_sum, left_sq, cut)
                - sse(right_sum, right_sq, ordered.len() - cut);
            let improves = match &best {
                None => gain > R::zero(),
                Some(b) => gain > b.gain,
            };
            if improves {
                let two = R::one() + R::one();
                best = Some(BestSplit {
                    gain,
                    feature,
                    threshold: (value + ordered[cut].0) / two,
                    left_rows: ordered[..cut].iter().map(|(_, i)| *i).collect(),
                    right_rows: ordered[cut..].iter().map(|(_, i)| *i).collect(),
                });
            }
        }
    }
    best
}
