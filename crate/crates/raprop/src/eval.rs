//! Judged-only precision@K, average precision and MAP against the gold
//! standard, with per-query and aggregate CSV reporting.
//!
//! Unjudged tweets are invisible to every metric: a ranked list is first
//! filtered to the tweets the gold standard judges, preserving order,
//! and the cutoffs apply to that filtered list. Labels 0 and -1 both
//! count as irrelevant.

use std::collections::HashMap;

use crate::agreement::AgreementGraph;
use crate::candidate::CandidateSet;
use crate::corpus::GoldStandard;
use crate::ranker::{rank_raprop, RankError, RankedList, Strategy};
use crate::scalar::Real;

/// The precision cutoffs reported per query.
pub const PRECISION_CUTOFFS: [usize; 4] = [5, 10, 20, 30];

/// Ranked tweet ids restricted to judged ones, with labels, order kept.
fn judged_labels<R: Real>(ranked: &RankedList<R>, gold: &GoldStandard) -> Vec<i8> {
    ranked
        .entries
        .iter()
        .filter_map(|(id, _)| gold.label(&ranked.query_id, *id))
        .collect()
}

/// Precision over the first `k` judged tweets: relevant / taken, zero
/// when nothing judged is retrieved.
pub fn precision_at_k<R: Real>(ranked: &RankedList<R>, gold: &GoldStandard, k: usize) -> f64 {
    let judged = judged_labels(ranked, gold);
    let taken = judged.len().min(k);
    if taken == 0 {
        return 0.0;
    }
    let relevant = judged[..taken].iter().filter(|&&l| l == 1).count();
    relevant as f64 / taken as f64
}

/// Average precision on the judged-filtered list. The denominator is the
/// total number of relevant tweets the gold standard knows for the
/// query; zero relevant means AP = 0.
pub fn average_precision<R: Real>(ranked: &RankedList<R>, gold: &GoldStandard) -> f64 {
    let total_relevant = gold.relevant_count(&ranked.query_id);
    if total_relevant == 0 {
        return 0.0;
    }
    let judged = judged_labels(ranked, gold);
    let mut hits = 0usize;
    let mut sum = 0.0f64;
    for (i, &label) in judged.iter().enumerate() {
        if label == 1 {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / total_relevant as f64
}

/// One report row; `query` is "ALL" on aggregate rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub query: String,
    pub strategy: Strategy,
    pub plies: u32,
    pub p5: f64,
    pub p10: f64,
    pub p20: f64,
    pub p30: f64,
    pub ap: f64,
    pub judged: f64,
}

#[derive(Debug, Clone, Default)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub aggregates: Vec<EvalRow>,
}

impl EvalReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("query,strategy,plies,p5,p10,p20,p30,ap,judged\n");
        for row in self.rows.iter().chain(&self.aggregates) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.query,
                row.strategy.run_tag(),
                row.plies,
                row.p5,
                row.p10,
                row.p20,
                row.p30,
                row.ap,
                row.judged
            ));
        }
        out
    }

    /// Mean average precision of a strategy's aggregate row.
    pub fn map(&self, strategy: Strategy, plies: u32) -> Option<f64> {
        self.aggregates
            .iter()
            .find(|r| r.strategy == strategy && r.plies == plies)
            .map(|r| r.ap)
    }
}

fn row_for<R: Real>(ranked: &RankedList<R>, gold: &GoldStandard) -> EvalRow {
    EvalRow {
        query: ranked.query_id.clone(),
        strategy: ranked.strategy,
        plies: ranked.plies,
        p5: precision_at_k(ranked, gold, 5),
        p10: precision_at_k(ranked, gold, 10),
        p20: precision_at_k(ranked, gold, 20),
        p30: precision_at_k(ranked, gold, 30),
        ap: average_precision(ranked, gold),
        judged: judged_labels(ranked, gold).len() as f64,
    }
}

/// Score every run and aggregate per (strategy, plies) across queries.
/// Pure in its inputs; row order is deterministic.
pub fn evaluate<R: Real>(runs: &[RankedList<R>], gold: &GoldStandard) -> EvalReport {
    let mut rows: Vec<EvalRow> = runs.iter().map(|r| row_for(r, gold)).collect();
    rows.sort_by(|a, b| {
        (a.strategy.run_tag(), a.plies, &a.query).cmp(&(b.strategy.run_tag(), b.plies, &b.query))
    });

    let mut groups: Vec<(Strategy, u32)> = Vec::new();
    for row in &rows {
        if !groups.contains(&(row.strategy, row.plies)) {
            groups.push((row.strategy, row.plies));
        }
    }
    let aggregates = groups
        .into_iter()
        .map(|(strategy, plies)| {
            let members: Vec<&EvalRow> = rows
                .iter()
                .filter(|r| r.strategy == strategy && r.plies == plies)
                .collect();
            let n = members.len() as f64;
            let mean = |f: fn(&EvalRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / n;
            EvalRow {
                query: "ALL".into(),
                strategy,
                plies,
                p5: mean(|r| r.p5),
                p10: mean(|r| r.p10),
                p20: mean(|r| r.p20),
                p30: mean(|r| r.p30),
                ap: mean(|r| r.ap),
                judged: mean(|r| r.judged),
            }
        })
        .collect();

    EvalReport { rows, aggregates }
}

/// Evaluate RAProp at every ply count from 0 to `plies_max` on one
/// candidate set.
pub fn ply_sweep<R: Real>(
    set: &CandidateSet,
    feature_scores: &HashMap<u64, R>,
    graph: &AgreementGraph<R>,
    gold: &GoldStandard,
    plies_max: u32,
) -> Result<EvalReport, RankError> {
    let mut runs = Vec::with_capacity(plies_max as usize + 1);
    for plies in 0..=plies_max {
        runs.push(rank_raprop(set, feature_scores, graph, plies)?);
    }
    Ok(evaluate(&runs, gold))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gold(entries: &[(u64, i8)]) -> GoldStandard {
        GoldStandard::from_entries(
            entries
                .iter()
                .map(|(id, label)| (("Q1".to_string(), *id), *label)),
        )
    }

    fn list(ids: &[u64]) -> RankedList<f64> {
        RankedList {
            query_id: "Q1".into(),
            strategy: Strategy::FeatureScore,
            plies: 0,
            entries: ids
                .iter()
                .enumerate()
                .map(|(i, id)| (*id, 1.0 / (i + 1) as f64))
                .collect(),
        }
    }

    #[test]
    fn precision_all_relevant_is_one() {
        let g = gold(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(precision_at_k(&list(&[1, 2, 3]), &g, 3), 1.0);
    }

    #[test]
    fn precision_skips_unjudged() {
        // Ranked [t1:1, t2:unjudged, t3:0, t4:-1, t5:1], k=3 ->
        // judged prefix [t1, t3, t4] -> 1/3.
        let g = gold(&[(1, 1), (3, 0), (4, -1), (5, 1)]);
        let p = precision_at_k(&list(&[1, 2, 3, 4, 5]), &g, 3);
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn precision_no_judged_is_zero() {
        let g = gold(&[(9, 1)]);
        assert_eq!(precision_at_k(&list(&[1, 2, 3]), &g, 5), 0.0);
    }

    #[test]
    fn precision_k_beyond_judged_uses_judged_count() {
        let g = gold(&[(1, 1), (2, 0)]);
        // Two judged, one relevant: P@30 over min(30, 2) = 2 -> 0.5.
        assert_eq!(precision_at_k(&list(&[1, 2]), &g, 30), 0.5);
    }

    #[test]
    fn average_precision_worked_example() {
        // Judged list [1, 0, 1] with 2 relevant in gold:
        // (1/1 + 2/3) / 2 = 0.8333...
        let g = gold(&[(1, 1), (2, 0), (3, 1)]);
        let ap = average_precision(&list(&[1, 2, 3]), &g);
        assert!((ap - 5.0 / 6.0).abs() < 1e-12);
        assert!((ap - 0.8333).abs() < 1e-4);
    }

    #[test]
    fn average_precision_edges() {
        // All relevant, retrieved in order -> 1.0.
        let g = gold(&[(1, 1), (2, 1)]);
        assert_eq!(average_precision(&list(&[1, 2]), &g), 1.0);
        // No relevant retrieved -> 0.
        let g = gold(&[(1, 0), (9, 1)]);
        assert_eq!(average_precision(&list(&[1]), &g), 0.0);
        // No relevant in gold at all -> defined 0.
        let g = gold(&[(1, 0)]);
        assert_eq!(average_precision(&list(&[1]), &g), 0.0);
    }

    #[test]
    fn unjudged_insertion_invariance() {
        let g = gold(&[(1, 1), (2, 0), (3, 1), (4, -1)]);
        let base = list(&[1, 2, 3, 4]);
        // Insert unjudged ids 100..104 at assorted positions.
        let noisy = list(&[100, 1, 101, 2, 102, 3, 103, 4, 104]);
        for k in [1, 2, 3, 5, 30] {
            assert_eq!(
                precision_at_k(&base, &g, k),
                precision_at_k(&noisy, &g, k),
                "P@{k} changed under unjudged insertion"
            );
        }
        assert_eq!(average_precision(&base, &g), average_precision(&noisy, &g));
    }

    #[test]
    fn flipping_a_judged_one_to_zero_never_raises_precision() {
        let g_before = gold(&[(1, 1), (2, 1), (3, 0)]);
        let g_after = gold(&[(1, 1), (2, 0), (3, 0)]);
        let l = list(&[1, 2, 3]);
        for k in [1, 2, 3, 5] {
            assert!(precision_at_k(&l, &g_after, k) <= precision_at_k(&l, &g_before, k));
        }
    }

    #[test]
    fn evaluate_rows_and_aggregates() {
        let mut gold_entries = Vec::new();
        for q in ["Q1", "Q2"] {
            for id in 1..=4u64 {
                gold_entries.push(((q.to_string(), id), if id <= 2 { 1 } else { 0 }));
            }
        }
        let gold = GoldStandard::from_entries(gold_entries);

        let mut runs = Vec::new();
        for strategy in [Strategy::RaProp, Strategy::FeatureScore, Strategy::Recency] {
            for q in ["Q1", "Q2"] {
                runs.push(RankedList::<f64> {
                    query_id: q.into(),
                    strategy,
                    plies: u32::from(strategy == Strategy::RaProp),
                    entries: vec![(1, 4.0), (2, 3.0), (3, 2.0), (4, 1.0)],
                });
            }
        }
        let report = evaluate(&runs, &gold);
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.aggregates.len(), 3);
        for agg in &report.aggregates {
            assert_eq!(agg.query, "ALL");
            assert_eq!(agg.p5, 0.5);
            assert_eq!(agg.judged, 4.0);
        }

        let csv = report.to_csv();
        assert!(csv.starts_with("query,strategy,plies,p5,p10,p20,p30,ap,judged\n"));
        assert_eq!(csv.lines().count(), 1 + 6 + 3);
    }

    #[test]
    fn evaluate_query_absent_from_gold_scores_zero_judged() {
        let gold = GoldStandard::from_entries(vec![(("Q1".to_string(), 1), 1)]);
        let run = RankedList::<f64> {
            query_id: "QX".into(),
            strategy: Strategy::FeatureScore,
            plies: 0,
            entries: vec![(1, 1.0)],
        };
        let report = evaluate(&[run], &gold);
        assert_eq!(report.rows[0].judged, 0.0);
        assert_eq!(report.rows[0].p30, 0.0);
        assert_eq!(report.rows[0].ap, 0.0);
    }

    #[test]
    fn map_is_mean_of_per_query_ap() {
        let gold = GoldStandard::from_entries(vec![
            (("Q1".to_string(), 1), 1),
            (("Q1".to_string(), 2), 0),
            (("Q2".to_string(), 1), 1),
        ]);
        // Q1: ranked [2, 1] -> AP = (1/2)/1 = 0.5; Q2: [1] -> AP = 1.0.
        let runs = vec![
            RankedList::<f64> {
                query_id: "Q1".into(),
                strategy: Strategy::FeatureScore,
                plies: 0,
                entries: vec![(2, 2.0), (1, 1.0)],
            },
            RankedList::<f64> {
                query_id: "Q2".into(),
                strategy: Strategy::FeatureScore,
                plies: 0,
                entries: vec![(1, 1.0)],
            },
        ];
        let report = evaluate(&runs, &gold);
        let map = report.map(Strategy::FeatureScore, 0).unwrap();
        assert!((map - 0.75).abs() < 1e-12);
    }

    #[test]
    fn metrics_stay_in_unit_interval() {
        let g = gold(&[(1, 1), (2, -1), (3, 0), (4, 1), (5, 1)]);
        for ids in [&[5, 4, 3, 2, 1][..], &[2, 3][..], &[][..]] {
            let l = list(ids);
            for k in [1, 5, 10, 30] {
                let p = precision_at_k(&l, &g, k);
                assert!((0.0..=1.0).contains(&p));
            }
            let ap = average_precision(&l, &g);
            assert!((0.0..=1.0).contains(&ap));
        }
    }
}
