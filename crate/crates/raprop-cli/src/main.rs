//! raprop command line: ingest an offline tweet corpus, train the trust
//! model, emit ranked runs, evaluate them against qrels, sweep
//! propagation depths and generate synthetic adversarial corpora.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use raprop::agreement::PosWeights;
use raprop::candidate::{
    mediator_candidates, nonmediator_candidates, CandidateSet, TokenizedCorpus,
};
use raprop::corpus::{self, Corpus, PageRankTable, QuerySpec};
use raprop::eval::evaluate;
use raprop::features::FEATURE_NAMES;
use raprop::learner::{self, ForestParams, RandomForest};
use raprop::pipeline::{
    build_graph, feature_rows, feature_scores, rank_with, training_data, SetFeatures,
};
use raprop::ranker::{parse_trec_run, RankedList, Strategy};
use raprop::scenarios::{self, ScenarioKind, ScenarioSpec};
use raprop::text::{Analyzer, Lexicon, StopWords};

#[derive(Parser)]
#[command(
    name = "raprop",
    about = "Microblog ranking by feature-score propagation over inter-tweet agreement",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the random-forest trust model on judged candidate tweets.
    Train(TrainArgs),
    /// Rank each query's candidates and write TREC run files.
    Rank(RankArgs),
    /// Score run files against qrels and emit a CSV report.
    Eval(EvalArgs),
    /// Evaluate RAProp at every propagation depth up to a maximum.
    Sweep(SweepArgs),
    /// Generate a synthetic adversarial corpus.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Tweets file (one key=value record per line).
    #[arg(long)]
    tweets: PathBuf,
    /// User profiles file.
    #[arg(long)]
    users: PathBuf,
    /// URL PageRank table (TSV).
    #[arg(long)]
    pagerank: PathBuf,
    /// Queries file (query_id<TAB>text<TAB>query_time_ms).
    #[arg(long)]
    queries: PathBuf,
    /// Candidate selection model.
    #[arg(long, value_parser = parse_mode, default_value = "mediator")]
    mode: Mode,
    /// Candidate pool size per query.
    #[arg(long, default_value_t = raprop::candidate::DEFAULT_CANDIDATE_N)]
    n: usize,
    /// Worker threads for per-query work (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Mediator,
    NonMediator,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "mediator" => Ok(Mode::Mediator),
        "nonmediator" => Ok(Mode::NonMediator),
        other => Err(format!(
            "unknown mode {other:?} (expected mediator or nonmediator)"
        )),
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Relevance judgments used as training labels.
    #[arg(long)]
    qrels: PathBuf,
    /// Where to write the model file.
    #[arg(long)]
    model: PathBuf,
    /// Seed for the gold split and forest bagging.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Trees in the forest.
    #[arg(long, default_value_t = 100)]
    trees: usize,
    /// Bootstrap bag size.
    #[arg(long, default_value_t = 10)]
    bag_size: usize,
    /// Leaf cap per tree.
    #[arg(long, default_value_t = 20)]
    max_leaves: usize,
    /// Fraction of features tried per split.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    feature_subsample: f64,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Trained model file (needed by the RAProp and FS strategies).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Comma-separated strategies: RAProp, FS, AG, TS, TFIDF.
    #[arg(long, value_delimiter = ',', default_value = "RAProp")]
    strategies: Vec<Strategy>,
    /// Propagation plies for RAProp.
    #[arg(long, default_value_t = 1)]
    plies: u32,
    /// Output directory for run files.
    #[arg(long)]
    out: PathBuf,
    /// Also write each query's agreement graph as an edge list.
    #[arg(long)]
    dump_graph: bool,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of .run files produced by `raprop rank`.
    #[arg(long)]
    runs: PathBuf,
    /// Relevance judgments.
    #[arg(long)]
    qrels: PathBuf,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ply count to attribute to RAProp runs in the report.
    #[arg(long, default_value_t = 1)]
    plies: u32,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Relevance judgments.
    #[arg(long)]
    qrels: PathBuf,
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// Largest ply count to evaluate (0..=plies_max).
    #[arg(long, default_value_t = 3)]
    plies_max: u32,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario kind: spam-bridge, hijacked or breaking-news.
    #[arg(long)]
    kind: ScenarioKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cluster sizes (kind-specific; defaults per kind when omitted).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

/// Flag-combination problems that clap cannot express; exit code 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.downcast_ref::<UsageError>().is_some() {
                1
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Scenario(args) => cmd_scenario(args),
    }
}

/// `RAPROP_LEXICON` points at an alternative word-class table.
fn analyzer() -> Result<Analyzer> {
    match std::env::var_os("RAPROP_LEXICON") {
        Some(path) => {
            let path = PathBuf::from(path);
            let lexicon = Lexicon::from_path(&path)
                .with_context(|| format!("loading RAPROP_LEXICON from {}", path.display()))?;
            Ok(Analyzer::new(lexicon, StopWords::bundled()))
        }
        None => Ok(Analyzer::bundled()),
    }
}

fn configure_jobs(jobs: usize) {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn refuse_overwrite(path: &Path, force: bool) -> Result<()> {
    if path.exists() && !force {
        bail!(
            "{} already exists; pass --force to overwrite",
            path.display()
        );
    }
    Ok(())
}

struct LoadedCorpus {
    corpus: Corpus,
    pagerank: PageRankTable,
    queries: Vec<QuerySpec>,
}

fn load_inputs(args: &CorpusArgs) -> Result<LoadedCorpus> {
    let (corpus, report) = corpus::load_corpus(&args.tweets, &args.users)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if report.skipped > 0 {
        eprintln!("warning: skipped {} malformed corpus lines", report.skipped);
    }
    let (pagerank, pr_report) = corpus::load_pagerank(&args.pagerank)?;
    for warning in &pr_report.warnings {
        eprintln!("warning: {warning}");
    }
    let queries = corpus::load_queries(&args.queries)?;
    if queries.is_empty() {
        bail!("{} contains no queries", args.queries.display());
    }
    Ok(LoadedCorpus {
        corpus,
        pagerank,
        queries,
    })
}

/// Candidate sets for every query, built in parallel (--jobs) with a
/// fixed output order.
fn build_sets(
    loaded: &LoadedCorpus,
    args: &CorpusArgs,
    analyzer: &Analyzer,
) -> Result<Vec<CandidateSet>> {
    let tc = TokenizedCorpus::new(&loaded.corpus, analyzer);
    let sets = loaded
        .queries
        .par_iter()
        .map(|query| match args.mode {
            Mode::Mediator => mediator_candidates(&tc, analyzer, query, args.n),
            Mode::NonMediator => nonmediator_candidates::<f64>(&tc, analyzer, query, args.n),
        })
        .collect::<Result<Vec<_>, _>>()?;
    for set in &sets {
        eprintln!("query {}: {} candidates", set.query.query_id, set.len());
    }
    Ok(sets)
}

fn forest_params(args: &TrainArgs) -> ForestParams {
    ForestParams {
        bag_size: args.bag_size,
        max_leaves: args.max_leaves,
        trees: args.trees,
        feature_subsample: args.feature_subsample,
        seed: args.seed,
    }
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    configure_jobs(args.corpus.jobs);
    refuse_overwrite(&args.model, args.force)?;
    let report_path = args.model.with_extension("report.txt");
    refuse_overwrite(&report_path, args.force)?;

    let gold = corpus::load_qrels(&args.qrels)
        .with_context(|| "train needs readable --qrels (judged pairs are the training labels)")?;
    if gold.is_empty() {
        bail!(
            "{} holds no judgments; train needs labeled pairs",
            args.qrels.display()
        );
    }
    let loaded = load_inputs(&args.corpus)?;
    let analyzer = analyzer()?;
    let sets = build_sets(&loaded, &args.corpus, &analyzer)?;
    let features: Vec<SetFeatures<f64>> = sets
        .iter()
        .map(|set| feature_rows(set, &loaded.corpus, &loaded.pagerank))
        .collect::<Result<_, _>>()?;
    let set_features: Vec<(&CandidateSet, &SetFeatures<f64>)> =
        sets.iter().zip(features.iter()).collect();

    let split = learner::split_gold(&gold, args.seed)?;
    if let Some(warning) = &split.warning {
        eprintln!("warning: {warning}");
    }
    let mut train_pairs = split.train.clone();
    let (rows, targets, skipped_train) = {
        let first = training_data(&set_features, &train_pairs)?;
        if first.0.len() >= 2 {
            first
        } else {
            // A 5% slice of a tiny gold standard cannot train a forest;
            // fold the unjudged remainder in and keep only the test
            // slice held out.
            eprintln!(
                "warning: only {} usable training pair(s) in the 5% split; training on the remainder too",
                first.0.len()
            );
            train_pairs.extend(split.rest.iter().cloned());
            training_data(&set_features, &train_pairs)?
        }
    };
    let params = forest_params(&args);
    let names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    let forest = learner::train(&rows, &targets, &names, &params)?;
    forest.save(&args.model)?;

    let mut report = format!(
        "model={}\ntrain_pairs={} (skipped {skipped_train} outside candidate sets)\n",
        args.model.display(),
        rows.len()
    );
    match training_data(&set_features, &split.test) {
        Ok((test_rows, test_targets, skipped_test)) => {
            let held_out = learner::mse(&forest, &test_rows, &test_targets);
            report.push_str(&format!(
                "test_pairs={} (skipped {skipped_test})\nheld_out_mse={held_out}\n",
                test_rows.len()
            ));
        }
        Err(_) => report.push_str("test_pairs=0\nheld_out_mse=NA\n"),
    }
    std::fs::write(&report_path, &report)
        .with_context(|| format!("writing {}", report_path.display()))?;
    print!("{report}");
    println!("wrote {}", args.model.display());
    Ok(())
}

fn load_model_if(
    strategies: &[Strategy],
    path: &Option<PathBuf>,
) -> Result<Option<RandomForest<f64>>> {
    let needs_model = strategies
        .iter()
        .any(|s| matches!(s, Strategy::RaProp | Strategy::FeatureScore));
    if !needs_model {
        return Ok(None);
    }
    let path = path
        .as_ref()
        .ok_or_else(|| usage("strategies RAProp/FS need --model <trained model file>"))?;
    Ok(Some(RandomForest::load(path)?))
}

fn cmd_rank(args: RankArgs) -> Result<()> {
    configure_jobs(args.corpus.jobs);
    if args.strategies.is_empty() {
        return Err(usage(
            "--strategies must name at least one of RAProp, FS, AG, TS, TFIDF",
        ));
    }
    let model = load_model_if(&args.strategies, &args.model)?;
    let loaded = load_inputs(&args.corpus)?;
    let analyzer = analyzer()?;
    let sets = build_sets(&loaded, &args.corpus, &analyzer)?;

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let weights = PosWeights::default();
    let per_query: Vec<Vec<(PathBuf, String)>> = sets
        .par_iter()
        .map(|set| -> Result<Vec<(PathBuf, String)>> {
            let scores: Option<HashMap<u64, f64>> = match &model {
                Some(forest) => {
                    let feats = feature_rows(set, &loaded.corpus, &loaded.pagerank)?;
                    Some(feature_scores(forest, &feats))
                }
                None => None,
            };
            let graph = build_graph(set, &weights);
            let mut outputs = Vec::new();
            if args.dump_graph {
                let mut dump = String::new();
                for (a, b, w) in graph.edges() {
                    dump.push_str(&format!("{a} {b} {w}\n"));
                }
                outputs.push((
                    args.out.join(format!("{}_graph.txt", set.query.query_id)),
                    dump,
                ));
            }
            for &strategy in &args.strategies {
                let list = rank_with(set, strategy, scores.as_ref(), &graph, args.plies)?;
                outputs.push((
                    args.out
                        .join(format!("{}_{}.run", set.query.query_id, strategy.run_tag())),
                    list.to_trec_run(),
                ));
            }
            Ok(outputs)
        })
        .collect::<Result<_>>()?;
    for (path, content) in per_query.into_iter().flatten() {
        refuse_overwrite(&path, args.force)?;
        std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let gold = corpus::load_qrels(&args.qrels)?;
    let mut run_files: Vec<PathBuf> = std::fs::read_dir(&args.runs)
        .with_context(|| format!("reading {}", args.runs.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "run"))
        .collect();
    run_files.sort();
    if run_files.is_empty() {
        bail!("{} contains no .run files", args.runs.display());
    }
    let mut runs: Vec<RankedList<f64>> = Vec::with_capacity(run_files.len());
    for path in &run_files {
        let content =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut list = parse_trec_run(&content).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        if list.strategy == Strategy::RaProp {
            list.plies = args.plies;
        }
        runs.push(list);
    }
    let report = evaluate(&runs, &gold);
    emit_csv(report.to_csv(), &args.out, args.force)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    configure_jobs(args.corpus.jobs);
    let gold = corpus::load_qrels(&args.qrels)?;
    let forest = RandomForest::<f64>::load(&args.model)?;
    let loaded = load_inputs(&args.corpus)?;
    let analyzer = analyzer()?;
    let sets = build_sets(&loaded, &args.corpus, &analyzer)?;

    let weights = PosWeights::default();
    let runs: Vec<RankedList<f64>> = sets
        .par_iter()
        .map(|set| -> Result<Vec<RankedList<f64>>> {
            let feats = feature_rows(set, &loaded.corpus, &loaded.pagerank)?;
            let scores = feature_scores(&forest, &feats);
            let graph = build_graph(set, &weights);
            (0..=args.plies_max)
                .map(|plies| {
                    Ok(rank_with(
                        set,
                        Strategy::RaProp,
                        Some(&scores),
                        &graph,
                        plies,
                    )?)
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let report = evaluate(&runs, &gold);
    emit_csv(report.to_csv(), &args.out, args.force)
}

fn emit_csv(csv: String, out: &Option<PathBuf>, force: bool) -> Result<()> {
    match out {
        Some(path) => {
            refuse_overwrite(path, force)?;
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_scenario(args: ScenarioArgs) -> Result<()> {
    let spec = match args.sizes {
        Some(sizes) => ScenarioSpec {
            kind: args.kind,
            seed: args.seed,
            sizes,
        },
        None => ScenarioSpec::default_for(args.kind, args.seed),
    };
    let scenario = scenarios::generate(&spec)?;
    if !args.force {
        let files = scenarios::ScenarioFiles::under(&args.out);
        for path in [
            &files.tweets,
            &files.users,
            &files.pagerank,
            &files.queries,
            &files.qrels,
            &files.manifest,
        ] {
            refuse_overwrite(path, false)?;
        }
    }
    let files = scenario.write_to(&args.out)?;
    println!(
        "wrote {} tweets across {} groups",
        scenario.tweets.len(),
        scenario.manifest.groups.len()
    );
    println!("{}", files.manifest.display());
    Ok(())
}
