//! `cmlid`: train, tag, evaluate, and cross-validate word-level language
//! identification models for romanized Telugu-English code-mixed text.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 data/format error,
//! 4 model-file error, 5 internal numerical failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cmlid::corpus::{label_stats, parse_corpus, serialize_corpus, Corpus};
use cmlid::error::Error;
use cmlid::eval::{cross_validate, score, ReportMeta};
use cmlid::features::{CrfFeatureConfig, TfIdfMode};
use cmlid::model_file;
use cmlid::tagger::{ModelSpec, TrainedModel};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_MODEL: u8 = 4;
const EXIT_NUMERIC: u8 = 5;

#[derive(Parser)]
#[command(
    name = "cmlid",
    version,
    about = "Word-level language identification for Telugu-English code-mixed text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print label statistics of an annotated corpus
    Stats { corpus: PathBuf },
    /// Train a backend and write a model file
    Train {
        #[command(flatten)]
        options: TrainOptions,
        corpus: PathBuf,
        model_out: PathBuf,
    },
    /// Tag input in corpus format (existing labels are ignored)
    Tag {
        model: PathBuf,
        /// Input file; standard input when omitted
        input: Option<PathBuf>,
        /// Output file; standard output when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a model file on a labeled corpus
    Eval { model: PathBuf, corpus: PathBuf },
    /// Cross-validate a backend on a labeled corpus
    Cv {
        #[command(flatten)]
        options: TrainOptions,
        /// Number of folds
        #[arg(long, default_value_t = 3)]
        folds: usize,
        corpus: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Nb,
    Rf,
    Hmm,
    Crf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeKind {
    /// Words plus within-sentence word trigrams
    Word,
    /// Character trigrams
    Char,
}

/// Hyperparameters, each optional on the command line; unset values fall
/// back to the config file, then to the documented defaults. Flags win on
/// conflict.
#[derive(Args)]
struct TrainOptions {
    /// Backend to train
    #[arg(long, value_enum)]
    backend: Option<BackendKind>,
    /// key=value config file; command-line flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
    /// Naive Bayes smoothing constant (default 1.0)
    #[arg(long)]
    alpha: Option<f64>,
    /// Naive Bayes vectorizer mode (default char)
    #[arg(long, value_enum)]
    mode: Option<ModeKind>,
    /// Random forest tree count (default 50)
    #[arg(long)]
    trees: Option<usize>,
    /// Seed for every randomized step (default 42)
    #[arg(long)]
    seed: Option<u64>,
    /// HMM transition smoothing (default 0.1)
    #[arg(long)]
    k_trans: Option<f64>,
    /// HMM emission smoothing (default 0.1)
    #[arg(long)]
    k_emit: Option<f64>,
    /// CRF L2 coefficient (default 0.1)
    #[arg(long)]
    lambda: Option<f64>,
    /// CRF maximum training iterations (default 200)
    #[arg(long)]
    max_iters: Option<usize>,
    /// CRF convergence tolerance on the objective (default 1e-6)
    #[arg(long)]
    tol: Option<f64>,
    /// CRF prefix/suffix length (default 3)
    #[arg(long)]
    affix_len: Option<usize>,
    /// CRF n-gram orders, comma separated (default 1,2,3)
    #[arg(long, value_delimiter = ',')]
    ngram_orders: Option<Vec<usize>>,
    /// CRF minimum feature count (default 1 = keep all)
    #[arg(long)]
    min_count: Option<u32>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure::new(EXIT_USAGE, message)
    }
}

fn code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidFraction(_)
        | Error::InvalidFolds(_)
        | Error::NonPositiveAlpha(_)
        | Error::InvalidSmoothing(_)
        | Error::NoTemplatesEnabled => EXIT_USAGE,
        Error::ModelMagic
        | Error::ModelVersion(_)
        | Error::ModelChecksum
        | Error::ModelTruncated
        | Error::ModelEncoding(_) => EXIT_MODEL,
        Error::NotFitted | Error::NonFiniteObjective | Error::InvalidProbabilityTable(_) => {
            EXIT_NUMERIC
        }
        _ => EXIT_DATA,
    }
}

fn from_core(err: Error) -> Failure {
    Failure::new(code_for(&err), err.to_string())
}

/// Fully resolved run configuration.
struct RunConfig {
    backend: BackendKind,
    alpha: f64,
    mode: ModeKind,
    trees: usize,
    seed: u64,
    k_trans: f64,
    k_emit: f64,
    lambda: f64,
    max_iters: usize,
    tol: f64,
    affix_len: usize,
    ngram_orders: Vec<usize>,
    min_count: u32,
}

impl RunConfig {
    fn resolve(options: &TrainOptions) -> Result<RunConfig, Failure> {
        let file = match &options.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let from_file = |key: &str| file.get(key).cloned();
        fn parsed<T: std::str::FromStr>(key: &str, raw: Option<String>) -> Result<Option<T>, Failure> {
            match raw {
                None => Ok(None),
                Some(text) => text
                    .parse()
                    .map(Some)
                    .map_err(|_| Failure::usage(format!("config key {key}: cannot parse {text:?}"))),
            }
        }
        let backend = match (&options.backend, from_file("backend")) {
            (Some(kind), _) => *kind,
            (None, Some(text)) => match text.as_str() {
                "nb" => BackendKind::Nb,
                "rf" => BackendKind::Rf,
                "hmm" => BackendKind::Hmm,
                "crf" => BackendKind::Crf,
                other => return Err(Failure::usage(format!("config key backend: unknown backend {other:?}"))),
            },
            (None, None) => return Err(Failure::usage("no backend selected: pass --backend or set backend= in the config file")),
        };
        let mode = match (&options.mode, from_file("mode")) {
            (Some(mode), _) => *mode,
            (None, Some(text)) => match text.as_str() {
                "word" => ModeKind::Word,
                "char" => ModeKind::Char,
                other => return Err(Failure::usage(format!("config key mode: unknown mode {other:?}"))),
            },
            (None, None) => ModeKind::Char,
        };
        let ngram_orders = match (&options.ngram_orders, from_file("ngram_orders")) {
            (Some(orders), _) => orders.clone(),
            (None, Some(text)) => text
                .split(',')
                .map(|part| {
                    part.trim().parse().map_err(|_| {
                        Failure::usage(format!("config key ngram_orders: cannot parse {part:?}"))
                    })
                })
                .collect::<Result<_, _>>()?,
            (None, None) => vec![1, 2, 3],
        };
        let config = RunConfig {
            backend,
            mode,
            ngram_orders,
            alpha: options.alpha.or(parsed("alpha", from_file("alpha"))?).unwrap_or(1.0),
            trees: options.trees.or(parsed("trees", from_file("trees"))?).unwrap_or(50),
            seed: options.seed.or(parsed("seed", from_file("seed"))?).unwrap_or(42),
            k_trans: options.k_trans.or(parsed("k_trans", from_file("k_trans"))?).unwrap_or(0.1),
            k_emit: options.k_emit.or(parsed("k_emit", from_file("k_emit"))?).unwrap_or(0.1),
            lambda: options.lambda.or(parsed("lambda", from_file("lambda"))?).unwrap_or(0.1),
            max_iters: options
                .max_iters
                .or(parsed("max_iters", from_file("max_iters"))?)
                .unwrap_or(200),
            tol: options.tol.or(parsed("tol", from_file("tol"))?).unwrap_or(1e-6),
            affix_len: options
                .affix_len
                .or(parsed("affix_len", from_file("affix_len"))?)
                .unwrap_or(3),
            min_count: options
                .min_count
                .or(parsed("min_count", from_file("min_count"))?)
                .unwrap_or(1),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), Failure> {
        let check = |ok: bool, message: &str| {
            if ok {
                Ok(())
            } else {
                Err(Failure::usage(message))
            }
        };
        check(self.alpha > 0.0 && self.alpha.is_finite(), "alpha must be positive and finite")?;
        check(self.trees >= 1, "trees must be at least 1")?;
        check(self.k_trans >= 0.0 && self.k_trans.is_finite(), "k_trans must be non-negative")?;
        check(self.k_emit >= 0.0 && self.k_emit.is_finite(), "k_emit must be non-negative")?;
        check(self.lambda >= 0.0 && self.lambda.is_finite(), "lambda must be non-negative")?;
        check(self.max_iters >= 1, "max_iters must be at least 1")?;
        check(self.tol >= 0.0 && self.tol.is_finite(), "tol must be non-negative")?;
        check(self.affix_len >= 1, "affix_len must be at least 1")?;
        check(
            !self.ngram_orders.is_empty() && self.ngram_orders.iter().all(|&k| k >= 1),
            "ngram_orders must be a non-empty list of orders >= 1",
        )?;
        Ok(())
    }

    fn spec(&self) -> ModelSpec {
        match self.backend {
            BackendKind::Nb => ModelSpec::NaiveBayes {
                alpha: self.alpha,
                mode: match self.mode {
                    ModeKind::Word => TfIdfMode::WordTrigram,
                    ModeKind::Char => TfIdfMode::CharTrigram,
                },
            },
            BackendKind::Rf => ModelSpec::RandomForest { n_trees: self.trees, seed: self.seed },
            BackendKind::Hmm => ModelSpec::Hmm { k_trans: self.k_trans, k_emit: self.k_emit },
            BackendKind::Crf => ModelSpec::Crf {
                config: CrfFeatureConfig {
                    max_affix_len: self.affix_len,
                    ngram_orders: self.ngram_orders.clone(),
                    min_count: self.min_count,
                    ..CrfFeatureConfig::default()
                },
                lambda: self.lambda,
                max_iters: self.max_iters,
                tol: self.tol,
            },
        }
    }
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config file {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Failure::usage(format!(
                "{}:{}: expected key=value, got {raw:?}",
                path.display(),
                i + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn read_corpus(path: &Path) -> Result<Corpus, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_DATA, format!("cannot read {}: {e}", path.display())))?;
    parse_corpus(&text)
        .map_err(|e| Failure::new(code_for(&e), format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<TrainedModel, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::new(EXIT_MODEL, format!("cannot read model {}: {e}", path.display())))?;
    model_file::from_bytes(&bytes)
        .map_err(|e| Failure::new(code_for(&e), format!("{}: {e}", path.display())))
}

fn cmd_stats(corpus_path: &Path) -> Result<(), Failure> {
    let corpus = read_corpus(corpus_path)?;
    let stats = label_stats(&corpus).map_err(from_core)?;
    println!("{stats}");
    Ok(())
}

fn cmd_train(options: &TrainOptions, corpus_path: &Path, out: &Path) -> Result<(), Failure> {
    let config = RunConfig::resolve(options)?;
    let corpus = read_corpus(corpus_path)?;
    let spec = config.spec();
    let model = spec.train(&corpus).map_err(from_core)?;
    model_file::save(&model, out)
        .map_err(|e| Failure::new(EXIT_MODEL, format!("cannot write {}: {e}", out.display())))?;
    println!(
        "trained {} on {} sentences / {} tokens",
        spec.name(),
        corpus.sentence_count(),
        corpus.token_count()
    );
    if let Some(stats) = model.train_stats() {
        println!(
            "iterations: {} | final objective: {:.6} | converged: {}",
            stats.iterations, stats.final_nll, stats.converged
        );
    }
    println!("model written to {}", out.display());
    Ok(())
}

fn cmd_tag(
    model_path: &Path,
    input: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let model = load_model(model_path)?;
    let text = match input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_DATA, format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| Failure::new(EXIT_DATA, format!("cannot read standard input: {e}")))?;
            buffer
        }
    };
    // empty input tags to empty output
    let rendered = if text.trim().is_empty() {
        String::new()
    } else {
        let corpus = parse_corpus(&text)
            .map_err(|e| Failure::new(code_for(&e), e.to_string()))?;
        let labels = model.tag_corpus(&corpus);
        let relabeled = Corpus::new(
            corpus
                .sentences()
                .iter()
                .zip(&labels)
                .map(|(sentence, sentence_labels)| {
                    cmlid::corpus::Sentence::new(
                        sentence
                            .tokens()
                            .iter()
                            .zip(sentence_labels)
                            .map(|(token, &label)| token.with_label(label))
                            .collect(),
                    )
                    .expect("sentence stays non-empty")
                })
                .collect(),
        );
        serialize_corpus(&relabeled)
    };
    match output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::new(EXIT_DATA, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_eval(model_path: &Path, corpus_path: &Path) -> Result<(), Failure> {
    let model = load_model(model_path)?;
    let corpus = read_corpus(corpus_path)?;
    let predictions = model.tag_corpus(&corpus);
    let mut report = score(&corpus, &predictions).map_err(from_core)?;
    report.meta = ReportMeta {
        model: model.kind().to_string(),
        protocol: format!("eval on {}", corpus_path.display()),
        seed: 0,
    };
    println!("{report}");
    println!();
    print!("{}", report.to_records());
    Ok(())
}

fn cmd_cv(options: &TrainOptions, folds: usize, corpus_path: &Path) -> Result<(), Failure> {
    if folds < 2 {
        return Err(Failure::usage("folds must be at least 2"));
    }
    let config = RunConfig::resolve(options)?;
    let corpus = read_corpus(corpus_path)?;
    let spec = config.spec();
    let outcome = cross_validate(&corpus, &spec, folds, config.seed).map_err(from_core)?;
    for report in &outcome.folds {
        println!("{report}");
        println!();
    }
    println!("{}", outcome.pooled);
    println!();
    println!(
        "fold accuracy: {:.4} +/- {:.4} over {} folds",
        outcome.accuracy_mean,
        outcome.accuracy_sd,
        outcome.folds.len()
    );
    println!();
    let mut records = outcome.pooled.to_records();
    for (i, report) in outcome.folds.iter().enumerate() {
        let _ = writeln!(records, "accuracy\tfold{}\t{:.6}", i + 1, report.accuracy);
    }
    print!("{records}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Stats { corpus } => cmd_stats(corpus),
        Command::Train { options, corpus, model_out } => cmd_train(options, corpus, model_out),
        Command::Tag { model, input, output } => {
            cmd_tag(model, input.as_deref(), output.as_deref())
        }
        Command::Eval { model, corpus } => cmd_eval(model, corpus),
        Command::Cv { options, folds, corpus } => cmd_cv(options, *folds, corpus),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
