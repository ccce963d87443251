//! Scoring and experiment harness: confusion matrices, per-label
//! precision/recall/F1 with macro and support-weighted averages, k-fold
//! cross-validation, and side-by-side model comparison.
//!
//! Zero-denominator metrics report 0 but are flagged undefined and excluded
//! from macro averaging. Cross-validation pools confusion matrices across
//! folds (micro aggregation) and also reports per-fold accuracy mean and
//! sample standard deviation.

use std::fmt;

use crate::corpus::{kfold, split, Corpus, LangLabel};
use crate::error::{Error, Result};
use crate::tagger::ModelSpec;

/// 4x4 count table indexed (gold, predicted).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: [[u64; 4]; 4],
}

impl ConfusionMatrix {
    pub fn new() -> ConfusionMatrix {
        ConfusionMatrix::default()
    }

    pub fn add(&mut self, gold: LangLabel, predicted: LangLabel) {
        self.counts[gold.index()][predicted.index()] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for g in 0..4 {
            for p in 0..4 {
                self.counts[g][p] += other.counts[g][p];
            }
        }
    }

    pub fn count(&self, gold: LangLabel, predicted: LangLabel) -> u64 {
        self.counts[gold.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..4).map(|i| self.counts[i][i]).sum()
    }

    /// Tokens whose gold label is `label` (row sum).
    pub fn gold_support(&self, label: LangLabel) -> u64 {
        self.counts[label.index()].iter().sum()
    }

    /// Tokens predicted as `label` (column sum).
    pub fn predicted_support(&self, label: LangLabel) -> u64 {
        (0..4).map(|g| self.counts[g][label.index()]).sum()
    }
}

/// Precision/recall/F1 for one label; `undefined` metrics had a zero
/// denominator and are reported as 0.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LabelMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    pub precision_defined: bool,
    pub recall_defined: bool,
}

impl LabelMetrics {
    pub fn f1_defined(&self) -> bool {
        self.precision_defined && self.recall_defined
    }
}

/// Report metadata: which model produced the predictions and under which
/// protocol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportMeta {
    pub model: String,
    pub protocol: String,
    pub seed: u64,
}

/// Confusion matrix plus derived per-label and aggregate metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    pub per_label: [LabelMetrics; 4],
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub accuracy: f64,
    pub meta: ReportMeta,
}

impl EvalReport {
    pub fn from_confusion(confusion: ConfusionMatrix, meta: ReportMeta) -> Result<EvalReport> {
        let total = confusion.total();
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        let per_label: [LabelMetrics; 4] = std::array::from_fn(|i| {
            let label = LangLabel::from_index(i);
            let tp = confusion.count(label, label) as f64;
            let gold = confusion.gold_support(label);
            let predicted = confusion.predicted_support(label);
            let precision_defined = predicted > 0;
            let recall_defined = gold > 0;
            let precision = if precision_defined { tp / predicted as f64 } else { 0.0 };
            let recall = if recall_defined { tp / gold as f64 } else { 0.0 };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            LabelMetrics { precision, recall, f1, support: gold, precision_defined, recall_defined }
        });
        let macro_avg = |values: Vec<f64>| {
            if values.is_empty() {
                0.0
            } else {
                values.iter().sum::<f64>() / values.len() as f64
            }
        };
        let macro_precision = macro_avg(
            per_label.iter().filter(|m| m.precision_defined).map(|m| m.precision).collect(),
        );
        let macro_recall =
            macro_avg(per_label.iter().filter(|m| m.recall_defined).map(|m| m.recall).collect());
        let macro_f1 =
            macro_avg(per_label.iter().filter(|m| m.f1_defined()).map(|m| m.f1).collect());
        let weighted = |pick: fn(&LabelMetrics) -> f64| {
            per_label.iter().map(|m| m.support as f64 * pick(m)).sum::<f64>() / total as f64
        };
        Ok(EvalReport {
            accuracy: confusion.correct() as f64 / total as f64,
            weighted_precision: weighted(|m| m.precision),
            weighted_recall: weighted(|m| m.recall),
            weighted_f1: weighted(|m| m.f1),
            macro_precision,
            macro_recall,
            macro_f1,
            per_label,
            confusion,
            meta,
        })
    }

    pub fn metrics(&self, label: LangLabel) -> &LabelMetrics {
        &self.per_label[label.index()]
    }

    pub fn total_tokens(&self) -> u64 {
        self.confusion.total()
    }

    /// Line-oriented machine-readable form: one `metric<TAB>label<TAB>value`
    /// record per line.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let mut push = |metric: &str, label: &str, value: String| {
            out.push_str(metric);
            out.push('\t');
            out.push_str(label);
            out.push('\t');
            out.push_str(&value);
            out.push('\n');
        };
        push("tokens", "-", self.total_tokens().to_string());
        push("accuracy", "-", format!("{:.6}", self.accuracy));
        for label in LangLabel::ALL {
            let m = self.metrics(label);
            let fmt = |v: f64, defined: bool| {
                if defined {
                    format!("{v:.6}")
                } else {
                    "undef".to_string()
                }
            };
            push("precision", label.as_str(), fmt(m.precision, m.precision_defined));
            push("recall", label.as_str(), fmt(m.recall, m.recall_defined));
            push("f1", label.as_str(), fmt(m.f1, m.f1_defined()));
            push("support", label.as_str(), m.support.to_string());
        }
        push("precision", "macro", format!("{:.6}", self.macro_precision));
        push("recall", "macro", format!("{:.6}", self.macro_recall));
        push("f1", "macro", format!("{:.6}", self.macro_f1));
        push("precision", "weighted", format!("{:.6}", self.weighted_precision));
        push("recall", "weighted", format!("{:.6}", self.weighted_recall));
        push("f1", "weighted", format!("{:.6}", self.weighted_f1));
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14} {:>10} {:>10} {:>10} {:>9}", "Label", "Precision", "Recall", "F1-Score", "Support")?;
        let cell = |v: f64, defined: bool| {
            if defined {
                format!("{v:.4}")
            } else {
                "-".to_string()
            }
        };
        for label in LangLabel::ALL {
            let m = self.metrics(label);
            writeln!(
                f,
                "{:<14} {:>10} {:>10} {:>10} {:>9}",
                label.as_str(),
                cell(m.precision, m.precision_defined),
                cell(m.recall, m.recall_defined),
                cell(m.f1, m.f1_defined()),
                m.support
            )?;
        }
        writeln!(
            f,
            "{:<14} {:>10.4} {:>10.4} {:>10.4} {:>9}",
            "Macro avg", self.macro_precision, self.macro_recall, self.macro_f1, ""
        )?;
        writeln!(
            f,
            "{:<14} {:>10.4} {:>10.4} {:>10.4} {:>9}",
            "Weighted avg",
            self.weighted_precision,
            self.weighted_recall,
            self.weighted_f1,
            self.total_tokens()
        )?;
        writeln!(f, "Accuracy: {:.4} ({} tokens)", self.accuracy, self.total_tokens())?;
        write!(
            f,
            "Model: {} | Protocol: {} | Seed: {}",
            self.meta.model, self.meta.protocol, self.meta.seed
        )
    }
}

/// Scores predicted label sequences against a fully labeled corpus.
pub fn score(gold: &Corpus, predicted: &[Vec<LangLabel>]) -> Result<EvalReport> {
    if gold.sentence_count() != predicted.len() {
        return Err(Error::ShapeMismatch {
            detail: format!(
                "{} gold sentences vs {} predicted sequences",
                gold.sentence_count(),
                predicted.len()
            ),
        });
    }
    let mut confusion = ConfusionMatrix::new();
    for (sentence, labels) in gold.sentences().iter().zip(predicted) {
        if sentence.len() != labels.len() {
            return Err(Error::ShapeMismatch {
                detail: format!(
                    "sentence of {} tokens vs {} predictions",
                    sentence.len(),
                    labels.len()
                ),
            });
        }
        for (token, &predicted_label) in sentence.tokens().iter().zip(labels) {
            let gold_label = token.label().ok_or(Error::UnlabeledToken)?;
            confusion.add(gold_label, predicted_label);
        }
    }
    EvalReport::from_confusion(confusion, ReportMeta::default())
}

/// Cross-validation outcome: per-fold reports plus the pooled report and
/// per-fold accuracy spread.
#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub folds: Vec<EvalReport>,
    pub pooled: EvalReport,
    pub accuracy_mean: f64,
    pub accuracy_sd: f64,
}

/// Trains and scores the backend on each of the k folds.
pub fn cross_validate(corpus: &Corpus, spec: &ModelSpec, k: usize, seed: u64) -> Result<CvOutcome> {
    let folds = kfold(corpus, k, seed)?;
    let mut reports = Vec::with_capacity(k);
    for (i, (train, test)) in folds.iter().enumerate() {
        let model = spec.train(train)?;
        let predictions = model.tag_corpus(test);
        let mut report = score(test, &predictions)?;
        report.meta = ReportMeta {
            model: spec.name().to_string(),
            protocol: format!("fold {}/{k} of {k}-fold cv", i + 1),
            seed,
        };
        reports.push(report);
    }
    let mut pooled_confusion = ConfusionMatrix::new();
    for report in &reports {
        pooled_confusion.merge(&report.confusion);
    }
    let pooled = EvalReport::from_confusion(
        pooled_confusion,
        ReportMeta {
            model: spec.name().to_string(),
            protocol: format!("{k}-fold cv (pooled)"),
            seed,
        },
    )?;
    let accuracies: Vec<f64> = reports.iter().map(|r| r.accuracy).collect();
    let mean = accuracies.iter().sum::<f64>() / k as f64;
    let variance =
        accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k as f64 - 1.0);
    Ok(CvOutcome { folds: reports, pooled, accuracy_mean: mean, accuracy_sd: variance.sqrt() })
}

/// Evaluation protocol for [`compare_models`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Hold out `test_fraction` of sentences.
    Split { test_fraction: f64 },
    /// k-fold cross-validation, pooled accuracy.
    CrossValidation { k: usize },
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::Split { test_fraction } => write!(f, "{:.0}/{:.0} split", 100.0 * (1.0 - test_fraction), 100.0 * test_fraction),
            Protocol::CrossValidation { k } => write!(f, "{k}-fold cv"),
        }
    }
}

/// Accuracy table over several backends under one protocol and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<(String, f64)>,
    pub protocol: String,
    pub seed: u64,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>12}", "Model", "Accuracy(%)")?;
        for (name, accuracy) in &self.rows {
            writeln!(f, "{:<28} {:>12.2}", name, 100.0 * accuracy)?;
        }
        write!(f, "Protocol: {} | Seed: {}", self.protocol, self.seed)
    }
}

/// Runs every spec under the identical protocol and seed; rows keep spec
/// order.
pub fn compare_models(
    corpus: &Corpus,
    specs: &[ModelSpec],
    protocol: Protocol,
    seed: u64,
) -> Result<Comparison> {
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let accuracy = match protocol {
            Protocol::Split { test_fraction } => {
                let (train, test) = split(corpus, test_fraction, seed)?;
                let model = spec.train(&train)?;
                let predictions = model.tag_corpus(&test);
                score(&test, &predictions)?.accuracy
            }
            Protocol::CrossValidation { k } => {
                cross_validate(corpus, spec, k, seed)?.pooled.accuracy
            }
        };
        rows.push((spec.display_name(), accuracy));
    }
    Ok(Comparison { rows, protocol: protocol.to_string(), seed })
}
