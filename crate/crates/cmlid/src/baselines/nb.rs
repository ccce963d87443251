//! Multinomial Naive Bayes with Lidstone smoothing. Real-valued TF-IDF
//! weights enter the likelihood as exponents, the usual convention when
//! feeding TF-IDF into a multinomial model.

use crate::corpus::LangLabel;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::math::LOG_ZERO;

/// Trained Naive Bayes parameters: class log-priors and a per-class
/// log-likelihood table over the feature vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    alpha: f64,
    log_priors: [f64; 4],
    /// `log_likelihood[feature][class]`
    log_likelihood: Vec<[f64; 4]>,
}

impl NbModel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_prior(&self, label: LangLabel) -> f64 {
        self.log_priors[label.index()]
    }

    pub fn log_likelihood(&self, feature: u32, label: LangLabel) -> Option<f64> {
        self.log_likelihood.get(feature as usize).map(|row| row[label.index()])
    }

    pub fn vocab_size(&self) -> usize {
        self.log_likelihood.len()
    }

    pub(crate) fn from_parts(
        alpha: f64,
        log_priors: [f64; 4],
        log_likelihood: Vec<[f64; 4]>,
    ) -> NbModel {
        NbModel { alpha, log_priors, log_likelihood }
    }

    pub(crate) fn log_priors(&self) -> &[f64; 4] {
        &self.log_priors
    }

    pub(crate) fn likelihood_table(&self) -> &[[f64; 4]] {
        &self.log_likelihood
    }
}

/// Trains on parallel slices of vectors and labels; the vocabulary size is
/// taken as one past the highest feature id present.
pub fn train_nb(vectors: &[SparseVector], labels: &[LangLabel], alpha: f64) -> Result<NbModel> {
    let vocab = vectors
        .iter()
        .flat_map(SparseVector::iter)
        .map(|(id, _)| id as usize + 1)
        .max()
        .unwrap_or(0);
    train_nb_with_vocab(vectors, labels, alpha, vocab)
}

/// [`train_nb`] with an explicit vocabulary size (the fitted feature-index
/// length), so that features absent from the training vectors still get a
/// smoothed likelihood row.
pub fn train_nb_with_vocab(
    vectors: &[SparseVector],
    labels: &[LangLabel],
    alpha: f64,
    vocab_size: usize,
) -> Result<NbModel> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch { vectors: vectors.len(), labels: labels.len() });
    }
    if vectors.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if alpha <= 0.0 || alpha.is_nan() {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    let mut class_counts = [0u64; 4];
    let mut weight_sums = vec![[0.0f64; 4]; vocab_size];
    let mut class_totals = [0.0f64; 4];
    for (vector, &label) in vectors.iter().zip(labels) {
        let c = label.index();
        class_counts[c] += 1;
        for (id, w) in vector.iter() {
            let id = id as usize;
            if id >= vocab_size {
                continue; // overflow ids from unseen-term smoothing
            }
            weight_sums[id][c] += w;
            class_totals[c] += w;
        }
    }
    let n = vectors.len() as f64;
    let log_priors = std::array::from_fn(|c| {
        if class_counts[c] > 0 {
            (class_counts[c] as f64 / n).ln()
        } else {
            LOG_ZERO
        }
    });
    let mut log_likelihood = vec![[0.0f64; 4]; vocab_size];
    for c in 0..4 {
        let denom = alpha * vocab_size as f64 + class_totals[c];
        for (row, sums) in log_likelihood.iter_mut().zip(&weight_sums) {
            row[c] = ((alpha + sums[c]) / denom).ln();
        }
    }
    Ok(NbModel { alpha, log_priors, log_likelihood })
}

/// Returns the argmax label (ties broken in label order) and the softmax
/// posterior over all four labels. Feature ids outside the model's
/// vocabulary are skipped.
pub fn predict_nb(model: &NbModel, vector: &SparseVector) -> (LangLabel, [f64; 4]) {
    let mut scores = *model.log_priors();
    for (id, w) in vector.iter() {
        if let Some(row) = model.likelihood_table().get(id as usize) {
            for c in 0..4 {
                scores[c] += w * row[c];
            }
        }
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: [f64; 4] = std::array::from_fn(|c| (scores[c] - max).exp());
    let z: f64 = exps.iter().sum();
    let posteriors = std::array::from_fn(|c| exps[c] / z);
    let mut best = 0;
    for c in 1..4 {
        if scores[c] > scores[best] {
            best = c;
        }
    }
    (LangLabel::from_index(best), posteriors)
}
