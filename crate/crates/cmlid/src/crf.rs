//! Linear-chain CRF: feature-template lattices, log-space forward-backward,
//! L2-regularized negative log-likelihood with analytic gradients, full-batch
//! gradient-descent training with backtracking line search, and Viterbi
//! decoding.
//!
//! The previous-label template is realized as the first-order transition
//! structure rather than as observation features, so `y-1=` names never
//! enter the state-feature index. All scores live in log space end to end.
//!
//! Weight layout: one flat vector holding `n_features * 4` state weights
//! (`[feature][label]`) followed by the 16 transition weights
//! (`[prev][next]`). Gradients use the same layout.

use crate::corpus::{Corpus, LangLabel, Sentence};
use crate::dp;
use crate::error::{Error, Result};
use crate::features::{crf_features, is_univ_default, CrfFeatureConfig, FeatureIndex};
use crate::math::logsumexp;
use crate::par;

const N_LABELS: usize = 4;
const N_TRANS: usize = N_LABELS * N_LABELS;
/// Sentences per work chunk during batch evaluation. Chunks are merged in
/// order, so results are identical for any worker count.
const GRAD_CHUNK: usize = 16;

/// Trained linear-chain CRF.
#[derive(Debug, Clone, PartialEq)]
pub struct CrfModel {
    index: FeatureIndex,
    /// `n_features * 4` state weights then 16 transition weights.
    weights: Vec<f64>,
    config: CrfFeatureConfig,
    lambda: f64,
}

impl CrfModel {
    pub fn index(&self) -> &FeatureIndex {
        &self.index
    }

    pub fn config(&self) -> &CrfFeatureConfig {
        &self.config
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_features(&self) -> usize {
        self.index.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn state_weight(&self, feature: u32, label: LangLabel) -> f64 {
        self.weights[feature as usize * N_LABELS + label.index()]
    }

    pub fn transition_weight(&self, prev: LangLabel, next: LangLabel) -> f64 {
        self.weights[self.index.len() * N_LABELS + prev.index() * N_LABELS + next.index()]
    }

    /// Builds a model with explicit weights; meant for tests and the model
    /// file loader.
    pub fn from_parts(
        index: FeatureIndex,
        weights: Vec<f64>,
        config: CrfFeatureConfig,
        lambda: f64,
    ) -> Result<CrfModel> {
        config.validate()?;
        let expected = index.len() * N_LABELS + N_TRANS;
        if weights.len() != expected {
            return Err(Error::ShapeMismatch {
                detail: format!("{} weights for {} features", weights.len(), index.len()),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }
        Ok(CrfModel { index, weights, config, lambda })
    }

    /// State-feature ids active at each position, per the model's own index.
    /// Unseen names are skipped; `y-1=` templates map to transitions instead.
    fn extract_ids(&self, sentence: &Sentence) -> Result<Vec<Vec<u32>>> {
        extract_with_index(sentence, &self.config, &self.index)
    }
}

fn extract_with_index(
    sentence: &Sentence,
    config: &CrfFeatureConfig,
    index: &FeatureIndex,
) -> Result<Vec<Vec<u32>>> {
    (0..sentence.len())
        .map(|i| {
            let names = crf_features(sentence, i, None, config)?;
            let mut ids: Vec<u32> = names
                .iter()
                .filter(|name| !name.starts_with("y-1="))
                .filter_map(|name| index.lookup(name))
                .collect();
            ids.sort_unstable();
            Ok(ids)
        })
        .collect()
}

/// Per-sentence score tables: `state[i][y]` from the matched state features
/// and the 4x4 transition block.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    state: Vec<[f64; 4]>,
    trans: [[f64; 4]; 4],
}

impl Lattice {
    pub fn from_scores(state: Vec<[f64; 4]>, trans: [[f64; 4]; 4]) -> Lattice {
        Lattice { state, trans }
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    pub fn state(&self, position: usize, label: LangLabel) -> f64 {
        self.state[position][label.index()]
    }

    pub fn transition(&self, prev: LangLabel, next: LangLabel) -> f64 {
        self.trans[prev.index()][next.index()]
    }

    /// Score of a full label path through the lattice.
    pub fn path_score(&self, path: &[LangLabel]) -> f64 {
        let indices: Vec<usize> = path.iter().map(|l| l.index()).collect();
        dp::path_score(&self.state, &self.trans, &indices)
    }
}

/// Scores a sentence under the model.
pub fn build_lattice(model: &CrfModel, sentence: &Sentence) -> Result<Lattice> {
    let ids = model.extract_ids(sentence)?;
    Ok(lattice_from_ids(&ids, &model.weights, model.index.len(), model.config.prev_label))
}

fn lattice_from_ids(
    ids_per_position: &[Vec<u32>],
    weights: &[f64],
    n_features: usize,
    use_transitions: bool,
) -> Lattice {
    let state = ids_per_position
        .iter()
        .map(|ids| {
            let mut row = [0.0f64; 4];
            for &f in ids {
                let base = f as usize * N_LABELS;
                for (y, slot) in row.iter_mut().enumerate() {
                    *slot += weights[base + y];
                }
            }
            row
        })
        .collect();
    let trans = if use_transitions {
        let base = n_features * N_LABELS;
        std::array::from_fn(|a| std::array::from_fn(|b| weights[base + a * N_LABELS + b]))
    } else {
        [[0.0; 4]; 4]
    };
    Lattice { state, trans }
}

/// Forward-backward quantities for one lattice.
#[derive(Debug, Clone)]
pub struct ForwardBackward {
    log_alpha: Vec<[f64; 4]>,
    log_beta: Vec<[f64; 4]>,
    log_z: f64,
    node_marginals: Vec<[f64; 4]>,
    edge_marginals: Vec<[[f64; 4]; 4]>,
}

impl ForwardBackward {
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// logZ recomputed from the backward table; agrees with [`Self::log_z`]
    /// up to round-off.
    pub fn log_z_from_beta(&self, lattice: &Lattice) -> f64 {
        let row: Vec<f64> =
            (0..4).map(|y| lattice.state[0][y] + self.log_beta[0][y]).collect();
        logsumexp(&row)
    }

    pub fn log_alpha(&self, position: usize, label: LangLabel) -> f64 {
        self.log_alpha[position][label.index()]
    }

    pub fn log_beta(&self, position: usize, label: LangLabel) -> f64 {
        self.log_beta[position][label.index()]
    }

    /// P(label at position); rows sum to 1.
    pub fn node_marginal(&self, position: usize, label: LangLabel) -> f64 {
        self.node_marginals[position][label.index()]
    }

    /// P(prev at position, next at position + 1).
    pub fn edge_marginal(&self, position: usize, prev: LangLabel, next: LangLabel) -> f64 {
        self.edge_marginals[position][prev.index()][next.index()]
    }

    pub fn len(&self) -> usize {
        self.node_marginals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_marginals.is_empty()
    }
}

/// Log-space forward-backward over a lattice: logZ plus node and edge
/// marginals.
pub fn forward_backward(lattice: &Lattice) -> ForwardBackward {
    let n = lattice.len();
    let state = &lattice.state;
    let trans = &lattice.trans;
    let mut log_alpha = vec![[0.0f64; 4]; n];
    log_alpha[0] = state[0];
    for i in 1..n {
        for y in 0..4 {
            let terms: [f64; 4] =
                std::array::from_fn(|p| log_alpha[i - 1][p] + trans[p][y]);
            log_alpha[i][y] = state[i][y] + logsumexp(&terms);
        }
    }
    let mut log_beta = vec![[0.0f64; 4]; n];
    for i in (0..n - 1).rev() {
        for y in 0..4 {
            let terms: [f64; 4] = std::array::from_fn(|next| {
                trans[y][next] + state[i + 1][next] + log_beta[i + 1][next]
            });
            log_beta[i][y] = logsumexp(&terms);
        }
    }
    let log_z = logsumexp(&log_alpha[n - 1]);
    let node_marginals = (0..n)
        .map(|i| std::array::from_fn(|y| (log_alpha[i][y] + log_beta[i][y] - log_z).exp()))
        .collect();
    let edge_marginals = (0..n.saturating_sub(1))
        .map(|i| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| {
                    (log_alpha[i][a] + trans[a][b] + state[i + 1][b] + log_beta[i + 1][b]
                        - log_z)
                        .exp()
                })
            })
        })
        .collect();
    ForwardBackward { log_alpha, log_beta, log_z, node_marginals, edge_marginals }
}

struct ExtractedSentence {
    feature_ids: Vec<Vec<u32>>,
    gold: Vec<usize>,
}

fn extract_labeled(
    sentences: &[Sentence],
    config: &CrfFeatureConfig,
    index: &FeatureIndex,
) -> Result<Vec<ExtractedSentence>> {
    sentences
        .iter()
        .map(|sentence| {
            let gold = sentence
                .gold_labels()?
                .into_iter()
                .map(|l| l.index())
                .collect();
            Ok(ExtractedSentence {
                feature_ids: extract_with_index(sentence, config, index)?,
                gold,
            })
        })
        .collect()
}

/// Regularized negative log-likelihood and its gradient over a labeled
/// batch, in the model's weight layout.
pub fn nll_and_gradient(model: &CrfModel, batch: &[Sentence]) -> Result<(f64, Vec<f64>)> {
    let data = extract_labeled(batch, &model.config, &model.index)?;
    Ok(batch_nll_grad(
        &model.weights,
        model.index.len(),
        model.config.prev_label,
        &data,
        model.lambda,
    ))
}

fn batch_nll_grad(
    weights: &[f64],
    n_features: usize,
    use_transitions: bool,
    data: &[ExtractedSentence],
    lambda: f64,
) -> (f64, Vec<f64>) {
    let trans_base = n_features * N_LABELS;
    let parts = par::map_chunks(data, GRAD_CHUNK, |chunk| {
        let mut nll = 0.0;
        let mut grad = vec![0.0f64; weights.len()];
        for sentence in chunk {
            let lattice =
                lattice_from_ids(&sentence.feature_ids, weights, n_features, use_transitions);
            let fb = forward_backward(&lattice);
            let gold_indices = &sentence.gold;
            let mut gold_score = 0.0;
            for (i, &y) in gold_indices.iter().enumerate() {
                gold_score += lattice.state[i][y];
                if i > 0 {
                    gold_score += lattice.trans[gold_indices[i - 1]][y];
                }
            }
            nll += fb.log_z - gold_score;
            for (i, ids) in sentence.feature_ids.iter().enumerate() {
                let gold = gold_indices[i];
                for &f in ids {
                    let base = f as usize * N_LABELS;
                    for y in 0..4 {
                        grad[base + y] += fb.node_marginals[i][y];
                    }
                    grad[base + gold] -= 1.0;
                }
            }
            if use_transitions {
                for i in 0..sentence.feature_ids.len().saturating_sub(1) {
                    for a in 0..4 {
                        for b in 0..4 {
                            grad[trans_base + a * N_LABELS + b] +=
                                fb.edge_marginals[i][a][b];
                        }
                    }
                    grad[trans_base + gold_indices[i] * N_LABELS + gold_indices[i + 1]] -= 1.0;
                }
            }
        }
        (nll, grad)
    });
    let mut nll = 0.0;
    let mut grad = vec![0.0f64; weights.len()];
    for (part_nll, part_grad) in parts {
        nll += part_nll;
        for (total, part) in grad.iter_mut().zip(&part_grad) {
            *total += part;
        }
    }
    if lambda > 0.0 {
        let mut norm_sq = 0.0;
        for (g, &w) in grad.iter_mut().zip(weights) {
            norm_sq += w * w;
            *g += lambda * w;
        }
        nll += lambda / 2.0 * norm_sq;
    }
    (nll, grad)
}

fn batch_nll(
    weights: &[f64],
    n_features: usize,
    use_transitions: bool,
    data: &[ExtractedSentence],
    lambda: f64,
) -> f64 {
    let parts = par::map_chunks(data, GRAD_CHUNK, |chunk| {
        let mut nll = 0.0;
        for sentence in chunk {
            let lattice =
                lattice_from_ids(&sentence.feature_ids, weights, n_features, use_transitions);
            let fb = forward_backward(&lattice);
            let gold = &sentence.gold;
            let mut gold_score = 0.0;
            for (i, &y) in gold.iter().enumerate() {
                gold_score += lattice.state[i][y];
                if i > 0 {
                    gold_score += lattice.trans[gold[i - 1]][y];
                }
            }
            nll += fb.log_z - gold_score;
        }
        nll
    });
    let mut nll: f64 = parts.into_iter().sum();
    if lambda > 0.0 {
        nll += lambda / 2.0 * weights.iter().map(|w| w * w).sum::<f64>();
    }
    nll
}

/// Training summary returned alongside the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainStats {
    pub iterations: usize,
    pub final_nll: f64,
    pub converged: bool,
}

/// Trains from zero weights by full-batch gradient descent. Each iteration
/// starts a backtracking line search at step 1.0 and halves until the
/// objective strictly decreases; training stops at `max_iters`, when the
/// objective change falls below `tol`, or when no decrease is found.
pub fn train_crf(
    corpus: &Corpus,
    config: CrfFeatureConfig,
    lambda: f64,
    max_iters: usize,
    tol: f64,
) -> Result<CrfModel> {
    train_crf_with_stats(corpus, config, lambda, max_iters, tol).map(|(model, _)| model)
}

/// [`train_crf`] plus iteration statistics.
pub fn train_crf_with_stats(
    corpus: &Corpus,
    config: CrfFeatureConfig,
    lambda: f64,
    max_iters: usize,
    tol: f64,
) -> Result<(CrfModel, TrainStats)> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidSmoothing(lambda));
    }
    // two passes: count feature occurrences, then register those that meet
    // the min-count threshold, in encounter order
    let mut all_names: Vec<Vec<Vec<String>>> = Vec::with_capacity(corpus.sentence_count());
    for sentence in corpus.sentences() {
        let mut per_sentence = Vec::with_capacity(sentence.len());
        for i in 0..sentence.len() {
            let names: Vec<String> = crf_features(sentence, i, None, &config)?
                .into_iter()
                .filter(|name| !name.starts_with("y-1="))
                .collect();
            per_sentence.push(names);
        }
        all_names.push(per_sentence);
    }
    let mut index = FeatureIndex::new();
    if config.min_count > 1 {
        let mut counts: std::collections::HashMap<&str, u32> = std::collections::HashMap::new();
        for names in all_names.iter().flatten().flatten() {
            *counts.entry(names.as_str()).or_insert(0) += 1;
        }
        for name in all_names.iter().flatten().flatten() {
            if counts[name.as_str()] >= config.min_count && index.lookup(name).is_none() {
                index.intern(name);
            }
        }
    } else {
        for name in all_names.iter().flatten().flatten() {
            index.intern(name);
        }
    }
    index.freeze();
    let mut data = Vec::with_capacity(corpus.sentence_count());
    for (sentence, names) in corpus.sentences().iter().zip(&all_names) {
        let gold: Vec<usize> = sentence
            .gold_labels()?
            .into_iter()
            .map(|l| l.index())
            .collect();
        let feature_ids = names
            .iter()
            .map(|position| {
                let mut ids: Vec<u32> =
                    position.iter().filter_map(|n| index.lookup(n)).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        data.push(ExtractedSentence { feature_ids, gold });
    }
    drop(all_names);

    let n_features = index.len();
    let use_transitions = config.prev_label;
    let mut weights = vec![0.0f64; n_features * N_LABELS + N_TRANS];
    let (mut nll, mut grad) =
        batch_nll_grad(&weights, n_features, use_transitions, &data, lambda);
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..max_iters {
        if !nll.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        let mut step = 1.0f64;
        let mut candidate: Option<(Vec<f64>, f64)> = None;
        while step > 1e-20 {
            let trial: Vec<f64> =
                weights.iter().zip(&grad).map(|(w, g)| w - step * g).collect();
            let trial_nll = batch_nll(&trial, n_features, use_transitions, &data, lambda);
            if trial_nll < nll {
                candidate = Some((trial, trial_nll));
                break;
            }
            step /= 2.0;
        }
        let Some((new_weights, new_nll)) = candidate else {
            converged = true; // no descent step found
            break;
        };
        iterations += 1;
        let delta = nll - new_nll;
        weights = new_weights;
        nll = new_nll;
        if delta.abs() < tol {
            converged = true;
            break;
        }
        (nll, grad) = batch_nll_grad(&weights, n_features, use_transitions, &data, lambda);
    }
    let model = CrfModel { index, weights, config, lambda };
    Ok((model, TrainStats { iterations, final_nll: nll, converged }))
}

/// Raw Viterbi path and score, before the UNIV override.
pub fn decode_path(model: &CrfModel, sentence: &Sentence) -> Result<(Vec<LangLabel>, f64)> {
    let lattice = build_lattice(model, sentence)?;
    let (path, score) = dp::max_sum_path(&lattice.state, &lattice.trans);
    Ok((path.into_iter().map(LangLabel::from_index).collect(), score))
}

/// The full CRF tagging path: Viterbi with the left-to-right label-order
/// tie-break, then the URL/smiley UNIV override.
pub fn decode_crf(model: &CrfModel, sentence: &Sentence) -> Result<Vec<LangLabel>> {
    let (mut labels, _) = decode_path(model, sentence)?;
    for (label, token) in labels.iter_mut().zip(sentence.tokens()) {
        if is_univ_default(token.surface()) {
            *label = LangLabel::Univ;
        }
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, Token};

    fn sentence(words: &[&str]) -> Sentence {
        Sentence::new(words.iter().map(|w| Token::new(*w, "NN", None).unwrap()).collect()).unwrap()
    }

    fn zero_model(corpus: &Corpus) -> CrfModel {
        train_crf(corpus, CrfFeatureConfig::default(), 0.0, 0, 1e-6).unwrap()
    }

    #[test]
    fn zero_weights_give_zero_scores() {
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tEN\n").unwrap();
        let model = zero_model(&corpus);
        let lattice = build_lattice(&model, &corpus.sentences()[0]).unwrap();
        for i in 0..2 {
            for y in LangLabel::ALL {
                assert_eq!(lattice.state(i, y), 0.0);
            }
        }
        for a in LangLabel::ALL {
            for b in LangLabel::ALL {
                assert_eq!(lattice.transition(a, b), 0.0);
            }
        }
    }

    #[test]
    fn single_feature_scores_one_cell() {
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        let model = zero_model(&corpus);
        let feature = model.index().lookup("w0=a").unwrap();
        let mut weights = model.weights().to_vec();
        weights[feature as usize * 4 + LangLabel::Te.index()] = 2.5;
        let modified = CrfModel::from_parts(
            model.index().clone(),
            weights,
            model.config().clone(),
            0.0,
        )
        .unwrap();
        let lattice = build_lattice(&modified, &corpus.sentences()[0]).unwrap();
        assert_eq!(lattice.state(0, LangLabel::Te), 2.5);
        assert_eq!(lattice.state(0, LangLabel::En), 0.0);
    }

    #[test]
    fn scores_are_linear_in_weights() {
        let corpus = parse_corpus("aa\tN\tTE\nbb\tN\tEN\ncc\tN\tNE\n").unwrap();
        let trained =
            train_crf(&corpus, CrfFeatureConfig::default(), 0.01, 10, 1e-9).unwrap();
        let doubled = CrfModel::from_parts(
            trained.index().clone(),
            trained.weights().iter().map(|w| 2.0 * w).collect(),
            trained.config().clone(),
            trained.lambda(),
        )
        .unwrap();
        let s = &corpus.sentences()[0];
        let base = build_lattice(&trained, s).unwrap();
        let double = build_lattice(&doubled, s).unwrap();
        for i in 0..s.len() {
            for y in LangLabel::ALL {
                assert!((2.0 * base.state(i, y) - double.state(i, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_log_partition_small_cases() {
        let corpus = parse_corpus("a\tN\tTE\n\na\tN\tTE\nb\tN\tEN\n").unwrap();
        let model = zero_model(&corpus);
        let one = build_lattice(&model, &corpus.sentences()[0]).unwrap();
        let fb1 = forward_backward(&one);
        assert!((fb1.log_z() - 4f64.ln()).abs() < 1e-12);
        let two = build_lattice(&model, &corpus.sentences()[1]).unwrap();
        let fb2 = forward_backward(&two);
        assert!((fb2.log_z() - 16f64.ln()).abs() < 1e-12);
        for i in 0..2 {
            for y in LangLabel::ALL {
                assert!((fb2.node_marginal(i, y) - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_weight_nll_is_log4_per_token() {
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        let model = zero_model(&corpus);
        let (nll, _) = nll_and_gradient(&model, corpus.sentences()).unwrap();
        assert!((nll - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn transition_gradient_at_zero_weights() {
        // two-token sentence, uniform model: every edge marginal is 1/16,
        // so the gradient for the gold transition is 1/16 - 1 and for any
        // other transition 1/16.
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tEN\n").unwrap();
        let model = zero_model(&corpus);
        let (_, grad) = nll_and_gradient(&model, corpus.sentences()).unwrap();
        let base = model.n_features() * 4;
        let gold = base + LangLabel::Te.index() * 4 + LangLabel::En.index();
        assert!((grad[gold] - (1.0 / 16.0 - 1.0)).abs() < 1e-12);
        let other = base + LangLabel::Ne.index() * 4 + LangLabel::Univ.index();
        assert!((grad[other] - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_beta_agree_on_log_z() {
        let corpus =
            parse_corpus("aa\tN\tTE\nbb\tV\tEN\ncc\tN\tNE\n\ndd\tN\tUNIV\nee\tV\tTE\n").unwrap();
        let model = train_crf(&corpus, CrfFeatureConfig::default(), 0.1, 15, 1e-9).unwrap();
        for s in corpus.sentences() {
            let lattice = build_lattice(&model, s).unwrap();
            let fb = forward_backward(&lattice);
            assert!((fb.log_z() - fb.log_z_from_beta(&lattice)).abs() < 1e-8);
            for i in 0..s.len() {
                let sum: f64 =
                    LangLabel::ALL.iter().map(|&y| fb.node_marginal(i, y)).sum();
                assert!((sum - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn training_objective_is_non_increasing() {
        let corpus = parse_corpus(
            "nuvvu\tPRP\tTE\nexams\tNNS\tEN\n\nhi\tUH\tEN\nRavi\tNNP\tNE\n\nakkada\tRB\tTE\n",
        )
        .unwrap();
        // the objective after k+1 accepted iterations can never exceed the
        // objective after k (line-search contract)
        let nlls: Vec<f64> = (0..6)
            .map(|iters| {
                train_crf_with_stats(&corpus, CrfFeatureConfig::default(), 0.01, iters, 0.0)
                    .unwrap()
                    .1
                    .final_nll
            })
            .collect();
        for pair in nlls.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "nll increased: {pair:?}");
        }
    }

    #[test]
    fn separable_toy_corpus_trains_to_perfect_accuracy() {
        // each label has a unique word, so w0 features separate perfectly
        let text = "tel\tN\tTE\neng\tN\tEN\n\nent\tN\tNE\nuni\tN\tUNIV\n\n\
                    tel\tN\tTE\nuni\tN\tUNIV\n\neng\tN\tEN\nent\tN\tNE\n";
        let corpus = parse_corpus(text).unwrap();
        let model =
            train_crf(&corpus, CrfFeatureConfig::default(), 1e-3, 200, 1e-9).unwrap();
        for s in corpus.sentences() {
            let decoded = decode_crf(&model, s).unwrap();
            let gold = s.gold_labels().unwrap();
            assert_eq!(decoded, gold);
        }
    }

    #[test]
    fn huge_lambda_shrinks_weights() {
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tEN\n\nc\tN\tNE\n").unwrap();
        let model = train_crf(&corpus, CrfFeatureConfig::default(), 1e6, 50, 1e-12).unwrap();
        let norm: f64 = model.weights().iter().map(|w| w * w).sum::<f64>().sqrt();
        assert!(norm < 1e-2, "weight norm {norm}");
    }

    #[test]
    fn zero_model_decodes_to_first_label_plus_override() {
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        let model = zero_model(&corpus);
        let s = sentence(&["plain", "http://x.in", ":)"]);
        let decoded = decode_crf(&model, &s).unwrap();
        assert_eq!(decoded, vec![LangLabel::Te, LangLabel::Univ, LangLabel::Univ]);
    }

    #[test]
    fn decoded_path_matches_independent_enumeration() {
        let corpus = parse_corpus(
            "nuvvu\tPRP\tTE\nexams\tNNS\tEN\nRavi\tNNP\tNE\n\n\
             akkada\tRB\tTE\nparty\tNN\tEN\n.\t.\tUNIV\n\n\
             hi\tUH\tEN\nbaaga\tRB\tTE\n",
        )
        .unwrap();
        let model = train_crf(&corpus, CrfFeatureConfig::default(), 0.05, 40, 1e-9).unwrap();
        for s in corpus.sentences() {
            let lattice = build_lattice(&model, s).unwrap();
            // test-local enumeration from the public lattice accessors
            let n = s.len();
            let mut best: Option<(Vec<LangLabel>, f64)> = None;
            for code in 0..4usize.pow(n as u32) {
                let path: Vec<LangLabel> = (0..n)
                    .map(|pos| LangLabel::from_index((code >> (2 * (n - 1 - pos))) & 3))
                    .collect();
                let mut score = lattice.state(n - 1, path[n - 1]);
                for i in (0..n - 1).rev() {
                    score = lattice.state(i, path[i])
                        + (lattice.transition(path[i], path[i + 1]) + score);
                }
                if best.as_ref().is_none_or(|(_, s)| score > *s) {
                    best = Some((path, score));
                }
            }
            let (expected_path, expected_score) = best.unwrap();
            let (decoded, score) = decode_path(&model, s).unwrap();
            assert_eq!(decoded, expected_path);
            assert_eq!(score, expected_score);
        }
    }

    #[test]
    fn gradient_requires_gold_labels() {
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        let model = zero_model(&corpus);
        let unlabeled = sentence(&["a"]);
        assert!(matches!(
            nll_and_gradient(&model, &[unlabeled]),
            Err(Error::UnlabeledToken)
        ));
    }

    #[test]
    fn decoding_is_invariant_to_constant_state_shift() {
        let corpus = parse_corpus("aa\tN\tTE\nbb\tN\tEN\ncc\tN\tNE\n").unwrap();
        let model = train_crf(&corpus, CrfFeatureConfig::default(), 0.1, 20, 1e-9).unwrap();
        let s = &corpus.sentences()[0];
        let lattice = build_lattice(&model, s).unwrap();
        let (baseline, _) = dp::max_sum_path(&lattice.state, &lattice.trans);
        let mut shifted = lattice.state.clone();
        for slot in &mut shifted[1] {
            *slot += 11.25;
        }
        let (moved, _) = dp::max_sum_path(&shifted, &lattice.trans);
        assert_eq!(baseline, moved);
    }
}
