//! First-order hidden Markov tagger: add-k maximum-likelihood estimation,
//! Viterbi decoding, and an exhaustive-search oracle for small sentences.
//!
//! Transitions are estimated as pair counts over previous-tag counts, with
//! a synthetic START state counted before each sentence's first token.
//! Emissions reserve one table slot per tag for unknown words.

use std::collections::HashMap;

use crate::corpus::{Corpus, LangLabel, Sentence};
use crate::dp;
use crate::error::{Error, Result};
use crate::features::is_univ_default;

/// Longest sentence [`exhaustive_decode`] accepts (4^n paths).
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Trained HMM parameters in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct HmmModel {
    words: Vec<String>,
    word_ids: HashMap<String, u32>,
    /// log P(first tag | START)
    start_log: [f64; 4],
    /// log P(tag | previous tag), indexed `[prev][next]`
    trans_log: [[f64; 4]; 4],
    /// log P(word | tag), indexed `[word][tag]`; the last row is the
    /// shared unknown-word slot.
    emit_log: Vec<[f64; 4]>,
    k_trans: f64,
    k_emit: f64,
}

impl HmmModel {
    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn k_trans(&self) -> f64 {
        self.k_trans
    }

    pub fn k_emit(&self) -> f64 {
        self.k_emit
    }

    pub fn start_log(&self, tag: LangLabel) -> f64 {
        self.start_log[tag.index()]
    }

    pub fn transition_log(&self, prev: LangLabel, next: LangLabel) -> f64 {
        self.trans_log[prev.index()][next.index()]
    }

    /// Emission log-probability; unknown words use the reserved UNK slot.
    pub fn emission_log(&self, word: &str, tag: LangLabel) -> f64 {
        let row = match self.word_ids.get(word) {
            Some(&id) => id as usize,
            None => self.words.len(),
        };
        self.emit_log[row][tag.index()]
    }

    /// The shared unknown-word emission slot.
    pub fn unknown_emission_log(&self, tag: LangLabel) -> f64 {
        self.emit_log[self.words.len()][tag.index()]
    }

    /// Builds a model from explicit tables, checking that each conditional
    /// distribution is properly normalized.
    pub fn from_tables(
        words: Vec<String>,
        start_log: [f64; 4],
        trans_log: [[f64; 4]; 4],
        emit_log: Vec<[f64; 4]>,
        k_trans: f64,
        k_emit: f64,
    ) -> Result<HmmModel> {
        if emit_log.len() != words.len() + 1 {
            return Err(Error::InvalidProbabilityTable(format!(
                "emission table has {} rows for {} words",
                emit_log.len(),
                words.len()
            )));
        }
        check_row("start", &start_log)?;
        for (i, row) in trans_log.iter().enumerate() {
            check_row(&format!("transition[{i}]"), row)?;
        }
        for tag in 0..4 {
            let sum: f64 = emit_log.iter().map(|row| row[tag].exp()).sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidProbabilityTable(format!(
                    "emission column {tag} sums to {sum}"
                )));
            }
        }
        let word_ids =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Ok(HmmModel { words, word_ids, start_log, trans_log, emit_log, k_trans, k_emit })
    }

    /// Node/edge lattice for the decoders: emissions on nodes with the
    /// start distribution folded into position 0, transitions on edges.
    fn lattice(&self, sentence: &Sentence) -> Vec<[f64; 4]> {
        sentence
            .tokens()
            .iter()
            .enumerate()
            .map(|(i, token)| {
                std::array::from_fn(|tag| {
                    let emit = self.emission_log(token.surface(), LangLabel::from_index(tag));
                    if i == 0 {
                        self.start_log[tag] + emit
                    } else {
                        emit
                    }
                })
            })
            .collect()
    }
}

fn check_row(what: &str, row: &[f64; 4]) -> Result<()> {
    let sum: f64 = row.iter().map(|v| v.exp()).sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidProbabilityTable(format!("{what} row sums to {sum}")));
    }
    Ok(())
}

/// Maximum-likelihood training with add-k smoothing on both tables.
pub fn train_hmm(corpus: &Corpus, k_trans: f64, k_emit: f64) -> Result<HmmModel> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    for k in [k_trans, k_emit] {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidSmoothing(k));
        }
    }
    let mut words: Vec<String> = Vec::new();
    let mut word_ids: HashMap<String, u32> = HashMap::new();
    let mut start_counts = [0u64; 4];
    let mut pair_counts = [[0u64; 4]; 4];
    let mut tag_counts = [0u64; 4];
    let mut emit_counts: Vec<[u64; 4]> = Vec::new();
    for sentence in corpus.sentences() {
        let mut prev: Option<usize> = None;
        for token in sentence.tokens() {
            let tag = token.label().ok_or(Error::UnlabeledToken)?.index();
            match prev {
                None => start_counts[tag] += 1,
                Some(p) => pair_counts[p][tag] += 1,
            }
            prev = Some(tag);
            tag_counts[tag] += 1;
            let word_id = *word_ids.entry(token.surface().to_string()).or_insert_with(|| {
                words.push(token.surface().to_string());
                emit_counts.push([0; 4]);
                (words.len() - 1) as u32
            });
            emit_counts[word_id as usize][tag] += 1;
        }
    }
    let n_sentences = corpus.sentence_count() as f64;
    let start_log =
        std::array::from_fn(|tag| smoothed_log(start_counts[tag], n_sentences, k_trans, 4.0));
    let trans_log = std::array::from_fn(|prev| {
        let row_total: u64 = pair_counts[prev].iter().sum();
        if row_total == 0 && k_trans == 0.0 {
            // tag never observed with a successor: keep the row proper
            [0.25f64.ln(); 4]
        } else {
            std::array::from_fn(|next| {
                smoothed_log(pair_counts[prev][next], row_total as f64, k_trans, 4.0)
            })
        }
    });
    let vocab_slots = (words.len() + 1) as f64;
    let mut emit_log: Vec<[f64; 4]> = Vec::with_capacity(words.len() + 1);
    for counts in emit_counts.iter().chain(std::iter::once(&[0u64; 4])) {
        emit_log.push(std::array::from_fn(|tag| {
            if tag_counts[tag] == 0 && k_emit == 0.0 {
                (1.0 / vocab_slots).ln()
            } else {
                smoothed_log(counts[tag], tag_counts[tag] as f64, k_emit, vocab_slots)
            }
        }));
    }
    Ok(HmmModel { words, word_ids, start_log, trans_log, emit_log, k_trans, k_emit })
}

fn smoothed_log(count: u64, total: f64, k: f64, slots: f64) -> f64 {
    ((count as f64 + k) / (total + k * slots)).ln()
}

/// Viterbi decoding with the shared left-to-right label-order tie-break.
pub fn viterbi(model: &HmmModel, sentence: &Sentence) -> Vec<LangLabel> {
    viterbi_with_score(model, sentence).0
}

/// [`viterbi`] plus the log score of the returned path.
pub fn viterbi_with_score(model: &HmmModel, sentence: &Sentence) -> (Vec<LangLabel>, f64) {
    let nodes = model.lattice(sentence);
    let (path, score) = dp::max_sum_path(&nodes, &model.trans_log);
    (path.into_iter().map(LangLabel::from_index).collect(), score)
}

/// Enumerates every label sequence and returns the best under the same
/// tie-break as [`viterbi`]; the testing oracle for decoder correctness.
pub fn exhaustive_decode(model: &HmmModel, sentence: &Sentence) -> Result<(Vec<LangLabel>, f64)> {
    if sentence.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::SentenceTooLong { len: sentence.len(), max: EXHAUSTIVE_LIMIT });
    }
    let nodes = model.lattice(sentence);
    let (path, score) = dp::exhaustive_max_path(&nodes, &model.trans_log);
    Ok((path.into_iter().map(LangLabel::from_index).collect(), score))
}

/// The full HMM tagging path: Viterbi, then the URL/smiley UNIV override.
pub fn tag_sentence_hmm(model: &HmmModel, sentence: &Sentence) -> Vec<LangLabel> {
    let mut labels = viterbi(model, sentence);
    for (label, token) in labels.iter_mut().zip(sentence.tokens()) {
        if is_univ_default(token.surface()) {
            *label = LangLabel::Univ;
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::corpus::Token;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sentence(words: &[&str]) -> Sentence {
        Sentence::new(words.iter().map(|w| Token::new(*w, "NN", None).unwrap()).collect()).unwrap()
    }

    #[test]
    fn single_path_counts_without_smoothing() {
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tEN\n").unwrap();
        let model = train_hmm(&corpus, 0.0, 0.0).unwrap();
        assert_eq!(model.start_log(LangLabel::Te), 0.0); // ln 1
        assert_eq!(model.transition_log(LangLabel::Te, LangLabel::En), 0.0);
        assert_eq!(model.transition_log(LangLabel::Te, LangLabel::Ne), f64::NEG_INFINITY);
    }

    #[test]
    fn transition_counting() {
        // TE -> TE twice, TE -> EN once
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tTE\nc\tN\tTE\nd\tN\tEN\n").unwrap();
        let model = train_hmm(&corpus, 0.0, 0.0).unwrap();
        assert!(
            (model.transition_log(LangLabel::Te, LangLabel::Te).exp() - 2.0 / 3.0).abs() < 1e-12
        );
        let smoothed = train_hmm(&corpus, 1.0, 0.0).unwrap();
        assert!(
            (smoothed.transition_log(LangLabel::Te, LangLabel::Te).exp() - 3.0 / 7.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn rows_normalize_with_smoothing() {
        let corpus =
            parse_corpus("a\tN\tTE\nb\tN\tEN\n\nc\tN\tUNIV\nd\tN\tNE\ne\tN\tTE\n").unwrap();
        let model = train_hmm(&corpus, 0.1, 0.1).unwrap();
        let start_sum: f64 = LangLabel::ALL.iter().map(|&t| model.start_log(t).exp()).sum();
        assert!((start_sum - 1.0).abs() < 1e-9);
        for prev in LangLabel::ALL {
            let sum: f64 =
                LangLabel::ALL.iter().map(|&next| model.transition_log(prev, next).exp()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {prev} sums to {sum}");
        }
        for tag in LangLabel::ALL {
            let mut sum: f64 =
                model.words().iter().map(|w| model.emission_log(w, tag).exp()).sum();
            sum += model.emission_log("\u{1}never-seen", tag).exp();
            assert!((sum - 1.0).abs() < 1e-9, "emissions for {tag} sum to {sum}");
        }
    }

    #[test]
    fn forced_emissions_recover_tags() {
        let corpus = parse_corpus("x\tN\tTE\ny\tN\tEN\n\nx\tN\tTE\nz\tN\tUNIV\n").unwrap();
        let model = train_hmm(&corpus, 0.5, 0.0).unwrap();
        let tags = viterbi(&model, &sentence(&["x", "y"]));
        assert_eq!(tags, vec![LangLabel::Te, LangLabel::En]);
    }

    #[test]
    fn single_token_reduces_to_one_max() {
        let corpus = parse_corpus("a\tN\tEN\n\nb\tN\tTE\n").unwrap();
        let model = train_hmm(&corpus, 0.1, 0.1).unwrap();
        let s = sentence(&["a"]);
        let (tags, score) = viterbi_with_score(&model, &s);
        let mut best = (LangLabel::Te, f64::NEG_INFINITY);
        for tag in LangLabel::ALL {
            let v = model.start_log(tag) + model.emission_log("a", tag);
            if v > best.1 {
                best = (tag, v);
            }
        }
        assert_eq!(tags, vec![best.0]);
        assert_eq!(score, best.1);
    }

    #[test]
    fn unique_pairs_decode_to_gold_without_smoothing() {
        let text = "aa\tN\tTE\nbb\tN\tEN\ncc\tN\tNE\ndd\tN\tUNIV\n";
        let corpus = parse_corpus(text).unwrap();
        let model = train_hmm(&corpus, 0.0, 0.0).unwrap();
        let tags = viterbi(&model, &sentence(&["aa", "bb", "cc", "dd"]));
        assert_eq!(
            tags,
            vec![LangLabel::Te, LangLabel::En, LangLabel::Ne, LangLabel::Univ]
        );
    }

    #[test]
    fn training_rejects_bad_inputs() {
        assert!(matches!(
            train_hmm(&crate::corpus::Corpus::default(), 0.1, 0.1),
            Err(Error::EmptyCorpus)
        ));
        let unlabeled =
            crate::corpus::Corpus::new(vec![sentence(&["a"])]);
        assert!(matches!(train_hmm(&unlabeled, 0.1, 0.1), Err(Error::UnlabeledToken)));
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        assert!(matches!(train_hmm(&corpus, -0.1, 0.1), Err(Error::InvalidSmoothing(_))));
        assert!(matches!(train_hmm(&corpus, 0.1, f64::NAN), Err(Error::InvalidSmoothing(_))));
    }

    #[test]
    fn exhaustive_guard() {
        let corpus = parse_corpus("a\tN\tTE\n").unwrap();
        let model = train_hmm(&corpus, 0.1, 0.1).unwrap();
        let long: Vec<String> = (0..13).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = long.iter().map(String::as_str).collect();
        assert!(matches!(
            exhaustive_decode(&model, &sentence(&refs)),
            Err(Error::SentenceTooLong { len: 13, max: EXHAUSTIVE_LIMIT })
        ));
    }

    /// Random normalized model over a small vocabulary.
    pub(crate) fn random_model(rng: &mut ChaCha8Rng, vocab: &[&str]) -> HmmModel {
        let normalize = |row: [f64; 4]| -> [f64; 4] {
            let sum: f64 = row.iter().sum();
            std::array::from_fn(|i| (row[i] / sum).ln())
        };
        let random_row =
            |rng: &mut ChaCha8Rng| -> [f64; 4] { std::array::from_fn(|_| rng.random_range(0.05..1.0)) };
        let start_log = normalize(random_row(rng));
        let trans_log = std::array::from_fn(|_| normalize(random_row(rng)));
        // emission columns normalize over words + UNK
        let rows = vocab.len() + 1;
        let mut raw: Vec<[f64; 4]> =
            (0..rows).map(|_| std::array::from_fn(|_| rng.random_range(0.05..1.0))).collect();
        for tag in 0..4 {
            let sum: f64 = raw.iter().map(|r| r[tag]).sum();
            for row in &mut raw {
                row[tag] /= sum;
            }
        }
        let emit_log: Vec<[f64; 4]> =
            raw.iter().map(|r| std::array::from_fn(|t| r[t].ln())).collect();
        HmmModel::from_tables(
            vocab.iter().map(|w| w.to_string()).collect(),
            start_log,
            trans_log,
            emit_log,
            0.1,
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn viterbi_agrees_with_exhaustive_oracle() {
        let vocab = ["aa", "bb", "cc", "dd", "ee"];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let model = random_model(&mut rng, &vocab);
            let len = rng.random_range(1..=6);
            let words: Vec<&str> = (0..len)
                .map(|_| {
                    if rng.random_range(0..10) == 0 {
                        "oov"
                    } else {
                        vocab[rng.random_range(0..vocab.len())]
                    }
                })
                .collect();
            let s = sentence(&words);
            let (fast, fast_score) = viterbi_with_score(&model, &s);
            let (slow, slow_score) = exhaustive_decode(&model, &s).unwrap();
            assert_eq!(fast_score, slow_score);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn shifting_all_emissions_at_one_position_keeps_the_path() {
        let vocab = ["aa", "bb", "cc"];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let model = random_model(&mut rng, &vocab);
        let s = sentence(&["aa", "bb", "cc", "aa"]);
        let baseline = viterbi(&model, &s);
        // adding a constant to all four node scores at one position cannot
        // change the argmax path; emulate via the raw lattice decoder
        let mut nodes = model.lattice(&s);
        for slot in &mut nodes[2] {
            *slot += 3.7;
        }
        let (shifted, _) = crate::dp::max_sum_path(&nodes, &model.trans_log);
        let shifted: Vec<LangLabel> = shifted.into_iter().map(LangLabel::from_index).collect();
        assert_eq!(baseline, shifted);
    }

    #[test]
    fn univ_override_applies_to_urls_and_smileys() {
        let corpus = parse_corpus("a\tN\tTE\nb\tN\tEN\n").unwrap();
        let model = train_hmm(&corpus, 0.1, 0.1).unwrap();
        let s = sentence(&["a", "http://x.co", "b"]);
        let tags = tag_sentence_hmm(&model, &s);
        assert_eq!(tags[1], LangLabel::Univ);
        let plain = sentence(&["a", "b"]);
        assert_eq!(tag_sentence_hmm(&model, &plain), viterbi(&model, &plain));
        let smileys = sentence(&[":)", ";p", ":-D"]);
        assert!(tag_sentence_hmm(&model, &smileys).iter().all(|&l| l == LangLabel::Univ));
    }
}
