//! Backend dispatch: one enum of hyperparameter specs and one enum of
//! trained models, so the evaluation harness and the CLI can treat all four
//! taggers uniformly. Every backend's tagging path applies the URL/smiley
//! UNIV override.

use crate::baselines::{predict_nb, predict_rf, train_nb_with_vocab, train_rf, MaxFeatures, NbModel, RfModel};
use crate::corpus::{Corpus, LangLabel, Sentence};
use crate::crf::{decode_crf, train_crf_with_stats, CrfModel, TrainStats};
use crate::error::Result;
use crate::features::{is_univ_default, CountVectorizer, CrfFeatureConfig, TfIdfMode, TfIdfVectorizer};
use crate::hmm::{tag_sentence_hmm, train_hmm, HmmModel};
use crate::par;

/// A backend plus its hyperparameters; everything needed to train.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    NaiveBayes { alpha: f64, mode: TfIdfMode },
    RandomForest { n_trees: usize, seed: u64 },
    Hmm { k_trans: f64, k_emit: f64 },
    Crf { config: CrfFeatureConfig, lambda: f64, max_iters: usize, tol: f64 },
}

impl ModelSpec {
    /// Short backend code, as used on the command line and in model files.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::NaiveBayes { .. } => "nb",
            ModelSpec::RandomForest { .. } => "rf",
            ModelSpec::Hmm { .. } => "hmm",
            ModelSpec::Crf { .. } => "crf",
        }
    }

    /// Long name for comparison tables.
    pub fn display_name(&self) -> String {
        match self {
            ModelSpec::NaiveBayes { mode, .. } => {
                format!("Naive Bayes Classifier ({})", mode.name())
            }
            ModelSpec::RandomForest { .. } => "Random Forest Classifier".to_string(),
            ModelSpec::Hmm { .. } => "Hidden Markov Model".to_string(),
            ModelSpec::Crf { .. } => "Conditional Random Field".to_string(),
        }
    }

    pub fn train(&self, corpus: &Corpus) -> Result<TrainedModel> {
        Ok(match self {
            ModelSpec::NaiveBayes { alpha, mode } => {
                TrainedModel::NaiveBayes(NbTagger::train(corpus, *alpha, *mode)?)
            }
            ModelSpec::RandomForest { n_trees, seed } => {
                TrainedModel::RandomForest(RfTagger::train(corpus, *n_trees, *seed)?)
            }
            ModelSpec::Hmm { k_trans, k_emit } => {
                TrainedModel::Hmm(train_hmm(corpus, *k_trans, *k_emit)?)
            }
            ModelSpec::Crf { config, lambda, max_iters, tol } => {
                let (model, stats) =
                    train_crf_with_stats(corpus, config.clone(), *lambda, *max_iters, *tol)?;
                TrainedModel::Crf { model, stats }
            }
        })
    }
}

/// Naive Bayes pipeline: the fitted TF-IDF vectorizer plus the classifier
/// it feeds.
#[derive(Debug, Clone, PartialEq)]
pub struct NbTagger {
    vectorizer: TfIdfVectorizer,
    model: NbModel,
}

impl NbTagger {
    pub fn train(corpus: &Corpus, alpha: f64, mode: TfIdfMode) -> Result<NbTagger> {
        let vectorizer = TfIdfVectorizer::fit(corpus, mode)?;
        let mut vectors = Vec::with_capacity(corpus.token_count());
        let mut labels = Vec::with_capacity(corpus.token_count());
        for sentence in corpus.sentences() {
            for i in 0..sentence.len() {
                vectors.push(vectorizer.transform_token(sentence, i)?);
                labels.push(
                    sentence.tokens()[i].label().ok_or(crate::error::Error::UnlabeledToken)?,
                );
            }
        }
        let model =
            train_nb_with_vocab(&vectors, &labels, alpha, vectorizer.index().len())?;
        Ok(NbTagger { vectorizer, model })
    }

    pub fn new(vectorizer: TfIdfVectorizer, model: NbModel) -> NbTagger {
        NbTagger { vectorizer, model }
    }

    pub fn vectorizer(&self) -> &TfIdfVectorizer {
        &self.vectorizer
    }

    pub fn model(&self) -> &NbModel {
        &self.model
    }

    fn tag(&self, sentence: &Sentence) -> Result<Vec<LangLabel>> {
        (0..sentence.len())
            .map(|i| {
                let vector = self.vectorizer.transform_token(sentence, i)?;
                Ok(predict_nb(&self.model, &vector).0)
            })
            .collect()
    }
}

/// Random forest pipeline: the fitted count vectorizer plus the forest.
#[derive(Debug, Clone, PartialEq)]
pub struct RfTagger {
    vectorizer: CountVectorizer,
    model: RfModel,
}

impl RfTagger {
    pub fn train(corpus: &Corpus, n_trees: usize, seed: u64) -> Result<RfTagger> {
        let vectorizer = CountVectorizer::fit(corpus)?;
        let mut vectors = Vec::with_capacity(corpus.token_count());
        let mut labels = Vec::with_capacity(corpus.token_count());
        for token in corpus.tokens() {
            vectors.push(vectorizer.transform(token.surface()));
            labels.push(token.label().ok_or(crate::error::Error::UnlabeledToken)?);
        }
        let model = train_rf(&vectors, &labels, n_trees, MaxFeatures::Sqrt, seed)?;
        Ok(RfTagger { vectorizer, model })
    }

    pub fn new(vectorizer: CountVectorizer, model: RfModel) -> RfTagger {
        RfTagger { vectorizer, model }
    }

    pub fn vectorizer(&self) -> &CountVectorizer {
        &self.vectorizer
    }

    pub fn model(&self) -> &RfModel {
        &self.model
    }

    fn tag(&self, sentence: &Sentence) -> Vec<LangLabel> {
        sentence
            .tokens()
            .iter()
            .map(|t| predict_rf(&self.model, &self.vectorizer.transform(t.surface())))
            .collect()
    }
}

/// Any trained backend, ready to tag.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    NaiveBayes(NbTagger),
    RandomForest(RfTagger),
    Hmm(HmmModel),
    Crf { model: CrfModel, stats: TrainStats },
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self {
            TrainedModel::NaiveBayes(_) => "nb",
            TrainedModel::RandomForest(_) => "rf",
            TrainedModel::Hmm(_) => "hmm",
            TrainedModel::Crf { .. } => "crf",
        }
    }

    /// CRF training statistics, when this is a CRF.
    pub fn train_stats(&self) -> Option<TrainStats> {
        match self {
            TrainedModel::Crf { stats, .. } => Some(*stats),
            _ => None,
        }
    }

    /// Tags one sentence; tokens matching the URL/smiley rule come out UNIV
    /// under every backend.
    pub fn tag_sentence(&self, sentence: &Sentence) -> Result<Vec<LangLabel>> {
        let mut labels = match self {
            TrainedModel::NaiveBayes(tagger) => tagger.tag(sentence)?,
            TrainedModel::RandomForest(tagger) => tagger.tag(sentence),
            TrainedModel::Hmm(model) => return Ok(tag_sentence_hmm(model, sentence)),
            TrainedModel::Crf { model, .. } => return decode_crf(model, sentence),
        };
        for (label, token) in labels.iter_mut().zip(sentence.tokens()) {
            if is_univ_default(token.surface()) {
                *label = LangLabel::Univ;
            }
        }
        Ok(labels)
    }

    /// Tags every sentence, in order; sentences are processed in parallel
    /// when the `parallel` feature is on.
    pub fn tag_corpus(&self, corpus: &Corpus) -> Vec<Vec<LangLabel>> {
        par::map_slice(corpus.sentences(), |sentence| {
            self.tag_sentence(sentence).expect("tagging cannot fail on a parsed sentence")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;

    fn training_corpus() -> Corpus {
        parse_corpus(
            "nuvvu\tPRP\tTE\nexams\tNNS\tEN\nbaaga\tRB\tTE\n\n\
             hi\tUH\tEN\nRavi\tNNP\tNE\n.\t.\tUNIV\n\n\
             akkada\tRB\tTE\nparty\tNN\tEN\n!\t.\tUNIV\n",
        )
        .unwrap()
    }

    fn all_specs() -> Vec<ModelSpec> {
        vec![
            ModelSpec::NaiveBayes { alpha: 1.0, mode: TfIdfMode::CharTrigram },
            ModelSpec::RandomForest { n_trees: 5, seed: 3 },
            ModelSpec::Hmm { k_trans: 0.1, k_emit: 0.1 },
            ModelSpec::Crf {
                config: CrfFeatureConfig::default(),
                lambda: 0.1,
                max_iters: 20,
                tol: 1e-6,
            },
        ]
    }

    #[test]
    fn every_backend_tags_with_matching_shape() {
        let corpus = training_corpus();
        for spec in all_specs() {
            let model = spec.train(&corpus).unwrap();
            let tagged = model.tag_corpus(&corpus);
            assert_eq!(tagged.len(), corpus.sentence_count());
            for (sentence, labels) in corpus.sentences().iter().zip(&tagged) {
                assert_eq!(sentence.len(), labels.len());
            }
        }
    }

    #[test]
    fn univ_override_holds_for_every_backend() {
        let corpus = training_corpus();
        let fixture = parse_corpus(
            "nuvvu\tPRP\nhttp://a.b\tSYM\n:)\tSYM\nwww.x.com\tSYM\ncricbuzz.in\tSYM\n",
        )
        .unwrap();
        for spec in all_specs() {
            let model = spec.train(&corpus).unwrap();
            let labels = model.tag_sentence(&fixture.sentences()[0]).unwrap();
            for (i, token) in fixture.sentences()[0].tokens().iter().enumerate() {
                if crate::features::is_univ_default(token.surface()) {
                    assert_eq!(
                        labels[i],
                        LangLabel::Univ,
                        "{} under {}",
                        token.surface(),
                        spec.name()
                    );
                }
            }
        }
    }

    #[test]
    fn tagging_is_deterministic() {
        let corpus = training_corpus();
        for spec in all_specs() {
            let a = spec.train(&corpus).unwrap().tag_corpus(&corpus);
            let b = spec.train(&corpus).unwrap().tag_corpus(&corpus);
            assert_eq!(a, b, "{} not deterministic", spec.name());
        }
    }
}
