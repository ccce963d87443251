//! Feature extraction: character n-grams, TF-IDF and count vectorization,
//! character-class predicates, the URL/smiley default rule, and the CRF
//! feature templates.

use std::collections::{BTreeSet, HashMap};

use crate::corpus::{Corpus, LangLabel, Sentence};
use crate::error::{Error, Result};

/// Sentence-start sentinel used by context templates.
pub const BOS: &str = "<s>";
/// Sentence-end sentinel used by context templates.
pub const EOS: &str = "</s>";

/// Bidirectional feature-name <-> dense-id registry. Ids are contiguous
/// from 0 in first-intern order; once frozen, lookups never allocate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureIndex {
    names: Vec<String>,
    ids: HashMap<String, u32>,
    frozen: bool,
}

impl FeatureIndex {
    pub fn new() -> FeatureIndex {
        FeatureIndex::default()
    }

    /// Returns the id for `name`, allocating the next one if unseen.
    /// Must not be called on a frozen index with an unseen name.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        assert!(!self.frozen, "intern on a frozen index");
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Names in id order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// Sparse feature vector: (id, weight) pairs with strictly increasing ids
/// and no stored zeros.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Sorts by id, merges duplicates by summing, and drops zero weights.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> SparseVector {
        pairs.sort_unstable_by_key(|&(id, _)| id);
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(pairs.len());
        for (id, w) in pairs {
            match entries.last_mut() {
                Some((last, acc)) if *last == id => *acc += w,
                _ => entries.push((id, w)),
            }
        }
        entries.retain(|&(_, w)| w != 0.0);
        SparseVector { entries }
    }

    pub fn get(&self, id: u32) -> f64 {
        match self.entries.binary_search_by_key(&id, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Direction for prefix/suffix-anchored character n-grams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgramDirection {
    Forward,
    Backward,
}

/// Anchored character n-grams: for each order k in 1..=n, the prefix
/// (forward) or suffix (backward) of length min(k, word length).
pub fn char_ngrams(word: &str, n: usize, direction: NgramDirection) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    if chars.is_empty() {
        return Vec::new();
    }
    (1..=n)
        .map(|k| {
            let k = k.min(chars.len());
            match direction {
                NgramDirection::Forward => chars[..k].iter().collect(),
                NgramDirection::Backward => chars[chars.len() - k..].iter().collect(),
            }
        })
        .collect()
}

/// Sliding-window character trigrams; words shorter than three characters
/// are padded with the boundary markers `^` and `$`.
pub(crate) fn padded_char_trigrams(word: &str) -> Vec<String> {
    let mut chars: Vec<char> = word.chars().collect();
    if chars.is_empty() {
        return Vec::new();
    }
    if chars.len() < 3 {
        chars.insert(0, '^');
        chars.push('$');
    }
    chars.windows(3).map(|w| w.iter().collect()).collect()
}

/// Relative frequency of `term` in `document`: count / length.
pub fn tf<S: AsRef<str>>(term: &str, document: &[S]) -> Result<f64> {
    if document.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let count = document.iter().filter(|t| t.as_ref() == term).count();
    Ok(count as f64 / document.len() as f64)
}

/// Term universe for the TF-IDF vectorizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfIdfMode {
    /// Words plus within-sentence word trigrams (space-joined).
    WordTrigram,
    /// Sliding-window character trigrams of each word.
    CharTrigram,
}

impl TfIdfMode {
    pub fn name(self) -> &'static str {
        match self {
            TfIdfMode::WordTrigram => "word-trigram",
            TfIdfMode::CharTrigram => "char-trigram",
        }
    }
}

/// TF-IDF vectorizer fitted on a corpus, one sentence per document.
///
/// idf(term) = ln(N / df); unseen terms are smoothed by treating df as 1.
/// Unseen terms still produce vector entries: their ids are drawn from a
/// hashed overflow space above the fitted vocabulary, so the fitted index
/// never grows. Classifier tables simply skip overflow ids.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfVectorizer {
    mode: TfIdfMode,
    index: FeatureIndex,
    doc_freq: Vec<u32>,
    n_docs: u32,
}

impl TfIdfVectorizer {
    /// Fits document frequencies, one document per sentence.
    pub fn fit(corpus: &Corpus, mode: TfIdfMode) -> Result<TfIdfVectorizer> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut index = FeatureIndex::new();
        let mut doc_freq: Vec<u32> = Vec::new();
        for sentence in corpus.sentences() {
            let mut seen = BTreeSet::new();
            for term in sentence_terms(sentence, mode) {
                seen.insert(term);
            }
            for term in seen {
                let id = index.intern(&term) as usize;
                if id == doc_freq.len() {
                    doc_freq.push(0);
                }
                doc_freq[id] += 1;
            }
        }
        index.freeze();
        Ok(TfIdfVectorizer { mode, index, doc_freq, n_docs: corpus.sentence_count() as u32 })
    }

    pub fn mode(&self) -> TfIdfMode {
        self.mode
    }

    pub fn index(&self) -> &FeatureIndex {
        &self.index
    }

    pub fn n_documents(&self) -> u32 {
        self.n_docs
    }

    pub fn document_frequency(&self, term: &str) -> Option<u32> {
        self.index.lookup(term).map(|id| self.doc_freq[id as usize])
    }

    /// Natural-log inverse document frequency; unseen terms use df = 1.
    pub fn idf(&self, term: &str) -> Result<f64> {
        if self.n_docs == 0 {
            return Err(Error::NotFitted);
        }
        let df = self.document_frequency(term).unwrap_or(1).max(1);
        Ok((self.n_docs as f64 / df as f64).ln())
    }

    /// TF-IDF vector for one token; tf is computed within the enclosing
    /// sentence-document.
    pub fn transform_token(&self, sentence: &Sentence, token_index: usize) -> Result<SparseVector> {
        if self.n_docs == 0 {
            return Err(Error::NotFitted);
        }
        if token_index >= sentence.len() {
            return Err(Error::IndexOutOfRange { index: token_index, len: sentence.len() });
        }
        let document = sentence_terms(sentence, self.mode);
        let mut doc_counts: HashMap<&str, u32> = HashMap::new();
        for term in &document {
            *doc_counts.entry(term.as_str()).or_insert(0) += 1;
        }
        let doc_len = document.len() as f64;
        let terms: BTreeSet<String> =
            token_terms(sentence, token_index, self.mode).into_iter().collect();
        let mut pairs = Vec::with_capacity(terms.len());
        for term in &terms {
            let count = doc_counts.get(term.as_str()).copied().unwrap_or(0);
            if count == 0 {
                continue;
            }
            let weight = count as f64 / doc_len * self.idf(term)?;
            let id = self.index.lookup(term).unwrap_or_else(|| self.overflow_id(term));
            pairs.push((id, weight));
        }
        Ok(SparseVector::from_pairs(pairs))
    }

    pub(crate) fn from_parts(
        mode: TfIdfMode,
        index: FeatureIndex,
        doc_freq: Vec<u32>,
        n_docs: u32,
    ) -> Result<TfIdfVectorizer> {
        if doc_freq.len() != index.len() {
            return Err(Error::NotFitted);
        }
        if n_docs == 0 || doc_freq.iter().any(|&df| df == 0 || df > n_docs) {
            return Err(Error::NotFitted);
        }
        Ok(TfIdfVectorizer { mode, index, doc_freq, n_docs })
    }

    /// Deterministic id above the fitted vocabulary for an unseen term
    /// (FNV-1a folded to 30 bits).
    fn overflow_id(&self, name: &str) -> u32 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in name.as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.index.len() as u32 + ((hash as u32) & 0x3FFF_FFFF)
    }
}

/// Fits a [`TfIdfVectorizer`] on the corpus.
pub fn fit_tfidf(corpus: &Corpus, mode: TfIdfMode) -> Result<TfIdfVectorizer> {
    TfIdfVectorizer::fit(corpus, mode)
}

/// All terms of a sentence-document under the given mode, with multiplicity.
fn sentence_terms(sentence: &Sentence, mode: TfIdfMode) -> Vec<String> {
    let words: Vec<&str> = sentence.tokens().iter().map(|t| t.surface()).collect();
    match mode {
        TfIdfMode::WordTrigram => {
            let mut terms: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            for window in words.windows(3) {
                terms.push(window.join(" "));
            }
            terms
        }
        TfIdfMode::CharTrigram => words.iter().flat_map(|w| padded_char_trigrams(w)).collect(),
    }
}

/// Terms contributed by one token: the word itself plus the word trigrams
/// it participates in (word mode), or its character trigrams (char mode).
fn token_terms(sentence: &Sentence, token_index: usize, mode: TfIdfMode) -> Vec<String> {
    let words: Vec<&str> = sentence.tokens().iter().map(|t| t.surface()).collect();
    match mode {
        TfIdfMode::WordTrigram => {
            let mut terms = vec![words[token_index].to_string()];
            if words.len() >= 3 {
                let lo = token_index.saturating_sub(2);
                let hi = token_index.min(words.len() - 3);
                for start in lo..=hi {
                    terms.push(words[start..start + 3].join(" "));
                }
            }
            terms
        }
        TfIdfMode::CharTrigram => padded_char_trigrams(words[token_index]),
    }
}

/// Count vectorizer: a token's features are its identity term and its
/// character trigrams, weighted by their whole-corpus frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct CountVectorizer {
    index: FeatureIndex,
    frequencies: Vec<u64>,
}

impl CountVectorizer {
    pub fn fit(corpus: &Corpus) -> Result<CountVectorizer> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut index = FeatureIndex::new();
        let mut frequencies: Vec<u64> = Vec::new();
        let bump = |index: &mut FeatureIndex, freqs: &mut Vec<u64>, name: &str| {
            let id = index.intern(name) as usize;
            if id == freqs.len() {
                freqs.push(0);
            }
            freqs[id] += 1;
        };
        for token in corpus.tokens() {
            bump(&mut index, &mut frequencies, &identity_term(token.surface()));
            for gram in padded_char_trigrams(token.surface()) {
                bump(&mut index, &mut frequencies, &trigram_term(&gram));
            }
        }
        index.freeze();
        Ok(CountVectorizer { index, frequencies })
    }

    pub fn index(&self) -> &FeatureIndex {
        &self.index
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    /// Count vector for a single word; terms unseen at fit time carry
    /// frequency zero and therefore vanish.
    pub fn transform(&self, word: &str) -> SparseVector {
        let mut terms = BTreeSet::new();
        terms.insert(identity_term(word));
        for gram in padded_char_trigrams(word) {
            terms.insert(trigram_term(&gram));
        }
        let pairs = terms
            .iter()
            .filter_map(|t| self.index.lookup(t))
            .map(|id| (id, self.frequencies[id as usize] as f64))
            .collect();
        SparseVector::from_pairs(pairs)
    }

    pub(crate) fn from_parts(index: FeatureIndex, frequencies: Vec<u64>) -> CountVectorizer {
        CountVectorizer { index, frequencies }
    }
}

// Identity and trigram terms share one registry, so they get distinct
// namespaces.
fn identity_term(word: &str) -> String {
    format!("w={word}")
}

fn trigram_term(gram: &str) -> String {
    format!("c3={gram}")
}

/// Fits a [`CountVectorizer`] and returns one vector per token, in corpus
/// order grouped by sentence.
pub fn count_vectorize(corpus: &Corpus) -> Result<(CountVectorizer, Vec<Vec<SparseVector>>)> {
    let vectorizer = CountVectorizer::fit(corpus)?;
    let vectors = corpus
        .sentences()
        .iter()
        .map(|s| s.tokens().iter().map(|t| vectorizer.transform(t.surface())).collect())
        .collect();
    Ok((vectorizer, vectors))
}

/// Surface-shape predicates used as CRF features.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CharClassPredicates {
    pub starts_with_digit: bool,
    pub contains_digit: bool,
    pub starts_with_special: bool,
    pub starts_with_capital: bool,
    pub contains_capital: bool,
}

const SPECIAL_SYMBOLS: &str = "!@#$%^&*()_+-=[]{};:'\",.<>/?\\|~`";

pub fn char_class_predicates(word: &str) -> CharClassPredicates {
    let first = word.chars().next();
    CharClassPredicates {
        starts_with_digit: first.is_some_and(|c| c.is_ascii_digit()),
        contains_digit: word.chars().any(|c| c.is_ascii_digit()),
        starts_with_special: first.is_some_and(|c| SPECIAL_SYMBOLS.contains(c)),
        starts_with_capital: first.is_some_and(|c| c.is_ascii_uppercase()),
        contains_capital: word.chars().any(|c| c.is_ascii_uppercase()),
    }
}

const SMILEY_CHARS: &str = ":;=8xX-^'oODpPC()[]{}<>3/\\*._,";
const SMILEY_EYES: &str = ":;=8xX";
const SMILEY_MOUTH: &str = ")(]D[pP3/\\";

/// URL/smiley rule: tokens matching it default to the UNIV label in every
/// backend's tagging path.
pub fn is_univ_default(word: &str) -> bool {
    if word.contains("http://") || word.contains("https://") || word.contains("www") {
        return true;
    }
    if word.ends_with(".in") {
        return true;
    }
    !word.is_empty()
        && word.chars().all(|c| SMILEY_CHARS.contains(c))
        && word.chars().any(|c| SMILEY_EYES.contains(c))
        && word.chars().any(|c| SMILEY_MOUTH.contains(c))
}

/// Switches for the twelve CRF feature-template families.
#[derive(Debug, Clone, PartialEq)]
pub struct CrfFeatureConfig {
    pub current_word_pos: bool,
    pub next_word_pos: bool,
    pub prev_word_pos: bool,
    pub prefix_suffix: bool,
    pub word_length: bool,
    pub starts_with_digit: bool,
    pub contains_digit: bool,
    pub starts_with_special: bool,
    pub starts_with_capital: bool,
    pub contains_capital: bool,
    pub prev_label: bool,
    pub char_ngrams: bool,
    /// Prefixes/suffixes are emitted for lengths 1..=max_affix_len.
    pub max_affix_len: usize,
    /// Orders of the forward/backward anchored n-grams.
    pub ngram_orders: Vec<usize>,
    /// Features seen fewer than this many times in training are dropped;
    /// 1 keeps everything.
    pub min_count: u32,
}

impl Default for CrfFeatureConfig {
    fn default() -> CrfFeatureConfig {
        CrfFeatureConfig {
            current_word_pos: true,
            next_word_pos: true,
            prev_word_pos: true,
            prefix_suffix: true,
            word_length: true,
            starts_with_digit: true,
            contains_digit: true,
            starts_with_special: true,
            starts_with_capital: true,
            contains_capital: true,
            prev_label: true,
            char_ngrams: true,
            max_affix_len: 3,
            ngram_orders: vec![1, 2, 3],
            min_count: 1,
        }
    }
}

impl CrfFeatureConfig {
    pub fn validate(&self) -> Result<()> {
        let any = self.current_word_pos
            || self.next_word_pos
            || self.prev_word_pos
            || self.prefix_suffix
            || self.word_length
            || self.starts_with_digit
            || self.contains_digit
            || self.starts_with_special
            || self.starts_with_capital
            || self.contains_capital
            || self.prev_label
            || self.char_ngrams;
        if any {
            Ok(())
        } else {
            Err(Error::NoTemplatesEnabled)
        }
    }
}

/// Expands the enabled feature templates for one token position into a
/// deterministic, duplicate-free, sorted set of feature names.
pub fn crf_features(
    sentence: &Sentence,
    index: usize,
    prev_label: Option<LangLabel>,
    config: &CrfFeatureConfig,
) -> Result<Vec<String>> {
    if index >= sentence.len() {
        return Err(Error::IndexOutOfRange { index, len: sentence.len() });
    }
    let tokens = sentence.tokens();
    let word = tokens[index].surface();
    let chars: Vec<char> = word.chars().collect();
    let mut feats = BTreeSet::new();

    if config.current_word_pos {
        feats.insert(format!("w0={word}"));
        feats.insert(format!("p0={}", tokens[index].pos()));
    }
    if config.next_word_pos {
        match tokens.get(index + 1) {
            Some(next) => {
                feats.insert(format!("w+1={}", next.surface()));
                feats.insert(format!("p+1={}", next.pos()));
            }
            None => {
                feats.insert(format!("w+1={EOS}"));
                feats.insert(format!("p+1={EOS}"));
            }
        }
    }
    if config.prev_word_pos {
        if index == 0 {
            feats.insert(format!("w-1={BOS}"));
            feats.insert(format!("p-1={BOS}"));
        } else {
            feats.insert(format!("w-1={}", tokens[index - 1].surface()));
            feats.insert(format!("p-1={}", tokens[index - 1].pos()));
        }
    }
    if config.prefix_suffix {
        for k in 1..=config.max_affix_len {
            if chars.len() < k {
                feats.insert(format!("pre{k}=NULL"));
                feats.insert(format!("suf{k}=NULL"));
            } else {
                let prefix: String = chars[..k].iter().collect();
                let suffix: String = chars[chars.len() - k..].iter().collect();
                feats.insert(format!("pre{k}={prefix}"));
                feats.insert(format!("suf{k}={suffix}"));
            }
        }
    }
    if config.word_length {
        feats.insert(format!("len={}", chars.len()));
    }
    let predicates = char_class_predicates(word);
    if config.starts_with_digit && predicates.starts_with_digit {
        feats.insert("start_digit".to_string());
    }
    if config.contains_digit && predicates.contains_digit {
        feats.insert("has_digit".to_string());
    }
    if config.starts_with_special && predicates.starts_with_special {
        feats.insert("start_special".to_string());
    }
    if config.starts_with_capital && predicates.starts_with_capital {
        feats.insert("start_cap".to_string());
    }
    if config.contains_capital && predicates.contains_capital {
        feats.insert("has_cap".to_string());
    }
    if config.prev_label {
        match prev_label {
            Some(label) => feats.insert(format!("y-1={label}")),
            None => feats.insert(format!("y-1={BOS}")),
        };
    }
    if config.char_ngrams {
        for &k in &config.ngram_orders {
            let k_eff = k.min(chars.len());
            let forward: String = chars[..k_eff].iter().collect();
            let backward: String = chars[chars.len() - k_eff..].iter().collect();
            feats.insert(format!("fng{k}={forward}"));
            feats.insert(format!("bng{k}={backward}"));
        }
    }
    Ok(feats.into_iter().collect())
}
