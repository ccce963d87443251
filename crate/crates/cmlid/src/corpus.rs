//! Annotated code-mixed corpora: parsing, serialization, statistics, and
//! seeded sentence-level splits.
//!
//! The on-disk format is token-per-line with up to three tab-separated
//! columns (`surface`, `POS`, `language label`); blank lines separate
//! sentences. A missing POS column becomes the sentinel `"UNK"`, a missing
//! label column leaves the token unlabeled. Input is UTF-8 with LF line
//! endings (a trailing CR is stripped).

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Sentinel POS tag used when the input carries no POS column.
pub const UNKNOWN_POS: &str = "UNK";

/// The closed set of word-level language labels.
///
/// The declaration order doubles as the deterministic tie-break order used
/// by every classifier in the crate: TE < EN < NE < UNIV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangLabel {
    Te,
    En,
    Ne,
    Univ,
}

impl LangLabel {
    pub const ALL: [LangLabel; 4] = [LangLabel::Te, LangLabel::En, LangLabel::Ne, LangLabel::Univ];
    pub const COUNT: usize = 4;

    pub fn as_str(self) -> &'static str {
        match self {
            LangLabel::Te => "TE",
            LangLabel::En => "EN",
            LangLabel::Ne => "NE",
            LangLabel::Univ => "UNIV",
        }
    }

    /// Long name, as used in the corpus statistics table.
    pub fn display_name(self) -> &'static str {
        match self {
            LangLabel::Te => "Telugu",
            LangLabel::En => "English",
            LangLabel::Ne => "Named Entity",
            LangLabel::Univ => "Universal",
        }
    }

    /// Parses the canonical code; anything else is rejected.
    pub fn from_code(code: &str) -> Option<LangLabel> {
        match code {
            "TE" => Some(LangLabel::Te),
            "EN" => Some(LangLabel::En),
            "NE" => Some(LangLabel::Ne),
            "UNIV" => Some(LangLabel::Univ),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> LangLabel {
        Self::ALL[index]
    }
}

impl fmt::Display for LangLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One surface word with its POS tag and optional gold language label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    surface: String,
    pos: String,
    label: Option<LangLabel>,
}

impl Token {
    /// Builds a token, rejecting empty or whitespace-containing surfaces.
    pub fn new(
        surface: impl Into<String>,
        pos: impl Into<String>,
        label: Option<LangLabel>,
    ) -> Result<Token> {
        let surface = surface.into();
        if surface.is_empty() {
            return Err(Error::InvalidToken("empty surface form".into()));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(format!(
                "surface form {surface:?} contains whitespace"
            )));
        }
        Ok(Token { surface, pos: pos.into(), label })
    }

    fn unchecked(surface: String, pos: String, label: Option<LangLabel>) -> Token {
        Token { surface, pos, label }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn pos(&self) -> &str {
        &self.pos
    }

    pub fn label(&self) -> Option<LangLabel> {
        self.label
    }

    /// Same token with the label replaced.
    pub fn with_label(&self, label: LangLabel) -> Token {
        Token { surface: self.surface.clone(), pos: self.pos.clone(), label: Some(label) }
    }
}

/// Non-empty ordered token sequence; the unit of sequence labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Sentence> {
        if tokens.is_empty() {
            return Err(Error::EmptySentence);
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    /// Gold labels for every token, or an error on the first unlabeled one.
    pub fn gold_labels(&self) -> Result<Vec<LangLabel>> {
        self.tokens.iter().map(|t| t.label().ok_or(Error::UnlabeledToken)).collect()
    }
}

/// Ordered sequence of sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>) -> Corpus {
        Corpus { sentences }
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Iterator over all tokens in corpus order.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens().iter())
    }
}

/// Parses the token-per-line format. Consecutive blank lines collapse and
/// trailing blank lines are ignored.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence { tokens: std::mem::take(&mut current) });
            }
            continue;
        }
        let mut fields = line.split('\t');
        let surface = fields.next().unwrap_or("");
        if surface.is_empty() {
            return Err(Error::EmptySurface { line: line_no });
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::SurfaceWhitespace { line: line_no });
        }
        let pos = match fields.next() {
            Some("") | None => UNKNOWN_POS.to_string(),
            Some(p) => p.to_string(),
        };
        let label = match fields.next() {
            Some("") | None => None,
            Some(code) => Some(LangLabel::from_code(code).ok_or_else(|| Error::UnknownLabel {
                line: line_no,
                text: code.to_string(),
            })?),
        };
        if fields.next().is_some() {
            return Err(Error::TooManyFields { line: line_no });
        }
        current.push(Token::unchecked(surface.to_string(), pos, label));
    }
    if !current.is_empty() {
        sentences.push(Sentence { tokens: current });
    }
    if sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(Corpus { sentences })
}

/// Inverse of [`parse_corpus`]: token-per-line, blank line between sentences.
pub fn serialize_corpus(corpus: &Corpus) -> String {
    let mut out = String::new();
    for (i, sentence) in corpus.sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for token in sentence.tokens() {
            out.push_str(token.surface());
            out.push('\t');
            out.push_str(token.pos());
            if let Some(label) = token.label() {
                out.push('\t');
                out.push_str(label.as_str());
            }
            out.push('\n');
        }
    }
    out
}

/// Per-label token counts over a fully labeled corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelStats {
    counts: [u64; 4],
    total: u64,
}

impl LabelStats {
    pub fn from_counts(counts: [u64; 4]) -> Result<LabelStats> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(LabelStats { counts, total })
    }

    pub fn count(&self, label: LangLabel) -> u64 {
        self.counts[label.index()]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn percentage(&self, label: LangLabel) -> f64 {
        100.0 * self.counts[label.index()] as f64 / self.total as f64
    }
}

impl fmt::Display for LabelStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14} {:>15} {:>19}", "Language Label", "Label Frequency", "Percentage of Label")?;
        // paper's table order: Telugu, English, Universal, Named Entity
        for label in [LangLabel::Te, LangLabel::En, LangLabel::Univ, LangLabel::Ne] {
            writeln!(
                f,
                "{:<14} {:>15} {:>19.2}",
                label.display_name(),
                self.count(label),
                self.percentage(label)
            )?;
        }
        write!(f, "{:<14} {:>15} {:>19.2}", "Total", self.total, 100.0)
    }
}

/// Exact per-label counts; every token must carry a gold label.
pub fn label_stats(corpus: &Corpus) -> Result<LabelStats> {
    let mut counts = [0u64; 4];
    for token in corpus.tokens() {
        let label = token.label().ok_or(Error::UnlabeledToken)?;
        counts[label.index()] += 1;
    }
    LabelStats::from_counts(counts)
}

/// Seeded sentence-level split. The test part receives
/// `ceil(test_fraction * n_sentences)` sentences; both parts keep the
/// original corpus order.
pub fn split(corpus: &Corpus, test_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    let n = corpus.sentence_count();
    if n < 2 {
        return Err(Error::TooFewSentences { have: n, need: 2 });
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidFraction(test_fraction));
    }
    let n_test = ((test_fraction * n as f64).ceil() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test_set: BTreeSet<usize> = order[..n_test].iter().copied().collect();
    let mut train = Vec::with_capacity(n - n_test);
    let mut test = Vec::with_capacity(n_test);
    for (i, sentence) in corpus.sentences.iter().enumerate() {
        if test_set.contains(&i) {
            test.push(sentence.clone());
        } else {
            train.push(sentence.clone());
        }
    }
    Ok((Corpus::new(train), Corpus::new(test)))
}

/// Seeded k-fold partition at sentence level. Every sentence lands in
/// exactly one test part and fold sizes differ by at most one.
pub fn kfold(corpus: &Corpus, k: usize, seed: u64) -> Result<Vec<(Corpus, Corpus)>> {
    if k < 2 {
        return Err(Error::InvalidFolds(k));
    }
    let n = corpus.sentence_count();
    if n < k {
        return Err(Error::TooFewSentences { have: n, need: k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let base = n / k;
    let remainder = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < remainder);
        let test_set: BTreeSet<usize> = order[start..start + size].iter().copied().collect();
        start += size;
        let mut train = Vec::with_capacity(n - size);
        let mut test = Vec::with_capacity(size);
        for (i, sentence) in corpus.sentences.iter().enumerate() {
            if test_set.contains(&i) {
                test.push(sentence.clone());
            } else {
                train.push(sentence.clone());
            }
        }
        folds.push((Corpus::new(train), Corpus::new(test)));
    }
    Ok(folds)
}
