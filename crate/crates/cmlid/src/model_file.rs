//! Versioned binary model files.
//!
//! Layout: the magic string `CMLID`, a big-endian u32 format version, one
//! byte of backend kind, a big-endian u64 payload length, a CRC32 of the
//! payload, then the payload itself. Payload records are length-prefixed;
//! integers are big-endian and floats are stored as their raw IEEE-754
//! bits, so models round-trip bit-exactly. Files are written to a
//! temporary sibling and renamed into place, so an interrupted run never
//! leaves a partial model at the target path.

use std::fs;
use std::path::Path;

use crate::baselines::{DecisionTree, NbModel, RfModel, TreeNode};
use crate::corpus::LangLabel;
use crate::crf::{CrfModel, TrainStats};
use crate::error::{Error, Result};
use crate::features::{CountVectorizer, CrfFeatureConfig, FeatureIndex, TfIdfMode, TfIdfVectorizer};
use crate::hmm::HmmModel;
use crate::tagger::{NbTagger, RfTagger, TrainedModel};

const MAGIC: &[u8; 5] = b"CMLID";
const FORMAT_VERSION: u32 = 1;

const KIND_NB: u8 = 0;
const KIND_RF: u8 = 1;
const KIND_HMM: u8 = 2;
const KIND_CRF: u8 = 3;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Writer {
        Writer { buf: Vec::new() }
    }

    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    fn bool(&mut self, v: bool) {
        self.buf.push(u8::from(v));
    }

    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_bits().to_be_bytes());
    }

    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn f64s(&mut self, values: &[f64]) {
        self.u64(values.len() as u64);
        for &v in values {
            self.f64(v);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Reader<'a> {
        Reader { buf, at: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.buf.len() {
            return Err(Error::ModelTruncated);
        }
        let slice = &self.buf[self.at..self.at + n];
        self.at += n;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn bool(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::ModelEncoding(format!("bad bool byte {other}"))),
        }
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(u64::from_be_bytes(self.take(8)?.try_into().unwrap())))
    }

    fn str(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| Error::ModelEncoding("non-UTF-8 string".into()))
    }

    fn f64s(&mut self) -> Result<Vec<f64>> {
        let len = self.u64()? as usize;
        if len > self.buf.len() {
            return Err(Error::ModelTruncated);
        }
        (0..len).map(|_| self.f64()).collect()
    }

    fn done(&self) -> bool {
        self.at == self.buf.len()
    }
}

fn write_index(w: &mut Writer, index: &FeatureIndex) {
    w.u64(index.len() as u64);
    for name in index.names() {
        w.str(name);
    }
}

fn read_index(r: &mut Reader) -> Result<FeatureIndex> {
    let len = r.u64()? as usize;
    if len > r.buf.len() {
        return Err(Error::ModelTruncated);
    }
    let mut index = FeatureIndex::new();
    for _ in 0..len {
        let name = r.str()?;
        index.intern(&name);
    }
    index.freeze();
    Ok(index)
}

fn write_tree(w: &mut Writer, node: &TreeNode) {
    match node {
        TreeNode::Leaf { distribution } => {
            w.u8(0);
            for &v in distribution {
                w.f64(v);
            }
        }
        TreeNode::Split { feature, threshold, weighted_decrease, samples, left, right } => {
            w.u8(1);
            w.u32(*feature);
            w.f64(*threshold);
            w.f64(*weighted_decrease);
            w.u64(*samples as u64);
            write_tree(w, left);
            write_tree(w, right);
        }
    }
}

fn read_tree(r: &mut Reader) -> Result<TreeNode> {
    match r.u8()? {
        0 => {
            let mut distribution = [0.0f64; 4];
            for slot in &mut distribution {
                *slot = r.f64()?;
            }
            Ok(TreeNode::Leaf { distribution })
        }
        1 => {
            let feature = r.u32()?;
            let threshold = r.f64()?;
            let weighted_decrease = r.f64()?;
            let samples = r.u64()? as usize;
            let left = read_tree(r)?;
            let right = read_tree(r)?;
            Ok(TreeNode::Split {
                feature,
                threshold,
                weighted_decrease,
                samples,
                left: Box::new(left),
                right: Box::new(right),
            })
        }
        other => Err(Error::ModelEncoding(format!("bad tree node tag {other}"))),
    }
}

fn mode_byte(mode: TfIdfMode) -> u8 {
    match mode {
        TfIdfMode::WordTrigram => 0,
        TfIdfMode::CharTrigram => 1,
    }
}

fn mode_from_byte(byte: u8) -> Result<TfIdfMode> {
    match byte {
        0 => Ok(TfIdfMode::WordTrigram),
        1 => Ok(TfIdfMode::CharTrigram),
        other => Err(Error::ModelEncoding(format!("bad tf-idf mode {other}"))),
    }
}

fn write_config(w: &mut Writer, config: &CrfFeatureConfig) {
    for flag in [
        config.current_word_pos,
        config.next_word_pos,
        config.prev_word_pos,
        config.prefix_suffix,
        config.word_length,
        config.starts_with_digit,
        config.contains_digit,
        config.starts_with_special,
        config.starts_with_capital,
        config.contains_capital,
        config.prev_label,
        config.char_ngrams,
    ] {
        w.bool(flag);
    }
    w.u32(config.max_affix_len as u32);
    w.u32(config.ngram_orders.len() as u32);
    for &order in &config.ngram_orders {
        w.u32(order as u32);
    }
    w.u32(config.min_count);
}

fn read_config(r: &mut Reader) -> Result<CrfFeatureConfig> {
    let mut flags = [false; 12];
    for slot in &mut flags {
        *slot = r.bool()?;
    }
    let max_affix_len = r.u32()? as usize;
    let n_orders = r.u32()? as usize;
    let ngram_orders = (0..n_orders).map(|_| Ok(r.u32()? as usize)).collect::<Result<_>>()?;
    let min_count = r.u32()?;
    Ok(CrfFeatureConfig {
        current_word_pos: flags[0],
        next_word_pos: flags[1],
        prev_word_pos: flags[2],
        prefix_suffix: flags[3],
        word_length: flags[4],
        starts_with_digit: flags[5],
        contains_digit: flags[6],
        starts_with_special: flags[7],
        starts_with_capital: flags[8],
        contains_capital: flags[9],
        prev_label: flags[10],
        char_ngrams: flags[11],
        max_affix_len,
        ngram_orders,
        min_count,
    })
}

fn encode_payload(model: &TrainedModel) -> (u8, Vec<u8>) {
    let mut w = Writer::new();
    let kind = match model {
        TrainedModel::NaiveBayes(tagger) => {
            let vectorizer = tagger.vectorizer();
            w.u8(mode_byte(vectorizer.mode()));
            w.u32(vectorizer.n_documents());
            write_index(&mut w, vectorizer.index());
            w.u64(vectorizer.index().len() as u64);
            for name in vectorizer.index().names() {
                w.u32(vectorizer.document_frequency(name).unwrap_or(0));
            }
            let nb = tagger.model();
            w.f64(nb.alpha());
            for label in LangLabel::ALL {
                w.f64(nb.log_prior(label));
            }
            w.u64(nb.vocab_size() as u64);
            for f in 0..nb.vocab_size() as u32 {
                for label in LangLabel::ALL {
                    w.f64(nb.log_likelihood(f, label).unwrap());
                }
            }
            KIND_NB
        }
        TrainedModel::RandomForest(tagger) => {
            let vectorizer = tagger.vectorizer();
            write_index(&mut w, vectorizer.index());
            w.u64(vectorizer.frequencies().len() as u64);
            for &freq in vectorizer.frequencies() {
                w.u64(freq);
            }
            let rf = tagger.model();
            w.u64(rf.seed());
            w.u64(rf.n_features() as u64);
            w.f64s(rf.importance());
            w.u32(rf.trees().len() as u32);
            for tree in rf.trees() {
                write_tree(&mut w, tree.root());
            }
            KIND_RF
        }
        TrainedModel::Hmm(hmm) => {
            w.f64(hmm.k_trans());
            w.f64(hmm.k_emit());
            for label in LangLabel::ALL {
                w.f64(hmm.start_log(label));
            }
            for prev in LangLabel::ALL {
                for next in LangLabel::ALL {
                    w.f64(hmm.transition_log(prev, next));
                }
            }
            w.u64(hmm.words().len() as u64);
            for word in hmm.words() {
                w.str(word);
            }
            for word in hmm.words() {
                for label in LangLabel::ALL {
                    w.f64(hmm.emission_log(word, label));
                }
            }
            // the shared unknown-word slot
            for label in LangLabel::ALL {
                w.f64(hmm.unknown_emission_log(label));
            }
            KIND_HMM
        }
        TrainedModel::Crf { model, stats } => {
            w.f64(model.lambda());
            write_config(&mut w, model.config());
            write_index(&mut w, model.index());
            w.f64s(model.weights());
            w.u64(stats.iterations as u64);
            w.f64(stats.final_nll);
            w.bool(stats.converged);
            KIND_CRF
        }
    };
    (kind, w.buf)
}

fn decode_payload(kind: u8, payload: &[u8]) -> Result<TrainedModel> {
    let mut r = Reader::new(payload);
    let model = match kind {
        KIND_NB => {
            let mode = mode_from_byte(r.u8()?)?;
            let n_docs = r.u32()?;
            let index = read_index(&mut r)?;
            let n_df = r.u64()? as usize;
            if n_df != index.len() {
                return Err(Error::ModelEncoding("df table size mismatch".into()));
            }
            let doc_freq: Vec<u32> = (0..n_df).map(|_| r.u32()).collect::<Result<_>>()?;
            let vectorizer = TfIdfVectorizer::from_parts(mode, index, doc_freq, n_docs)?;
            let alpha = r.f64()?;
            let mut log_priors = [0.0f64; 4];
            for slot in &mut log_priors {
                *slot = r.f64()?;
            }
            let vocab = r.u64()? as usize;
            if vocab > payload.len() {
                return Err(Error::ModelTruncated);
            }
            let mut table = Vec::with_capacity(vocab);
            for _ in 0..vocab {
                let mut row = [0.0f64; 4];
                for slot in &mut row {
                    *slot = r.f64()?;
                }
                table.push(row);
            }
            let nb = NbModel::from_parts(alpha, log_priors, table);
            TrainedModel::NaiveBayes(NbTagger::new(vectorizer, nb))
        }
        KIND_RF => {
            let index = read_index(&mut r)?;
            let n_freq = r.u64()? as usize;
            if n_freq != index.len() {
                return Err(Error::ModelEncoding("frequency table size mismatch".into()));
            }
            let frequencies: Vec<u64> = (0..n_freq).map(|_| r.u64()).collect::<Result<_>>()?;
            let vectorizer = CountVectorizer::from_parts(index, frequencies);
            let seed = r.u64()?;
            let n_features = r.u64()? as usize;
            let importance = r.f64s()?;
            let n_trees = r.u32()? as usize;
            let trees: Vec<DecisionTree> = (0..n_trees)
                .map(|_| Ok(DecisionTree::new(read_tree(&mut r)?)))
                .collect::<Result<_>>()?;
            let rf = RfModel::from_parts(trees, seed, n_features, importance);
            TrainedModel::RandomForest(RfTagger::new(vectorizer, rf))
        }
        KIND_HMM => {
            let k_trans = r.f64()?;
            let k_emit = r.f64()?;
            let mut start_log = [0.0f64; 4];
            for slot in &mut start_log {
                *slot = r.f64()?;
            }
            let mut trans_log = [[0.0f64; 4]; 4];
            for row in &mut trans_log {
                for slot in row.iter_mut() {
                    *slot = r.f64()?;
                }
            }
            let n_words = r.u64()? as usize;
            if n_words > payload.len() {
                return Err(Error::ModelTruncated);
            }
            let words: Vec<String> = (0..n_words).map(|_| r.str()).collect::<Result<_>>()?;
            let mut emit_log = Vec::with_capacity(n_words + 1);
            for _ in 0..=n_words {
                let mut row = [0.0f64; 4];
                for slot in &mut row {
                    *slot = r.f64()?;
                }
                emit_log.push(row);
            }
            TrainedModel::Hmm(HmmModel::from_tables(
                words, start_log, trans_log, emit_log, k_trans, k_emit,
            )?)
        }
        KIND_CRF => {
            let lambda = r.f64()?;
            let config = read_config(&mut r)?;
            let index = read_index(&mut r)?;
            let weights = r.f64s()?;
            let iterations = r.u64()? as usize;
            let final_nll = r.f64()?;
            let converged = r.bool()?;
            let model = CrfModel::from_parts(index, weights, config, lambda)?;
            TrainedModel::Crf { model, stats: TrainStats { iterations, final_nll, converged } }
        }
        other => return Err(Error::ModelEncoding(format!("unknown backend kind {other}"))),
    };
    if !r.done() {
        return Err(Error::ModelEncoding("trailing bytes after payload".into()));
    }
    Ok(model)
}

/// Serializes a trained model to the versioned container format.
pub fn to_bytes(model: &TrainedModel) -> Vec<u8> {
    let (kind, payload) = encode_payload(model);
    let mut out = Vec::with_capacity(payload.len() + 22);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_be_bytes());
    out.push(kind);
    out.extend_from_slice(&(payload.len() as u64).to_be_bytes());
    out.extend_from_slice(&crc32fast::hash(&payload).to_be_bytes());
    out.extend_from_slice(&payload);
    out
}

/// Verifies magic, version, and checksum, then reconstructs the model.
pub fn from_bytes(bytes: &[u8]) -> Result<TrainedModel> {
    if bytes.len() < MAGIC.len() + 17 {
        return Err(Error::ModelTruncated);
    }
    if &bytes[..5] != MAGIC {
        return Err(Error::ModelMagic);
    }
    let version = u32::from_be_bytes(bytes[5..9].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::ModelVersion(version));
    }
    let kind = bytes[9];
    let payload_len = u64::from_be_bytes(bytes[10..18].try_into().unwrap()) as usize;
    let checksum = u32::from_be_bytes(bytes[18..22].try_into().unwrap());
    let payload = &bytes[22..];
    if payload.len() != payload_len {
        return Err(Error::ModelTruncated);
    }
    if crc32fast::hash(payload) != checksum {
        return Err(Error::ModelChecksum);
    }
    decode_payload(kind, payload)
}

/// Atomic save: write a temporary sibling file, then rename over the target.
pub fn save(model: &TrainedModel, path: &Path) -> Result<()> {
    let bytes = to_bytes(model);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, &bytes)?;
    if let Err(err) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(err.into());
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<TrainedModel> {
    from_bytes(&fs::read(path)?)
}
