//! Writes the bundled synthetic sample corpus: romanized Telugu-English
//! code-mixed sentences in the token-per-line format, with POS tags and
//! gold labels.
//!
//! The corpus is a stand-in for real annotated social-media data, built to
//! exercise the same phenomena: morpheme-level mixing (English roots with
//! Telugu case suffixes such as "classlo"), romanized spelling variants
//! ("evaru"/"yevaru", "chala"/"chaala"), SMS digit-speak ("2morrow",
//! "ni8"), named entities, URLs, and smileys. Generation is deterministic
//! for a fixed seed; regenerating produces the committed file byte for
//! byte.

use std::path::PathBuf;

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmlid::corpus::{serialize_corpus, Corpus, LangLabel, Sentence, Token};

const SEED: u64 = 2015;
const N_SENTENCES: usize = 200;

// (surface, POS)
const TE_PRONOUNS: &[(&str, &str)] = &[
    ("nuvvu", "PRP"),
    ("nenu", "PRP"),
    ("meeru", "PRP"),
    ("vaadu", "PRP"),
    ("thanu", "PRP"),
    ("manam", "PRP"),
    ("vaallu", "PRP"),
    ("naaku", "PRP"),
    ("neeku", "PRP"),
];

const TE_ADVERBS: &[(&str, &str)] = &[
    ("baaga", "RB"),
    ("chala", "RB"),
    ("chaala", "RB"),
    ("inka", "RB"),
    ("kuda", "RB"),
    ("malli", "RB"),
    ("akkada", "RB"),
    ("ikkada", "RB"),
    ("eppudu", "WRB"),
    ("repu", "RB"),
    ("ninna", "RB"),
];

const TE_VERBS: &[(&str, &str)] = &[
    ("unnaru", "VBP"),
    ("unnadu", "VBP"),
    ("undi", "VBP"),
    ("vastunna", "VBG"),
    ("vastunnava", "VBP"),
    ("vellali", "VB"),
    ("chudu", "VB"),
    ("chusa", "VBD"),
    ("chesaru", "VBD"),
    ("chestunna", "VBG"),
    ("avuthav", "VBP"),
    ("ayyindi", "VBD"),
    ("cheppu", "VB"),
    ("cheppandi", "VB"),
    ("raa", "VB"),
    ("tinnava", "VBP"),
    ("padindi", "VBD"),
    ("bagundi", "VBP"),
    ("nachindi", "VBD"),
];

const TE_NOUNS: &[(&str, &str)] = &[
    ("pandaga", "NN"),
    ("sandadi", "NN"),
    ("abbayi", "NN"),
    ("ammayi", "NN"),
    ("sinima", "NN"),
    ("paata", "NN"),
    ("tammudu", "NN"),
    ("akka", "NN"),
    ("anna", "NN"),
    ("amma", "NN"),
    ("nanna", "NN"),
    ("intlo", "NN"),
    ("oorlo", "NN"),
    ("pelli", "NN"),
    ("bhojanam", "NN"),
];

const TE_ADJECTIVES: &[(&str, &str)] = &[
    ("manchi", "JJ"),
    ("pedda", "JJ"),
    ("chinna", "JJ"),
    ("kotha", "JJ"),
    ("paatha", "JJ"),
    ("super", "JJ"),
];

const TE_QUESTION_WORDS: &[(&str, &str)] = &[
    ("evaru", "WP"),
    ("yevaru", "WP"),
    ("enti", "WP"),
    ("ela", "WRB"),
    ("enduku", "WRB"),
    ("ekkada", "WRB"),
    ("yekkada", "WRB"),
];

const EN_NOUNS: &[(&str, &str)] = &[
    ("exams", "NNS"),
    ("exam", "NN"),
    ("class", "NN"),
    ("movie", "NN"),
    ("review", "NN"),
    ("weekend", "NN"),
    ("office", "NN"),
    ("meeting", "NN"),
    ("project", "NN"),
    ("deadline", "NN"),
    ("friends", "NNS"),
    ("friend", "NN"),
    ("party", "NN"),
    ("morning", "NN"),
    ("night", "NN"),
    ("ni8", "NN"),
    ("birthday", "NN"),
    ("wishes", "NNS"),
    ("luck", "NN"),
    ("message", "NN"),
    ("phone", "NN"),
    ("today", "NN"),
    ("tomorrow", "NN"),
    ("2morrow", "NN"),
    ("college", "NN"),
    ("results", "NNS"),
    ("marks", "NNS"),
    ("paper", "NN"),
    ("plan", "NN"),
    ("trip", "NN"),
    ("photos", "NNS"),
    ("song", "NN"),
    ("dinner", "NN"),
    ("lunch", "NN"),
    ("bro", "NN"),
    ("sir", "NN"),
    ("semester", "NN"),
    ("holidays", "NNS"),
    ("interview", "NN"),
    ("traffic", "NN"),
];

const EN_VERBS: &[(&str, &str)] = &[
    ("prepare", "VB"),
    ("pass", "VB"),
    ("fail", "VB"),
    ("love", "VBP"),
    ("miss", "VBP"),
    ("call", "VB"),
    ("enjoy", "VB"),
    ("wait", "VB"),
    ("join", "VB"),
    ("share", "VB"),
    ("check", "VB"),
    ("watch", "VB"),
];

const EN_ADJECTIVES: &[(&str, &str)] = &[
    ("first", "JJ"),
    ("awesome", "JJ"),
    ("happy", "JJ"),
    ("best", "JJ"),
    ("busy", "JJ"),
    ("free", "JJ"),
    ("gr8", "JJ"),
    ("cool", "JJ"),
    ("serious", "JJ"),
    ("simple", "JJ"),
];

const EN_INTERJECTIONS: &[(&str, &str)] = &[
    ("hi", "UH"),
    ("hello", "UH"),
    ("hey", "UH"),
    ("ok", "UH"),
    ("bye", "UH"),
    ("please", "UH"),
    ("congrats", "UH"),
    ("thanks", "UH"),
    ("sorry", "UH"),
    ("u", "PRP"),
];

const NE_WORDS: &[(&str, &str)] = &[
    ("John", "NNP"),
    ("Ravi", "NNP"),
    ("Priya", "NNP"),
    ("Kiran", "NNP"),
    ("Anil", "NNP"),
    ("Swathi", "NNP"),
    ("Rahul", "NNP"),
    ("Divya", "NNP"),
    ("Suresh", "NNP"),
    ("Lakshmi", "NNP"),
    ("Hyderabad", "NNP"),
    ("Chennai", "NNP"),
    ("Tirupati", "NNP"),
    ("Vijayawada", "NNP"),
    ("Guntur", "NNP"),
    ("Warangal", "NNP"),
];

const PUNCT: &[(&str, &str)] = &[(".", "."), ("!", "."), ("?", "."), (",", ",")];

const URLS: &[(&str, &str)] = &[
    ("http://chaibisket.com", "SYM"),
    ("http://bit.ly/2xk", "SYM"),
    ("https://youtu.be/abc", "SYM"),
    ("www.eenadu.net", "SYM"),
    ("www.google.com", "SYM"),
    ("cricbuzz.in", "SYM"),
    ("sakshi.in", "SYM"),
];

const SMILEYS: &[(&str, &str)] = &[
    (":)", "SYM"),
    (":-)", "SYM"),
    (":(", "SYM"),
    (":-D", "SYM"),
    (":D", "SYM"),
    (";)", "SYM"),
    (";p", "SYM"),
    (":p", "SYM"),
    ("xD", "SYM"),
    ("8)", "SYM"),
];

const NUMBERS: &[(&str, &str)] =
    &[("2", "CD"), ("3", "CD"), ("10", "CD"), ("100", "CD"), ("2015", "CD")];

// English roots that take Telugu case suffixes; the composed word is
// morpheme-level code mixing and carries the TE label, like "classlo".
const MIX_ROOTS: &[&str] = &[
    "class", "office", "college", "bus", "train", "city", "movie", "party", "exam", "phone",
    "hostel", "market", "road", "gym", "school", "function", "meeting", "project", "game",
    "system",
];
const MIX_SUFFIXES: &[&str] = &["lo", "ki", "lu", "e", "ni"];

struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    fn pick(&mut self, stock: &[(&str, &str)], label: LangLabel) -> Token {
        let &(surface, pos) = stock.choose(&mut self.rng).unwrap();
        Token::new(surface, pos, Some(label)).unwrap()
    }

    fn te(&mut self, stock: &[(&str, &str)]) -> Token {
        self.pick(stock, LangLabel::Te)
    }

    fn en(&mut self, stock: &[(&str, &str)]) -> Token {
        self.pick(stock, LangLabel::En)
    }

    fn ne(&mut self) -> Token {
        self.pick(NE_WORDS, LangLabel::Ne)
    }

    fn univ(&mut self, stock: &[(&str, &str)]) -> Token {
        self.pick(stock, LangLabel::Univ)
    }

    fn mixed(&mut self) -> Token {
        let root = MIX_ROOTS.choose(&mut self.rng).unwrap();
        let suffix = MIX_SUFFIXES.choose(&mut self.rng).unwrap();
        let pos = if *suffix == "lu" { "NNS" } else { "NN" };
        Token::new(format!("{root}{suffix}"), pos, Some(LangLabel::Te)).unwrap()
    }

    fn end_punct(&mut self) -> Token {
        let stock = &PUNCT[..3]; // . ! ?
        self.pick(stock, LangLabel::Univ)
    }

    fn maybe_smiley(&mut self, tokens: &mut Vec<Token>, chance: f64) {
        if self.rng.random_bool(chance) {
            tokens.push(self.univ(SMILEYS));
        }
    }

    fn sentence(&mut self) -> Sentence {
        let template = self.rng.random_range(0..10);
        let mut tokens = Vec::new();
        match template {
            // nuvvu exams baaga prepare avuthav .
            0 => {
                tokens.push(self.te(TE_PRONOUNS));
                tokens.push(self.en(EN_NOUNS));
                tokens.push(self.te(TE_ADVERBS));
                tokens.push(self.en(EN_VERBS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
            }
            // evaru classlo unnaru ?
            1 => {
                tokens.push(self.te(TE_QUESTION_WORDS));
                tokens.push(self.mixed());
                tokens.push(self.te(TE_VERBS));
                tokens.push(Token::new("?", ".", Some(LangLabel::Univ)).unwrap());
                self.maybe_smiley(&mut tokens, 0.3);
            }
            // hi Ravi nuvvu vastunnava ? :)
            2 => {
                tokens.push(self.en(EN_INTERJECTIONS));
                tokens.push(self.ne());
                tokens.push(self.te(TE_PRONOUNS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
                self.maybe_smiley(&mut tokens, 0.5);
            }
            // happy birthday Ravi ! :-D
            3 => {
                tokens.push(self.en(EN_ADJECTIVES));
                tokens.push(self.en(EN_NOUNS));
                tokens.push(self.ne());
                tokens.push(Token::new("!", ".", Some(LangLabel::Univ)).unwrap());
                self.maybe_smiley(&mut tokens, 0.5);
            }
            // chudu http://chaibisket.com chala super !
            4 => {
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.univ(URLS));
                tokens.push(self.te(TE_ADVERBS));
                tokens.push(self.te(TE_ADJECTIVES));
                tokens.push(self.end_punct());
            }
            // Kiran officelo meeting chesaru .
            5 => {
                tokens.push(self.ne());
                tokens.push(self.mixed());
                tokens.push(self.en(EN_NOUNS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
            }
            // manchi movie bagundi :-D
            6 => {
                tokens.push(self.te(TE_ADJECTIVES));
                tokens.push(self.en(EN_NOUNS));
                tokens.push(self.te(TE_VERBS));
                self.maybe_smiley(&mut tokens, 0.6);
                tokens.push(self.end_punct());
            }
            // nenu 2 movies chusa .
            7 => {
                tokens.push(self.te(TE_PRONOUNS));
                tokens.push(self.univ(NUMBERS));
                tokens.push(self.en(EN_NOUNS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
            }
            // ok bro , repu officeki raa .
            8 => {
                tokens.push(self.en(EN_INTERJECTIONS));
                tokens.push(self.en(EN_NOUNS));
                tokens.push(Token::new(",", ",", Some(LangLabel::Univ)).unwrap());
                tokens.push(self.te(TE_ADVERBS));
                tokens.push(self.mixed());
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
            }
            // amma intlo pedda pandaga chestunna , meeru kuda raa !
            _ => {
                tokens.push(self.te(TE_NOUNS));
                tokens.push(self.te(TE_NOUNS));
                tokens.push(self.te(TE_ADJECTIVES));
                tokens.push(self.te(TE_NOUNS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(Token::new(",", ",", Some(LangLabel::Univ)).unwrap());
                tokens.push(self.te(TE_PRONOUNS));
                tokens.push(self.te(TE_ADVERBS));
                tokens.push(self.te(TE_VERBS));
                tokens.push(self.end_punct());
            }
        }
        Sentence::new(tokens).unwrap()
    }
}

/// Fixed sentences pinning the canonical phenomena (morpheme-level mixes
/// "classlo" and "supere", a spelling-variant pair) so they are present
/// regardless of what the sampler draws.
fn pinned_sentences() -> Vec<Sentence> {
    let build = |tokens: &[(&str, &str, LangLabel)]| {
        Sentence::new(
            tokens.iter().map(|&(w, p, l)| Token::new(w, p, Some(l)).unwrap()).collect(),
        )
        .unwrap()
    };
    vec![
        build(&[
            ("nuvvu", "PRP", LangLabel::Te),
            ("first", "JJ", LangLabel::En),
            ("classlo", "NN", LangLabel::Te),
            ("pass", "VB", LangLabel::En),
            ("avuthav", "VBP", LangLabel::Te),
            (".", ".", LangLabel::Univ),
        ]),
        build(&[
            ("sinima", "NN", LangLabel::Te),
            ("supere", "JJ", LangLabel::Te),
            (":-D", "SYM", LangLabel::Univ),
        ]),
        build(&[
            ("evaru", "WP", LangLabel::Te),
            ("raa", "VB", LangLabel::Te),
            ("?", ".", LangLabel::Univ),
        ]),
        build(&[
            ("yevaru", "WP", LangLabel::Te),
            ("vastunnava", "VBP", LangLabel::Te),
            ("?", ".", LangLabel::Univ),
        ]),
    ]
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data/sample_corpus.tsv"));
    let mut generator = Generator { rng: ChaCha8Rng::seed_from_u64(SEED) };
    let mut sentences = pinned_sentences();
    while sentences.len() < N_SENTENCES {
        sentences.push(generator.sentence());
    }
    let corpus = Corpus::new(sentences);
    if let Some(parent) = out.parent() {
        std::fs::create_dir_all(parent).expect("create output directory");
    }
    std::fs::write(&out, serialize_corpus(&corpus)).expect("write sample corpus");
    eprintln!(
        "wrote {} sentences / {} tokens to {}",
        corpus.sentence_count(),
        corpus.token_count(),
        out.display()
    );
}
