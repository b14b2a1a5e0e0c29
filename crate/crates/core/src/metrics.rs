//! Evaluation metrics: corpus BLEU-4, normalized edit score and exact match.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("reference count {refs} does not match hypothesis count {hyps}")]
    LengthMismatch { refs: usize, hyps: usize },
    #[error("evaluation needs at least one record")]
    Empty,
}

/// Levenshtein distance over Unicode scalar values, unit costs.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[prefix..], &b[prefix..]);
    let suffix = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let (a, b) = (&a[..a.len() - suffix], &b[..b.len() - suffix]);
    // Keep the shorter string on the row axis.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Paired references and hypotheses, NFC-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalInput {
    refs: Vec<String>,
    hyps: Vec<String>,
}

impl EvalInput {
    pub fn new<S: AsRef<str>>(refs: &[S], hyps: &[S]) -> Result<Self, MetricsError> {
        if refs.len() != hyps.len() {
            return Err(MetricsError::LengthMismatch {
                refs: refs.len(),
                hyps: hyps.len(),
            });
        }
        if refs.is_empty() {
            return Err(MetricsError::Empty);
        }
        let nfc = |v: &[S]| v.iter().map(|s| s.as_ref().nfc().collect()).collect();
        Ok(Self {
            refs: nfc(refs),
            hyps: nfc(hyps),
        })
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn refs(&self) -> &[String] {
        &self.refs
    }

    pub fn hyps(&self) -> &[String] {
        &self.hyps
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.refs
            .iter()
            .map(String::as_str)
            .zip(self.hyps.iter().map(String::as_str))
    }
}

/// `100 * (1 - sum d(r, h) / sum max(|r|, |h|))`; 100 when every string is empty.
pub fn edit_score(input: &EvalInput) -> f64 {
    let (mut dist, mut norm) = (0usize, 0usize);
    for (r, h) in input.pairs() {
        let rc: Vec<char> = r.chars().collect();
        let hc: Vec<char> = h.chars().collect();
        dist += levenshtein_chars(&rc, &hc);
        norm += rc.len().max(hc.len());
    }
    if norm == 0 {
        return 100.0;
    }
    100.0 * (1.0 - dist as f64 / norm as f64)
}

/// Percentage of pairs that match exactly after normalization.
pub fn exact_match(input: &EvalInput) -> f64 {
    let hits = input.pairs().filter(|(r, h)| r == h).count();
    100.0 * hits as f64 / input.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerMode {
    /// Control words, single characters and braces; whitespace is dropped.
    #[default]
    Latex,
    Whitespace,
    Character,
}

impl TokenizerMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Latex => "latex",
            Self::Whitespace => "whitespace",
            Self::Character => "character",
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TokenizerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "latex" => Ok(Self::Latex),
            "whitespace" => Ok(Self::Whitespace),
            "character" => Ok(Self::Character),
            other => Err(format!("unknown tokenizer mode `{other}`")),
        }
    }
}

pub fn tokenize(s: &str, mode: TokenizerMode) -> Vec<String> {
    match mode {
        TokenizerMode::Whitespace => s.split_whitespace().map(str::to_owned).collect(),
        TokenizerMode::Character => s.chars().map(String::from).collect(),
        TokenizerMode::Latex => tokenize_latex(s),
    }
}

fn tokenize_latex(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c != '\\' {
            out.push(c.to_string());
            continue;
        }
        let mut tok = String::from('\\');
        match chars.peek() {
            Some(n) if n.is_ascii_alphabetic() => {
                while let Some(&n) = chars.peek() {
                    if !n.is_ascii_alphabetic() {
                        break;
                    }
                    tok.push(n);
                    chars.next();
                }
            }
            Some(&n) => {
                tok.push(n);
                chars.next();
            }
            None => {}
        }
        out.push(tok);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    #[default]
    None,
    /// Adds one to numerator and denominator of every n-gram precision.
    AddOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BleuConfig {
    pub tokenizer: TokenizerMode,
    pub smoothing: Smoothing,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self {
            tokenizer: TokenizerMode::Latex,
            smoothing: Smoothing::None,
        }
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut map = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *map.entry(w).or_insert(0) += 1;
        }
    }
    map
}

/// Corpus-level BLEU-4 on a 0..=100 scale with uniform weights.
pub fn bleu4(input: &EvalInput, cfg: &BleuConfig) -> f64 {
    let mut matches = [0u64; 4];
    let mut totals = [0u64; 4];
    let (mut ref_len, mut hyp_len) = (0u64, 0u64);
    for (r, h) in input.pairs() {
        let rt = tokenize(r, cfg.tokenizer);
        let ht = tokenize(h, cfg.tokenizer);
        ref_len += rt.len() as u64;
        hyp_len += ht.len() as u64;
        for n in 1..=4 {
            let rc = ngram_counts(&rt, n);
            let hc = ngram_counts(&ht, n);
            totals[n - 1] += ht.len().saturating_sub(n - 1) as u64;
            matches[n - 1] += hc
                .iter()
                .map(|(g, &c)| c.min(rc.get(g).copied().unwrap_or(0)) as u64)
                .sum::<u64>();
        }
    }
    if hyp_len == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 0..4 {
        let (m, t) = match cfg.smoothing {
            Smoothing::None => (matches[n] as f64, totals[n] as f64),
            Smoothing::AddOne => (matches[n] as f64 + 1.0, totals[n] as f64 + 1.0),
        };
        if m == 0.0 || t == 0.0 {
            return 0.0;
        }
        log_sum += 0.25 * (m / t).ln();
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    100.0 * bp * log_sum.exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub bleu4: f64,
    pub edit: f64,
    pub exact_match: f64,
    pub n_records: usize,
    pub tokenizer_mode: TokenizerMode,
}

pub fn evaluate(input: &EvalInput, cfg: &BleuConfig) -> EvalReport {
    EvalReport {
        bleu4: bleu4(input, cfg),
        edit: edit_score(input),
        exact_match: exact_match(input),
        n_records: input.len(),
        tokenizer_mode: cfg.tokenizer,
    }
}
