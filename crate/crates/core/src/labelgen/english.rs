//! Perturbed printed-English labels.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_probability, gen_script_content, LabelGenError, LabelKind, LatexLabel};
use crate::corpus::{sample_accepted_span, Corpus, DocumentSelection};
use crate::texlayout::is_run_char;

/// Whether the script probabilities apply once per label or once per word.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScriptMode {
    #[default]
    PerRecord,
    PerWord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnglishGenConfig {
    /// Maximum words per sampled span.
    pub max_words: usize,
    pub superscript_prob: f64,
    pub subscript_prob: f64,
    pub symbol_prob: f64,
    pub line_break_prob: f64,
    pub max_breaks: usize,
    /// Chance an argument-taking command gets a letter rather than a digit.
    pub arg_letter_prob: f64,
    pub symbol_inventory: Vec<String>,
    pub arg_command_inventory: Vec<String>,
    pub script_mode: ScriptMode,
    pub document_selection: DocumentSelection,
    /// Span draws allowed before giving up on finding renderable words.
    pub max_span_attempts: u32,
}

impl Default for EnglishGenConfig {
    fn default() -> Self {
        let strings = |xs: &[&str]| xs.iter().map(|s| (*s).to_owned()).collect();
        Self {
            max_words: 10,
            superscript_prob: 0.0375,
            subscript_prob: 0.0125,
            symbol_prob: 0.15,
            line_break_prob: 0.15,
            max_breaks: 4,
            arg_letter_prob: 0.5,
            symbol_inventory: strings(&[
                "\\phi",
                "\\infty",
                "\\sum",
                "\\prod",
                "\\pm",
                "\\neq",
                "\\leq",
                "\\geq",
                "\\times",
                "\\lambda",
                "\\beta",
                "\\Psi",
                "\\mu",
                "\\alpha",
                "\\mathbb{R}",
            ]),
            arg_command_inventory: strings(&["\\bar", "\\dot", "\\hat", "\\tilde"]),
            script_mode: ScriptMode::PerRecord,
            document_selection: DocumentSelection::Uniform,
            max_span_attempts: 1000,
        }
    }
}

impl EnglishGenConfig {
    pub fn validate(&self) -> Result<(), LabelGenError> {
        for (name, p) in [
            ("superscript_prob", self.superscript_prob),
            ("subscript_prob", self.subscript_prob),
            ("symbol_prob", self.symbol_prob),
            ("line_break_prob", self.line_break_prob),
            ("arg_letter_prob", self.arg_letter_prob),
        ] {
            check_probability(name, p)?;
        }
        if self.max_words < 1 || self.max_breaks < 1 {
            return Err(LabelGenError::Config(
                "max_words and max_breaks must be >= 1".into(),
            ));
        }
        if self.symbol_prob > 0.0
            && self.symbol_inventory.is_empty()
            && self.arg_command_inventory.is_empty()
        {
            return Err(LabelGenError::Config("symbol inventories are empty".into()));
        }
        Ok(())
    }
}

/// Normalized probabilities of inserting `i` line breaks, `i = 1..=max_breaks`,
/// with weight `1 / i^2`.
pub fn break_count_law(max_breaks: usize) -> Vec<f64> {
    let weights: Vec<f64> = (1..=max_breaks).map(|i| 1.0 / (i * i) as f64).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Every random decision behind one English label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnglishDraw {
    pub words: Vec<String>,
    /// `(word index, content)`.
    pub superscripts: Vec<(usize, String)>,
    pub subscripts: Vec<(usize, String)>,
    /// `(slot, token)`; slot `i` places the token before word `i`, slot
    /// `words.len()` after the last word.
    pub symbol: Option<(usize, String)>,
    /// Break count drawn from the law, before clamping to available gaps.
    pub breaks_drawn: usize,
    /// Gap indices (gap `g` follows token `g`) that become line breaks.
    pub breaks: Vec<usize>,
}

impl EnglishDraw {
    pub fn to_label(&self) -> LatexLabel {
        let mut tokens: Vec<String> = self.words.clone();
        for (i, content) in &self.superscripts {
            tokens[*i].push_str(&format!("^{{{content}}}"));
        }
        for (i, content) in &self.subscripts {
            tokens[*i].push_str(&format!("_{{{content}}}"));
        }
        if let Some((slot, token)) = &self.symbol {
            tokens.insert(*slot, token.clone());
        }
        let mut text = String::new();
        for (i, token) in tokens.iter().enumerate() {
            if i > 0 {
                text.push_str(if self.breaks.contains(&(i - 1)) {
                    " \\\\ "
                } else {
                    " "
                });
            }
            text.push_str(token);
        }
        LatexLabel::new(text, LabelKind::English)
    }
}

/// Whether a corpus word can sit verbatim in a label.
pub fn latex_safe_word(word: &str) -> bool {
    !word.is_empty() && word.chars().all(|c| c != ' ' && is_run_char(c))
}

/// Draws the perturbations for a given span of words.
pub fn draw_english<R: Rng + ?Sized>(
    words: Vec<String>,
    cfg: &EnglishGenConfig,
    rng: &mut R,
) -> EnglishDraw {
    let n = words.len();
    let mut draw = EnglishDraw {
        words,
        ..EnglishDraw::default()
    };

    match cfg.script_mode {
        ScriptMode::PerRecord => {
            if rng.gen_bool(cfg.superscript_prob) {
                draw.superscripts
                    .push((rng.gen_range(0..n), gen_script_content(rng)));
            }
            if rng.gen_bool(cfg.subscript_prob) {
                draw.subscripts
                    .push((rng.gen_range(0..n), gen_script_content(rng)));
            }
        }
        ScriptMode::PerWord => {
            for i in 0..n {
                if rng.gen_bool(cfg.superscript_prob) {
                    draw.superscripts.push((i, gen_script_content(rng)));
                }
                if rng.gen_bool(cfg.subscript_prob) {
                    draw.subscripts.push((i, gen_script_content(rng)));
                }
            }
        }
    }

    if rng.gen_bool(cfg.symbol_prob) {
        let plain = cfg.symbol_inventory.len();
        let pick = rng.gen_range(0..plain + cfg.arg_command_inventory.len());
        let token = if pick < plain {
            cfg.symbol_inventory[pick].clone()
        } else {
            let command = &cfg.arg_command_inventory[pick - plain];
            let arg = if rng.gen_bool(cfg.arg_letter_prob) {
                const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
                LETTERS[rng.gen_range(0..LETTERS.len())] as char
            } else {
                char::from(b'0' + rng.gen_range(0..10u8))
            };
            format!("{command}{{{arg}}}")
        };
        draw.symbol = Some((rng.gen_range(0..=n), token));
    }

    if rng.gen_bool(cfg.line_break_prob) {
        let law = WeightedIndex::new(break_count_law(cfg.max_breaks)).expect("positive weights");
        draw.breaks_drawn = law.sample(rng) + 1;
        let gaps = n + usize::from(draw.symbol.is_some()) - 1;
        let k = draw.breaks_drawn.min(gaps);
        let mut chosen = index::sample(rng, gaps, k).into_vec();
        chosen.sort_unstable();
        draw.breaks = chosen;
    }
    draw
}

/// Samples a span and perturbs it. Words with LaTeX-reserved characters are
/// avoided by resampling the span.
pub fn gen_english_label<R: Rng + ?Sized>(
    corpus: &Corpus,
    cfg: &EnglishGenConfig,
    rng: &mut R,
) -> Result<LatexLabel, LabelGenError> {
    gen_english_label_with(corpus, cfg, rng, &|_| true)
}

/// Like [`gen_english_label`], also resampling spans containing characters
/// rejected by `renderable` (typically a font-coverage check).
pub fn gen_english_label_with<R: Rng + ?Sized>(
    corpus: &Corpus,
    cfg: &EnglishGenConfig,
    rng: &mut R,
    renderable: &dyn Fn(char) -> bool,
) -> Result<LatexLabel, LabelGenError> {
    cfg.validate()?;
    let sample = sample_accepted_span(
        corpus,
        rng,
        cfg.max_words,
        cfg.document_selection,
        cfg.max_span_attempts,
        |w| latex_safe_word(w) && w.chars().all(renderable),
    )?;
    Ok(draw_english(sample.words, cfg, rng).to_label())
}
