//! Stochastic ground-truth label generators.
//!
//! Each generator is split in two: a `draw_*` step that makes every random
//! decision and returns them as plain data, and a `to_label` step that turns
//! those decisions into text. Tests construct the decision structs directly.

mod chem;
mod elements;
mod english;
mod numeric;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::chem::{
    draw_chem, draw_compound, gen_chem_label, gen_compound, ChemDraw, ChemGenConfig,
};
pub use self::elements::ELEMENT_SYMBOLS;
pub use self::english::{
    break_count_law, draw_english, gen_english_label, gen_english_label_with, latex_safe_word,
    EnglishDraw, EnglishGenConfig, ScriptMode,
};
pub use self::numeric::{draw_numeric, gen_numeric_label, Numeral, NumericDraw, NumericGenConfig};

use crate::corpus::CorpusError;

/// Which generator (or external source) a label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    English,
    Chem,
    Numeric,
    External,
}

impl LabelKind {
    pub const ALL: [LabelKind; 4] = [
        LabelKind::English,
        LabelKind::Chem,
        LabelKind::Numeric,
        LabelKind::External,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LabelKind::English => "english",
            LabelKind::Chem => "chem",
            LabelKind::Numeric => "numeric",
            LabelKind::External => "external",
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A ground-truth string in the math subset, stored without `$` delimiters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatexLabel {
    pub text: String,
    pub kind: LabelKind,
}

impl LatexLabel {
    pub fn new(text: impl Into<String>, kind: LabelKind) -> Self {
        Self {
            text: text.into(),
            kind,
        }
    }

    /// Strips one pair of surrounding `$` delimiters and outer whitespace.
    pub fn from_delimited(text: &str, kind: LabelKind) -> Self {
        let t = text.trim();
        let inner = t
            .strip_prefix('$')
            .and_then(|s| s.strip_suffix('$'))
            .unwrap_or(t);
        Self::new(inner, kind)
    }

    /// The label as it is handed to a TeX engine.
    pub fn delimited(&self) -> String {
        format!("${}$", self.text)
    }

    pub fn parse(&self) -> Result<crate::texlayout::MathAst, crate::texlayout::ParseError> {
        crate::texlayout::parse_label(&self.text)
    }

    pub fn char_count(&self) -> usize {
        self.text.chars().count()
    }
}

impl fmt::Display for LatexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Error)]
pub enum LabelGenError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

fn check_probability(name: &str, p: f64) -> Result<(), LabelGenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(LabelGenError::Config(format!(
            "{name} must be in [0, 1], got {p}"
        )))
    }
}

/// A 1-3 character script payload: either all letters or all digits.
pub fn gen_script_content<R: Rng + ?Sized>(rng: &mut R) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    const DIGITS: &[u8] = b"0123456789";
    let alphabet = if rng.gen_bool(0.5) { LETTERS } else { DIGITS };
    let len = rng.gen_range(1..=3);
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())] as char)
        .collect()
}
