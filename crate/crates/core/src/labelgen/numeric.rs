//! Numeric records: decimals and math symbols joined by operators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_probability, LabelGenError, LabelKind, LatexLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericGenConfig {
    pub max_numerals: u32,
    /// Chance a numeral is a decimal rather than a math symbol.
    pub decimal_prob: f64,
    pub decimal_max: f64,
    /// Fractional digit count is drawn uniformly from `0..=max_fraction_digits`.
    pub max_fraction_digits: u32,
    pub joiners: Vec<String>,
    pub math_symbol_inventory: Vec<String>,
}

impl Default for NumericGenConfig {
    fn default() -> Self {
        let strings = |xs: &[&str]| xs.iter().map(|s| (*s).to_owned()).collect();
        Self {
            max_numerals: 4,
            decimal_prob: 0.5,
            decimal_max: 100_000.0,
            max_fraction_digits: 3,
            joiners: strings(&["+", "\\pm", "\\neq"]),
            math_symbol_inventory: strings(&[
                "\\lambda", "\\beta", "\\Psi", "\\alpha", "\\pi", "\\mu", "\\nu", "\\xi", "\\phi",
                "\\chi", "\\psi", "\\rho", "\\eta", "\\tau", "\\Phi", "\\Pi",
            ]),
        }
    }
}

impl NumericGenConfig {
    pub fn validate(&self) -> Result<(), LabelGenError> {
        check_probability("decimal_prob", self.decimal_prob)?;
        if self.max_numerals < 1 {
            return Err(LabelGenError::Config("max_numerals must be >= 1".into()));
        }
        if !(self.decimal_max >= 0.0 && self.decimal_max.is_finite()) {
            return Err(LabelGenError::Config(
                "decimal_max must be finite and >= 0".into(),
            ));
        }
        if self.joiners.is_empty() {
            return Err(LabelGenError::Config("joiners must be non-empty".into()));
        }
        if self.decimal_prob < 1.0 && self.math_symbol_inventory.is_empty() {
            return Err(LabelGenError::Config(
                "math_symbol_inventory must be non-empty".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Numeral {
    /// Already formatted, e.g. `"42.5"`.
    Decimal(String),
    Symbol(String),
}

impl Numeral {
    fn text(&self) -> &str {
        match self {
            Numeral::Decimal(s) | Numeral::Symbol(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NumericDraw {
    pub numerals: Vec<Numeral>,
    /// Joiner placed after each numeral but the last.
    pub joiners: Vec<String>,
}

impl NumericDraw {
    pub fn to_label(&self) -> LatexLabel {
        let mut text = String::new();
        for (i, numeral) in self.numerals.iter().enumerate() {
            if i > 0 {
                text.push(' ');
                text.push_str(&self.joiners[i - 1]);
                text.push(' ');
            }
            text.push_str(numeral.text());
        }
        LatexLabel::new(text, LabelKind::Numeric)
    }
}

pub fn draw_numeric<R: Rng + ?Sized>(cfg: &NumericGenConfig, rng: &mut R) -> NumericDraw {
    let n = rng.gen_range(1..=cfg.max_numerals);
    let mut draw = NumericDraw::default();
    for i in 0..n {
        if i > 0 {
            draw.joiners
                .push(cfg.joiners[rng.gen_range(0..cfg.joiners.len())].clone());
        }
        let numeral = if rng.gen_bool(cfg.decimal_prob) {
            let value = rng.gen_range(0.0..=cfg.decimal_max);
            let digits = rng.gen_range(0..=cfg.max_fraction_digits) as usize;
            Numeral::Decimal(format!("{value:.digits$}"))
        } else {
            let pick = rng.gen_range(0..cfg.math_symbol_inventory.len());
            Numeral::Symbol(cfg.math_symbol_inventory[pick].clone())
        };
        draw.numerals.push(numeral);
    }
    draw
}

pub fn gen_numeric_label<R: Rng + ?Sized>(
    cfg: &NumericGenConfig,
    rng: &mut R,
) -> Result<LatexLabel, LabelGenError> {
    cfg.validate()?;
    Ok(draw_numeric(cfg, rng).to_label())
}
