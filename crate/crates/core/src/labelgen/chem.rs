//! Pseudo-chemical equations: element symbols with quantity subscripts,
//! compounds joined by conjoiner words. No chemical validity is implied.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LabelGenError, LabelKind, LatexLabel, ELEMENT_SYMBOLS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChemGenConfig {
    pub max_compounds: u32,
    pub max_elements: u32,
    pub max_quantity: u32,
    pub conjoiners: Vec<String>,
    pub element_symbols: Vec<String>,
}

impl Default for ChemGenConfig {
    fn default() -> Self {
        Self {
            max_compounds: 4,
            max_elements: 4,
            max_quantity: 500,
            conjoiners: ["+", "with", "and", "plus"].map(String::from).to_vec(),
            element_symbols: ELEMENT_SYMBOLS.map(String::from).to_vec(),
        }
    }
}

impl ChemGenConfig {
    pub fn validate(&self) -> Result<(), LabelGenError> {
        if self.max_compounds < 1 || self.max_elements < 1 || self.max_quantity < 1 {
            return Err(LabelGenError::Config(
                "max_compounds, max_elements and max_quantity must be >= 1".into(),
            ));
        }
        if self.conjoiners.is_empty() || self.element_symbols.is_empty() {
            return Err(LabelGenError::Config(
                "conjoiners and element_symbols must be non-empty".into(),
            ));
        }
        Ok(())
    }
}

/// `(element symbol, quantity)` pairs of each compound, and the conjoiner
/// placed after each compound but the last.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChemDraw {
    pub compounds: Vec<Vec<(String, u32)>>,
    pub conjoiners: Vec<String>,
}

pub(crate) fn compound_text(elements: &[(String, u32)]) -> String {
    let mut out = String::new();
    for (symbol, quantity) in elements {
        out.push_str(symbol);
        if *quantity > 1 {
            out.push_str(&format!("_{{{quantity}}}"));
        }
    }
    out
}

impl ChemDraw {
    pub fn to_label(&self) -> LatexLabel {
        let mut text = String::new();
        for (i, compound) in self.compounds.iter().enumerate() {
            if i > 0 {
                text.push(' ');
                text.push_str(&self.conjoiners[i - 1]);
                text.push(' ');
            }
            text.push_str(&compound_text(compound));
        }
        LatexLabel::new(text, LabelKind::Chem)
    }
}

pub fn draw_compound<R: Rng + ?Sized>(cfg: &ChemGenConfig, rng: &mut R) -> Vec<(String, u32)> {
    let n_elements = rng.gen_range(1..=cfg.max_elements);
    (0..n_elements)
        .map(|_| {
            let symbol = cfg.element_symbols[rng.gen_range(0..cfg.element_symbols.len())].clone();
            (symbol, rng.gen_range(1..=cfg.max_quantity))
        })
        .collect()
}

/// One compound, e.g. `H_{2}O`.
pub fn gen_compound<R: Rng + ?Sized>(cfg: &ChemGenConfig, rng: &mut R) -> String {
    compound_text(&draw_compound(cfg, rng))
}

pub fn draw_chem<R: Rng + ?Sized>(cfg: &ChemGenConfig, rng: &mut R) -> ChemDraw {
    let n_compounds = rng.gen_range(1..=cfg.max_compounds);
    let mut draw = ChemDraw::default();
    for i in 0..n_compounds {
        if i > 0 {
            draw.conjoiners
                .push(cfg.conjoiners[rng.gen_range(0..cfg.conjoiners.len())].clone());
        }
        draw.compounds.push(draw_compound(cfg, rng));
    }
    draw
}

pub fn gen_chem_label<R: Rng + ?Sized>(
    cfg: &ChemGenConfig,
    rng: &mut R,
) -> Result<LatexLabel, LabelGenError> {
    cfg.validate()?;
    Ok(draw_chem(cfg, rng).to_label())
}
