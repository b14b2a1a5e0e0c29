mod common;

use std::sync::OnceLock;

use ocrgen_core::corpus::Corpus;
use ocrgen_core::labelgen::{
    gen_chem_label, gen_compound, gen_english_label, gen_numeric_label, gen_script_content,
    ChemGenConfig, EnglishGenConfig, LatexLabel, NumericGenConfig, ELEMENT_SYMBOLS,
};
use ocrgen_core::seed::rng_from_seed;
use ocrgen_core::texlayout::{parse_label, serialize};
use proptest::prelude::*;

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| common::synthetic_corpus(50, 1, 400, 11))
}

fn round_trips(label: &LatexLabel) {
    let ast = parse_label(&label.text).unwrap_or_else(|e| panic!("{:?}: {e}", label.text));
    let again = parse_label(&serialize(&ast)).unwrap();
    assert_eq!(again, ast, "{:?}", label.text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn english_labels_round_trip(seed in any::<u64>()) {
        let label = gen_english_label(corpus(), &EnglishGenConfig::default(), &mut rng_from_seed(seed)).unwrap();
        round_trips(&label);
    }

    #[test]
    fn chem_labels_round_trip(seed in any::<u64>()) {
        let label = gen_chem_label(&ChemGenConfig::default(), &mut rng_from_seed(seed)).unwrap();
        round_trips(&label);
        prop_assert!(!label.text.contains("_{1}"), "{}", label.text);
        prop_assert!(!label.text.contains('$'));
    }

    #[test]
    fn numeric_labels_round_trip(seed in any::<u64>()) {
        let label = gen_numeric_label(&NumericGenConfig::default(), &mut rng_from_seed(seed)).unwrap();
        round_trips(&label);
    }

    #[test]
    fn perturbation_heavy_english_round_trips(seed in any::<u64>()) {
        let cfg = EnglishGenConfig {
            superscript_prob: 1.0,
            subscript_prob: 1.0,
            symbol_prob: 1.0,
            line_break_prob: 1.0,
            ..EnglishGenConfig::default()
        };
        let label = gen_english_label(corpus(), &cfg, &mut rng_from_seed(seed)).unwrap();
        round_trips(&label);
        prop_assert!(label.text.contains("^{") && label.text.contains("_{"), "{}", label.text);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>()) {
        let run = || {
            let mut rng = rng_from_seed(seed);
            (
                gen_english_label(corpus(), &EnglishGenConfig::default(), &mut rng).unwrap(),
                gen_chem_label(&ChemGenConfig::default(), &mut rng).unwrap(),
                gen_numeric_label(&NumericGenConfig::default(), &mut rng).unwrap(),
            )
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn script_content_class(seed in any::<u64>()) {
        let s = gen_script_content(&mut rng_from_seed(seed));
        prop_assert!((1..=3).contains(&s.len()));
        prop_assert!(s.chars().all(|c| c.is_ascii_alphabetic()) || s.chars().all(|c| c.is_ascii_digit()));
    }

    #[test]
    fn compound_element_count(seed in any::<u64>()) {
        let cfg = ChemGenConfig::default();
        let text = gen_compound(&cfg, &mut rng_from_seed(seed));
        prop_assert!(parse_label(&text).is_ok(), "{text}");
        // Element symbols are whatever remains outside the subscripts.
        let letters: String = text
            .split("_{")
            .map(|part| part.split_once('}').map_or(part, |(_, rest)| rest))
            .collect();
        let mut count = 0;
        let mut chars = letters.chars().peekable();
        while let Some(c) = chars.next() {
            prop_assert!(c.is_ascii_uppercase(), "{text}");
            let mut sym = c.to_string();
            if let Some(&n) = chars.peek() {
                if n.is_ascii_lowercase() {
                    sym.push(n);
                    chars.next();
                }
            }
            prop_assert!(ELEMENT_SYMBOLS.contains(&sym.as_str()), "{sym}");
            count += 1;
        }
        prop_assert!((1..=cfg.max_elements).contains(&count), "{text}");
    }
}

#[test]
fn quiet_english_is_plain_span() {
    let cfg = EnglishGenConfig {
        superscript_prob: 0.0,
        subscript_prob: 0.0,
        symbol_prob: 0.0,
        line_break_prob: 0.0,
        ..EnglishGenConfig::default()
    };
    let corpus = Corpus::from_texts([("d", "water level rises")]).unwrap();
    let mut rng = rng_from_seed(0);
    for _ in 0..50 {
        let label = gen_english_label(&corpus, &cfg, &mut rng).unwrap();
        assert!("water level rises".ends_with(&label.text), "{}", label.text);
        assert!(!label.text.contains("  "));
    }
}
