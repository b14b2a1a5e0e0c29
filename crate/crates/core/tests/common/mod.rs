#![allow(dead_code)]

use std::path::PathBuf;

use ocrgen_core::corpus::Corpus;
use ocrgen_core::seed::rng_from_seed;
use rand::Rng;

const VOCAB: &[&str] = &[
    "the",
    "of",
    "and",
    "in",
    "to",
    "a",
    "is",
    "for",
    "with",
    "that",
    "we",
    "by",
    "on",
    "as",
    "are",
    "this",
    "from",
    "at",
    "be",
    "which",
    "was",
    "were",
    "these",
    "our",
    "an",
    "results",
    "model",
    "data",
    "method",
    "analysis",
    "temperature",
    "energy",
    "protein",
    "cell",
    "cells",
    "sample",
    "samples",
    "measured",
    "observed",
    "increase",
    "decrease",
    "significant",
    "between",
    "using",
    "study",
    "function",
    "structure",
    "surface",
    "phase",
    "transition",
    "density",
    "field",
    "magnetic",
    "electron",
    "quantum",
    "state",
    "states",
    "spectrum",
    "frequency",
    "signal",
    "noise",
    "error",
    "estimate",
    "parameter",
    "parameters",
    "distribution",
    "probability",
    "random",
    "variable",
    "equation",
    "solution",
    "boundary",
    "condition",
    "flow",
    "pressure",
    "velocity",
    "layer",
    "thickness",
    "film",
    "crystal",
    "lattice",
    "bond",
    "binding",
    "affinity",
    "receptor",
    "ligand",
    "expression",
    "gene",
    "genes",
    "mutation",
    "tissue",
    "patients",
    "clinical",
    "trial",
    "dose",
    "response",
    "network",
    "graph",
    "node",
    "algorithm",
    "training",
    "performance",
    "accuracy",
    "baseline",
    "proposed",
    "approach",
    "framework",
    "theory",
    "proof",
    "lemma",
    "bound",
    "upper",
    "lower",
    "order",
    "linear",
    "nonlinear",
    "stable",
    "unstable",
    "(see",
    "Fig.",
    "Table",
    "et",
    "al.",
    "i.e.,",
    "e.g.,",
    "respectively.",
    "however,",
    "furthermore,",
    "finally,",
    "1.5",
    "300",
    "0.01",
    "K.",
    "nm",
    "mM",
    "ratio",
    "naïve",
    "Schrödinger",
    "α-helix",
    "Gaussian",
    "Fourier",
    "Monte",
    "Carlo",
    "Hamiltonian",
    "eigenvalue",
    "(2019)",
    "[12]",
    "[3,",
    "7]",
    "p<0.05",
    "±",
    "ΔG",
    "μm",
];

/// Deterministic pseudo-scientific documents.
pub fn synthetic_corpus(docs: usize, min_words: usize, max_words: usize, seed: u64) -> Corpus {
    let mut rng = rng_from_seed(seed);
    let texts: Vec<String> = (0..docs)
        .map(|_| {
            let n = rng.gen_range(min_words..=max_words);
            (0..n)
                .map(|_| VOCAB[rng.gen_range(0..VOCAB.len())])
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Corpus::from_texts(
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("doc{i}"), t)),
    )
    .expect("non-empty corpus")
}

pub fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(path)
}
