//! Synthetic OCR records with LaTeX ground truth.
//!
//! Labels come from [`labelgen`], are typeset and rasterized by
//! [`texlayout`], corrupted by [`transforms`] and collected into datasets
//! by [`dataset`]. [`metrics`] scores OCR output against the labels.
//!
//! The `parallel` feature (on by default) runs record generation and
//! row-wise image passes on rayon; without it the same code runs
//! sequentially and produces identical output.

pub mod corpus;
pub mod dataset;
pub mod labelgen;
pub mod metrics;
pub mod par;
pub mod seed;
pub mod texlayout;
pub mod transforms;
