//! Core algorithms for characterizing tumor-like regions from contour and
//! texture data, and for fusing ensembles of binary classifiers.
//!
//! The crate is organized as a pipeline:
//!
//! 1. [`geometry`] — closed contours and their centroid-to-boundary radial
//!    distance signals, the base carrier for shape analysis.
//! 2. [`transforms`] — DFT spectrum envelopes and multi-level DWT bands,
//!    the derived carrier signals.
//! 3. [`features`] — seven uniresolution curve features over any carrier,
//!    plus a 20-function texture bank over image sampling boxes.
//! 4. [`analysis`] — Welch t ranking, Wilks' Λ MANOVA, correlation-dimension
//!    estimation and greedy forward feature selection.
//! 5. [`classify`] — Fisher LDA, least-squares minimum distance and k-NN
//!    behind one hard-vote / soft-score interface.
//! 6. [`ensemble`] — weighted majority rule combination with direct, odds
//!    and log-odds weighting profiles, the Bayes-optimal oracle it matches
//!    under conditional independence, and all baseline combiners.
//! 7. [`evaluation`] — confusion/ROC metrics and the repeated stratified
//!    train/validation protocol, including one-vs-rest composition.
//! 8. [`synth`] — seeded generators for four-type mass contours, expert
//!    vote matrices and class-conditioned texture fields.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded use. All randomized operations take explicit
//! seeds and produce identical results for identical inputs (see [`rng`]).

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod classify;
pub mod ensemble;
pub mod evaluation;
pub mod features;
pub mod geometry;
pub mod rng;
pub mod synth;
pub mod transforms;

mod linalg;
mod special;

/// A hard binary decision: `+1` for the positive class, `-1` for the
/// negative class. The positive class is the alarm class (malignant).
pub type Vote = i8;
