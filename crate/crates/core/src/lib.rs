//! Partially commutative (right-angled Artin) groups: trace-word arithmetic,
//! centralisers and conjugacy, equation encoders, generalised equations,
//! Merzlyakov words and Feferman–Vaught splitting, all cross-checked by a
//! bounded brute-force solver.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod formulas;
pub mod fv;
pub mod geneq;
pub mod graph;
pub mod merzlyakov;
pub mod solver;
pub mod structure;
pub mod system;
pub mod trace;
pub mod vankampen;

pub use error::{Error, Result};
pub use graph::{CdimEstimate, CommutationGraph};
pub use trace::{Letter, Word};
pub use formulas::{Formula, Term};
