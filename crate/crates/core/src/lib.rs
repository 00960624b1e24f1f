//! Exact enumeration and asymptotic verification for tree-child
//! phylogenetic networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`networks`]: network representation, validation, structural queries,
//!   canonical codes and the text/JSON serialization formats.
//! * [`enumerate`]: brute-force ground truth (trees, tree-child networks
//!   stratified by reticulation count, words of the class `A_n`).
//! * [`words`]: the word class and the bijection with tree-child networks
//!   that carry the maximal number `n - 1` of reticulations.
//! * [`recurrences`]: exact big-integer tables `b_{n,m}`, `a_n`, ballot and
//!   Catalan numbers and the elementary bounds built on them.
//! * [`asymptotics`]: exact rational tables `d`, `d̂`, `p`, interval
//!   arithmetic, Airy evaluation, the Airy certificate inequalities and the
//!   log-scale main terms.
//! * [`closed_forms`]: node-labeled counts and the 1-component closed forms
//!   with their Laplace-method main terms.
//!
//! Data-parallel loops go through [`exec::Strategy`]; with the `parallel`
//! feature disabled every strategy runs sequentially.

pub mod asymptotics;
pub mod closed_forms;
pub mod enumerate;
mod error;
pub mod exec;
pub mod networks;
pub mod recurrences;
pub mod words;

pub use error::{Error, Result};
