//! Exact lower/upper conditional-probability bounds for System P defaults.
//!
//! The crate is organised bottom-up:
//!
//! - [`logic`]: formulas, conditional events, truth tables and worlds;
//! - [`rules`]: closed-form envelopes and interval forms of every inference
//!   rule, plus the ε-forms used for high-probability defaults;
//! - [`lp`]: an exact rational simplex solver;
//! - [`coherence`]: coherence and g-coherence checking, tight extension
//!   bounds and probabilistic entailment over world weights;
//! - [`engine`]: an interval-annotated knowledge base with forward chaining
//!   and proof traces;
//! - [`oracle`]: brute-force vertex and grid search used to cross-check the
//!   rule envelopes;
//! - [`kbfile`]: the line-oriented knowledge-base file format.

// Errors carry the offending exact rationals, which are wide but rare.
#![allow(clippy::result_large_err)]

pub mod coherence;
pub mod engine;
pub mod kbfile;
pub mod logic;
pub mod lp;
pub mod oracle;
pub mod par;
pub mod rational;
pub mod rules;

pub use rational::Rational;
