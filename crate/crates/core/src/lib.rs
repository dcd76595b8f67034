//! Idempotent linear logic workbench.
//!
//! Linear logic with idempotent exponential modalities replaces Dereliction
//! and Promotion by block rules (n-Dereliction, n-Promotion) guarded by
//! main-connective side conditions, so a `?ⁿ`/`!ⁿ` block behaves as a single
//! connective. This crate provides:
//!
//! - [`syntax`]: formulas in negation normal form, parsing and printing,
//!   De Morgan duality;
//! - [`calculus`]: proof trees and a rule-by-rule checker for both LL and
//!   IdLL (shared multiplicative/additive core, block exponentials);
//! - [`sexpr`]: the textual proof format;
//! - [`cutelim`]: single-step cut reduction and full normalization;
//! - [`bridge`]: proof translations between the two systems, bounded
//!   provability search, and exhaustive cut-free proof enumeration;
//! - [`totspace`]: finite totality spaces and the monoidal/comonad structure
//!   over them, computed exhaustively;
//! - [`laws`]: executable law bundles over the model, with counterexample
//!   reporting;
//! - [`semantics`]: denotations of checked proofs in totality spaces and the
//!   cut-elimination soundness suite;
//! - [`corpus`]: deterministic generators used by the test suites and the
//!   CLI.

pub mod bridge;
pub mod calculus;
pub mod corpus;
pub mod laws;
pub mod cutelim;
pub mod semantics;
pub mod sexpr;
pub mod syntax;
pub mod totspace;

pub use calculus::{AxiomMode, Logic, Proof, RuleError, RuleTag, System};
pub use syntax::{Formula, Sequent};
