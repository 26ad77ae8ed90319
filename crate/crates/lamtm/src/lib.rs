//! Compilation of two-tape Turing machines into the deterministic
//! lambda-calculus, with an exact beta-step-counting evaluator.
//!
//! The deterministic calculus restricts application arguments to values
//! (variables and abstractions), so every closed term has at most one
//! redex and evaluation is a deterministic sequence of beta steps. This
//! crate provides:
//!
//! - [`term`]: terms, the deterministic grammar check, substitution,
//!   alpha-equivalence, printing and parsing;
//! - [`eval`]: the single-step reduction relation and a fuelled evaluator
//!   that counts beta steps exactly;
//! - [`encode`]: Scott encodings of symbols and strings, plus the
//!   constant-time append combinator;
//! - [`revbin`]: natural numbers as reversed binary strings and the
//!   continuation-passing successor, predecessor and positional lookup
//!   terms operating on them;
//! - [`machine`]: the machine model (read-only input tape with boundary
//!   markers, read-write work tape), a parser for `.tm` files, and a
//!   direct simulator used as an independent oracle;
//! - [`compile`]: the compiler proper, from machines and configurations
//!   to lambda-terms;
//! - [`corpus`]: the example machines shipped in `machines/`.

pub mod compile;
pub mod corpus;
pub mod encode;
pub mod eval;
pub mod machine;
pub mod revbin;
pub mod term;
