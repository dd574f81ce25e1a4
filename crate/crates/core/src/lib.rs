//! Exact straightening calculus for N-graded Möbius vertex algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinatorics`]: generalized binomials, the Pascal / straightening
//!   matrices and the straightening coefficients `c_N(r, n)`;
//! * [`fockspace`]: the backend contract and the rank-1 Heisenberg Fock space;
//! * [`subspaces`]: the subspaces `C_N(V)`, quotient representatives and
//!   explicit decompositions;
//! * [`straightening`]: associativity-derived straightening identities;
//! * [`rewrite`]: the monomial calculus and the normal-form algorithm;
//! * [`parse`], [`cli`], [`verify`]: the command-line front end and the
//!   verification suites.
//!
//! Every scalar is an exact [`Rational`]; no floating point is used anywhere.

pub mod cli;
pub mod combinatorics;
mod error;
pub mod fockspace;
pub mod linalg;
pub mod parse;
pub mod rational;
pub mod rewrite;
pub mod straightening;
pub mod subspaces;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
