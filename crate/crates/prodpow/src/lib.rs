//! Exact parametrizations of product-power equations in positive integers.
//!
//! The central object is the equation
//!
//! ```text
//! x1 * x2 * ... * x_{m-1} = z^n          (m >= 3, n >= 2)
//! ```
//!
//! together with systems of such equations that share variables. This crate
//! provides, entirely over arbitrary-precision positive integers:
//!
//! - [`arith`] — gcd, prime-support extraction, perfect-power roots and
//!   divisor enumeration (the only primitives everything else is built on);
//! - [`monomial`] — parametric families as exponent vectors over named
//!   parameters, with symbolic identity checking and numeric instantiation;
//! - [`coprime`] — the coprime splitting of `a*b = e*g^n` under
//!   `gcd(a,b) = 1`, and the two-by-two parameter family for `x*y = k*z^n`
//!   in both generate and recover directions;
//! - [`reduction`] — the reduction of the m-variable equation to a small
//!   system, and the gcd-descent parametrization of `w^(n-2) = v*d^2`;
//! - [`general`] — the full recursive parametrization of the m-variable
//!   equation (generate/decompose), its parameter count, and a symbolic
//!   expansion into a family over free parameters;
//! - [`system`] — a solver for systems of product-power equations with
//!   shared variables, built on gcd-based unification of monomial formulas;
//! - [`audit`] — brute-force enumeration oracles and soundness/completeness
//!   audits of every family against them;
//! - [`fixtures`] — transcribed closed-form families kept as audit targets
//!   (their verdicts are reported, never assumed).
//!
//! Families produced by the generators are *sound by construction* (every
//! instantiation is an exact solution) and the audits measure completeness
//! empirically at desk scale, reporting any coverage gap as a finding.
//!
//! The crate is `no_std` (it requires `alloc`); IO, file formats and the
//! command-line interface live in the companion `prodpow-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod audit;
pub mod coprime;
pub mod fixtures;
pub mod general;
pub mod monomial;
pub mod reduction;
pub mod rng;
pub mod system;

mod error;

pub use error::Error;

/// Outcome of an inversion procedure: either parameters that regenerate the
/// input exactly, or a coverage gap — a concrete value provably unreachable
/// by the family within its own search bounds.
///
/// A gap is a *finding*, not a failure: the audits collect gaps and report
/// them. Errors (violated preconditions, internal defects) are signalled
/// separately through [`Error`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovery<P> {
    /// Parameters that regenerate the input exactly.
    Recovered(P),
    /// The input is not reachable by the family.
    Gap,
}

impl<P> Recovery<P> {
    pub fn is_gap(&self) -> bool {
        matches!(self, Recovery::Gap)
    }

    pub fn recovered(self) -> Option<P> {
        match self {
            Recovery::Recovered(p) => Some(p),
            Recovery::Gap => None,
        }
    }
}
