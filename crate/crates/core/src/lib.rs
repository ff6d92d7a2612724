//! Adversarial hypothesis-testing games on finite alphabets.
//!
//! An attacker picks a sampling distribution `q` from a set `Q` (paying a
//! cost `c(q)`), a defender observes `n` i.i.d. samples and must decide
//! whether they came from the baseline `p` or from an attacker. This crate
//! computes everything needed to analyze the resulting two-player games:
//!
//! - [`prob`] — distributions, relative entropy, and method-of-types
//!   machinery (type enumeration, exact type-class probabilities, bounds);
//! - [`detect`] — threshold decision rules and exact Type I / Type II
//!   error probabilities in the log domain;
//! - [`games`] — Bayesian and Neyman-Pearson game specifications, player
//!   utilities, and the zero-sum-equivalent payoff matrix;
//! - [`equilibria`] — mixed Nash equilibria of the discretized games via a
//!   dense simplex LP, best-response maps, and the dominant
//!   Neyman-Pearson rule;
//! - [`asymptotics`] — Chernoff and Stein error exponents, the
//!   log-moment-generating-function machinery behind them, and checks of
//!   the structural assumptions the asymptotic results rely on.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through [`libm`]. Everything is a pure function of its inputs and all
//! values are immutable after construction, so they can be shared freely
//! across threads.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod detect;
pub mod equilibria;
pub mod games;
pub mod prob;

mod error;
mod numeric;
mod simplex;

pub use error::{Error, Result};
