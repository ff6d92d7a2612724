//! Finite-alphabet probability distributions, information measures, and
//! method-of-types machinery.
//!
//! A [`Distribution`] is a validated point of the probability simplex over
//! the alphabet `{0, .., d-1}`. A [`TypeVector`] is the empirical histogram
//! of an n-length word; the set of all types of length n is the natural
//! discretization of the simplex at resolution 1/n, and exact type-class
//! probabilities drive all small-instance oracles in this crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::{ln_gamma, log_add, xlny};
use crate::{Error, Result};

/// Tolerance for the sum-to-one check on construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Default cap on the number of types an enumeration may produce.
pub const DEFAULT_TYPE_CAP: u128 = 10_000_000;

/// A probability vector over a finite alphabet of size `d >= 2`.
///
/// Entries are nonnegative and sum to one within [`NORMALIZATION_TOL`].
/// Inputs are never silently rescaled; use [`Distribution::normalized`] to
/// renormalize explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "alphabet size {} < 2",
                probs.len()
            )));
        }
        let mut sum = 0.0;
        for &x in &probs {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "probability entry {x} not in [0, 1]"
                )));
            }
            sum += x;
        }
        if libm::fabs(sum - 1.0) > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { probs })
    }

    /// Rescales a nonnegative vector to sum to one, then validates.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "cannot normalize vector with total mass {sum}"
            )));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    /// Binary distribution `(1 - p1, p1)`.
    pub fn binary(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidParameter(alloc::format!(
                "p1 = {p1} outside [0, 1]"
            )));
        }
        Self::new(vec![1.0 - p1, p1])
    }

    /// Alphabet size d.
    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// The raw probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of symbol `i`.
    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// True iff every symbol has strictly positive probability.
    pub fn full_support(&self) -> bool {
        self.probs.iter().all(|&x| x > 0.0)
    }
}

/// The histogram of an n-length word: `counts[i]` occurrences of symbol `i`,
/// summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeVector {
    counts: Vec<usize>,
    n: usize,
}

impl TypeVector {
    /// Wraps a count vector; `n` is inferred as the total count.
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "alphabet size {} < 2",
                counts.len()
            )));
        }
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "type vector must count at least one sample".into(),
            ));
        }
        Ok(Self { counts, n })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Alphabet size d.
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// The empirical distribution `counts / n`.
    pub fn frequencies(&self) -> Distribution {
        let n = self.n as f64;
        // counts sum to n exactly, so the ratios pass validation.
        Distribution::new(self.counts.iter().map(|&c| c as f64 / n).collect())
            .expect("empirical type is a valid distribution")
    }
}

/// Relative entropy D(mu || nu) in nats.
///
/// Returns `+inf` iff some symbol has `mu(i) > 0` and `nu(i) = 0`; the
/// convention `0 ln(0/x) = 0` applies elsewhere.
pub fn kl_divergence(mu: &Distribution, nu: &Distribution) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            left: mu.dim(),
            right: nu.dim(),
        });
    }
    let mut sum = 0.0;
    for (&m, &v) in mu.probs().iter().zip(nu.probs()) {
        if m == 0.0 {
            continue;
        }
        if v == 0.0 {
            return Ok(f64::INFINITY);
        }
        sum += m * libm::log(m / v);
    }
    // Gibbs: tiny negative values are pure rounding.
    Ok(if sum < 0.0 && sum > -1e-15 { 0.0 } else { sum })
}

/// Shannon entropy H(mu) in nats, with `0 ln 0 = 0`.
pub fn entropy(mu: &Distribution) -> f64 {
    let mut h = 0.0;
    for &x in mu.probs() {
        h -= xlny(x, x);
    }
    if h < 0.0 {
        0.0
    } else {
        h
    }
}

/// The type of a word over the alphabet `{0, .., d-1}`.
pub fn empirical_type(word: &[usize], d: usize) -> Result<TypeVector> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("empty word has no type".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "alphabet size {d} < 2"
        )));
    }
    let mut counts = vec![0usize; d];
    for &x in word {
        if x >= d {
            return Err(Error::SymbolOutOfRange {
                symbol: x,
                alphabet: d,
            });
        }
        counts[x] += 1;
    }
    TypeVector::new(counts)
}

/// Number of types of n-length words over a d-letter alphabet,
/// i.e. C(n + d - 1, d - 1).
pub fn count_types(n: usize, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..(d - 1) as u128 {
        acc = acc.saturating_mul(n as u128 + 1 + i) / (i + 1);
    }
    acc
}

/// All types of n-length words over `{0, .., d-1}`, in lexicographic order
/// of the count vectors. Errors if the count exceeds [`DEFAULT_TYPE_CAP`].
pub fn enumerate_types(n: usize, d: usize) -> Result<Vec<TypeVector>> {
    enumerate_types_capped(n, d, DEFAULT_TYPE_CAP)
}

/// As [`enumerate_types`] with an explicit size cap.
pub fn enumerate_types_capped(n: usize, d: usize, cap: u128) -> Result<Vec<TypeVector>> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "type enumeration needs n >= 1, d >= 2 (got n = {n}, d = {d})"
        )));
    }
    let total = count_types(n, d);
    if total > cap {
        return Err(Error::SizeCapExceeded {
            required: total,
            cap,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut counts = vec![0usize; d];
    compositions(n, 0, &mut counts, &mut out);
    Ok(out)
}

fn compositions(remaining: usize, slot: usize, counts: &mut Vec<usize>, out: &mut Vec<TypeVector>) {
    if slot == counts.len() - 1 {
        counts[slot] = remaining;
        out.push(TypeVector::new(counts.clone()).expect("composition sums to n"));
        return;
    }
    for c in 0..=remaining {
        counts[slot] = c;
        compositions(remaining - c, slot + 1, counts, out);
    }
    counts[slot] = 0;
}

/// Exact log-probability that n i.i.d. draws from `q` realize the type `tv`:
/// `ln [ multinomial(n; counts) * prod_i q(i)^counts[i] ]`, computed through
/// log-gamma. Returns `-inf` when a positive count meets a zero probability.
pub fn type_class_log_prob(tv: &TypeVector, q: &Distribution) -> Result<f64> {
    if tv.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: tv.dim(),
            right: q.dim(),
        });
    }
    let n = tv.n();
    let mut log_p = ln_gamma(n as f64 + 1.0);
    for (&c, &qi) in tv.counts().iter().zip(q.probs()) {
        log_p -= ln_gamma(c as f64 + 1.0);
        log_p += xlny(c as f64, qi);
    }
    Ok(log_p)
}

/// Method-of-types sandwich on the probability of a type class:
/// `(log_lower, log_upper)` with
/// `log_upper = -n D(nu || q)` and `log_lower = -d ln(n+1) - n D(nu || q)`,
/// where `nu = counts / n`.
pub fn type_prob_bounds(tv: &TypeVector, q: &Distribution) -> Result<(f64, f64)> {
    let nu = tv.frequencies();
    let div = kl_divergence(&nu, q)?;
    let n = tv.n() as f64;
    let d = tv.dim() as f64;
    let log_upper = -n * div;
    let log_lower = -d * libm::log(n + 1.0) - n * div;
    Ok((log_lower, log_upper))
}

/// Log-probability of a whole acceptance/rejection set of types under `q`:
/// log-sum-exp of [`type_class_log_prob`] accumulated in the given (fixed)
/// iteration order.
pub(crate) fn log_prob_of_types<'a>(
    types: impl Iterator<Item = &'a TypeVector>,
    q: &Distribution,
) -> Result<f64> {
    let mut acc = f64::NEG_INFINITY;
    for tv in types {
        acc = log_add(acc, type_class_log_prob(tv, q)?);
    }
    Ok(acc)
}
