//! Decision rules and exact finite-n error probabilities.
//!
//! The workhorse is the binary [`ThresholdRule`]: reject the null when the
//! count of 1s in the observed word reaches a threshold, with optional
//! randomization at the boundary count. Tail probabilities are accumulated
//! in the log domain, pairwise with max-subtraction, always in a fixed
//! index order: ascending counts for lower tails, descending for upper.
//! That keeps results bit-identical across runs and thread counts and keeps
//! relative error near machine precision even for tails around `1e-100`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::numeric::{ln_gamma, log_add, xlny};
use crate::prob::{enumerate_types, Distribution, TypeVector};
use crate::{Error, Result};

/// Binary decision rule on n samples: observing `m` ones, declare the
/// alternative with probability 1 if `m >= k`, probability `pi` if
/// `m == k - 1`, and probability 0 below.
///
/// `k = 0` always rejects; `k = n + 1` with `pi = 0` never rejects.
/// `pi = 0` gives the deterministic threshold family.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRule {
    n: usize,
    k: usize,
    pi: f64,
}

impl ThresholdRule {
    pub fn new(n: usize, k: usize, pi: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("rule needs n >= 1".into()));
        }
        if k > n + 1 {
            return Err(Error::InvalidParameter(alloc::format!(
                "threshold k = {k} outside 0..={}",
                n + 1
            )));
        }
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::InvalidParameter(alloc::format!(
                "boundary randomization pi = {pi} outside [0, 1]"
            )));
        }
        Ok(Self { n, k, pi })
    }

    /// Deterministic rule: reject iff the count of 1s is at least `k`.
    pub fn deterministic(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    /// Probability of declaring the alternative on a word with `count` ones.
    pub fn reject_prob(&self, count: usize) -> f64 {
        if count >= self.k {
            1.0
        } else if count + 1 == self.k {
            self.pi
        } else {
            0.0
        }
    }
}

/// Per-(n, distribution) table of log binomial probabilities and both
/// cumulative tails. Building it costs O(n); each error query is O(1).
///
/// Everything that reports a threshold-rule error goes through this table,
/// so a payoff-matrix cell and the standalone error operations produce
/// bit-identical values.
pub(crate) struct BinomialTable {
    /// log P(count = m), m = 0..=n.
    log_pmf: Vec<f64>,
    /// log P(count <= m), m = 0..=n.
    log_lower: Vec<f64>,
    /// log P(count >= m), m = 0..=n+1 (last entry -inf).
    log_upper: Vec<f64>,
}

impl BinomialTable {
    pub(crate) fn new(n: usize, dist: &Distribution) -> Result<Self> {
        if dist.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: dist.dim(),
                right: 2,
            });
        }
        let (p0, p1) = (dist.prob(0), dist.prob(1));
        let ln_n_fact = ln_gamma(n as f64 + 1.0);
        let mut log_pmf = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let lc = ln_n_fact - ln_gamma(m as f64 + 1.0) - ln_gamma((n - m) as f64 + 1.0);
            log_pmf.push(lc + xlny(m as f64, p1) + xlny((n - m) as f64, p0));
        }
        let mut log_lower = Vec::with_capacity(n + 1);
        let mut acc = f64::NEG_INFINITY;
        for m in 0..=n {
            acc = log_add(acc, log_pmf[m]);
            log_lower.push(acc);
        }
        let mut log_upper = alloc::vec![f64::NEG_INFINITY; n + 2];
        let mut acc = f64::NEG_INFINITY;
        for m in (0..=n).rev() {
            acc = log_add(acc, log_pmf[m]);
            log_upper[m] = acc;
        }
        Ok(Self {
            log_pmf,
            log_lower,
            log_upper,
        })
    }

    pub(crate) fn pmf(&self, m: usize) -> f64 {
        libm::exp(self.log_pmf[m])
    }

    /// P(count >= k), k up to n + 1.
    fn upper(&self, k: usize) -> f64 {
        libm::exp(self.log_upper[k])
    }

    /// P(count <= m) for m in -2..=n (empty below 0).
    fn lower(&self, m: isize) -> f64 {
        if m < 0 {
            0.0
        } else {
            libm::exp(self.log_lower[m as usize])
        }
    }

    /// P(reject): the upper tail plus the randomized boundary term.
    pub(crate) fn type_i(&self, k: usize, pi: f64) -> f64 {
        let boundary = if k >= 1 { pi * self.pmf(k - 1) } else { 0.0 };
        self.upper(k) + boundary
    }

    /// P(accept): the strict lower tail plus the boundary remainder.
    pub(crate) fn type_ii(&self, k: usize, pi: f64) -> f64 {
        let boundary = if k >= 1 {
            (1.0 - pi) * self.pmf(k - 1)
        } else {
            0.0
        };
        self.lower(k as isize - 2) + boundary
    }
}

/// False-alarm probability of `rule` when samples come from `p` (d = 2).
pub fn type_i_error(rule: &ThresholdRule, p: &Distribution) -> Result<f64> {
    Ok(BinomialTable::new(rule.n(), p)?.type_i(rule.k(), rule.pi()))
}

/// Missed-detection probability of `rule` when samples come from `q` (d = 2).
pub fn type_ii_error(rule: &ThresholdRule, q: &Distribution) -> Result<f64> {
    Ok(BinomialTable::new(rule.n(), q)?.type_ii(rule.k(), rule.pi()))
}

/// Weighted classification error `type_ii(rule, q) + gamma * type_i(rule, p)`.
/// May exceed 1 when `gamma > 1`.
pub fn bayes_error(
    rule: &ThresholdRule,
    q: &Distribution,
    p: &Distribution,
    gamma: f64,
) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "gamma = {gamma} must be positive"
        )));
    }
    Ok(type_ii_error(rule, q)? + gamma * type_i_error(rule, p)?)
}

/// Deterministic rule over a general alphabet defined by the set of types
/// it accepts the null on.
#[derive(Debug, Clone)]
pub struct TypeAcceptanceRule {
    n: usize,
    d: usize,
    accept: BTreeSet<Vec<usize>>,
}

impl TypeAcceptanceRule {
    /// Builds the rule; every member must be a valid type for `(n, d)`.
    pub fn new(n: usize, d: usize, accept_types: &[TypeVector]) -> Result<Self> {
        if n < 1 || d < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "acceptance rule needs n >= 1, d >= 2 (got n = {n}, d = {d})"
            )));
        }
        let mut accept = BTreeSet::new();
        for tv in accept_types {
            if tv.n() != n || tv.dim() != d {
                return Err(Error::InvalidParameter(alloc::format!(
                    "type with n = {}, d = {} does not fit rule (n = {n}, d = {d})",
                    tv.n(),
                    tv.dim()
                )));
            }
            accept.insert(tv.counts().to_vec());
        }
        Ok(Self { n, d, accept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn accepts(&self, tv: &TypeVector) -> bool {
        self.accept.contains(tv.counts())
    }
}

/// Exact errors of a type-based rule: Type I mass of the rejected types
/// under `p`, Type II mass of the accepted types under `q`. Sums run in the
/// log domain over the lexicographic type enumeration.
pub fn type_rule_errors(
    rule: &TypeAcceptanceRule,
    p: &Distribution,
    q: &Distribution,
) -> Result<(f64, f64)> {
    if p.dim() != rule.dim() || q.dim() != rule.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim().max(q.dim()),
            right: rule.dim(),
        });
    }
    let types = enumerate_types(rule.n(), rule.dim())?;
    let rejected = types.iter().filter(|tv| !rule.accepts(tv));
    let accepted = types.iter().filter(|tv| rule.accepts(tv));
    let log_type_i = crate::prob::log_prob_of_types(rejected, p)?;
    let log_type_ii = crate::prob::log_prob_of_types(accepted, q)?;
    Ok((libm::exp(log_type_i), libm::exp(log_type_ii)))
}

/// Brute-force oracle: both error probabilities of a threshold rule against
/// `dist` by enumerating all 2^n binary words. Capped at n = 12.
pub fn enumeration_oracle_errors(rule: &ThresholdRule, dist: &Distribution) -> Result<(f64, f64)> {
    let n = rule.n();
    if n > 12 {
        return Err(Error::SizeCapExceeded {
            required: 1u128 << n,
            cap: 1 << 12,
        });
    }
    if dist.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: dist.dim(),
            right: 2,
        });
    }
    let (d0, d1) = (dist.prob(0), dist.prob(1));
    let mut reject_mass = 0.0;
    let mut accept_mass = 0.0;
    for word in 0u64..(1u64 << n) {
        let ones = word.count_ones() as usize;
        let prob = libm::pow(d1, ones as f64) * libm::pow(d0, (n - ones) as f64);
        let phi = rule.reject_prob(ones);
        reject_mass += phi * prob;
        accept_mass += (1.0 - phi) * prob;
    }
    Ok((reject_mass, accept_mass))
}
