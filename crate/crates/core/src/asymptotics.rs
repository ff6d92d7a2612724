//! Error exponents and the structural assumptions behind them.
//!
//! The Bayesian-error exponent of testing `p` against `q` is the
//! Fenchel-Legendre value `sup_lambda { -Lambda(lambda) }` of the log-MGF
//! of the log-likelihood ratio under `p`; for binary alphabets it equals
//! the relative entropy from the balance point (the distribution
//! equidistant in KL from both hypotheses) to either one. The
//! Neyman-Pearson exponent at a fixed false-alarm level is `D(p || q)`.
//!
//! [`check_assumptions`] diagnoses, per game instance, the four structural
//! conditions the asymptotic results need: baseline outside the attack set,
//! full support, a unique cost minimizer on the grid, and the attack set
//! lying strictly beyond the `p`-vs-`q*` balance point.

use alloc::string::String;
use alloc::vec::Vec;

use crate::games::GameSpec;
use crate::numeric::log_add;
use crate::prob::{kl_divergence, Distribution};
use crate::{Error, Result};

/// Default interval tolerance for [`chernoff_exponent`].
pub const CHERNOFF_TOL: f64 = 1e-10;

/// Strict-gap threshold for declaring the grid cost minimizer unique.
pub const COST_GAP_TOL: f64 = 1e-12;

const GOLDEN_RATIO: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_ITERS: usize = 200;
const BISECTION_TOL: f64 = 1e-12;

/// Log-moment generating function of `ln(q(X)/p(X))` under `X ~ p`:
/// `Lambda(lambda) = ln sum_i p(i)^(1-lambda) q(i)^lambda`.
pub fn log_mgf_llr(p: &Distribution, q: &Distribution, lambda: f64) -> Result<f64> {
    require_pair(p, q)?;
    let mut acc = f64::NEG_INFINITY;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        acc = log_add(acc, (1.0 - lambda) * libm::log(pi) + lambda * libm::log(qi));
    }
    Ok(acc)
}

/// Chernoff information `sup_lambda { -Lambda(lambda) }`, found by
/// golden-section maximization of the concave objective over `[0, 1]`.
pub fn chernoff_exponent(p: &Distribution, q: &Distribution, tol: f64) -> Result<f64> {
    require_pair(p, q)?;
    if p == q {
        return Err(Error::DegenerateHypotheses);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "tolerance {tol} must be positive"
        )));
    }
    let f = |lambda: f64| -> Result<f64> { Ok(-log_mgf_llr(p, q, lambda)?) };
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - GOLDEN_RATIO * (b - a);
    let mut d = a + GOLDEN_RATIO * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..MAX_GOLDEN_ITERS {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN_RATIO * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN_RATIO * (b - a);
            fd = f(d)?;
        }
    }
    let value = f(0.5 * (a + b))?;
    Ok(value.max(0.0))
}

/// The unique binary distribution between `p` and `q` that is KL-equidistant
/// from both, located by bisection of the (linear) balance function
/// `g(nu) = sum_i nu(i) ln(q(i)/p(i))`.
pub fn balance_point(p: &Distribution, q: &Distribution) -> Result<Distribution> {
    require_pair(p, q)?;
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: 2,
        });
    }
    let (p1, q1) = (p.prob(1), q.prob(1));
    if p1 == q1 {
        return Err(Error::DegenerateHypotheses);
    }
    let g = |nu1: f64| (1.0 - nu1) * libm::log(q.prob(0) / p.prob(0)) + nu1 * libm::log(q1 / p1);
    let (mut lo, mut hi) = if p1 < q1 { (p1, q1) } else { (q1, p1) };
    // g(p) = -D(p||q) < 0 and g(q) = D(q||p) > 0.
    let mut g_lo = g(lo);
    for _ in 0..MAX_GOLDEN_ITERS {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Distribution::binary(0.5 * (lo + hi))
}

/// Closed-form balance point for binary alphabets; bisection cross-check.
pub fn balance_point_closed_form(p: &Distribution, q: &Distribution) -> Result<f64> {
    require_pair(p, q)?;
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: 2,
        });
    }
    if p.prob(1) == q.prob(1) {
        return Err(Error::DegenerateHypotheses);
    }
    let num = libm::log(p.prob(0) / q.prob(0));
    let den = num + libm::log(q.prob(1) / p.prob(1));
    Ok(num / den)
}

/// Type II exponent at a fixed false-alarm level: `D(p || q)`.
pub fn stein_exponent(p: &Distribution, q: &Distribution) -> Result<f64> {
    require_pair(p, q)?;
    kl_divergence(p, q)
}

/// Pointwise empirical exponent `-ln(error) / n`, reported positive for
/// errors below one.
pub fn empirical_exponent(error: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if !(error > 0.0) || !error.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "error {error} must be positive to take a log"
        )));
    }
    Ok(-libm::log(error) / n as f64)
}

fn require_pair(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    if !p.full_support() || !q.full_support() {
        return Err(Error::InvalidParameter(
            "both distributions must have full support".into(),
        ));
    }
    Ok(())
}

/// Outcome of checking the four structural assumptions on a game instance.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    /// Baseline lies outside the (closed) attack interval.
    pub a1_holds: bool,
    /// Baseline and every grid point have full support.
    pub a2_holds: bool,
    /// The grid cost minimizer is unique, with a strict gap to second-best.
    pub a3_holds: bool,
    /// The attack interval lies strictly on the far side of the balance
    /// point from the baseline.
    pub a4_holds: bool,
    /// Balance point (probability of symbol 1) between `p` and `q*`.
    pub a4_balance_point: f64,
    /// Recorded grid cost minimizer (smallest index on ties).
    pub qstar: f64,
    pub qstar_index: usize,
    /// Human-readable diagnostics.
    pub notes: Vec<String>,
}

/// Diagnoses the structural assumptions for a Bayesian or Neyman-Pearson
/// game instance. Never fails: violations are reported, not raised.
pub fn check_assumptions(spec: &impl GameSpec) -> AssumptionReport {
    let grid = spec.grid();
    let p1 = spec.p().prob(1);
    let mut notes = Vec::new();

    let a1_holds = p1 < grid.lo() || p1 > grid.hi();
    if !a1_holds {
        notes.push(alloc::format!(
            "baseline p1 = {p1} lies inside Q = [{}, {}]",
            grid.lo(),
            grid.hi()
        ));
    }

    let a2_holds = spec.p().full_support() && grid.lo() > 0.0 && grid.hi() < 1.0;
    if !a2_holds {
        notes.push("a grid point or the baseline has a zero-probability symbol".into());
    }

    // Unique grid minimizer of the cost, with a strict gap to second place.
    let costs: Vec<f64> = (0..grid.len()).map(|j| spec.cost_at(j)).collect();
    let mut qstar_index = 0;
    for (j, &c) in costs.iter().enumerate() {
        if c < costs[qstar_index] {
            qstar_index = j;
        }
    }
    let runner_up = costs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != qstar_index)
        .map(|(_, &c)| c)
        .fold(f64::INFINITY, f64::min);
    let a3_holds = grid.len() == 1 || runner_up - costs[qstar_index] > COST_GAP_TOL;
    if !a3_holds {
        notes.push(alloc::format!(
            "grid cost minimum {} is tied or nearly tied (runner-up {runner_up})",
            costs[qstar_index]
        ));
    }
    let qstar = grid.q1(qstar_index);

    // Balance point between p and q*; the attack interval must sit strictly
    // beyond it, seen from p.
    let qstar_dist = grid.distribution(qstar_index);
    let a4_balance_point = match balance_point(spec.p(), &qstar_dist) {
        Ok(nu) => nu.prob(1),
        Err(_) => {
            notes.push("balance point undefined: p coincides with q*".into());
            f64::NAN
        }
    };
    let a4_holds = if a4_balance_point.is_nan() {
        false
    } else if p1 < grid.lo() {
        a4_balance_point < grid.lo()
    } else if p1 > grid.hi() {
        a4_balance_point > grid.hi()
    } else {
        false
    };
    if !a4_holds && !a4_balance_point.is_nan() {
        notes.push(alloc::format!(
            "balance point {a4_balance_point} does not separate p1 = {p1} from Q"
        ));
    }

    AssumptionReport {
        a1_holds,
        a2_holds,
        a3_holds,
        a4_holds,
        a4_balance_point,
        qstar,
        qstar_index,
        notes,
    }
}

/// General-alphabet balance-set scan: returns the first candidate attack
/// distribution with `D(q || p) <= D(q || qstar)`, i.e. a violation of the
/// separation assumption, or `None` if the scan finds no violation at this
/// resolution. A clean scan is evidence, not a certificate.
pub fn a4_violation_on_points(
    p: &Distribution,
    qstar: &Distribution,
    candidates: &[Distribution],
) -> Result<Option<usize>> {
    for (j, q) in candidates.iter().enumerate() {
        let to_p = kl_divergence(q, p)?;
        let to_qstar = kl_divergence(q, qstar)?;
        if to_p <= to_qstar {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{BayesGameSpec, CostFunction};

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn log_mgf_normalization_endpoints() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.2, 0.8]);
        assert!(log_mgf_llr(&p, &q, 0.0).unwrap().abs() < 1e-15);
        assert!(log_mgf_llr(&p, &q, 1.0).unwrap().abs() < 1e-15);
        // p = q: identically zero.
        for lambda in [-1.0, 0.3, 2.0] {
            assert!(log_mgf_llr(&p, &p, lambda).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn log_mgf_midpoint_value() {
        // ln(sqrt(0.1) + sqrt(0.4))
        let v = log_mgf_llr(&dist(&[0.5, 0.5]), &dist(&[0.2, 0.8]), 0.5).unwrap();
        assert!((v - (-0.052680)).abs() < 1e-5);
    }

    #[test]
    fn chernoff_reference_values() {
        let p = dist(&[0.5, 0.5]);
        let v = chernoff_exponent(&p, &dist(&[0.2, 0.8]), 1e-10).unwrap();
        assert!((0.0523..=0.0533).contains(&v), "{v}");
        let v = chernoff_exponent(&p, &dist(&[0.1, 0.9]), 1e-10).unwrap();
        assert!((0.1118..=0.1128).contains(&v), "{v}");
        assert!(matches!(
            chernoff_exponent(&p, &p, 1e-10),
            Err(Error::DegenerateHypotheses)
        ));
    }

    #[test]
    fn balance_point_reference_values() {
        let p = dist(&[0.5, 0.5]);
        let nu = balance_point(&p, &dist(&[0.2, 0.8])).unwrap();
        assert!((nu.prob(1) - 0.66096).abs() < 1e-5);
        let nu = balance_point(&p, &dist(&[0.1, 0.9])).unwrap();
        assert!((nu.prob(1) - 0.73249).abs() < 1e-5);
        // Mirror-symmetric pair around 1/2.
        let nu = balance_point(&dist(&[0.3, 0.7]), &dist(&[0.7, 0.3])).unwrap();
        assert!((nu.prob(1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn balance_point_matches_closed_form() {
        let p = dist(&[0.5, 0.5]);
        for q1 in [0.55, 0.66, 0.8, 0.9, 0.2] {
            let q = Distribution::binary(q1).unwrap();
            let nu = balance_point(&p, &q).unwrap().prob(1);
            let cf = balance_point_closed_form(&p, &q).unwrap();
            assert!((nu - cf).abs() < 1e-11, "q1={q1}");
        }
    }

    #[test]
    fn stein_reference_value() {
        let v = stein_exponent(&dist(&[0.5, 0.5]), &dist(&[0.2, 0.8])).unwrap();
        assert!((v - 0.223144).abs() < 1e-5);
        let p = dist(&[0.3, 0.7]);
        assert_eq!(stein_exponent(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn empirical_exponent_values() {
        assert!((empirical_exponent(libm::exp(-7.0), 7).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(empirical_exponent(1.0, 13).unwrap(), 0.0);
        assert!((empirical_exponent(0.5, 10).unwrap() - 0.069315).abs() < 1e-6);
        assert!(empirical_exponent(0.0, 5).is_err());
    }

    #[test]
    fn assumption_report_separating_case() {
        let spec = BayesGameSpec::new(
            Distribution::binary(0.5).unwrap(),
            0.7,
            0.9,
            100,
            1.0,
            10,
            CostFunction::absolute(1.0, 0.8).unwrap(),
        )
        .unwrap();
        let report = check_assumptions(&spec);
        assert!(report.a1_holds && report.a2_holds);
        assert!(report.a4_holds);
        assert!((report.a4_balance_point - 0.661).abs() < 5e-3);
    }

    #[test]
    fn assumption_report_violating_case() {
        let spec = BayesGameSpec::new(
            Distribution::binary(0.5).unwrap(),
            0.6,
            0.9,
            100,
            1.0,
            10,
            CostFunction::absolute(3.0, 0.9).unwrap(),
        )
        .unwrap();
        let report = check_assumptions(&spec);
        assert!(report.a3_holds);
        assert_eq!(report.qstar_index, 99);
        assert!(!report.a4_holds);
    }

    #[test]
    fn flat_cost_breaks_uniqueness() {
        let spec = BayesGameSpec::new(
            Distribution::binary(0.5).unwrap(),
            0.7,
            0.9,
            2,
            1.0,
            10,
            CostFunction::tabulated(alloc::vec![0.0, 0.0]).unwrap(),
        )
        .unwrap();
        let report = check_assumptions(&spec);
        assert!(!report.a3_holds);
    }

    #[test]
    fn a4_scan_finds_violations() {
        let p = dist(&[0.5, 0.5]);
        let qstar = dist(&[0.2, 0.8]);
        // A candidate on p's side of the balance point violates; one beyond
        // it does not.
        let inside = dist(&[0.45, 0.55]);
        let outside = dist(&[0.25, 0.75]);
        let hit = a4_violation_on_points(&p, &qstar, &[outside.clone(), inside.clone()]).unwrap();
        assert_eq!(hit, Some(1));
        let clean = a4_violation_on_points(&p, &qstar, &[outside]).unwrap();
        assert_eq!(clean, None);
    }
}
