//! Log-domain accumulation helpers shared by the probability and detection
//! modules. Sums always run in a fixed index order so results are
//! bit-identical across runs and thread counts.

/// log(exp(a) + exp(b)) with max-subtraction; tolerates infinities.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// ln Gamma(x) for x > 0.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// x * ln(y) with the convention 0 * ln(0) = 0.
pub(crate) fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * libm::log(y)
    }
}
