//! Equilibrium computation for the discretized games.
//!
//! The Bayesian game is solved through its zero-sum equivalent: one LP per
//! player (dense simplex, Bland's rule, entries shifted positive so the
//! classical reciprocal construction applies), then the minimax/maximin
//! certificates are recomputed directly against the payoff matrix and must
//! agree to tolerance. A support-enumeration solver doubles as an
//! independent oracle for small matrices. The Neyman-Pearson game needs no
//! LP: the defender has a strictly dominant randomized threshold rule that
//! spends the false-alarm budget exactly, and the attacker best-responds.

use alloc::vec;
use alloc::vec::Vec;

use crate::detect::{BinomialTable, ThresholdRule};
use crate::games::{BayesGameSpec, GameSpec, NpGameSpec, PayoffMatrix};
use crate::prob::Distribution;
use crate::simplex;
use crate::{Error, Result};

/// Default duality-gap tolerance for [`solve_zero_sum_lp`].
pub const LP_TOL: f64 = 1e-9;

/// Weights at or below this are not part of a strategy's support.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Tolerance on the sum of mixed-strategy weights.
pub const MIX_SUM_TOL: f64 = 1e-9;

/// Largest matrix side accepted by [`support_enumeration_ne`] by default.
pub const DEFAULT_SUPPORT_ENUM_DIM: usize = 6;

const BILINEAR_TOL: f64 = 1e-9;

/// Probability weights over an indexed set of pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    weights: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty strategy".into()));
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "strategy weight {w} not in [0, 1]"
                )));
            }
            sum += w;
        }
        if libm::fabs(sum - 1.0) > MIX_SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { weights })
    }

    /// All mass on pure strategy `index`.
    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::InvalidParameter(alloc::format!(
                "point mass index {index} out of range {len}"
            )));
        }
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Indices with weight above [`SUPPORT_EPS`].
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > SUPPORT_EPS)
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the largest weight (smallest index on ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        best
    }
}

/// Solution of a zero-sum matrix game: the row player maximizes.
#[derive(Debug, Clone)]
pub struct ZeroSumSolution {
    pub row_mix: MixedStrategy,
    pub col_mix: MixedStrategy,
    pub value: f64,
    /// |minimax - maximin| certificate, at most the requested tolerance.
    pub gap: f64,
}

/// Mixed equilibrium of a Bayesian game instance.
#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    /// Attacker weights over the Q grid.
    pub attacker: MixedStrategy,
    /// Defender weights over thresholds `k = 0..=n+1`.
    pub defender: MixedStrategy,
    /// Value of the zero-sum equivalent game.
    pub value: f64,
    /// Classification error at the equilibrium profile.
    pub eq_error: f64,
    /// Largest pure-deviation gain of either player in the original
    /// (nonzero-sum) utilities.
    pub deviation_gain: f64,
}

/// Pure equilibrium of a Neyman-Pearson game instance.
#[derive(Debug, Clone)]
pub struct NpEquilibrium {
    pub q_index: usize,
    pub rule: ThresholdRule,
    /// Type II error at the equilibrium (the NP classification error).
    pub eq_error: f64,
}

/// Solves both players' LPs for the matrix game and cross-checks the value:
/// `row_mix` maximizes `min_k (x'A)_k`, `col_mix` minimizes `max_j (Ay)_j`,
/// and the recomputed certificates must agree within `tol`.
pub fn solve_zero_sum_lp(matrix: &PayoffMatrix, tol: f64) -> Result<ZeroSumSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "tolerance {tol} must be positive"
        )));
    }
    let col_mix = column_player(matrix, false)?;
    let row_mix = column_player(matrix, true)?;

    // Certificates straight from the matrix, independent of the LP path.
    let against_rows = matrix_vec(matrix, &col_mix); // (A y)_j
    let against_cols = vec_matrix(matrix, &row_mix); // (x' A)_k
    let minimax = max(&against_rows);
    let maximin = min(&against_cols);
    let gap = libm::fabs(minimax - maximin);
    if gap > tol {
        return Err(Error::DualityGap { gap, tol });
    }
    Ok(ZeroSumSolution {
        row_mix: MixedStrategy::new(row_mix)?,
        col_mix: MixedStrategy::new(col_mix)?,
        value: 0.5 * (minimax + maximin),
        gap,
    })
}

/// Optimal mix of the minimizing player of `matrix` (over columns), or of
/// its negated transpose (over rows) when `transposed` is set — the
/// classical reduction: shift entries positive, then
/// `max sum(w) s.t. A'w <= 1` has optimum `1/value`, and the normalized
/// `w` is the minimizer's strategy.
fn column_player(matrix: &PayoffMatrix, transposed: bool) -> Result<Vec<f64>> {
    let (rows, cols) = if transposed {
        (matrix.cols(), matrix.rows())
    } else {
        (matrix.rows(), matrix.cols())
    };
    let entry = |i: usize, j: usize| {
        if transposed {
            -matrix.at(j, i)
        } else {
            matrix.at(i, j)
        }
    };
    let mut lo = f64::INFINITY;
    for i in 0..rows {
        for j in 0..cols {
            lo = lo.min(entry(i, j));
        }
    }
    let shift = lo - 1.0;
    let mut a = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            a.push(entry(i, j) - shift);
        }
    }
    let b = vec![1.0; rows];
    let c = vec![1.0; cols];
    let out = simplex::maximize(
        &a,
        rows,
        cols,
        &b,
        &c,
        simplex::PIVOT_TOL,
        simplex::PIVOT_CAP,
    )?;
    let total: f64 = out.solution.iter().sum();
    if !(total > 0.0 && out.objective > 0.0) {
        // Cannot happen for a positive matrix: the optimum of sum(w) is 1/value > 0.
        return Err(Error::DualityGap {
            gap: f64::INFINITY,
            tol: 0.0,
        });
    }
    Ok(out.solution.iter().map(|w| w / total).collect())
}

fn matrix_vec(matrix: &PayoffMatrix, y: &[f64]) -> Vec<f64> {
    (0..matrix.rows())
        .map(|j| {
            matrix
                .row(j)
                .iter()
                .zip(y)
                .map(|(&a, &w)| a * w)
                .sum::<f64>()
        })
        .collect()
}

fn vec_matrix(matrix: &PayoffMatrix, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; matrix.cols()];
    for j in 0..matrix.rows() {
        let xj = x[j];
        if xj != 0.0 {
            for (k, &a) in matrix.row(j).iter().enumerate() {
                out[k] += xj * a;
            }
        }
    }
    out
}

fn max(v: &[f64]) -> f64 {
    v.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
}

fn min(v: &[f64]) -> f64 {
    v.iter().fold(f64::INFINITY, |m, &x| m.min(x))
}

/// Exact equilibrium of a small matrix game by enumerating equal-size
/// supports and solving the indifference systems. Independent of the
/// simplex path; used as its oracle.
pub fn support_enumeration_ne(matrix: &PayoffMatrix, max_dim: usize) -> Result<ZeroSumSolution> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if rows > max_dim || cols > max_dim {
        return Err(Error::SizeCapExceeded {
            required: rows.max(cols) as u128,
            cap: max_dim as u128,
        });
    }
    const EQ_TOL: f64 = 1e-8;
    for size in 1..=rows.min(cols) {
        let row_sets = combinations(rows, size);
        let col_sets = combinations(cols, size);
        for rset in &row_sets {
            for cset in &col_sets {
                let Some((y, v_col)) = indifference_mix(matrix, rset, cset, false) else {
                    continue;
                };
                let Some((x, v_row)) = indifference_mix(matrix, rset, cset, true) else {
                    continue;
                };
                if libm::fabs(v_col - v_row) > EQ_TOL {
                    continue;
                }
                let v = 0.5 * (v_col + v_row);
                let mut full_x = vec![0.0; rows];
                for (idx, &j) in rset.iter().enumerate() {
                    full_x[j] = x[idx];
                }
                let mut full_y = vec![0.0; cols];
                for (idx, &k) in cset.iter().enumerate() {
                    full_y[k] = y[idx];
                }
                // Best-response conditions outside the supports.
                let ay = matrix_vec(matrix, &full_y);
                if ay.iter().any(|&g| g > v + EQ_TOL) {
                    continue;
                }
                let xa = vec_matrix(matrix, &full_x);
                if xa.iter().any(|&g| g < v - EQ_TOL) {
                    continue;
                }
                return Ok(ZeroSumSolution {
                    row_mix: MixedStrategy::new(full_x)?,
                    col_mix: MixedStrategy::new(full_y)?,
                    value: v,
                    gap: libm::fabs(v_col - v_row),
                });
            }
        }
    }
    Err(Error::NoEquilibrium)
}

/// Solves the indifference system on the given supports: the chosen side's
/// weights make its opponent indifferent over the opposing support.
/// Returns `None` when the system is singular or the weights are negative.
fn indifference_mix(
    matrix: &PayoffMatrix,
    rset: &[usize],
    cset: &[usize],
    solve_rows: bool,
) -> Option<(Vec<f64>, f64)> {
    let s = rset.len();
    // Unknowns: s weights and the value v.
    let dim = s + 1;
    let mut sys = vec![0.0f64; dim * (dim + 1)];
    for eq in 0..s {
        for u in 0..s {
            let a = if solve_rows {
                // x' A equal over cset: equation per column, unknown per row.
                matrix.at(rset[u], cset[eq])
            } else {
                // A y equal over rset: equation per row, unknown per column.
                matrix.at(rset[eq], cset[u])
            };
            sys[eq * (dim + 1) + u] = a;
        }
        sys[eq * (dim + 1) + s] = -1.0; // - v
    }
    for u in 0..s {
        sys[s * (dim + 1) + u] = 1.0; // weights sum to one
    }
    sys[s * (dim + 1) + dim] = 1.0;

    let sol = gauss_solve(&mut sys, dim)?;
    let weights = sol[..s].to_vec();
    if weights.iter().any(|&w| w < -1e-9) {
        return None;
    }
    let clipped: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    Some((clipped.iter().map(|w| w / total).collect(), sol[s]))
}

/// Gaussian elimination with partial pivoting on an augmented system of
/// `dim` equations (row-major, width `dim + 1`).
fn gauss_solve(sys: &mut [f64], dim: usize) -> Option<Vec<f64>> {
    let width = dim + 1;
    for col in 0..dim {
        let mut piv = col;
        for r in col + 1..dim {
            if libm::fabs(sys[r * width + col]) > libm::fabs(sys[piv * width + col]) {
                piv = r;
            }
        }
        if libm::fabs(sys[piv * width + col]) < 1e-12 {
            return None;
        }
        if piv != col {
            for j in 0..width {
                sys.swap(col * width + j, piv * width + j);
            }
        }
        let inv = 1.0 / sys[col * width + col];
        for r in 0..dim {
            if r == col {
                continue;
            }
            let factor = sys[r * width + col] * inv;
            if factor != 0.0 {
                for j in col..width {
                    sys[r * width + j] -= factor * sys[col * width + j];
                }
            }
        }
    }
    Some(
        (0..dim)
            .map(|r| sys[r * width + dim] / sys[r * width + r])
            .collect(),
    )
}

/// Lexicographic size-`k` index subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Solves the Bayesian game: builds the payoff matrix, solves the zero-sum
/// LP, recovers the equilibrium error through
/// `eq_error = value + E_attacker[cost]`, cross-checks it against the
/// bilinear error, and certifies the profile by a full deviation scan.
pub fn solve_bayes_equilibrium(spec: &BayesGameSpec) -> Result<EquilibriumResult> {
    let matrix = crate::games::build_payoff_matrix(spec)?;
    let sol = solve_zero_sum_lp(&matrix, LP_TOL)?;
    let attacker = sol.row_mix;
    let defender = sol.col_mix;

    let expected_cost: f64 = attacker
        .weights()
        .iter()
        .enumerate()
        .map(|(j, &w)| w * spec.cost_at(j))
        .sum();
    let eq_error = sol.value + expected_cost;

    // Bilinear classification error at the profile.
    let mut bilinear = 0.0;
    for (j, &xj) in attacker.weights().iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        let cost = spec.cost_at(j);
        for (k, &yk) in defender.weights().iter().enumerate() {
            if yk != 0.0 {
                bilinear += xj * yk * (matrix.at(j, k) + cost);
            }
        }
    }
    let delta = libm::fabs(eq_error - bilinear);
    if delta > BILINEAR_TOL {
        return Err(Error::DualityGap {
            gap: delta,
            tol: BILINEAR_TOL,
        });
    }

    let deviation_gain = verify_equilibrium(spec, &attacker, &defender)?;
    Ok(EquilibriumResult {
        attacker,
        defender,
        value: sol.value,
        eq_error,
        deviation_gain,
    })
}

/// Certifies a profile in the original nonzero-sum utilities: the largest
/// gain any pure deviation of either player achieves against the opponent's
/// mix. Nonpositive up to rounding at an exact equilibrium.
pub fn verify_equilibrium(
    spec: &BayesGameSpec,
    attacker: &MixedStrategy,
    defender: &MixedStrategy,
) -> Result<f64> {
    let n = spec.n();
    let grid = spec.grid();
    if attacker.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            left: attacker.len(),
            right: grid.len(),
        });
    }
    if defender.len() != n + 2 {
        return Err(Error::DimensionMismatch {
            left: defender.len(),
            right: n + 2,
        });
    }
    let gamma = spec.gamma();
    let p_table = BinomialTable::new(n, spec.p())?;
    let type_i: Vec<f64> = (0..n + 2).map(|k| p_table.type_i(k, 0.0)).collect();

    // Attacker utilities against the defender mix, one per grid point, and
    // the defender's expected miss probability per threshold.
    let mut attacker_payoff = vec![0.0f64; grid.len()];
    let mut miss_by_threshold = vec![0.0f64; n + 2];
    for j in 0..grid.len() {
        let q = grid.distribution(j);
        let q_table = BinomialTable::new(n, &q)?;
        let cost = spec.cost_at(j);
        let xj = attacker.weights()[j];
        let mut acceptance = 0.0;
        for (k, &yk) in defender.weights().iter().enumerate() {
            let t2 = q_table.type_ii(k, 0.0);
            if yk != 0.0 {
                acceptance += yk * t2;
            }
            if xj != 0.0 {
                miss_by_threshold[k] += xj * t2;
            }
        }
        attacker_payoff[j] = acceptance - cost;
    }
    let attacker_current: f64 = attacker
        .weights()
        .iter()
        .zip(&attacker_payoff)
        .map(|(&x, &u)| x * u)
        .sum();
    let attacker_gain = max(&attacker_payoff) - attacker_current;

    let defender_payoff: Vec<f64> = (0..n + 2)
        .map(|k| -(miss_by_threshold[k] + gamma * type_i[k]))
        .collect();
    let defender_current: f64 = defender
        .weights()
        .iter()
        .zip(&defender_payoff)
        .map(|(&y, &u)| y * u)
        .sum();
    let defender_gain = max(&defender_payoff) - defender_current;

    Ok(attacker_gain.max(defender_gain))
}

/// Defender's best threshold against attacker grid point `q_index`:
/// the smallest argmin of the weighted error over `k = 0..=n+1`.
pub fn defender_best_response(spec: &BayesGameSpec, q_index: usize) -> Result<usize> {
    if q_index >= spec.grid().len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "grid index {q_index} out of range"
        )));
    }
    let n = spec.n();
    let p_table = BinomialTable::new(n, spec.p())?;
    let q_table = BinomialTable::new(n, &spec.grid().distribution(q_index))?;
    let gamma = spec.gamma();
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for k in 0..=n + 1 {
        let err = q_table.type_ii(k, 0.0) + gamma * p_table.type_i(k, 0.0);
        if err < best {
            best = err;
            best_k = k;
        }
    }
    Ok(best_k)
}

/// Attacker's best grid point against a fixed rule: the smallest argmax of
/// `type_ii(rule, q) - cost(q)`. Applies to both game kinds, whose attacker
/// payoffs coincide.
pub fn attacker_best_response<G: GameSpec>(spec: &G, rule: &ThresholdRule) -> Result<usize> {
    if rule.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            left: rule.n(),
            right: spec.n(),
        });
    }
    let grid = spec.grid();
    let mut best_j = 0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..grid.len() {
        let table = BinomialTable::new(spec.n(), &grid.distribution(j))?;
        let u = table.type_ii(rule.k(), rule.pi()) - spec.cost_at(j);
        if u > best {
            best = u;
            best_j = j;
        }
    }
    Ok(best_j)
}

/// The defender's strictly dominant Neyman-Pearson rule: the unique
/// `(k, pi)` whose false-alarm probability is exactly `epsilon` — the
/// smallest `k` with `P_p(count >= k) <= epsilon`, with the remainder of
/// the budget spent by randomizing at `count = k - 1`.
pub fn np_dominant_rule(p: &Distribution, epsilon: f64, n: usize) -> Result<ThresholdRule> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "epsilon = {epsilon} outside (0, 1)"
        )));
    }
    if !p.full_support() {
        return Err(Error::InvalidParameter(
            "baseline distribution must have full support".into(),
        ));
    }
    let table = BinomialTable::new(n, p)?;
    for k in 0..=n + 1 {
        let tail = table.type_i(k, 0.0);
        if tail <= epsilon {
            // epsilon < 1 = P(count >= 0) forces k >= 1 here, so the
            // boundary mass P(count = k - 1) exists and is positive.
            let pi = ((epsilon - tail) / table.pmf(k - 1)).clamp(0.0, 1.0);
            return ThresholdRule::new(n, k, pi);
        }
    }
    unreachable!("P(count >= n + 1) = 0 <= epsilon")
}

/// Pure equilibrium of the Neyman-Pearson game: the dominant rule plus the
/// attacker's best response to it; the equilibrium error is the Type II
/// error at that profile.
pub fn np_pure_equilibrium(spec: &NpGameSpec) -> Result<NpEquilibrium> {
    let rule = np_dominant_rule(spec.p(), spec.epsilon(), spec.n())?;
    let q_index = attacker_best_response(spec, &rule)?;
    let q = spec.grid().distribution(q_index);
    let eq_error = crate::detect::type_ii_error(&rule, &q)?;
    Ok(NpEquilibrium {
        q_index,
        rule,
        eq_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::CostFunction;

    fn matrix(rows: &[&[f64]]) -> PayoffMatrix {
        PayoffMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn matching_pennies() {
        let m = matrix(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        let sol = solve_zero_sum_lp(&m, 1e-9).unwrap();
        assert!(sol.value.abs() < 1e-9);
        for &w in sol.row_mix.weights() {
            assert!((w - 0.5).abs() < 1e-9);
        }
        for &w in sol.col_mix.weights() {
            assert!((w - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn dominated_row() {
        let m = matrix(&[&[2.0, 2.0], &[1.0, 1.0]]);
        let sol = solve_zero_sum_lp(&m, 1e-9).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-9);
        assert!((sol.row_mix.weights()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = matrix(&[&[3.0, 1.0], &[0.0, 2.0]]);
        let sol = solve_zero_sum_lp(&m, 1e-9).unwrap();
        assert!((sol.value - 1.5).abs() < 1e-9);
        assert!((sol.row_mix.weights()[0] - 0.5).abs() < 1e-9);
        assert!((sol.col_mix.weights()[0] - 0.25).abs() < 1e-9);
        assert!((sol.col_mix.weights()[1] - 0.75).abs() < 1e-9);
    }

    #[test]
    fn support_enumeration_matches_lp() {
        for rows in [
            &[&[1.0, -1.0][..], &[-1.0, 1.0][..]][..],
            &[&[2.0, 2.0][..], &[1.0, 1.0][..]][..],
            &[&[3.0, 1.0][..], &[0.0, 2.0][..]][..],
        ] {
            let m = matrix(rows);
            let lp = solve_zero_sum_lp(&m, 1e-9).unwrap();
            let se = support_enumeration_ne(&m, 6).unwrap();
            assert!((lp.value - se.value).abs() < 1e-10);
        }
    }

    #[test]
    fn support_enumeration_scalar_game() {
        let m = matrix(&[&[0.37]]);
        let se = support_enumeration_ne(&m, 6).unwrap();
        assert!((se.value - 0.37).abs() < 1e-12);
        let big = PayoffMatrix::from_rows(alloc::vec![alloc::vec![0.0; 7]; 7]).unwrap();
        assert!(matches!(
            support_enumeration_ne(&big, 6),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn single_point_grid_reduces_to_classical_testing() {
        // Q = {q*}, zero cost: the defender plays the best single threshold.
        let spec = BayesGameSpec::new(
            Distribution::binary(0.5).unwrap(),
            0.8,
            0.8,
            1,
            1.0,
            6,
            CostFunction::tabulated(alloc::vec![0.0]).unwrap(),
        )
        .unwrap();
        let eq = solve_bayes_equilibrium(&spec).unwrap();
        let best_k = defender_best_response(&spec, 0).unwrap();
        let best_err = crate::detect::bayes_error(
            &ThresholdRule::deterministic(6, best_k).unwrap(),
            &spec.grid().distribution(0),
            spec.p(),
            1.0,
        )
        .unwrap();
        assert!((eq.eq_error - best_err).abs() < 1e-9);
        assert!(eq.defender.weights()[best_k] > 0.99);
        assert!(eq.deviation_gain <= 1e-9);
    }

    #[test]
    fn np_dominant_rule_examples() {
        let p = Distribution::binary(0.5).unwrap();
        let rule = np_dominant_rule(&p, 0.1, 2).unwrap();
        assert_eq!(rule.k(), 3);
        assert!((rule.pi() - 0.4).abs() < 1e-12);

        let rule = np_dominant_rule(&p, 0.1, 1).unwrap();
        assert_eq!(rule.k(), 2);
        assert!((rule.pi() - 0.2).abs() < 1e-12);

        // Budget exactly at a deterministic tail: pi = 0.
        let rule = np_dominant_rule(&p, 0.25, 2).unwrap();
        assert_eq!(rule.k(), 2);
        assert!(rule.pi().abs() < 1e-12);
    }

    #[test]
    fn np_false_alarm_exact() {
        let p = Distribution::binary(0.5).unwrap();
        for n in [1, 2, 7, 40, 163] {
            let rule = np_dominant_rule(&p, 0.1, n).unwrap();
            let fa = crate::detect::type_i_error(&rule, &p).unwrap();
            assert!((fa - 0.1).abs() < 1e-12, "n={n}: {fa}");
        }
    }

    #[test]
    fn np_single_point_equilibrium() {
        let spec = NpGameSpec::new(
            Distribution::binary(0.5).unwrap(),
            0.8,
            0.8,
            1,
            0.1,
            10,
            CostFunction::tabulated(alloc::vec![0.0]).unwrap(),
        )
        .unwrap();
        let eq = np_pure_equilibrium(&spec).unwrap();
        assert_eq!(eq.q_index, 0);
        let direct = crate::detect::type_ii_error(&eq.rule, &spec.grid().distribution(0)).unwrap();
        assert_eq!(eq.eq_error, direct);
    }
}
