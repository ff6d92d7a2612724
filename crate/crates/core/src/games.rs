//! Game instances: the Bayesian game (weighted-error defender) and the
//! Neyman-Pearson game (false-alarm-constrained defender), both over a
//! discretized binary strategy space.
//!
//! The attacker picks a grid point of the interval `Q`; the defender picks
//! a threshold rule. The zero-sum-equivalent payoff
//! `u_eq = type_ii + gamma * type_i - cost` shares every best response
//! (hence every equilibrium) with the original nonzero-sum game: the
//! `gamma * type_i` term does not depend on the attacker's move and the
//! cost term does not depend on the defender's.

use alloc::vec::Vec;

use crate::detect::{BinomialTable, ThresholdRule};
use crate::prob::Distribution;
use crate::{Error, Result};

/// Tolerance on the Neyman-Pearson false-alarm budget check.
pub const FALSE_ALARM_SLACK: f64 = 1e-12;

/// Largest supported payoff-matrix side.
pub const MATRIX_SIDE_CAP: usize = 10_000;

/// Attack cost over the strategy interval, parameterized by the probability
/// of symbol 1. Nonnegative, continuous, and (for the two parametric kinds)
/// uniquely minimized at `qstar`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostFunction {
    /// `scale * |q1 - qstar|`
    ScaledAbsolute { scale: f64, qstar: f64 },
    /// `scale * (q1 - qstar)^2`
    ScaledQuadratic { scale: f64, qstar: f64 },
    /// Explicit nonnegative values, one per attacker grid point.
    Tabulated(Vec<f64>),
}

impl CostFunction {
    pub fn absolute(scale: f64, qstar: f64) -> Result<Self> {
        validate_parametric(scale, qstar)?;
        Ok(CostFunction::ScaledAbsolute { scale, qstar })
    }

    pub fn quadratic(scale: f64, qstar: f64) -> Result<Self> {
        validate_parametric(scale, qstar)?;
        Ok(CostFunction::ScaledQuadratic { scale, qstar })
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty cost table".into()));
        }
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "cost table has a negative or non-finite entry".into(),
            ));
        }
        Ok(CostFunction::Tabulated(values))
    }

    /// Cost at grid index `j` whose attack probability is `q1`.
    pub fn eval(&self, q1: f64, j: usize) -> f64 {
        match self {
            CostFunction::ScaledAbsolute { scale, qstar } => scale * libm::fabs(q1 - qstar),
            CostFunction::ScaledQuadratic { scale, qstar } => {
                scale * (q1 - qstar) * (q1 - qstar)
            }
            CostFunction::Tabulated(values) => values[j],
        }
    }

    /// The construction-time minimizer, when the kind has one.
    pub fn parametric_qstar(&self) -> Option<f64> {
        match self {
            CostFunction::ScaledAbsolute { qstar, .. }
            | CostFunction::ScaledQuadratic { qstar, .. } => Some(*qstar),
            CostFunction::Tabulated(_) => None,
        }
    }
}

fn validate_parametric(scale: f64, qstar: f64) -> Result<()> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "cost scale {scale} must be positive"
        )));
    }
    if !(0.0..=1.0).contains(&qstar) {
        return Err(Error::InvalidParameter(alloc::format!(
            "cost qstar = {qstar} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Equally spaced attacker grid on `[lo, hi]`, both endpoints included,
/// identified by the probability of symbol 1. A degenerate interval
/// (`lo == hi`) is a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    lo: f64,
    hi: f64,
    len: usize,
}

impl QGrid {
    pub fn new(lo: f64, hi: f64, grid_size: usize) -> Result<Self> {
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(Error::InvalidParameter(alloc::format!(
                "need 0 < q_lo <= q_hi < 1 (got [{lo}, {hi}])"
            )));
        }
        let len = if lo == hi { 1 } else { grid_size };
        if len < 2 && lo != hi {
            return Err(Error::InvalidParameter(alloc::format!(
                "grid of {grid_size} points cannot span [{lo}, {hi}]"
            )));
        }
        if len > MATRIX_SIDE_CAP {
            return Err(Error::SizeCapExceeded {
                required: len as u128,
                cap: MATRIX_SIDE_CAP as u128,
            });
        }
        Ok(Self { lo, hi, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Attack probability of grid point `j`. Both endpoints are exact.
    pub fn q1(&self, j: usize) -> f64 {
        debug_assert!(j < self.len);
        if j == 0 {
            self.lo
        } else if j + 1 == self.len {
            self.hi
        } else {
            self.lo + j as f64 * (self.hi - self.lo) / (self.len - 1) as f64
        }
    }

    /// Grid point `j` as a binary distribution.
    pub fn distribution(&self, j: usize) -> Distribution {
        Distribution::binary(self.q1(j)).expect("grid point lies in (0, 1)")
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.q1(j))
    }
}

/// Common accessors shared by the two game kinds.
pub trait GameSpec {
    fn p(&self) -> &Distribution;
    fn grid(&self) -> &QGrid;
    fn cost(&self) -> &CostFunction;
    fn n(&self) -> usize;

    /// Cost of attacker grid point `j`.
    fn cost_at(&self, j: usize) -> f64 {
        self.cost().eval(self.grid().q1(j), j)
    }
}

/// Bayesian game instance: the defender minimizes
/// `type_ii + gamma * type_i` against an attacker choosing from the grid.
#[derive(Debug, Clone)]
pub struct BayesGameSpec {
    p: Distribution,
    grid: QGrid,
    gamma: f64,
    n: usize,
    cost: CostFunction,
}

impl BayesGameSpec {
    pub fn new(
        p: Distribution,
        q_lo: f64,
        q_hi: f64,
        grid_size: usize,
        gamma: f64,
        n: usize,
        cost: CostFunction,
    ) -> Result<Self> {
        let grid = QGrid::new(q_lo, q_hi, grid_size)?;
        validate_common(&p, &grid, n, &cost)?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "gamma = {gamma} must be positive"
            )));
        }
        Ok(Self {
            p,
            grid,
            gamma,
            n,
            cost,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl GameSpec for BayesGameSpec {
    fn p(&self) -> &Distribution {
        &self.p
    }
    fn grid(&self) -> &QGrid {
        &self.grid
    }
    fn cost(&self) -> &CostFunction {
        &self.cost
    }
    fn n(&self) -> usize {
        self.n
    }
}

/// Neyman-Pearson game instance: the defender is constrained to rules whose
/// false-alarm probability is at most `epsilon`.
#[derive(Debug, Clone)]
pub struct NpGameSpec {
    p: Distribution,
    grid: QGrid,
    epsilon: f64,
    n: usize,
    cost: CostFunction,
}

impl NpGameSpec {
    pub fn new(
        p: Distribution,
        q_lo: f64,
        q_hi: f64,
        grid_size: usize,
        epsilon: f64,
        n: usize,
        cost: CostFunction,
    ) -> Result<Self> {
        let grid = QGrid::new(q_lo, q_hi, grid_size)?;
        validate_common(&p, &grid, n, &cost)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "epsilon = {epsilon} outside (0, 1)"
            )));
        }
        Ok(Self {
            p,
            grid,
            epsilon,
            n,
            cost,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl GameSpec for NpGameSpec {
    fn p(&self) -> &Distribution {
        &self.p
    }
    fn grid(&self) -> &QGrid {
        &self.grid
    }
    fn cost(&self) -> &CostFunction {
        &self.cost
    }
    fn n(&self) -> usize {
        self.n
    }
}

fn validate_common(p: &Distribution, grid: &QGrid, n: usize, cost: &CostFunction) -> Result<()> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: 2,
        });
    }
    if !p.full_support() {
        return Err(Error::InvalidParameter(
            "baseline distribution must have full support".into(),
        ));
    }
    // The baseline must sit outside the attacker's interval.
    let p1 = p.prob(1);
    if p1 >= grid.lo() && p1 <= grid.hi() {
        return Err(Error::InvalidParameter(alloc::format!(
            "p1 = {p1} lies inside Q = [{}, {}]",
            grid.lo(),
            grid.hi()
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("sample count n must be >= 1".into()));
    }
    if n + 2 > MATRIX_SIDE_CAP {
        return Err(Error::SizeCapExceeded {
            required: (n + 2) as u128,
            cap: MATRIX_SIDE_CAP as u128,
        });
    }
    if let CostFunction::Tabulated(values) = cost {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "cost table has {} entries for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
    }
    Ok(())
}

/// Dense matrix of zero-sum-equivalent payoffs: rows index attacker grid
/// points, columns index deterministic thresholds `k = 0..=n+1`. The
/// attacker maximizes entries, the defender minimizes.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PayoffMatrix {
    /// Builds a matrix from explicit rows; entries must be finite.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter("empty payoff matrix".into()));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: cols,
                });
            }
            for &x in row {
                if !x.is_finite() {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "non-finite payoff entry {x}"
                    )));
                }
                data.push(x);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }
}

/// Attacker utility: acceptance probability under the attack distribution
/// minus the attack cost.
pub fn attacker_utility(spec: &BayesGameSpec, q_index: usize, rule: &ThresholdRule) -> Result<f64> {
    check_cell(spec, q_index, rule)?;
    let q = spec.grid().distribution(q_index);
    Ok(crate::detect::type_ii_error(rule, &q)? - spec.cost_at(q_index))
}

/// Defender utility: the negated weighted classification error.
pub fn defender_utility(spec: &BayesGameSpec, q_index: usize, rule: &ThresholdRule) -> Result<f64> {
    check_cell(spec, q_index, rule)?;
    let q = spec.grid().distribution(q_index);
    Ok(-crate::detect::bayes_error(rule, &q, spec.p(), spec.gamma())?)
}

/// Zero-sum-equivalent payoff `type_ii + gamma * type_i - cost`.
pub fn zero_sum_payoff(spec: &BayesGameSpec, q_index: usize, rule: &ThresholdRule) -> Result<f64> {
    check_cell(spec, q_index, rule)?;
    let q = spec.grid().distribution(q_index);
    let type_ii = crate::detect::type_ii_error(rule, &q)?;
    let type_i = crate::detect::type_i_error(rule, spec.p())?;
    Ok(type_ii + spec.gamma() * type_i - spec.cost_at(q_index))
}

fn check_cell(spec: &BayesGameSpec, q_index: usize, rule: &ThresholdRule) -> Result<()> {
    if q_index >= spec.grid().len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "grid index {q_index} out of range"
        )));
    }
    if rule.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            left: rule.n(),
            right: spec.n(),
        });
    }
    Ok(())
}

/// The full zero-sum payoff matrix over (grid point, deterministic
/// threshold). The Type I column vector is computed once and shared across
/// rows; each row reuses one tail table for its attack distribution, so a
/// cell equals the corresponding [`zero_sum_payoff`] bit for bit.
pub fn build_payoff_matrix(spec: &BayesGameSpec) -> Result<PayoffMatrix> {
    let n = spec.n();
    let cols = n + 2;
    let gamma = spec.gamma();
    let p_table = BinomialTable::new(n, spec.p())?;
    let type_i: Vec<f64> = (0..cols).map(|k| p_table.type_i(k, 0.0)).collect();

    let mut data = Vec::with_capacity(spec.grid().len() * cols);
    for j in 0..spec.grid().len() {
        let q = spec.grid().distribution(j);
        let q_table = BinomialTable::new(n, &q)?;
        let cost = spec.cost_at(j);
        for (k, &ti) in type_i.iter().enumerate() {
            data.push(q_table.type_ii(k, 0.0) + gamma * ti - cost);
        }
    }
    Ok(PayoffMatrix {
        rows: spec.grid().len(),
        cols,
        data,
    })
}

/// Attacker utility in the Neyman-Pearson game. The rule must respect the
/// false-alarm budget `type_i(rule, p) <= epsilon` (within a small slack).
pub fn np_attacker_utility(
    spec: &NpGameSpec,
    q_index: usize,
    rule: &ThresholdRule,
) -> Result<f64> {
    if q_index >= spec.grid().len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "grid index {q_index} out of range"
        )));
    }
    if rule.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            left: rule.n(),
            right: spec.n(),
        });
    }
    let type_i = crate::detect::type_i_error(rule, spec.p())?;
    if type_i > spec.epsilon() + FALSE_ALARM_SLACK {
        return Err(Error::FalseAlarmBudget {
            type_i,
            epsilon: spec.epsilon(),
        });
    }
    let q = spec.grid().distribution(q_index);
    Ok(crate::detect::type_ii_error(rule, &q)? - spec.cost_at(q_index))
}
