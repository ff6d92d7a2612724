//! Dense primal simplex for `max c'x  s.t.  Ax <= b, x >= 0` with `b >= 0`,
//! so the all-slack basis is the starting vertex. Bland's rule picks both
//! the entering and leaving variable, which rules out cycling; pivots below
//! the pivot tolerance are treated as zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub(crate) const PIVOT_TOL: f64 = 1e-11;
pub(crate) const PIVOT_CAP: u64 = 1_000_000;

pub(crate) struct SimplexOutcome {
    pub objective: f64,
    /// Optimal values of the structural variables.
    pub solution: Vec<f64>,
}

/// Solves the LP. `a` is row-major with `rows * cols` entries.
pub(crate) fn maximize(
    a: &[f64],
    rows: usize,
    cols: usize,
    b: &[f64],
    c: &[f64],
    pivot_tol: f64,
    pivot_cap: u64,
) -> Result<SimplexOutcome> {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(b.len(), rows);
    debug_assert_eq!(c.len(), cols);
    debug_assert!(b.iter().all(|&x| x >= 0.0));

    // Tableau columns: structural | slack | rhs.
    let width = cols + rows + 1;
    let mut tab = vec![0.0f64; rows * width];
    for i in 0..rows {
        let row = &mut tab[i * width..(i + 1) * width];
        row[..cols].copy_from_slice(&a[i * cols..(i + 1) * cols]);
        row[cols + i] = 1.0;
        row[width - 1] = b[i];
    }
    // Objective row holds z - c'x = 0, so entries start at -c.
    let mut obj = vec![0.0f64; width];
    for j in 0..cols {
        obj[j] = -c[j];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let mut pivots: u64 = 0;
    loop {
        // Bland: entering variable is the smallest-index improving column.
        let entering = (0..cols + rows).find(|&j| obj[j] < -pivot_tol);
        let Some(e) = entering else {
            break;
        };

        // Ratio test; Bland breaks ties by the smallest basic variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..rows {
            let coeff = tab[i * width + e];
            if coeff > pivot_tol {
                let ratio = tab[i * width + width - 1] / coeff;
                let better = ratio < best_ratio - 1e-15
                    || (libm::fabs(ratio - best_ratio) <= 1e-15
                        && leave.is_some_and(|r| basis[i] < basis[r]));
                if leave.is_none() || better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(Error::Unbounded);
        };

        pivots += 1;
        if pivots > pivot_cap {
            return Err(Error::PivotLimit {
                pivots,
                gap: f64::INFINITY,
            });
        }

        pivot(&mut tab, &mut obj, rows, width, r, e);
        basis[r] = e;
    }

    let mut solution = vec![0.0f64; cols];
    for i in 0..rows {
        if basis[i] < cols {
            solution[basis[i]] = tab[i * width + width - 1];
        }
    }
    Ok(SimplexOutcome {
        objective: obj[width - 1],
        solution,
    })
}

fn pivot(tab: &mut [f64], obj: &mut [f64], rows: usize, width: usize, r: usize, e: usize) {
    let inv = 1.0 / tab[r * width + e];
    for j in 0..width {
        tab[r * width + j] *= inv;
    }
    tab[r * width + e] = 1.0;

    for i in 0..rows {
        if i == r {
            continue;
        }
        let factor = tab[i * width + e];
        if factor != 0.0 {
            for j in 0..width {
                tab[i * width + j] -= factor * tab[r * width + j];
            }
            tab[i * width + e] = 0.0;
        }
    }
    let factor = obj[e];
    if factor != 0.0 {
        for j in 0..width {
            obj[j] -= factor * tab[r * width + j];
        }
        obj[e] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_textbook_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> x=2, y=6, z=36.
        let a = [1.0, 0.0, 0.0, 2.0, 3.0, 2.0];
        let out = maximize(
            &a,
            3,
            2,
            &[4.0, 12.0, 18.0],
            &[3.0, 5.0],
            PIVOT_TOL,
            PIVOT_CAP,
        )
        .unwrap();
        assert!((out.objective - 36.0).abs() < 1e-10);
        assert!((out.solution[0] - 2.0).abs() < 1e-10);
        assert!((out.solution[1] - 6.0).abs() < 1e-10);
    }

    #[test]
    fn detects_unbounded() {
        // max x s.t. -x <= 1: unbounded above.
        let a = [-1.0];
        let err = maximize(&a, 1, 1, &[1.0], &[1.0], PIVOT_TOL, PIVOT_CAP);
        assert!(matches!(err, Err(Error::Unbounded)));
    }

    #[test]
    fn degenerate_constraints_terminate() {
        // Redundant rows force degenerate pivots; Bland must still finish.
        let a = [1.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        let out = maximize(
            &a,
            3,
            2,
            &[1.0, 1.0, 1.0],
            &[1.0, 1.0],
            PIVOT_TOL,
            PIVOT_CAP,
        )
        .unwrap();
        assert!((out.objective - 1.0).abs() < 1e-10);
    }
}
