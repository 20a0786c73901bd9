//! Dense tableau simplex for `max c·x` subject to `A x ≤ b`, `x ≥ 0` with
//! `b ≥ 0`, so the slack basis is an initial feasible vertex.

use crate::HullError;

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64, pivots: usize },
    Unbounded,
}

/// `rows` are the rows of `A`; every row has `c.len()` entries.
pub fn maximize(c: &[f64], rows: &[Vec<f64>], b: &[f64], max_pivots: usize) -> Result<LpOutcome, HullError> {
    let n = c.len();
    let m = rows.len();
    if b.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(HullError::Lp("dimension mismatch".into()));
    }
    if b.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(HullError::Lp("right-hand side must be non-negative".into()));
    }
    let width = n + m + 1;
    // row-major tableau; the last row is the objective (reduced costs)
    let mut t = vec![0.0; (m + 1) * width];
    for (i, r) in rows.iter().enumerate() {
        t[i * width..i * width + n].copy_from_slice(r);
        t[i * width + n + i] = 1.0;
        t[i * width + width - 1] = b[i];
    }
    for j in 0..n {
        t[m * width + j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    loop {
        let obj = &t[m * width..(m + 1) * width - 1];
        // Dantzig's rule; Bland's for good once a long degenerate run shows up
        let entering = if degenerate_run < 50 {
            obj.iter()
                .enumerate()
                .filter(|(_, &v)| v < -TOL)
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
        } else {
            obj.iter().position(|&v| v < -TOL)
        };
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * width + col];
            if a > TOL {
                let ratio = t[i * width + width - 1] / a;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => ratio < lr - TOL || (ratio <= lr + TOL && basis[i] < basis[li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, ratio)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        if ratio.abs() <= TOL {
            degenerate_run += 1;
        } else if degenerate_run < 50 {
            degenerate_run = 0;
        }
        pivot(&mut t, width, m, row, col);
        // rounding drift must not make a basic value negative
        for i in 0..m {
            let v = &mut t[i * width + width - 1];
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        basis[row] = col;
        pivots += 1;
        if pivots > max_pivots {
            return Err(HullError::Lp(format!("no optimum after {max_pivots} pivots")));
        }
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i * width + width - 1];
        }
    }
    let value = t[(m + 1) * width - 1];
    Ok(LpOutcome::Optimal { x, value, pivots })
}

fn pivot(t: &mut [f64], width: usize, m: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    for v in &mut t[row * width..(row + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<f64> = t[row * width..(row + 1) * width].to_vec();
    for i in 0..=m {
        if i == row {
            continue;
        }
        let f = t[i * width + col];
        if f.abs() <= f64::EPSILON {
            continue;
        }
        let dst = &mut t[i * width..(i + 1) * width];
        for (d, s) in dst.iter_mut().zip(&pivot_row) {
            *d -= f * s;
        }
    }
}
