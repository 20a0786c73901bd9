//! Least-squares approximation of `z̄` on a disk grid by the span of
//! `z^a z̄^{2b}`, `a + 2b ≤ d`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::HullError;

#[derive(Debug, Clone, PartialEq)]
pub struct FiberRow {
    pub degree: usize,
    pub basis_size: usize,
    /// Root-mean-square residual over the grid.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberTable {
    pub grid: usize,
    pub points: usize,
    pub fiber: String,
    pub rows: Vec<FiberRow>,
}

impl FiberTable {
    pub fn error_at(&self, degree: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.degree == degree).map(|r| r.error)
    }

    /// Errors non-increasing in degree, to `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r.degree);
        rows.windows(2).all(|w| w[1].error <= w[0].error + slack)
    }
}

/// Centres of a `grid × grid` lattice on `[−1, 1]²` inside the closed unit disk.
pub fn disk_grid(grid: usize) -> Vec<Complex64> {
    let h = 2.0 / grid as f64;
    let mut out = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let z = Complex64::new(-1.0 + h * (i as f64 + 0.5), -1.0 + h * (j as f64 + 0.5));
            if z.norm() <= 1.0 {
                out.push(z);
            }
        }
    }
    out
}

/// Exponent pairs `(a, b)` of `z^a z̄^{2b}` with `a + 2b ≤ d`.
pub fn fiber_basis(d: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for b in 0..=d / 2 {
        for a in 0..=d - 2 * b {
            out.push((a as u32, b as u32));
        }
    }
    out
}

pub fn fiber_density_experiment(degrees: &[usize], grid: usize) -> Result<FiberTable, HullError> {
    if degrees.is_empty() {
        return Err(HullError::Invalid("no degrees requested".into()));
    }
    if grid == 0 {
        return Err(HullError::Invalid("empty grid".into()));
    }
    let pts = disk_grid(grid);
    let target = DVector::from_iterator(pts.len(), pts.iter().map(|z| z.conj()));
    let mut rows = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let basis = fiber_basis(d);
        let a = DMatrix::from_fn(pts.len(), basis.len(), |i, j| {
            let (ea, eb) = basis[j];
            pts[i].powu(ea) * pts[i].conj().powu(2 * eb)
        });
        let svd = a.clone().svd(true, true);
        let coef = svd
            .solve(&target, 1e-13)
            .map_err(|e| HullError::Invalid(format!("least squares: {e}")))?;
        let resid = &target - &a * coef;
        let error = (resid.iter().map(|r| r.norm_sqr()).sum::<f64>() / pts.len() as f64).sqrt();
        rows.push(FiberRow { degree: d, basis_size: basis.len(), error });
    }
    Ok(FiberTable {
        grid,
        points: pts.len(),
        fiber: "w = 0 (unit disk in z)".into(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_the_centred_norm() {
        let pts = disk_grid(16);
        let mean: Complex64 = pts.iter().map(|z| z.conj()).sum::<Complex64>() / pts.len() as f64;
        let expect = (pts.iter().map(|z| (z.conj() - mean).norm_sqr()).sum::<f64>() / pts.len() as f64).sqrt();
        let t = fiber_density_experiment(&[0], 16).unwrap();
        assert!((t.rows[0].error - expect).abs() < 1e-12);
        assert!(t.rows[0].error > 0.0);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(fiber_basis(0), vec![(0, 0)]);
        assert_eq!(fiber_basis(2).len(), 4);
        assert_eq!(fiber_basis(12).len(), 49);
    }

    #[test]
    fn errors_decrease() {
        let t = fiber_density_experiment(&[0, 2, 4, 8], 24).unwrap();
        assert!(t.is_monotone(1e-12));
    }
}
