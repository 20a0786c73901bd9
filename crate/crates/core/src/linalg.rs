//! Exact dense linear algebra over Gaussian rationals.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::scalar::{conj, fmt_gauss, gone, gzero, is_gzero, real, GaussRational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct GaussMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl GaussMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GaussMatrix {
            rows,
            cols,
            data: vec![gzero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, gone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        GaussMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_real_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(real).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, conj(self.get(i, j)));
            }
        }
        out
    }

    pub fn mul(&self, other: &GaussMatrix) -> GaussMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if is_gzero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !is_gzero(b) {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = gzero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !is_gzero(a) && !is_gzero(b) {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| *self.get(i, j) == conj(self.get(j, i))))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (GaussMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !is_gzero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = gone() / m.get(r, c).clone();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || is_gzero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &factor * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self · v = 0}`, one vector per free column, with a 1
    /// in that column.
    pub fn null_space(&self) -> Vec<Vec<GaussRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![gzero(); self.cols];
                v[f] = gone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> GaussRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = gone();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !is_gzero(m.get(i, c))) else {
                return gzero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            let inv = gone() / pivot;
            for i in c + 1..n {
                if is_gzero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn submatrix(&self, idx: &[usize]) -> GaussMatrix {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Leading principal minors `det(M[0..k, 0..k])` for `k = 1..=n`.
    ///
    /// Computed from the elimination pivots; once a pivot vanishes the
    /// remaining minors are computed directly.
    pub fn leading_principal_minors(&self) -> Vec<GaussRational> {
        let n = self.rows;
        let mut m = self.clone();
        let mut out = Vec::with_capacity(n);
        let mut acc = gone();
        for c in 0..n {
            let pivot = m.get(c, c).clone();
            if is_gzero(&pivot) {
                out.push(gzero());
                for k in c + 2..=n {
                    let idx: Vec<usize> = (0..k).collect();
                    out.push(self.submatrix(&idx).det());
                }
                return out;
            }
            acc *= &pivot;
            out.push(acc.clone());
            let inv = gone() / pivot;
            for i in c + 1..n {
                if is_gzero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        out
    }

    /// All `2^n − 1` principal minors, indexed by the bitmask of kept rows.
    pub fn principal_minors(&self) -> Vec<(u32, GaussRational)> {
        let n = self.rows;
        assert!(n <= 20, "too many principal minors");
        (1u32..(1u32 << n))
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                (mask, self.submatrix(&idx).det())
            })
            .collect()
    }
}

impl fmt::Debug for GaussMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GaussMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_gauss).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdVerdict {
    PositiveDefinite,
    PositiveSemidefinite,
    /// A minor with the wrong sign; `mask` selects its rows/columns.
    Violated { mask: u32, minor: Rational },
}

#[derive(Debug, Clone)]
pub struct PsdCertificate {
    pub verdict: PsdVerdict,
    /// Smallest minor examined (leading minors when strict, all principal
    /// minors otherwise).
    pub min_minor: Rational,
}

impl PsdCertificate {
    pub fn passed(&self) -> bool {
        !matches!(self.verdict, PsdVerdict::Violated { .. })
    }
}

/// Exact definiteness test of a Hermitian matrix.
///
/// Strict: Sylvester's criterion on the leading principal minors.
/// Non-strict: every principal minor is nonnegative.
pub fn psd_certificate(h: &GaussMatrix, strict: bool) -> PsdCertificate {
    assert!(h.is_hermitian(), "psd test needs a Hermitian matrix");
    if strict {
        let minors = h.leading_principal_minors();
        let mut min = None::<Rational>;
        let mut violated = None;
        for (k, m) in minors.iter().enumerate() {
            let v = m.re.clone();
            if violated.is_none() && !v.is_positive() {
                violated = Some(((1u32 << (k + 1)) - 1, v.clone()));
            }
            min = Some(match min {
                Some(cur) if cur <= v => cur,
                _ => v,
            });
        }
        let min_minor = min.unwrap_or_else(Rational::zero);
        return PsdCertificate {
            verdict: match violated {
                Some((mask, minor)) => PsdVerdict::Violated { mask, minor },
                None => PsdVerdict::PositiveDefinite,
            },
            min_minor,
        };
    }
    let minors = h.principal_minors();
    let mut min = None::<Rational>;
    let mut violated = None;
    for (mask, m) in &minors {
        let v = m.re.clone();
        if violated.is_none() && v.is_negative() {
            violated = Some((*mask, v.clone()));
        }
        min = Some(match min {
            Some(cur) if cur <= v => cur,
            _ => v,
        });
    }
    PsdCertificate {
        verdict: match violated {
            Some((mask, minor)) => PsdVerdict::Violated { mask, minor },
            None => PsdVerdict::PositiveSemidefinite,
        },
        min_minor: min.unwrap_or_else(Rational::zero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, int, rat};

    fn real_matrix(rows: &[&[i64]]) -> GaussMatrix {
        GaussMatrix::from_real_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn determinant_and_rank() {
        let m = real_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), real(int(18)));
        assert_eq!(m.rank(), 3);
        let singular = real_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), gzero());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = GaussMatrix::from_rows(vec![
            vec![gone(), gauss(int(0), int(1)), gzero()],
            vec![real(int(2)), gauss(int(0), int(2)), gzero()],
        ]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(is_gzero));
        }
    }

    #[test]
    fn leading_minors_with_zero_pivot() {
        let m = real_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.leading_principal_minors(), vec![gzero(), real(int(-1))]);
    }

    #[test]
    fn psd_verdicts() {
        let id = GaussMatrix::identity(3);
        assert_eq!(psd_certificate(&id, true).verdict, PsdVerdict::PositiveDefinite);
        let semi = real_matrix(&[&[1, 1], &[1, 1]]);
        assert!(!psd_certificate(&semi, true).passed());
        assert_eq!(
            psd_certificate(&semi, false).verdict,
            PsdVerdict::PositiveSemidefinite
        );
        let h = GaussMatrix::from_rows(vec![
            vec![real(int(2)), gauss(rat(1, 2), int(1))],
            vec![gauss(rat(1, 2), int(-1)), real(int(1))],
        ]);
        assert!(h.is_hermitian());
        // det = 2 − 5/4 = 3/4
        let cert = psd_certificate(&h, true);
        assert_eq!(cert.verdict, PsdVerdict::PositiveDefinite);
        assert_eq!(cert.min_minor, rat(3, 4));
        let indefinite = real_matrix(&[&[1, 0], &[0, -1]]);
        assert!(matches!(
            psd_certificate(&indefinite, false).verdict,
            PsdVerdict::Violated { mask: 2, .. }
        ));
    }
}
