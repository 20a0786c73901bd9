//! Wirtinger derivatives, complex Hessians and holomorphic polynomial maps.
//!
//! Functions live over real variables; a complex coordinate `z = x + i·y`
//! is a declared pair in the registry. Holomorphic maps are kept over a
//! separate registry of complex symbols, so they cannot mention conjugates.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::GaussMatrix;
use crate::poly::{same_registry, PolyError, SparsePoly};
use crate::registry::{VarRegistry, VarRole};
use crate::scalar::{conj, gauss, imag_unit, rat, GaussRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("function is not real-valued")]
    NonRealValued,
    #[error("matrix is not Hermitian at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("coordinate space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("variable {0} is not part of a complex coordinate")]
    UnpairedVariable(String),
    #[error("k must be at least 2 (got {0})")]
    InvalidK(usize),
}

fn coord_pair(f: &SparsePoly, coord: &str) -> Result<(usize, usize), PolyError> {
    let c = f.registry().try_coord(coord)?;
    Ok((c.re, c.im))
}

/// `∂f/∂z = ½(∂f/∂x − i ∂f/∂y)` for the named coordinate `z = x + i·y`.
pub fn d_z(f: &SparsePoly, coord: &str) -> Result<SparsePoly, PolyError> {
    let (re, im) = coord_pair(f, coord)?;
    Ok(d_z_pair(f, re, im))
}

/// `∂f/∂z̄ = ½(∂f/∂x + i ∂f/∂y)`.
pub fn d_zbar(f: &SparsePoly, coord: &str) -> Result<SparsePoly, PolyError> {
    let (re, im) = coord_pair(f, coord)?;
    Ok(d_zbar_pair(f, re, im))
}

fn half() -> GaussRational {
    gauss(rat(1, 2), Rational::zero())
}

pub(crate) fn d_z_pair(f: &SparsePoly, re: usize, im: usize) -> SparsePoly {
    (f.derivative(re) - f.derivative(im).scale(&imag_unit())).scale(&half())
}

pub(crate) fn d_zbar_pair(f: &SparsePoly, re: usize, im: usize) -> SparsePoly {
    (f.derivative(re) + f.derivative(im).scale(&imag_unit())).scale(&half())
}

/// A complex coordinate space `C^n` with its real registry (pairs `x_j, y_j`)
/// and the matching registry of holomorphic symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexCoordSpace {
    k: usize,
    real: Arc<VarRegistry>,
    holo: Arc<VarRegistry>,
}

impl ComplexCoordSpace {
    /// Wraps a registry in which every variable belongs to a complex pair.
    pub fn from_registry(k: usize, real: Arc<VarRegistry>) -> Result<Self, CalculusError> {
        for i in 0..real.len() {
            if matches!(real.role(i), VarRole::AbstractReal | VarRole::ComplexSymbol) {
                return Err(CalculusError::UnpairedVariable(real.name(i).to_string()));
            }
        }
        let mut b = VarRegistry::builder();
        for c in real.coords() {
            b = b.symbol(&c.name);
        }
        let holo = b.build()?;
        Ok(ComplexCoordSpace { k, real, holo })
    }

    /// `C^{3k−1}` with coordinates `z, w_1..w_{2k−2}, ζ_1..ζ_k`.
    pub fn source(k: usize) -> Result<Self, CalculusError> {
        if k < 2 {
            return Err(CalculusError::InvalidK(k));
        }
        let mut b = VarRegistry::builder().complex("z", "x", "y");
        for t in 1..=2 * k - 2 {
            b = b.complex(&format!("w{t}"), &format!("u{t}"), &format!("v{t}"));
        }
        for s in 1..=k {
            b = b.complex(&format!("zeta{s}"), &format!("xi{s}"), &format!("eta{s}"));
        }
        Self::from_registry(k, b.build()?)
    }

    /// `C^{2k}` with coordinates `z, w_1..w_{2k−2}, w`.
    pub fn target(k: usize) -> Result<Self, CalculusError> {
        if k < 2 {
            return Err(CalculusError::InvalidK(k));
        }
        let mut b = VarRegistry::builder().complex("z", "x", "y");
        for j in 1..=2 * k - 2 {
            b = b.complex(&format!("w{j}"), &format!("u{j}"), &format!("v{j}"));
        }
        Self::from_registry(k, b.complex("w", "wr", "wi").build()?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.real.coords().len()
    }

    pub fn real_registry(&self) -> &Arc<VarRegistry> {
        &self.real
    }

    pub fn holo_registry(&self) -> &Arc<VarRegistry> {
        &self.holo
    }

    pub fn coord_index(&self, name: &str) -> Result<usize, PolyError> {
        self.holo.try_index_of(name)
    }

    /// `x_j + i·y_j` over the real registry.
    pub fn complex_var(&self, j: usize) -> SparsePoly {
        let c = &self.real.coords()[j];
        SparsePoly::var(&self.real, c.re) + SparsePoly::var(&self.real, c.im).scale(&imag_unit())
    }

    pub fn holo_var(&self, j: usize) -> SparsePoly {
        SparsePoly::var(&self.holo, j)
    }

    pub fn holo_var_named(&self, name: &str) -> Result<SparsePoly, PolyError> {
        SparsePoly::var_named(&self.holo, name)
    }

    /// Rewrites a polynomial in holomorphic symbols over the real registry.
    pub fn realize(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        if !same_registry(f.registry(), &self.holo) {
            return Err(PolyError::RegistryMismatch);
        }
        let subst: Vec<SparsePoly> = (0..self.dim()).map(|j| self.complex_var(j)).collect();
        f.compose(&subst)
    }

    pub fn complex_point(&self, real_point: &[Rational]) -> Vec<GaussRational> {
        self.real
            .coords()
            .iter()
            .map(|c| gauss(real_point[c.re].clone(), real_point[c.im].clone()))
            .collect()
    }

    pub fn real_point(&self, z: &[GaussRational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.real.len()];
        for (c, v) in self.real.coords().iter().zip(z) {
            out[c.re] = v.re.clone();
            out[c.im] = v.im.clone();
        }
        out
    }
}

/// Square polynomial matrix with `H(i,j) = conj(H(j,i))` exactly.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianPolyMatrix {
    reg: Arc<VarRegistry>,
    n: usize,
    entries: Vec<SparsePoly>,
}

impl HermitianPolyMatrix {
    pub fn new(
        reg: &Arc<VarRegistry>,
        n: usize,
        entries: Vec<SparsePoly>,
    ) -> Result<Self, CalculusError> {
        if entries.len() != n * n {
            return Err(CalculusError::SpaceMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !same_registry(e.registry(), reg)) {
            return Err(PolyError::RegistryMismatch.into());
        }
        for i in 0..n {
            for j in i..n {
                if entries[i * n + j] != entries[j * n + i].conj() {
                    return Err(CalculusError::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(HermitianPolyMatrix {
            reg: reg.clone(),
            n,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.n + j]
    }

    pub fn eval(&self, point: &[Rational]) -> Result<GaussMatrix, PolyError> {
        let mut m = GaussMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.entry(i, j).eval(point)?;
                if i != j {
                    m.set(j, i, conj(&v));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<DMatrix<Complex64>, PolyError> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.entry(i, j).eval_f64(point)?;
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        Ok(m)
    }

    /// Entry-wise substitution; the result must still be Hermitian.
    pub fn compose(&self, subst: &[SparsePoly]) -> Result<Self, CalculusError> {
        let entries: Vec<SparsePoly> = self
            .entries
            .iter()
            .map(|e| e.compose(subst))
            .collect::<Result<_, _>>()?;
        let reg = match subst.first() {
            Some(s) => s.registry().clone(),
            None => self.reg.clone(),
        };
        Self::new(&reg, self.n, entries)
    }

    /// Row-major canonical text, one entry per line.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                out.push_str(&format!("H[{i},{j}] = {}\n", self.entry(i, j)));
            }
        }
        out
    }
}

impl fmt::Debug for HermitianPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianPolyMatrix {}x{}\n{}", self.n, self.n, self.to_canonical_string())
    }
}

/// Smallest eigenvalue of a numeric Hermitian matrix (diagnostics only).
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    nalgebra::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn gauss_matrix_to_c64(m: &GaussMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| crate::scalar::to_c64(m.get(i, j)))
}

/// `Hess_C f` with entries `∂²f/∂z_i∂z̄_j` over the space's coordinates.
pub fn complex_hessian(
    f: &SparsePoly,
    space: &ComplexCoordSpace,
) -> Result<HermitianPolyMatrix, CalculusError> {
    if !same_registry(f.registry(), space.real_registry()) {
        return Err(PolyError::RegistryMismatch.into());
    }
    if !f.is_real_valued() {
        return Err(CalculusError::NonRealValued);
    }
    let n = space.dim();
    let coords = space.real_registry().coords();
    let first: Vec<(SparsePoly, SparsePoly)> = coords
        .iter()
        .map(|c| (f.derivative(c.re), f.derivative(c.im)))
        .collect();
    let quarter = gauss(rat(1, 4), Rational::zero());
    let mut entries = vec![SparsePoly::zero(space.real_registry()); n * n];
    for i in 0..n {
        for j in i..n {
            let (fa_i, fb_i) = &first[i];
            let (a_j, b_j) = (coords[j].re, coords[j].im);
            let re = fa_i.derivative(a_j) + fb_i.derivative(b_j);
            let im = fa_i.derivative(b_j) - fb_i.derivative(a_j);
            let h = (re + im.scale(&imag_unit())).scale(&quarter);
            entries[j * n + i] = h.conj();
            entries[i * n + j] = h;
        }
    }
    HermitianPolyMatrix::new(space.real_registry(), n, entries)
}

/// A polynomial map between complex coordinate spaces whose components are
/// polynomials in the source's holomorphic symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoloPolyMap {
    source: ComplexCoordSpace,
    target: ComplexCoordSpace,
    components: Vec<SparsePoly>,
}

impl HoloPolyMap {
    pub fn new(
        source: ComplexCoordSpace,
        target: ComplexCoordSpace,
        components: Vec<SparsePoly>,
    ) -> Result<Self, CalculusError> {
        if components.len() != target.dim() {
            return Err(CalculusError::SpaceMismatch(format!(
                "{} components for a target of dimension {}",
                components.len(),
                target.dim()
            )));
        }
        if components
            .iter()
            .any(|c| !same_registry(c.registry(), source.holo_registry()))
        {
            return Err(PolyError::RegistryMismatch.into());
        }
        Ok(HoloPolyMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(space: &ComplexCoordSpace) -> Self {
        let comps = (0..space.dim()).map(|j| space.holo_var(j)).collect();
        HoloPolyMap {
            source: space.clone(),
            target: space.clone(),
            components: comps,
        }
    }

    pub fn source(&self) -> &ComplexCoordSpace {
        &self.source
    }

    pub fn target(&self) -> &ComplexCoordSpace {
        &self.target
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &HoloPolyMap) -> Result<HoloPolyMap, CalculusError> {
        if inner.target != self.source {
            return Err(CalculusError::SpaceMismatch(
                "inner map does not land in the outer map's source".into(),
            ));
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<_, _>>()?;
        HoloPolyMap::new(inner.source.clone(), self.target.clone(), comps)
    }

    /// Components over the source's real registry (complex-valued).
    pub fn realize(&self) -> Result<Vec<SparsePoly>, PolyError> {
        self.components
            .iter()
            .map(|c| self.source.realize(c))
            .collect()
    }

    /// Real and imaginary parts of the components, one per target real
    /// variable, ready for substitution into a function on the target.
    pub fn real_substitution(&self) -> Result<Vec<SparsePoly>, PolyError> {
        let realized = self.realize()?;
        let treg = self.target.real_registry();
        Ok((0..treg.len())
            .map(|v| match treg.role(v) {
                VarRole::RealPart { coord } => realized[coord].re_part(),
                VarRole::ImagPart { coord } => realized[coord].im_part(),
                _ => unreachable!("target spaces only hold paired variables"),
            })
            .collect())
    }

    pub fn eval_gauss(&self, z: &[GaussRational]) -> Result<Vec<GaussRational>, PolyError> {
        self.components.iter().map(|c| c.eval_gauss(z)).collect()
    }

    /// Image of a real source point, as target real coordinates.
    pub fn eval_real(&self, point: &[Rational]) -> Result<Vec<Rational>, PolyError> {
        let z = self.source.complex_point(point);
        Ok(self.target.real_point(&self.eval_gauss(&z)?))
    }

    /// `∂F_i/∂z_j` as holomorphic polynomials.
    pub fn complex_jacobian(&self) -> Vec<Vec<SparsePoly>> {
        self.components
            .iter()
            .map(|c| (0..self.source.dim()).map(|j| c.derivative(j)).collect())
            .collect()
    }

    pub fn jacobian_at(&self, z: &[GaussRational]) -> Result<GaussMatrix, PolyError> {
        let rows = self
            .complex_jacobian()
            .iter()
            .map(|row| row.iter().map(|p| p.eval_gauss(z)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(GaussMatrix::from_rows(rows))
    }

    /// Exact kernel basis of the complex Jacobian at `z`.
    pub fn jacobian_kernel_at(
        &self,
        z: &[GaussRational],
    ) -> Result<Vec<Vec<GaussRational>>, PolyError> {
        Ok(self.jacobian_at(z)?.null_space())
    }
}

/// `ρ ∘ F` over the source's real variables.
pub fn pullback(rho: &SparsePoly, f: &HoloPolyMap) -> Result<SparsePoly, CalculusError> {
    if !same_registry(rho.registry(), f.target().real_registry()) {
        return Err(CalculusError::SpaceMismatch(
            "function does not live on the map's target".into(),
        ));
    }
    Ok(rho.compose(&f.real_substitution()?)?)
}

/// `Hess_C(ρ ∘ F)` computed directly from the composite.
pub fn pullback_hessian(
    rho: &SparsePoly,
    f: &HoloPolyMap,
) -> Result<HermitianPolyMatrix, CalculusError> {
    if !rho.is_real_valued() {
        return Err(CalculusError::NonRealValued);
    }
    complex_hessian(&pullback(rho, f)?, f.source())
}

/// `Jᵀ · (Hess_C ρ ∘ F) · J̄` as a polynomial matrix.
pub fn chain_rule_hessian(
    rho: &SparsePoly,
    f: &HoloPolyMap,
) -> Result<HermitianPolyMatrix, CalculusError> {
    let hess = complex_hessian(rho, f.target())?;
    let pulled = hess.compose(&f.real_substitution()?)?;
    let sreg = f.source().real_registry();
    let jac: Vec<Vec<SparsePoly>> = f
        .complex_jacobian()
        .iter()
        .map(|row| row.iter().map(|p| f.source().realize(p)).collect())
        .collect::<Result<_, _>>()?;
    let jac_conj: Vec<Vec<SparsePoly>> = jac
        .iter()
        .map(|row| row.iter().map(|p| p.conj()).collect())
        .collect();
    let (m, n) = (f.target().dim(), f.source().dim());
    // H·J̄ first, then Jᵀ·(H·J̄)
    let mut hj = vec![SparsePoly::zero(sreg); m * n];
    for i in 0..m {
        for b in 0..n {
            let mut acc = SparsePoly::zero(sreg);
            for j in 0..m {
                if pulled.entry(i, j).is_zero() || jac_conj[j][b].is_zero() {
                    continue;
                }
                acc = acc.checked_add(&pulled.entry(i, j).checked_mul(&jac_conj[j][b])?)?;
            }
            hj[i * n + b] = acc;
        }
    }
    let mut out = vec![SparsePoly::zero(sreg); n * n];
    for a in 0..n {
        for b in 0..n {
            let mut acc = SparsePoly::zero(sreg);
            for i in 0..m {
                if jac[i][a].is_zero() || hj[i * n + b].is_zero() {
                    continue;
                }
                acc = acc.checked_add(&jac[i][a].checked_mul(&hj[i * n + b])?)?;
            }
            out[a * n + b] = acc;
        }
    }
    HermitianPolyMatrix::new(sreg, n, out)
}

/// Numeric chain rule at one source point, from a precomputed `Hess_C ρ`.
pub fn chain_rule_hessian_at(
    hess_rho: &HermitianPolyMatrix,
    f: &HoloPolyMap,
    point: &[Rational],
) -> Result<GaussMatrix, PolyError> {
    let z = f.source().complex_point(point);
    let image = f.target().real_point(&f.eval_gauss(&z)?);
    let h = hess_rho.eval(&image)?;
    // Jᵀ H J̄ = K* H K with K = J̄
    let mut k = f.jacobian_at(&z)?;
    for r in 0..k.rows() {
        for c in 0..k.cols() {
            let v = crate::scalar::conj(k.get(r, c));
            k.set(r, c, v);
        }
    }
    Ok(k.conj_transpose().mul(&h.mul(&k)))
}
