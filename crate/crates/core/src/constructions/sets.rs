//! Charts and algebraic sets: the normal form `𝓜_k`, the model surfaces
//! `S_α`, the preimages `M_α^σ`, `X_α^σ` and the singular set `Y`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::maps::{build_f_sigma, shift_weights, ShiftConvention};
use super::{check_k, ConstructionError};
use crate::linalg::GaussMatrix;
use crate::poly::{same_registry, SparsePoly};
use crate::registry::VarRegistry;
use crate::scalar::{gauss, imag_unit, int, real, GaussRational, Rational};
use crate::sheared::ShearedCoords;
use crate::wirtinger::{ComplexCoordSpace, HoloPolyMap};

/// A polynomial parametrization of a real submanifold of a complex space.
#[derive(Debug, Clone)]
pub struct ManifoldChart {
    name: String,
    params: Arc<VarRegistry>,
    ambient: ComplexCoordSpace,
    /// One complex-valued polynomial per ambient complex coordinate.
    components: Vec<SparsePoly>,
}

impl ManifoldChart {
    pub fn new(
        name: impl Into<String>,
        params: Arc<VarRegistry>,
        ambient: ComplexCoordSpace,
        components: Vec<SparsePoly>,
    ) -> Result<Self, ConstructionError> {
        if components.len() != ambient.dim()
            || components.iter().any(|c| !same_registry(c.registry(), &params))
        {
            return Err(ConstructionError::Shape(
                "chart components do not match the ambient space".into(),
            ));
        }
        Ok(ManifoldChart {
            name: name.into(),
            params,
            ambient,
            components,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &Arc<VarRegistry> {
        &self.params
    }

    pub fn ambient(&self) -> &ComplexCoordSpace {
        &self.ambient
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    /// Real and imaginary parts, one per ambient real variable.
    pub fn real_components(&self) -> Vec<SparsePoly> {
        let reg = self.ambient.real_registry();
        let mut out = vec![SparsePoly::zero(&self.params); reg.len()];
        for (c, comp) in reg.coords().iter().zip(&self.components) {
            out[c.re] = comp.re_part();
            out[c.im] = comp.im_part();
        }
        out
    }

    /// `f ∘ chart` for `f` over the ambient real registry.
    pub fn pull(&self, f: &SparsePoly) -> Result<SparsePoly, ConstructionError> {
        Ok(f.compose(&self.real_components())?)
    }

    /// Target real coordinates of `F ∘ chart`.
    pub fn push(&self, f: &HoloPolyMap) -> Result<Vec<SparsePoly>, ConstructionError> {
        let comps = self.real_components();
        f.real_substitution()?
            .iter()
            .map(|p| p.compose(&comps).map_err(Into::into))
            .collect()
    }

    /// Exact ambient real point for the given parameters.
    pub fn point(&self, params: &[Rational]) -> Result<Vec<Rational>, ConstructionError> {
        let z: Vec<GaussRational> = self
            .components
            .iter()
            .map(|c| c.eval(params))
            .collect::<Result<_, _>>()?;
        Ok(self.ambient.real_point(&z))
    }

    pub fn point_f64(&self, params: &[f64]) -> Result<Vec<f64>, ConstructionError> {
        let reg = self.ambient.real_registry();
        let mut out = vec![0.0; reg.len()];
        for (c, comp) in reg.coords().iter().zip(&self.components) {
            let v = comp.eval_f64(params)?;
            out[c.re] = v.re;
            out[c.im] = v.im;
        }
        Ok(out)
    }
}

/// Common zero set of finitely many real-valued polynomials.
#[derive(Debug, Clone)]
pub struct AlgebraicSet {
    name: String,
    reg: Arc<VarRegistry>,
    equations: Vec<SparsePoly>,
}

impl AlgebraicSet {
    pub fn new(
        name: impl Into<String>,
        reg: &Arc<VarRegistry>,
        equations: Vec<SparsePoly>,
    ) -> Result<Self, ConstructionError> {
        for e in &equations {
            if !same_registry(e.registry(), reg) {
                return Err(crate::poly::PolyError::RegistryMismatch.into());
            }
            if !e.is_real_valued() {
                return Err(ConstructionError::Shape(
                    "defining polynomials must be real-valued".into(),
                ));
            }
        }
        Ok(AlgebraicSet {
            name: name.into(),
            reg: reg.clone(),
            equations,
        })
    }

    /// Splits complex equations into real and imaginary parts; `real_eqs`
    /// are taken as they are.
    pub fn from_complex(
        name: impl Into<String>,
        reg: &Arc<VarRegistry>,
        complex_eqs: &[SparsePoly],
        real_eqs: Vec<SparsePoly>,
    ) -> Result<Self, ConstructionError> {
        let mut eqs = Vec::new();
        for e in complex_eqs {
            eqs.push(e.re_part());
            eqs.push(e.im_part());
        }
        eqs.extend(real_eqs);
        Self::new(name, reg, eqs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    pub fn contains(&self, point: &[Rational]) -> Result<bool, ConstructionError> {
        for e in &self.equations {
            if !e.eval(point)?.re.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_linear(&self) -> bool {
        self.equations.iter().all(|e| e.degree().unwrap_or(0) <= 1)
    }

    /// `(A, b)` with the set equal to `{p : A p = b}`, when every equation
    /// is affine.
    pub fn linear_system(&self) -> Option<(GaussMatrix, Vec<Rational>)> {
        if !self.is_linear() {
            return None;
        }
        let n = self.reg.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for e in &self.equations {
            let mut row = vec![Rational::zero(); n];
            for (v, slot) in row.iter_mut().enumerate() {
                let mut exps = vec![0u32; n];
                exps[v] = 1;
                *slot = e.coeff_of(&exps).re;
            }
            rows.push(row);
            rhs.push(-e.constant_term().re);
        }
        Some((GaussMatrix::from_real_rows(rows), rhs))
    }

    /// Exact squared Euclidean distance to an affine set.
    pub fn sq_distance(&self, point: &[Rational]) -> Option<Rational> {
        let (a, b) = self.linear_system()?;
        // drop dependent rows so the Gram matrix is invertible
        let (_, pivots) = a.conj_transpose().rref();
        let keep: Vec<usize> = pivots;
        let n = self.reg.len();
        let residual: Vec<Rational> = keep
            .iter()
            .map(|&r| {
                let mut s = -b[r].clone();
                for (j, p) in point.iter().enumerate().take(n) {
                    s += &a.get(r, j).re * p;
                }
                s
            })
            .collect();
        let m = keep.len();
        if m == 0 {
            return Some(Rational::zero());
        }
        let mut gram = GaussMatrix::zeros(m, m + 1);
        for (i, &ri) in keep.iter().enumerate() {
            for (j, &rj) in keep.iter().enumerate() {
                let mut s = Rational::zero();
                for c in 0..n {
                    s += &a.get(ri, c).re * &a.get(rj, c).re;
                }
                gram.set(i, j, real(s));
            }
            gram.set(i, m, real(residual[i].clone()));
        }
        // solve G y = r; distance² = r · y
        let (red, _) = gram.rref();
        let mut d = Rational::zero();
        for i in 0..m {
            d += &residual[i] * &red.get(i, m).re;
        }
        Some(d)
    }
}

fn source_var(src: &ComplexCoordSpace, name: &str) -> SparsePoly {
    SparsePoly::var_named(src.real_registry(), name).expect("source variable")
}

fn complex_coord(space: &ComplexCoordSpace, name: &str) -> SparsePoly {
    space.complex_var(space.coord_index(name).expect("coordinate"))
}

/// Chart of `𝓜_k` over parameters `x, y, u_1, …, u_{2k−2}`.
pub fn build_normal_form(k: usize) -> Result<ManifoldChart, ConstructionError> {
    check_k(k)?;
    let mut b = VarRegistry::builder().complex("z", "x", "y");
    for t in 1..=2 * k - 2 {
        b = b.real(&format!("u{t}"));
    }
    let params = b.build()?;
    let ambient = ComplexCoordSpace::source(k)?;
    let var = |n: &str| SparsePoly::var_named(&params, n).expect("parameter");
    let i = imag_unit();
    let z = var("x") + var("y").scale(&i);
    let zb = z.conj();
    let pair = |s: usize| var(&format!("u{}", 2 * s - 1)) + var(&format!("u{}", 2 * s)).scale(&i);
    let mut comps = vec![z.clone()];
    for t in 1..=2 * k - 2 {
        comps.push(var(&format!("u{t}")));
    }
    comps.push(&z * &zb + &zb * &pair(1));
    for s in 2..k {
        comps.push(&zb * &pair(s));
    }
    comps.push(zb.pow(2));
    ManifoldChart::new(format!("normal_form_k{k}"), params, ambient, comps)
}

/// Defining equations of `𝓜_k` over the source real registry.
pub fn normal_form_equations(k: usize) -> Result<AlgebraicSet, ConstructionError> {
    check_k(k)?;
    let src = ComplexCoordSpace::source(k)?;
    let i = imag_unit();
    let z = complex_coord(&src, "z");
    let zb = z.conj();
    let pair = |s: usize| {
        source_var(&src, &format!("u{}", 2 * s - 1))
            + source_var(&src, &format!("u{}", 2 * s)).scale(&i)
    };
    let mut eqs = vec![complex_coord(&src, "zeta1") - &z * &zb - &zb * &pair(1)];
    for s in 2..k {
        eqs.push(complex_coord(&src, &format!("zeta{s}")) - &zb * &pair(s));
    }
    eqs.push(complex_coord(&src, &format!("zeta{k}")) - zb.pow(2));
    let vs = (1..=2 * k - 2)
        .map(|t| source_var(&src, &format!("v{t}")))
        .collect();
    AlgebraicSet::from_complex(format!("normal_form_k{k}"), src.real_registry(), &eqs, vs)
}

/// Chart of `S_α`: `w_j = u_j` real, `w = (α/2)|z|² + ¼(z² + z̄²)`.
pub fn build_s_alpha(k: usize, alpha: &Rational) -> Result<ManifoldChart, ConstructionError> {
    check_k(k)?;
    if *alpha >= int(1) {
        return Err(ConstructionError::AlphaPole {
            alpha: alpha.clone(),
        });
    }
    let mut b = VarRegistry::builder().complex("z", "x", "y");
    for j in 1..=2 * k - 2 {
        b = b.real(&format!("u{j}"));
    }
    let params = b.build()?;
    let ambient = ComplexCoordSpace::target(k)?;
    let var = |n: &str| SparsePoly::var_named(&params, n).expect("parameter");
    let z = var("x") + var("y").scale(&imag_unit());
    let zb = z.conj();
    let w = (&z * &zb).scale_rat(&(alpha / int(2)))
        + (z.pow(2) + zb.pow(2)).scale_rat(&Rational::new(1.into(), 4.into()));
    let mut comps = vec![z];
    for j in 1..=2 * k - 2 {
        comps.push(var(&format!("u{j}")));
    }
    comps.push(w);
    ManifoldChart::new(format!("s_alpha_k{k}"), params, ambient, comps)
}

/// `S_α = {u = 0, v_j = 0, v = 0}` written over the raw target coordinates.
pub fn s_alpha_equations(k: usize, alpha: &Rational) -> Result<AlgebraicSet, ConstructionError> {
    let sc = ShearedCoords::new(k, alpha.clone())?;
    let reg = sc.raw().real_registry().clone();
    let mut eqs = vec![sc.u_in_raw()];
    for j in 1..=2 * k - 2 {
        eqs.push(SparsePoly::var_named(&reg, &format!("v{j}"))?);
    }
    eqs.push(SparsePoly::var_named(&reg, "wi")?);
    AlgebraicSet::new(format!("s_alpha_k{k}"), &reg, eqs)
}

/// `Y = {z = 0, Im w_j = 0, w = 0}` over the raw target coordinates.
pub fn build_y(k: usize) -> Result<AlgebraicSet, ConstructionError> {
    check_k(k)?;
    let tgt = ComplexCoordSpace::target(k)?;
    let reg = tgt.real_registry().clone();
    let var = |n: &str| SparsePoly::var_named(&reg, n).expect("target variable");
    let mut eqs = vec![var("x"), var("y")];
    for j in 1..=2 * k - 2 {
        eqs.push(var(&format!("v{j}")));
    }
    eqs.push(var("wr"));
    eqs.push(var("wi"));
    AlgebraicSet::new(format!("y_k{k}"), &reg, eqs)
}

/// Realized images of the `w_1`, `w_2` and `ζ_1` slots of `F^σ`.
struct FoldedSlots {
    w1: SparsePoly,
    w2: SparsePoly,
    zeta1: SparsePoly,
}

fn folded_slots(f_sigma: &HoloPolyMap) -> Result<FoldedSlots, ConstructionError> {
    let src = f_sigma.source();
    let realized = f_sigma.realize()?;
    let at = |n: &str| realized[src.coord_index(n).expect("coordinate")].clone();
    Ok(FoldedSlots {
        w1: at("w1"),
        w2: at("w2"),
        zeta1: at("zeta1"),
    })
}

fn im_w_equations(src: &ComplexCoordSpace, k: usize) -> Vec<SparsePoly> {
    (1..=2 * k - 2)
        .map(|t| source_var(src, &format!("v{t}")))
        .collect()
}

/// `2α Z_1 + ζ_k − 2α|z|² − z̄² − 2α z̄(W_1 + iW_2)` where `W_1, W_2, Z_1`
/// are the folded slots of `F^σ`. It vanishes exactly where the last
/// component of `f_α^σ` lies on `S_α` (given real `W`).
fn m_complex_equation(
    alpha: &Rational,
    k: usize,
    slots: &FoldedSlots,
    src: &ComplexCoordSpace,
) -> SparsePoly {
    let z = complex_coord(src, "z");
    let zb = z.conj();
    let two_a = alpha * int(2);
    let wsum = &slots.w1 + &slots.w2.scale(&imag_unit());
    slots.zeta1.scale_rat(&two_a) + complex_coord(src, &format!("zeta{k}"))
        - (&z * &zb).scale_rat(&two_a)
        - zb.pow(2)
        - (&zb * &wsum).scale_rat(&two_a)
}

/// `M_α^σ` as an algebraic set, built from the images of `F^σ`.
pub fn m_alpha_sigma_equations(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<AlgebraicSet, ConstructionError> {
    let fs = build_f_sigma(sigma, k, conv)?;
    let src = fs.source().clone();
    let slots = folded_slots(&fs)?;
    let eq = m_complex_equation(alpha, k, &slots, &src);
    AlgebraicSet::from_complex(
        format!("m_alpha_sigma{sigma}_k{k}_{}", conv.name()),
        src.real_registry(),
        &[eq],
        im_w_equations(&src, k),
    )
}

/// `M_α^σ` exactly as printed:
/// `α[ζ_1 + ζ_σ − z̄(2z + w_1 + w_{2σ−1} + i(w_2 + w_{2σ}))] + ζ_k − z̄² = 0`,
/// `Im w_j = 0`.
pub fn m_alpha_sigma_as_printed(
    alpha: &Rational,
    sigma: usize,
    k: usize,
) -> Result<AlgebraicSet, ConstructionError> {
    check_k(k)?;
    let src = ComplexCoordSpace::source(k)?;
    let c = |n: String| complex_coord(&src, &n);
    let z = c("z".into());
    let zb = z.conj();
    let inner = z.scale_rat(&int(2))
        + c("w1".into())
        + c(format!("w{}", 2 * sigma - 1))
        + (c("w2".into()) + c(format!("w{}", 2 * sigma))).scale(&imag_unit());
    let eq = (c("zeta1".into()) + c(format!("zeta{sigma}")) - &zb * &inner).scale_rat(alpha)
        + c(format!("zeta{k}"))
        - zb.pow(2);
    AlgebraicSet::from_complex(
        format!("m_alpha_sigma{sigma}_k{k}_printed"),
        src.real_registry(),
        &[eq],
        im_w_equations(&src, k),
    )
}

/// Parameter registry `x, y, u_1, …, u_{2k−2}, ξ_1, η_1, …, ξ_{k−1}, η_{k−1}`.
fn m_params(k: usize) -> Result<Arc<VarRegistry>, ConstructionError> {
    let mut b = VarRegistry::builder().complex("z", "x", "y");
    for t in 1..=2 * k - 2 {
        b = b.real(&format!("u{t}"));
    }
    for s in 1..k {
        b = b.complex(&format!("zeta{s}"), &format!("xi{s}"), &format!("eta{s}"));
    }
    Ok(b.build()?)
}

/// Chart of `M_α^σ`: `z`, real `w`, free `ζ_1..ζ_{k−1}`, solved `ζ_k`.
pub fn build_m_alpha_sigma(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<(ManifoldChart, AlgebraicSet), ConstructionError> {
    let set = m_alpha_sigma_equations(alpha, sigma, k, conv)?;
    let fs = build_f_sigma(sigma, k, conv)?;
    let src = fs.source().clone();
    let params = m_params(k)?;
    let var = |n: &str| SparsePoly::var_named(&params, n).expect("parameter");
    let i = imag_unit();
    let mut comps = vec![var("x") + var("y").scale(&i)];
    for t in 1..=2 * k - 2 {
        comps.push(var(&format!("u{t}")));
    }
    for s in 1..k {
        comps.push(var(&format!("xi{s}")) + var(&format!("eta{s}")).scale(&i));
    }
    comps.push(SparsePoly::zero(&params));
    let partial = ManifoldChart::new("partial", params.clone(), src.clone(), comps.clone())?;
    let slots = folded_slots(&fs)?;
    let rest = m_complex_equation(alpha, k, &slots, &src);
    // the equation is ζ_k + rest(ζ_k = 0)
    let rest_re = partial.pull(&rest.re_part())?;
    let rest_im = partial.pull(&rest.im_part())?;
    let zetak = -(rest_re + rest_im.scale(&i));
    *comps.last_mut().expect("components") = zetak;
    let chart = ManifoldChart::new(
        format!("m_alpha_sigma{sigma}_k{k}_{}", conv.name()),
        params,
        src,
        comps,
    )?;
    Ok((chart, set))
}

/// `X_α^σ` built from the images of `F^σ`:
/// `z + a W_1 − i b W_2 = 0`, `2α Z_1 + ζ_k + z̄² = 0`, `Im w_j = 0`.
pub fn x_alpha_sigma_equations(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<AlgebraicSet, ConstructionError> {
    let fs = build_f_sigma(sigma, k, conv)?;
    let src = fs.source().clone();
    let slots = folded_slots(&fs)?;
    let (a, b) = shift_weights(alpha);
    let z = complex_coord(&src, "z");
    let first = &z + &slots.w1.scale_rat(&a) - slots.w2.scale(&gauss(Rational::zero(), b));
    let second = slots.zeta1.scale_rat(&(alpha * int(2)))
        + complex_coord(&src, &format!("zeta{k}"))
        + z.conj().pow(2);
    AlgebraicSet::from_complex(
        format!("x_alpha_sigma{sigma}_k{k}_{}", conv.name()),
        src.real_registry(),
        &[first, second],
        im_w_equations(&src, k),
    )
}

/// `X_α^σ` exactly as printed:
/// `z + α(w_1+w_{2σ−1})/(2α+2) − iα(w_2+w_{2σ})/(2−2α) = 0`,
/// `α(ζ_1+ζ_σ) + ζ_k + z̄² = 0`, `Im w_j = 0`.
pub fn x_alpha_sigma_as_printed(
    alpha: &Rational,
    sigma: usize,
    k: usize,
) -> Result<AlgebraicSet, ConstructionError> {
    check_k(k)?;
    let src = ComplexCoordSpace::source(k)?;
    let c = |n: String| complex_coord(&src, &n);
    let z = c("z".into());
    let first = &z
        + &(c("w1".into()) + c(format!("w{}", 2 * sigma - 1)))
            .scale_rat(&(alpha / (alpha * int(2) + int(2))))
        - (c("w2".into()) + c(format!("w{}", 2 * sigma)))
            .scale(&gauss(Rational::zero(), alpha / (int(2) - alpha * int(2))));
    let second = (c("zeta1".into()) + c(format!("zeta{sigma}"))).scale_rat(alpha)
        + c(format!("zeta{k}"))
        + z.conj().pow(2);
    AlgebraicSet::from_complex(
        format!("x_alpha_sigma{sigma}_k{k}_printed"),
        src.real_registry(),
        &[first, second],
        im_w_equations(&src, k),
    )
}

pub fn build_x_and_y(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<(AlgebraicSet, AlgebraicSet), ConstructionError> {
    Ok((x_alpha_sigma_equations(alpha, sigma, k, conv)?, build_y(k)?))
}

/// A point of `X_α^σ` from real `w` values and free `ζ_1..ζ_{k−1}`.
pub fn x_alpha_sigma_point(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
    w: &[Rational],
    zetas: &[GaussRational],
) -> Result<Vec<Rational>, ConstructionError> {
    if w.len() != 2 * k - 2 || zetas.len() != k - 1 {
        return Err(ConstructionError::Shape("wrong number of parameters".into()));
    }
    let fs = build_f_sigma(sigma, k, conv)?;
    let src = fs.source().clone();
    let mut z: Vec<GaussRational> = vec![real(Rational::zero())];
    z.extend(w.iter().map(|v| real(v.clone())));
    z.extend(zetas.iter().cloned());
    z.push(real(Rational::zero()));
    let img = fs.eval_gauss(&z)?;
    let (a, b) = shift_weights(alpha);
    let w1 = &img[src.coord_index("w1")?];
    let w2 = &img[src.coord_index("w2")?];
    let zeta1 = &img[src.coord_index("zeta1")?];
    let zc = -(w1 * real(a)) + w2 * gauss(Rational::zero(), b);
    let zb = crate::scalar::conj(&zc);
    let zetak = -(zeta1 * real(alpha * int(2))) - &zb * &zb;
    z[0] = zc;
    *z.last_mut().expect("coordinates") = zetak;
    Ok(src.real_point(&z))
}

/// `g = |ζ_k − z̄²|² + Σ_{σ=2}^{k−1} |ζ_σ − z̄(w̄_{2σ−1} + i w̄_{2σ})|²`.
pub fn build_g(k: usize) -> Result<SparsePoly, ConstructionError> {
    check_k(k)?;
    let src = ComplexCoordSpace::source(k)?;
    let c = |n: String| complex_coord(&src, &n);
    let zb = c("z".into()).conj();
    let i = imag_unit();
    let first = c(format!("zeta{k}")) - zb.pow(2);
    let mut g = &first * &first.conj();
    for s in 2..k {
        let wpair = c(format!("w{}", 2 * s - 1)).conj() + c(format!("w{}", 2 * s)).conj().scale(&i);
        let term = c(format!("zeta{s}")) - &zb * &wpair;
        g = g + &term * &term.conj();
    }
    Ok(g)
}

/// Real linear constraints used to show that the `X` sets meet only at `O`.
///
/// For each `σ` the two first equations (for `α` and `β`), the difference
/// of the two second equations (the `z̄²` terms cancel), and `Im w_j = 0`.
pub fn intersection_linear_rows(
    alpha: &Rational,
    beta: &Rational,
    k: usize,
    conv: ShiftConvention,
) -> Result<Vec<SparsePoly>, ConstructionError> {
    let mut rows = Vec::new();
    for sigma in 1..k {
        let xa = x_alpha_sigma_equations(alpha, sigma, k, conv)?;
        let xb = x_alpha_sigma_equations(beta, sigma, k, conv)?;
        let (ea, eb) = (xa.equations(), xb.equations());
        rows.extend_from_slice(&ea[0..2]);
        rows.extend_from_slice(&eb[0..2]);
        rows.push(&ea[2] - &eb[2]);
        rows.push(&ea[3] - &eb[3]);
        rows.extend_from_slice(&ea[4..]);
    }
    Ok(rows)
}

/// The second `X` equations with `z̄²` dropped, valid once `z = 0`.
pub fn intersection_rows_at_z_zero(
    alpha: &Rational,
    k: usize,
    conv: ShiftConvention,
) -> Result<Vec<SparsePoly>, ConstructionError> {
    let mut rows = Vec::new();
    for sigma in 1..k {
        let x = x_alpha_sigma_equations(alpha, sigma, k, conv)?;
        let src = ComplexCoordSpace::source(k)?;
        let zb2 = complex_coord(&src, "z").conj().pow(2);
        rows.push(&x.equations()[2] - &zb2.re_part());
        rows.push(&x.equations()[3] - &zb2.im_part());
    }
    Ok(rows)
}

/// Coefficient rows of linear forms (constant terms must vanish).
pub fn linear_rows_matrix(rows: &[SparsePoly]) -> Result<GaussMatrix, ConstructionError> {
    let n = rows
        .first()
        .map(|r| r.registry().len())
        .ok_or_else(|| ConstructionError::Shape("no rows".into()))?;
    let mut out = Vec::new();
    for r in rows {
        if r.degree().unwrap_or(0) > 1 || !r.constant_term().re.is_zero() {
            return Err(ConstructionError::Shape("row is not a linear form".into()));
        }
        out.push(
            (0..n)
                .map(|v| {
                    let mut e = vec![0u32; n];
                    e[v] = 1;
                    r.coeff_of(&e).re
                })
                .collect(),
        );
    }
    Ok(GaussMatrix::from_real_rows(out))
}

/// `e_v` as a linear-form row over a registry of size `n`.
pub fn unit_row(n: usize, v: usize) -> Vec<Rational> {
    (0..n).map(|j| if j == v { Rational::one() } else { Rational::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gone, rat};

    #[test]
    fn normal_form_points() {
        let nf = build_normal_form(2).unwrap();
        assert_eq!(nf.point(&vec![int(0); 4]).unwrap(), vec![Rational::zero(); 10]);
        let p = nf.point(&[int(1), int(0), int(0), int(0)]).unwrap();
        let z = nf.ambient().complex_point(&p);
        assert_eq!(z, vec![gone(), real(int(0)), real(int(0)), gone(), gone()]);
        let nf3 = build_normal_form(3).unwrap();
        let p = nf3
            .point(&[int(0), int(1), int(1), int(0), int(0), int(0)])
            .unwrap();
        let z = nf3.ambient().complex_point(&p);
        assert_eq!(z[5], gauss(int(1), int(-1)));
        assert_eq!(z[6], real(int(0)));
        assert_eq!(z[7], real(int(-1)));
    }

    #[test]
    fn normal_form_satisfies_its_equations() {
        for k in [2, 3] {
            let nf = build_normal_form(k).unwrap();
            for e in normal_form_equations(k).unwrap().equations() {
                assert!(nf.pull(e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn s_alpha_points() {
        let s = build_s_alpha(2, &rat(1, 4)).unwrap();
        let w_of = |x: Rational, y: Rational| {
            let p = s.point(&[x, y, int(0), int(0)]).unwrap();
            s.ambient().complex_point(&p)[3].clone()
        };
        assert_eq!(w_of(int(0), int(0)), real(int(0)));
        assert_eq!(w_of(int(1), int(1)), real(rat(1, 4)));
        let s0 = build_s_alpha(2, &int(0)).unwrap();
        let p = s0.point(&[int(1), int(0), int(0), int(0)]).unwrap();
        assert_eq!(s0.ambient().complex_point(&p)[3], real(rat(1, 2)));
        for e in s_alpha_equations(2, &rat(1, 4)).unwrap().equations() {
            assert!(s.pull(e).unwrap().is_zero());
        }
    }

    #[test]
    fn y_membership_and_distance() {
        let y = build_y(2).unwrap();
        let mut p = vec![Rational::zero(); 8];
        p[2] = int(1);
        assert!(y.contains(&p).unwrap());
        p[0] = rat(3, 5);
        p[7] = rat(4, 5);
        assert!(!y.contains(&p).unwrap());
        assert_eq!(y.sq_distance(&p).unwrap(), int(1));
    }

    #[test]
    fn printed_sets_match_averaged_construction() {
        for (k, sigma) in [(2, 1), (3, 1), (3, 2)] {
            for alpha in [rat(1, 4), rat(1, 3)] {
                let m = m_alpha_sigma_equations(&alpha, sigma, k, ShiftConvention::Averaged).unwrap();
                let mp = m_alpha_sigma_as_printed(&alpha, sigma, k).unwrap();
                assert_eq!(m.equations(), mp.equations());
                let x = x_alpha_sigma_equations(&alpha, sigma, k, ShiftConvention::Averaged).unwrap();
                let xp = x_alpha_sigma_as_printed(&alpha, sigma, k).unwrap();
                assert_eq!(x.equations(), xp.equations());
            }
        }
    }

    #[test]
    fn m_chart_solves_m() {
        for conv in [ShiftConvention::Summed, ShiftConvention::Averaged] {
            let (chart, set) = build_m_alpha_sigma(&rat(1, 3), 2, 3, conv).unwrap();
            for e in set.equations() {
                assert!(chart.pull(e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn x_point_lies_on_x() {
        let conv = ShiftConvention::Summed;
        let p = x_alpha_sigma_point(
            &rat(1, 4),
            2,
            3,
            conv,
            &[rat(1, 2), int(-1), rat(2, 3), rat(1, 7)],
            &[gauss(rat(1, 3), int(2)), gauss(int(-1), rat(1, 5))],
        )
        .unwrap();
        assert!(x_alpha_sigma_equations(&rat(1, 4), 2, 3, conv)
            .unwrap()
            .contains(&p)
            .unwrap());
    }

    #[test]
    fn g_values() {
        let g = build_g(2).unwrap();
        let mut p = vec![Rational::zero(); 10];
        assert_eq!(g.eval(&p).unwrap(), real(int(0)));
        p[8] = int(1);
        assert_eq!(g.eval(&p).unwrap(), real(int(1)));
        assert!(build_normal_form(2).unwrap().pull(&g).unwrap().is_zero());
    }
}
