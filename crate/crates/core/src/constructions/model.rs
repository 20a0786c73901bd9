//! `P_α`, `Q_α`, `η` and `ρ_α = Q_α + η`.
//!
//! `P_α`, `Q_α` and `η` are built over the sheared registry; `ρ_α` is
//! returned over the raw real coordinates of `C^{2k}`.

use std::sync::Arc;

use super::{check_k, CoefficientSystem, ConstructionError};
use crate::poly::SparsePoly;
use crate::registry::VarRegistry;
use crate::scalar::{int, rat, Rational};
use crate::sheared::{sheared_registry, ShearedCoords};

struct Sheared {
    x: SparsePoly,
    y: SparsePoly,
    u: SparsePoly,
    /// `v_1, …, v_{2k−2}, v`
    vs: Vec<SparsePoly>,
    one: SparsePoly,
}

fn sheared_vars(reg: &Arc<VarRegistry>, k: usize) -> Sheared {
    let var = |n: &str| SparsePoly::var_named(reg, n).expect("sheared variable");
    let mut vs: Vec<SparsePoly> = (1..=2 * k - 2).map(|j| var(&format!("v{j}"))).collect();
    vs.push(var("v"));
    Sheared {
        x: var("x"),
        y: var("y"),
        u: var("u"),
        vs,
        one: SparsePoly::one(reg),
    }
}

/// `P_α = u⁴ + ((4α+c)x² − cy²)u³ + (Ax⁴ + Bx²y² + A′y⁴)u²`.
pub fn build_p_alpha(sys: &CoefficientSystem, k: usize) -> Result<SparsePoly, ConstructionError> {
    check_k(k)?;
    let reg = sheared_registry(k)?;
    let s = sheared_vars(&reg, k);
    let (x2, y2) = (s.x.pow(2), s.y.pow(2));
    let cubic = x2.scale_rat(&(&sys.alpha * int(4) + &sys.c)) - y2.scale_rat(&sys.c);
    let quartic = x2.pow(2).scale_rat(&sys.a)
        + (&x2 * &y2).scale_rat(&sys.b)
        + y2.pow(2).scale_rat(&sys.a_prime);
    Ok(s.u.pow(4) + cubic * s.u.pow(3) + quartic * s.u.pow(2))
}

fn half_v_squares(s: &Sheared) -> SparsePoly {
    let mut acc = SparsePoly::zero(s.one.registry());
    for v in &s.vs {
        acc = acc + v.pow(2);
    }
    acc
}

/// `Q_α = P_α + (x²+y²)u⁴ + ½(Σ v_j² + v²)`.
pub fn build_q_alpha(sys: &CoefficientSystem, k: usize) -> Result<SparsePoly, ConstructionError> {
    let p = build_p_alpha(sys, k)?;
    let reg = p.registry().clone();
    let s = sheared_vars(&reg, k);
    let modulus = s.x.pow(2) + s.y.pow(2);
    Ok(p + modulus * s.u.pow(4) + half_v_squares(&s).scale_rat(&rat(1, 2)))
}

/// `η = (½ + x² + y²)(Σ v_j² + v²)`.
pub fn build_eta(k: usize) -> Result<SparsePoly, ConstructionError> {
    check_k(k)?;
    let reg = sheared_registry(k)?;
    let s = sheared_vars(&reg, k);
    let weight = s.one.scale_rat(&rat(1, 2)) + s.x.pow(2) + s.y.pow(2);
    Ok(weight * half_v_squares(&s))
}

/// `Q_α + η` in sheared coordinates.
pub fn build_rho_sheared(
    sys: &CoefficientSystem,
    k: usize,
) -> Result<SparsePoly, ConstructionError> {
    Ok(build_q_alpha(sys, k)? + build_eta(k)?)
}

/// `ρ_α = Q_α + η` over the raw real coordinates of `C^{2k}`.
pub fn build_rho_alpha(sys: &CoefficientSystem, k: usize) -> Result<SparsePoly, ConstructionError> {
    let sc = ShearedCoords::new(k, sys.alpha.clone())?;
    Ok(sc.to_raw(&build_rho_sheared(sys, k)?)?)
}

/// Which transcription of the expanded `4∂²P_α/∂z∂z̄` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionForm {
    /// As usually printed: the last line lacks its factor 2.
    AsPrinted,
    /// The general expansion, valid for any `A, A′, B`.
    General,
    /// The general expansion with the `u`-linear brackets dropped, which is
    /// what equalities (1)–(3) make them.
    Reduced,
}

/// The expanded form of `4∂²P_α/∂z∂z̄` in sheared coordinates.
pub fn p_alpha_zzbar_expansion(
    sys: &CoefficientSystem,
    k: usize,
    form: ExpansionForm,
) -> Result<SparsePoly, ConstructionError> {
    check_k(k)?;
    let reg = sheared_registry(k)?;
    let s = sheared_vars(&reg, k);
    let (al, c, a, ap, b) = (&sys.alpha, &sys.c, &sys.a, &sys.a_prime, &sys.b);
    let ap1_sq = (al + int(1)) * (al + int(1));
    let am1_sq = (al - int(1)) * (al - int(1));
    let four_a_c = al * int(4) + c;
    let (x2, y2) = (s.x.pow(2), s.y.pow(2));

    let cx2 = int(6) * &ap1_sq - int(3) * &four_a_c * (al * int(3) + int(2)) + int(6) * a + b;
    let cy2 = int(6) * &am1_sq + (al * int(9) - int(6)) * c + b + int(6) * ap;
    let line1 = (x2.scale_rat(&cx2) + y2.scale_rat(&cy2)) * s.u.pow(2).scale_rat(&int(2));

    let cx4 = int(6) * &ap1_sq * &four_a_c - int(4) * a * (al * int(5) + int(4));
    let cy4 = int(4) * ap * (int(4) - al * int(5)) - int(6) * &am1_sq * c;
    let line2 = (x2.pow(2).scale_rat(&cx4) + y2.pow(2).scale_rat(&cy4)) * &s.u;
    let cxy = int(24) * al * (&am1_sq - c) - int(20) * al * b;
    let line3 = (&x2 * &y2).scale_rat(&cxy) * &s.u;

    let weight = x2.scale_rat(&ap1_sq) + y2.scale_rat(&am1_sq);
    let quartic = x2.pow(2).scale_rat(a) + (&x2 * &y2).scale_rat(b) + y2.pow(2).scale_rat(ap);
    let line4 = weight * quartic;

    Ok(match form {
        ExpansionForm::AsPrinted => line1 + line2 + line3 + line4,
        ExpansionForm::General => line1 + line2 + line3 + line4.scale_rat(&int(2)),
        ExpansionForm::Reduced => line1 + line4.scale_rat(&int(2)),
    })
}

/// `4∂²f/∂z∂z̄` for `f` in sheared coordinates, through the raw coordinates.
pub fn four_d_zzbar_sheared(
    f: &SparsePoly,
    alpha: &Rational,
    k: usize,
) -> Result<SparsePoly, ConstructionError> {
    let sc = ShearedCoords::new(k, alpha.clone())?;
    Ok(sc.four_d_zzbar(f)?)
}
