//! Normal forms, model surfaces, the maps `f_α^σ` and the candidate `ψ̃`.

mod coefficients;
mod maps;
mod model;
mod psi;
mod sets;

use thiserror::Error;

use crate::poly::PolyError;
use crate::scalar::{fmt_rational, Rational};
use crate::wirtinger::CalculusError;

pub use coefficients::{
    alpha_threshold, binding_numerator, c_bound_terms, c_upper_bound, CoefficientSystem,
    Constraint,
};
pub use maps::{
    build_f_alpha, build_f_alpha_sigma, build_f_sigma, kernel_basis, kernel_basis_as_printed,
    shift_weights, ShiftConvention,
};
pub use model::{
    build_eta, build_p_alpha, build_q_alpha, build_rho_alpha, build_rho_sheared,
    four_d_zzbar_sheared, p_alpha_zzbar_expansion, ExpansionForm,
};
pub use psi::{
    build_psi_tilde, default_systems, psi_alpha_sigma, psi_alpha_sigma_direct,
    psi_part_on_chart, shear_real_components, sheared_substitution, ConstructionManifest, PsiPart, PsiTilde,
};
pub use sets::{
    build_g, build_m_alpha_sigma, build_normal_form, build_s_alpha, build_x_and_y, build_y,
    intersection_linear_rows, intersection_rows_at_z_zero, linear_rows_matrix,
    m_alpha_sigma_as_printed, m_alpha_sigma_equations, normal_form_equations,
    s_alpha_equations, unit_row, x_alpha_sigma_as_printed, x_alpha_sigma_equations,
    x_alpha_sigma_point, AlgebraicSet, ManifoldChart,
};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("k = {0} is not supported (2 <= k <= 3)")]
    InvalidK(usize),
    #[error("alpha = {} is a pole of bound expression {expr}", fmt_rational(.alpha))]
    Pole { alpha: Rational, expr: u8 },
    #[error("alpha = {} is not below the feasibility threshold", fmt_rational(.alpha))]
    AlphaThreshold { alpha: Rational },
    #[error("c = {} is outside (0, {})", fmt_rational(.c), fmt_rational(.bound))]
    CoefficientRange { c: Rational, bound: Rational },
    #[error("condition {constraint} fails with value {}", fmt_rational(.value))]
    Invariant {
        constraint: Constraint,
        value: Rational,
    },
    #[error("sigma = {sigma} is outside 1..={}", .k - 1)]
    SigmaOutOfRange { sigma: usize, k: usize },
    #[error("alpha = {} makes the map singular", fmt_rational(.alpha))]
    AlphaPole { alpha: Rational },
    #[error("{0}")]
    Shape(String),
}

/// Dimensions supported by the 16-variable registries.
pub fn check_k(k: usize) -> Result<(), ConstructionError> {
    if (2..=3).contains(&k) {
        Ok(())
    } else {
        Err(ConstructionError::InvalidK(k))
    }
}
