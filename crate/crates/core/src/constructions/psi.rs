//! The plurisubharmonic candidate `ψ̃ = g + Σ_{α,σ} ψ_α^σ` and the
//! construction manifest.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::maps::{build_f_alpha_sigma, ShiftConvention};
use super::model::{build_rho_alpha, build_rho_sheared};
use super::sets::build_g;
use super::{check_k, CoefficientSystem, ConstructionError};
use crate::poly::SparsePoly;
use crate::scalar::{fmt_rational, int};
use crate::wirtinger::HoloPolyMap;

/// Substitution of `f` into the sheared coordinates of its target:
/// `x, y, u_j, v_j` are read off the components and
/// `u = Re f_last − ((α+1)/2)(Re f_1)² − ((α−1)/2)(Im f_1)²`.
pub fn sheared_substitution(
    f: &HoloPolyMap,
    alpha: &crate::scalar::Rational,
) -> Result<Vec<SparsePoly>, ConstructionError> {
    Ok(shear_real_components(f.real_substitution()?, alpha))
}

/// Replaces the `Re w` slot of target real components by the sheared `u`.
pub fn shear_real_components(
    mut subst: Vec<SparsePoly>,
    alpha: &crate::scalar::Rational,
) -> Vec<SparsePoly> {
    let n = subst.len();
    let (x, y) = (subst[0].clone(), subst[1].clone());
    let ap1 = (alpha + int(1)) / int(2);
    let am1 = (alpha - int(1)) / int(2);
    subst[n - 2] = &subst[n - 2] - &x.pow(2).scale_rat(&ap1) - y.pow(2).scale_rat(&am1);
    subst
}

/// `ψ_α^σ ∘ chart`, composed through the chart first so the large
/// polynomial `ψ_α^σ` is never formed.
pub fn psi_part_on_chart(
    sys: &CoefficientSystem,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
    chart: &super::ManifoldChart,
) -> Result<SparsePoly, ConstructionError> {
    let f = build_f_alpha_sigma(&sys.alpha, sigma, k, conv)?;
    let pushed = shear_real_components(chart.push(&f)?, &sys.alpha);
    Ok(build_rho_sheared(sys, k)?.compose(&pushed)?)
}

/// `ψ_α^σ = ρ_α ∘ f_α^σ`, composed through the sheared coordinates.
pub fn psi_alpha_sigma(
    sys: &CoefficientSystem,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<SparsePoly, ConstructionError> {
    let f = build_f_alpha_sigma(&sys.alpha, sigma, k, conv)?;
    let rho = build_rho_sheared(sys, k)?;
    Ok(rho.compose(&sheared_substitution(&f, &sys.alpha)?)?)
}

/// `ρ_α ∘ f_α^σ` composed in raw coordinates. Slower; used as a cross-check.
pub fn psi_alpha_sigma_direct(
    sys: &CoefficientSystem,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<SparsePoly, ConstructionError> {
    let f = build_f_alpha_sigma(&sys.alpha, sigma, k, conv)?;
    let rho = build_rho_alpha(sys, k)?;
    Ok(rho.compose(&f.real_substitution()?)?)
}

#[derive(Debug, Clone)]
pub struct PsiPart {
    pub alpha: crate::scalar::Rational,
    pub sigma: usize,
    pub map: HoloPolyMap,
    pub poly: SparsePoly,
}

#[derive(Debug, Clone)]
pub struct PsiTilde {
    pub k: usize,
    pub convention: ShiftConvention,
    pub systems: Vec<CoefficientSystem>,
    pub g: SparsePoly,
    pub parts: Vec<PsiPart>,
    pub total: SparsePoly,
}

/// `ψ̃` for the given coefficient systems (one per `α`).
pub fn build_psi_tilde(
    k: usize,
    systems: &[CoefficientSystem],
    conv: ShiftConvention,
) -> Result<PsiTilde, ConstructionError> {
    check_k(k)?;
    let g = build_g(k)?;
    let mut total = g.clone();
    let mut parts = Vec::new();
    for sys in systems {
        for sigma in 1..k {
            let poly = psi_alpha_sigma(sys, sigma, k, conv)?;
            total = total.checked_add(&poly)?;
            parts.push(PsiPart {
                alpha: sys.alpha.clone(),
                sigma,
                map: build_f_alpha_sigma(&sys.alpha, sigma, k, conv)?,
                poly,
            });
        }
    }
    Ok(PsiTilde {
        k,
        convention: conv,
        systems: systems.to_vec(),
        g,
        parts,
        total,
    })
}

/// The two systems used throughout: `α = 1/4` and `α = 1/3` at half the
/// admissible bound for `c`.
pub fn default_systems() -> Result<Vec<CoefficientSystem>, ConstructionError> {
    [crate::scalar::rat(1, 4), crate::scalar::rat(1, 3)]
        .into_iter()
        .map(CoefficientSystem::half_bound)
        .collect()
}

/// Canonical text of every constructed object, with its SHA-256.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionManifest {
    pub text: String,
    pub sha256: String,
}

impl ConstructionManifest {
    pub fn from_psi(psi: &PsiTilde) -> Result<Self, ConstructionError> {
        let mut t = String::new();
        let _ = writeln!(t, "k = {}", psi.k);
        let _ = writeln!(t, "convention = {}", psi.convention.name());
        for sys in &psi.systems {
            let _ = writeln!(t, "system {}", sys.summary());
            let _ = writeln!(t, "rho[{}] = {}", fmt_rational(&sys.alpha), build_rho_sheared(sys, psi.k)?);
        }
        for part in &psi.parts {
            for (j, c) in part.map.components().iter().enumerate() {
                let _ = writeln!(
                    t,
                    "f[{},{}][{}] = {}",
                    fmt_rational(&part.alpha),
                    part.sigma,
                    j,
                    c.to_canonical_string()
                );
            }
        }
        let _ = writeln!(t, "g = {}", psi.g.to_canonical_string());
        for part in &psi.parts {
            let _ = writeln!(
                t,
                "psi[{},{}] = {}",
                fmt_rational(&part.alpha),
                part.sigma,
                part.poly.to_canonical_string()
            );
        }
        let _ = writeln!(t, "psi_tilde = {}", psi.total.to_canonical_string());
        Ok(Self::from_text(t))
    }

    pub fn from_text(text: String) -> Self {
        let digest = Sha256::digest(text.as_bytes());
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        ConstructionManifest { text, sha256 }
    }
}
