//! The holomorphic maps `f_α : C^{3k−1} → C^{2k}`, the linear automorphisms
//! `F^σ` of `C^{3k−1}` and their composites `f_α^σ = f_α ∘ F^σ`.

use num_traits::{One, Zero};

use super::{check_k, ConstructionError};
use crate::poly::SparsePoly;
use crate::scalar::{imag_unit, int, real, GaussRational, Rational};
use crate::wirtinger::{ComplexCoordSpace, HoloPolyMap};

/// How `F^σ` folds the σ-th block into the first one for `σ ≥ 2`.
///
/// `Averaged` is `(w_1+w_{2σ−1})/2, (w_2+w_{2σ})/2, (ζ_1+ζ_σ)/2`. It does not
/// carry the normal form into `S_α`: the `ζ`-slot picks up `|z|²/2` instead
/// of `|z|²`. `Summed` is `w_1+w_{2σ−1}, w_2+w_{2σ}, ζ_1+ζ_σ`, which does.
/// Both are the identity at `σ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShiftConvention {
    #[default]
    Summed,
    Averaged,
}

impl ShiftConvention {
    pub fn name(self) -> &'static str {
        match self {
            ShiftConvention::Summed => "summed",
            ShiftConvention::Averaged => "averaged",
        }
    }

    pub fn weight(self) -> Rational {
        match self {
            ShiftConvention::Summed => Rational::one(),
            ShiftConvention::Averaged => Rational::new(1.into(), 2.into()),
        }
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), ConstructionError> {
    if *alpha == int(1) || *alpha == int(-1) {
        return Err(ConstructionError::AlphaPole {
            alpha: alpha.clone(),
        });
    }
    Ok(())
}

/// `a = α/(α+1)` and `b = α/(1−α)`, the `w_1`, `w_2` weights of `f_α`.
pub fn shift_weights(alpha: &Rational) -> (Rational, Rational) {
    (alpha / (alpha + int(1)), alpha / (int(1) - alpha))
}

/// `f_α(Z) = (z + αw_1/(α+1) − iαw_2/(1−α), w_1, …, w_{2k−2},
/// (α/2)ζ_1 + ζ_k/4 + z²/4 + (α/2)z(w_1 − iw_2) + α²w_1²/(2α+2) − α²w_2²/(2−2α))`.
pub fn build_f_alpha(alpha: &Rational, k: usize) -> Result<HoloPolyMap, ConstructionError> {
    check_k(k)?;
    check_alpha(alpha)?;
    let src = ComplexCoordSpace::source(k)?;
    let tgt = ComplexCoordSpace::target(k)?;
    let v = |n: &str| src.holo_var_named(n).expect("source symbol");
    let (z, w1, w2) = (v("z"), v("w1"), v("w2"));
    let (zeta1, zetak) = (v("zeta1"), v(&format!("zeta{k}")));
    let i = imag_unit();
    let (a, b) = shift_weights(alpha);
    let first = &z + &w1.scale_rat(&a) - w2.scale(&(real(b) * &i));

    let half_alpha = alpha / int(2);
    let alpha_sq = alpha * alpha;
    let last = zeta1.scale_rat(&half_alpha)
        + zetak.scale_rat(&Rational::new(1.into(), 4.into()))
        + z.pow(2).scale_rat(&Rational::new(1.into(), 4.into()))
        + (&z * &(&w1 - &w2.scale(&i))).scale_rat(&half_alpha)
        + w1.pow(2).scale_rat(&(&alpha_sq / (alpha * int(2) + int(2))))
        - w2.pow(2).scale_rat(&(&alpha_sq / (int(2) - alpha * int(2))));

    let mut comps = vec![first];
    for j in 1..=2 * k - 2 {
        comps.push(v(&format!("w{j}")));
    }
    comps.push(last);
    Ok(HoloPolyMap::new(src, tgt, comps)?)
}

/// `F^σ` on `C^{3k−1}`.
pub fn build_f_sigma(
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<HoloPolyMap, ConstructionError> {
    check_k(k)?;
    if sigma < 1 || sigma > k - 1 {
        return Err(ConstructionError::SigmaOutOfRange { sigma, k });
    }
    let src = ComplexCoordSpace::source(k)?;
    if sigma == 1 {
        return Ok(HoloPolyMap::identity(&src));
    }
    let v = |n: &str| src.holo_var_named(n).expect("source symbol");
    let wt = conv.weight();
    let fold = |a: &str, b: String| (v(a) + v(&b)).scale_rat(&wt);
    let mut comps: Vec<SparsePoly> = (0..src.dim()).map(|j| src.holo_var(j)).collect();
    let idx = |n: &str| src.coord_index(n).expect("source symbol");
    comps[idx("w1")] = fold("w1", format!("w{}", 2 * sigma - 1));
    comps[idx("w2")] = fold("w2", format!("w{}", 2 * sigma));
    comps[idx("zeta1")] = fold("zeta1", format!("zeta{sigma}"));
    Ok(HoloPolyMap::new(src.clone(), src, comps)?)
}

pub fn build_f_alpha_sigma(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<HoloPolyMap, ConstructionError> {
    let f = build_f_alpha(alpha, k)?;
    let fs = build_f_sigma(sigma, k, conv)?;
    Ok(f.compose(&fs)?)
}

/// Kernel of `J_C(f_α^σ)` as it follows from the construction: for each
/// `j < k` the vector `e_{ζ_j} − 2α·w·(δ_{j,1} + δ_{j,σ})·e_{ζ_k}` with
/// `w` the convention weight (both deltas coincide at `σ = 1`).
pub fn kernel_basis(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
) -> Result<Vec<Vec<GaussRational>>, ConstructionError> {
    check_k(k)?;
    let n = 3 * k - 1;
    Ok((1..k)
        .map(|j| {
            let mut v = vec![real(Rational::zero()); n];
            v[2 * k - 1 + (j - 1)] = real(Rational::one());
            let coeff = if sigma == 1 {
                -(alpha * int(2)) * int((j == 1) as i64)
            } else {
                let hits = (j == 1) as i64 + (j == sigma) as i64;
                -(alpha * int(2)) * conv.weight() * int(hits)
            };
            v[n - 1] = real(coeff);
            v
        })
        .collect())
}

/// The kernel as printed: `(0, …, 0, ζ_1, …, ζ_{k−1}, −α(ζ_1 + ζ_σ))`.
pub fn kernel_basis_as_printed(
    alpha: &Rational,
    sigma: usize,
    k: usize,
) -> Result<Vec<Vec<GaussRational>>, ConstructionError> {
    check_k(k)?;
    let n = 3 * k - 1;
    Ok((1..k)
        .map(|j| {
            let mut v = vec![real(Rational::zero()); n];
            v[2 * k - 1 + (j - 1)] = real(Rational::one());
            let hits = (j == 1) as i64 + (j == sigma) as i64;
            v[n - 1] = real(-alpha * int(hits));
            v
        })
        .collect())
}
