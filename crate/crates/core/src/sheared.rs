//! Sheared real coordinates on `C^{2k}` in which `S_α` becomes a coordinate
//! subspace:
//!
//! `u = Re w − (α/2)|z|² − ¼(z² + z̄²)`, `v = Im w`, all other coordinates
//! unchanged. Since `¼(z² + z̄²) = ½(x² − y²)`, this is
//! `u = Re w − ((α+1)/2)x² − ((α−1)/2)y²`.

use std::sync::Arc;

use num_traits::One;

use crate::poly::{PolyError, SparsePoly};
use crate::registry::VarRegistry;
use crate::scalar::{imag_unit, int, real, Rational};
use crate::wirtinger::{d_z_pair, d_zbar_pair, CalculusError, ComplexCoordSpace};

/// Registry `x, y, u_1, v_1, …, u_{2k−2}, v_{2k−2}, u, v`.
pub fn sheared_registry(k: usize) -> Result<Arc<VarRegistry>, PolyError> {
    let mut b = VarRegistry::builder().complex("z", "x", "y");
    for j in 1..=2 * k.max(1) - 2 {
        b = b.complex(&format!("w{j}"), &format!("u{j}"), &format!("v{j}"));
    }
    b.real("u").real("v").build()
}

/// Both coordinate systems on `C^{2k}` for one value of `α`.
#[derive(Debug, Clone)]
pub struct ShearedCoords {
    alpha: Rational,
    raw: ComplexCoordSpace,
    sheared: Arc<VarRegistry>,
}

impl ShearedCoords {
    pub fn new(k: usize, alpha: Rational) -> Result<Self, CalculusError> {
        Ok(ShearedCoords {
            alpha,
            raw: ComplexCoordSpace::target(k)?,
            sheared: sheared_registry(k)?,
        })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn raw(&self) -> &ComplexCoordSpace {
        &self.raw
    }

    pub fn sheared_registry(&self) -> &Arc<VarRegistry> {
        &self.sheared
    }

    fn x2_coeff(&self) -> Rational {
        (&self.alpha + int(1)) / int(2)
    }

    fn y2_coeff(&self) -> Rational {
        (&self.alpha - int(1)) / int(2)
    }

    /// `u` as a polynomial in raw real coordinates.
    pub fn u_in_raw(&self) -> SparsePoly {
        let reg = self.raw.real_registry();
        let n = reg.len();
        let x = SparsePoly::var(reg, 0);
        let y = SparsePoly::var(reg, 1);
        SparsePoly::var(reg, n - 2) - x.pow(2).scale_rat(&self.x2_coeff())
            - y.pow(2).scale_rat(&self.y2_coeff())
    }

    /// Rewrites a polynomial in sheared coordinates over the raw ones.
    pub fn to_raw(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        let reg = self.raw.real_registry();
        let n = reg.len();
        let mut subst: Vec<SparsePoly> = (0..n).map(|i| SparsePoly::var(reg, i)).collect();
        subst[n - 2] = self.u_in_raw();
        f.compose(&subst)
    }

    /// Inverse change: raw polynomial rewritten in sheared coordinates.
    pub fn to_sheared(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        let reg = &self.sheared;
        let n = reg.len();
        let mut subst: Vec<SparsePoly> = (0..n).map(|i| SparsePoly::var(reg, i)).collect();
        let x = SparsePoly::var(reg, 0);
        let y = SparsePoly::var(reg, 1);
        subst[n - 2] = SparsePoly::var(reg, n - 2)
            + x.pow(2).scale_rat(&self.x2_coeff())
            + y.pow(2).scale_rat(&self.y2_coeff());
        f.compose(&subst)
    }

    /// `4∂²/∂z∂z̄` of `f`, computed in raw coordinates and read back in
    /// sheared ones.
    pub fn four_d_zzbar(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.four_mixed(f, "z", "z")
    }

    pub fn four_d_zwbar(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.four_mixed(f, "z", "w")
    }

    pub fn four_d_wwbar(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.four_mixed(f, "w", "w")
    }

    fn four_mixed(&self, f: &SparsePoly, a: &str, b: &str) -> Result<SparsePoly, PolyError> {
        let g = self.to_raw(f)?;
        let reg = self.raw.real_registry();
        let ca = reg.try_coord(a)?;
        let cb = reg.try_coord(b)?;
        let inner = d_zbar_pair(&g, cb.re, cb.im);
        let h = d_z_pair(&inner, ca.re, ca.im).scale_rat(&int(4));
        self.to_sheared(&h)
    }

    fn idx(&self, name: &str) -> usize {
        self.sheared.index_of(name).expect("sheared variable")
    }

    /// Right-hand side of the `4∂_{z,z̄}` formula in sheared coordinates:
    /// `Δ_{x,y} − 2((α+1)x∂_x + (α−1)y∂_y + α)∂_u
    ///  + ((α+1)²x² + (α−1)²y²)∂_{u,u}`.
    pub fn zzbar_operator(&self, f: &SparsePoly) -> SparsePoly {
        self.zzbar_operator_with_tail(f, true)
    }

    /// The same formula with a first-order `∂_u` in the last term, as it is
    /// sometimes transcribed. It is not an identity.
    pub fn zzbar_operator_first_order_tail(&self, f: &SparsePoly) -> SparsePoly {
        self.zzbar_operator_with_tail(f, false)
    }

    fn zzbar_operator_with_tail(&self, f: &SparsePoly, second_order: bool) -> SparsePoly {
        let reg = &self.sheared;
        let (ix, iy, iu) = (self.idx("x"), self.idx("y"), self.idx("u"));
        let a = &self.alpha;
        let ap1 = a + Rational::one();
        let am1 = a - Rational::one();
        let x = SparsePoly::var(reg, ix);
        let y = SparsePoly::var(reg, iy);
        let fu = f.derivative(iu);
        let lap = f.derivative(ix).derivative(ix) + f.derivative(iy).derivative(iy);
        let first = x.scale_rat(&ap1) * fu.derivative(ix)
            + y.scale_rat(&am1) * fu.derivative(iy)
            + fu.scale_rat(a);
        let weight = x.pow(2).scale_rat(&(&ap1 * &ap1)) + y.pow(2).scale_rat(&(&am1 * &am1));
        let tail = if second_order { fu.derivative(iu) } else { fu };
        lap - first.scale_rat(&int(2)) + weight * tail
    }

    /// `∂_{x,u} + ∂_{y,v} + i(∂_{x,v} − ∂_{y,u})
    ///  − ((α+1)x − i(α−1)y)∂_{u,u} − ((α−1)y + i(α+1)x)∂_{u,v}`.
    pub fn zwbar_operator(&self, f: &SparsePoly) -> SparsePoly {
        let reg = &self.sheared;
        let (ix, iy, iu, iv) = (self.idx("x"), self.idx("y"), self.idx("u"), self.idx("v"));
        let i = imag_unit();
        let a = &self.alpha;
        let ap1 = real(a + Rational::one());
        let am1 = real(a - Rational::one());
        let x = SparsePoly::var(reg, ix);
        let y = SparsePoly::var(reg, iy);
        let fu = f.derivative(iu);
        let fv = f.derivative(iv);
        let base = fu.derivative(ix) + fv.derivative(iy)
            + (fv.derivative(ix) - fu.derivative(iy)).scale(&i);
        let c_uu = x.scale(&ap1) - y.scale(&(&am1 * &i));
        let c_uv = y.scale(&am1) + x.scale(&(&ap1 * &i));
        base - c_uu * fu.derivative(iu) - c_uv * fu.derivative(iv)
    }

    /// `Δ_{u,v}`.
    pub fn wwbar_operator(&self, f: &SparsePoly) -> SparsePoly {
        let (iu, iv) = (self.idx("u"), self.idx("v"));
        f.derivative(iu).derivative(iu) + f.derivative(iv).derivative(iv)
    }
}

/// Substitutes the sheared `u` into `f`, producing a polynomial over the raw
/// real coordinates of `C^{2k}` (`k` is read off the registry size).
pub fn coordinate_change_to_sheared(
    f: &SparsePoly,
    alpha: &Rational,
) -> Result<SparsePoly, CalculusError> {
    let n = f.registry().len();
    if n % 4 != 0 || n < 8 {
        return Err(CalculusError::SpaceMismatch(format!(
            "{n} variables is not a sheared registry"
        )));
    }
    let k = n / 4;
    let coords = ShearedCoords::new(k, alpha.clone())?;
    if **f.registry() != **coords.sheared_registry() {
        return Err(PolyError::RegistryMismatch.into());
    }
    Ok(coords.to_raw(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gzero, rat};

    #[test]
    fn u_at_a_raw_point() {
        let sc = ShearedCoords::new(2, rat(1, 4)).unwrap();
        let u = SparsePoly::var_named(sc.sheared_registry(), "u").unwrap();
        let raw = coordinate_change_to_sheared(&u, &rat(1, 4)).unwrap();
        // z = 1, all w = 0
        let mut p = vec![Rational::from_integer(0.into()); 8];
        p[0] = int(1);
        assert_eq!(raw.eval(&p).unwrap(), real(rat(-5, 8)));
    }

    #[test]
    fn v_is_imaginary_part_of_w() {
        let sc = ShearedCoords::new(2, rat(1, 3)).unwrap();
        let v = SparsePoly::var_named(sc.sheared_registry(), "v").unwrap();
        let raw = sc.to_raw(&v).unwrap();
        assert_eq!(raw, SparsePoly::var_named(sc.raw().real_registry(), "wi").unwrap());
    }

    #[test]
    fn mixed_derivative_formulas_on_sample_monomials() {
        for alpha in [rat(1, 4), rat(1, 3)] {
            let sc = ShearedCoords::new(2, alpha).unwrap();
            let reg = sc.sheared_registry();
            for text in ["x^2*u", "u^3", "x*y*u^2", "v*u*x", "y^2*v^2", "u^4*x^2"] {
                let f = SparsePoly::parse(reg, text).unwrap();
                assert_eq!(sc.four_d_zzbar(&f).unwrap(), sc.zzbar_operator(&f), "{text}");
                assert_eq!(sc.four_d_zwbar(&f).unwrap(), sc.zwbar_operator(&f), "{text}");
                assert_eq!(sc.four_d_wwbar(&f).unwrap(), sc.wwbar_operator(&f), "{text}");
            }
            let u2 = SparsePoly::parse(reg, "u^2").unwrap();
            assert_ne!(sc.four_d_zzbar(&u2).unwrap(), sc.zzbar_operator_first_order_tail(&u2));
        }
    }

    #[test]
    fn round_trip() {
        let sc = ShearedCoords::new(2, rat(1, 4)).unwrap();
        let reg = sc.sheared_registry();
        let f = SparsePoly::parse(reg, "u^2*x - 3/7*v*y^3 + u1*u").unwrap();
        assert_eq!(sc.to_sheared(&sc.to_raw(&f).unwrap()).unwrap(), f);
        let _ = gzero();
    }
}
