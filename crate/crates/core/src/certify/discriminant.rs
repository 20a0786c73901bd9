use std::time::Instant;

use num_traits::{One, Signed, Zero};

use super::{CertReport, ReportParams, Verdict, Witness};
use crate::constructions::{CoefficientSystem, ConstructionError};
use crate::par;
use crate::poly::{same_registry, SparsePoly};
use crate::registry::VarRegistry;
use crate::sampling::SampleSpec;
use crate::scalar::{fmt_rational, int, Rational};

/// `b_1 = p x² + q y²`, `b_0 = a x⁴ + b x²y² + a′ y⁴`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayForm {
    pub p: Rational,
    pub q: Rational,
    pub a: Rational,
    pub b: Rational,
    pub a_prime: Rational,
}

impl RayForm {
    /// The pair read off `P_α = u²(u² + b_1 u + b_0)`.
    pub fn from_system(sys: &CoefficientSystem) -> Self {
        RayForm {
            p: &sys.alpha * int(4) + &sys.c,
            q: -sys.c.clone(),
            a: sys.a.clone(),
            b: sys.b.clone(),
            a_prime: sys.a_prime.clone(),
        }
    }

    /// Recognizes the form when `b_1`, `b_0` only use these monomials in
    /// the variables at `ix`, `iy`.
    pub fn from_polys(b1: &SparsePoly, b0: &SparsePoly, ix: usize, iy: usize) -> Option<Self> {
        let n = b1.registry().len();
        let exps = |ex: u32, ey: u32| {
            let mut e = vec![0u32; n];
            e[ix] = ex;
            e[iy] = ey;
            e
        };
        let allowed1 = [exps(2, 0), exps(0, 2)];
        let allowed0 = [exps(4, 0), exps(2, 2), exps(0, 4)];
        let fits = |f: &SparsePoly, allowed: &[Vec<u32>]| {
            f.terms().all(|(m, c)| {
                c.im.is_zero() && allowed.iter().any(|e| m.exponents(n) == *e)
            })
        };
        if !fits(b1, &allowed1) || !fits(b0, &allowed0) {
            return None;
        }
        let re = |f: &SparsePoly, e: &[u32]| f.coeff_of(e).re;
        Some(RayForm {
            p: re(b1, &allowed1[0]),
            q: re(b1, &allowed1[1]),
            a: re(b0, &allowed0[0]),
            b: re(b0, &allowed0[1]),
            a_prime: re(b0, &allowed0[2]),
        })
    }

    /// Coefficients `[c_0, c_1, c_2]` of
    /// `m(s) = 4(a s² + b s t + a′ t²) − (p s + q t)²` with `t = 1 − s`.
    /// On the ray through `(x, y)`, `b_1² − 4b_0 = −(x²+y²)² m(s)` with
    /// `s = x²/(x²+y²)`.
    pub fn margin_quadratic(&self) -> [Rational; 3] {
        let pq = &self.p - &self.q;
        let c2 = int(4) * (&self.a - &self.b + &self.a_prime) - &pq * &pq;
        let c1 = int(4) * (&self.b - int(2) * &self.a_prime) - int(2) * &self.q * &pq;
        let c0 = int(4) * &self.a_prime - &self.q * &self.q;
        [c0, c1, c2]
    }

    pub fn margin(&self, s: &Rational) -> Rational {
        let [c0, c1, c2] = self.margin_quadratic();
        c0 + c1 * s + c2 * s * s
    }
}

/// Minimum of the margin on `[0, 1]` and where it is attained: the
/// endpoints and, for a convex quadratic, the vertex when it lies inside.
pub fn ray_reduction(form: &RayForm) -> (Rational, Rational) {
    let [_, c1, c2] = form.margin_quadratic();
    let mut cands = vec![Rational::zero(), Rational::one()];
    if c2.is_positive() {
        let v = -c1 / (int(2) * &c2);
        if v.is_positive() && v < Rational::one() {
            cands.push(v);
        }
    }
    cands
        .into_iter()
        .map(|s| (form.margin(&s), s))
        .min()
        .map(|(m, s)| (s, m))
        .expect("candidates")
}

/// A rational `(x, y)` whose ray parameter is close to `s` and where the
/// margin is not positive, if one is found on a modest grid.
fn witness_xy(form: &RayForm, s: &Rational) -> Option<(Rational, Rational)> {
    if s.is_zero() {
        return Some((int(0), int(1)));
    }
    if *s == Rational::one() {
        return Some((int(1), int(0)));
    }
    for n in [16i64, 64, 256, 1024, 4096] {
        for j in 1..4 * n {
            let x = Rational::new(j.into(), n.into());
            let x2 = &x * &x;
            let sj = &x2 / (&x2 + int(1));
            if !form.margin(&sj).is_positive() {
                return Some((x, int(1)));
            }
        }
    }
    None
}

/// The two polynomials `b_1`, `b_0` of `P_α` over a registry `(x, y)`.
pub fn discriminant_pair(sys: &CoefficientSystem) -> (SparsePoly, SparsePoly) {
    let reg = VarRegistry::reals(&["x", "y"]).expect("registry");
    let x2 = SparsePoly::var(&reg, 0).pow(2);
    let y2 = SparsePoly::var(&reg, 1).pow(2);
    let b1 = x2.scale_rat(&(&sys.alpha * int(4) + &sys.c)) - y2.scale_rat(&sys.c);
    let b0 = x2.pow(2).scale_rat(&sys.a)
        + (&x2 * &y2).scale_rat(&sys.b)
        + y2.pow(2).scale_rat(&sys.a_prime);
    (b1, b0)
}

/// `b_1² < 4b_0` off the origin: sampled on the punctured region of `spec`
/// (a ball in the `(x, y)` plane) and, when the pair has the homogeneous
/// shape of `P_α`, proved by the exact ray reduction.
pub fn discriminant_check(
    claim: &str,
    b1: &SparsePoly,
    b0: &SparsePoly,
    spec: &SampleSpec,
    params: ReportParams,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    if !same_registry(b1.registry(), b0.registry()) {
        return Err(crate::poly::PolyError::RegistryMismatch.into());
    }
    let reg = b1.registry().clone();
    let ix = reg.try_index_of("x")?;
    let iy = reg.try_index_of("y")?;
    for f in [b1, b0] {
        if !f.constant_term().re.is_zero() || !f.constant_term().im.is_zero() {
            return Err(ConstructionError::Shape(
                "b1 and b0 must vanish at the origin".into(),
            ));
        }
        for v in 0..reg.len() {
            if v != ix && v != iy && f.degree_in(v) > 0 {
                return Err(ConstructionError::Shape(format!(
                    "b1 and b0 may only depend on x and y, found {}",
                    reg.name(v)
                )));
            }
        }
    }
    if spec.dim() != 2 {
        return Err(ConstructionError::Shape("sample region must be planar".into()));
    }
    let disc = b1 * b1 - b0.scale_rat(&int(4));
    let mut r = CertReport::new(claim, params);
    r.params.radius = Some(spec.radius.clone());
    r.params.seed = spec.scheme.seed();
    r.params.scheme = Some(spec.scheme.name());
    let samples = spec.generate();
    let embed = |p: &[Rational]| {
        let mut full = vec![Rational::zero(); reg.len()];
        full[ix] = p[0].clone();
        full[iy] = p[1].clone();
        full
    };
    let values = par::map_indexed(&samples, |_, s| {
        if s.point.iter().all(|v| v.is_zero()) {
            return None;
        }
        Some(disc.eval(&embed(&s.point)).map(|v| v.re))
    });
    let mut sampled_ok = true;
    for (s, v) in samples.iter().zip(values) {
        let Some(v) = v else { continue };
        r.samples += 1;
        match v {
            Ok(v) if v.is_negative() => {}
            Ok(v) => {
                sampled_ok = false;
                if r.witnesses.len() < 3 {
                    r.fail(Witness::new("b1^2 - 4 b0 >= 0", embed(&s.point), fmt_rational(&v)));
                }
            }
            Err(e) => {
                sampled_ok = false;
                r.fail(Witness::new("evaluation error", embed(&s.point), e.to_string()));
            }
        }
    }
    r.note(format!("punctured samples = {}", r.samples));
    match RayForm::from_polys(b1, b0, ix, iy) {
        Some(form) => {
            let (s, m) = ray_reduction(&form);
            let [c0, c1, c2] = form.margin_quadratic();
            r.note(format!(
                "ray margin 4b0 - b1^2 on s+t=1: {} + {} s + {} s^2",
                fmt_rational(&c0),
                fmt_rational(&c1),
                fmt_rational(&c2)
            ));
            r.note(format!("minimum {} at s = {}", fmt_rational(&m), fmt_rational(&s)));
            r.min_minor = Some(m.clone());
            if m.is_positive() {
                if sampled_ok {
                    r.verdict = Verdict::ProvedExact;
                }
            } else {
                let (x, y) = witness_xy(&form, &s).unwrap_or((int(0), int(0)));
                let mut p = vec![Rational::zero(); reg.len()];
                p[ix] = x;
                p[iy] = y;
                let v = disc.eval(&p)?.re;
                r.fail(Witness::new(
                    format!("ray s = {}", fmt_rational(&s)),
                    p,
                    fmt_rational(&v),
                ));
            }
        }
        None => {
            r.note("not of the homogeneous (x^2, y^2) shape; sampled only");
            if sampled_ok {
                r.verdict = Verdict::VerifiedOnSamples;
            }
        }
    }
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Scheme;
    use crate::scalar::rat;

    fn spec() -> SampleSpec {
        SampleSpec::ball(2, rat(1, 10), 200, Scheme::Halton).unwrap()
    }

    #[test]
    fn quarter_system_is_proved() {
        let sys = CoefficientSystem::solve(rat(1, 4), rat(9, 32)).unwrap();
        let (b1, b0) = discriminant_pair(&sys);
        let r = discriminant_check("d", &b1, &b0, &spec(), ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
    }

    #[test]
    fn pure_quartic() {
        let reg = VarRegistry::reals(&["x", "y"]).unwrap();
        let b1 = SparsePoly::zero(&reg);
        let b0 = SparsePoly::parse(&reg, "x^4 + y^4").unwrap();
        let r = discriminant_check("d", &b1, &b0, &spec(), ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact);
    }

    #[test]
    fn infeasible_c_fails_with_witness() {
        let c = int(2);
        let sys = CoefficientSystem::from_parts(
            int(0),
            c.clone(),
            CoefficientSystem::formula_a(&int(0), &c),
            CoefficientSystem::formula_a_prime(&int(0), &c),
            CoefficientSystem::formula_b(&int(0), &c),
        );
        let (b1, b0) = discriminant_pair(&sys);
        let r = discriminant_check("d", &b1, &b0, &spec(), ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Failed);
        let w = r.witnesses.iter().find(|w| w.label.starts_with("ray")).unwrap();
        let v = (&b1 * &b1 - b0.scale_rat(&int(4))).eval(&w.point).unwrap().re;
        assert!(!v.is_negative());
    }

    #[test]
    fn origin_must_vanish() {
        let reg = VarRegistry::reals(&["x", "y"]).unwrap();
        let b1 = SparsePoly::parse(&reg, "1 + x").unwrap();
        let b0 = SparsePoly::parse(&reg, "x^4").unwrap();
        assert!(discriminant_check("d", &b1, &b0, &spec(), ReportParams::default()).is_err());
    }
}
