//! The full list of claims and a runner over a selection of them.

use std::time::Instant;

use num_traits::{Signed, Zero};

use super::structure::s_alpha_axis_points;
use super::{
    certify_psd_on_samples, certify_sign_on_samples, discriminant_check, discriminant_pair,
    hess_q_spectrum_check, inclusion_check, intersection_check, kernel_check,
    kernel_g_strict_check, mixed_derivative_basis_check, p_zzbar_check, threshold_root,
    zero_set_check, CertReport, PsiEvaluator, ReportParams, SignClaim, Verdict, Witness,
};
use crate::constructions::{
    build_f_alpha_sigma, build_g, build_m_alpha_sigma, build_normal_form, build_psi_tilde,
    binding_numerator, build_rho_alpha, build_s_alpha, build_y, default_systems, psi_part_on_chart,
    s_alpha_equations, CoefficientSystem, ConstructionError, ConstructionManifest,
    ShiftConvention,
};
use crate::sampling::{SampleSpec, Scheme, Tube};
use crate::scalar::{fmt_rational, rat, Rational};
use crate::wirtinger::{complex_hessian, ComplexCoordSpace};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub k: usize,
    pub systems: Vec<CoefficientSystem>,
    pub convention: ShiftConvention,
    pub radius: Rational,
    pub eps: Rational,
    /// Samples for Hessian claims.
    pub samples: usize,
    /// Samples for value claims.
    pub value_samples: usize,
    pub scheme: Scheme,
    pub seed: u64,
    /// Random points for the kernel comparison.
    pub kernel_points: usize,
    /// Degree bound of the monomial basis for the derivative formulas.
    pub monomial_degree: u32,
    /// Claim-name prefixes to run; empty runs everything.
    pub select: Vec<String>,
}

impl SuiteConfig {
    pub fn new(k: usize) -> Result<Self, ConstructionError> {
        Ok(SuiteConfig {
            k,
            systems: default_systems()?,
            convention: ShiftConvention::Summed,
            radius: rat(1, 10),
            eps: rat(1, 100),
            samples: 1000,
            value_samples: 10_000,
            scheme: Scheme::Halton,
            seed: 1,
            kernel_points: 5,
            monomial_degree: 6,
            select: Vec::new(),
        })
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        crate::constructions::check_k(self.k)?;
        if self.systems.is_empty() {
            return Err(ConstructionError::Shape("no coefficient systems".into()));
        }
        if !self.radius.is_positive() {
            return Err(ConstructionError::Shape("radius must be positive".into()));
        }
        if self.eps.is_negative() || self.eps >= self.radius {
            return Err(ConstructionError::Shape("epsilon must lie in [0, radius)".into()));
        }
        if self.samples == 0 || self.value_samples == 0 {
            return Err(ConstructionError::Shape("sample counts must be positive".into()));
        }
        Ok(())
    }

    fn wants(&self, name: &str) -> bool {
        self.select.is_empty() || self.select.iter().any(|p| name.starts_with(p.as_str()))
    }

    fn params(&self, sys: Option<&CoefficientSystem>) -> ReportParams {
        ReportParams {
            k: Some(self.k),
            alpha: sys.map(|s| s.alpha.clone()),
            c: sys.map(|s| s.c.clone()),
            ..Default::default()
        }
    }
}

/// A named claim with the coefficient system it concerns, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub system: Option<usize>,
    pub sigma: Option<usize>,
}

impl Claim {
    fn new(name: impl Into<String>, system: Option<usize>, sigma: Option<usize>) -> Self {
        Claim {
            name: name.into(),
            system,
            sigma,
        }
    }

    /// Every claim for the configuration, in run order.
    pub fn all(cfg: &SuiteConfig) -> Vec<Claim> {
        let mut out = vec![Claim::new("threshold.binding", None, None), Claim::new("zero_set.g", None, None)];
        for (i, s) in cfg.systems.iter().enumerate() {
            let a = fmt_rational(&s.alpha);
            for n in ["coefficients", "identity.mixed_derivatives", "identity.p_zzbar", "discriminant"] {
                out.push(Claim::new(format!("{n}[{a}]"), Some(i), None));
            }
            for n in ["hess_q.spectrum", "zero_set.rho", "rho.nonneg", "rho.psh"] {
                out.push(Claim::new(format!("{n}[{a}]"), Some(i), None));
            }
            for sigma in 1..cfg.k {
                for n in ["zero_set.psi", "inclusion.m", "inclusion.normal_form", "kernel", "kernel.g_strict"] {
                    out.push(Claim::new(format!("{n}[{a},{sigma}]"), Some(i), Some(sigma)));
                }
            }
        }
        if cfg.systems.len() >= 2 {
            out.push(Claim::new("intersection.origin", Some(0), None));
        }
        out.push(Claim::new("psi.nonneg", None, None));
        out.push(Claim::new("psi.psh", None, None));
        out
    }
}

/// Runs the selected claims. Each claim parallelizes internally.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CertReport>, ConstructionError> {
    cfg.validate()?;
    let claims: Vec<Claim> = Claim::all(cfg).into_iter().filter(|c| cfg.wants(&c.name)).collect();
    let mut out = Vec::with_capacity(claims.len());
    let needs_psi = claims.iter().any(|c| c.name.starts_with("psi."));
    let psi = if needs_psi {
        Some(build_psi_tilde(cfg.k, &cfg.systems, cfg.convention)?)
    } else {
        None
    };
    for claim in &claims {
        let mut r = run_claim(cfg, claim, psi.as_ref())?;
        r.claim = claim.name.clone();
        out.push(r);
    }
    Ok(out)
}

/// Manifest of every constructed object for the configuration.
pub fn suite_manifest(cfg: &SuiteConfig) -> Result<ConstructionManifest, ConstructionError> {
    let psi = build_psi_tilde(cfg.k, &cfg.systems, cfg.convention)?;
    ConstructionManifest::from_psi(&psi)
}

fn run_claim(
    cfg: &SuiteConfig,
    claim: &Claim,
    psi: Option<&crate::constructions::PsiTilde>,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let k = cfg.k;
    let sys = claim.system.map(|i| &cfg.systems[i]);
    let sigma = claim.sigma.unwrap_or(1);
    let base = claim.name.split('[').next().unwrap_or("");
    let src = ComplexCoordSpace::source(k)?;
    let tgt = ComplexCoordSpace::target(k)?;
    let ball = |dim: usize, count: usize| {
        SampleSpec::ball(dim, cfg.radius.clone(), count, cfg.scheme.clone())
            .map_err(|e| ConstructionError::Shape(e.to_string()))
    };
    let tubed = |spec: SampleSpec, tube: Tube| {
        spec.with_tube(tube).map_err(|e| ConstructionError::Shape(e.to_string()))
    };
    let r = match (base, sys) {
        ("threshold.binding", _) => {
            let mut r = CertReport::new("", cfg.params(None));
            let (lo, hi) = threshold_root(&rat(1, 1000))?;
            let (a, b) = (rat(46, 100), rat(47, 100));
            let (na, nb) = (binding_numerator(&a), binding_numerator(&b));
            r.note(format!("numerator at 46/100 = {}, at 47/100 = {}", fmt_rational(&na), fmt_rational(&nb)));
            r.note(format!("bisection interval [{}, {}]", fmt_rational(&lo), fmt_rational(&hi)));
            if !(na.is_positive() && nb.is_negative()) {
                r.fail(Witness::new("no sign change", vec![a.clone(), b.clone()], "-"));
            }
            if !(lo > a && hi < b) {
                r.fail(Witness::new("interval not inside (46/100, 47/100)", vec![lo, hi], "-"));
            }
            r.finish(start)
        }
        ("zero_set.g", _) => {
            let chart = build_normal_form(k)?;
            let pulled = vec![("g".to_string(), chart.pull(&build_g(k)?)?)];
            zero_set_check("", &chart, &pulled, cfg.params(None))?
        }
        ("coefficients", Some(s)) => {
            let mut r = CertReport::new("", cfg.params(Some(s)));
            r.note(s.summary());
            for (c, m) in s.margins() {
                let ok = if c.is_equality() { m.is_zero() } else { m.is_positive() };
                r.note(format!("{} margin {}", c.label(), fmt_rational(&m)));
                if !ok {
                    r.fail(Witness::new(c.label(), Vec::new(), fmt_rational(&m)));
                }
            }
            r.finish(start)
        }
        ("identity.mixed_derivatives", Some(s)) => {
            let mut r = mixed_derivative_basis_check(&s.alpha, k, cfg.monomial_degree)?;
            r.params.c = Some(s.c.clone());
            r
        }
        ("identity.p_zzbar", Some(s)) => p_zzbar_check(s, k)?,
        ("discriminant", Some(s)) => {
            let (b1, b0) = discriminant_pair(s);
            let spec = ball(2, cfg.value_samples.min(2000))?;
            discriminant_check("", &b1, &b0, &spec, cfg.params(Some(s)))?
        }
        ("hess_q.spectrum", Some(s)) => hess_q_spectrum_check(s, k, &s_alpha_axis_points(k))?,
        ("zero_set.rho", Some(s)) => {
            let chart = build_s_alpha(k, &s.alpha)?;
            let pulled = vec![("rho".to_string(), chart.pull(&build_rho_alpha(s, k)?)?)];
            zero_set_check("", &chart, &pulled, cfg.params(Some(s)))?
        }
        ("rho.nonneg", Some(s)) => {
            let rho = build_rho_alpha(s, k)?;
            let spec = tubed(
                ball(tgt.real_registry().len(), cfg.value_samples)?,
                Tube::affine(build_y(k)?, cfg.eps.clone()),
            )?;
            certify_sign_on_samples("", cfg.params(Some(s)), &spec, |p| Ok(rho.eval(p)?.re), SignClaim::Nonneg)
        }
        ("rho.psh", Some(s)) => {
            let h = complex_hessian(&build_rho_alpha(s, k)?, &tgt)?;
            let spec = tubed(
                ball(tgt.real_registry().len(), cfg.samples)?,
                Tube::affine(build_y(k)?, cfg.eps.clone()),
            )?;
            certify_psd_on_samples("", cfg.params(Some(s)), &spec, |p| h.eval(p))
        }
        ("zero_set.psi", Some(s)) => {
            let chart = build_normal_form(k)?;
            let pulled = vec![(
                format!("psi[{},{sigma}]", fmt_rational(&s.alpha)),
                psi_part_on_chart(s, sigma, k, cfg.convention, &chart)?,
            )];
            zero_set_check("", &chart, &pulled, cfg.params(Some(s)))?
        }
        ("inclusion.m", Some(s)) => {
            let (chart, _) = build_m_alpha_sigma(&s.alpha, sigma, k, cfg.convention)?;
            let f = build_f_alpha_sigma(&s.alpha, sigma, k, cfg.convention)?;
            inclusion_check("", &chart, Some(&f), &s_alpha_equations(k, &s.alpha)?, cfg.params(Some(s)))?
        }
        ("inclusion.normal_form", Some(s)) => {
            let chart = build_normal_form(k)?;
            let (_, m) = build_m_alpha_sigma(&s.alpha, sigma, k, cfg.convention)?;
            inclusion_check("", &chart, None, &m, cfg.params(Some(s)))?
        }
        ("kernel", Some(s)) => kernel_check(&s.alpha, sigma, k, cfg.convention, cfg.kernel_points, cfg.seed)?,
        ("kernel.g_strict", Some(s)) => {
            let spec = ball(src.real_registry().len(), cfg.samples)?;
            kernel_g_strict_check(&build_g(k)?, &s.alpha, sigma, k, cfg.convention, &spec, cfg.params(Some(s)))?
        }
        ("intersection.origin", _) => {
            intersection_check(&cfg.systems[0].alpha, &cfg.systems[1].alpha, k, cfg.convention)?
        }
        ("psi.nonneg", _) | ("psi.psh", _) => {
            let psi = psi.ok_or_else(|| ConstructionError::Shape("psi not built".into()))?;
            let ev = PsiEvaluator::new(psi)?;
            let dim = src.real_registry().len();
            let origin = vec![Rational::zero(); dim];
            if base == "psi.nonneg" {
                // ψ̃ vanishes on the normal form; random samples miss it except at O
                let spec = tubed(ball(dim, cfg.value_samples)?, Tube::point(origin, Rational::zero()))?;
                certify_sign_on_samples("", cfg.params(None), &spec, |p| ev.value(p), SignClaim::PositiveOffTube)
            } else {
                let spec = tubed(ball(dim, cfg.samples)?, Tube::point(origin, cfg.eps.clone()))?;
                let mut r = certify_psd_on_samples("", cfg.params(None), &spec, |p| ev.hessian(p));
                // the chain-rule route against the Hessian of the expanded polynomial
                let direct = complex_hessian(&psi.total, &src)?;
                for s in spec.generate().iter().filter(|s| !s.in_tube).take(2) {
                    let same = direct.eval(&s.point)? == ev.hessian(&s.point)?;
                    r.note(format!("direct Hessian agrees at sample {}: {same}", s.index));
                    if !same {
                        r.fail(Witness::new("chain rule mismatch", s.point.clone(), "-"));
                    }
                }
                r
            }
        }
        _ => {
            let mut r = CertReport::new("", cfg.params(sys));
            r.verdict = Verdict::Failed;
            r.note("unknown claim");
            r
        }
    };
    let mut r = r;
    if r.params.k.is_none() {
        r.params.k = Some(k);
    }
    if r.params.alpha.is_none() {
        r.params.alpha = sys.map(|s| s.alpha.clone());
    }
    if r.params.c.is_none() {
        r.params.c = sys.map(|s| s.c.clone());
    }
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_names_are_unique() {
        let cfg = SuiteConfig::new(3).unwrap();
        let all = Claim::all(&cfg);
        let mut names: Vec<_> = all.iter().map(|c| c.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn structural_claims_pass_for_k2() {
        let mut cfg = SuiteConfig::new(2).unwrap();
        cfg.samples = 20;
        cfg.value_samples = 50;
        cfg.monomial_degree = 3;
        cfg.select = ["threshold", "zero_set", "coefficients", "identity", "discriminant", "inclusion", "kernel[", "intersection", "hess_q"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let reports = run_suite(&cfg).unwrap();
        assert!(reports.len() > 10);
        for r in &reports {
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn invalid_config() {
        let mut cfg = SuiteConfig::new(2).unwrap();
        cfg.eps = rat(1, 2);
        assert!(run_suite(&cfg).is_err());
        cfg = SuiteConfig::new(2).unwrap();
        cfg.k = 5;
        assert!(run_suite(&cfg).is_err());
    }
}
