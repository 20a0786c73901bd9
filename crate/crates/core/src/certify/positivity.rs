use std::time::Instant;

use num_traits::{Signed, Zero};

use super::{min_opt, CertReport, ReportParams, Witness};
use crate::constructions::{build_rho_alpha, ConstructionError, PsiTilde};
use crate::linalg::{psd_certificate, GaussMatrix, PsdCertificate, PsdVerdict};
use crate::par;
use crate::poly::{PolyError, SparsePoly};
use crate::sampling::SampleSpec;
use crate::scalar::{fmt_rational, Rational};
use crate::wirtinger::{
    chain_rule_hessian_at, complex_hessian, gauss_matrix_to_c64, min_eigenvalue,
    HermitianPolyMatrix, HoloPolyMap,
};

/// Exact definiteness of `H(p)`.
pub fn psd_certificate_at(
    h: &HermitianPolyMatrix,
    p: &[Rational],
    strict: bool,
) -> Result<PsdCertificate, PolyError> {
    Ok(psd_certificate(&h.eval(p)?, strict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClaim {
    /// `f ≥ 0` at every sample.
    Nonneg,
    /// `f ≥ 0` everywhere and `f > 0` outside the exclusion tube.
    PositiveOffTube,
}

fn sample_params(mut params: ReportParams, spec: &SampleSpec) -> ReportParams {
    params.radius = Some(spec.radius.clone());
    params.eps = spec.tube.as_ref().map(|t| t.eps.clone());
    params.seed = spec.scheme.seed();
    params.scheme = Some(spec.scheme.name());
    params
}

/// Exact sign of `f` at every sample of `spec`.
pub fn certify_sign_on_samples<F>(
    claim: &str,
    params: ReportParams,
    spec: &SampleSpec,
    f: F,
    sign: SignClaim,
) -> CertReport
where
    F: Fn(&[Rational]) -> Result<Rational, PolyError> + Sync + Send,
{
    let start = Instant::now();
    let samples = spec.generate();
    let values = par::map_indexed(&samples, |_, s| f(&s.point));
    let mut r = CertReport::new(claim, sample_params(params, spec));
    r.verdict = super::Verdict::VerifiedOnSamples;
    r.samples = samples.len();
    r.note(spec.describe());
    r.note("min_minor column holds the smallest sampled value");
    let mut min = None;
    for (s, v) in samples.iter().zip(values) {
        let v = match v {
            Ok(v) => v,
            Err(e) => {
                r.fail(Witness::new("evaluation error", s.point.clone(), e.to_string()));
                continue;
            }
        };
        let strict = sign == SignClaim::PositiveOffTube && !s.in_tube;
        if strict {
            r.strict_samples += 1;
        }
        let bad = v.is_negative() || (strict && v.is_zero());
        if bad && r.witnesses.len() < 5 {
            r.fail(Witness::new(
                format!("sample {}", s.index),
                s.point.clone(),
                fmt_rational(&v),
            ));
        } else if bad {
            r.verdict = super::Verdict::Failed;
        }
        min = min_opt(min, Some(v));
    }
    r.min_minor = min;
    r.finish(start)
}

/// Exact PSD test (all principal minors) at every sample and strict PD
/// (leading minors) at samples outside the tube.
pub fn certify_psd_on_samples<F>(
    claim: &str,
    params: ReportParams,
    spec: &SampleSpec,
    hess: F,
) -> CertReport
where
    F: Fn(&[Rational]) -> Result<GaussMatrix, PolyError> + Sync + Send,
{
    let start = Instant::now();
    let samples = spec.generate();
    let results = par::map_indexed(&samples, |_, s| {
        let h = hess(&s.point)?;
        let weak = psd_certificate(&h, false);
        let strong = (!s.in_tube).then(|| psd_certificate(&h, true));
        let eig = min_eigenvalue(&gauss_matrix_to_c64(&h));
        Ok::<_, PolyError>((weak, strong, eig))
    });
    let mut r = CertReport::new(claim, sample_params(params, spec));
    r.verdict = super::Verdict::VerifiedOnSamples;
    r.samples = samples.len();
    r.note(spec.describe());
    r.note("min_minor is the smallest leading principal minor over strict samples");
    let mut min_minor = None;
    let mut min_eig = f64::INFINITY;
    let mut weak_fail = 0usize;
    let mut strict_fail = 0usize;
    for (s, res) in samples.iter().zip(results) {
        let (weak, strong, eig) = match res {
            Ok(t) => t,
            Err(e) => {
                r.fail(Witness::new("evaluation error", s.point.clone(), e.to_string()));
                continue;
            }
        };
        min_eig = min_eig.min(eig);
        if let PsdVerdict::Violated { mask, minor } = &weak.verdict {
            weak_fail += 1;
            if r.witnesses.len() < 5 {
                r.fail(Witness::new(
                    format!("sample {} principal minor mask {mask:#b}", s.index),
                    s.point.clone(),
                    fmt_rational(minor),
                ));
            }
            r.verdict = super::Verdict::Failed;
        }
        if let Some(st) = strong {
            r.strict_samples += 1;
            if let PsdVerdict::Violated { mask, minor } = &st.verdict {
                strict_fail += 1;
                if r.witnesses.len() < 5 {
                    r.fail(Witness::new(
                        format!("sample {} leading minor mask {mask:#b}", s.index),
                        s.point.clone(),
                        fmt_rational(minor),
                    ));
                }
                r.verdict = super::Verdict::Failed;
            }
            min_minor = min_opt(min_minor, Some(st.min_minor));
        }
    }
    r.note(format!("psd violations = {weak_fail}, strict violations = {strict_fail}"));
    r.min_minor = min_minor;
    r.min_eigenvalue = min_eig.is_finite().then_some(min_eig);
    r.finish(start)
}

struct PulledPart {
    map: HoloPolyMap,
    rho: SparsePoly,
    hess_rho: HermitianPolyMatrix,
}

/// Evaluates `ψ̃` and `Hess_C ψ̃` at source points through the chain rule:
/// `ψ̃(p) = g(p) + Σ ρ_α(f(p))`,
/// `Hess ψ̃(p) = Hess g(p) + Σ J(p)* · Hess ρ_α(f(p)) · J(p)`.
pub struct PsiEvaluator {
    g: SparsePoly,
    hess_g: HermitianPolyMatrix,
    parts: Vec<PulledPart>,
}

impl PsiEvaluator {
    pub fn new(psi: &PsiTilde) -> Result<Self, ConstructionError> {
        let src = psi
            .parts
            .first()
            .map(|p| p.map.source().clone())
            .ok_or_else(|| ConstructionError::Shape("empty psi".into()))?;
        let hess_g = complex_hessian(&psi.g, &src)?;
        let mut parts = Vec::new();
        for part in &psi.parts {
            let sys = psi
                .systems
                .iter()
                .find(|s| s.alpha == part.alpha)
                .expect("system for every part");
            let rho = build_rho_alpha(sys, psi.k)?;
            let hess_rho = complex_hessian(&rho, part.map.target())?;
            parts.push(PulledPart {
                map: part.map.clone(),
                rho,
                hess_rho,
            });
        }
        Ok(PsiEvaluator {
            g: psi.g.clone(),
            hess_g,
            parts,
        })
    }

    pub fn value(&self, p: &[Rational]) -> Result<Rational, PolyError> {
        let mut v = self.g.eval(p)?.re;
        for part in &self.parts {
            v += part.rho.eval(&part.map.eval_real(p)?)?.re;
        }
        Ok(v)
    }

    pub fn hessian(&self, p: &[Rational]) -> Result<GaussMatrix, PolyError> {
        let mut h = self.hess_g.eval(p)?;
        for part in &self.parts {
            let add = chain_rule_hessian_at(&part.hess_rho, &part.map, p)?;
            h = mat_add(&h, &add);
        }
        Ok(h)
    }

    /// `Hess_C ρ_α` at `f(p)` for one summand; used by the kernel check.
    pub fn part_hessians(&self, p: &[Rational]) -> Result<Vec<GaussMatrix>, PolyError> {
        self.parts
            .iter()
            .map(|part| chain_rule_hessian_at(&part.hess_rho, &part.map, p))
            .collect()
    }

    pub fn hess_g(&self) -> &HermitianPolyMatrix {
        &self.hess_g
    }
}

fn mat_add(a: &GaussMatrix, b: &GaussMatrix) -> GaussMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j) + b.get(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Verdict;
    use crate::constructions::{build_eta, build_psi_tilde, default_systems, ShiftConvention};
    use crate::sampling::{Scheme, Tube};
    use crate::scalar::{int, rat};

    #[test]
    fn negative_eta_fails_with_reproducible_witness() {
        let eta = build_eta(2).unwrap();
        let neg = -eta.clone();
        let spec = SampleSpec::ball(8, rat(1, 10), 50, Scheme::Halton).unwrap();
        let r = certify_sign_on_samples(
            "neg_eta",
            ReportParams::default(),
            &spec,
            |p| Ok(neg.eval(p)?.re),
            SignClaim::Nonneg,
        );
        assert_eq!(r.verdict, Verdict::Failed);
        let w = &r.witnesses[0];
        assert!(neg.eval(&w.point).unwrap().re.is_negative());
        let ok = certify_sign_on_samples(
            "eta",
            ReportParams::default(),
            &spec,
            |p| Ok(eta.eval(p)?.re),
            SignClaim::Nonneg,
        );
        assert_eq!(ok.verdict, Verdict::VerifiedOnSamples);
    }

    #[test]
    fn chain_route_matches_direct_hessian() {
        let systems = default_systems().unwrap();
        let psi = build_psi_tilde(2, &systems, ShiftConvention::Summed).unwrap();
        let ev = PsiEvaluator::new(&psi).unwrap();
        let src = psi.parts[0].map.source().clone();
        let p: Vec<Rational> = (0..10).map(|i| rat(i - 4, 97)).collect();
        assert_eq!(ev.value(&p).unwrap(), psi.total.eval(&p).unwrap().re);
        let direct = complex_hessian(&psi.total, &src).unwrap();
        assert_eq!(ev.hessian(&p).unwrap(), direct.eval(&p).unwrap());
    }

    #[test]
    fn identity_hessian_is_definite() {
        let spec = SampleSpec::ball(2, rat(1, 10), 10, Scheme::Halton)
            .unwrap()
            .with_tube(Tube::point(vec![int(0), int(0)], rat(1, 100)))
            .unwrap();
        let r = certify_psd_on_samples("id", ReportParams::default(), &spec, |_| {
            Ok(GaussMatrix::identity(3))
        });
        assert_eq!(r.verdict, Verdict::VerifiedOnSamples);
        assert_eq!(r.min_minor, Some(int(1)));
    }
}
