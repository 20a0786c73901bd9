//! Certificates for identities, positivity and the coefficient conditions.

mod discriminant;
mod feasibility;
mod identity;
mod positivity;
mod structure;
mod suite;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::scalar::{fmt_rational, to_f64, Rational};

pub use discriminant::{discriminant_check, discriminant_pair, ray_reduction, RayForm};
pub use feasibility::{binding_sign_change, feasibility_scan, threshold_root, FeasibilityRow};
pub use identity::{
    find_nonzero_point, mixed_derivative_basis_check, p_zzbar_check, verify_polynomial_identity,
};
pub use positivity::{
    certify_psd_on_samples, certify_sign_on_samples, psd_certificate_at, PsiEvaluator,
    SignClaim,
};
pub use structure::{
    hess_q_spectrum_check, inclusion_check, intersection_check, kernel_check,
    kernel_g_strict_check, s_alpha_axis_points, zero_set_check,
};
pub use suite::{run_suite, suite_manifest, Claim, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ProvedExact,
    VerifiedOnSamples,
    Failed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::ProvedExact => "proved-exact",
            Verdict::VerifiedOnSamples => "verified-on-samples",
            Verdict::Failed => "failed",
        }
    }

    pub fn passed(self) -> bool {
        self != Verdict::Failed
    }
}

/// An exact point with the value that makes it interesting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub point: Vec<Rational>,
    pub value: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, point: Vec<Rational>, value: impl Into<String>) -> Self {
        Witness {
            label: label.into(),
            point,
            value: value.into(),
        }
    }
}

/// Run parameters echoed into every report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportParams {
    pub k: Option<usize>,
    pub alpha: Option<Rational>,
    pub c: Option<Rational>,
    pub radius: Option<Rational>,
    pub eps: Option<Rational>,
    pub seed: Option<u64>,
    pub scheme: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CertReport {
    pub claim: String,
    pub verdict: Verdict,
    pub params: ReportParams,
    pub samples: usize,
    /// Samples on which the strict form of the claim was tested.
    pub strict_samples: usize,
    pub min_minor: Option<Rational>,
    pub min_eigenvalue: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub details: Vec<String>,
    pub wall_time: Duration,
}

impl CertReport {
    pub fn new(claim: impl Into<String>, params: ReportParams) -> Self {
        CertReport {
            claim: claim.into(),
            verdict: Verdict::ProvedExact,
            params,
            samples: 0,
            strict_samples: 0,
            min_minor: None,
            min_eigenvalue: None,
            witnesses: Vec::new(),
            details: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.verdict = Verdict::Failed;
        self.witnesses.push(w);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// Structured text. The `wall_time` line is the only one that varies
    /// between identical runs.
    pub fn render(&self) -> String {
        let mut t = String::new();
        let opt = |r: &Option<Rational>| r.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into());
        let _ = writeln!(t, "claim = {}", self.claim);
        let _ = writeln!(t, "verdict = {}", self.verdict.name());
        let _ = writeln!(
            t,
            "k = {}",
            self.params.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into())
        );
        let _ = writeln!(t, "alpha = {}", opt(&self.params.alpha));
        let _ = writeln!(t, "c = {}", opt(&self.params.c));
        let _ = writeln!(t, "radius = {}", opt(&self.params.radius));
        let _ = writeln!(t, "epsilon = {}", opt(&self.params.eps));
        let _ = writeln!(
            t,
            "seed = {}",
            self.params.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into())
        );
        let _ = writeln!(
            t,
            "scheme = {}",
            self.params.scheme.clone().unwrap_or_else(|| "-".into())
        );
        let _ = writeln!(t, "samples = {}", self.samples);
        let _ = writeln!(t, "strict_samples = {}", self.strict_samples);
        let _ = writeln!(t, "min_minor = {}", self.min_minor_text());
        let _ = writeln!(
            t,
            "min_eigenvalue = {}",
            self.min_eigenvalue
                .map(|v| format!("{v:.6e}"))
                .unwrap_or_else(|| "-".into())
        );
        for d in &self.details {
            let _ = writeln!(t, "detail = {d}");
        }
        for w in &self.witnesses {
            let pt: Vec<String> = w.point.iter().map(fmt_rational).collect();
            let _ = writeln!(t, "witness = {} at ({}) value {}", w.label, pt.join(", "), w.value);
        }
        let _ = writeln!(t, "wall_time = {:.3}", self.wall_time.as_secs_f64());
        t
    }

    pub fn min_minor_text(&self) -> String {
        self.min_minor
            .as_ref()
            .map(|m| format!("{:.6e}", to_f64(m)))
            .unwrap_or_else(|| "-".into())
    }
}

pub(crate) fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}
