//! Hull-exclusion certificates from a discretized linear Chebyshev problem:
//! minimize `max_X |P|` over polynomials of degree `≤ d` with `P(p) = 1`.
//!
//! After translating `p` to the origin and scaling `X` into the unit ball,
//! `P = 1 + Q` with `Q(0) = 0`, and `|P(x)| ≤ t` is relaxed to the cuts
//! `Re(e^{−iθ} P(x)) ≤ t`. The cuts start as an `m`-gon at a few seed
//! samples and grow by constraint generation: each round adds the cut at
//! the current argument of `P` for the worst samples. The LP only proposes
//! polynomials; a certificate is issued from the true `max_X |P|`, so the
//! polygonal relaxation can weaken a verdict but never fabricate one.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::sampleset::{dist, fmt_f64, SampleSet};
use crate::simplex::{maximize, LpOutcome};
use crate::HullError;

#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionOptions {
    /// Directions of the initial polygon.
    pub polygon: usize,
    /// Samples that receive the full polygon before the first round.
    pub seed_samples: usize,
    /// Cuts added per round.
    pub cuts_per_round: usize,
    pub max_rounds: usize,
    /// Stop at the first polynomial whose margin reaches this value, and
    /// give up once the relaxation shows it cannot be reached.
    pub target_margin: f64,
    /// Smallest margin accepted as a certificate.
    pub tolerance: f64,
    pub max_pivots: usize,
}

impl Default for ExclusionOptions {
    fn default() -> Self {
        ExclusionOptions {
            polygon: 16,
            seed_samples: 4,
            cuts_per_round: 24,
            max_rounds: 400,
            target_margin: 1e-6,
            tolerance: 1e-9,
            max_pivots: 500_000,
        }
    }
}

/// A polynomial `P(z) = Σ c_e ((z − center)/scale)^e` with
/// `|P(p)| > max_X |P|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionCertificate {
    pub query: Vec<Complex64>,
    pub degree: usize,
    pub center: Vec<Complex64>,
    pub scale: f64,
    pub monomials: Vec<Vec<u32>>,
    pub coefficients: Vec<Complex64>,
    pub value_at_query: f64,
    pub max_on_set: f64,
    /// `|P(p)| − max_X |P|`.
    pub margin: f64,
    pub polygon: usize,
    pub cuts: usize,
    pub rounds: usize,
    pub tolerance: f64,
    pub samples: usize,
    pub provenance: String,
}

impl ExclusionCertificate {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let w: Vec<Complex64> = z.iter().zip(&self.center).map(|(a, c)| (a - c) / self.scale).collect();
        self.monomials
            .iter()
            .zip(&self.coefficients)
            .map(|(e, c)| c * monomial_value(e, &w))
            .sum()
    }

    /// Largest total degree that actually occurs.
    pub fn effective_degree(&self) -> usize {
        self.monomials
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    /// The same polynomial read as a certificate at a higher degree.
    pub fn at_degree(&self, degree: usize) -> Option<ExclusionCertificate> {
        (degree >= self.degree).then(|| ExclusionCertificate { degree, ..self.clone() })
    }

    /// Re-evaluates the stored polynomial on `set` and at the query and
    /// returns the recomputed margin, which must be positive and agree
    /// with the stored one to `tolerance` relative.
    pub fn recheck(&self, set: &SampleSet) -> Result<f64, HullError> {
        if set.dim() != self.query.len() {
            return Err(HullError::Invalid("certificate and sample set differ in dimension".into()));
        }
        let at_p = self.eval(&self.query).norm();
        let max = set.points().iter().map(|x| self.eval(x).norm()).fold(0.0, f64::max);
        let margin = at_p - max;
        let scale = self.margin.abs().max(at_p).max(1.0);
        if !(margin > 0.0) || (margin - self.margin).abs() > self.tolerance * scale {
            return Err(HullError::Recheck { stored: self.margin, recomputed: margin });
        }
        Ok(margin)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind: exclusion-certificate");
        let _ = writeln!(s, "query: {}", fmt_point(&self.query));
        let _ = writeln!(s, "degree: {}", self.degree);
        let _ = writeln!(s, "center: {}", fmt_point(&self.center));
        let _ = writeln!(s, "scale: {}", fmt_f64(self.scale));
        let _ = writeln!(s, "value_at_query: {}", fmt_f64(self.value_at_query));
        let _ = writeln!(s, "max_on_set: {}", fmt_f64(self.max_on_set));
        let _ = writeln!(s, "margin: {}", fmt_f64(self.margin));
        let _ = writeln!(s, "polygon: {}", self.polygon);
        let _ = writeln!(s, "cuts: {}", self.cuts);
        let _ = writeln!(s, "rounds: {}", self.rounds);
        let _ = writeln!(s, "recheck_tolerance: {}", fmt_f64(self.tolerance));
        let _ = writeln!(s, "samples: {}", self.samples);
        let _ = writeln!(s, "sample_provenance: {}", self.provenance);
        let _ = writeln!(s, "coefficients: {}", self.monomials.len());
        for (e, c) in self.monomials.iter().zip(&self.coefficients) {
            let exps: Vec<String> = e.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "  [{}] {} {}", exps.join(","), fmt_f64(c.re), fmt_f64(c.im));
        }
        s
    }
}

/// Outcome of a search that found nothing. Not a proof of hull membership.
#[derive(Debug, Clone, PartialEq)]
pub struct NoCertificate {
    pub query: Vec<Complex64>,
    pub degree: usize,
    /// Smallest `max_X |P|` seen with `P(p) = 1`.
    pub best_max: f64,
    /// Lower bound on `max_X |P|` from the relaxation.
    pub lp_bound: f64,
    pub rounds: usize,
    pub reason: String,
}

impl NoCertificate {
    pub fn render(&self) -> String {
        format!(
            "kind: no-certificate (one-sided: not a proof of hull membership)\nquery: {}\ndegree: {}\nbest_max: {}\nlp_bound: {}\nrounds: {}\nreason: {}\n",
            fmt_point(&self.query),
            self.degree,
            fmt_f64(self.best_max),
            fmt_f64(self.lp_bound),
            self.rounds,
            self.reason
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HullOutcome {
    Excluded(Box<ExclusionCertificate>),
    NoCertificate(NoCertificate),
}

impl HullOutcome {
    pub fn certificate(&self) -> Option<&ExclusionCertificate> {
        match self {
            HullOutcome::Excluded(c) => Some(c),
            HullOutcome::NoCertificate(_) => None,
        }
    }

    pub fn is_excluded(&self) -> bool {
        self.certificate().is_some()
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            HullOutcome::Excluded(_) => "excluded",
            HullOutcome::NoCertificate(_) => "no-certificate (one-sided)",
        }
    }

    pub fn render(&self) -> String {
        match self {
            HullOutcome::Excluded(c) => c.render(),
            HullOutcome::NoCertificate(n) => n.render(),
        }
    }
}

pub(crate) fn fmt_point(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| format!("{}{:+}i", fmt_f64(z.re), z.im)).collect();
    format!("({})", parts.join(", "))
}

/// Exponent vectors in `n` variables of total degree `1..=d`, graded.
pub fn monomial_basis(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for deg in 1..=d as u32 {
        rec(n, deg, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn monomial_value(e: &[u32], w: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for (&k, z) in e.iter().zip(w) {
        if k > 0 {
            v *= z.powu(k);
        }
    }
    v
}

/// Searches for a degree-`≤ d` polynomial separating `p` from `set`.
pub fn hull_excludes(
    set: &SampleSet,
    p: &[Complex64],
    d: usize,
    opts: &ExclusionOptions,
) -> Result<HullOutcome, HullError> {
    if p.len() != set.dim() {
        return Err(HullError::Invalid("query dimension differs from the sample set".into()));
    }
    let basis = monomial_basis(set.dim(), d);
    if basis.is_empty() {
        return Err(HullError::Degenerate);
    }
    if opts.polygon < 3 || opts.cuts_per_round == 0 || opts.seed_samples == 0 {
        return Err(HullError::Invalid("polygon ≥ 3 and positive cut counts required".into()));
    }
    let scale = set.points().iter().map(|x| dist(x, p)).fold(0.0, f64::max);
    if set.distance_to(p) <= 1e-12 * scale.max(1.0) {
        return Err(HullError::QueryInSet);
    }
    let nb = basis.len();
    // monomial values at every sample, in the translated and scaled frame
    let values: Vec<Vec<Complex64>> = set
        .points()
        .iter()
        .map(|x| {
            let w: Vec<Complex64> = x.iter().zip(p).map(|(a, c)| (a - c) / scale).collect();
            basis.iter().map(|e| monomial_value(e, &w)).collect()
        })
        .collect();
    let eval_q = |coef: &[Complex64], s: usize| -> Complex64 {
        values[s].iter().zip(coef).map(|(m, c)| m * c).sum()
    };

    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| dist(&set.points()[a], p).total_cmp(&dist(&set.points()[b], p)));
    let mut cuts: Vec<(usize, f64)> = Vec::new();
    for &s in order.iter().take(opts.seed_samples) {
        for k in 0..opts.polygon {
            cuts.push((s, 2.0 * PI * k as f64 / opts.polygon as f64));
        }
    }

    let ncols = 4 * nb + 1;
    let mut c = vec![0.0; ncols];
    c[4 * nb] = 1.0;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut lp_bound = 0.0f64;
    let mut rounds = 0;
    let reason;
    loop {
        rounds += 1;
        for &(s, th) in &cuts[rows.len()..] {
            let (cs, sn) = (th.cos(), th.sin());
            let mut row = vec![0.0; ncols];
            for (j, m) in values[s].iter().enumerate() {
                let a = m.re * cs + m.im * sn;
                let b = -m.im * cs + m.re * sn;
                row[4 * j] = a;
                row[4 * j + 1] = -a;
                row[4 * j + 2] = b;
                row[4 * j + 3] = -b;
            }
            row[4 * nb] = 1.0;
            rows.push(row);
            rhs.push((1.0 - cs).max(0.0));
        }
        let x = match maximize(&c, &rows, &rhs, opts.max_pivots)? {
            LpOutcome::Optimal { x, .. } => x,
            LpOutcome::Unbounded => return Err(HullError::Lp("relaxation unbounded".into())),
        };
        let tau = x[4 * nb];
        lp_bound = lp_bound.max(1.0 - tau);
        let coef: Vec<Complex64> = (0..nb)
            .map(|j| Complex64::new(x[4 * j] - x[4 * j + 1], x[4 * j + 2] - x[4 * j + 3]))
            .collect();
        let moduli: Vec<(usize, Complex64)> = (0..set.len()).map(|s| (s, 1.0 + eval_q(&coef, s))).collect();
        let max = moduli.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| max < *b) {
            best = Some((max, coef.clone()));
        }
        if 1.0 - max >= opts.target_margin {
            reason = String::new();
            break;
        }
        // the relaxation bounds every margin from above
        if 1.0 - lp_bound < opts.target_margin {
            reason = format!("relaxation bound leaves no margin of {}", fmt_f64(opts.target_margin));
            break;
        }
        let t = 1.0 - tau;
        let mut viol: Vec<(usize, f64, f64)> = moduli
            .iter()
            .filter(|(_, v)| v.norm() > t + 1e-7)
            .map(|&(s, v)| (s, v.norm(), v.arg()))
            .collect();
        if viol.is_empty() {
            reason = "relaxation converged above the target margin".to_string();
            break;
        }
        if rounds >= opts.max_rounds {
            reason = format!("round limit {} reached", opts.max_rounds);
            break;
        }
        viol.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(s, _, th) in viol.iter().take(opts.cuts_per_round) {
            cuts.push((s, th));
        }
    }

    let (max, coef) = best.expect("at least one round");
    if 1.0 - max > opts.tolerance {
        let mut monomials = vec![vec![0; set.dim()]];
        monomials.extend(basis);
        let mut coefficients = vec![Complex64::new(1.0, 0.0)];
        coefficients.extend(coef);
        let mut cert = ExclusionCertificate {
            query: p.to_vec(),
            degree: d,
            center: p.to_vec(),
            scale,
            monomials,
            coefficients,
            value_at_query: 0.0,
            max_on_set: 0.0,
            margin: 0.0,
            polygon: opts.polygon,
            cuts: cuts.len(),
            rounds,
            tolerance: opts.tolerance,
            samples: set.len(),
            provenance: set.provenance().to_string(),
        };
        // stored values come from the stored polynomial itself
        cert.value_at_query = cert.eval(p).norm();
        cert.max_on_set = set.points().iter().map(|x| cert.eval(x).norm()).fold(0.0, f64::max);
        cert.margin = cert.value_at_query - cert.max_on_set;
        if cert.margin > 0.0 {
            return Ok(HullOutcome::Excluded(Box::new(cert)));
        }
    }
    Ok(HullOutcome::NoCertificate(NoCertificate {
        query: p.to_vec(),
        degree: d,
        best_max: max,
        lp_bound,
        rounds,
        reason: if reason.is_empty() { "no polynomial beat the query".into() } else { reason },
    }))
}

/// Tries the degrees in order and returns the first certificate, or the
/// outcome at the last degree.
pub fn search_degrees(
    set: &SampleSet,
    p: &[Complex64],
    degrees: &[usize],
    opts: &ExclusionOptions,
) -> Result<HullOutcome, HullError> {
    let mut last = None;
    for &d in degrees {
        let out = hull_excludes(set, p, d, opts)?;
        if out.is_excluded() {
            return Ok(out);
        }
        last = Some(out);
    }
    last.ok_or(HullError::Degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> SampleSet {
        let pts = (0..n)
            .map(|k| vec![Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)])
            .collect();
        SampleSet::new(1, pts, "unit circle").unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(1, 3), vec![vec![1], vec![2], vec![3]]);
        // C(n+d, d) − 1
        assert_eq!(monomial_basis(5, 4).len(), 125);
        assert_eq!(monomial_basis(2, 2), vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn point_outside_the_circle() {
        let x = circle(100);
        let p = [Complex64::new(2.0, 0.0)];
        let out = hull_excludes(&x, &p, 1, &ExclusionOptions::default()).unwrap();
        let cert = out.certificate().expect("certificate");
        assert!(cert.margin > 0.0);
        cert.recheck(&x).unwrap();
    }

    #[test]
    fn centre_of_the_circle_has_no_certificate() {
        let x = circle(100);
        for d in 1..=3 {
            let out = hull_excludes(&x, &[Complex64::new(0.0, 0.0)], d, &ExclusionOptions::default()).unwrap();
            assert!(!out.is_excluded());
            assert!(out.render().contains("one-sided"));
        }
    }

    #[test]
    fn errors() {
        let x = circle(8);
        assert_eq!(hull_excludes(&x, &[Complex64::new(2.0, 0.0)], 0, &ExclusionOptions::default()), Err(HullError::Degenerate));
        assert_eq!(
            hull_excludes(&x, &[Complex64::new(1.0, 0.0)], 1, &ExclusionOptions::default()),
            Err(HullError::QueryInSet)
        );
    }
}
