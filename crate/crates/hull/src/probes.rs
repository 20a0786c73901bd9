//! Off-manifold probes near `𝓜_k ∩ B̄_O(r)`: chart points pushed along a
//! direction orthogonal to the tangent space.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pshcert_core::constructions::{build_normal_form, ManifoldChart};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chebyshev::{fmt_point, search_degrees, ExclusionOptions, HullOutcome};
use crate::sampleset::{chart_point, fmt_f64, norm, sample_chart, GridSpec, SampleSet};
use crate::HullError;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptions {
    pub k: usize,
    pub radius: f64,
    /// Points per chart parameter in the sample grid.
    pub grid: usize,
    pub probes: usize,
    pub seed: u64,
    /// Offsets are drawn from `[min_offset, max_offset] · radius`.
    pub min_offset: f64,
    pub max_offset: f64,
    pub degrees: Vec<usize>,
    pub exclusion: ExclusionOptions,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            k: 2,
            radius: 0.1,
            grid: 9,
            probes: 100,
            seed: 2024,
            min_offset: 0.1,
            max_offset: 0.25,
            degrees: vec![1, 2, 4, 6],
            exclusion: ExclusionOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub params: Vec<f64>,
    pub base: Vec<Complex64>,
    pub point: Vec<Complex64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub provenance: String,
    pub samples: usize,
    pub degrees: Vec<usize>,
    pub results: Vec<(Probe, HullOutcome)>,
}

impl ProbeReport {
    pub fn excluded(&self) -> usize {
        self.results.iter().filter(|(_, o)| o.is_excluded()).count()
    }

    pub fn fraction_excluded(&self) -> f64 {
        self.excluded() as f64 / self.results.len().max(1) as f64
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: probes");
        let _ = writeln!(s, "samples: {} ({})", self.samples, self.provenance);
        let degs: Vec<String> = self.degrees.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "degrees: {}", degs.join(","));
        let _ = writeln!(s, "excluded: {} of {}", self.excluded(), self.results.len());
        for (i, (p, o)) in self.results.iter().enumerate() {
            let detail = match o.certificate() {
                Some(c) => format!("degree {} margin {}", c.degree, fmt_f64(c.margin)),
                None => "unknown (one-sided)".to_string(),
            };
            let _ = writeln!(s, "probe{}: {} offset {} {} {}", i + 1, fmt_point(&p.point), fmt_f64(p.offset), o.verdict(), detail);
        }
        s
    }
}

/// Real tangent vectors of the chart at `params`, as columns in `R^{2n}`.
fn tangent(chart: &ManifoldChart, params: &[f64]) -> Result<DMatrix<f64>, HullError> {
    let n = chart.components().len();
    let mut t = DMatrix::zeros(2 * n, params.len());
    for (a, _) in params.iter().enumerate() {
        for (i, c) in chart.components().iter().enumerate() {
            let v = c.derivative(a).eval_f64(params).map_err(|e| HullError::Construction(e.to_string()))?;
            t[(2 * i, a)] = v.re;
            t[(2 * i + 1, a)] = v.im;
        }
    }
    Ok(t)
}

pub fn probe_set(chart: &ManifoldChart, opts: &ProbeOptions) -> Result<Vec<Probe>, HullError> {
    let np = chart.params().len();
    let n = chart.components().len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.probes);
    let mut attempts = 0usize;
    while out.len() < opts.probes {
        attempts += 1;
        if attempts > 1000 * opts.probes.max(1) {
            return Err(HullError::Invalid("could not place probes inside the ball".into()));
        }
        let params: Vec<f64> = (0..np).map(|_| rng.random_range(-opts.radius..=opts.radius)).collect();
        let base = chart_point(chart, &params)?;
        if norm(&base) > 0.8 * opts.radius {
            continue;
        }
        let t = tangent(chart, &params)?;
        let raw = DVector::from_fn(2 * n, |_, _| rng.random_range(-1.0..=1.0));
        let q = t.qr().q();
        let normal = &raw - &q * (q.transpose() * &raw);
        let len = normal.norm();
        if len < 1e-6 {
            continue;
        }
        let offset = opts.radius * rng.random_range(opts.min_offset..=opts.max_offset);
        let point = (0..n)
            .map(|i| base[i] + Complex64::new(normal[2 * i], normal[2 * i + 1]) * (offset / len))
            .collect();
        out.push(Probe { params, base, point, offset });
    }
    Ok(out)
}

/// Chart grid of `𝓜_k` cut to the closed ball of radius `r`.
pub fn normal_form_samples(k: usize, radius: f64, grid: usize) -> Result<SampleSet, HullError> {
    let chart = build_normal_form(k).map_err(|e| HullError::Construction(e.to_string()))?;
    sample_chart(&chart, &GridSpec::cube(chart.params().len(), radius, grid).within_ball(radius))
}

pub fn probe_experiment(opts: &ProbeOptions) -> Result<ProbeReport, HullError> {
    let chart = build_normal_form(opts.k).map_err(|e| HullError::Construction(e.to_string()))?;
    let set = normal_form_samples(opts.k, opts.radius, opts.grid)?;
    let probes = probe_set(&chart, opts)?;
    let outcomes = pshcert_core::par::map_indexed(&probes, |_, p| search_degrees(&set, &p.point, &opts.degrees, &opts.exclusion));
    let mut results = Vec::with_capacity(probes.len());
    for (p, o) in probes.into_iter().zip(outcomes) {
        results.push((p, o?));
    }
    Ok(ProbeReport {
        provenance: set.provenance().to_string(),
        samples: set.len(),
        degrees: opts.degrees.clone(),
        results,
    })
}
