//! Finite floating-point samples of a compact set, with CSV round-tripping.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use pshcert_core::constructions::ManifoldChart;

use crate::HullError;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    points: Vec<Vec<Complex64>>,
    provenance: String,
}

impl SampleSet {
    pub fn new(dim: usize, points: Vec<Vec<Complex64>>, provenance: impl Into<String>) -> Result<Self, HullError> {
        let provenance = provenance.into();
        if dim == 0 || points.is_empty() {
            return Err(HullError::EmptySampleSet);
        }
        if provenance.trim().is_empty() {
            return Err(HullError::Invalid("sample set without provenance".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(HullError::Invalid(format!("point of dimension {} in a set of dimension {dim}", p.len())));
            }
            if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(HullError::Invalid("non-finite coordinate".into()));
            }
        }
        Ok(SampleSet { dim, points, provenance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Union of two sets of the same dimension.
    pub fn union(&self, other: &SampleSet) -> Result<SampleSet, HullError> {
        if self.dim != other.dim {
            return Err(HullError::Invalid("dimension mismatch in union".into()));
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        SampleSet::new(self.dim, points, format!("{} + {}", self.provenance, other.provenance))
    }

    /// Smallest Euclidean distance from `p` to the samples.
    pub fn distance_to(&self, p: &[Complex64]) -> f64 {
        self.points.iter().map(|x| dist(x, p)).fold(f64::INFINITY, f64::min)
    }

    /// One point per row, `2n` real columns; a `#` comment line carries
    /// the dimension and provenance.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), HullError> {
        writeln!(out, "# dim={} provenance={}", self.dim, self.provenance.replace('\n', " "))?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(2 * self.dim);
        for j in 1..=self.dim {
            header.push(format!("re{j}"));
            header.push(format!("im{j}"));
        }
        w.write_record(&header)?;
        for p in &self.points {
            let row: Vec<String> = p.iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self, HullError> {
        let mut first = String::new();
        input.read_line(&mut first)?;
        let meta = first
            .trim_end()
            .strip_prefix("# ")
            .ok_or_else(|| HullError::Invalid("missing '# dim=… provenance=…' line".into()))?;
        let (dim_part, provenance) = meta
            .split_once(' ')
            .and_then(|(d, p)| Some((d.strip_prefix("dim=")?, p.strip_prefix("provenance=")?)))
            .ok_or_else(|| HullError::Invalid(format!("bad header line '{meta}'")))?;
        let dim: usize = dim_part
            .parse()
            .map_err(|_| HullError::Invalid(format!("bad dimension '{dim_part}'")))?;
        let mut r = csv::Reader::from_reader(input);
        if r.headers()?.len() != 2 * dim {
            return Err(HullError::Invalid(format!("expected {} columns", 2 * dim)));
        }
        let mut points = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|_| HullError::Invalid(format!("bad number '{s}'"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != 2 * dim {
                return Err(HullError::Invalid(format!("row with {} columns", vals.len())));
            }
            points.push(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
        }
        SampleSet::new(dim, points, provenance)
    }
}

/// Shortest representation that parses back to the same value.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub(crate) fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// One axis of a parameter grid: `points` equally spaced values in
/// `[lo, hi]`, or the midpoint when `points == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => vec![],
            1 => vec![(self.lo + self.hi) / 2.0],
            n => (0..n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Product grid over the chart parameters, optionally cut to a ball
/// around the origin of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
    pub ball: Option<f64>,
}

impl GridSpec {
    /// `points` values per parameter in `[−half_width, half_width]`.
    pub fn cube(params: usize, half_width: f64, points: usize) -> Self {
        GridSpec {
            axes: vec![Axis { lo: -half_width, hi: half_width, points }; params],
            ball: None,
        }
    }

    pub fn within_ball(mut self, radius: f64) -> Self {
        self.ball = Some(radius);
        self
    }

    fn describe(&self) -> String {
        let axes: Vec<String> = self
            .axes
            .iter()
            .map(|a| format!("[{}, {}]x{}", fmt_f64(a.lo), fmt_f64(a.hi), a.points))
            .collect();
        let mut s = axes.join(" ");
        if let Some(r) = self.ball {
            s.push_str(&format!(" ball {}", fmt_f64(r)));
        }
        s
    }
}

/// Images of a parameter grid under a chart, evaluated in floating point.
pub fn sample_chart(chart: &ManifoldChart, grid: &GridSpec) -> Result<SampleSet, HullError> {
    let nparams = chart.params().len();
    if grid.axes.len() != nparams {
        return Err(HullError::Invalid(format!(
            "grid has {} axes, chart '{}' has {nparams} parameters",
            grid.axes.len(),
            chart.name()
        )));
    }
    if grid.axes.iter().any(|a| a.points == 0) {
        return Err(HullError::Invalid("empty grid axis".into()));
    }
    let axes: Vec<Vec<f64>> = grid.axes.iter().map(Axis::values).collect();
    let mut idx = vec![0usize; nparams];
    let mut points = Vec::new();
    'grid: loop {
        let params: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        let z = chart_point(chart, &params)?;
        if grid.ball.is_none_or(|r| norm(&z) <= r) {
            points.push(z);
        }
        for (d, i) in idx.iter_mut().enumerate() {
            *i += 1;
            if *i < axes[d].len() {
                continue 'grid;
            }
            *i = 0;
        }
        break;
    }
    if points.is_empty() {
        return Err(HullError::EmptySampleSet);
    }
    SampleSet::new(
        chart.ambient().dim(),
        points,
        format!("chart {} grid {}", chart.name(), grid.describe()),
    )
}

/// Ambient complex point of the chart at real parameters.
pub fn chart_point(chart: &ManifoldChart, params: &[f64]) -> Result<Vec<Complex64>, HullError> {
    chart
        .components()
        .iter()
        .map(|c| c.eval_f64(params).map_err(|e| HullError::Construction(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use pshcert_core::constructions::{build_normal_form, build_s_alpha};
    use pshcert_core::scalar::rat;

    #[test]
    fn one_point_grid_is_the_origin() {
        let chart = build_normal_form(2).unwrap();
        let s = sample_chart(&chart, &GridSpec::cube(4, 0.0, 1)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.dim(), 5);
        assert!(s.points()[0].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn full_grid_count() {
        let chart = build_normal_form(2).unwrap();
        let s = sample_chart(&chart, &GridSpec::cube(4, 0.1, 5)).unwrap();
        assert_eq!(s.len(), 625);
        assert!(s.provenance().contains("normal_form_k2"));
    }

    #[test]
    fn s_alpha_slice_satisfies_the_w_equation() {
        let chart = build_s_alpha(2, &rat(1, 4)).unwrap();
        let mut grid = GridSpec::cube(4, 0.5, 9);
        grid.axes[2] = Axis { lo: 0.0, hi: 0.0, points: 1 };
        grid.axes[3] = Axis { lo: 0.0, hi: 0.0, points: 1 };
        let s = sample_chart(&chart, &grid).unwrap();
        for p in s.points() {
            let z = p[0];
            let w = 0.125 * z.norm_sqr() + 0.25 * (z * z + z.conj() * z.conj());
            assert!((p[3] - w).norm() < 1e-15);
            assert_eq!(p[1].norm() + p[2].norm(), 0.0);
        }
    }

    #[test]
    fn csv_roundtrip() {
        let s = SampleSet::new(
            2,
            vec![
                vec![Complex64::new(0.1, -0.2), Complex64::new(1.0 / 3.0, 0.0)],
                vec![Complex64::new(-1e-17, 5.0), Complex64::new(0.0, 0.0)],
            ],
            "explicit list",
        )
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SampleSet::read_csv(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_empty_and_unlabelled() {
        assert!(SampleSet::new(1, vec![], "x").is_err());
        assert!(SampleSet::new(1, vec![vec![Complex64::new(0.0, 0.0)]], " ").is_err());
    }
}
