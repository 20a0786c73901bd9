//! Reproducible sample points in a ball, rounded to a dyadic grid so every
//! sample is an exact rational.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::constructions::AlgebraicSet;
use crate::scalar::{dyadic, fmt_rational, to_f64, Rational};

/// Bits of the dyadic rounding grid.
pub const DYADIC_BITS: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("sample count must be at least 1")]
    EmptyCount,
    #[error("tube width must be non-negative")]
    NegativeTube,
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("tube set lives in dimension {got}, samples in {expected}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    /// Regular grid on the enclosing cube, clipped to the ball.
    FullGrid,
    /// Halton sequence (cube coordinates for the direction, one more for the
    /// radius).
    Halton,
    /// Gaussian direction and uniform radius from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

impl Scheme {
    pub fn name(&self) -> String {
        match self {
            Scheme::FullGrid => "full-grid".into(),
            Scheme::Halton => "halton".into(),
            Scheme::Random { seed } => format!("random(seed={seed})"),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Scheme::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TubeSet {
    Point(Vec<Rational>),
    /// An affine algebraic set; distance is exact.
    Affine(AlgebraicSet),
    /// Floating samples of a non-affine set; distance is to the nearest one.
    ChartSamples { name: String, points: Vec<Vec<f64>> },
}

/// Points at distance `≤ eps` from `set` are treated as excluded; `eps = 0`
/// excludes the set itself.
#[derive(Debug, Clone)]
pub struct Tube {
    pub set: TubeSet,
    pub eps: Rational,
}

impl Tube {
    pub fn point(center: Vec<Rational>, eps: Rational) -> Self {
        Tube {
            set: TubeSet::Point(center),
            eps,
        }
    }

    pub fn affine(set: AlgebraicSet, eps: Rational) -> Self {
        Tube {
            set: TubeSet::Affine(set),
            eps,
        }
    }

    pub fn method(&self) -> String {
        match &self.set {
            TubeSet::Point(_) => "exact distance to a point".into(),
            TubeSet::Affine(s) => format!("exact distance to affine set {}", s.name()),
            TubeSet::ChartSamples { name, points } => {
                format!("float distance to {} samples of {name}", points.len())
            }
        }
    }

    fn dim(&self) -> Option<usize> {
        match &self.set {
            TubeSet::Point(c) => Some(c.len()),
            TubeSet::Affine(s) => Some(s.registry().len()),
            TubeSet::ChartSamples { points, .. } => points.first().map(|p| p.len()),
        }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        let eps2 = &self.eps * &self.eps;
        match &self.set {
            TubeSet::Point(c) => sq_dist(p, c) <= eps2,
            TubeSet::Affine(s) => s.sq_distance(p).map(|d| d <= eps2).unwrap_or(false),
            TubeSet::ChartSamples { points, .. } => {
                let pf: Vec<f64> = p.iter().map(to_f64).collect();
                let e = to_f64(&eps2);
                points.iter().any(|q| {
                    q.iter().zip(&pf).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= e
                })
            }
        }
    }
}

pub fn sq_dist(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .fold(Rational::zero(), |s, t| s + t)
}

#[derive(Debug, Clone)]
pub struct SampleSpec {
    pub center: Vec<Rational>,
    pub radius: Rational,
    pub count: usize,
    pub scheme: Scheme,
    pub tube: Option<Tube>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub index: usize,
    pub point: Vec<Rational>,
    pub in_tube: bool,
}

impl SampleSpec {
    pub fn new(
        center: Vec<Rational>,
        radius: Rational,
        count: usize,
        scheme: Scheme,
        tube: Option<Tube>,
    ) -> Result<Self, SampleError> {
        if count == 0 {
            return Err(SampleError::EmptyCount);
        }
        if radius <= Rational::zero() {
            return Err(SampleError::NonPositiveRadius);
        }
        if let Some(t) = &tube {
            if t.eps < Rational::zero() {
                return Err(SampleError::NegativeTube);
            }
            if let Some(d) = t.dim() {
                if d != center.len() {
                    return Err(SampleError::Dimension {
                        expected: center.len(),
                        got: d,
                    });
                }
            }
        }
        Ok(SampleSpec {
            center,
            radius,
            count,
            scheme,
            tube,
        })
    }

    /// Ball around the origin of `R^dim`.
    pub fn ball(dim: usize, radius: Rational, count: usize, scheme: Scheme) -> Result<Self, SampleError> {
        Self::new(vec![Rational::zero(); dim], radius, count, scheme, None)
    }

    pub fn with_tube(mut self, tube: Tube) -> Result<Self, SampleError> {
        self.tube = Some(tube);
        Self::new(self.center, self.radius, self.count, self.scheme, self.tube)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn describe(&self) -> String {
        let tube = match &self.tube {
            Some(t) => format!("eps={} ({})", fmt_rational(&t.eps), t.method()),
            None => "none".into(),
        };
        format!(
            "ball radius={} dim={} count={} scheme={} tube={}",
            fmt_rational(&self.radius),
            self.dim(),
            self.count,
            self.scheme.name(),
            tube
        )
    }

    /// Offsets in the unit ball, as floats, before rounding.
    fn unit_offsets(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        match &self.scheme {
            Scheme::FullGrid => {
                let m = ((self.count as f64).powf(1.0 / n as f64).ceil() as usize).max(2);
                let mut out = Vec::new();
                let mut idx = vec![0usize; n];
                'grid: loop {
                    let p: Vec<f64> = idx
                        .iter()
                        .map(|&i| -1.0 + 2.0 * i as f64 / (m - 1) as f64)
                        .collect();
                    if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                        out.push(p);
                        if out.len() == self.count {
                            break;
                        }
                    }
                    for slot in idx.iter_mut() {
                        *slot += 1;
                        if *slot < m {
                            continue 'grid;
                        }
                        *slot = 0;
                    }
                    break;
                }
                out
            }
            Scheme::Halton => {
                let bases = first_primes(n + 1);
                let mut out = Vec::with_capacity(self.count);
                let mut i = 1u64;
                while out.len() < self.count {
                    let cube: Vec<f64> = bases[..n]
                        .iter()
                        .map(|&b| 2.0 * radical_inverse(i, b) - 1.0)
                        .collect();
                    let radius = radical_inverse(i, bases[n]);
                    i += 1;
                    let norm = cube.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm < 1e-9 {
                        continue;
                    }
                    out.push(cube.iter().map(|v| v / norm * radius).collect());
                }
                out
            }
            Scheme::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(self.count);
                while out.len() < self.count {
                    let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    let radius: f64 = rng.random();
                    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm < 1e-12 {
                        continue;
                    }
                    out.push(dir.iter().map(|v| v / norm * radius).collect());
                }
                out
            }
        }
    }

    /// The sample points, in a fixed order.
    pub fn generate(&self) -> Vec<Sample> {
        let r = to_f64(&self.radius);
        let r2 = &self.radius * &self.radius;
        self.unit_offsets()
            .into_iter()
            .enumerate()
            .map(|(index, unit)| {
                let mut scale = r;
                let point = loop {
                    let p: Vec<Rational> = unit
                        .iter()
                        .zip(&self.center)
                        .map(|(v, c)| c + dyadic(v * scale, DYADIC_BITS))
                        .collect();
                    if sq_dist(&p, &self.center) <= r2 {
                        break p;
                    }
                    scale *= 0.999;
                };
                let in_tube = self.tube.as_ref().is_some_and(|t| t.contains(&point));
                Sample {
                    index,
                    point,
                    in_tube,
                }
            })
            .collect()
    }
}

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    out
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Exact rational point with small denominators, for kernel and identity
/// checks.
pub fn random_rational_point(rng: &mut ChaCha8Rng, dim: usize, max_den: i64) -> Vec<Rational> {
    (0..dim)
        .map(|_| {
            let den = rng.random_range(1..=max_den);
            let num = rng.random_range(-2 * den..=2 * den);
            Rational::new(num.into(), den.into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn halton_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn samples_are_inside_and_reproducible() {
        for scheme in [Scheme::Halton, Scheme::Random { seed: 7 }, Scheme::FullGrid] {
            let spec = SampleSpec::ball(4, rat(1, 10), 200, scheme).unwrap();
            let a = spec.generate();
            assert_eq!(a, spec.generate());
            assert!(!a.is_empty() && a.len() <= 200);
            for s in &a {
                assert!(sq_dist(&s.point, &spec.center) <= rat(1, 100));
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert_eq!(
            SampleSpec::ball(2, rat(1, 10), 0, Scheme::Halton).unwrap_err(),
            SampleError::EmptyCount
        );
        let spec = SampleSpec::ball(2, rat(1, 10), 3, Scheme::Halton).unwrap();
        assert_eq!(
            spec.with_tube(Tube::point(vec![rat(0, 1); 2], rat(-1, 2))).unwrap_err(),
            SampleError::NegativeTube
        );
    }

    #[test]
    fn point_tube() {
        let spec = SampleSpec::ball(3, rat(1, 10), 300, Scheme::Random { seed: 1 })
            .unwrap()
            .with_tube(Tube::point(vec![rat(0, 1); 3], rat(1, 20)))
            .unwrap();
        let s = spec.generate();
        assert!(s.iter().any(|p| p.in_tube) && s.iter().any(|p| !p.in_tube));
        for p in s {
            assert_eq!(p.in_tube, sq_dist(&p.point, &spec.center) <= rat(1, 400));
        }
    }
}
