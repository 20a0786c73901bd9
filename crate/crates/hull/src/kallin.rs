//! Separation of two disjoint closed balls by a degree-1 polynomial,
//! followed by exclusion certificates for points between them.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chebyshev::{fmt_point, search_degrees, ExclusionOptions, HullOutcome};
use crate::sampleset::{dist, fmt_f64, norm, SampleSet};
use crate::HullError;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<Complex64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KallinOptions {
    pub sphere_samples: usize,
    pub interior_samples: usize,
    pub seed: u64,
    /// Query positions as fractions of the gap between the balls.
    pub gap_fractions: Vec<f64>,
    pub degrees: Vec<usize>,
    pub exclusion: ExclusionOptions,
}

impl Default for KallinOptions {
    fn default() -> Self {
        KallinOptions {
            sphere_samples: 400,
            interior_samples: 100,
            seed: 7,
            gap_fractions: vec![1.0 / 3.0, 0.5, 2.0 / 3.0],
            degrees: vec![1, 2, 3, 4],
            exclusion: ExclusionOptions::default(),
        }
    }
}

/// Image disk of one ball under the separating functional.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageDisk {
    pub center: Complex64,
    /// `r / |c₂ − c₁|`, exact for the full ball.
    pub radius: f64,
    /// Largest `|Q(x) − center|` over the samples.
    pub sampled_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KallinReport {
    pub balls: [Ball; 2],
    /// `Q(z) = Σ q_j (z_j − c₁_j)`.
    pub q: Vec<Complex64>,
    pub disks: [ImageDisk; 2],
    pub separated: bool,
    pub queries: Vec<(Vec<Complex64>, HullOutcome)>,
    pub samples: usize,
}

impl KallinReport {
    pub fn all_excluded(&self) -> bool {
        self.queries.iter().all(|(_, o)| o.is_excluded())
    }

    pub fn passed(&self) -> bool {
        self.separated && self.all_excluded()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: kallin");
        let _ = writeln!(s, "verdict: {}", if self.passed() { "pass" } else { "fail" });
        for (i, b) in self.balls.iter().enumerate() {
            let _ = writeln!(s, "ball{}: center {} radius {}", i + 1, fmt_point(&b.center), fmt_f64(b.radius));
        }
        let _ = writeln!(s, "samples: {}", self.samples);
        let _ = writeln!(s, "separating_polynomial: degree 1, coefficients {}", fmt_point(&self.q));
        for (i, d) in self.disks.iter().enumerate() {
            let _ = writeln!(
                s,
                "image_disk{}: center {} radius {} sampled_radius {}",
                i + 1,
                fmt_point(&[d.center]),
                fmt_f64(d.radius),
                fmt_f64(d.sampled_radius)
            );
        }
        let _ = writeln!(s, "image_disks_disjoint: {}", self.separated);
        for (i, (p, o)) in self.queries.iter().enumerate() {
            let deg = o.certificate().map(|c| c.degree.to_string()).unwrap_or_else(|| "-".into());
            let margin = o.certificate().map(|c| fmt_f64(c.margin)).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "query{}: {} verdict {} degree {} margin {}", i + 1, fmt_point(p), o.verdict(), deg, margin);
        }
        s
    }
}

/// Deterministic samples of the boundary sphere and interior of a ball.
pub fn sample_ball(ball: &Ball, sphere: usize, interior: usize, seed: u64) -> Result<SampleSet, HullError> {
    let n = ball.center.len();
    if n == 0 || !(ball.radius > 0.0) {
        return Err(HullError::Invalid("ball needs a dimension and a positive radius".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direction = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
            .collect();
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return v.into_iter().map(|z| z / r).collect::<Vec<_>>();
        }
    };
    let mut points = Vec::with_capacity(sphere + interior + 1);
    points.push(ball.center.clone());
    for i in 0..sphere + interior {
        let u = direction(&mut rng);
        let r = if i < sphere {
            ball.radius
        } else {
            ball.radius * rng.random_range(0.0..1.0f64).powf(1.0 / (2 * n) as f64)
        };
        points.push(ball.center.iter().zip(&u).map(|(c, d)| c + d * r).collect());
    }
    SampleSet::new(
        n,
        points,
        format!("ball center {} radius {} seed {seed}", fmt_point(&ball.center), fmt_f64(ball.radius)),
    )
}

pub fn kallin_separation_demo(balls: [Ball; 2], opts: &KallinOptions) -> Result<KallinReport, HullError> {
    let [b1, b2] = &balls;
    if b1.center.len() != b2.center.len() {
        return Err(HullError::Invalid("balls in different dimensions".into()));
    }
    let gap = dist(&b1.center, &b2.center);
    if gap <= b1.radius + b2.radius {
        return Err(HullError::BallsIntersect {
            distance: gap,
            radii: b1.radius + b2.radius,
        });
    }
    // Q(c₁) = 0, Q(c₂) = 1
    let d2 = gap * gap;
    let q: Vec<Complex64> = b1.center.iter().zip(&b2.center).map(|(a, b)| (b - a).conj() / d2).collect();
    let eval_q = |z: &[Complex64]| -> Complex64 { z.iter().zip(&b1.center).zip(&q).map(|((z, c), q)| q * (z - c)).sum() };

    let s1 = sample_ball(b1, opts.sphere_samples, opts.interior_samples, opts.seed)?;
    let s2 = sample_ball(b2, opts.sphere_samples, opts.interior_samples, opts.seed.wrapping_add(1))?;
    let disk = |b: &Ball, s: &SampleSet| {
        let center = eval_q(&b.center);
        ImageDisk {
            center,
            radius: b.radius / gap,
            sampled_radius: s.points().iter().map(|x| (eval_q(x) - center).norm()).fold(0.0, f64::max),
        }
    };
    let disks = [disk(b1, &s1), disk(b2, &s2)];
    let separated = (disks[0].center - disks[1].center).norm() > disks[0].radius + disks[1].radius
        && disks.iter().all(|d| d.sampled_radius <= d.radius * (1.0 + 1e-12));
    let set = s1.union(&s2)?;

    let lo = b1.radius / gap;
    let hi = 1.0 - b2.radius / gap;
    let queries: Vec<Vec<Complex64>> = opts
        .gap_fractions
        .iter()
        .map(|f| {
            let t = lo + (hi - lo) * f;
            b1.center.iter().zip(&b2.center).map(|(a, b)| a + (b - a) * t).collect()
        })
        .collect();
    let outcomes = pshcert_core::par::map_indexed(&queries, |_, p| search_degrees(&set, p, &opts.degrees, &opts.exclusion));
    let mut out = Vec::with_capacity(queries.len());
    for (p, o) in queries.into_iter().zip(outcomes) {
        out.push((p, o?));
    }
    Ok(KallinReport {
        balls,
        q,
        disks,
        separated,
        queries: out,
        samples: set.len(),
    })
}

/// The default configuration: balls of radius 1/4 at `0` and `(1, 0)` in `C²`.
pub fn default_balls() -> [Ball; 2] {
    let c = |x: f64| vec![Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)];
    [Ball { center: c(0.0), radius: 0.25 }, Ball { center: c(1.0), radius: 0.25 }]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_samples_stay_in_the_ball() {
        let b = Ball { center: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)], radius: 0.5 };
        let s = sample_ball(&b, 50, 50, 3).unwrap();
        assert_eq!(s.len(), 101);
        for (i, p) in s.points().iter().enumerate() {
            let r = dist(p, &b.center);
            assert!(r <= 0.5 + 1e-12);
            if (1..=50).contains(&i) {
                assert!((r - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn overlapping_balls_are_rejected() {
        let mut balls = default_balls();
        balls[0].radius = 0.75;
        balls[1].radius = 0.75;
        assert!(matches!(
            kallin_separation_demo(balls, &KallinOptions::default()),
            Err(HullError::BallsIntersect { .. })
        ));
    }
}
