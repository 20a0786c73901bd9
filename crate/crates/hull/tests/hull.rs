use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use pshcert_core::constructions::build_normal_form;
use pshcert_hull::fiber::disk_grid;
use pshcert_hull::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn circle(n: usize) -> SampleSet {
    let pts = (0..n).map(|k| vec![Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)]).collect();
    SampleSet::new(1, pts, "unit circle, 100 points").unwrap()
}

#[test]
fn outside_the_circle_is_excluded_at_degree_one() {
    let x = circle(100);
    let cert = hull_excludes(&x, &[c(2.0, 0.0)], 1, &ExclusionOptions::default())
        .unwrap()
        .certificate()
        .cloned()
        .expect("certificate");
    // with P(2) = 1 the best degree-1 polynomial is z/2, so the margin is at most 1/2
    assert!(cert.margin > 0.0 && cert.margin <= 0.5 + 1e-9);
    assert!((cert.recheck(&x).unwrap() - cert.margin).abs() < 1e-12);
    assert_eq!(cert.effective_degree(), 1);
    assert!(cert.render().contains("coefficients: 2"));
}

#[test]
fn centre_of_the_circle_gets_no_certificate() {
    let x = circle(100);
    for d in 1..=4 {
        let out = hull_excludes(&x, &[c(0.0, 0.0)], d, &ExclusionOptions::default()).unwrap();
        match out {
            HullOutcome::NoCertificate(n) => assert!(n.best_max >= 1.0 - 1e-9, "{n:?}"),
            HullOutcome::Excluded(c) => panic!("excluded the centre: {}", c.render()),
        }
    }
}

#[test]
fn off_manifold_point_in_the_zeta_direction() {
    let x = normal_form_samples(2, 0.1, 7).unwrap();
    let mut p = vec![c(0.0, 0.0); 5];
    p[4] = c(0.0, 0.05);
    let out = hull_excludes(&x, &p, 4, &ExclusionOptions::default()).unwrap();
    let cert = out.certificate().expect("certificate");
    cert.recheck(&x).unwrap();
}

#[test]
fn certificates_lift_to_higher_degree() {
    let x = circle(60);
    let cert = hull_excludes(&x, &[c(0.0, 1.5)], 2, &ExclusionOptions::default())
        .unwrap()
        .certificate()
        .cloned()
        .unwrap();
    for d in 2..6 {
        let lifted = cert.at_degree(d).unwrap();
        assert_eq!(lifted.degree, d);
        lifted.recheck(&x).unwrap();
    }
    assert!(cert.at_degree(1).is_none());
}

#[test]
fn tampered_certificate_fails_recheck() {
    let x = circle(60);
    let mut cert = hull_excludes(&x, &[c(3.0, 0.0)], 1, &ExclusionOptions::default())
        .unwrap()
        .certificate()
        .cloned()
        .unwrap();
    cert.coefficients[1] *= 5.0;
    assert!(matches!(cert.recheck(&x), Err(HullError::Recheck { .. })));
}

#[test]
fn kallin_default_passes() {
    let r = kallin_separation_demo(default_balls(), &KallinOptions::default()).unwrap();
    assert!(r.passed(), "{}", r.render());
    // Q = z₁ and image disks of radius 1/4 around 0 and 1
    assert!((r.q[0] - c(1.0, 0.0)).norm() < 1e-15 && r.q[1].norm() < 1e-15);
    assert!((r.disks[0].radius - 0.25).abs() < 1e-15 && (r.disks[1].center - c(1.0, 0.0)).norm() < 1e-15);
    let mid = r.queries.iter().find(|(p, _)| (p[0] - c(0.5, 0.0)).norm() < 1e-12).unwrap();
    assert!(mid.1.is_excluded());
}

#[test]
fn midpoint_is_not_excluded_by_linear_polynomials() {
    // P(p + h) + P(p − h) = 2 P(p) for linear P and the union is symmetric about p
    let b = default_balls();
    let x = kallin::sample_ball(&b[0], 200, 0, 1).unwrap();
    let mirrored: Vec<Vec<Complex64>> = x.points().iter().map(|p| vec![c(1.0, 0.0) - p[0], -p[1]]).collect();
    let y = SampleSet::new(2, mirrored, "mirror").unwrap();
    let set = x.union(&y).unwrap();
    let out = hull_excludes(&set, &[c(0.5, 0.0), c(0.0, 0.0)], 1, &ExclusionOptions::default()).unwrap();
    assert!(!out.is_excluded());
}

#[test]
fn intersecting_balls_are_an_error() {
    let mut b = default_balls();
    b[0].radius = 0.75;
    b[1].radius = 0.75;
    assert!(matches!(kallin_separation_demo(b, &KallinOptions::default()), Err(HullError::BallsIntersect { .. })));
}

#[test]
fn fiber_table() {
    let t = fiber_density_experiment(&[0, 2, 4, 8, 12], 64).unwrap();
    assert!(t.is_monotone(1e-12));
    let pts = disk_grid(64);
    let mean: Complex64 = pts.iter().map(|z| z.conj()).sum::<Complex64>() / pts.len() as f64;
    let e0 = (pts.iter().map(|z| (z.conj() - mean).norm_sqr()).sum::<f64>() / pts.len() as f64).sqrt();
    assert!((t.error_at(0).unwrap() - e0).abs() < 1e-12);
    assert!(t.error_at(12).unwrap() < t.error_at(0).unwrap());
    assert!(fiber_density_experiment(&[], 8).is_err());
}

#[test]
fn probe_set_is_mostly_excluded() {
    let r = probe_experiment(&ProbeOptions::default()).unwrap();
    assert_eq!(r.results.len(), 100);
    assert!(r.fraction_excluded() >= 0.95, "{}", r.render());
    let x = normal_form_samples(2, 0.1, 9).unwrap();
    for (_, o) in r.results.iter().take(10) {
        if let Some(cert) = o.certificate() {
            cert.recheck(&x).unwrap();
        }
    }
}

#[test]
fn sample_set_csv_file_roundtrip() {
    let chart = build_normal_form(2).unwrap();
    let s = sample_chart(&chart, &GridSpec::cube(4, 0.1, 3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m2.csv");
    s.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let back = SampleSet::read_csv(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(back, s);
}

fn finite_set() -> impl Strategy<Value = SampleSet> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..30)
        .prop_map(|v| SampleSet::new(1, v.into_iter().map(|(a, b)| vec![c(a, b)]).collect(), "random").unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certificates_recheck(set in finite_set(), re in -3.0f64..3.0, im in -3.0f64..3.0, d in 1usize..4) {
        let p = [c(re, im)];
        prop_assume!(set.distance_to(&p) > 1e-3);
        match hull_excludes(&set, &p, d, &ExclusionOptions::default()).unwrap() {
            HullOutcome::Excluded(cert) => {
                prop_assert!(cert.margin > 0.0);
                let m = cert.recheck(&set).unwrap();
                prop_assert!((m - cert.margin).abs() <= 1e-9 * cert.margin.abs().max(1.0));
            }
            HullOutcome::NoCertificate(n) => prop_assert!(n.render().contains("one-sided")),
        }
    }

    #[test]
    fn points_beyond_the_set_are_excluded(set in finite_set(), angle in 0.0f64..std::f64::consts::TAU) {
        // outside the smallest origin-centred disk containing the set a
        // degree-1 polynomial always works
        let r = set.points().iter().map(|p| p[0].norm()).fold(0.0, f64::max);
        let p = [Complex64::from_polar(r * 1.5 + 0.1, angle)];
        prop_assert!(hull_excludes(&set, &p, 1, &ExclusionOptions::default()).unwrap().is_excluded());
    }

    #[test]
    fn fiber_errors_never_increase(grid in 8usize..24) {
        prop_assert!(fiber_density_experiment(&[0, 1, 2, 3, 4, 6], grid).unwrap().is_monotone(1e-12));
    }
}
