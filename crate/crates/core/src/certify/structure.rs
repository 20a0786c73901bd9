use std::time::Instant;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{find_nonzero_point, CertReport, ReportParams, Verdict, Witness};
use crate::constructions::{
    build_f_alpha_sigma, build_q_alpha, intersection_linear_rows, intersection_rows_at_z_zero,
    kernel_basis, kernel_basis_as_printed, linear_rows_matrix, unit_row, AlgebraicSet,
    CoefficientSystem, ConstructionError, ManifoldChart, ShiftConvention,
};
use crate::linalg::{psd_certificate, GaussMatrix, PsdVerdict};
use crate::poly::SparsePoly;
use crate::sampling::{random_rational_point, SampleSpec};
use crate::scalar::{fmt_gauss, fmt_rational, int, rat, real, GaussRational, Rational};
use crate::sheared::ShearedCoords;
use crate::wirtinger::{complex_hessian, HermitianPolyMatrix, HoloPolyMap};

/// Each polynomial (already written over the chart parameters) must be
/// identically zero. A failure reports the ambient point of the chart.
pub fn zero_set_check(
    claim: &str,
    chart: &ManifoldChart,
    pulled: &[(String, SparsePoly)],
    params: ReportParams,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let mut r = CertReport::new(claim, params);
    r.note(format!("chart {} with {} parameters", chart.name(), chart.params().len()));
    for (label, f) in pulled {
        r.note(format!("{label}: {} terms after pulling back", f.num_terms()));
        if f.is_zero() {
            continue;
        }
        match find_nonzero_point(f) {
            Some(p) => {
                let v = f.eval(&p)?;
                r.fail(Witness::new(label.clone(), chart.point(&p)?, fmt_gauss(&v)));
            }
            None => r.fail(Witness::new(label.clone(), Vec::new(), f.to_canonical_string())),
        }
    }
    Ok(r.finish(start))
}

/// The image of the chart (optionally pushed through `map`) satisfies every
/// equation of `set`.
pub fn inclusion_check(
    claim: &str,
    chart: &ManifoldChart,
    map: Option<&HoloPolyMap>,
    set: &AlgebraicSet,
    params: ReportParams,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let subst = match map {
        Some(f) => chart.push(f)?,
        None => chart.real_components(),
    };
    let pulled = set
        .equations()
        .iter()
        .enumerate()
        .map(|(i, eq)| Ok((format!("{} equation {i}", set.name()), eq.compose(&subst)?)))
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let mut r = zero_set_check(claim, chart, &pulled, params)?;
    r.note(format!("target set {} with {} equations", set.name(), set.equations().len()));
    Ok(r.finish(start))
}

fn same_span(a: &[Vec<GaussRational>], b: &[Vec<GaussRational>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let ra = GaussMatrix::from_rows(a.to_vec());
    let rb = GaussMatrix::from_rows(b.to_vec());
    let mut stacked = a.to_vec();
    stacked.extend_from_slice(b);
    let rs = GaussMatrix::from_rows(stacked).rank();
    ra.rank() == a.len() && rb.rank() == b.len() && rs == a.len()
}

/// Kernel of `J_C f_α^σ` at random rational points against the closed form
/// of the convention. For the averaged convention the closed form is also
/// compared to the printed display.
pub fn kernel_check(
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
    points: usize,
    seed: u64,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let f = build_f_alpha_sigma(alpha, sigma, k, conv)?;
    let expected = kernel_basis(alpha, sigma, k, conv)?;
    let mut r = CertReport::new(
        format!("kernel[{},{sigma}]", fmt_rational(alpha)),
        ReportParams {
            k: Some(k),
            alpha: Some(alpha.clone()),
            seed: Some(seed),
            scheme: Some("random rational".into()),
            ..Default::default()
        },
    );
    r.note(format!("convention {}", conv.name()));
    if conv == ShiftConvention::Averaged {
        let printed = kernel_basis_as_printed(alpha, sigma, k)?;
        r.note(format!("closed form equals printed display: {}", same_span(&expected, &printed)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = f.source().real_registry().len();
    for i in 0..points {
        let p = random_rational_point(&mut rng, dim, 7);
        let z = f.source().complex_point(&p);
        let ker = f.jacobian_kernel_at(&z)?;
        r.samples += 1;
        if !same_span(&ker, &expected) {
            r.fail(Witness::new(
                format!("point {i}: kernel dimension {}", ker.len()),
                p,
                format!("expected dimension {}", expected.len()),
            ));
        }
    }
    Ok(r.finish(start))
}

/// `K* · Hess_C g · K` positive definite on samples, `K` the kernel basis of
/// `J_C f_α^σ`.
pub fn kernel_g_strict_check(
    g: &SparsePoly,
    alpha: &Rational,
    sigma: usize,
    k: usize,
    conv: ShiftConvention,
    spec: &SampleSpec,
    params: ReportParams,
) -> Result<CertReport, ConstructionError> {
    let f = build_f_alpha_sigma(alpha, sigma, k, conv)?;
    let hg: HermitianPolyMatrix = complex_hessian(g, f.source())?;
    let kmat = GaussMatrix::from_rows(kernel_basis(alpha, sigma, k, conv)?).conj_transpose();
    let kstar = kmat.conj_transpose();
    let mut r = super::certify_psd_on_samples(
        &format!("kernel.g_strict[{},{sigma}]", fmt_rational(alpha)),
        params,
        spec,
        |p| Ok(kstar.mul(&hg.eval(p)?.mul(&kmat))),
    );
    r.note(format!("restricted to the {}-dimensional kernel", kmat.cols()));
    Ok(r)
}

/// The `X` sets for `α ≠ β` meet only at the origin. The first equations,
/// the differences of the second equations and `Im w = 0` are linear; if
/// `x` and `y` lie in their span then `z = 0`, after which the second
/// equations become linear and must cut out a point.
pub fn intersection_check(
    alpha: &Rational,
    beta: &Rational,
    k: usize,
    conv: ShiftConvention,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let mut r = CertReport::new(
        "intersection.origin",
        ReportParams {
            k: Some(k),
            alpha: Some(alpha.clone()),
            ..Default::default()
        },
    );
    r.note(format!("alpha = {}, beta = {}", fmt_rational(alpha), fmt_rational(beta)));
    if alpha == beta {
        r.fail(Witness::new("alpha equals beta", Vec::new(), "-"));
        return Ok(r.finish(start));
    }
    let rows = intersection_linear_rows(alpha, beta, k, conv)?;
    let reg = rows[0].registry().clone();
    let n = reg.len();
    let m = linear_rows_matrix(&rows)?;
    let rank = m.rank();
    r.note(format!("linear rows = {}, rank = {rank}", rows.len()));
    for name in ["x", "y"] {
        let mut with = m.clone();
        let idx = reg.try_index_of(name)?;
        let mut all: Vec<Vec<GaussRational>> = (0..with.rows()).map(|i| with.row(i).to_vec()).collect();
        all.push(unit_row(n, idx).into_iter().map(real).collect());
        with = GaussMatrix::from_rows(all);
        let in_span = with.rank() == rank;
        r.note(format!("{name} in span: {in_span}"));
        if !in_span {
            r.fail(Witness::new(format!("{name} not forced to zero"), Vec::new(), "-"));
        }
    }
    let mut second = rows.clone();
    second.extend(intersection_rows_at_z_zero(alpha, k, conv)?);
    for name in ["x", "y"] {
        let mut e = vec![0u32; n];
        e[reg.try_index_of(name)?] = 1;
        second.push(SparsePoly::monomial(&reg, &e, real(int(1)))?);
    }
    let full = linear_rows_matrix(&second)?.rank();
    r.note(format!("rank with z = 0 and the second equations = {full} of {n}"));
    if full != n {
        r.fail(Witness::new("positive-dimensional intersection", Vec::new(), format!("rank {full}")));
    }
    Ok(r.finish(start))
}

/// `Hess_C Q_α` at points of `S_α` with `x = y = u = 0`: positive
/// semidefinite, with eigenvalue `1/4` of multiplicity at least `2k − 2`.
pub fn hess_q_spectrum_check(
    sys: &CoefficientSystem,
    k: usize,
    points: &[Vec<Rational>],
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let sc = ShearedCoords::new(k, sys.alpha.clone())?;
    let q = sc.to_raw(&build_q_alpha(sys, k)?)?;
    let h = complex_hessian(&q, sc.raw())?;
    let mut r = CertReport::new(
        format!("hess_q.spectrum[{}]", fmt_rational(&sys.alpha)),
        ReportParams {
            k: Some(k),
            alpha: Some(sys.alpha.clone()),
            c: Some(sys.c.clone()),
            ..Default::default()
        },
    );
    let quarter = real(rat(1, 4));
    for p in points {
        r.samples += 1;
        let hp = h.eval(p)?;
        let cert = psd_certificate(&hp, false);
        if let PsdVerdict::Violated { mask, minor } = &cert.verdict {
            r.fail(Witness::new(format!("principal minor {mask:#b}"), p.clone(), fmt_rational(minor)));
        }
        let mut shifted = hp.clone();
        for i in 0..shifted.rows() {
            shifted.set(i, i, hp.get(i, i) - &quarter);
        }
        let nullity = shifted.cols() - shifted.rank();
        r.note(format!("multiplicity of 1/4 = {nullity}, kernel dimension = {}", hp.cols() - hp.rank()));
        if nullity < 2 * k - 2 {
            r.fail(Witness::new("eigenvalue 1/4 multiplicity", p.clone(), nullity.to_string()));
        }
        r.min_minor = super::min_opt(r.min_minor.take(), Some(cert.min_minor));
    }
    if r.samples == 0 {
        r.verdict = Verdict::Failed;
        r.note("no points");
    }
    Ok(r.finish(start))
}

/// The origin of `C^{2k}` and a point of `S_α` with `x = y = u = 0` and
/// nonzero `u_j`.
pub fn s_alpha_axis_points(k: usize) -> Vec<Vec<Rational>> {
    let n = 4 * k;
    let origin = vec![Rational::zero(); n];
    let mut other = origin.clone();
    for j in 0..2 * k - 2 {
        other[2 + 2 * j] = rat(j as i64 + 1, 3);
    }
    vec![origin, other]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_m_alpha_sigma, build_normal_form, build_s_alpha, build_rho_alpha, s_alpha_equations};

    #[test]
    fn rho_vanishes_on_s_alpha() {
        let sys = CoefficientSystem::half_bound(rat(1, 4)).unwrap();
        let chart = build_s_alpha(2, &sys.alpha).unwrap();
        let rho = build_rho_alpha(&sys, 2).unwrap();
        let pulled = vec![("rho".to_string(), chart.pull(&rho).unwrap())];
        let r = zero_set_check("z", &chart, &pulled, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
        let bad = vec![("one".to_string(), SparsePoly::one(chart.params()))];
        let r = zero_set_check("z", &chart, &bad, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Failed);
    }

    #[test]
    fn m_chart_maps_into_s_alpha() {
        let a = rat(1, 4);
        let (chart, _) = build_m_alpha_sigma(&a, 1, 2, ShiftConvention::Summed).unwrap();
        let f = build_f_alpha_sigma(&a, 1, 2, ShiftConvention::Summed).unwrap();
        let s = s_alpha_equations(2, &a).unwrap();
        let r = inclusion_check("i", &chart, Some(&f), &s, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
        let nf = build_normal_form(2).unwrap();
        let (_, m) = build_m_alpha_sigma(&a, 1, 2, ShiftConvention::Summed).unwrap();
        let r = inclusion_check("i", &nf, None, &m, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
    }

    #[test]
    fn kernel_matches_closed_form() {
        for conv in [ShiftConvention::Summed, ShiftConvention::Averaged] {
            let r = kernel_check(&rat(1, 3), 1, 2, conv, 3, 5).unwrap();
            assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
        }
    }

    #[test]
    fn spans() {
        let e = |a: i64, b: i64| vec![real(int(a)), real(int(b))];
        assert!(same_span(&[e(1, 2)], &[e(2, 4)]));
        assert!(!same_span(&[e(1, 2)], &[e(2, 3)]));
    }

    #[test]
    fn intersection_at_origin_k2() {
        let r = intersection_check(&rat(1, 4), &rat(1, 3), 2, ShiftConvention::Summed).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
        let r = intersection_check(&rat(1, 4), &rat(1, 4), 2, ShiftConvention::Summed).unwrap();
        assert_eq!(r.verdict, Verdict::Failed);
    }

    #[test]
    fn hess_q_at_origin() {
        let sys = CoefficientSystem::half_bound(rat(1, 4)).unwrap();
        let r = hess_q_spectrum_check(&sys, 2, &s_alpha_axis_points(2)).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact, "{}", r.render());
    }
}
