use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use pshcert_core::certify::{
    discriminant_check, discriminant_pair, p_zzbar_check, ray_reduction, RayForm, ReportParams,
    Verdict,
};
use pshcert_core::constructions::{c_upper_bound, CoefficientSystem, Constraint};
use pshcert_core::linalg::{psd_certificate, GaussMatrix};
use pshcert_core::sampling::{sq_dist, SampleSpec, Scheme, Tube};
use pshcert_core::scalar::{conj, fmt_rational, gauss, parse_rational, rat, real};
use pshcert_core::wirtinger::{
    chain_rule_hessian, chain_rule_hessian_at, complex_hessian, d_z, d_zbar, pullback,
    pullback_hessian, ComplexCoordSpace, HoloPolyMap,
};
use pshcert_core::{GaussRational, Rational, SparsePoly, VarRegistry};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn small_gauss() -> impl Strategy<Value = GaussRational> {
    (small_rat(), small_rat()).prop_map(|(a, b)| gauss(a, b))
}

fn reals3() -> Arc<VarRegistry> {
    VarRegistry::reals(&["x", "y", "t"]).unwrap()
}

fn poly_over(reg: Arc<VarRegistry>, max_exp: u32) -> impl Strategy<Value = SparsePoly> {
    let n = reg.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), small_gauss()), 0..5).prop_map(
        move |terms| {
            let mut p = SparsePoly::zero(&reg);
            for (e, c) in terms {
                p = p + SparsePoly::monomial(&reg, &e, c).unwrap();
            }
            p
        },
    )
}

fn point3() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rat(), 3)
}

/// `C²` with real coordinates `x1, y1, x2, y2`.
fn c2(prefix: &str) -> ComplexCoordSpace {
    let reg = VarRegistry::builder()
        .complex(&format!("{prefix}1"), &format!("{prefix}a"), &format!("{prefix}b"))
        .complex(&format!("{prefix}2"), &format!("{prefix}c"), &format!("{prefix}d"))
        .build()
        .unwrap();
    ComplexCoordSpace::from_registry(2, reg).unwrap()
}

fn real_valued(reg: Arc<VarRegistry>) -> impl Strategy<Value = SparsePoly> {
    poly_over(reg, 2).prop_map(|p| &p + &p.conj())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_over(reals3(), 3), b in poly_over(reals3(), 3), c in poly_over(reals3(), 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly_over(reals3(), 3), b in poly_over(reals3(), 3), p in point3()) {
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        prop_assert_eq!((&a * &b).eval(&p).unwrap(), &va * &vb);
        prop_assert_eq!((&a + &b).eval(&p).unwrap(), &va + &vb);
        prop_assert_eq!(a.conj().eval(&p).unwrap(), conj(&va));
    }

    #[test]
    fn composition_commutes_with_evaluation(
        f in poly_over(reals3(), 2),
        g in prop::collection::vec(poly_over(reals3(), 2), 3),
        p in point3(),
    ) {
        // only real substitutions are meaningful in real variables
        let g: Vec<SparsePoly> = g.iter().map(|q| q.re_part()).collect();
        let inner: Vec<Rational> = g.iter().map(|q| q.eval(&p).unwrap().re).collect();
        prop_assert_eq!(f.compose(&g).unwrap().eval(&p).unwrap(), f.eval(&inner).unwrap());
    }

    #[test]
    fn derivatives(a in poly_over(reals3(), 3), b in poly_over(reals3(), 3)) {
        prop_assert_eq!(a.derivative(0).derivative(1), a.derivative(1).derivative(0));
        prop_assert_eq!((&a * &b).derivative(2), &a.derivative(2) * &b + &a * &b.derivative(2));
    }

    #[test]
    fn wirtinger_operators_commute(f in real_valued(c2("z").real_registry().clone())) {
        let s = c2("z");
        let a = d_z(&d_zbar(&f, "z1").unwrap(), "z2").unwrap();
        let b = d_zbar(&d_z(&f, "z2").unwrap(), "z1").unwrap();
        prop_assert_eq!(a, b);
        let h = complex_hessian(&f, &s).unwrap();
        let hp = h.eval(&[rat(1, 2), rat(-1, 3), rat(2, 5), rat(1, 7)]).unwrap();
        prop_assert!(hp.is_hermitian());
    }

    #[test]
    fn chain_rule(
        comps in prop::collection::vec(poly_over(c2("z").holo_registry().clone(), 2), 2),
        rho in real_valued(c2("w").real_registry().clone()),
        p in prop::collection::vec(small_rat(), 4),
    ) {
        let f = HoloPolyMap::new(c2("z"), c2("w"), comps).unwrap();
        let direct = pullback_hessian(&rho, &f).unwrap();
        prop_assert_eq!(&direct, &chain_rule_hessian(&rho, &f).unwrap());
        let at = chain_rule_hessian_at(&complex_hessian(&rho, f.target()).unwrap(), &f, &p).unwrap();
        prop_assert_eq!(at, direct.eval(&p).unwrap());
        prop_assert!(pullback(&rho, &f).unwrap().is_real_valued());
    }

    #[test]
    fn strict_definiteness_implies_semidefiniteness(
        a in prop::collection::vec(small_gauss(), 9),
        shift in small_rat(),
    ) {
        let m = GaussMatrix::from_rows(a.chunks(3).map(|r| r.to_vec()).collect());
        let mut h = m.conj_transpose().mul(&m);
        for i in 0..3 {
            let v = h.get(i, i) + real(shift.clone());
            h.set(i, i, v);
        }
        if psd_certificate(&h, true).passed() {
            prop_assert!(psd_certificate(&h, false).passed());
        }
        // A*A is always semidefinite
        prop_assert!(psd_certificate(&m.conj_transpose().mul(&m), false).passed());
    }

    #[test]
    fn rationals_roundtrip(r in small_rat()) {
        prop_assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
    }

    #[test]
    fn ray_minimum_is_a_lower_bound(
        p in small_rat(), q in small_rat(), a in small_rat(), b in small_rat(), a2 in small_rat(),
        s in 0i64..=20,
    ) {
        let form = RayForm { p, q, a, b, a_prime: a2 };
        let (_, m) = ray_reduction(&form);
        prop_assert!(m <= form.margin(&rat(s, 20)));
    }

    #[test]
    fn samples_respect_the_ball(seed in 0u64..1000, count in 1usize..40, eps in 0i64..10) {
        let spec = SampleSpec::ball(3, rat(1, 10), count, Scheme::Random { seed })
            .unwrap()
            .with_tube(Tube::point(vec![Rational::zero(); 3], rat(eps, 200)))
            .unwrap();
        let s = spec.generate();
        prop_assert_eq!(&s, &spec.generate());
        for p in &s {
            let d = sq_dist(&p.point, &spec.center);
            prop_assert!(d <= rat(1, 100));
            prop_assert_eq!(p.in_tube, d <= rat(eps * eps, 40000));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Every accepted system reproves the positivity chain: the equalities
    /// hold, the expansion identity passes and the ray reduction proves
    /// the discriminant inequality.
    #[test]
    fn accepted_systems_reprove_the_chain(an in 1i64..45, cn in 1i64..20) {
        let alpha = rat(an, 100);
        let bound = c_upper_bound(&alpha).unwrap();
        let c = &bound * rat(cn, 20);
        let sys = CoefficientSystem::solve(alpha, c).unwrap();
        for eq in [Constraint::Eq1, Constraint::Eq2, Constraint::Eq3] {
            prop_assert!(sys.margin(eq).is_zero());
        }
        let r = p_zzbar_check(&sys, 2).unwrap();
        prop_assert_eq!(r.verdict, Verdict::ProvedExact);
        let (b1, b0) = discriminant_pair(&sys);
        let spec = SampleSpec::ball(2, rat(1, 10), 20, Scheme::Halton).unwrap();
        let d = discriminant_check("d", &b1, &b0, &spec, ReportParams::default()).unwrap();
        prop_assert_eq!(d.verdict, Verdict::ProvedExact);
        prop_assert!(d.min_minor.unwrap().is_positive());
    }
}
