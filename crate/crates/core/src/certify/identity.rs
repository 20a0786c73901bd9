use std::sync::Arc;
use std::time::Instant;

use super::{CertReport, ReportParams, Witness};
use crate::constructions::{
    build_p_alpha, four_d_zzbar_sheared, p_alpha_zzbar_expansion, CoefficientSystem,
    ConstructionError, ExpansionForm,
};
use crate::par;
use crate::poly::{same_registry, PolyError, SparsePoly};
use crate::registry::VarRegistry;
use crate::scalar::{fmt_gauss, gone, is_gzero, Rational};
use crate::sheared::ShearedCoords;

/// A rational point where `p` does not vanish. Deterministic; a nonzero
/// polynomial of degree `d` vanishes on at most a thin set, so a few
/// scattered points suffice.
pub fn find_nonzero_point(p: &SparsePoly) -> Option<Vec<Rational>> {
    if p.is_zero() {
        return None;
    }
    let n = p.registry().len();
    for t in 0..256i64 {
        let point: Vec<Rational> = (0..n as i64)
            .map(|i| Rational::new((3 * i + 7 * t + 1).into(), (2 * i + t + 2).into()))
            .collect();
        if let Ok(v) = p.eval(&point) {
            if !is_gzero(&v) {
                return Some(point);
            }
        }
    }
    None
}

/// Proved exactly iff `lhs − rhs` is the zero polynomial; otherwise fails
/// with a point where the two sides differ.
pub fn verify_polynomial_identity(
    claim: &str,
    lhs: &SparsePoly,
    rhs: &SparsePoly,
    params: ReportParams,
) -> Result<CertReport, PolyError> {
    let start = Instant::now();
    if !same_registry(lhs.registry(), rhs.registry()) {
        return Err(PolyError::RegistryMismatch);
    }
    let diff = lhs.checked_sub(rhs)?;
    let mut r = CertReport::new(claim, params);
    r.note(format!("lhs terms = {}, rhs terms = {}", lhs.num_terms(), rhs.num_terms()));
    if !diff.is_zero() {
        r.note(format!("residual terms = {}", diff.num_terms()));
        if let Some(p) = find_nonzero_point(&diff) {
            let v = diff.eval(&p)?;
            r.fail(Witness::new("lhs - rhs", p, fmt_gauss(&v)));
        } else {
            r.fail(Witness::new("residual", Vec::new(), diff.to_canonical_string()));
        }
    }
    Ok(r.finish(start))
}

/// Every monomial of total degree `≤ max_degree`.
pub fn monomial_basis(reg: &Arc<VarRegistry>, max_degree: u32) -> Vec<SparsePoly> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut exps = Vec::new();
    rec(reg.len(), max_degree, &mut Vec::new(), &mut exps);
    exps.iter()
        .map(|e| SparsePoly::monomial(reg, e, gone()).expect("monomial within registry"))
        .collect()
}

/// The three mixed-derivative formulas in sheared coordinates
/// (`4∂_{z,z̄}`, `4∂_{z,w̄}`, `4∂_{w,w̄}`) on every monomial of degree
/// `≤ max_degree`.
pub fn mixed_derivative_basis_check(
    alpha: &Rational,
    k: usize,
    max_degree: u32,
) -> Result<CertReport, ConstructionError> {
    let start = Instant::now();
    let sc = ShearedCoords::new(k, alpha.clone())?;
    let basis = monomial_basis(sc.sheared_registry(), max_degree);
    type Check = fn(&ShearedCoords, &SparsePoly) -> Result<(SparsePoly, SparsePoly), PolyError>;
    let checks: [(&str, Check); 3] = [
        ("4d_zzbar", |s, f| Ok((s.four_d_zzbar(f)?, s.zzbar_operator(f)))),
        ("4d_zwbar", |s, f| Ok((s.four_d_zwbar(f)?, s.zwbar_operator(f)))),
        ("4d_wwbar", |s, f| Ok((s.four_d_wwbar(f)?, s.wwbar_operator(f)))),
    ];
    let results = par::map_indexed(&basis, |_, m| {
        let mut bad = Vec::new();
        for (name, check) in &checks {
            match check(&sc, m) {
                Ok((a, b)) if a == b => {}
                Ok((a, b)) => bad.push((*name, Some(&a - &b))),
                Err(_) => bad.push((*name, None)),
            }
        }
        bad
    });
    let mut r = CertReport::new(
        "identity.mixed_derivatives",
        ReportParams {
            k: Some(k),
            alpha: Some(alpha.clone()),
            ..Default::default()
        },
    );
    r.samples = basis.len();
    r.note(format!(
        "monomials of degree <= {max_degree} in {} sheared variables = {}; formulas = 3",
        sc.sheared_registry().len(),
        basis.len()
    ));
    let mut failures = 0usize;
    for (m, bad) in basis.iter().zip(results) {
        for (name, diff) in bad {
            failures += 1;
            if r.witnesses.len() < 5 {
                let (point, value) = match diff.as_ref().and_then(|d| find_nonzero_point(d).map(|p| (d, p))) {
                    Some((d, p)) => {
                        let v = d.eval(&p).map(|v| fmt_gauss(&v)).unwrap_or_default();
                        (p, v)
                    }
                    None => (Vec::new(), "evaluation error".into()),
                };
                r.fail(Witness::new(format!("{name} on {m}"), point, value));
            }
        }
    }
    r.note(format!("failures = {failures}"));
    Ok(r.finish(start))
}

/// `4∂²P_α/∂z∂z̄` recomputed through the raw coordinates against the
/// expanded form whose `u`-linear brackets vanish by equalities (1)–(3).
pub fn p_zzbar_check(sys: &CoefficientSystem, k: usize) -> Result<CertReport, ConstructionError> {
    let p = build_p_alpha(sys, k)?;
    let lhs = four_d_zzbar_sheared(&p, &sys.alpha, k)?;
    let rhs = p_alpha_zzbar_expansion(sys, k, ExpansionForm::Reduced)?;
    let mut r = verify_polynomial_identity(
        "identity.p_zzbar",
        &lhs,
        &rhs,
        ReportParams {
            k: Some(k),
            alpha: Some(sys.alpha.clone()),
            c: Some(sys.c.clone()),
            ..Default::default()
        },
    )?;
    let general = p_alpha_zzbar_expansion(sys, k, ExpansionForm::General)?;
    r.note(format!("general expansion matches = {}", general == lhs));
    let printed = p_alpha_zzbar_expansion(sys, k, ExpansionForm::AsPrinted)?;
    r.note(format!(
        "literal display (last line without factor 2) matches = {}",
        printed == lhs
    ));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::certify::Verdict;

    #[test]
    fn basis_size() {
        let reg = VarRegistry::reals(&["a", "b", "c"]).unwrap();
        // C(3+2, 2)
        assert_eq!(monomial_basis(&reg, 2).len(), 10);
    }

    #[test]
    fn identity_and_witness() {
        let reg = VarRegistry::reals(&["x", "y"]).unwrap();
        let a = SparsePoly::parse(&reg, "x + y").unwrap().pow(2);
        let b = SparsePoly::parse(&reg, "x^2 + 2*x*y + y^2").unwrap();
        let r = verify_polynomial_identity("t", &a, &b, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedExact);
        let c = SparsePoly::parse(&reg, "x^2 + y^2").unwrap();
        let r = verify_polynomial_identity("t", &a, &c, ReportParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Failed);
        let w = &r.witnesses[0];
        let diff = (&a - &c).eval(&w.point).unwrap();
        assert!(!is_gzero(&diff));
    }

    #[test]
    fn tampered_a_breaks_the_expansion() {
        let s = CoefficientSystem::solve(rat(1, 4), rat(9, 32)).unwrap();
        assert!(p_zzbar_check(&s, 2).unwrap().passed());
        let bad = CoefficientSystem::from_parts(
            s.alpha.clone(),
            s.c.clone(),
            &s.a + int(1),
            s.a_prime.clone(),
            s.b.clone(),
        );
        assert!(!p_zzbar_check(&bad, 2).unwrap().passed());
    }
}
