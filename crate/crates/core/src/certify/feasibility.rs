use num_traits::Signed;

use crate::constructions::{
    binding_numerator, c_upper_bound, CoefficientSystem, ConstructionError, Constraint,
};
use crate::scalar::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityRow {
    pub alpha: Rational,
    /// `c_upper_bound(α)`, or the pole that prevented it.
    pub bound: Result<Rational, String>,
    /// Margins of (4)–(7) at `c = bound/2`.
    pub margins: Vec<(Constraint, Rational)>,
    /// `16 + 8α − 64α² − 60α³`.
    pub binding: Rational,
}

impl FeasibilityRow {
    pub fn feasible(&self) -> bool {
        matches!(&self.bound, Ok(b) if b.is_positive())
            && self.margins.iter().all(|(_, m)| m.is_positive())
    }
}

const SCANNED: [Constraint; 4] = [
    Constraint::Ineq4,
    Constraint::Ineq5,
    Constraint::Ineq6,
    Constraint::Ineq7,
];

pub fn feasibility_scan(
    alpha_min: &Rational,
    alpha_max: &Rational,
    step: &Rational,
) -> Result<Vec<FeasibilityRow>, ConstructionError> {
    if !step.is_positive() {
        return Err(ConstructionError::Shape("scan step must be positive".into()));
    }
    if alpha_min > alpha_max {
        return Err(ConstructionError::Shape("empty scan range".into()));
    }
    let mut rows = Vec::new();
    let mut i = 0i64;
    loop {
        let alpha = alpha_min + step * int(i);
        if &alpha > alpha_max {
            break;
        }
        let bound = c_upper_bound(&alpha).map_err(|e| e.to_string());
        let margins = match &bound {
            Ok(b) => {
                let c = b / int(2);
                let sys = CoefficientSystem::from_parts(
                    alpha.clone(),
                    c.clone(),
                    CoefficientSystem::formula_a(&alpha, &c),
                    CoefficientSystem::formula_a_prime(&alpha, &c),
                    CoefficientSystem::formula_b(&alpha, &c),
                );
                SCANNED.iter().map(|&k| (k, sys.margin(k))).collect()
            }
            Err(_) => Vec::new(),
        };
        rows.push(FeasibilityRow {
            binding: binding_numerator(&alpha),
            alpha,
            bound,
            margins,
        });
        i += 1;
    }
    Ok(rows)
}

/// First consecutive pair of rows between which the binding numerator
/// changes sign.
pub fn binding_sign_change(rows: &[FeasibilityRow]) -> Option<(Rational, Rational)> {
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.binding.is_positive() && !b.binding.is_positive())
            .then(|| (a.alpha.clone(), b.alpha.clone()))
    })
}

fn feasible_at(alpha: &Rational) -> bool {
    matches!(c_upper_bound(alpha), Ok(b) if b.is_positive())
}

/// Interval of width `≤ tol` containing the supremum of the `α` with a
/// positive bound for `c`, by bisection on `[3/10, 3/5]`.
pub fn threshold_root(tol: &Rational) -> Result<(Rational, Rational), ConstructionError> {
    if !tol.is_positive() {
        return Err(ConstructionError::Shape("tolerance must be positive".into()));
    }
    let (mut lo, mut hi) = (rat(3, 10), rat(3, 5));
    debug_assert!(feasible_at(&lo) && !feasible_at(&hi));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        if feasible_at(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_rows_and_sign_change() {
        let rows = feasibility_scan(&int(0), &rat(1, 2), &rat(1, 100)).unwrap();
        assert_eq!(rows.len(), 51);
        assert_eq!(rows[0].bound, Ok(int(1)));
        for r in &rows {
            if r.alpha <= rat(46, 100) {
                assert!(r.feasible(), "alpha {}", r.alpha);
            }
        }
        assert_eq!(binding_sign_change(&rows), Some((rat(46, 100), rat(47, 100))));
    }

    #[test]
    fn bisection() {
        let (lo, hi) = threshold_root(&rat(1, 1000)).unwrap();
        assert!(lo > rat(46, 100) && hi < rat(47, 100));
        assert!(&hi - &lo <= rat(1, 1000));
        let (lo, hi) = threshold_root(&rat(1, 10)).unwrap();
        assert!(lo < rat(47, 100) && hi > rat(46, 100));
        assert!(feasible_at(&rat(3, 10)) && !feasible_at(&rat(6, 10)));
    }
}
