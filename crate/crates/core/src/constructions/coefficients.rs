//! The coefficient system `(α, c, A, A′, B)` of the model polynomial `P_α`.

use std::fmt;

use num_traits::{Signed, Zero};

use super::ConstructionError;
use crate::scalar::{fmt_rational, int, rat, Rational};

/// Feasible `α` must stay below this value.
pub fn alpha_threshold() -> Rational {
    rat(46, 100)
}

/// Identifies one of the conditions a coefficient system must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `A = 3(α+1)²(4α+c) / (2(5α+4))`
    Eq1,
    /// `A′ = 3(α−1)²c / (2(4−5α))`
    Eq2,
    /// `B = (6/5)((α−1)² − c)`
    Eq3,
    /// `6A + B + 6(α+1)² > 3(4α+c)(3α+2)`
    Ineq4,
    /// `6A′ + B + 6(α−1)² > (6−9α)c`
    Ineq5,
    /// `(4α+c)² < 4A`
    Ineq6,
    /// `c² < 4A′`
    Ineq7,
    PositiveA,
    PositiveAprime,
    PositiveB,
}

impl Constraint {
    pub const ALL: [Constraint; 10] = [
        Constraint::Eq1,
        Constraint::Eq2,
        Constraint::Eq3,
        Constraint::Ineq4,
        Constraint::Ineq5,
        Constraint::Ineq6,
        Constraint::Ineq7,
        Constraint::PositiveA,
        Constraint::PositiveAprime,
        Constraint::PositiveB,
    ];

    /// Index 1–7 for the numbered conditions, `None` for positivity.
    pub fn index(self) -> Option<u8> {
        match self {
            Constraint::Eq1 => Some(1),
            Constraint::Eq2 => Some(2),
            Constraint::Eq3 => Some(3),
            Constraint::Ineq4 => Some(4),
            Constraint::Ineq5 => Some(5),
            Constraint::Ineq6 => Some(6),
            Constraint::Ineq7 => Some(7),
            _ => None,
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, Constraint::Eq1 | Constraint::Eq2 | Constraint::Eq3)
    }

    pub fn label(self) -> &'static str {
        match self {
            Constraint::Eq1 => "(1)",
            Constraint::Eq2 => "(2)",
            Constraint::Eq3 => "(3)",
            Constraint::Ineq4 => "(4)",
            Constraint::Ineq5 => "(5)",
            Constraint::Ineq6 => "(6)",
            Constraint::Ineq7 => "(7)",
            Constraint::PositiveA => "A>0",
            Constraint::PositiveAprime => "A'>0",
            Constraint::PositiveB => "B>0",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The four expressions whose minimum bounds `c`, in order:
/// `(α−1)²`, `(16+8α−64α²−60α³)/(11+30α+20α²)`,
/// `4(α−1)²(4−5α)/(20α²−30α+11)`, `(6−4α−14α²)/(4+5α)`.
pub fn c_bound_terms(alpha: &Rational) -> Result<[Rational; 4], ConstructionError> {
    let a = alpha;
    let a2 = a * a;
    let a3 = &a2 * a;
    let am1_sq = (a - int(1)) * (a - int(1));
    let den2 = int(11) + a * int(30) + &a2 * int(20);
    let den3 = &a2 * int(20) - a * int(30) + int(11);
    let den4 = int(4) + a * int(5);
    for (den, expr) in [(&den2, 2u8), (&den3, 3), (&den4, 4)] {
        if den.is_zero() {
            return Err(ConstructionError::Pole {
                alpha: alpha.clone(),
                expr,
            });
        }
    }
    let num2 = int(16) + a * int(8) - &a2 * int(64) - &a3 * int(60);
    let num3 = &am1_sq * int(4) * (int(4) - a * int(5));
    let num4 = int(6) - a * int(4) - &a2 * int(14);
    Ok([am1_sq, num2 / den2, num3 / den3, num4 / den4])
}

pub fn c_upper_bound(alpha: &Rational) -> Result<Rational, ConstructionError> {
    let terms = c_bound_terms(alpha)?;
    Ok(terms.into_iter().min().expect("four terms"))
}

/// The numerator `16 + 8α − 64α² − 60α³` that decides the feasible range.
pub fn binding_numerator(alpha: &Rational) -> Rational {
    let a2 = alpha * alpha;
    int(16) + alpha * int(8) - &a2 * int(64) - &a2 * alpha * int(60)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSystem {
    pub alpha: Rational,
    pub c: Rational,
    pub a: Rational,
    pub a_prime: Rational,
    pub b: Rational,
}

impl CoefficientSystem {
    pub fn formula_a(alpha: &Rational, c: &Rational) -> Rational {
        let ap1 = alpha + int(1);
        int(3) * &ap1 * &ap1 * (alpha * int(4) + c) / (int(2) * (alpha * int(5) + int(4)))
    }

    pub fn formula_a_prime(alpha: &Rational, c: &Rational) -> Rational {
        let am1 = alpha - int(1);
        int(3) * &am1 * &am1 * c / (int(2) * (int(4) - alpha * int(5)))
    }

    pub fn formula_b(alpha: &Rational, c: &Rational) -> Rational {
        let am1 = alpha - int(1);
        rat(6, 5) * (&am1 * &am1 - c)
    }

    /// Solves equalities (1)–(3) for `A, A′, B` and checks every condition.
    pub fn solve(alpha: Rational, c: Rational) -> Result<Self, ConstructionError> {
        if alpha >= alpha_threshold() {
            return Err(ConstructionError::AlphaThreshold { alpha });
        }
        let bound = c_upper_bound(&alpha)?;
        if !c.is_positive() || c >= bound {
            return Err(ConstructionError::CoefficientRange { c, bound });
        }
        let sys = CoefficientSystem {
            a: Self::formula_a(&alpha, &c),
            a_prime: Self::formula_a_prime(&alpha, &c),
            b: Self::formula_b(&alpha, &c),
            alpha,
            c,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// `c = c_upper_bound(α) / 2`.
    pub fn half_bound(alpha: Rational) -> Result<Self, ConstructionError> {
        let c = c_upper_bound(&alpha)? / int(2);
        Self::solve(alpha, c)
    }

    /// Unchecked system, e.g. with a deliberately wrong coefficient.
    pub fn from_parts(
        alpha: Rational,
        c: Rational,
        a: Rational,
        a_prime: Rational,
        b: Rational,
    ) -> Self {
        CoefficientSystem {
            alpha,
            c,
            a,
            a_prime,
            b,
        }
    }

    /// Value of one condition: the residual for an equality (must be zero),
    /// the slack for an inequality (must be positive).
    pub fn margin(&self, which: Constraint) -> Rational {
        let (al, c) = (&self.alpha, &self.c);
        let ap1 = al + int(1);
        let am1 = al - int(1);
        let four_a_c = al * int(4) + c;
        match which {
            Constraint::Eq1 => &self.a - Self::formula_a(al, c),
            Constraint::Eq2 => &self.a_prime - Self::formula_a_prime(al, c),
            Constraint::Eq3 => &self.b - Self::formula_b(al, c),
            Constraint::Ineq4 => {
                int(6) * &self.a + &self.b + int(6) * &ap1 * &ap1
                    - int(3) * &four_a_c * (al * int(3) + int(2))
            }
            Constraint::Ineq5 => {
                int(6) * &self.a_prime + &self.b + int(6) * &am1 * &am1
                    - (int(6) - al * int(9)) * c
            }
            Constraint::Ineq6 => int(4) * &self.a - &four_a_c * &four_a_c,
            Constraint::Ineq7 => int(4) * &self.a_prime - c * c,
            Constraint::PositiveA => self.a.clone(),
            Constraint::PositiveAprime => self.a_prime.clone(),
            Constraint::PositiveB => self.b.clone(),
        }
    }

    pub fn holds(&self, which: Constraint) -> bool {
        let m = self.margin(which);
        if which.is_equality() {
            m.is_zero()
        } else {
            m.is_positive()
        }
    }

    pub fn margins(&self) -> Vec<(Constraint, Rational)> {
        Constraint::ALL
            .iter()
            .map(|&k| (k, self.margin(k)))
            .collect()
    }

    /// First violated condition, if any.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        for k in Constraint::ALL {
            if !self.holds(k) {
                return Err(ConstructionError::Invariant {
                    constraint: k,
                    value: self.margin(k),
                });
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!(
            "alpha={} c={} A={} A'={} B={}",
            fmt_rational(&self.alpha),
            fmt_rational(&self.c),
            fmt_rational(&self.a),
            fmt_rational(&self.a_prime),
            fmt_rational(&self.b)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_terms_at_zero_and_quarter() {
        assert_eq!(
            c_bound_terms(&int(0)).unwrap(),
            [int(1), rat(16, 11), rat(16, 11), rat(3, 2)]
        );
        assert_eq!(c_upper_bound(&int(0)).unwrap(), int(1));
        assert_eq!(
            c_bound_terms(&rat(1, 4)).unwrap(),
            [rat(9, 16), rat(209, 316), rat(99, 76), rat(11, 14)]
        );
        assert!(c_upper_bound(&rat(47, 100)).unwrap().is_negative());
        assert!(matches!(
            c_bound_terms(&rat(-4, 5)),
            Err(ConstructionError::Pole { expr: 4, .. })
        ));
    }

    #[test]
    fn solved_systems() {
        let s = CoefficientSystem::solve(rat(1, 4), rat(9, 32)).unwrap();
        assert_eq!(
            (s.a.clone(), s.a_prime.clone(), s.b.clone()),
            (rat(1025, 1792), rat(243, 2816), rat(27, 80))
        );
        let z = CoefficientSystem::solve(int(0), rat(1, 2)).unwrap();
        assert_eq!(
            (z.a.clone(), z.a_prime.clone(), z.b.clone()),
            (rat(3, 16), rat(3, 16), rat(3, 5))
        );
        assert!(matches!(
            CoefficientSystem::solve(rat(1, 2), rat(1, 100)),
            Err(ConstructionError::AlphaThreshold { .. })
        ));
    }

    #[test]
    fn tampered_a_breaks_equality_one() {
        let s = CoefficientSystem::solve(rat(1, 4), rat(9, 32)).unwrap();
        let bad = CoefficientSystem::from_parts(
            s.alpha.clone(),
            s.c.clone(),
            &s.a + rat(1, 100),
            s.a_prime.clone(),
            s.b.clone(),
        );
        assert!(matches!(
            bad.validate(),
            Err(ConstructionError::Invariant {
                constraint: Constraint::Eq1,
                ..
            })
        ));
    }
}
