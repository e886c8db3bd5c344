use super::{Constraint, IpProblem, Polynomial, RawProblem, Relation};
use crate::error::{Error, Result};

/// Margin added to `<=` bounds when the left-hand side is not integer valued.
pub const NORMALIZATION_EPSILON: f64 = 1e-6;

/// Rewrites `lhs <= bound` as an equivalent strict inequality.
///
/// For integral polynomials the achievable values lie on the lattice
/// `c0 + g*Z` (g = gcd of the non-constant coefficients), so the bound moves
/// to the largest lattice point `<= bound` plus half a lattice step.
fn strict_bound(lhs: &Polynomial, bound: f64, eps: f64) -> f64 {
    match lhs.coefficient_gcd() {
        Some(g) => {
            let g = g as f64;
            let c0 = lhs.constant_term();
            c0 + g * ((bound - c0) / g).floor() + 0.5 * g
        }
        // constant (or constant-only) integral lhs: any margin below 1 works
        None if lhs.is_integral() => bound.floor() + 0.5,
        _ => bound + eps,
    }
}

/// Converts every relation to `lhs < bound` with `bound > 0`.
///
/// `>`/`>=` negate the polynomial. When the resulting bound is not positive,
/// both sides are shifted by the negated interval minimum of `lhs` so that
/// the shifted polynomial is nonnegative over the box; if the bound is still
/// not positive the constraint can never hold and is reported.
pub fn normalize_problem(raw: &RawProblem, eps: f64) -> Result<IpProblem> {
    let mut constraints = Vec::with_capacity(raw.constraints.len());
    for (index, c) in raw.constraints.iter().enumerate() {
        if !c.bound.is_finite() {
            return Err(Error::NonFinite(c.bound));
        }
        let (lhs, bound) = match c.relation {
            Relation::Lt => (c.lhs.clone(), c.bound),
            Relation::Le => (c.lhs.clone(), strict_bound(&c.lhs, c.bound, eps)),
            Relation::Gt => (c.lhs.scale(-1.0), -c.bound),
            Relation::Ge => {
                let neg = c.lhs.scale(-1.0);
                let b = strict_bound(&neg, -c.bound, eps);
                (neg, b)
            }
        };
        let (lhs, bound, shift) = if bound > 0.0 {
            (lhs, bound, 0.0)
        } else {
            let (lo, _) = lhs.box_range(raw.d);
            let shift = (-lo).max(0.0);
            (lhs.add_constant(shift), bound + shift, shift)
        };
        if bound <= 0.0 {
            return Err(Error::Contradiction { index });
        }
        constraints.push(Constraint { lhs, bound, shift });
    }
    IpProblem::new(raw.n, raw.d, raw.cost.clone(), constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{AssignmentIter, Monomial, RawConstraint};

    type Terms = Vec<(f64, Vec<u32>)>;

    fn raw(n: usize, d: usize, constraints: Vec<(Terms, Relation, f64)>) -> RawProblem {
        RawProblem {
            n,
            d,
            cost: Polynomial::zero(n),
            constraints: constraints
                .into_iter()
                .map(|(terms, relation, bound)| RawConstraint {
                    lhs: Polynomial::new(n, terms.into_iter().map(|(c, e)| Monomial::new(c, e)).collect()).unwrap(),
                    relation,
                    bound,
                })
                .collect(),
        }
    }

    fn same_feasible_set(raw: &RawProblem, p: &IpProblem) -> bool {
        AssignmentIter::new(raw.n, raw.d).all(|x| raw.is_feasible(&x) == p.is_feasible(&x))
    }

    #[test]
    fn le_with_integer_coefficients_gets_half_gap() {
        let r = raw(2, 3, vec![(vec![(1.0, vec![1, 0]), (2.0, vec![0, 1])], Relation::Le, 1.0)]);
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        assert_eq!(p.constraints()[0].bound, 1.5);
        assert_eq!(p.constraints()[0].shift, 0.0);
        assert!(same_feasible_set(&r, &p));
    }

    #[test]
    fn le_uses_coefficient_lattice() {
        // 2 x1 + 4 x2 + 1 <= 6 holds iff lhs <= 5, lattice step 2
        let r = raw(2, 3, vec![(vec![(2.0, vec![1, 0]), (4.0, vec![0, 1]), (1.0, vec![0, 0])], Relation::Le, 6.0)]);
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        assert_eq!(p.constraints()[0].bound, 6.0);
        assert!(same_feasible_set(&r, &p));
    }

    #[test]
    fn ge_negates_and_shifts() {
        // x1 >= 1 over d = 3: -x1 <= -1 -> -x1 < -0.5 -> (2 - x1) < 1.5
        let r = raw(1, 3, vec![(vec![(1.0, vec![1])], Relation::Ge, 1.0)]);
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        let c = &p.constraints()[0];
        assert_eq!(c.shift, 2.0);
        assert_eq!(c.bound, 1.5);
        assert_eq!(c.lhs.constant_term(), 2.0);
        assert_eq!(c.lhs.eval(&[1]), 1.0);
        assert!(same_feasible_set(&r, &p));
    }

    #[test]
    fn strict_lt_with_positive_bound_unchanged() {
        let r = raw(
            3,
            3,
            vec![(vec![(1.0, vec![1, 0, 0]), (1.0, vec![0, 2, 1]), (1.0, vec![0, 0, 1])], Relation::Lt, 1.0)],
        );
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        assert_eq!(p.constraints()[0].lhs, r.constraints[0].lhs);
        assert_eq!(p.constraints()[0].bound, 1.0);
    }

    #[test]
    fn gt_zero_becomes_shifted_strict() {
        let r = raw(1, 2, vec![(vec![(1.0, vec![1])], Relation::Gt, 0.0)]);
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        assert_eq!(p.constraints()[0].bound, 1.0);
        assert!(same_feasible_set(&r, &p));
    }

    #[test]
    fn unsatisfiable_constraint_reported() {
        let r = raw(1, 3, vec![(vec![(1.0, vec![2])], Relation::Lt, 0.0)]);
        assert_eq!(normalize_problem(&r, NORMALIZATION_EPSILON).unwrap_err(), Error::Contradiction { index: 0 });
        let r = raw(1, 3, vec![(vec![(1.0, vec![1])], Relation::Gt, 5.0)]);
        assert!(matches!(normalize_problem(&r, NORMALIZATION_EPSILON), Err(Error::Contradiction { .. })));
    }

    #[test]
    fn non_integral_le_uses_epsilon() {
        let r = raw(1, 3, vec![(vec![(0.5, vec![1])], Relation::Le, 0.5)]);
        let p = normalize_problem(&r, NORMALIZATION_EPSILON).unwrap();
        assert_eq!(p.constraints()[0].bound, 0.5 + NORMALIZATION_EPSILON);
        assert!(same_feasible_set(&r, &p));
    }
}
