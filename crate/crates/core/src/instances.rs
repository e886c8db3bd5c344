//! Reference instances and a seeded random-instance generator.

use rand::Rng;

use crate::problem::{Constraint, IpProblem, Monomial, Polynomial};

fn poly(n: usize, terms: &[(f64, &[u32])]) -> Polynomial {
    Polynomial::new(n, terms.iter().map(|(c, e)| Monomial::new(*c, e.to_vec())).collect()).expect("static polynomial")
}

/// Five-variable non-convex demonstration instance over `{0, 1, 2}`:
///
/// ```text
/// maximize 2x1 + x2 + x3 + 3x4 + 1.5x5
///   x1 + x2^2 x3 + x3      < 1
///   3 x3^2 x4 + x2         < 2
///   x1 x5 + x4             < 1
///   2x1 + 2x1^2 x3 + x4^3  < 2
/// ```
pub fn demonstration() -> IpProblem {
    let n = 5;
    let cost = poly(
        n,
        &[
            (2.0, &[1, 0, 0, 0, 0]),
            (1.0, &[0, 1, 0, 0, 0]),
            (1.0, &[0, 0, 1, 0, 0]),
            (3.0, &[0, 0, 0, 1, 0]),
            (1.5, &[0, 0, 0, 0, 1]),
        ],
    );
    let c1 = poly(n, &[(1.0, &[1, 0, 0, 0, 0]), (1.0, &[0, 2, 1, 0, 0]), (1.0, &[0, 0, 1, 0, 0])]);
    let c2 = poly(n, &[(3.0, &[0, 0, 2, 1, 0]), (1.0, &[0, 1, 0, 0, 0])]);
    let c3 = poly(n, &[(1.0, &[1, 0, 0, 0, 1]), (1.0, &[0, 0, 0, 1, 0])]);
    let c4 = poly(n, &[(2.0, &[1, 0, 0, 0, 0]), (2.0, &[2, 0, 1, 0, 0]), (1.0, &[0, 0, 0, 3, 0])]);
    IpProblem::new(
        n,
        3,
        cost,
        vec![
            Constraint::new(c1, 1.0).unwrap(),
            Constraint::new(c2, 2.0).unwrap(),
            Constraint::new(c3, 1.0).unwrap(),
            Constraint::new(c4, 2.0).unwrap(),
        ],
    )
    .expect("static instance")
}

/// Two binary variables with the single constraint `x1 + 2 x2 < 2`.
pub fn single_linear_constraint() -> IpProblem {
    let n = 2;
    IpProblem::new(
        n,
        2,
        poly(n, &[(1.0, &[1, 0]), (1.0, &[0, 1])]),
        vec![Constraint::new(poly(n, &[(1.0, &[1, 0]), (2.0, &[0, 1])]), 2.0).unwrap()],
    )
    .expect("static instance")
}

/// `x1 < 1` together with `x1 > 0` (normalized to `(1 - x1) < 1`) over one
/// binary variable: no assignment satisfies both.
pub fn contradictory() -> IpProblem {
    let n = 1;
    IpProblem::new(
        n,
        2,
        poly(n, &[(1.0, &[1])]),
        vec![
            Constraint::new(poly(n, &[(1.0, &[1])]), 1.0).unwrap(),
            Constraint::new(poly(n, &[(1.0, &[0]), (-1.0, &[1])]), 1.0).unwrap(),
        ],
    )
    .expect("static instance")
}

/// Shape of generated random instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub max_n: usize,
    pub max_d: usize,
    pub max_m: usize,
    pub max_terms: usize,
    pub max_exponent: u32,
    /// Constraint coefficients are drawn from `[-coeff_range, coeff_range]`.
    pub coeff_range: i32,
    /// Cost coefficients are drawn from `[0, cost_range]` so costs stay
    /// nonnegative over the box.
    pub cost_range: i32,
    pub bound_range: (i32, i32),
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_n: 4,
            max_d: 4,
            max_m: 3,
            max_terms: 3,
            max_exponent: 2,
            coeff_range: 3,
            cost_range: 3,
            bound_range: (1, 6),
        }
    }
}

fn random_poly<R: Rng>(rng: &mut R, n: usize, spec: &RandomSpec, lo: i32, hi: i32) -> Polynomial {
    let terms = rng.gen_range(1..=spec.max_terms);
    let monomials = (0..terms)
        .map(|_| {
            let exps = (0..n).map(|_| rng.gen_range(0..=spec.max_exponent)).collect();
            Monomial::new(rng.gen_range(lo..=hi) as f64, exps)
        })
        .collect();
    Polynomial::new(n, monomials).expect("generated polynomial")
}

/// Draws a random normalized instance with integer coefficients.
pub fn random_instance<R: Rng>(rng: &mut R, spec: &RandomSpec) -> IpProblem {
    let n = rng.gen_range(1..=spec.max_n);
    let d = rng.gen_range(2..=spec.max_d);
    let m = rng.gen_range(0..=spec.max_m);
    let cost = random_poly(rng, n, spec, 0, spec.cost_range);
    let constraints = (0..m)
        .map(|_| {
            let lhs = random_poly(rng, n, spec, -spec.coeff_range, spec.coeff_range);
            let bound = rng.gen_range(spec.bound_range.0..=spec.bound_range.1) as f64;
            Constraint::new(lhs, bound).expect("positive bound")
        })
        .collect();
    IpProblem::new(n, d, cost, constraints).expect("generated instance")
}
