//! Classical ground truth: exhaustive enumeration and depth-first
//! branch and bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{decode_into, IpProblem, Polynomial};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    /// Feasible basis indices in increasing order.
    pub feasible: Vec<usize>,
    /// Every feasible index attaining the optimum cost.
    pub optima: Vec<usize>,
    pub optimum_cost: Option<f64>,
    pub evaluations: u64,
}

pub fn brute_force_solve(p: &IpProblem) -> Result<BruteForceResult> {
    brute_force_solve_with_cap(p, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates all `d^n` assignments, keeping those that satisfy every
/// constraint and maximizing the cost over them.
pub fn brute_force_solve_with_cap(p: &IpProblem, cap: u128) -> Result<BruteForceResult> {
    let size = p.search_space();
    if size > cap {
        return Err(Error::EnumerationCap { size, cap });
    }
    let size = size as usize;
    let (n, d) = (p.n(), p.d());
    let feasible_costs: Vec<(usize, f64)> = (0..size)
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |x, y| {
                decode_into(y, d, x);
                p.is_feasible(x).then(|| (y, p.cost().eval(x)))
            },
        )
        .flatten()
        .collect();

    let optimum_cost = feasible_costs.iter().map(|&(_, c)| c).max_by(f64::total_cmp);
    let optima = match optimum_cost {
        Some(best) => feasible_costs.iter().filter(|&&(_, c)| c == best).map(|&(y, _)| y).collect(),
        None => Vec::new(),
    };
    Ok(BruteForceResult {
        feasible: feasible_costs.iter().map(|&(y, _)| y).collect(),
        optima,
        optimum_cost,
        evaluations: size as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchAndBoundResult {
    pub optimum: Option<Vec<usize>>,
    pub optimum_cost: Option<f64>,
    pub first_incumbent_cost: Option<f64>,
    /// Number of search-tree nodes visited, root included.
    pub nodes: u64,
}

/// Interval bounds of a polynomial when variables `0..fixed` take the values
/// in `prefix` and the rest range over `[0, d-1]`.
fn partial_range(p: &Polynomial, prefix: &[usize], d: usize) -> (f64, f64) {
    let top = (d - 1) as f64;
    p.terms().iter().fold((0.0, 0.0), |(lo, hi), t| {
        let mut fixed = t.coeff;
        let mut free_deg = 0;
        for (v, &e) in t.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match prefix.get(v) {
                Some(&x) => fixed *= (x as f64).powi(e as i32),
                None => free_deg += e,
            }
        }
        if free_deg == 0 {
            (lo + fixed, hi + fixed)
        } else {
            // free factor ranges over [0, top^free_deg]
            let reach = fixed * top.powi(free_deg as i32);
            (lo + reach.min(0.0), hi + reach.max(0.0))
        }
    })
}

struct Search<'a> {
    p: &'a IpProblem,
    prefix: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
    first_incumbent: Option<f64>,
    nodes: u64,
}

impl Search<'_> {
    fn visit(&mut self) {
        self.nodes += 1;
        let (p, d) = (self.p, self.p.d());
        for c in p.constraints() {
            if partial_range(&c.lhs, &self.prefix, d).0 >= c.bound {
                return;
            }
        }
        if self.prefix.len() == p.n() {
            if !p.is_feasible(&self.prefix) {
                return;
            }
            let cost = p.cost().eval(&self.prefix);
            if self.first_incumbent.is_none() {
                self.first_incumbent = Some(cost);
            }
            if self.best.as_ref().is_none_or(|(_, b)| cost > *b) {
                self.best = Some((self.prefix.clone(), cost));
            }
            return;
        }
        if let Some((_, incumbent)) = &self.best {
            if partial_range(p.cost(), &self.prefix, d).1 <= *incumbent {
                return;
            }
        }
        for v in 0..d {
            self.prefix.push(v);
            self.visit();
            self.prefix.pop();
        }
    }
}

/// Depth-first branch and bound fixing variables in index order with
/// ascending values, pruning on interval bounds of the unfixed box.
pub fn branch_and_bound_solve(p: &IpProblem) -> BranchAndBoundResult {
    let mut s = Search { p, prefix: Vec::with_capacity(p.n()), best: None, first_incumbent: None, nodes: 0 };
    s.visit();
    let (optimum, optimum_cost) = match s.best {
        Some((x, c)) => (Some(x), Some(c)),
        None => (None, None),
    };
    BranchAndBoundResult { optimum, optimum_cost, first_incumbent_cost: s.first_incumbent, nodes: s.nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, RandomSpec};
    use crate::problem::{decode_index, Monomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn demo_brute_force() {
        let r = brute_force_solve(&instances::demonstration()).unwrap();
        assert_eq!(r.feasible, vec![0, 1, 2, 27, 28, 29]);
        assert_eq!(r.optima, vec![29]);
        assert_eq!(r.optimum_cost, Some(4.0));
        assert_eq!(r.evaluations, 243);
    }

    #[test]
    fn demo_branch_and_bound() {
        let r = branch_and_bound_solve(&instances::demonstration());
        assert_eq!(r.optimum_cost, Some(4.0));
        assert_eq!(r.optimum, Some(decode_index(29, 5, 3).unwrap()));
        assert!(r.first_incumbent_cost.unwrap() <= 4.0);
        assert!(r.nodes > 0);
    }

    #[test]
    fn unconstrained_linear() {
        let p = IpProblem::new(1, 3, Polynomial::linear(1, 0, 1.0), vec![]).unwrap();
        let bf = brute_force_solve(&p).unwrap();
        assert_eq!((bf.optima.clone(), bf.optimum_cost), (vec![2], Some(2.0)));
        let bb = branch_and_bound_solve(&p);
        assert_eq!(bb.optimum, Some(vec![2]));
        // ascending values: the first leaf is x = 0
        assert_eq!(bb.first_incumbent_cost, Some(0.0));
    }

    #[test]
    fn contradictory_is_empty() {
        let p = instances::contradictory();
        assert!(brute_force_solve(&p).unwrap().feasible.is_empty());
        let bb = branch_and_bound_solve(&p);
        assert_eq!((bb.optimum, bb.optimum_cost), (None, None));
    }

    #[test]
    fn enumeration_cap() {
        let p = IpProblem::new(30, 4, Polynomial::zero(30), vec![]).unwrap();
        assert!(matches!(brute_force_solve(&p), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn partial_range_brackets_completions() {
        let p = Polynomial::new(
            3,
            vec![Monomial::new(-2.0, vec![1, 1, 0]), Monomial::new(1.5, vec![0, 2, 1]), Monomial::new(1.0, vec![0; 3])],
        )
        .unwrap();
        let (lo, hi) = partial_range(&p, &[2], 3);
        for x2 in 0..3 {
            for x3 in 0..3 {
                let v = p.eval(&[2, x2, x3]);
                assert!(lo <= v && v <= hi);
            }
        }
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = instances::random_instance(&mut rng, &RandomSpec::default());
            let bf = brute_force_solve(&p).unwrap();
            let bb = branch_and_bound_solve(&p);
            assert_eq!(bf.evaluations as u128, p.search_space());
            assert_eq!(bf.optimum_cost, bb.optimum_cost, "{p:?}");
            assert_eq!(bf.feasible.is_empty(), bb.optimum.is_none());
            if let (Some(first), Some(best)) = (bb.first_incumbent_cost, bb.optimum_cost) {
                assert!(first <= best);
            }
        }
    }
}
