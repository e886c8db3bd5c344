//! Hessian-based convexity probing of constraint polynomials.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{IpProblem, Polynomial};

const EIGEN_TOL: f64 = 1e-9;
const MAX_PROBES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convexity {
    Linear,
    /// No probe point showed a negative curvature direction. Grid-limited.
    Convex,
    NonConvex,
}

/// Probe grid over the box: `points_per_axis` evenly spaced values per
/// variable, plus every integer value when `include_integers` is set and
/// the constraint's support is small enough to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeGrid {
    pub points_per_axis: usize,
    pub include_integers: bool,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        ProbeGrid { points_per_axis: 5, include_integers: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintConvexity {
    pub index: usize,
    pub classification: Convexity,
    /// Variables the Hessian is taken over (the constraint's support).
    pub variables: Vec<usize>,
    /// Full-length point (unused variables at 0) where negative curvature
    /// was found.
    pub witness: Option<Vec<f64>>,
    pub witness_eigenvalues: Option<Vec<f64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub constraints: Vec<ConstraintConvexity>,
}

/// Symbolic Hessian of `p` restricted to `vars`.
pub(crate) fn hessian(p: &Polynomial, vars: &[usize]) -> Vec<Vec<Polynomial>> {
    vars.iter()
        .map(|&a| {
            let da = p.derivative(a);
            vars.iter().map(|&b| da.derivative(b)).collect()
        })
        .collect()
}

fn axis_values(d: usize, grid: ProbeGrid, with_integers: bool) -> Vec<f64> {
    let top = (d - 1) as f64;
    let k = grid.points_per_axis.max(2);
    let mut vals: Vec<f64> = (0..k).map(|i| top * i as f64 / (k - 1) as f64).collect();
    if with_integers {
        vals.extend((0..d).map(|v| v as f64));
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

fn classify(index: usize, p: &Polynomial, n: usize, d: usize, grid: ProbeGrid) -> ConstraintConvexity {
    let vars = p.support();
    let h = hessian(p, &vars);
    let mut out = ConstraintConvexity {
        index,
        classification: Convexity::Linear,
        variables: vars.clone(),
        witness: None,
        witness_eigenvalues: None,
        min_eigenvalue: 0.0,
        max_eigenvalue: 0.0,
        probes: 0,
    };
    if h.iter().flatten().all(Polynomial::is_zero) {
        return out;
    }

    let k = vars.len();
    let enumerable = (d as f64).powi(k as i32) <= 4096.0;
    let mut axis = axis_values(d, grid, grid.include_integers && enumerable);
    if (axis.len() as f64).powi(k as i32) > MAX_PROBES as f64 {
        axis = axis_values(d, grid, false);
    }

    let mut point = vec![0.0; n];
    let mut digits = vec![0usize; k];
    let mut min_all = f64::INFINITY;
    let mut max_all = f64::NEG_INFINITY;
    let mut indefinite: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut negative: Option<(Vec<f64>, Vec<f64>)> = None;
    loop {
        for (slot, &v) in vars.iter().enumerate() {
            point[v] = axis[digits[slot]];
        }
        let m = DMatrix::from_fn(k, k, |i, j| h[i][j].eval_real(&point));
        let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let (lo, hi) = (eig[0], eig[k - 1]);
        min_all = min_all.min(lo);
        max_all = max_all.max(hi);
        out.probes += 1;
        if lo < -EIGEN_TOL {
            if hi > EIGEN_TOL && indefinite.is_none() {
                indefinite = Some((point.clone(), eig.clone()));
            }
            if negative.is_none() {
                negative = Some((point.clone(), eig));
            }
        }

        // odometer over the probe grid
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < axis.len() {
                break;
            }
            digits[i] = 0;
        }
        if digits.iter().all(|&x| x == 0) {
            break;
        }
    }

    out.min_eigenvalue = min_all;
    out.max_eigenvalue = max_all;
    match indefinite.or(negative) {
        Some((w, e)) => {
            out.classification = Convexity::NonConvex;
            out.witness = Some(w);
            out.witness_eigenvalues = Some(e);
        }
        None => out.classification = Convexity::Convex,
    }
    out
}

/// Classifies each constraint as linear, convex (on the probe grid), or
/// non-convex with a witness point of negative curvature.
pub fn convexity_report(p: &IpProblem, grid: ProbeGrid) -> ConvexityReport {
    ConvexityReport {
        constraints: p.constraints().iter().enumerate().map(|(i, c)| classify(i, &c.lhs, p.n(), p.d(), grid)).collect(),
    }
}
