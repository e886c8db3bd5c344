//! Closed-form success probabilities, repetition counts and complexity
//! models. Complexity values are in "model units": unit hidden constants and
//! base-2 logarithms, never seconds.

use serde::Serialize;

use crate::error::{Error, Result};

/// Success probability of reading the optimum in the ideal exact-phase
/// case: `(1 / N) (1 - (1 + C*)^-2)`.
pub fn ideal_success_probability(n_ys: u64, c_star: f64) -> Result<f64> {
    if n_ys == 0 {
        return Err(Error::InvalidParameter("empty feasible region".into()));
    }
    if c_star.is_nan() || c_star < 0.0 {
        return Err(Error::InvalidParameter(format!("optimum cost {c_star} must be nonnegative")));
    }
    Ok((1.0 - (1.0 + c_star).powi(-2)) / n_ys as f64)
}

/// Bracketing success probabilities when each estimated phase is off by at
/// most `delta`: the optimum cost seen by the rotation lies within
/// `C* -+ C_ub delta`.
pub fn success_probability_bounds(n_ys: u64, c_star: f64, c_ub: f64, delta: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidProbability(delta));
    }
    let low = 1.0 + c_star - c_ub * delta;
    if low <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "phase error {delta} too large: 1 + C* - C_ub delta = {low} is not positive"
        )));
    }
    let p = ideal_success_probability(n_ys, c_star)?;
    if delta == 0.0 {
        return Ok((p, p));
    }
    let high = 1.0 + c_star + c_ub * delta;
    let n = n_ys as f64;
    Ok(((1.0 - low.powi(-2)) / n, (1.0 - high.powi(-2)) / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resolvability {
    pub resolvable: bool,
    /// `(C*_E - C_dagger) - (eps C_ub + 2 C_ub delta)`; positive when resolvable.
    pub margin: f64,
}

/// Whether the optimum and the runner-up stay distinguishable after phase
/// estimation with precision `eps` and accuracy `delta`.
pub fn resolvable(c_e_star: f64, c_dagger: f64, c_ub: f64, eps: f64, delta: f64) -> Resolvability {
    let margin = (c_e_star - c_dagger) - (eps * c_ub + 2.0 * c_ub * delta);
    Resolvability { resolvable: margin > 0.0, margin }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Repetitions {
    Finite(u64),
    /// `p = 0`: no number of attempts ever succeeds.
    Infinite,
}

impl Repetitions {
    pub fn finite(self) -> Option<u64> {
        match self {
            Repetitions::Finite(r) => Some(r),
            Repetitions::Infinite => None,
        }
    }
}

fn at_least_one(p: f64, r: u64) -> f64 {
    1.0 - (1.0 - p).powf(r as f64)
}

/// Smallest `r` with `1 - (1 - p)^r >= target`.
pub fn repetitions(p: f64, target: f64) -> Result<Repetitions> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidProbability(target));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 {
        return Ok(Repetitions::Infinite);
    }
    if p == 1.0 {
        return Ok(Repetitions::Finite(1));
    }
    let estimate = ((-target).ln_1p() / (-p).ln_1p()).ceil().max(1.0) as u64;
    // settle rounding at the ceiling against the same expression callers check
    let mut r = estimate;
    while at_least_one(p, r) < target {
        r += 1;
    }
    while r > 1 && at_least_one(p, r - 1) >= target {
        r -= 1;
    }
    Ok(Repetitions::Finite(r))
}

/// Parameters of the quantum time model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityParams {
    pub n: u32,
    pub m: u32,
    pub d: u32,
    pub eps_qpe: f64,
    pub eps_u: f64,
    pub eps_g: f64,
    pub eps_r: f64,
    pub l: u32,
    /// Feasible-region size; the worst case of one state when unknown.
    pub n_ys: Option<u64>,
}

impl ComplexityParams {
    /// Sizes with every precision set to `eps` and `l = ceil(log2(1 / eps))`.
    pub fn new(n: u32, m: u32, d: u32, eps: f64) -> Self {
        ComplexityParams {
            n,
            m,
            d,
            eps_qpe: eps,
            eps_u: eps,
            eps_g: eps,
            eps_r: eps,
            l: (1.0 / eps).log2().ceil().max(1.0) as u32,
            n_ys: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d < 2 {
            return Err(Error::InvalidParameter("need n >= 1 and d >= 2".into()));
        }
        for e in [self.eps_qpe, self.eps_u, self.eps_g, self.eps_r] {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!("precision {e} outside (0, 1)")));
            }
        }
        if self.n_ys == Some(0) {
            return Err(Error::InvalidParameter("feasible-region size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRow {
    pub step: &'static str,
    pub transition: &'static str,
    /// Row formula with its precision factors.
    pub value: f64,
    /// Contribution to the leading-order total (zero for sub-leading rows).
    pub leading: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumTimeModel {
    pub rows: Vec<ModelRow>,
    /// Sum of every row's full value.
    pub total: f64,
    /// `m n^2 log2 d + d^{n/2} / sqrt(N) + n / eps_QPE`.
    pub leading_total: f64,
}

/// Step-by-step quantum time model with unit constants.
pub fn quantum_time_model(p: &ComplexityParams) -> Result<QuantumTimeModel> {
    p.validate()?;
    let (n, m, d, l) = (p.n as f64, p.m as f64, p.d as f64, p.l as f64);
    let log_d = d.log2();
    let inv_log = |e: f64| (1.0 / e).log2();
    let entangle = m * n * n * log_d;
    let amplify = d.powf(n / 2.0) / (p.n_ys.unwrap_or(1) as f64).sqrt();
    let phase = n / p.eps_qpe;
    let row = |step, transition, value, leading| ModelRow { step, transition, value, leading };
    let rows = vec![
        row("1", "psi1 -> psi2", n, 0.0),
        row("2", "psi2 -> psi3", entangle * inv_log(p.eps_u), entangle),
        row("3", "psi3 -> psi4", amplify * inv_log(p.eps_g), amplify),
        row("4a", "psi4 -> psi5", 0.0, 0.0),
        row("4b", "psi5 -> psi6", l, 0.0),
        row("5a", "psi6 -> psi7", phase, phase),
        row("5b", "psi7 -> psi8", l * l, 0.0),
        row("6", "psi8 -> psi9", inv_log(p.eps_r), 0.0),
        row("7", "psi9 -> psi10", 0.0, 0.0),
    ];
    Ok(QuantumTimeModel {
        total: rows.iter().map(|r| r.value).sum(),
        leading_total: rows.iter().map(|r| r.leading).sum(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalModels {
    /// `d^n` assignments times the per-assignment evaluation cost.
    pub brute_force: f64,
    /// `(log2 n)^{3n}`.
    pub reis_rothvoss: f64,
    /// `n <= 2`, where `log2 n <= 1` makes the exact-algorithm bound vacuous.
    pub reis_rothvoss_degenerate: bool,
}

pub fn classical_time_models(n: u32, d: u32, eval_cost: f64) -> ClassicalModels {
    let nf = n as f64;
    ClassicalModels {
        brute_force: (d as f64).powf(nf) * eval_cost,
        reis_rothvoss: nf.log2().powf(3.0 * nf),
        reis_rothvoss_degenerate: n <= 2,
    }
}

/// Smallest `n` in `ns` at which brute force exceeds the quantum
/// leading-order total.
pub fn brute_force_crossover(ns: std::ops::RangeInclusive<u32>, m: u32, d: u32, eps: f64) -> Result<Option<u32>> {
    for n in ns {
        let q = quantum_time_model(&ComplexityParams::new(n, m, d, eps))?.leading_total;
        if classical_time_models(n, d, 1.0).brute_force > q {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub n: u32,
    pub m: u32,
    pub d: u32,
    pub eps: f64,
    pub quantum: f64,
    pub brute_force: f64,
    pub reis_rothvoss: f64,
}

/// Quantum and classical models over an `(n, m)` grid.
pub fn model_grid(
    ns: std::ops::RangeInclusive<u32>,
    ms: std::ops::RangeInclusive<u32>,
    d: u32,
    eps: f64,
) -> Result<Vec<GridRow>> {
    if ns.is_empty() || ms.is_empty() {
        return Err(Error::InvalidParameter("empty parameter range".into()));
    }
    let mut rows = Vec::new();
    for n in ns {
        for m in ms.clone() {
            let q = quantum_time_model(&ComplexityParams::new(n, m, d, eps))?;
            let c = classical_time_models(n, d, 1.0);
            rows.push(GridRow {
                n,
                m,
                d,
                eps,
                quantum: q.leading_total,
                brute_force: c.brute_force,
                reis_rothvoss: c.reis_rothvoss,
            });
        }
    }
    Ok(rows)
}

/// Target overall success probabilities of the repetition curves.
pub const R_CURVE_TARGETS: [f64; 4] = [0.51, 0.67, 0.80, 0.999];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RCurvePoint {
    pub target: f64,
    pub r: u64,
    /// Per-attempt probability needed to reach `target` in `r` attempts.
    pub p: f64,
}

/// `p = 1 - (1 - P)^{1/r}` for `r = 1..=r_max` and each target `P`.
pub fn r_curves(targets: &[f64], r_max: u64) -> Result<Vec<RCurvePoint>> {
    if r_max == 0 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    let mut out = Vec::new();
    for &target in targets {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::InvalidProbability(target));
        }
        for r in 1..=r_max {
            out.push(RCurvePoint { target, r, p: 1.0 - (1.0 - target).powf(1.0 / r as f64) });
        }
    }
    Ok(out)
}
