//! Amplitude amplification of the all-ones constraint pattern and the
//! empty-feasible-region diagnosis.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::distill::gamma_histogram;
use crate::error::{Error, Result};
use crate::state::{HybridState, QubitPattern};

/// Target mass at or below which the feasible region is declared empty.
pub const UNDECIDABLE_TOL: f64 = 1e-12;

/// Negates every amplitude whose qubit register reads `1...1`.
pub fn mark_target(mut s: HybridState) -> HybridState {
    let width = s.layout().qubit_dim();
    let target = QubitPattern::all_ones(s.layout().m()).bits();
    s.amplitudes_mut().par_chunks_mut(width).for_each(|block| block[target] = -block[target]);
    s
}

/// Reflection about `reference`: `s -> 2 |ref><ref|s> - s`.
pub fn diffuse(mut s: HybridState, reference: &HybridState) -> Result<HybridState> {
    if s.layout() != reference.layout() {
        return Err(Error::InvalidParameter("reflection about a state of another layout".into()));
    }
    let overlap = reference.inner(&s) * 2.0;
    s.amplitudes_mut().par_iter_mut().zip(reference.amplitudes().par_iter()).for_each(|(a, r)| *a = r * overlap - *a);
    Ok(s)
}

/// One Grover iteration: mark, then reflect about `reference`.
pub fn grover_step(s: HybridState, reference: &HybridState) -> Result<HybridState> {
    diffuse(mark_target(s), reference)
}

/// `round(pi / (4 theta) - 1/2)` with `theta = asin(sqrt(p))`, floored at 0.
pub fn optimal_iterations(p: f64) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let theta = p.sqrt().asin();
    Ok((PI / (4.0 * theta) - 0.5).round().max(0.0) as u64)
}

#[derive(Debug, Clone)]
pub struct Amplified {
    pub state: HybridState,
    pub iterations: u64,
    pub initial_probability: f64,
    pub final_probability: f64,
    pub theta: f64,
}

/// Runs the optimal number of Grover iterations on the entangled state.
pub fn amplify(psi3: &HybridState) -> Result<Amplified> {
    let target = QubitPattern::all_ones(psi3.layout().m());
    let initial = psi3.qubit_pattern_probability(&target)?;
    if initial <= UNDECIDABLE_TOL {
        return Err(Error::Undecidable);
    }
    let iterations = optimal_iterations(initial.min(1.0))?;
    let mut s = psi3.clone();
    for _ in 0..iterations {
        s = grover_step(s, psi3)?;
    }
    let final_probability = s.qubit_pattern_probability(&target)?;
    Ok(Amplified {
        state: s,
        iterations,
        initial_probability: initial,
        final_probability,
        theta: initial.min(1.0).sqrt().asin(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnosis {
    pub decidable: bool,
    pub target_probability: f64,
    /// Largest number of simultaneously satisfied constraints with nonzero
    /// mass.
    pub gamma_max: usize,
    /// Probability of each Hamming weight `0..=m`.
    pub gamma_masses: Vec<f64>,
    /// `m - gamma_max`: constraints to drop before any assignment survives.
    pub relaxations: usize,
}

/// Reads the constraint register of the entangled state and decides
/// whether any assignment satisfies every constraint.
pub fn detect_undecidable(psi3: &HybridState, tol: f64) -> Diagnosis {
    let gamma_masses = gamma_histogram(psi3);
    let m = gamma_masses.len() - 1;
    let gamma_max = (0..=m).rev().find(|&g| gamma_masses[g] > tol).unwrap_or(0);
    let target_probability = gamma_masses[m];
    Diagnosis {
        decidable: target_probability > tol,
        target_probability,
        gamma_max,
        gamma_masses,
        relaxations: m - gamma_max,
    }
}
