//! Stage II: cost phases, phase estimation, the ancilla rotation and its
//! post-selection, and the end-to-end solve pipeline.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplify::{amplify, detect_undecidable, Diagnosis};
use crate::analysis::{
    classical_time_models, ideal_success_probability, quantum_time_model, repetitions, resolvable, ClassicalModels,
    ComplexityParams, QuantumTimeModel, Repetitions, Resolvability,
};
use crate::distill::{build_entanglers, EntanglerPermutation};
use crate::error::{Error, Result};
use crate::problem::{cost_upper_bound, decode_index, CostBound, CubMode, IpProblem, Polynomial};
use crate::qft::Qft;
use crate::state::{sample_distribution, HybridState, QubitPattern, RegisterLayout, DEFAULT_DIM_CAP, POSTSELECT_TOL};

pub const DEFAULT_L: usize = 4;
pub const MAX_L: usize = 16;
pub const DEFAULT_TARGET: f64 = 0.99;

/// Joint `(y, j)` probabilities at or below this are left out of the report.
pub const DISTRIBUTION_FLOOR: f64 = 1e-12;

/// Mass routed through the singular rotation branch above which the report
/// carries a warning.
pub const SINGULAR_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseEntry {
    pub y: usize,
    pub cost: f64,
    /// `(C(y) + 1) / C_ub`.
    pub phase: f64,
}

/// Normalized cost phases of the feasible states, ascending in `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTable {
    pub cub: f64,
    pub entries: Vec<PhaseEntry>,
}

pub fn build_phase_table(p: &IpProblem, feasible: &[usize], cub: f64) -> Result<PhaseTable> {
    let mut entries = feasible
        .iter()
        .map(|&y| {
            let x = decode_index(y, p.n(), p.d())?;
            let cost = p.cost().eval(&x);
            if cost < 0.0 {
                return Err(Error::NegativeCost { y, cost });
            }
            let phase = (cost + 1.0) / cub;
            if !(phase > 0.0 && phase < 1.0) {
                return Err(Error::CostBoundViolation { cub, y, cost });
            }
            Ok(PhaseEntry { y, cost, phase })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by_key(|e| e.y);
    Ok(PhaseTable { cub, entries })
}

impl PhaseTable {
    pub fn get(&self, y: usize) -> Option<&PhaseEntry> {
        self.entries.binary_search_by_key(&y, |e| e.y).ok().map(|i| &self.entries[i])
    }

    /// Eigenvalue `exp(2 pi i phase(y) k)` of the `k`-th power of the cost
    /// oracle on `|y>`.
    pub fn phase_oracle_check(&self, y: usize, k: u64) -> Result<Complex64> {
        let e = self.get(y).ok_or(Error::IndexOutOfRange { index: y, size: self.entries.len() })?;
        // reduce before multiplying so large k keeps full precision
        let turns = (e.phase * k as f64).fract();
        Ok(Complex64::from_polar(1.0, 2.0 * PI * turns))
    }
}

/// The same eigenvalue built as a product of one phase factor per monomial
/// and one for the `+1` offset, as a tensor-factorized oracle would apply it.
pub fn factorized_phase(cost: &Polynomial, x: &[usize], cub: f64, k: u64) -> Complex64 {
    let offset = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / cub);
    cost.terms().iter().fold(offset, |acc, t| {
        let single = Polynomial::new(cost.n(), vec![t.clone()]).expect("term of a valid polynomial");
        acc * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * single.eval(x) / cub)
    })
}

/// How the ancilla rotation angle is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationMode {
    /// From the measured register value `j`: `v = C_ub j / 2^l`.
    #[default]
    Measured,
    /// From the true cost: `v = 1 + C(y)`, independent of `j`.
    Ideal,
}

/// Amplitudes over `(slot, k, a)` with index `((slot * 2^l) + k) * 2 + a`,
/// one slot per feasible state in ascending `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageTwoState {
    l: usize,
    slots: Vec<usize>,
    amps: Vec<Complex64>,
}

impl StageTwoState {
    /// Uniform register, ancilla `|0>`, weighted by the collapsed feasible
    /// amplitudes `(y, amplitude)`.
    pub fn init(feasible: &[(usize, Complex64)], l: usize) -> Result<Self> {
        if l == 0 || l > MAX_L {
            return Err(Error::RegisterWidth(l));
        }
        let width = 1usize << l;
        let scale = 1.0 / (width as f64).sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); feasible.len() * width * 2];
        for (slot, (_, a)) in feasible.iter().enumerate() {
            for k in 0..width {
                amps[(slot * width + k) * 2] = a * scale;
            }
        }
        Ok(StageTwoState { l, slots: feasible.iter().map(|f| f.0).collect(), amps })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn width(&self) -> usize {
        1 << self.l
    }

    /// Feasible `y` of each slot.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn index(&self, slot: usize, k: usize, a: usize) -> usize {
        (slot * self.width() + k) * 2 + a
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Controlled powers of the cost oracle followed by the inverse QFT on
    /// the estimation register.
    pub fn qpe(mut self, table: &PhaseTable) -> Result<Self> {
        let width = self.width();
        let phases = self
            .slots
            .iter()
            .map(|&y| {
                table.get(y).map(|e| e.phase).ok_or(Error::IndexOutOfRange { index: y, size: table.entries.len() })
            })
            .collect::<Result<Vec<f64>>>()?;
        let qft = Qft::new(self.l)?;
        self.amps.par_chunks_mut(width * 2).zip(phases.par_iter()).for_each(|(block, &phase)| {
            for a in 0..2 {
                // the ancilla usually still reads |0>, leaving the a = 1 half empty
                if (0..width).all(|k| block[k * 2 + a] == Complex64::new(0.0, 0.0)) {
                    continue;
                }
                let mut reg: Vec<Complex64> = (0..width)
                    .map(|k| block[k * 2 + a] * Complex64::from_polar(1.0, 2.0 * PI * (phase * k as f64).fract()))
                    .collect();
                qft.inverse(&mut reg);
                for (k, v) in reg.into_iter().enumerate() {
                    block[k * 2 + a] = v;
                }
            }
        });
        Ok(self)
    }

    /// Rotation parameter `v` of register value `j` in `slot`, `None` on the
    /// singular branch that sends the ancilla to `|1>`.
    fn rotation_parameter(&self, slot: usize, j: usize, table: &PhaseTable, mode: RotationMode) -> Option<f64> {
        let v = match mode {
            RotationMode::Measured => table.cub * j as f64 / self.width() as f64,
            RotationMode::Ideal => 1.0 + table.get(self.slots[slot])?.cost,
        };
        let singular = mode == RotationMode::Measured && j == 0;
        (!singular && v >= 1.0).then_some(v)
    }

    /// Probability mass on register values whose rotation is singular.
    pub fn singular_mass(&self, table: &PhaseTable, mode: RotationMode) -> f64 {
        let width = self.width();
        (0..self.slots.len())
            .flat_map(|s| (0..width).map(move |j| (s, j)))
            .filter(|&(s, j)| self.rotation_parameter(s, j, table, mode).is_none())
            .map(|(s, j)| self.amps[self.index(s, j, 0)].norm_sqr() + self.amps[self.index(s, j, 1)].norm_sqr())
            .sum()
    }

    /// Applies `[[c, -s], [s, c]]` with `s = 1/v`, `c = sqrt(1 - 1/v^2)` to
    /// the ancilla, or `X` on the singular branch.
    pub fn controlled_rotation(mut self, table: &PhaseTable, mode: RotationMode) -> Self {
        let width = self.width();
        let params: Vec<Option<f64>> = (0..self.slots.len() * width)
            .map(|sj| self.rotation_parameter(sj / width, sj % width, table, mode))
            .collect();
        self.amps.par_chunks_mut(2).zip(params.par_iter()).for_each(|(pair, v)| {
            let (a0, a1) = (pair[0], pair[1]);
            match v {
                Some(v) => {
                    let s = 1.0 / v;
                    let c = (1.0 - s * s).max(0.0).sqrt();
                    pair[0] = a0 * c - a1 * s;
                    pair[1] = a0 * s + a1 * c;
                }
                None => pair.swap(0, 1),
            }
        });
        self
    }

    /// Probability of each `(slot, j)` with the ancilla reading `a`.
    fn ancilla_probabilities(&self, a: usize) -> Vec<f64> {
        self.amps.iter().skip(a).step_by(2).map(Complex64::norm_sqr).collect()
    }

    /// Measures the ancilla in `|0>`; returns the renormalized distribution
    /// over `(slot, j)` and the outcome probability.
    pub fn postselect_ancilla_zero(&self) -> Result<(Vec<f64>, f64)> {
        let probs = self.ancilla_probabilities(0);
        let p0: f64 = probs.iter().sum();
        if p0 <= POSTSELECT_TOL {
            return Err(Error::DegenerateObjective);
        }
        Ok((probs.into_iter().map(|p| p / p0).collect(), p0))
    }

    /// Repeats full measurements of `(y, j, a)` until the ancilla reads 0.
    pub fn resample_until_zero(&self, seed: u64, max_attempts: u64) -> ResampleOutcome {
        let probs: Vec<f64> = self.amps.iter().map(Complex64::norm_sqr).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(dist) = WeightedIndex::new(&probs) else {
            return ResampleOutcome { attempts: 0, y: None, j: None };
        };
        for attempt in 1..=max_attempts {
            let idx = dist.sample(&mut rng);
            if idx % 2 == 0 {
                let sj = idx / 2;
                return ResampleOutcome {
                    attempts: attempt,
                    y: Some(self.slots[sj / self.width()]),
                    j: Some(sj % self.width()),
                };
            }
        }
        ResampleOutcome { attempts: max_attempts, y: None, j: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResampleOutcome {
    pub attempts: u64,
    pub y: Option<usize>,
    pub j: Option<usize>,
}

/// Smallest register width that represents every phase exactly when `cub`
/// is a power of two and the costs are integers.
pub fn exact_phase_width(cub: f64) -> Option<usize> {
    let l = cub.log2();
    (l.fract() == 0.0 && l >= 1.0 && l <= MAX_L as f64).then_some(l as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Readout {
    /// The exact final distribution.
    Exact,
    /// `shots` seeded samples of the post-selected distribution.
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    /// Estimation register width; `None` picks the exact width for a
    /// power-of-two bound and `DEFAULT_L` otherwise.
    pub l: Option<usize>,
    pub cub: CubMode,
    pub readout: Readout,
    pub rotation: RotationMode,
    /// Overall success probability used for the repetition count.
    pub target: f64,
    pub dim_cap: usize,
    pub tol: f64,
    /// Seed of the literal repeat-until-zero loop, when requested.
    pub resample: Option<u64>,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            l: Some(DEFAULT_L),
            cub: CubMode::Guaranteed,
            readout: Readout::Exact,
            rotation: RotationMode::Measured,
            target: DEFAULT_TARGET,
            dim_cap: DEFAULT_DIM_CAP,
            tol: POSTSELECT_TOL,
            resample: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Solved,
    /// The feasible region is empty.
    Undecidable,
    /// Every feasible cost is zero, so the ancilla never reads 0.
    DegenerateObjective,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternProbability {
    pub pattern: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglerSummary {
    pub constraint: usize,
    pub flip_count: usize,
    pub exact: bool,
    pub boundary_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageOneReport {
    pub entanglers: Vec<EntanglerSummary>,
    pub patterns_before: Vec<PatternProbability>,
    pub patterns_after: Vec<PatternProbability>,
    pub diagnosis: Diagnosis,
    pub grover_iterations: u64,
    pub target_probability_before: f64,
    pub target_probability_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibleState {
    pub y: usize,
    pub assignment: Vec<usize>,
    pub cost: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointProbability {
    pub y: usize,
    pub j: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTwoReport {
    pub l: usize,
    pub rotation: RotationMode,
    /// Probability of the ancilla reading 0.
    pub p0: f64,
    pub singular_mass: f64,
    /// Post-selected distribution over `(y, j)`, entries at or below
    /// `DISTRIBUTION_FLOOR` omitted.
    pub final_distribution: Vec<JointProbability>,
    /// Feasible-state probabilities entering Stage II, ascending `y`.
    pub y_before: Vec<f64>,
    /// Exact post-selected `y` marginal, ascending `y`.
    pub y_after: Vec<f64>,
    /// Sampled `y` frequencies in shot mode.
    pub y_sampled: Option<Vec<f64>>,
    pub resample: Option<ResampleOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub y: usize,
    pub assignment: Vec<usize>,
    pub cost: f64,
    /// `j / 2^l * C_ub - 1` at the most likely `j` of this state.
    pub estimated_cost: f64,
    /// Conditional probability of reading this state after post-selection.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessReport {
    /// Conditional probability of the decoded optimum.
    pub p: f64,
    /// Closed-form exact-phase value for the same optimum cost.
    pub p_ideal: f64,
    pub target: f64,
    pub repetitions: Repetitions,
    /// Separation between the estimated optimum and the next distinct cost,
    /// with precision `2^-l` and zero accuracy error.
    pub resolvability: Option<Resolvability>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub quantum: QuantumTimeModel,
    pub classical: ClassicalModels,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub search_space: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub problem: ProblemSummary,
    pub cost_bound: CostBound,
    pub readout: Readout,
    pub stage_one: StageOneReport,
    pub feasible: Vec<FeasibleState>,
    pub n_ys: usize,
    pub stage_two: Option<StageTwoReport>,
    pub optimum: Option<Optimum>,
    pub success: Option<SuccessReport>,
    pub complexity: ComplexityReport,
    pub warnings: Vec<String>,
}

fn pattern_table(probs: &[f64], m: usize) -> Vec<PatternProbability> {
    probs
        .iter()
        .enumerate()
        .map(|(q, &probability)| PatternProbability { pattern: QubitPattern::new(q, m).to_string(), probability })
        .collect()
}

fn summarize(e: &EntanglerPermutation) -> EntanglerSummary {
    EntanglerSummary {
        constraint: e.constraint,
        flip_count: e.flip_set().len(),
        exact: e.exact,
        boundary_warning: e.boundary_warning,
    }
}

fn complexity(p: &IpProblem, l: usize, n_ys: usize) -> Result<ComplexityReport> {
    let mut params = ComplexityParams::new(p.n() as u32, p.m() as u32, p.d() as u32, 0.5f64.powi(l as i32));
    params.l = l as u32;
    params.n_ys = (n_ys > 0).then_some(n_ys as u64);
    Ok(ComplexityReport {
        quantum: quantum_time_model(&params)?,
        classical: classical_time_models(p.n() as u32, p.d() as u32, 1.0),
    })
}

/// Index of the largest value; the first one on ties.
fn argmax(v: &[f64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &x)| match best {
            Some((_, b)) if b >= x => best,
            _ => Some((i, x)),
        })
        .map(|(i, _)| i)
}

/// Runs both stages on `p` and assembles the report.
pub fn solve(p: &IpProblem, params: &SolveParams) -> Result<SolveReport> {
    if !(params.target > 0.0 && params.target < 1.0) {
        return Err(Error::InvalidProbability(params.target));
    }
    let cost_bound = cost_upper_bound(p, params.cub)?;
    let cub = cost_bound.value;
    let l = match params.l {
        Some(l) => l,
        None => exact_phase_width(cub).unwrap_or(DEFAULT_L),
    };
    if l == 0 || l > MAX_L {
        return Err(Error::RegisterWidth(l));
    }
    let mut warnings: Vec<String> = cost_bound.warning.iter().cloned().collect();

    // Stage I
    let layout = RegisterLayout::with_cap(p.n(), p.d(), p.m(), params.dim_cap)?;
    let entanglers = build_entanglers(p)?;
    for e in entanglers.iter().filter(|e| e.boundary_warning) {
        warnings.push(format!("constraint {} was compared in floating point within 1e-9 of its bound", e.constraint));
    }
    let order: Vec<usize> = (0..entanglers.len()).collect();
    let psi3 =
        crate::distill::apply_entanglers(HybridState::init(layout).apply_hadamard_all_qudits(), &entanglers, &order)?;
    let m = p.m();
    let diagnosis = detect_undecidable(&psi3, params.tol);
    let patterns_before = psi3.pattern_probabilities();
    let mut stage_one = StageOneReport {
        entanglers: entanglers.iter().map(summarize).collect(),
        patterns_before: pattern_table(&patterns_before, m),
        patterns_after: pattern_table(&patterns_before, m),
        diagnosis: diagnosis.clone(),
        grover_iterations: 0,
        target_probability_before: diagnosis.target_probability,
        target_probability_after: diagnosis.target_probability,
    };
    let problem = ProblemSummary { n: p.n(), d: p.d(), m, search_space: p.search_space() };
    let early = |status, stage_one, feasible: Vec<FeasibleState>, warnings| -> Result<SolveReport> {
        Ok(SolveReport {
            status,
            problem: problem.clone(),
            cost_bound: cost_bound.clone(),
            readout: params.readout,
            stage_one,
            n_ys: feasible.len(),
            feasible,
            stage_two: None,
            optimum: None,
            success: None,
            complexity: complexity(p, l, 0)?,
            warnings,
        })
    };
    if !diagnosis.decidable {
        return early(SolveStatus::Undecidable, stage_one, Vec::new(), warnings);
    }

    let amplified = amplify(&psi3)?;
    stage_one.grover_iterations = amplified.iterations;
    stage_one.target_probability_after = amplified.final_probability;
    stage_one.patterns_after = pattern_table(&amplified.state.pattern_probabilities(), m);
    let (collapsed, _) = amplified.state.postselect_qubits(&QubitPattern::all_ones(m))?;
    let feasible_amps: Vec<(usize, Complex64)> = collapsed
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > params.tol)
        .map(|(y, a)| (y, *a))
        .collect();
    let feasible_ys: Vec<usize> = feasible_amps.iter().map(|f| f.0).collect();
    let table = build_phase_table(p, &feasible_ys, cub)?;
    let feasible: Vec<FeasibleState> = table
        .entries
        .iter()
        .map(|e| {
            Ok(FeasibleState { y: e.y, assignment: decode_index(e.y, p.n(), p.d())?, cost: e.cost, phase: e.phase })
        })
        .collect::<Result<_>>()?;
    if table.entries.iter().all(|e| e.cost == 0.0) {
        return early(SolveStatus::DegenerateObjective, stage_one, feasible, warnings);
    }

    // Stage II
    let n_ys = feasible.len();
    let width = 1usize << l;
    let stage_two_dim = (n_ys as u128) * (width as u128) * 2;
    if stage_two_dim > params.dim_cap as u128 {
        return Err(Error::DimensionCap { dimension: stage_two_dim, cap: params.dim_cap });
    }
    let psi8 = StageTwoState::init(&feasible_amps, l)?.qpe(&table)?;
    let singular_mass = psi8.singular_mass(&table, params.rotation);
    if singular_mass > SINGULAR_WARN {
        warnings
            .push(format!("{singular_mass:.3e} of the probability sits on register values with a singular rotation"));
    }
    let psi9 = psi8.controlled_rotation(&table, params.rotation);
    let (joint, p0) = match psi9.postselect_ancilla_zero() {
        Ok(v) => v,
        Err(Error::DegenerateObjective) => {
            return early(SolveStatus::DegenerateObjective, stage_one, feasible, warnings);
        }
        Err(e) => return Err(e),
    };
    let y_after: Vec<f64> = joint.chunks(width).map(|c| c.iter().sum()).collect();
    let y_before: Vec<f64> = feasible_amps.iter().map(|(_, a)| a.norm_sqr()).collect();

    let y_sampled = match params.readout {
        Readout::Exact => None,
        Readout::Shots { shots, seed } => {
            let hist = sample_distribution(&joint, shots, seed);
            let mut freq = vec![0.0; n_ys];
            for (idx, count) in hist {
                freq[idx / width] += count as f64 / shots as f64;
            }
            Some(freq)
        }
    };
    let decoded = argmax(y_sampled.as_deref().unwrap_or(&y_after)).expect("nonempty feasible set");
    let peak_j = argmax(&joint[decoded * width..(decoded + 1) * width]).expect("nonempty register");
    let best = &feasible[decoded];
    let optimum = Optimum {
        y: best.y,
        assignment: best.assignment.clone(),
        cost: best.cost,
        estimated_cost: peak_j as f64 / width as f64 * cub - 1.0,
        probability: y_after[decoded],
    };

    let runner_up = feasible.iter().map(|f| f.cost).filter(|&c| c < best.cost).max_by(f64::total_cmp);
    let success = SuccessReport {
        p: optimum.probability,
        p_ideal: ideal_success_probability(n_ys as u64, best.cost)?,
        target: params.target,
        repetitions: repetitions(optimum.probability.min(1.0), params.target)?,
        resolvability: runner_up.map(|c| resolvable(optimum.estimated_cost, c, cub, 1.0 / width as f64, 0.0)),
    };
    if success.resolvability.is_some_and(|r| !r.resolvable) {
        warnings.push("the optimum and the next cost are closer than the phase resolution".into());
    }

    let final_distribution = joint
        .iter()
        .enumerate()
        .filter(|(_, &pr)| pr > DISTRIBUTION_FLOOR)
        .map(|(i, &probability)| JointProbability { y: feasible[i / width].y, j: i % width, probability })
        .collect();
    let resample = params.resample.map(|seed| psi9.resample_until_zero(seed, 1_000_000));

    Ok(SolveReport {
        status: SolveStatus::Solved,
        problem,
        cost_bound: cost_bound.clone(),
        readout: params.readout,
        stage_one,
        n_ys,
        feasible,
        stage_two: Some(StageTwoReport {
            l,
            rotation: params.rotation,
            p0,
            singular_mass,
            final_distribution,
            y_before,
            y_after,
            y_sampled,
            resample,
        }),
        optimum: Some(optimum),
        success: Some(success),
        complexity: complexity(p, l, n_ys)?,
        warnings,
    })
}

/// Exact post-selected `y` marginal keyed by `y`, for callers that only
/// need the final distribution.
pub fn final_marginal(report: &SolveReport) -> BTreeMap<usize, f64> {
    match &report.stage_two {
        Some(s) => report.feasible.iter().map(|f| f.y).zip(s.y_after.iter().copied()).collect(),
        None => BTreeMap::new(),
    }
}
