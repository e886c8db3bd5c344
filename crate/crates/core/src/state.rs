//! Dense state vectors over a register of `n` qudits of dimension `d`
//! followed by `m` qubits.
//!
//! The joint basis index is `y * 2^m + q`, where `y` is the big-endian
//! base-`d` qudit index and `q` the qubit bitstring with constraint 1 as
//! the most significant bit.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of amplitudes in one register.
pub const DEFAULT_DIM_CAP: usize = 1 << 26;

/// Post-selection threshold separating numerically-zero from real mass.
pub const POSTSELECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    d: usize,
    m: usize,
    qudit_dim: usize,
}

impl RegisterLayout {
    pub fn new(n: usize, d: usize, m: usize) -> Result<Self> {
        Self::with_cap(n, d, m, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n: usize, d: usize, m: usize, cap: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let dimension = (d as u128)
            .checked_pow(n as u32)
            .and_then(|q| q.checked_mul(1u128.checked_shl(m as u32)?))
            .unwrap_or(u128::MAX);
        if dimension > cap as u128 {
            return Err(Error::DimensionCap { dimension, cap });
        }
        Ok(RegisterLayout { n, d, m, qudit_dim: d.pow(n as u32) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of qubits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `d^n`.
    pub fn qudit_dim(&self) -> usize {
        self.qudit_dim
    }

    /// `2^m`.
    pub fn qubit_dim(&self) -> usize {
        1 << self.m
    }

    /// Total number of amplitudes, `d^n * 2^m`.
    pub fn dim(&self) -> usize {
        self.qudit_dim << self.m
    }

    pub fn index(&self, y: usize, q: usize) -> usize {
        (y << self.m) | q
    }

    /// Bit mask of the qubit tied to constraint `i` (0-based).
    pub fn qubit_mask(&self, i: usize) -> usize {
        1 << (self.m - 1 - i)
    }

    /// The same qudit register with no qubits attached.
    pub fn qudits_only(&self) -> RegisterLayout {
        RegisterLayout { m: 0, ..*self }
    }
}

/// An `m`-bit qubit pattern, first character = constraint 1 = most
/// significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitPattern {
    bits: usize,
    width: usize,
}

impl QubitPattern {
    pub fn new(bits: usize, width: usize) -> Self {
        debug_assert!(width >= usize::BITS as usize || bits >> width == 0);
        QubitPattern { bits, width }
    }

    pub fn all_ones(width: usize) -> Self {
        QubitPattern { bits: (1usize << width) - 1, width }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn hamming_weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl FromStr for QubitPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s.chars().try_fold(0usize, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok(acc << 1 | 1),
            _ => Err(Error::PatternSyntax(s.to_string())),
        })?;
        Ok(QubitPattern { bits, width: s.len() })
    }
}

impl fmt::Display for QubitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Generalized Hadamard `(H_d)_{beta,alpha} = d^{-1/2} exp(2 pi i alpha beta / d)`,
/// row-major.
pub fn generalized_hadamard(d: usize) -> Vec<Complex64> {
    let scale = 1.0 / (d as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for beta in 0..d {
        for alpha in 0..d {
            let angle = 2.0 * PI * ((alpha * beta) % d) as f64 / d as f64;
            out.push(Complex64::from_polar(scale, angle));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl HybridState {
    /// All qudits and qubits in `|0>`.
    pub fn init(layout: RegisterLayout) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amps[0] = Complex64::new(1.0, 0.0);
        HybridState { layout, amps }
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for a register of dimension {}",
                amps.len(),
                layout.dim()
            )));
        }
        Ok(HybridState { layout, amps })
    }

    /// Computational basis state `|y>|q>`.
    pub fn basis(layout: RegisterLayout, y: usize, q: usize) -> Result<Self> {
        let idx = layout.index(y, q);
        if y >= layout.qudit_dim() || q >= layout.qubit_dim() {
            return Err(Error::IndexOutOfRange { index: idx, size: layout.dim() });
        }
        let mut s = Self::from_amplitudes(layout, vec![Complex64::new(0.0, 0.0); layout.dim()])?;
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &HybridState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies a `d x d` unitary (row-major) to one qudit.
    pub fn apply_qudit_unitary(mut self, qudit: usize, u: &[Complex64]) -> Self {
        let d = self.layout.d;
        assert!(qudit < self.layout.n, "qudit {qudit} out of range");
        assert_eq!(u.len(), d * d, "unitary must be d x d");
        let stride = (self.layout.qudit_dim / d.pow(qudit as u32 + 1)) << self.layout.m;
        self.amps.par_chunks_mut(stride * d).for_each(|block| {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            for off in 0..stride {
                for (alpha, slot) in v.iter_mut().enumerate() {
                    *slot = block[alpha * stride + off];
                }
                for beta in 0..d {
                    block[beta * stride + off] = (0..d).map(|alpha| u[beta * d + alpha] * v[alpha]).sum();
                }
            }
        });
        self
    }

    /// Applies `H_d` to every qudit; qubits are untouched.
    pub fn apply_hadamard_all_qudits(self) -> Self {
        let h = generalized_hadamard(self.layout.d);
        (0..self.layout.n).fold(self, |s, b| s.apply_qudit_unitary(b, &h))
    }

    fn check_pattern(&self, pattern: &QubitPattern) -> Result<()> {
        if pattern.width() != self.layout.m {
            return Err(Error::PatternWidth { expected: self.layout.m, found: pattern.width() });
        }
        Ok(())
    }

    /// Probability of measuring the qubit register in `pattern`.
    pub fn qubit_pattern_probability(&self, pattern: &QubitPattern) -> Result<f64> {
        self.check_pattern(pattern)?;
        Ok(self.amps.iter().skip(pattern.bits()).step_by(self.layout.qubit_dim()).map(Complex64::norm_sqr).sum())
    }

    /// Probability of every qubit pattern, indexed by the pattern bits.
    pub fn pattern_probabilities(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.qubit_dim()];
        for chunk in self.amps.chunks(self.layout.qubit_dim()) {
            for (slot, a) in out.iter_mut().zip(chunk) {
                *slot += a.norm_sqr();
            }
        }
        out
    }

    /// Measures the qubit register, keeping the outcome `pattern`. Returns
    /// the renormalized qudit-only state and the outcome probability.
    pub fn postselect_qubits(&self, pattern: &QubitPattern) -> Result<(HybridState, f64)> {
        let prob = self.qubit_pattern_probability(pattern)?;
        if prob <= POSTSELECT_TOL {
            return Err(Error::ZeroProbability(prob));
        }
        let scale = 1.0 / prob.sqrt();
        let amps = self.amps.iter().skip(pattern.bits()).step_by(self.layout.qubit_dim()).map(|a| a * scale).collect();
        Ok((HybridState { layout: self.layout.qudits_only(), amps }, prob))
    }

    /// Draws `shots` joint basis indices from `|amp|^2`.
    pub fn sample(&self, shots: u64, seed: u64) -> BTreeMap<usize, u64> {
        sample_distribution(&self.probabilities(), shots, seed)
    }
}

/// Seeded i.i.d. sampling from a (not necessarily normalized) probability
/// vector. The histogram omits indices never drawn.
pub fn sample_distribution(probs: &[f64], shots: u64, seed: u64) -> BTreeMap<usize, u64> {
    let mut hist = BTreeMap::new();
    let Ok(dist) = WeightedIndex::new(probs) else {
        return hist;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        *hist.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    hist
}
