//! Constraint distillation: per-constraint flip sets, the 1-sparse
//! entangling permutations built from them, and the constraint-count
//! histogram of the entangled register.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{decode_into, IpProblem, Polynomial};
use crate::state::{HybridState, RegisterLayout};

/// Distance to the bound under which a floating-point comparison is flagged.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Largest register materialized as a dense matrix.
pub const MATERIALIZE_LIMIT: usize = 1 << 12;

const MAX_DENOMINATOR: i64 = 1 << 20;
const MAX_NUMERATOR: i64 = 1 << 40;

/// Value of the distillation function `2^floor(C / h)`, collapsed to the
/// parity that decides the qubit flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistillValue {
    /// `C < h`: the function equals 1.
    Feasible,
    /// `C >= h`: the function is an even power of two, `2^exponent`.
    Infeasible { exponent: i64 },
}

/// Evaluates the distillation predicate for one constraint value.
///
/// Negative `c` still counts as feasible: the comparison is semantic, so no
/// fractional power of two ever appears.
pub fn distill_value(c: f64, h: f64) -> Result<DistillValue> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NonPositiveBound(h));
    }
    if !c.is_finite() {
        return Err(Error::NonFinite(c));
    }
    Ok(if c < h { DistillValue::Feasible } else { DistillValue::Infeasible { exponent: (c / h).floor() as i64 } })
}

fn small_ratio(x: f64) -> Option<Ratio<i64>> {
    let r = Ratio::<i64>::approximate_float(x)?;
    let ok =
        *r.denom() <= MAX_DENOMINATOR && r.numer().abs() <= MAX_NUMERATOR && *r.numer() as f64 / *r.denom() as f64 == x;
    ok.then_some(r)
}

/// Constraint scaled by a common denominator so every coefficient and the
/// bound are integers.
struct IntegerForm {
    terms: Vec<(i128, Vec<u32>)>,
    bound: i128,
}

impl IntegerForm {
    fn new(lhs: &Polynomial, bound: f64) -> Option<Self> {
        let coeffs = lhs.terms().iter().map(|t| small_ratio(t.coeff)).collect::<Option<Vec<_>>>()?;
        let hb = small_ratio(bound)?;
        let scale = coeffs.iter().chain(std::iter::once(&hb)).fold(1i128, |acc, r| acc.lcm(&(*r.denom() as i128)));
        let lift = |r: &Ratio<i64>| *r.numer() as i128 * (scale / *r.denom() as i128);
        Some(IntegerForm {
            terms: coeffs.iter().zip(lhs.terms()).map(|(r, t)| (lift(r), t.exponents.clone())).collect(),
            bound: lift(&hb),
        })
    }

    /// Exact `lhs < bound`, or `None` on overflow.
    fn satisfied(&self, x: &[usize]) -> Option<bool> {
        let mut total = 0i128;
        for (c, exps) in &self.terms {
            let mut v = *c;
            for (&xi, &e) in x.iter().zip(exps) {
                v = v.checked_mul((xi as i128).checked_pow(e)?)?;
            }
            total = total.checked_add(v)?;
        }
        Some(total < self.bound)
    }
}

/// The entangling unitary of one constraint, stored as the set of qudit
/// indices whose constraint qubit is flipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglerPermutation {
    /// 0-based constraint index.
    pub constraint: usize,
    n: usize,
    d: usize,
    m: usize,
    /// `flip[y]` is true iff constraint `constraint` holds at `y`.
    #[serde(skip)]
    flip: Vec<bool>,
    /// Every comparison was done in exact integer arithmetic.
    pub exact: bool,
    /// Some floating-point comparison fell within `BOUNDARY_TOL` of the bound.
    pub boundary_warning: bool,
}

/// Builds the entangler of constraint `i` (0-based).
///
/// The predicate is evaluated once per assignment of the variables the
/// constraint actually uses and broadcast to the full register.
pub fn build_entangler(p: &IpProblem, i: usize) -> Result<EntanglerPermutation> {
    let c = p.constraints().get(i).ok_or(Error::ConstraintIndex { index: i, m: p.m() })?;
    let (n, d) = (p.n(), p.d());
    let vars = c.lhs.support();
    let k = vars.len();
    let projected = d.pow(k as u32);
    let form = IntegerForm::new(&c.lhs, c.bound);

    // (holds, exact, near boundary) per projected assignment
    let table: Vec<(bool, bool, bool)> = (0..projected)
        .into_par_iter()
        .map_init(
            || (vec![0usize; k], vec![0usize; n]),
            |(digits, point), j| {
                decode_into(j, d, digits);
                for (&v, &x) in vars.iter().zip(digits.iter()) {
                    point[v] = x;
                }
                if let Some(holds) = form.as_ref().and_then(|f| f.satisfied(point)) {
                    return (holds, true, false);
                }
                let value = c.lhs.eval(point);
                (value < c.bound, false, (value - c.bound).abs() < BOUNDARY_TOL)
            },
        )
        .collect();

    let weights: Vec<usize> = vars.iter().map(|&v| d.pow((n - 1 - v) as u32)).collect();
    let flip = (0..d.pow(n as u32))
        .into_par_iter()
        .map(|y| {
            let j = weights.iter().fold(0, |acc, &w| acc * d + (y / w) % d);
            table[j].0
        })
        .collect();

    Ok(EntanglerPermutation {
        constraint: i,
        n,
        d,
        m: p.m(),
        flip,
        exact: table.iter().all(|t| t.1),
        boundary_warning: table.iter().any(|t| t.2),
    })
}

/// One entangler per constraint, in constraint order.
pub fn build_entanglers(p: &IpProblem) -> Result<Vec<EntanglerPermutation>> {
    (0..p.m()).map(|i| build_entangler(p, i)).collect()
}

impl EntanglerPermutation {
    /// Qubit bit flipped by this entangler.
    pub fn mask(&self) -> usize {
        1 << (self.m - 1 - self.constraint)
    }

    pub fn flips(&self, y: usize) -> bool {
        self.flip[y]
    }

    /// Qudit indices whose constraint qubit is flipped, ascending.
    pub fn flip_set(&self) -> Vec<usize> {
        (0..self.flip.len()).filter(|&y| self.flip[y]).collect()
    }

    fn check_layout(&self, layout: &RegisterLayout) -> Result<()> {
        if layout.m() != self.m {
            return Err(Error::LayoutMismatch { expected: self.m, found: layout.m() });
        }
        if layout.n() != self.n || layout.d() != self.d {
            return Err(Error::InvalidParameter(format!(
                "register of {} qudits with d = {} does not match the problem ({}, {})",
                layout.n(),
                layout.d(),
                self.n,
                self.d
            )));
        }
        Ok(())
    }

    /// Swaps `(y, q)` with `(y, q ^ mask)` for every `y` in the flip set.
    pub fn apply(&self, mut s: HybridState) -> Result<HybridState> {
        self.check_layout(s.layout())?;
        let mask = self.mask();
        let width = s.layout().qubit_dim();
        s.amplitudes_mut().par_chunks_mut(width).zip(self.flip.par_iter()).filter(|(_, &f)| f).for_each(
            |(block, _)| {
                for q in (0..width).filter(|q| q & mask == 0) {
                    block.swap(q, q | mask);
                }
            },
        );
        Ok(s)
    }

    /// The permutation as an index map over the full register.
    pub fn permutation(&self) -> Vec<usize> {
        let width = 1usize << self.m;
        (0..self.flip.len() * width).map(|idx| if self.flip[idx / width] { idx ^ self.mask() } else { idx }).collect()
    }

    /// Dense 0/1 matrix with `U[row][col] = 1` iff `row = perm(col)`.
    pub fn materialize(&self) -> Result<Vec<Vec<u8>>> {
        let perm = self.permutation();
        if perm.len() > MATERIALIZE_LIMIT {
            return Err(Error::DimensionCap { dimension: perm.len() as u128, cap: MATERIALIZE_LIMIT });
        }
        let mut u = vec![vec![0u8; perm.len()]; perm.len()];
        for (col, &row) in perm.iter().enumerate() {
            u[row][col] = 1;
        }
        Ok(u)
    }
}

/// Applies the entanglers in the given order.
pub fn apply_entanglers(s: HybridState, entanglers: &[EntanglerPermutation], order: &[usize]) -> Result<HybridState> {
    order.iter().try_fold(s, |s, &i| entanglers[i].apply(s))
}

/// Builds and applies every entangler in constraint order.
pub fn apply_entanglers_sequential(s: HybridState, p: &IpProblem) -> Result<HybridState> {
    if s.layout().m() != p.m() {
        return Err(Error::LayoutMismatch { expected: p.m(), found: s.layout().m() });
    }
    let ents = build_entanglers(p)?;
    let order: Vec<usize> = (0..ents.len()).collect();
    apply_entanglers(s, &ents, &order)
}

/// Probability of measuring a qubit pattern of each Hamming weight
/// `0..=m`.
pub fn gamma_histogram(s: &HybridState) -> Vec<f64> {
    let mut out = vec![0.0; s.layout().m() + 1];
    for (q, p) in s.pattern_probabilities().into_iter().enumerate() {
        out[q.count_ones() as usize] += p;
    }
    out
}
