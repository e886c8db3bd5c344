use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single term `coeff * x_1^e_1 * ... * x_n^e_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<u32>) -> Self {
        Monomial { coeff, exponents }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Product of the variable powers at an integer point; `0^0 = 1`.
    fn power_product(&self, assignment: &[usize]) -> f64 {
        self.exponents.iter().zip(assignment).fold(1.0, |acc, (&e, &x)| acc * (x as f64).powi(e as i32))
    }

    fn power_product_real(&self, point: &[f64]) -> f64 {
        self.exponents.iter().zip(point).fold(1.0, |acc, (&e, &x)| acc * x.powi(e as i32))
    }
}

/// A polynomial over `n` variables in canonical form: one term per distinct
/// exponent vector, sorted by exponents, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    n: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    /// Validates and canonicalizes `terms`, merging duplicate monomials.
    pub fn new(n: usize, terms: Vec<Monomial>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for term in terms {
            if term.exponents.len() != n {
                return Err(Error::ExponentLength { expected: n, found: term.exponents.len() });
            }
            if !term.coeff.is_finite() {
                return Err(Error::NonFinite(term.coeff));
            }
            *merged.entry(term.exponents).or_insert(0.0) += term.coeff;
        }
        Ok(Self::from_map(n, merged))
    }

    fn from_map(n: usize, merged: BTreeMap<Vec<u32>, f64>) -> Self {
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coeff)| Monomial { coeff, exponents })
            .collect();
        Polynomial { n, terms }
    }

    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::from_map(n, BTreeMap::from([(vec![0; n], value)]))
    }

    /// Single-variable linear term `coeff * x_var`.
    pub fn linear(n: usize, var: usize, coeff: f64) -> Self {
        let mut exponents = vec![0; n];
        exponents[var] = 1;
        Self::from_map(n, BTreeMap::from([(exponents, coeff)]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.iter().find(|t| t.is_constant()).map_or(0.0, |t| t.coeff)
    }

    /// Indices of variables that appear with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.terms.iter().any(|t| t.exponents[v] > 0)).collect()
    }

    /// True when every coefficient is an integer, so the polynomial takes
    /// integer values on integer points.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.fract() == 0.0)
    }

    /// Evaluates at an integer point without range checks.
    pub fn eval(&self, assignment: &[usize]) -> f64 {
        self.terms.iter().map(|t| t.coeff * t.power_product(assignment)).sum()
    }

    /// Evaluates at a real point (continuous relaxation, finite differences).
    pub fn eval_real(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.coeff * t.power_product_real(point)).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let merged = self.terms.iter().map(|t| (t.exponents.clone(), t.coeff * factor)).collect();
        Self::from_map(self.n, merged)
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        assert_eq!(self.n, other.n, "polynomials over different variable counts");
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for t in self.terms.iter().chain(&other.terms) {
            *merged.entry(t.exponents.clone()).or_insert(0.0) += t.coeff;
        }
        Self::from_map(self.n, merged)
    }

    pub fn add_constant(&self, value: f64) -> Self {
        self.add(&Polynomial::constant(self.n, value))
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let merged = self
            .terms
            .iter()
            .filter(|t| t.exponents[var] > 0)
            .map(|t| {
                let mut exponents = t.exponents.clone();
                let e = exponents[var];
                exponents[var] -= 1;
                (exponents, t.coeff * e as f64)
            })
            .collect();
        Self::from_map(self.n, merged)
    }

    /// Interval range of the polynomial over the box `[0, d-1]^n`, bounding
    /// each monomial independently.
    pub fn box_range(&self, d: usize) -> (f64, f64) {
        let top = (d - 1) as f64;
        self.terms.iter().fold((0.0, 0.0), |(lo, hi), t| {
            if t.is_constant() {
                (lo + t.coeff, hi + t.coeff)
            } else {
                let reach = t.coeff * top.powi(t.degree() as i32);
                (lo + reach.min(0.0), hi + reach.max(0.0))
            }
        })
    }

    /// Greatest common divisor of the non-constant integer coefficients, or
    /// `None` when one of them is fractional or there are none.
    pub fn coefficient_gcd(&self) -> Option<u128> {
        let lattice = self.terms.iter().filter(|t| !t.is_constant());
        if lattice.clone().any(|t| t.coeff.fract() != 0.0) {
            return None;
        }
        let g = lattice.map(|t| t.coeff.abs() as u128).fold(0u128, |g, c| g.gcd(&c));
        (g > 0).then_some(g)
    }
}

/// Sum of |coeff| * (d-1)^deg over all terms.
pub fn absolute_box_sum(p: &Polynomial, d: usize) -> f64 {
    let top = (d - 1) as f64;
    p.terms().iter().map(|t| t.coeff.abs() * top.powi(t.degree() as i32)).sum()
}

/// Evaluates `p` at `assignment`, checking that each value lies in `[0, d-1]`.
pub fn evaluate_poly(p: &Polynomial, assignment: &[usize], d: usize) -> Result<f64> {
    if assignment.len() != p.n() {
        return Err(Error::AssignmentLength { expected: p.n(), found: assignment.len() });
    }
    if let Some((position, &value)) = assignment.iter().enumerate().find(|(_, &x)| x >= d) {
        return Err(Error::AssignmentOutOfRange { position, value, max: d - 1 });
    }
    Ok(p.eval(assignment))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(coeff: f64, e: &[u32]) -> Monomial {
        Monomial::new(coeff, e.to_vec())
    }

    #[test]
    fn duplicate_monomials_merge() {
        let p = Polynomial::new(2, vec![mono(1.0, &[1, 1]), mono(2.0, &[1, 1])]).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].coeff, 3.0);
    }

    #[test]
    fn cancelling_terms_vanish() {
        let p = Polynomial::new(1, vec![mono(1.0, &[2]), mono(-1.0, &[2])]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn wrong_exponent_length_rejected() {
        let err = Polynomial::new(3, vec![mono(1.0, &[1, 0])]).unwrap_err();
        assert_eq!(err, Error::ExponentLength { expected: 3, found: 2 });
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(Polynomial::new(1, vec![mono(f64::NAN, &[1])]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let p = Polynomial::new(2, vec![mono(5.0, &[0, 0]), mono(2.0, &[0, 3])]).unwrap();
        assert_eq!(p.eval(&[0, 0]), 5.0);
        assert_eq!(p.eval(&[0, 2]), 21.0);
    }

    #[test]
    fn evaluate_checks_range() {
        let p = Polynomial::linear(2, 1, 1.0);
        assert!(matches!(
            evaluate_poly(&p, &[0, 3], 3),
            Err(Error::AssignmentOutOfRange { position: 1, value: 3, max: 2 })
        ));
        assert!(evaluate_poly(&p, &[0], 3).is_err());
    }

    #[test]
    fn derivative_of_mixed_term() {
        // d/dx2 (x2^2 x3) = 2 x2 x3
        let p = Polynomial::new(3, vec![mono(1.0, &[0, 2, 1])]).unwrap();
        let dp = p.derivative(1);
        assert_eq!(dp.terms(), &[mono(2.0, &[0, 1, 1])]);
        assert!(p.derivative(0).is_zero());
    }

    #[test]
    fn box_range_and_gcd() {
        // 2 x1 - 4 x2^2 + 1 over d = 3
        let p = Polynomial::new(2, vec![mono(2.0, &[1, 0]), mono(-4.0, &[0, 2]), mono(1.0, &[0, 0])]).unwrap();
        assert_eq!(p.box_range(3), (1.0 - 16.0, 1.0 + 4.0));
        assert_eq!(p.coefficient_gcd(), Some(2));
        assert_eq!(p.scale(0.5).coefficient_gcd(), Some(1));
        assert_eq!(p.scale(0.25).coefficient_gcd(), None);
    }

    #[test]
    fn support_lists_used_variables() {
        let p = Polynomial::new(4, vec![mono(1.0, &[0, 1, 0, 2]), mono(3.0, &[0, 0, 0, 0])]).unwrap();
        assert_eq!(p.support(), vec![1, 3]);
    }
}
