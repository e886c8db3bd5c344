//! Polynomial integer programs over the box `{0, ..., d-1}^n`.
//!
//! Problems arrive as JSON documents with arbitrary relations
//! (`<`, `<=`, `>`, `>=`) and are normalized so that every constraint reads
//! `lhs < bound` with `bound > 0`. The objective is always maximized.

mod bound;
mod codec;
mod convexity;
mod normalize;
mod poly;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bound::{cost_upper_bound, CostBound, CubMode, ENUMERATION_CHECK_LIMIT};
pub(crate) use codec::decode_into;
pub use codec::{decode_index, encode_assignment, AssignmentIter};
pub use convexity::{convexity_report, ConstraintConvexity, Convexity, ConvexityReport, ProbeGrid};
pub use normalize::{normalize_problem, NORMALIZATION_EPSILON};
pub use poly::{absolute_box_sum, evaluate_poly, Monomial, Polynomial};

/// Comparison between a constraint polynomial and its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: f64, bound: f64) -> bool {
        match self {
            Relation::Lt => lhs < bound,
            Relation::Le => lhs <= bound,
            Relation::Gt => lhs > bound,
            Relation::Ge => lhs >= bound,
        }
    }
}

/// A constraint as written by the user, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConstraint {
    pub lhs: Polynomial,
    pub relation: Relation,
    pub bound: f64,
}

/// A problem as written by the user, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawProblem {
    pub n: usize,
    pub d: usize,
    pub cost: Polynomial,
    pub constraints: Vec<RawConstraint>,
}

impl RawProblem {
    /// True when `assignment` satisfies every raw relation.
    pub fn is_feasible(&self, assignment: &[usize]) -> bool {
        self.constraints.iter().all(|c| c.relation.holds(c.lhs.eval(assignment), c.bound))
    }
}

/// A normalized constraint `lhs < bound`, `bound > 0`.
///
/// `shift` records the constant added to both sides during normalization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub lhs: Polynomial,
    pub bound: f64,
    pub shift: f64,
}

impl Constraint {
    pub fn new(lhs: Polynomial, bound: f64) -> Result<Self> {
        if !bound.is_finite() {
            return Err(Error::NonFinite(bound));
        }
        if bound <= 0.0 {
            return Err(Error::NonPositiveBound(bound));
        }
        Ok(Constraint { lhs, bound, shift: 0.0 })
    }

    pub fn is_satisfied(&self, assignment: &[usize]) -> bool {
        self.lhs.eval(assignment) < self.bound
    }
}

/// A normalized polynomial integer program: maximize `cost` subject to
/// `lhs_i < bound_i` for every constraint, over `x in {0..d-1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpProblem {
    n: usize,
    d: usize,
    cost: Polynomial,
    constraints: Vec<Constraint>,
}

impl IpProblem {
    pub fn new(n: usize, d: usize, cost: Polynomial, constraints: Vec<Constraint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVariables);
        }
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        for p in std::iter::once(&cost).chain(constraints.iter().map(|c| &c.lhs)) {
            if p.n() != n {
                return Err(Error::ExponentLength { expected: n, found: p.n() });
            }
        }
        for c in &constraints {
            if c.bound <= 0.0 || !c.bound.is_finite() {
                return Err(Error::NonPositiveBound(c.bound));
            }
        }
        Ok(IpProblem { n, d, cost, constraints })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of constraints.
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn cost(&self) -> &Polynomial {
        &self.cost
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Size of the assignment space, `d^n`, without overflow.
    pub fn search_space(&self) -> u128 {
        (self.d as u128).saturating_pow(self.n as u32)
    }

    pub fn is_feasible(&self, assignment: &[usize]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(assignment))
    }

    /// Returns a copy with the cost replaced.
    pub fn with_cost(&self, cost: Polynomial) -> Result<Self> {
        IpProblem::new(self.n, self.d, cost, self.constraints.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDocument {
    pub terms: Vec<TermDocument>,
    pub relation: Relation,
    pub bound: f64,
}

/// The on-disk JSON problem format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub n: usize,
    pub d: usize,
    pub cost: Vec<TermDocument>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDocument>,
}

fn terms_to_poly(n: usize, terms: &[TermDocument]) -> Result<Polynomial> {
    Polynomial::new(n, terms.iter().map(|t| Monomial::new(t.coeff, t.exponents.clone())).collect())
}

fn poly_to_terms(p: &Polynomial) -> Vec<TermDocument> {
    p.terms().iter().map(|t| TermDocument { coeff: t.coeff, exponents: t.exponents.clone() }).collect()
}

impl ProblemDocument {
    pub fn to_raw(&self) -> Result<RawProblem> {
        if self.n == 0 {
            return Err(Error::NoVariables);
        }
        if self.d < 2 {
            return Err(Error::DimensionTooSmall(self.d));
        }
        let cost = terms_to_poly(self.n, &self.cost)?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                if !c.bound.is_finite() {
                    return Err(Error::NonFinite(c.bound));
                }
                Ok(RawConstraint { lhs: terms_to_poly(self.n, &c.terms)?, relation: c.relation, bound: c.bound })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RawProblem { n: self.n, d: self.d, cost, constraints })
    }

    /// Document describing an already-normalized problem.
    pub fn from_problem(p: &IpProblem) -> Self {
        ProblemDocument {
            n: p.n(),
            d: p.d(),
            cost: poly_to_terms(p.cost()),
            constraints: p
                .constraints()
                .iter()
                .map(|c| ConstraintDocument { terms: poly_to_terms(&c.lhs), relation: Relation::Lt, bound: c.bound })
                .collect(),
        }
    }
}

/// Parses a JSON problem document into its raw (un-normalized) form.
pub fn parse_raw_problem(text: &str) -> Result<RawProblem> {
    let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    doc.to_raw()
}

/// Parses and normalizes a JSON problem document.
pub fn parse_problem(text: &str) -> Result<IpProblem> {
    normalize_problem(&parse_raw_problem(text)?, NORMALIZATION_EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unconstrained_document() {
        let p = parse_problem(r#"{"n": 2, "d": 3, "cost": [{"coeff": 1, "exponents": [1, 0]}], "constraints": []}"#)
            .unwrap();
        assert_eq!((p.n(), p.d(), p.m()), (2, 3, 0));
    }

    #[test]
    fn merges_duplicate_terms_on_parse() {
        let p = parse_problem(
            r#"{"n": 2, "d": 2, "cost": [
                {"coeff": 1, "exponents": [1, 1]},
                {"coeff": 2, "exponents": [1, 1]}]}"#,
        )
        .unwrap();
        assert_eq!(p.cost().terms(), &[Monomial::new(3.0, vec![1, 1])]);
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(parse_problem("{}"), Err(Error::Schema(_))));
        assert!(matches!(parse_problem(r#"{"n": 2, "d": 1, "cost": []}"#), Err(Error::DimensionTooSmall(1))));
        assert!(matches!(
            parse_problem(r#"{"n": 2, "d": 3, "cost": [{"coeff": 1, "exponents": [1]}]}"#),
            Err(Error::ExponentLength { expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_problem(
                r#"{"n": 1, "d": 3, "cost": [], "constraints": [{"terms": [], "relation": "=", "bound": 1}]}"#
            ),
            Err(Error::Schema(_))
        ));
        // serde_json rejects NaN/Infinity literals outright
        assert!(parse_problem(r#"{"n": 1, "d": 3, "cost": [{"coeff": 1e999, "exponents": [1]}]}"#).is_err());
    }

    #[test]
    fn document_round_trip() {
        let p = crate::instances::demonstration();
        let text = serde_json::to_string(&ProblemDocument::from_problem(&p)).unwrap();
        assert_eq!(parse_problem(&text).unwrap(), p);
    }
}
