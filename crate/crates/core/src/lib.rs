//! Exact state-vector simulator for a qudit-based quantum algorithm that
//! solves bounded polynomial integer programs.
//!
//! The pipeline runs in two stages. Stage I prepares a uniform superposition
//! over the variable box, marks every constraint on its own qubit and
//! amplifies the all-satisfied pattern, leaving a uniform superposition over
//! the feasible set. Stage II writes each feasible cost into a phase,
//! estimates it with a QPE register and rotates an ancilla so that
//! post-selecting it on `|0>` favours the largest cost.

pub mod amplify;
pub mod analysis;
pub mod distill;
pub mod error;
pub mod instances;
pub mod optimizer;
pub mod oracle;
pub mod problem;
pub mod qft;
pub mod state;

pub use error::{Error, Result};
pub use optimizer::{solve, Readout, RotationMode, SolveParams, SolveReport, SolveStatus};
pub use problem::{parse_problem, Constraint, IpProblem, Monomial, Polynomial};
pub use state::{HybridState, QubitPattern, RegisterLayout};
