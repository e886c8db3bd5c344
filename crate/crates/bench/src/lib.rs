//! Shared fixtures for the pipeline benchmarks.

use qipsim::distill::apply_entanglers_sequential;
use qipsim::instances::{random_instance, RandomSpec};
use qipsim::{HybridState, IpProblem, RegisterLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Uniform superposition with every constraint qubit written.
pub fn entangled(p: &IpProblem) -> HybridState {
    let layout = RegisterLayout::new(p.n(), p.d(), p.m()).expect("benchmark instance fits");
    apply_entanglers_sequential(HybridState::init(layout).apply_hadamard_all_qudits(), p).expect("layout matches")
}

/// Seeded random instances of the default shape.
pub fn random_batch(count: usize, seed: u64) -> Vec<IpProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng, &RandomSpec::default())).collect()
}
