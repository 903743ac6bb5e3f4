//! Synthetic 2PL populations for recovery and concordance studies.

use crate::irt::{probability, ResponseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// True parameters: a ~ U[0.5, 2.5], b ~ U[−2, 2], θ ~ N(0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Population {
    pub fn draw(items: usize, persons: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (0..items).map(|_| rng.gen_range(0.5..2.5)).collect();
        let b = (0..items).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let theta = (0..persons).map(|_| rng.sample(StandardNormal)).collect();
        Population { a, b, theta }
    }

    pub fn p(&self, item: usize, person: usize) -> f64 {
        probability(self.a[item], self.b[item], self.theta[person])
    }
}

/// Bernoulli responses for every (item, person) pair that `observed` admits.
pub fn simulate(pop: &Population, observed: impl Fn(usize, usize) -> bool, seed: u64) -> ResponseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ResponseMatrix::new(pop.a.len(), pop.theta.len());
    for i in 0..pop.a.len() {
        for j in 0..pop.theta.len() {
            let y = rng.gen::<f64>() < pop.p(i, j);
            if observed(i, j) {
                r.set(i, j, Some(y));
            }
        }
    }
    r
}
