//! Seeded generation of small random systems for property checks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Degree;
use crate::model::{Distribution, Nfts, NftsBuilder, StateId};
use crate::relation::Relation;

/// Shape bounds for [`random_nfts`].
#[derive(Debug, Clone)]
pub struct RandomParams {
    pub min_states: usize,
    pub max_states: usize,
    pub max_labels: usize,
    /// Upper bound on distributions per (state, label) cell.
    pub max_dists: usize,
    pub max_support: usize,
    /// Entries are drawn from `{0, 1/q, …, 1}`.
    pub quantum: i64,
    /// Probability that a state gets no transitions at all.
    pub steady_prob: f64,
    /// Only allow transitions from `s_i` to `s_j` with `j > i`.
    pub acyclic: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            min_states: 1,
            max_states: 6,
            max_labels: 2,
            max_dists: 2,
            max_support: 3,
            quantum: 4,
            steady_prob: 0.25,
            acyclic: false,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random system with states `s0, s1, …` and labels `a, b, …`.
pub fn random_nfts<R: Rng>(rng: &mut R, params: &RandomParams) -> Nfts {
    let n = rng.gen_range(params.min_states.max(1)..=params.max_states.max(1));
    let labels = rng.gen_range(1..=params.max_labels.max(1));
    let mut b = NftsBuilder::new();
    for i in 0..n {
        b.add_state(&format!("s{i}")).expect("generated names are valid");
    }
    let label_ids: Vec<_> = (0..labels)
        .map(|i| {
            let name = char::from(b'a' + i as u8).to_string();
            b.add_label(&name).expect("generated names are valid")
        })
        .collect();
    for s in 0..n {
        let first = if params.acyclic { s + 1 } else { 0 };
        if first == n || rng.gen_bool(params.steady_prob) {
            continue;
        }
        for &a in &label_ids {
            let count = rng.gen_range(0..=params.max_dists);
            for _ in 0..count {
                let width = rng.gen_range(1..=params.max_support.min(n - first));
                let targets = sample(rng, n - first, width);
                let dist = Distribution::new(
                    targets
                        .into_iter()
                        .map(|t| (StateId(first + t), random_degree(rng, params.quantum))),
                )
                .expect("sampled targets are distinct");
                b.push_transition(StateId(s), a, dist);
            }
        }
    }
    b.build().expect("generated system is well formed")
}

/// A uniformly drawn multiple of `1 / quantum` in `[0, 1]`.
pub fn random_degree<R: Rng>(rng: &mut R, quantum: i64) -> Degree {
    Degree::ratio(rng.gen_range(0..=quantum), quantum).expect("in range")
}

/// Each pair of `left × right` kept independently with probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, left: usize, right: usize, density: f64) -> Relation {
    let mut r = Relation::empty(left, right);
    for a in 0..left {
        for b in 0..right {
            if rng.gen_bool(density) {
                r.insert(StateId(a), StateId(b));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_bounded() {
        let params = RandomParams::default();
        for seed in 0..50 {
            let a = random_nfts(&mut rng(seed), &params);
            let b = random_nfts(&mut rng(seed), &params);
            assert_eq!(crate::format::serialize_model(&a), crate::format::serialize_model(&b));
            assert!(a.num_states() <= 6 && a.num_labels() <= 2);
            for s in a.states() {
                for l in a.labels() {
                    assert!(a.transitions(s, l).len() <= 2);
                    for p in a.transitions(s, l) {
                        assert!(p.support_len() <= 3);
                        for (_, d) in p.entries() {
                            let scaled = d.as_rational() * num_rational::BigRational::from_integer(4.into());
                            assert!(scaled.is_integer());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn acyclic_generation_has_finite_paths() {
        let params = RandomParams {
            acyclic: true,
            ..RandomParams::default()
        };
        for seed in 0..50 {
            let m = random_nfts(&mut rng(seed), &params);
            for s in m.states() {
                assert!(matches!(m.max_path_len(s), crate::model::PathLength::Finite(_)));
            }
        }
    }
}
