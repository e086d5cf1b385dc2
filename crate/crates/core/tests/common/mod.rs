#![allow(dead_code)]

use limbis::limited::candidate_set;
use limbis::random::{random_nfts, rng, RandomParams};
use limbis::{Algebra, Degree, Distribution, Nfts, Relation, StateId};
use proptest::prelude::*;

pub fn algebra() -> impl Strategy<Value = Algebra> {
    prop_oneof![Just(Algebra::Goedel), Just(Algebra::Product), Just(Algebra::Lukasiewicz)]
}

/// Multiples of 1/12, so products and Łukasiewicz sums stay varied.
pub fn degree() -> impl Strategy<Value = Degree> {
    (0i64..=12).prop_map(|n| Degree::ratio(n, 12).unwrap())
}

pub fn distribution(n: usize) -> impl Strategy<Value = Distribution> {
    proptest::collection::vec(degree(), n)
        .prop_map(|ds| Distribution::new(ds.into_iter().enumerate().map(|(i, d)| (StateId(i), d))).unwrap())
}

pub fn relation(n: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        Relation::from_pairs(
            n,
            n,
            bits.iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| (StateId(i / n), StateId(i % n))),
        )
    })
}

pub fn system_with(params: RandomParams) -> impl Strategy<Value = Nfts> {
    any::<u64>().prop_map(move |seed| random_nfts(&mut rng(seed), &params))
}

pub fn system() -> impl Strategy<Value = Nfts> {
    system_with(RandomParams::default())
}

pub fn small_system(max_states: usize) -> impl Strategy<Value = Nfts> {
    system_with(RandomParams {
        max_states,
        ..RandomParams::default()
    })
}

/// State number `i` modulo the number of states.
pub fn pick(m: &Nfts, i: usize) -> StateId {
    StateId(i % m.num_states())
}

pub fn candidates(m: &Nfts, alg: Algebra) -> Vec<Degree> {
    candidate_set(m, alg, 1 << 24).unwrap().into_iter().collect()
}

pub fn relation_on(m: &Nfts, bits: &[bool]) -> Relation {
    let n = m.num_states();
    Relation::from_pairs(
        n,
        n,
        (0..n * n)
            .filter(|i| bits.get(*i).copied().unwrap_or(false))
            .map(|i| (StateId(i / n), StateId(i % n))),
    )
}
