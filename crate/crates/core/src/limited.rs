//! Degrees of k-limited similarity through bisimulation vectors, and a
//! brute-force oracle that scans every threshold the lifting can produce.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{Algebra, Degree};
use crate::fixedpoint::{greatest_alpha_bisimulation_in, limited_bisimilarity, transfer_holds};
use crate::lifting::lift_degree;
use crate::model::{Distribution, Nfts, StateId};
use crate::relation::Relation;

/// A `(k+1)`-vector of relations. Slot `i` (1-based) constrains the pairs
/// reached after `i - 1` steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BisimVector {
    slots: Vec<Relation>,
}

impl BisimVector {
    /// Panics if `slots` is empty.
    pub fn new(slots: Vec<Relation>) -> Self {
        assert!(!slots.is_empty(), "a bisimulation vector has at least one slot");
        BisimVector { slots }
    }

    /// `(D_u[0] × D_v[0], …, D_u[k] × D_v[k])`.
    pub fn depth_products(m: &Nfts, u: StateId, v: StateId, k: usize) -> Self {
        let du = m.depth_sets(u, k);
        let dv = m.depth_sets(v, k);
        BisimVector::new(du.iter().zip(&dv).map(|(a, b)| Relation::product(a, b)).collect())
    }

    pub fn k(&self) -> usize {
        self.slots.len() - 1
    }

    /// Slot `i`, 1-based.
    pub fn slot(&self, i: usize) -> &Relation {
        &self.slots[i - 1]
    }

    pub fn slot_mut(&mut self, i: usize) -> &mut Relation {
        &mut self.slots[i - 1]
    }

    pub fn slots(&self) -> &[Relation] {
        &self.slots
    }

    /// Slot-wise inclusion.
    pub fn is_subset(&self, other: &BisimVector) -> bool {
        self.slots.len() == other.slots.len()
            && self.slots.iter().zip(&other.slots).all(|(a, b)| a.is_subset(b))
    }

    /// Union of all slots.
    pub fn flatten(&self) -> Relation {
        let mut out = self.slots[0].clone();
        for s in &self.slots[1..] {
            out = out.union(s);
        }
        out
    }

    pub fn total_pairs(&self) -> usize {
        self.slots.iter().map(Relation::len).sum()
    }
}

/// Degree of 1-limited similarity of `pair` with respect to `r`.
pub fn deg1(m: &Nfts, pair: (StateId, StateId), r: &Relation, alg: Algebra) -> Degree {
    let (u, v) = pair;
    let mut acc = Degree::one();
    for a in m.labels() {
        let ps = m.transitions(u, a);
        let qs = m.transitions(v, a);
        for p in ps {
            let best = qs.iter().map(|q| lift_degree(p, q, r, alg)).max().unwrap_or_else(Degree::zero);
            acc = acc.meet(&best);
        }
        for q in qs {
            let best = ps.iter().map(|p| lift_degree(p, q, r, alg)).max().unwrap_or_else(Degree::zero);
            acc = acc.meet(&best);
        }
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// `Q(B)`: the meet of `deg1(r, B[i+1])` over `1 ≤ i ≤ k` and `r ∈ B[i]`.
pub fn q_value(b: &BisimVector, m: &Nfts, alg: Algebra) -> Degree {
    let mut acc = Degree::one();
    for i in 1..=b.k() {
        for pair in b.slot(i).pairs() {
            acc = acc.meet(&deg1(m, pair, b.slot(i + 1), alg));
            if acc.is_zero() {
                return acc;
            }
        }
    }
    acc
}

/// Whether `b` is a k-limited α-bisimulation vector, checked by the
/// transfer condition directly.
pub fn is_bisim_vector(m: &Nfts, b: &BisimVector, alpha: &Degree, alg: Algebra) -> bool {
    (1..=b.k()).all(|i| {
        b.slot(i)
            .pairs()
            .all(|(x, y)| transfer_holds(m, x, y, b.slot(i + 1), alpha, alg))
    })
}

/// `H_k^alpha(u, v)`, built backwards from `D_u[k] × D_v[k]`.
pub fn h_vector(m: &Nfts, u: StateId, v: StateId, k: usize, alpha: &Degree, alg: Algebra) -> BisimVector {
    let mut b = BisimVector::depth_products(m, u, v, k);
    for i in (1..=k).rev() {
        let next = b.slot(i + 1).clone();
        b.slot_mut(i).retain(|x, y| transfer_holds(m, x, y, &next, alpha, alg));
    }
    b
}

/// Greatest k-limited α-bisimulation vector inside `b`: one backward sweep
/// deleting pairs whose `deg1` against the next slot is below `alpha`.
pub fn vec(m: &Nfts, alpha: &Degree, b: &BisimVector, alg: Algebra) -> BisimVector {
    let mut out = b.clone();
    for j in (1..=out.k()).rev() {
        let next = out.slot(j + 1).clone();
        out.slot_mut(j).retain(|x, y| deg1(m, (x, y), &next, alg) >= *alpha);
    }
    out
}

/// Greatest `alpha` with `u ≈_k^alpha v`, by ascending through the
/// thresholds of successively pruned vectors.
pub fn bis(m: &Nfts, u: StateId, v: StateId, k: usize, alg: Algebra) -> Degree {
    let mut t = vec(m, &Degree::zero(), &BisimVector::depth_products(m, u, v, k), alg);
    let guard = k * m.num_states() * m.num_states() + 1;
    for _ in 0..guard {
        let alpha = q_value(&t, m, alg);
        if alpha.is_one() {
            return alpha;
        }
        let mut pruned = t.clone();
        for i in 1..=t.k() {
            let next = t.slot(i + 1);
            pruned
                .slot_mut(i)
                .retain(|x, y| deg1(m, (x, y), next, alg) > alpha);
        }
        let next = vec(m, &alpha, &pruned, alg);
        if !next.slot(1).contains(u, v) {
            return alpha;
        }
        t = next;
    }
    panic!("threshold ascent exceeded {guard} rounds");
}

/// Raised when the oracle's candidate enumeration would be too large.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("candidate enumeration needs {size} lifting evaluations, limit is {limit}")]
pub struct CapacityError {
    pub size: u128,
    pub limit: u128,
}

/// Default bound on the number of lifting evaluations the oracle may spend.
pub const DEFAULT_ORACLE_LIMIT: u128 = 1 << 22;

fn distinct_distributions(m: &Nfts) -> Vec<&Distribution> {
    let set: BTreeSet<&Distribution> = m.states().flat_map(|s| m.outgoing(s).map(|(_, p)| p)).collect();
    set.into_iter().collect()
}

/// Number of lifting evaluations [`candidate_set`] performs.
pub fn candidate_work(m: &Nfts) -> u128 {
    let dists = distinct_distributions(m);
    let mut total: u128 = 0;
    for p in &dists {
        for q in &dists {
            let bits = (p.support_len() * q.support_len()) as u32;
            total = total.saturating_add(if bits >= 127 { u128::MAX } else { 1u128 << bits });
        }
    }
    total
}

/// `{0, 1} ∪ { lift(p, q, R) | p, q in δ, R ⊆ su(p) × su(q) }`.
pub fn candidate_set(m: &Nfts, alg: Algebra, limit: u128) -> Result<BTreeSet<Degree>, CapacityError> {
    let size = candidate_work(m);
    if size > limit {
        return Err(CapacityError { size, limit });
    }
    let n = m.num_states();
    let dists = distinct_distributions(m);
    let mut out = BTreeSet::from([Degree::zero(), Degree::one()]);
    for p in &dists {
        for q in &dists {
            let cells: Vec<(StateId, StateId)> =
                p.support().flat_map(|a| q.support().map(move |b| (a, b))).collect();
            for mask in 0u64..(1u64 << cells.len()) {
                let r = Relation::from_pairs(
                    n,
                    n,
                    cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c),
                );
                out.insert(lift_degree(p, q, &r, alg));
            }
        }
    }
    Ok(out)
}

/// Greatest candidate threshold satisfying `holds`, or 0 if none does.
pub fn max_satisfying<F: FnMut(&Degree) -> bool>(candidates: &BTreeSet<Degree>, mut holds: F) -> Degree {
    candidates
        .iter()
        .rev()
        .find(|a| holds(a))
        .cloned()
        .unwrap_or_else(Degree::zero)
}

/// Brute-force degree of k-limited similarity: the largest candidate
/// threshold at which `limited_bisimilarity` relates `u` and `v`.
pub fn oracle_degree(m: &Nfts, u: StateId, v: StateId, k: usize, alg: Algebra) -> Result<Degree, CapacityError> {
    oracle_degree_with_limit(m, u, v, k, alg, DEFAULT_ORACLE_LIMIT)
}

pub fn oracle_degree_with_limit(
    m: &Nfts,
    u: StateId,
    v: StateId,
    k: usize,
    alg: Algebra,
    limit: u128,
) -> Result<Degree, CapacityError> {
    let candidates = candidate_set(m, alg, limit)?;
    Ok(oracle_degree_from(m, u, v, k, alg, &candidates))
}

/// As [`oracle_degree`] over a precomputed candidate set.
pub fn oracle_degree_from(
    m: &Nfts,
    u: StateId,
    v: StateId,
    k: usize,
    alg: Algebra,
    candidates: &BTreeSet<Degree>,
) -> Degree {
    max_satisfying(candidates, |a| limited_bisimilarity(m, k, a, alg).contains(u, v))
}

/// Greatest candidate `alpha` with `u ∼^alpha v` (unlimited depth).
pub fn alpha_bisimilarity_degree(m: &Nfts, u: StateId, v: StateId, alg: Algebra) -> Result<Degree, CapacityError> {
    let candidates = candidate_set(m, alg, DEFAULT_ORACLE_LIMIT)?;
    Ok(max_satisfying(&candidates, |a| greatest_alpha_bisimulation_in(m, a, alg).contains(u, v)))
}
