//! k-limited α-bisimilarity by its defining recursion, the monotone
//! functional whose post-fixed points are exactly the k-limited
//! α-bisimulations, and unlimited α-bisimulation as a greatest fixed point.

use crate::algebra::{Algebra, Degree};
use crate::lifting::lifted_member;
use crate::model::{Nfts, StateId};
use crate::relation::Relation;

/// One-step transfer: every `u --a--> p` is answered by some `v --a--> q`
/// with `(p, q) ∈ r†_alpha`, and vice versa.
pub fn transfer_holds(m: &Nfts, u: StateId, v: StateId, r: &Relation, alpha: &Degree, alg: Algebra) -> bool {
    m.labels().all(|a| {
        let ps = m.transitions(u, a);
        let qs = m.transitions(v, a);
        ps.iter()
            .all(|p| qs.iter().any(|q| lifted_member(p, q, r, alpha, alg)))
            && qs
                .iter()
                .all(|q| ps.iter().any(|p| lifted_member(p, q, r, alpha, alg)))
    })
}

/// Pairs of `V × V` that pass [`transfer_holds`] against `r`.
fn transfer_closure(m: &Nfts, r: &Relation, alpha: &Degree, alg: Algebra) -> Relation {
    let n = m.num_states();
    let mut out = Relation::empty(n, n);
    for u in m.states() {
        for v in m.states() {
            if transfer_holds(m, u, v, r, alpha, alg) {
                out.insert(u, v);
            }
        }
    }
    out
}

/// `≈_k^alpha` over `V × V`, computed by k refinement rounds from `V × V`.
pub fn limited_bisimilarity(m: &Nfts, k: usize, alpha: &Degree, alg: Algebra) -> Relation {
    let n = m.num_states();
    let mut current = Relation::full(n, n);
    for _ in 0..k {
        let next = transfer_closure(m, &current, alpha, alg);
        // The recursion is deterministic, so a repeat is a fixed point.
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// `r ⊆ ≈_k^alpha`.
pub fn is_k_limited_bisimulation(m: &Nfts, r: &Relation, k: usize, alpha: &Degree, alg: Algebra) -> bool {
    r.is_subset(&limited_bisimilarity(m, k, alpha, alg))
}

/// The functional `F_k^alpha`.
///
/// `F_0(R) = R`; `F_{i+1}(R)` keeps the pairs of `V × V` whose transitions
/// match under the lifting of `F_i(succ(dom R) × succ(cod R))`.
pub fn apply_f(m: &Nfts, r: &Relation, k: usize, alpha: &Degree, alg: Algebra) -> Relation {
    if k == 0 {
        return r.clone();
    }
    let next = Relation::product(
        &m.succ_neighborhood(&r.domain()),
        &m.succ_neighborhood(&r.codomain()),
    );
    let inner = apply_f(m, &next, k - 1, alpha, alg);
    transfer_closure(m, &inner, alpha, alg)
}

/// `r ⊆ F_k^alpha(r)`.
pub fn is_post_fixed(m: &Nfts, r: &Relation, k: usize, alpha: &Degree, alg: Algebra) -> bool {
    r.is_subset(&apply_f(m, r, k, alpha, alg))
}

/// Greatest α-bisimulation under the lifting inside one system.
pub fn greatest_alpha_bisimulation_in(m: &Nfts, alpha: &Degree, alg: Algebra) -> Relation {
    let n = m.num_states();
    let mut current = Relation::full(n, n);
    // Each productive round removes at least one pair.
    for _ in 0..=n * n {
        let snapshot = current.clone();
        current.retain(|u, v| transfer_holds(m, u, v, &snapshot, alpha, alg));
        if current == snapshot {
            return current;
        }
    }
    unreachable!("pair removal must stabilise within |V|^2 rounds")
}

/// Greatest α-bisimulation between two systems, as a relation on
/// `left × right`. Labels are matched by name.
pub fn greatest_alpha_bisimulation(left: &Nfts, right: &Nfts, alpha: &Degree, alg: Algebra) -> Relation {
    let union = Nfts::disjoint_union(left, right);
    let all = greatest_alpha_bisimulation_in(&union, alpha, alg);
    let offset = left.num_states();
    let mut out = Relation::empty(left.num_states(), right.num_states());
    for u in left.states() {
        for v in right.states() {
            if all.contains(u, StateId(v.0 + offset)) {
                out.insert(u, v);
            }
        }
    }
    out
}
