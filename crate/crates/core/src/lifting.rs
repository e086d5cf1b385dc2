//! Lifting a crisp relation on states to a graded relation on distributions.

use crate::algebra::{Algebra, Degree};
use crate::model::Distribution;
use crate::relation::Relation;

/// How well `r` matches `p` against `q`:
///
/// ```text
/// ⋀_u  (p(u) → q(r→u))  ∧  (q(u) → p(r←u))
/// ```
///
/// where `q(X)` is the join of `q` over `X`. Conjuncts for states outside
/// both supports are `0 → _ = 1`, so only the supports are visited.
pub fn lift_degree(p: &Distribution, q: &Distribution, r: &Relation, alg: Algebra) -> Degree {
    let mut acc = Degree::one();
    for (u, pu) in p.entries() {
        let matched = q.sup_over(r.image(*u));
        acc = acc.meet(&alg.resid(pu, &matched));
        if acc.is_zero() {
            return acc;
        }
    }
    for (w, qw) in q.entries() {
        let matched = Degree::join_all(
            p.entries()
                .iter()
                .filter(|(x, _)| r.contains(*x, *w))
                .map(|(_, d)| d),
        );
        acc = acc.meet(&alg.resid(qw, &matched));
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// `(p, q) ∈ r†_alpha`.
pub fn lifted_member(p: &Distribution, q: &Distribution, r: &Relation, alpha: &Degree, alg: Algebra) -> bool {
    lift_degree(p, q, r, alg) >= *alpha
}
