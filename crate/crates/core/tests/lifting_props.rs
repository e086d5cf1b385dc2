mod common;

use common::{algebra, degree, distribution, relation};
use limbis::lifting::{lift_degree, lifted_member};
use limbis::{Algebra, Degree, Relation};
use proptest::prelude::*;

const N: usize = 4;

proptest! {
    #[test]
    fn identity_lifting_is_pointwise_biresiduum(alg in algebra(), p in distribution(N), q in distribution(N)) {
        let expect = Degree::meet_all(&(0..N)
            .map(|i| alg.biresid(&p.get(limbis::StateId(i)), &q.get(limbis::StateId(i))))
            .collect::<Vec<_>>());
        prop_assert_eq!(lift_degree(&p, &q, &Relation::identity(N), alg), expect);
    }

    #[test]
    fn monotone_in_relation_and_threshold(
        alg in algebra(), p in distribution(N), q in distribution(N),
        r1 in relation(N), extra in relation(N), a1 in degree(), a2 in degree(),
    ) {
        let r2 = r1.union(&extra);
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(lift_degree(&p, &q, &r1, alg) <= lift_degree(&p, &q, &r2, alg));
        if lifted_member(&p, &q, &r1, &hi, alg) {
            prop_assert!(lifted_member(&p, &q, &r2, &lo, alg));
        }
    }

    #[test]
    fn union_of_lifted_relations(
        alg in algebra(), p in distribution(N), q in distribution(N),
        r1 in relation(N), r2 in relation(N), a in degree(),
    ) {
        if lifted_member(&p, &q, &r1, &a, alg) || lifted_member(&p, &q, &r2, &a, alg) {
            prop_assert!(lifted_member(&p, &q, &r1.union(&r2), &a, alg));
        }
    }

    #[test]
    fn composition_of_lifted_relations(
        alg in algebra(), p in distribution(N), q in distribution(N), s in distribution(N),
        r1 in relation(N), r2 in relation(N),
    ) {
        let a1 = lift_degree(&p, &q, &r1, alg);
        let a2 = lift_degree(&q, &s, &r2, alg);
        prop_assert!(lift_degree(&p, &s, &r1.compose(&r2), alg) >= alg.conj(&a1, &a2));
    }

    #[test]
    fn inverse_commutes_with_lifting(alg in algebra(), p in distribution(N), q in distribution(N), r in relation(N)) {
        prop_assert_eq!(lift_degree(&q, &p, &r.inverse(), alg), lift_degree(&p, &q, &r, alg));
    }

    #[test]
    fn only_support_pairs_matter(alg in algebra(), p in distribution(N), q in distribution(N), r in relation(N)) {
        let restricted = r.intersection(&Relation::product(&p.support_set(N), &q.support_set(N)));
        prop_assert_eq!(lift_degree(&p, &q, &restricted, alg), lift_degree(&p, &q, &r, alg));
    }
}

#[test]
fn unrelated_supports_lift_to_zero() {
    let p = limbis::Distribution::new([(limbis::StateId(0), Degree::one())]).unwrap();
    let q = limbis::Distribution::new([(limbis::StateId(1), Degree::one())]).unwrap();
    for alg in Algebra::ALL {
        assert!(lift_degree(&p, &q, &Relation::empty(2, 2), alg).is_zero());
    }
}
