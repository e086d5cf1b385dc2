mod common;

use common::{algebra, degree, pick, small_system};
use limbis::fixedpoint::limited_bisimilarity;
use limbis::limited::bis;
use limbis::logic::{distinguish_with, eval_state, parse_state_formula, DistFormula, StateFormula};
use limbis::subsystem::unfold;
use limbis::{Algebra, Degree, Nfts};
use proptest::prelude::*;

fn quarters() -> Vec<Degree> {
    (0..4).map(|n| Degree::ratio(n, 4).unwrap()).collect()
}

fn formula(labels: Vec<String>) -> impl Strategy<Value = StateFormula> {
    let leaf = Just(StateFormula::Top).boxed();
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let labels = labels.clone();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StateFormula::and(a, b)),
            (inner.clone(), degree()).prop_map(|(a, c)| StateFormula::implies(a, c)),
            (degree(), inner.clone()).prop_map(|(c, a)| StateFormula::const_implies(c, a)),
            (inner.clone(), degree()).prop_map(|(a, c)| StateFormula::tensor(a, c)),
            (proptest::sample::select(labels), inner.clone(), proptest::option::of(degree()))
                .prop_map(|(l, a, c)| {
                    let lifted = DistFormula::lift(a);
                    let d = match c {
                        Some(c) => DistFormula::and(lifted.clone(), DistFormula::implies(lifted, c)),
                        None => lifted,
                    };
                    StateFormula::diamond(&l, d)
                }),
        ]
    })
}

fn labelled() -> impl Strategy<Value = (Nfts, StateFormula)> {
    small_system(5).prop_flat_map(|m| {
        let labels: Vec<String> = m.labels().map(|a| m.label_name(a).to_string()).collect();
        (Just(m), formula(labels))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn related_states_are_not_separated(
        m in small_system(4), alg in algebra(), k in 0usize..=2, i in any::<usize>(), j in any::<usize>(),
    ) {
        let (u, v) = (pick(&m, i), pick(&m, j));
        let alpha = bis(&m, u, v, k, alg);
        if limited_bisimilarity(&m, k, &alpha, alg).contains(u, v) {
            let w = distinguish_with(&m, u, v, k, &alpha, k, alg, &quarters());
            prop_assert!(w.is_none(), "{:?}", w.map(|w| w.formula.to_string()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formulas_round_trip_through_text((_m, f) in labelled()) {
        prop_assert_eq!(parse_state_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn related_states_agree_on_random_formulas((m, f) in labelled(), alg in algebra(), i in any::<usize>(), j in any::<usize>()) {
        let (u, v) = (pick(&m, i), pick(&m, j));
        let k = f.modal_depth();
        let alpha = bis(&m, u, v, k, alg);
        if limited_bisimilarity(&m, k, &alpha, alg).contains(u, v) {
            let tu = unfold(&m, u, k);
            let tv = unfold(&m, v, k);
            let a = eval_state(&tu.tree, &f, tu.root, alg);
            let b = eval_state(&tv.tree, &f, tv.root, alg);
            // A label that only the base system knows is absent from an unfolding.
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!(alg.biresid(&a, &b) >= alpha, "{} gives {} vs {}", f, a, b);
            }
        }
    }

    #[test]
    fn constant_positions_have_fixed_polarity(
        (m, f) in labelled(), alg in algebra(), c1 in degree(), c2 in degree(), i in any::<usize>(),
    ) {
        let u = pick(&m, i);
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let val = |g: StateFormula| eval_state(&m, &g, u, alg).unwrap();
        prop_assert!(val(StateFormula::implies(f.clone(), lo.clone())) <= val(StateFormula::implies(f.clone(), hi.clone())));
        prop_assert!(val(StateFormula::const_implies(hi.clone(), f.clone())) <= val(StateFormula::const_implies(lo.clone(), f.clone())));
        prop_assert!(val(StateFormula::tensor(f.clone(), lo)) <= val(StateFormula::tensor(f, hi)));
    }
}

#[test]
fn pinned_bounded_completeness() {
    let m2 = limbis::examples::m2();
    let (u, v) = (m2.state("u").unwrap(), m2.state("v").unwrap());
    let step = Degree::ratio(1, 100).unwrap();
    for alg in [Algebra::Goedel, Algebra::Lukasiewicz] {
        let degree = bis(&m2, u, v, 3, alg);
        let above = Degree::new(degree.as_rational() + step.as_rational()).unwrap();
        let consts = limbis::logic::degree_closure(&m2, alg);
        assert!(distinguish_with(&m2, u, v, 3, &above, 3, alg, &consts).is_some(), "{alg}");
    }
    // The exhaustive direction is only affordable for the smallest closure.
    let degree = bis(&m2, u, v, 3, Algebra::Goedel);
    let consts = limbis::logic::degree_closure(&m2, Algebra::Goedel);
    assert!(distinguish_with(&m2, u, v, 3, &degree, 3, Algebra::Goedel, &consts).is_none());
}
