mod common;

use common::{algebra, candidates, pick, system, system_with};
use limbis::fixedpoint::{greatest_alpha_bisimulation, limited_bisimilarity};
use limbis::limited::{alpha_bisimilarity_degree, bis};
use limbis::random::RandomParams;
use limbis::subsystem::{induced, unfold};
use limbis::PathLength;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unfoldings_decide_limited_bisimilarity(
        m in system(), alg in algebra(), k in 0usize..=3, i in any::<usize>(), j in any::<usize>(), ai in any::<usize>(),
    ) {
        let (u, v) = (pick(&m, i), pick(&m, j));
        let tu = unfold(&m, u, k);
        let tv = unfold(&m, v, k);
        let cs = candidates(&m, alg);
        for alpha in [&cs[ai % cs.len()], &cs[(ai / 7) % cs.len()]] {
            let limited = limited_bisimilarity(&m, k, alpha, alg).contains(u, v);
            let rooted = greatest_alpha_bisimulation(&tu.tree, &tv.tree, alpha, alg).contains(tu.root, tv.root);
            prop_assert_eq!(limited, rooted, "alpha {}", alpha);
        }
    }

    #[test]
    fn induced_survival_implies_limited_bisimilarity(
        m in system(), alg in algebra(), k in 0usize..=3, i in any::<usize>(), j in any::<usize>(), ai in any::<usize>(),
    ) {
        let (u, v) = (pick(&m, i), pick(&m, j));
        let su = induced(&m, u, k);
        let sv = induced(&m, v, k);
        let cs = candidates(&m, alg);
        let alpha = &cs[ai % cs.len()];
        let r = greatest_alpha_bisimulation(&su, &sv, alpha, alg);
        let root_u = su.state(m.state_name(u)).unwrap();
        let root_v = sv.state(m.state_name(v)).unwrap();
        if r.contains(root_u, root_v) {
            prop_assert!(limited_bisimilarity(&m, k, alpha, alg).contains(u, v));
        }
    }

    #[test]
    fn unfolding_shape(m in system(), k in 0usize..=3, i in any::<usize>()) {
        let u = pick(&m, i);
        let t = unfold(&m, u, k);
        let depths = m.depth_sets(u, k);
        prop_assert_eq!(t.tree.num_states(), depths.iter().map(|d| d.len()).sum::<usize>());
        prop_assert_eq!(t.origin(t.root).depth, 0);
        for (s, o) in t.origins() {
            prop_assert!(depths[o.depth].contains(o.base));
            if o.depth == k {
                prop_assert!(t.tree.is_steady(s));
            } else {
                // Copies reproduce the base transitions one level down.
                prop_assert_eq!(t.tree.outgoing(s).count(), m.outgoing(o.base).count());
                for (_, p) in t.tree.outgoing(s) {
                    for (w, _) in p.entries() {
                        prop_assert_eq!(t.origin(*w).depth, o.depth + 1);
                    }
                }
            }
            if o.depth > 0 {
                let fed = t.tree.states().any(|x| t.tree.outgoing(x).any(|(_, p)| p.get_ref(s).is_some()));
                prop_assert!(fed);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn full_depth_limited_degree_is_the_unlimited_degree(
        m in system_with(RandomParams { acyclic: true, ..RandomParams::default() }),
        alg in algebra(), i in any::<usize>(), j in any::<usize>(),
    ) {
        let (u, v) = (pick(&m, i), pick(&m, j));
        // An empty distribution is a transition without edges, which path length cannot see.
        let hollow = |s| m.depth_sets(s, m.num_states()).iter().flat_map(|d| d.iter()).any(|w| {
            m.outgoing(w).any(|(_, p)| p.support_len() == 0)
        });
        prop_assume!(!hollow(u) && !hollow(v));
        let len = |s| match m.max_path_len(s) {
            PathLength::Finite(n) => n,
            PathLength::Unbounded => unreachable!("acyclic by construction"),
        };
        let k = len(u).max(len(v));
        prop_assert_eq!(bis(&m, u, v, k, alg), alpha_bisimilarity_degree(&m, u, v, alg).unwrap());
    }
}

#[test]
fn empty_distribution_hides_a_step_from_path_length() {
    let m = limbis::parse_model("states: s t\nlabels: a\ntrans s a { }\n").unwrap();
    let (s, t) = (m.state("s").unwrap(), m.state("t").unwrap());
    assert_eq!(m.max_path_len(s), PathLength::Finite(0));
    assert!(bis(&m, s, t, 0, limbis::Algebra::Goedel).is_one());
    assert!(alpha_bisimilarity_degree(&m, s, t, limbis::Algebra::Goedel).unwrap().is_zero());
}
