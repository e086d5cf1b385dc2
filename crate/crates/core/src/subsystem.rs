//! Depth-bounded subsystems around a state: the depth-indexed unfolding
//! `T_S(u, k)` and the plain induced neighbourhood `S(u, k)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{LabelId, Nfts, NftsBuilder, StateId, StateSet};

/// A copy of a base state at a given depth, rendered `base@depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnfoldedState {
    pub base: StateId,
    pub depth: usize,
}

/// The unfolding of a system from a root, with each copy's origin.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub tree: Nfts,
    pub root: StateId,
    origins: Vec<UnfoldedState>,
}

impl Unfolding {
    /// Origin of a tree state.
    pub fn origin(&self, s: StateId) -> UnfoldedState {
        self.origins[s.0]
    }

    /// Tree states with their origins, in tree order.
    pub fn origins(&self) -> impl Iterator<Item = (StateId, UnfoldedState)> + '_ {
        self.origins.iter().enumerate().map(|(i, o)| (StateId(i), *o))
    }

    /// The tree state for `base` at `depth`, if it exists.
    pub fn copy_of(&self, base: StateId, depth: usize) -> Option<StateId> {
        self.origins
            .iter()
            .position(|o| *o == UnfoldedState { base, depth })
            .map(StateId)
    }
}

/// Renders `base@depth` with the base state's name.
pub struct UnfoldedName<'a>(pub &'a Nfts, pub UnfoldedState);

impl fmt::Display for UnfoldedName<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.0.state_name(self.1.base), self.1.depth)
    }
}

/// `T_S(u, k)`: one copy of every state of `D_u[i]` per depth `i ≤ k`;
/// transitions out of depth `i < k` are copied onto depth `i + 1`, and
/// depth-`k` copies are steady.
pub fn unfold(m: &Nfts, u: StateId, k: usize) -> Unfolding {
    let depths = m.depth_sets(u, k);
    let mut b = NftsBuilder::new();
    let mut origins = Vec::new();
    let mut index = vec![vec![None; m.num_states()]; k + 1];
    for (i, set) in depths.iter().enumerate() {
        for s in set.iter() {
            let o = UnfoldedState { base: s, depth: i };
            let id = b
                .add_state(&UnfoldedName(m, o).to_string())
                .expect("relabeled names are unique");
            index[i][s.0] = Some(id);
            origins.push(o);
        }
    }
    let fired: BTreeSet<LabelId> = depths
        .iter()
        .flat_map(|set| set.iter())
        .flat_map(|s| m.outgoing(s).map(|(a, _)| a))
        .collect();
    for &a in &fired {
        b.add_label(m.label_name(a)).expect("label names are valid");
    }
    for i in 0..k {
        for s in depths[i].iter() {
            let src = index[i][s.0].expect("state copied at its depth");
            for (a, p) in m.outgoing(s) {
                let label = b.label_id(m.label_name(a)).expect("label registered");
                let q = p.map_states(|t| index[i + 1][t.0].expect("successor copied one level down"));
                b.push_transition(src, label, q);
            }
        }
    }
    Unfolding {
        tree: b.build().expect("unfolding has a root"),
        root: StateId(0),
        origins,
    }
}

/// `S(u, k)`: the states within `k` steps of `u`, keeping the transitions
/// whose source is within `k - 1` steps. State names are unchanged.
pub fn induced(m: &Nfts, u: StateId, k: usize) -> Nfts {
    let depths = m.depth_sets(u, k);
    let mut all = StateSet::empty(m.num_states());
    let mut inner = StateSet::empty(m.num_states());
    for (i, set) in depths.iter().enumerate() {
        all.union_with(set);
        if i < k {
            inner.union_with(set);
        }
    }
    let mut b = NftsBuilder::new();
    let mut index = vec![None; m.num_states()];
    for s in all.iter() {
        index[s.0] = Some(b.add_state(m.state_name(s)).expect("names come from a valid system"));
    }
    for a in m.labels() {
        b.add_label(m.label_name(a)).expect("names come from a valid system");
    }
    for s in inner.iter() {
        for (a, p) in m.outgoing(s) {
            let src = index[s.0].expect("inner states are kept");
            let label = b.label_id(m.label_name(a)).expect("labels are kept");
            b.push_transition(src, label, p.map_states(|t| index[t.0].expect("successors are kept")));
        }
    }
    b.build().expect("neighbourhood contains its root")
}
