//! Nondeterministic fuzzy transition systems.
//!
//! States and labels are interned to dense indices when the system is built;
//! names are kept only for parsing and rendering.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::algebra::Degree;

/// Index of a state inside one [`Nfts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// Index of a label inside one [`Nfts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a system needs at least one state")]
    NoStates,
    #[error("invalid state name `{0}`")]
    InvalidStateName(String),
    #[error("invalid label name `{0}`")]
    InvalidLabelName(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("label `{0}` declared twice")]
    DuplicateLabel(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("state `{0}` appears twice in one distribution")]
    DuplicateTarget(String),
}

/// A bitset over the states of one system.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(StateId(i));
        }
        set
    }

    pub fn singleton(universe: usize, s: StateId) -> Self {
        let mut set = Self::empty(universe);
        set.insert(s);
        set
    }

    pub fn from_iter<I: IntoIterator<Item = StateId>>(universe: usize, items: I) -> Self {
        let mut set = Self::empty(universe);
        for s in items {
            set.insert(s);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, s: StateId) -> bool {
        s.0 < self.universe && self.words[s.0 / 64] >> (s.0 % 64) & 1 == 1
    }

    /// Returns true if the state was newly added.
    pub fn insert(&mut self, s: StateId) -> bool {
        assert!(s.0 < self.universe, "state index out of universe");
        let was = self.contains(s);
        self.words[s.0 / 64] |= 1 << (s.0 % 64);
        !was
    }

    pub fn remove(&mut self, s: StateId) -> bool {
        let was = self.contains(s);
        if was {
            self.words[s.0 / 64] &= !(1 << (s.0 % 64));
        }
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.universe)
            .filter(move |&i| self.words[i / 64] >> (i % 64) & 1 == 1)
            .map(StateId)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|s| s.0)).finish()
    }
}

/// A possibility distribution: a fuzzy subset of the states. Only positive
/// entries are stored, so the key set is exactly the support.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Distribution {
    entries: Vec<(StateId, Degree)>,
}

impl Distribution {
    /// Builds a distribution, dropping zero entries. Duplicate targets are
    /// rejected with the offending index.
    pub fn new<I: IntoIterator<Item = (StateId, Degree)>>(items: I) -> Result<Self, StateId> {
        let mut map = BTreeMap::new();
        for (s, d) in items {
            if map.insert(s, d).is_some() {
                return Err(s);
            }
        }
        Ok(Distribution {
            entries: map.into_iter().filter(|(_, d)| !d.is_zero()).collect(),
        })
    }

    pub fn get(&self, s: StateId) -> Degree {
        self.get_ref(s).cloned().unwrap_or_else(Degree::zero)
    }

    pub fn get_ref(&self, s: StateId) -> Option<&Degree> {
        self.entries
            .binary_search_by_key(&s, |(t, _)| *t)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Support entries in ascending state order.
    pub fn entries(&self) -> &[(StateId, Degree)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.entries.iter().map(|(s, _)| *s)
    }

    pub fn support_set(&self, universe: usize) -> StateSet {
        StateSet::from_iter(universe, self.support())
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Join of the distribution over a state set; 0 when they do not meet.
    pub fn sup_over(&self, set: &StateSet) -> Degree {
        Degree::join_all(
            self.entries
                .iter()
                .filter(|(s, _)| set.contains(*s))
                .map(|(_, d)| d),
        )
    }

    /// Relabels the support through `f`.
    pub fn map_states<F: FnMut(StateId) -> StateId>(&self, mut f: F) -> Distribution {
        let mut entries: Vec<_> = self.entries.iter().map(|(s, d)| (f(*s), d.clone())).collect();
        entries.sort_by_key(|(s, _)| *s);
        Distribution { entries }
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(s, d)| (s.0, d.to_string())))
            .finish()
    }
}

/// A labeled fuzzy edge `src --label|degree--> dst`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuzzyEdge {
    pub src: StateId,
    pub label: LabelId,
    pub degree: Degree,
    pub dst: StateId,
}

/// Longest path length from a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLength {
    Finite(usize),
    /// A cycle is reachable, so paths are arbitrarily long.
    Unbounded,
}

/// An immutable nondeterministic fuzzy transition system.
#[derive(Clone, PartialEq, Eq)]
pub struct Nfts {
    states: Vec<String>,
    labels: Vec<String>,
    state_index: HashMap<String, StateId>,
    label_index: HashMap<String, LabelId>,
    // delta[state][label]
    delta: Vec<Vec<Vec<Distribution>>>,
    succ: Vec<StateSet>,
}

impl fmt::Debug for Nfts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nfts")
            .field("states", &self.states)
            .field("labels", &self.labels)
            .field("delta", &self.delta)
            .finish()
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '{' | '}' | ':' | ',' | '#'))
}

impl Nfts {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> {
        (0..self.labels.len()).map(LabelId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn label_name(&self, a: LabelId) -> &str {
        &self.labels[a.0]
    }

    pub fn state(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn label(&self, name: &str) -> Result<LabelId, ModelError> {
        self.label_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownLabel(name.to_string()))
    }

    /// `δ(u, a)`, possibly empty.
    pub fn transitions(&self, u: StateId, a: LabelId) -> &[Distribution] {
        &self.delta[u.0][a.0]
    }

    /// Name-based variant of [`Nfts::transitions`].
    pub fn transitions_by_name(&self, u: &str, a: &str) -> Result<&[Distribution], ModelError> {
        Ok(self.transitions(self.state(u)?, self.label(a)?))
    }

    /// All `(label, distribution)` pairs leaving `u`.
    pub fn outgoing(&self, u: StateId) -> impl Iterator<Item = (LabelId, &Distribution)> {
        self.delta[u.0]
            .iter()
            .enumerate()
            .flat_map(|(a, ps)| ps.iter().map(move |p| (LabelId(a), p)))
    }

    pub fn is_steady(&self, u: StateId) -> bool {
        self.succ[u.0].is_empty()
    }

    pub fn edges(&self) -> Vec<FuzzyEdge> {
        let mut out = Vec::new();
        for u in self.states() {
            for (label, p) in self.outgoing(u) {
                for (dst, degree) in p.entries() {
                    out.push(FuzzyEdge {
                        src: u,
                        label,
                        degree: degree.clone(),
                        dst: *dst,
                    });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.num_states())
    }

    pub fn state_set<I: IntoIterator<Item = StateId>>(&self, items: I) -> StateSet {
        StateSet::from_iter(self.num_states(), items)
    }

    /// States reachable from `set` by one fuzzy edge.
    pub fn succ_neighborhood(&self, set: &StateSet) -> StateSet {
        let mut out = self.empty_set();
        for u in set.iter() {
            out.union_with(&self.succ[u.0]);
        }
        out
    }

    /// States with a fuzzy edge into `set`.
    pub fn pred_neighborhood(&self, set: &StateSet) -> StateSet {
        self.state_set(self.states().filter(|v| self.succ[v.0].intersects(set)))
    }

    /// `D_u[0..=k]`: the states reached from `u` after exactly `i` steps.
    pub fn depth_sets(&self, u: StateId, k: usize) -> Vec<StateSet> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(self.state_set([u]));
        for i in 0..k {
            let next = self.succ_neighborhood(&out[i]);
            out.push(next);
        }
        out
    }

    pub fn max_path_len(&self, u: StateId) -> PathLength {
        // DFS with colouring; memoized longest path for finished states.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done(usize),
        }
        fn visit(m: &Nfts, s: StateId, marks: &mut [Mark]) -> Option<usize> {
            match marks[s.0] {
                Mark::Done(n) => return Some(n),
                Mark::Active => return None,
                Mark::New => {}
            }
            marks[s.0] = Mark::Active;
            let mut best = 0;
            for t in m.succ[s.0].iter() {
                best = best.max(visit(m, t, marks)? + 1);
            }
            marks[s.0] = Mark::Done(best);
            Some(best)
        }
        let mut marks = vec![Mark::New; self.num_states()];
        match visit(self, u, &mut marks) {
            Some(n) => PathLength::Finite(n),
            None => PathLength::Unbounded,
        }
    }

    /// Disjoint union; states of `right` are shifted by `left.num_states()`
    /// and labels are merged by name. Names get `L.`/`R.` prefixes.
    pub fn disjoint_union(left: &Nfts, right: &Nfts) -> Nfts {
        let mut b = NftsBuilder::new();
        for s in left.states() {
            b.add_state(&format!("L.{}", left.state_name(s))).expect("fresh name");
        }
        for s in right.states() {
            b.add_state(&format!("R.{}", right.state_name(s))).expect("fresh name");
        }
        for m in [left, right] {
            for a in m.labels() {
                let _ = b.add_label(m.label_name(a));
            }
        }
        let offset = left.num_states();
        for (m, shift) in [(left, 0), (right, offset)] {
            for u in m.states() {
                for (a, p) in m.outgoing(u) {
                    let label = b.label_id(m.label_name(a)).expect("merged label");
                    b.push_transition(StateId(u.0 + shift), label, p.map_states(|s| StateId(s.0 + shift)));
                }
            }
        }
        b.build().expect("union of valid systems is valid")
    }
}

/// Incremental constructor for [`Nfts`].
#[derive(Debug, Default, Clone)]
pub struct NftsBuilder {
    states: Vec<String>,
    labels: Vec<String>,
    state_index: HashMap<String, StateId>,
    label_index: HashMap<String, LabelId>,
    transitions: Vec<(StateId, LabelId, Distribution)>,
}

impl NftsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: &str) -> Result<StateId, ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidStateName(name.to_string()));
        }
        if self.state_index.contains_key(name) {
            return Err(ModelError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.states.len());
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_label(&mut self, name: &str) -> Result<LabelId, ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidLabelName(name.to_string()));
        }
        if self.label_index.contains_key(name) {
            return Err(ModelError::DuplicateLabel(name.to_string()));
        }
        let id = LabelId(self.labels.len());
        self.labels.push(name.to_string());
        self.label_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn label_id(&self, name: &str) -> Result<LabelId, ModelError> {
        self.label_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownLabel(name.to_string()))
    }

    /// Adds `src --label--> {target: degree, ...}` by name.
    pub fn add_transition<'a, I>(&mut self, src: &str, label: &str, targets: I) -> Result<(), ModelError>
    where
        I: IntoIterator<Item = (&'a str, Degree)>,
    {
        let src = self.state_id(src)?;
        let label = self.label_id(label)?;
        let mut entries = Vec::new();
        for (name, d) in targets {
            entries.push((self.state_id(name)?, d));
        }
        let dist = Distribution::new(entries)
            .map_err(|s| ModelError::DuplicateTarget(self.states[s.0].clone()))?;
        self.transitions.push((src, label, dist));
        Ok(())
    }

    /// Adds a transition over already-interned indices.
    pub fn push_transition(&mut self, src: StateId, label: LabelId, dist: Distribution) {
        self.transitions.push((src, label, dist));
    }

    pub fn build(self) -> Result<Nfts, ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let n = self.states.len();
        let mut delta = vec![vec![Vec::<Distribution>::new(); self.labels.len()]; n];
        for (src, label, dist) in self.transitions {
            let cell = &mut delta[src.0][label.0];
            if !cell.contains(&dist) {
                cell.push(dist);
            }
        }
        let succ = delta
            .iter()
            .map(|row| {
                let mut set = StateSet::empty(n);
                for p in row.iter().flatten() {
                    for s in p.support() {
                        set.insert(s);
                    }
                }
                set
            })
            .collect();
        Ok(Nfts {
            states: self.states,
            labels: self.labels,
            state_index: self.state_index,
            label_index: self.label_index,
            delta,
            succ,
        })
    }
}
