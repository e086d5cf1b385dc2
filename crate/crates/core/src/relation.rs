//! Crisp binary relations between the states of two (possibly equal) systems.

use std::fmt;

use crate::model::{Nfts, StateId, StateSet};

/// `R ⊆ left × right`, stored as one successor bitset per left state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    right: usize,
    rows: Vec<StateSet>,
}

impl Relation {
    pub fn empty(left: usize, right: usize) -> Self {
        Relation {
            right,
            rows: vec![StateSet::empty(right); left],
        }
    }

    pub fn full(left: usize, right: usize) -> Self {
        Relation {
            right,
            rows: vec![StateSet::full(right); left],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(StateId(i), StateId(i));
        }
        r
    }

    /// `xs × ys`.
    pub fn product(xs: &StateSet, ys: &StateSet) -> Self {
        let mut r = Self::empty(xs.universe(), ys.universe());
        for x in xs.iter() {
            r.rows[x.0] = ys.clone();
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (StateId, StateId)>>(left: usize, right: usize, pairs: I) -> Self {
        let mut r = Self::empty(left, right);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// Builds a relation inside one system from state names.
    pub fn from_names(m: &Nfts, pairs: &[(&str, &str)]) -> Result<Self, crate::model::ModelError> {
        let mut r = Self::empty(m.num_states(), m.num_states());
        for (a, b) in pairs {
            r.insert(m.state(a)?, m.state(b)?);
        }
        Ok(r)
    }

    pub fn left_size(&self) -> usize {
        self.rows.len()
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn contains(&self, a: StateId, b: StateId) -> bool {
        self.rows.get(a.0).is_some_and(|row| row.contains(b))
    }

    pub fn insert(&mut self, a: StateId, b: StateId) -> bool {
        self.rows[a.0].insert(b)
    }

    pub fn remove(&mut self, a: StateId, b: StateId) -> bool {
        self.rows[a.0].remove(b)
    }

    /// `{b | (a, b) ∈ R}`.
    pub fn image(&self, a: StateId) -> &StateSet {
        &self.rows[a.0]
    }

    /// `{a | (a, b) ∈ R}`.
    pub fn preimage(&self, b: StateId) -> StateSet {
        StateSet::from_iter(
            self.rows.len(),
            (0..self.rows.len()).map(StateId).filter(|&a| self.rows[a.0].contains(b)),
        )
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (StateId(a), b)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(StateSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(StateSet::is_empty)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// `{a | ∃b. (a, b) ∈ R}`.
    pub fn domain(&self) -> StateSet {
        StateSet::from_iter(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, row)| !row.is_empty())
                .map(|(a, _)| StateId(a)),
        )
    }

    /// `{b | ∃a. (a, b) ∈ R}`.
    pub fn codomain(&self) -> StateSet {
        let mut out = StateSet::empty(self.right);
        for row in &self.rows {
            out.union_with(row);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        out
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
        out
    }

    pub fn inverse(&self) -> Relation {
        let mut out = Relation::empty(self.right, self.rows.len());
        for (a, b) in self.pairs() {
            out.insert(b, a);
        }
        out
    }

    /// `R ∘ S = {(a, c) | ∃b. (a, b) ∈ R ∧ (b, c) ∈ S}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.rows.len(), other.right);
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                out.rows[a].union_with(&other.rows[b.0]);
            }
        }
        out
    }

    /// Keeps only the pairs satisfying `keep`.
    pub fn retain<F: FnMut(StateId, StateId) -> bool>(&mut self, mut keep: F) {
        for a in 0..self.rows.len() {
            let drop: Vec<_> = self.rows[a].iter().filter(|&b| !keep(StateId(a), b)).collect();
            for b in drop {
                self.rows[a].remove(b);
            }
        }
    }

    /// Pairs rendered by name, sorted lexicographically.
    pub fn named_pairs(&self, left: &Nfts, right: &Nfts) -> Vec<(String, String)> {
        let mut out: Vec<_> = self
            .pairs()
            .map(|(a, b)| (left.state_name(a).to_string(), right.state_name(b).to_string()))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs().map(|(a, b)| (a.0, b.0))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> StateId {
        StateId(i)
    }

    #[test]
    fn algebra_of_relations() {
        let r = Relation::from_pairs(3, 3, [(s(0), s(1)), (s(1), s(2))]);
        let t = Relation::from_pairs(3, 3, [(s(1), s(0)), (s(2), s(2))]);
        assert_eq!(
            r.compose(&t).pairs().collect::<Vec<_>>(),
            vec![(s(0), s(0)), (s(1), s(2))]
        );
        assert_eq!(r.inverse().pairs().collect::<Vec<_>>(), vec![(s(1), s(0)), (s(2), s(1))]);
        assert_eq!(r.union(&t).len(), 4);
        assert!(r.intersection(&t).is_empty());
        assert_eq!(r.domain().iter().collect::<Vec<_>>(), vec![s(0), s(1)]);
        assert_eq!(r.codomain().iter().collect::<Vec<_>>(), vec![s(1), s(2)]);
        assert_eq!(r.preimage(s(2)).iter().collect::<Vec<_>>(), vec![s(1)]);
        assert!(Relation::identity(3).is_subset(&Relation::full(3, 3)));
    }

    #[test]
    fn rectangular_product() {
        let xs = StateSet::from_iter(2, [s(1)]);
        let ys = StateSet::from_iter(4, [s(0), s(3)]);
        let p = Relation::product(&xs, &ys);
        assert_eq!(p.left_size(), 2);
        assert_eq!(p.right_size(), 4);
        assert_eq!(p.pairs().collect::<Vec<_>>(), vec![(s(1), s(0)), (s(1), s(3))]);
        assert_eq!(p.inverse().left_size(), 4);
    }
}
