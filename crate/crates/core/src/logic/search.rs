//! Bounded enumeration of formulas and the search for a formula that tells
//! two states apart.
//!
//! Both walk the same grammar, level by level in modal depth `d`:
//!
//! - atoms: `T` at depth 0, then `<a> psi` for every distribution formula
//!   `psi` of the previous level;
//! - wrappers of an atom `f`: `f`, `(f -> c)`, `(c -> f)`, `(f * c)`, with
//!   the forms that are trivially equal to a shorter one left out;
//! - state formulas: wrappers plus conjunctions of two distinct wrappers;
//! - distribution formulas: `lift(f)`, `(lift(f) -> c)`, `(c -> lift(f))`
//!   plus conjunctions of two of those.
//!
//! The search keeps one formula per distinct value vector over the two
//! unfoldings, so it explores the same grammar modulo semantic equality.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::{DistFormula, StateFormula};
use crate::algebra::{Algebra, Degree};
use crate::model::{Distribution, LabelId, Nfts, StateId};
use crate::subsystem::unfold;

/// Constants worth using: drops `1` and duplicates.
fn normalize(consts: &[Degree]) -> Vec<Degree> {
    let set: BTreeSet<Degree> = consts.iter().filter(|c| !c.is_one()).cloned().collect();
    set.into_iter().collect()
}

fn wrappers(atom: &StateFormula, consts: &[Degree]) -> Vec<StateFormula> {
    let mut out = vec![atom.clone()];
    for c in consts {
        out.push(StateFormula::implies(atom.clone(), c.clone()));
    }
    if *atom != StateFormula::Top {
        for c in consts.iter().filter(|c| !c.is_zero()) {
            out.push(StateFormula::const_implies(c.clone(), atom.clone()));
        }
        for c in consts.iter().filter(|c| !c.is_zero()) {
            out.push(StateFormula::tensor(atom.clone(), c.clone()));
        }
    }
    out
}

fn dist_wrappers(f: &StateFormula, consts: &[Degree]) -> Vec<DistFormula> {
    let lifted = DistFormula::lift(f.clone());
    let mut out = vec![lifted.clone()];
    for c in consts {
        out.push(DistFormula::implies(lifted.clone(), c.clone()));
    }
    for c in consts.iter().filter(|c| !c.is_zero()) {
        out.push(DistFormula::const_implies(c.clone(), lifted.clone()));
    }
    out
}

fn push_unique<T: Clone + Eq + std::hash::Hash>(out: &mut Vec<T>, seen: &mut HashSet<T>, item: T) {
    if seen.insert(item.clone()) {
        out.push(item);
    }
}

/// Every state formula of modal depth at most `depth` over the labels of
/// `m` and the constants `consts`, in a fixed order without repeats.
pub fn enumerate_formulas(m: &Nfts, depth: usize, consts: &[Degree]) -> Vec<StateFormula> {
    let consts = normalize(consts);
    let labels: Vec<String> = m.labels().map(|a| m.label_name(a).to_string()).collect();
    let mut atoms = vec![StateFormula::Top];
    let mut states = Vec::new();
    for d in 0..=depth {
        if d > 0 {
            let dists = dist_level(&states, &consts);
            for l in &labels {
                for psi in &dists {
                    atoms.push(StateFormula::diamond(l, psi.clone()));
                }
            }
        }
        let mut seen = HashSet::new();
        let mut ws = Vec::new();
        for a in &atoms {
            for w in wrappers(a, &consts) {
                push_unique(&mut ws, &mut seen, w);
            }
        }
        let mut level = ws.clone();
        let plain: Vec<&StateFormula> = ws.iter().filter(|w| **w != StateFormula::Top).collect();
        for j in 0..plain.len() {
            for i in 0..j {
                push_unique(&mut level, &mut seen, StateFormula::and(plain[i].clone(), plain[j].clone()));
            }
        }
        states = level;
    }
    states
}

fn dist_level(states: &[StateFormula], consts: &[Degree]) -> Vec<DistFormula> {
    let mut seen = HashSet::new();
    let mut ws = Vec::new();
    for f in states {
        for w in dist_wrappers(f, consts) {
            push_unique(&mut ws, &mut seen, w);
        }
    }
    let mut out = ws.clone();
    for j in 0..ws.len() {
        for i in 0..j {
            push_unique(&mut out, &mut seen, DistFormula::and(ws[i].clone(), ws[j].clone()));
        }
    }
    out
}

/// Transition degrees closed twice under residuum and t-norm, with `0`
/// added and `1` removed.
pub fn degree_closure(m: &Nfts, alg: Algebra) -> Vec<Degree> {
    let mut set: BTreeSet<Degree> = m
        .states()
        .flat_map(|s| m.outgoing(s).flat_map(|(_, p)| p.entries().iter().map(|(_, d)| d.clone())).collect::<Vec<_>>())
        .collect();
    for _ in 0..2 {
        let base: Vec<Degree> = set.iter().cloned().collect();
        for a in &base {
            for b in &base {
                set.insert(alg.resid(a, b));
                set.insert(alg.conj(a, b));
            }
        }
    }
    set.insert(Degree::zero());
    set.remove(&Degree::one());
    set.into_iter().collect()
}

/// A formula separating two states, with its value at each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub formula: StateFormula,
    pub left: Degree,
    pub right: Degree,
}

/// The evaluation domain: both unfoldings side by side.
struct Domain {
    num_states: usize,
    labels: Vec<LabelId>,
    label_names: Vec<String>,
    dists: Vec<Distribution>,
    /// Per state, its transitions as (label, distribution index).
    trans: Vec<Vec<(LabelId, usize)>>,
}

impl Domain {
    fn new(m: &Nfts) -> Self {
        let mut dists: Vec<Distribution> = Vec::new();
        let mut trans = vec![Vec::new(); m.num_states()];
        for s in m.states() {
            for (a, p) in m.outgoing(s) {
                let idx = match dists.iter().position(|q| q == p) {
                    Some(i) => i,
                    None => {
                        dists.push(p.clone());
                        dists.len() - 1
                    }
                };
                trans[s.0].push((a, idx));
            }
        }
        Domain {
            num_states: m.num_states(),
            labels: m.labels().collect(),
            label_names: m.labels().map(|a| m.label_name(a).to_string()).collect(),
            dists,
            trans,
        }
    }

    fn diamond(&self, a: LabelId, dvals: &[Degree]) -> Vec<Degree> {
        (0..self.num_states)
            .map(|s| {
                self.trans[s]
                    .iter()
                    .filter(|(b, _)| *b == a)
                    .map(|(_, i)| &dvals[*i])
                    .max()
                    .cloned()
                    .unwrap_or_else(Degree::zero)
            })
            .collect()
    }

    fn lift(&self, svals: &[Degree]) -> Vec<Degree> {
        self.dists
            .iter()
            .map(|p| {
                p.entries()
                    .iter()
                    .map(|(w, pw)| pw.meet(&svals[w.0]))
                    .max()
                    .unwrap_or_else(Degree::zero)
            })
            .collect()
    }
}

type Class<F> = (F, Vec<Degree>);

/// Values of `f` and its constant wrappers, as produced by [`wrappers`].
fn state_wrapper_values(f: &Class<StateFormula>, consts: &[Degree], alg: Algebra) -> Vec<Class<StateFormula>> {
    let (formula, vals) = f;
    wrappers(formula, consts)
        .into_iter()
        .map(|w| {
            let v = match &w {
                StateFormula::ImpliesConst(_, c) => vals.iter().map(|x| alg.resid(x, c)).collect(),
                StateFormula::ConstImplies(c, _) => vals.iter().map(|x| alg.resid(c, x)).collect(),
                StateFormula::TensorConst(_, c) => vals.iter().map(|x| alg.conj(x, c)).collect(),
                _ => vals.clone(),
            };
            (w, v)
        })
        .collect()
}

fn dist_wrapper_values(lifted: Class<DistFormula>, consts: &[Degree], alg: Algebra) -> Vec<Class<DistFormula>> {
    let (formula, vals) = lifted;
    let mut out = Vec::new();
    for c in consts {
        out.push((
            DistFormula::implies(formula.clone(), c.clone()),
            vals.iter().map(|x| alg.resid(x, c)).collect(),
        ));
    }
    for c in consts.iter().filter(|c| !c.is_zero()) {
        out.push((
            DistFormula::const_implies(c.clone(), formula.clone()),
            vals.iter().map(|x| alg.resid(c, x)).collect(),
        ));
    }
    out.insert(0, (formula, vals));
    out
}

/// Raised when a search evaluates more candidate formulas than allowed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula search gave up after {0} candidate evaluations")]
pub struct BudgetExceeded(pub u64);

struct Budget {
    left: u64,
    limit: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<(), BudgetExceeded> {
        if n > self.left {
            return Err(BudgetExceeded(self.limit));
        }
        self.left -= n;
        Ok(())
    }
}

fn meet_vals(a: &[Degree], b: &[Degree]) -> Vec<Degree> {
    a.iter().zip(b).map(|(x, y)| x.meet(y)).collect()
}

/// Adds the classes of `fresh` to `all`, then every new conjunction of two
/// classes, and returns the classes that were new. Classes are identified
/// by their value vectors. `stop` sees each new class as soon as it exists;
/// when it returns true that class is returned alone.
fn close_under_and<F: Clone, G: Fn(F, F) -> F, S: FnMut(&Class<F>) -> bool>(
    all: &mut Vec<Class<F>>,
    seen: &mut HashSet<Vec<Degree>>,
    fresh: Vec<Class<F>>,
    and: G,
    mut stop: S,
    pairs: bool,
    budget: &mut Budget,
) -> Result<Result<Vec<Class<F>>, Class<F>>, BudgetExceeded> {
    budget.spend(fresh.len() as u64)?;
    let start = all.len();
    for c in fresh {
        if seen.insert(c.1.clone()) {
            if stop(&c) {
                return Ok(Err(c));
            }
            all.push(c);
        }
    }
    let end = all.len();
    let mut conj = Vec::new();
    for j in (start..end).filter(|_| pairs) {
        budget.spend(j as u64)?;
        for i in 0..j {
            let vals = meet_vals(&all[i].1, &all[j].1);
            if seen.insert(vals.clone()) {
                let c = (and(all[i].0.clone(), all[j].0.clone()), vals);
                if stop(&c) {
                    return Ok(Err(c));
                }
                conj.push(c);
            }
        }
    }
    let mut out: Vec<Class<F>> = all[start..end].to_vec();
    out.extend(conj);
    Ok(Ok(out))
}

/// First formula of modal depth at most `depth` whose values at `u` in
/// `T_S(u, k)` and at `v` in `T_S(v, k)` have biresiduum below `alpha`.
/// Constants come from [`degree_closure`].
pub fn distinguish(
    m: &Nfts,
    u: StateId,
    v: StateId,
    k: usize,
    alpha: &Degree,
    depth: usize,
    alg: Algebra,
) -> Option<Witness> {
    distinguish_with(m, u, v, k, alpha, depth, alg, &degree_closure(m, alg))
}

/// As [`distinguish`] with explicit constants. Formulas that agree on every
/// state and distribution of the two unfoldings are explored once.
#[allow(clippy::too_many_arguments)]
pub fn distinguish_with(
    m: &Nfts,
    u: StateId,
    v: StateId,
    k: usize,
    alpha: &Degree,
    depth: usize,
    alg: Algebra,
    consts: &[Degree],
) -> Option<Witness> {
    distinguish_bounded(m, u, v, k, alpha, depth, alg, consts, u64::MAX).expect("unbounded search")
}

/// As [`distinguish_with`], giving up after `budget` candidate evaluations.
///
/// The conjunction-free fragment of the grammar is searched first, then
/// the whole grammar.
#[allow(clippy::too_many_arguments)]
pub fn distinguish_bounded(
    m: &Nfts,
    u: StateId,
    v: StateId,
    k: usize,
    alpha: &Degree,
    depth: usize,
    alg: Algebra,
    consts: &[Degree],
    budget: u64,
) -> Result<Option<Witness>, BudgetExceeded> {
    let mut budget = Budget {
        left: budget,
        limit: budget,
    };
    let consts = normalize(consts);
    let tu = unfold(m, u, k);
    let tv = unfold(m, v, k);
    let union = Nfts::disjoint_union(&tu.tree, &tv.tree);
    let roots = (tu.root.0, tv.root.0 + tu.tree.num_states());
    let dom = Domain::new(&union);
    for pairs in [false, true] {
        if let Some(w) = search(&dom, roots, alpha, depth, alg, &consts, pairs, &mut budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    dom: &Domain,
    (ru, rv): (usize, usize),
    alpha: &Degree,
    depth: usize,
    alg: Algebra,
    consts: &[Degree],
    pairs: bool,
    budget: &mut Budget,
) -> Result<Option<Witness>, BudgetExceeded> {
    let separates = |vals: &[Degree]| alg.biresid(&vals[ru], &vals[rv]) < *alpha;
    let witness = |c: &Class<StateFormula>| Witness {
        formula: c.0.clone(),
        left: c.1[ru].clone(),
        right: c.1[rv].clone(),
    };

    let mut state_classes: Vec<Class<StateFormula>> = Vec::new();
    let mut state_seen = HashSet::new();
    let mut dist_classes: Vec<Class<DistFormula>> = Vec::new();
    let mut dist_seen = HashSet::new();

    let mut atoms: Vec<Class<StateFormula>> = vec![(StateFormula::Top, vec![Degree::one(); dom.num_states])];
    for d in 0..=depth {
        let fresh: Vec<_> = atoms.iter().flat_map(|a| state_wrapper_values(a, consts, alg)).collect();
        let found = close_under_and(
            &mut state_classes,
            &mut state_seen,
            fresh,
            StateFormula::and,
            |c| separates(&c.1),
            pairs,
            budget,
        )?;
        let new_states = match found {
            Ok(classes) => classes,
            Err(c) => return Ok(Some(witness(&c))),
        };
        if d == depth {
            break;
        }
        let fresh_dists: Vec<_> = new_states
            .iter()
            .flat_map(|(f, vals)| dist_wrapper_values((DistFormula::lift(f.clone()), dom.lift(vals)), consts, alg))
            .collect();
        let new_dists = close_under_and(
            &mut dist_classes,
            &mut dist_seen,
            fresh_dists,
            DistFormula::and,
            |_| false,
            pairs,
            budget,
        )?
        .unwrap_or_else(|c| vec![c]);
        atoms = dom
            .labels
            .iter()
            .zip(&dom.label_names)
            .flat_map(|(a, name)| {
                new_dists
                    .iter()
                    .map(|(psi, dvals)| (StateFormula::diamond(name, psi.clone()), dom.diamond(*a, dvals)))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(None)
}

/// No formula up to `depth` separates `u` and `v` below `alpha`.
pub fn logical_check(m: &Nfts, u: StateId, v: StateId, k: usize, alpha: &Degree, depth: usize, alg: Algebra) -> bool {
    distinguish(m, u, v, k, alpha, depth, alg).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::logic::{eval_state, parse_state_formula};
    use crate::model::NftsBuilder;

    fn d(s: &str) -> Degree {
        s.parse().unwrap()
    }

    fn one_label_system() -> Nfts {
        let mut b = NftsBuilder::new();
        b.add_state("x").unwrap();
        b.add_label("a").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn depth_zero() {
        let m = one_label_system();
        assert_eq!(enumerate_formulas(&m, 0, &[]), vec![StateFormula::Top]);
        let fs = enumerate_formulas(&m, 0, &[d("0.5"), Degree::one()]);
        let shown: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["T", "(T -> 0.5)"]);
    }

    #[test]
    fn size_matches_the_grammar_count() {
        // One label, one constant c = 1/2:
        //   S(0) = {T, T->c}                                   = 2
        //   D(0) = 3 wrappers x 2 + C(6, 2) conjunctions       = 21
        //   atoms(1) = T + 21 diamonds, wrappers = 2 + 21 * 4  = 86
        //   S(1) = 86 + C(85, 2)                               = 3656
        let m = one_label_system();
        let fs = enumerate_formulas(&m, 1, &[d("0.5")]);
        assert_eq!(fs.len(), 3656);
        let unique: HashSet<_> = fs.iter().collect();
        assert_eq!(unique.len(), fs.len());
        assert!(fs.iter().all(|f| f.modal_depth() <= 1));
    }

    #[test]
    fn enumeration_contains_basic_diamond() {
        let m2 = examples::m2();
        let fs = enumerate_formulas(&m2, 1, &[]);
        assert!(fs.contains(&parse_state_formula("<t1> lift(T)").unwrap()));
    }

    #[test]
    fn closure_of_second_example() {
        let m2 = examples::m2();
        let c = degree_closure(&m2, Algebra::Goedel);
        let shown: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["0", "0.2", "0.3", "0.4", "0.6", "0.7"]);
    }

    #[test]
    fn budget_is_enforced() {
        let m2 = examples::m2();
        let (u, v) = (m2.state("u").unwrap(), m2.state("v").unwrap());
        let consts = degree_closure(&m2, Algebra::Product);
        let out = distinguish_bounded(&m2, u, v, 2, &d("0.9"), 2, Algebra::Product, &consts, 10_000);
        assert_eq!(out, Err(BudgetExceeded(10_000)));
    }

    #[test]
    fn identical_states_are_never_separated() {
        let m2 = examples::m2();
        let u = m2.state("u").unwrap();
        assert!(distinguish(&m2, u, u, 2, &Degree::one(), 2, Algebra::Goedel).is_none());
    }

    #[test]
    fn second_example_separation() {
        let m2 = examples::m2();
        let (u, v) = (m2.state("u").unwrap(), m2.state("v").unwrap());
        let w = distinguish(&m2, u, v, 3, &d("0.4"), 3, Algebra::Goedel).expect("a witness exists");
        assert!(Algebra::Goedel.biresid(&w.left, &w.right) < d("0.4"));
        let tu = unfold(&m2, u, 3);
        let tv = unfold(&m2, v, 3);
        assert_eq!(eval_state(&tu.tree, &w.formula, tu.root, Algebra::Goedel).unwrap(), w.left);
        assert_eq!(eval_state(&tv.tree, &w.formula, tv.root, Algebra::Goedel).unwrap(), w.right);
        assert!(logical_check(&m2, u, v, 3, &d("0.3"), 3, Algebra::Goedel));
    }
}
