//! A two-sorted fuzzy modal logic: state formulas are evaluated on states,
//! distribution formulas on possibility distributions.
//!
//! Text syntax:
//!
//! ```text
//! f ::= T | (f & f) | (f -> c) | (c -> f) | (f * c) | <label> d
//! d ::= (d & d) | (d -> c) | (c -> d) | lift(f)
//! ```
//!
//! where `c` is a degree literal such as `0.3` or `2/3`.

mod parse;
mod search;

use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, Degree};
use crate::model::{Distribution, Nfts, StateId};

pub use parse::{parse_dist_formula, parse_state_formula, FormulaParseError};
pub use search::{
    degree_closure, distinguish, distinguish_bounded, distinguish_with, enumerate_formulas, logical_check, BudgetExceeded,
    Witness,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateFormula {
    Top,
    And(Box<StateFormula>, Box<StateFormula>),
    ImpliesConst(Box<StateFormula>, Degree),
    ConstImplies(Degree, Box<StateFormula>),
    TensorConst(Box<StateFormula>, Degree),
    Diamond(String, Box<DistFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistFormula {
    And(Box<DistFormula>, Box<DistFormula>),
    ImpliesConst(Box<DistFormula>, Degree),
    ConstImplies(Degree, Box<DistFormula>),
    Lift(Box<StateFormula>),
}

impl StateFormula {
    pub fn and(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: StateFormula, c: Degree) -> Self {
        StateFormula::ImpliesConst(Box::new(a), c)
    }

    pub fn const_implies(c: Degree, a: StateFormula) -> Self {
        StateFormula::ConstImplies(c, Box::new(a))
    }

    pub fn tensor(a: StateFormula, c: Degree) -> Self {
        StateFormula::TensorConst(Box::new(a), c)
    }

    pub fn diamond(label: &str, d: DistFormula) -> Self {
        StateFormula::Diamond(label.to_string(), Box::new(d))
    }

    /// Nesting depth of diamonds.
    pub fn modal_depth(&self) -> usize {
        match self {
            StateFormula::Top => 0,
            StateFormula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            StateFormula::ImpliesConst(a, _) | StateFormula::ConstImplies(_, a) | StateFormula::TensorConst(a, _) => {
                a.modal_depth()
            }
            StateFormula::Diamond(_, d) => 1 + d.modal_depth(),
        }
    }
}

impl DistFormula {
    pub fn and(a: DistFormula, b: DistFormula) -> Self {
        DistFormula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: DistFormula, c: Degree) -> Self {
        DistFormula::ImpliesConst(Box::new(a), c)
    }

    pub fn const_implies(c: Degree, a: DistFormula) -> Self {
        DistFormula::ConstImplies(c, Box::new(a))
    }

    pub fn lift(f: StateFormula) -> Self {
        DistFormula::Lift(Box::new(f))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            DistFormula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            DistFormula::ImpliesConst(a, _) | DistFormula::ConstImplies(_, a) => a.modal_depth(),
            DistFormula::Lift(f) => f.modal_depth(),
        }
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::Top => write!(f, "T"),
            StateFormula::And(a, b) => write!(f, "({a} & {b})"),
            StateFormula::ImpliesConst(a, c) => write!(f, "({a} -> {c})"),
            StateFormula::ConstImplies(c, a) => write!(f, "({c} -> {a})"),
            StateFormula::TensorConst(a, c) => write!(f, "({a} * {c})"),
            StateFormula::Diamond(l, d) => write!(f, "<{l}> {d}"),
        }
    }
}

impl fmt::Display for DistFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistFormula::And(a, b) => write!(f, "({a} & {b})"),
            DistFormula::ImpliesConst(a, c) => write!(f, "({a} -> {c})"),
            DistFormula::ConstImplies(c, a) => write!(f, "({c} -> {a})"),
            DistFormula::Lift(a) => write!(f, "lift({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

/// `⟦phi⟧(u)`.
pub fn eval_state(m: &Nfts, phi: &StateFormula, u: StateId, alg: Algebra) -> Result<Degree, EvalError> {
    Ok(match phi {
        StateFormula::Top => Degree::one(),
        StateFormula::And(a, b) => eval_state(m, a, u, alg)?.meet(&eval_state(m, b, u, alg)?),
        StateFormula::ImpliesConst(a, c) => alg.resid(&eval_state(m, a, u, alg)?, c),
        StateFormula::ConstImplies(c, a) => alg.resid(c, &eval_state(m, a, u, alg)?),
        StateFormula::TensorConst(a, c) => alg.conj(&eval_state(m, a, u, alg)?, c),
        StateFormula::Diamond(label, d) => {
            let a = m.label(label).map_err(|_| EvalError::UnknownLabel(label.clone()))?;
            let mut best = Degree::zero();
            for p in m.transitions(u, a) {
                best = best.join(&eval_dist(m, d, p, alg)?);
            }
            best
        }
    })
}

/// `⟦psi⟧(p)`. Lifting a state formula joins `p(w) ∧ ⟦phi⟧(w)` with the
/// lattice meet, not the t-norm.
pub fn eval_dist(m: &Nfts, psi: &DistFormula, p: &Distribution, alg: Algebra) -> Result<Degree, EvalError> {
    Ok(match psi {
        DistFormula::And(a, b) => eval_dist(m, a, p, alg)?.meet(&eval_dist(m, b, p, alg)?),
        DistFormula::ImpliesConst(a, c) => alg.resid(&eval_dist(m, a, p, alg)?, c),
        DistFormula::ConstImplies(c, a) => alg.resid(c, &eval_dist(m, a, p, alg)?),
        DistFormula::Lift(phi) => {
            let mut best = Degree::zero();
            for (w, pw) in p.entries() {
                best = best.join(&pw.meet(&eval_state(m, phi, *w, alg)?));
            }
            best
        }
    })
}
