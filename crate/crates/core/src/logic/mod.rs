//! Propositional formulas, evaluation and a complete consistency oracle.

mod parse;
mod solver;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub use parse::parse_formula;
pub use solver::Solver;
pub use table::{ModelSet, TruthTable, MAX_TABLE_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction of all items; `T` for an empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction of all items; `F` for an empty list.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn is_negated(&self) -> bool {
        matches!(self, Formula::Not(_))
    }

    /// `~a`: strips one negation if present, otherwise adds one.
    pub fn complement(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Var(_)),
            _ => false,
        }
    }

    pub fn evaluate(&self, v: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::Var(name) => v
                .get(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
            Formula::True => true,
            Formula::False => false,
            Formula::Not(a) => !a.evaluate(v)?,
            Formula::And(a, b) => a.evaluate(v)? && b.evaluate(v)?,
            Formula::Or(a, b) => a.evaluate(v)? || b.evaluate(v)?,
            Formula::Implies(a, b) => !a.evaluate(v)? || b.evaluate(v)?,
            Formula::Iff(a, b) => a.evaluate(v)? == b.evaluate(v)?,
        })
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(name) => {
                if !out.contains(name) {
                    out.insert(name.clone());
                }
            }
            Formula::True | Formula::False => {}
            Formula::Not(a) => a.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Renames every variable through `f`.
    pub fn map_vars(&self, f: &impl Fn(&str) -> String) -> Formula {
        let bin = |a: &Formula, b: &Formula| (Box::new(a.map_vars(f)), Box::new(b.map_vars(f)));
        match self {
            Formula::Var(name) => Formula::Var(f(name)),
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Not(a) => Formula::Not(Box::new(a.map_vars(f))),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b);
                Formula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Iff(a, b)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, x: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        let p = self.precedence();
        match self {
            Formula::Var(name) => f.write_str(name),
            Formula::True => f.write_str("T"),
            Formula::False => f.write_str("F"),
            Formula::Not(a) => {
                f.write_str("~")?;
                wrap(f, a, a.precedence() < p)
            }
            Formula::Implies(a, b) => {
                wrap(f, a, a.precedence() <= p)?;
                f.write_str(" -> ")?;
                wrap(f, b, b.precedence() < p)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                let op = match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                wrap(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                wrap(f, b, b.precedence() <= p)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Total map from variable names to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<String, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: bool) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

pub fn variables_of<'a>(set: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in set {
        f.collect_vars(&mut out);
    }
    out
}

/// A satisfying assignment over exactly the variables of `set`, if one exists.
pub fn find_model(set: &[Formula]) -> Option<Assignment> {
    Solver::new(set).solve()
}

pub fn is_consistent(set: &[Formula]) -> bool {
    find_model(set).is_some()
}

pub fn entails(set: &[Formula], phi: &Formula) -> bool {
    let mut all = set.to_vec();
    all.push(Formula::not(phi.clone()));
    !is_consistent(&all)
}

pub fn are_equivalent(a: &Formula, b: &Formula) -> bool {
    !is_consistent(&[Formula::not(Formula::iff(a.clone(), b.clone()))])
}

pub fn is_tautology(f: &Formula) -> bool {
    !is_consistent(&[Formula::not(f.clone())])
}

/// `[phi, phi & T, phi & T & T, ...]`, `k` entries.
pub fn syntactic_variants(phi: &Formula, k: usize) -> Vec<Formula> {
    let mut out = Vec::with_capacity(k);
    let mut cur = phi.clone();
    for _ in 0..k {
        out.push(cur.clone());
        cur = Formula::and(cur, Formula::True);
    }
    out
}

/// Indices of a minimal inconsistent subset of `set` (deletion-based), or
/// `None` when `set` is consistent.
pub fn minimal_core(set: &[Formula]) -> Option<Vec<usize>> {
    if is_consistent(set) {
        return None;
    }
    let mut keep: Vec<usize> = (0..set.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<Formula> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &k)| set[k].clone())
            .collect();
        if is_consistent(&trial) {
            i += 1;
        } else {
            keep.remove(i);
        }
    }
    Some(keep)
}
