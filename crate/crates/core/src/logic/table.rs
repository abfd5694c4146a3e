use super::{Assignment, Formula};
use crate::error::{Error, Result};

pub const MAX_TABLE_VARS: usize = 20;

/// Set of assignments over a fixed variable list, one bit per assignment.
/// Bit `a` stands for the assignment giving variable `i` the value of bit `i`
/// of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    bits: Vec<u64>,
    len: usize,
}

impl ModelSet {
    pub fn full(len: usize) -> ModelSet {
        let mut s = ModelSet { bits: vec![u64::MAX; len.div_ceil(64)], len };
        s.trim();
        s
    }

    pub fn empty(len: usize) -> ModelSet {
        ModelSet { bits: vec![0; len.div_ceil(64)], len }
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.bits[a / 64] >> (a % 64) & 1 == 1
    }

    pub fn first(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn and(&self, other: &ModelSet) -> ModelSet {
        ModelSet {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn and_assign(&mut self, other: &ModelSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &ModelSet, op: impl Fn(u64, u64) -> u64) -> ModelSet {
        let mut s = ModelSet {
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect(),
            len: self.len,
        };
        s.trim();
        s
    }

    pub fn not(&self) -> ModelSet {
        let mut s = ModelSet { bits: self.bits.iter().map(|w| !w).collect(), len: self.len };
        s.trim();
        s
    }
}

/// Evaluates formulas over all assignments of a small variable list at once.
#[derive(Debug, Clone)]
pub struct TruthTable {
    vars: Vec<String>,
}

impl TruthTable {
    /// `vars` must be sorted and duplicate-free.
    pub fn new(vars: Vec<String>) -> Result<TruthTable> {
        if vars.len() > MAX_TABLE_VARS {
            return Err(Error::BudgetExceeded {
                what: "truth table variables",
                needed: vars.len() as u128,
                limit: MAX_TABLE_VARS as u128,
            });
        }
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Ok(TruthTable { vars })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        1usize << self.vars.len()
    }

    fn var_set(&self, i: usize) -> ModelSet {
        let rows = self.rows();
        let mut s = ModelSet::empty(rows);
        if i < 6 {
            let mut pattern = 0u64;
            for b in 0..64 {
                if b >> i & 1 == 1 {
                    pattern |= 1 << b;
                }
            }
            for w in s.bits.iter_mut() {
                *w = pattern;
            }
        } else {
            for (wi, w) in s.bits.iter_mut().enumerate() {
                if wi >> (i - 6) & 1 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        s.trim();
        s
    }

    pub fn models(&self, f: &Formula) -> Result<ModelSet> {
        let rows = self.rows();
        Ok(match f {
            Formula::Var(n) => {
                let i = self
                    .vars
                    .binary_search(n)
                    .map_err(|_| Error::UnboundVariable(n.clone()))?;
                self.var_set(i)
            }
            Formula::True => ModelSet::full(rows),
            Formula::False => ModelSet::empty(rows),
            Formula::Not(a) => self.models(a)?.not(),
            Formula::And(a, b) => self.models(a)?.zip_with(&self.models(b)?, |x, y| x & y),
            Formula::Or(a, b) => self.models(a)?.zip_with(&self.models(b)?, |x, y| x | y),
            Formula::Implies(a, b) => self.models(a)?.zip_with(&self.models(b)?, |x, y| !x | y),
            Formula::Iff(a, b) => self.models(a)?.zip_with(&self.models(b)?, |x, y| !(x ^ y)),
        })
    }

    pub fn assignment(&self, row: usize) -> Assignment {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), row >> i & 1 == 1))
            .collect()
    }
}
