//! Judgment aggregation over propositional agendas.
//!
//! Quota rules, the premise-based and distance-based procedures, exhaustive
//! axiom checks, manipulation search, and agenda safety verdicts backed by
//! brute-force oracles. Everything is exact and deterministic; search spaces
//! are bounded by a [`Budget`] and exceeding it is an error.

pub mod agenda;
pub mod axioms;
pub mod error;
pub mod formats;
pub mod logic;
pub mod rules;
pub mod safety;
pub mod strategy;

pub use agenda::{Agenda, AgendaItem, JudgmentSet, Profile, Verdict};
pub use error::{Error, ParseError, Result};
pub use logic::{parse_formula, Assignment, Formula};
pub use rules::Rule;

/// Limits on exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Profiles visited by one exhaustive scan, `|J(Φ)|^n`.
    pub max_profiles: u128,
    /// Largest `|Φ⁺|` for subset scans (mi-subsets, property checks).
    pub max_subset_agenda: usize,
    /// Variables of a quantified formula evaluated by enumeration.
    pub max_qbf_vars: usize,
    /// Largest `k` accepted for the k-median property.
    pub max_k: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_profiles: 1_000_000, max_subset_agenda: 12, max_qbf_vars: 20, max_k: 6 }
    }
}

impl Budget {
    pub fn with_profiles(max_profiles: u128) -> Budget {
        Budget { max_profiles, ..Budget::default() }
    }

    pub(crate) fn check(&self, what: &'static str, needed: u128, limit: u128) -> Result<()> {
        if needed > limit {
            return Err(Error::BudgetExceeded { what, needed, limit });
        }
        Ok(())
    }
}
