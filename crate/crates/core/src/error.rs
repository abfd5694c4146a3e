use std::fmt;

use crate::logic::Formula;

/// Syntax error in formula text. `offset` is a 0-based byte offset into the
/// parsed input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at column {}", self.message, self.offset + 1)
    }
}

impl std::error::Error for ParseError {}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error: {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
    #[error("variable `{0}` is not covered by the assignment")]
    UnboundVariable(String),

    #[error("agenda must contain at least one formula")]
    EmptyAgenda,
    #[error("agenda member `{0}` has a negation at its root")]
    NegatedMember(Formula),
    #[error("agenda member `{0}` occurs twice")]
    DuplicateMember(Formula),
    #[error("formula `{0}` is not in the agenda")]
    NotInAgenda(Formula),
    #[error("invalid premise partition: {0}")]
    PremisePartition(String),
    #[error("agenda is not closed under propositional variables: `{0}` is missing")]
    NotVariableClosed(String),

    #[error("judgment set has {found} verdicts, agenda has {expected} positive formulas")]
    WidthMismatch { expected: usize, found: usize },
    #[error("profile needs an odd number of at least 3 agents, got {0}")]
    BadAgentCount(usize),
    #[error("agent {agent} holds an irrational judgment set ({reason})")]
    IrrationalAgent { agent: usize, reason: String, core: Vec<Formula> },
    #[error("formula set is inconsistent")]
    Inconsistent,
    #[error("Hamming distance is undefined for incomplete or self-contradictory judgment sets")]
    DistanceUndefined,
    #[error("agent index {agent} out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("invalid quota: {0}")]
    InvalidQuota(String),
    #[error("invalid characteristic function: {0}")]
    InvalidCharacteristic(String),
    #[error("rule built for {expected} agents applied to {found}")]
    AgentCountMismatch { expected: usize, found: usize },
    #[error("rule is irresolute; pick a tie-break to obtain a single outcome")]
    Irresolute,
    #[error("no characteristic function for the given profile")]
    MissingProfileEntry,
    #[error("rule is not independent")]
    NotIndependent(Box<crate::axioms::Violation>),

    #[error("invalid candidates: {0}")]
    Candidates(String),
    #[error("fresh variable `{0}` collides with an existing name")]
    FreshVariableCollision(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("invalid quantified formula: {0}")]
    Quantifier(String),
    #[error("agenda satisfies {0}; there is nothing to witness")]
    PropertyHolds(String),
    #[error("no witness construction applies: {0}")]
    NoWitness(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded { what: &'static str, needed: u128, limit: u128 },
}

impl Error {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "syntax",
            Error::AtLine { source, .. } => source.code(),
            Error::UnboundVariable(_) => "unbound_variable",
            Error::EmptyAgenda
            | Error::NegatedMember(_)
            | Error::DuplicateMember(_)
            | Error::PremisePartition(_) => "invalid_agenda",
            Error::NotInAgenda(_) => "not_in_agenda",
            Error::NotVariableClosed(_) => "not_variable_closed",
            Error::WidthMismatch { .. } => "width_mismatch",
            Error::BadAgentCount(_) => "agent_count",
            Error::IrrationalAgent { .. } => "irrational_agent",
            Error::Inconsistent => "inconsistent",
            Error::DistanceUndefined => "distance_undefined",
            Error::AgentOutOfRange { .. } => "agent_out_of_range",
            Error::InvalidQuota(_) => "invalid_quota",
            Error::InvalidCharacteristic(_) => "invalid_characteristic",
            Error::AgentCountMismatch { .. } => "agent_count",
            Error::Irresolute => "irresolute",
            Error::MissingProfileEntry => "missing_profile_entry",
            Error::NotIndependent(_) => "not_independent",
            Error::Candidates(_) => "invalid_candidates",
            Error::FreshVariableCollision(_) => "fresh_variable_collision",
            Error::SideCondition(_) => "side_condition",
            Error::Quantifier(_) => "invalid_qbf",
            Error::PropertyHolds(_) => "property_holds",
            Error::NoWitness(_) => "no_witness",
            Error::BudgetExceeded { .. } => "budget_exceeded",
        }
    }

    pub fn at_line(self, line: usize) -> Error {
        Error::AtLine { line, source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
