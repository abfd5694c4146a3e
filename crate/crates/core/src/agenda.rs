//! Agendas, judgment sets, profiles and distances.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::logic::{self, Formula, ModelSet, TruthTable};
use crate::Budget;

/// Agendas with at most this many variables get a cached truth table.
pub const TABLE_VARS: usize = 16;

/// Position of a formula of Φ: the `index`-th member of Φ⁺, or its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgendaItem {
    pub index: usize,
    pub positive: bool,
}

impl AgendaItem {
    pub fn pos(index: usize) -> Self {
        AgendaItem { index, positive: true }
    }

    pub fn neg(index: usize) -> Self {
        AgendaItem { index, positive: false }
    }

    pub fn complement(self) -> Self {
        AgendaItem { index: self.index, positive: !self.positive }
    }
}

#[derive(Debug, Clone)]
struct Tables {
    table: TruthTable,
    pos: Vec<ModelSet>,
    neg: Vec<ModelSet>,
}

/// Φ⁺ in input order; negations are derived. Optionally each member is tagged
/// as premise or conclusion.
#[derive(Clone)]
pub struct Agenda {
    positives: Vec<Formula>,
    premises: Option<Vec<bool>>,
    vars: Vec<String>,
    tables: OnceLock<Option<Tables>>,
    judgment_sets: OnceLock<Vec<JudgmentSet>>,
}

impl PartialEq for Agenda {
    fn eq(&self, other: &Self) -> bool {
        self.positives == other.positives && self.premises == other.premises
    }
}

impl Eq for Agenda {}

impl fmt::Debug for Agenda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Agenda")
            .field("positives", &self.positives.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .field("premises", &self.premises)
            .finish()
    }
}

impl Agenda {
    pub fn new(positives: Vec<Formula>) -> Result<Agenda> {
        if positives.is_empty() {
            return Err(Error::EmptyAgenda);
        }
        let mut seen = HashSet::new();
        for f in &positives {
            if f.is_negated() {
                return Err(Error::NegatedMember(f.clone()));
            }
            if !seen.insert(f) {
                return Err(Error::DuplicateMember(f.clone()));
            }
        }
        let vars = logic::variables_of(&positives).into_iter().collect();
        Ok(Agenda {
            positives,
            premises: None,
            vars,
            tables: OnceLock::new(),
            judgment_sets: OnceLock::new(),
        })
    }

    /// `premises[i]` tags the i-th positive formula (and its complement) as a
    /// premise.
    pub fn with_premises(positives: Vec<Formula>, premises: Vec<bool>) -> Result<Agenda> {
        if premises.len() != positives.len() {
            return Err(Error::PremisePartition(format!(
                "{} tags for {} formulas",
                premises.len(),
                positives.len()
            )));
        }
        let mut a = Agenda::new(positives)?;
        a.premises = Some(premises);
        Ok(a)
    }

    pub fn parse(lines: &[&str]) -> Result<Agenda> {
        let fs = lines
            .iter()
            .map(|l| logic::parse_formula(l).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        Agenda::new(fs)
    }

    pub fn positives(&self) -> &[Formula] {
        &self.positives
    }

    pub fn premises(&self) -> Option<&[bool]> {
        self.premises.as_deref()
    }

    /// `|Φ⁺|`.
    pub fn len(&self) -> usize {
        self.positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn formula(&self, item: AgendaItem) -> Formula {
        let f = &self.positives[item.index];
        if item.positive {
            f.clone()
        } else {
            f.complement()
        }
    }

    /// All of Φ, ordered φ₁, ∼φ₁, φ₂, ∼φ₂, ...
    pub fn items(&self) -> impl Iterator<Item = AgendaItem> + '_ {
        (0..self.len()).flat_map(|i| [AgendaItem::pos(i), AgendaItem::neg(i)])
    }

    pub fn full(&self) -> Vec<Formula> {
        self.items().map(|it| self.formula(it)).collect()
    }

    pub fn item_of(&self, f: &Formula) -> Result<AgendaItem> {
        if let Some(i) = self.positives.iter().position(|x| x == f) {
            return Ok(AgendaItem::pos(i));
        }
        if let Formula::Not(inner) = f {
            if let Some(i) = self.positives.iter().position(|x| x == &**inner) {
                return Ok(AgendaItem::neg(i));
            }
        }
        Err(Error::NotInAgenda(f.clone()))
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                if self.vars.len() > TABLE_VARS {
                    return None;
                }
                let table = TruthTable::new(self.vars.clone()).ok()?;
                let pos: Vec<ModelSet> =
                    self.positives.iter().map(|f| table.models(f).expect("agenda variables")).collect();
                let neg = pos.iter().map(|m| m.not()).collect();
                Some(Tables { table, pos, neg })
            })
            .as_ref()
    }

    /// Models of one item over [`Agenda::variables`], when the agenda is small
    /// enough for a cached table.
    pub fn item_models(&self, item: AgendaItem) -> Option<&ModelSet> {
        self.tables().map(|t| if item.positive { &t.pos[item.index] } else { &t.neg[item.index] })
    }

    pub fn truth_table(&self) -> Option<&TruthTable> {
        self.tables().map(|t| &t.table)
    }

    /// Whether the given items are jointly satisfiable.
    pub fn items_consistent(&self, items: &[AgendaItem]) -> bool {
        if let Some(t) = self.tables() {
            let mut m = ModelSet::full(t.table.rows());
            for it in items {
                m.and_assign(if it.positive { &t.pos[it.index] } else { &t.neg[it.index] });
                if m.is_empty() {
                    return false;
                }
            }
            return true;
        }
        let fs: Vec<Formula> = items.iter().map(|&it| self.formula(it)).collect();
        logic::is_consistent(&fs)
    }

    pub fn is_contradiction(&self, item: AgendaItem) -> bool {
        !self.items_consistent(&[item])
    }

    /// Whether every propositional variable occurring in the agenda is itself
    /// a member of Φ⁺.
    pub fn variable_closed(&self) -> Result<()> {
        for v in &self.vars {
            if !self.positives.iter().any(|f| matches!(f, Formula::Var(n) if n == v)) {
                return Err(Error::NotVariableClosed(v.clone()));
            }
        }
        Ok(())
    }

    /// J(Φ): all complete consistent judgment sets, accept-first
    /// lexicographic over Φ⁺. Cached.
    pub fn judgment_sets(&self) -> &[JudgmentSet] {
        self.judgment_sets.get_or_init(|| {
            let mut out = Vec::new();
            self.extend(&vec![None; self.len()], usize::MAX, &mut out);
            out
        })
    }

    /// Depth-first scan of complete consistent sets that agree with `fixed`,
    /// in canonical order, stopping after `limit` results.
    fn extend(&self, fixed: &[Option<bool>], limit: usize, out: &mut Vec<JudgmentSet>) {
        let mut bits = vec![false; self.len()];
        if let Some(t) = self.tables() {
            let m = ModelSet::full(t.table.rows());
            self.extend_table(t, fixed, 0, &m, &mut bits, limit, out);
        } else {
            let mut prefix = Vec::new();
            self.extend_solver(fixed, 0, &mut prefix, &mut bits, limit, out);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_table(
        &self,
        t: &Tables,
        fixed: &[Option<bool>],
        i: usize,
        models: &ModelSet,
        bits: &mut Vec<bool>,
        limit: usize,
        out: &mut Vec<JudgmentSet>,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == self.len() {
            out.push(JudgmentSet::from_bits(bits));
            return;
        }
        for value in [true, false] {
            if fixed[i].is_some_and(|v| v != value) {
                continue;
            }
            let next = models.and(if value { &t.pos[i] } else { &t.neg[i] });
            if !next.is_empty() {
                bits[i] = value;
                self.extend_table(t, fixed, i + 1, &next, bits, limit, out);
            }
        }
    }

    fn extend_solver(
        &self,
        fixed: &[Option<bool>],
        i: usize,
        prefix: &mut Vec<Formula>,
        bits: &mut Vec<bool>,
        limit: usize,
        out: &mut Vec<JudgmentSet>,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == self.len() {
            out.push(JudgmentSet::from_bits(bits));
            return;
        }
        for value in [true, false] {
            if fixed[i].is_some_and(|v| v != value) {
                continue;
            }
            prefix.push(self.formula(AgendaItem { index: i, positive: value }));
            // the remaining fixed items must stay satisfiable as well
            let mut probe = prefix.clone();
            probe.extend(
                fixed[i + 1..]
                    .iter()
                    .enumerate()
                    .filter_map(|(j, v)| v.map(|v| self.formula(AgendaItem { index: i + 1 + j, positive: v }))),
            );
            if logic::is_consistent(&probe) {
                bits[i] = value;
                self.extend_solver(fixed, i + 1, prefix, bits, limit, out);
            }
            prefix.pop();
        }
    }

    /// First member of J(Φ) in canonical order containing every formula of
    /// `partial`.
    pub fn complete_extension(&self, partial: &JudgmentSet) -> Result<JudgmentSet> {
        self.check_width(partial)?;
        if !self.is_consistent(partial) {
            return Err(Error::Inconsistent);
        }
        let fixed: Vec<Option<bool>> = (0..self.len())
            .map(|i| match partial.verdict(i) {
                Verdict::Accept => Some(true),
                Verdict::Reject => Some(false),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        self.extend(&fixed, 1, &mut out);
        out.pop().ok_or(Error::Inconsistent)
    }

    pub fn check_width(&self, j: &JudgmentSet) -> Result<()> {
        if j.len() != self.len() {
            return Err(Error::WidthMismatch { expected: self.len(), found: j.len() });
        }
        Ok(())
    }

    /// Whether the formulas contained in `j` are jointly satisfiable.
    pub fn is_consistent(&self, j: &JudgmentSet) -> bool {
        if (0..j.len()).any(|i| j.verdict(i) == Verdict::Both) {
            return false;
        }
        self.items_consistent(&j.items().collect::<Vec<_>>())
    }

    pub fn validate(&self, j: &JudgmentSet) -> Result<Validity> {
        self.check_width(j)?;
        Ok(Validity {
            complete: j.is_complete(),
            complement_free: j.is_complement_free(),
            consistent: self.is_consistent(j),
        })
    }

    /// Formulas of `j`, in Φ order.
    pub fn formulas_of(&self, j: &JudgmentSet) -> Vec<Formula> {
        j.items().map(|it| self.formula(it)).collect()
    }

    /// Builds a judgment set from member formulas of Φ.
    pub fn judgment_set(&self, formulas: &[Formula]) -> Result<JudgmentSet> {
        let mut j = JudgmentSet::empty(self.len());
        for f in formulas {
            j.insert(self.item_of(f)?);
        }
        Ok(j)
    }

    pub fn parse_judgment_set(&self, formulas: &[&str]) -> Result<JudgmentSet> {
        let fs = formulas
            .iter()
            .map(|s| logic::parse_formula(s).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        self.judgment_set(&fs)
    }

    /// Minimal inconsistent subset of the formulas in `j`.
    pub fn core_of(&self, j: &JudgmentSet) -> Vec<Formula> {
        let fs = self.formulas_of(j);
        match logic::minimal_core(&fs) {
            Some(idx) => idx.into_iter().map(|i| fs[i].clone()).collect(),
            None => Vec::new(),
        }
    }

    /// Renders a judgment set as `{p, q, ~(p & q)}`.
    pub fn show(&self, j: &JudgmentSet) -> String {
        let parts: Vec<String> = self.formulas_of(j).iter().map(|f| f.to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validity {
    pub complete: bool,
    pub complement_free: bool,
    pub consistent: bool,
}

/// Which of φ and ∼φ a judgment set contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    Neither,
    Both,
}

impl Verdict {
    fn rank(self) -> u8 {
        match self {
            Verdict::Accept => 0,
            Verdict::Reject => 1,
            Verdict::Both => 2,
            Verdict::Neither => 3,
        }
    }

    pub fn from_flags(pos: bool, neg: bool) -> Verdict {
        match (pos, neg) {
            (true, false) => Verdict::Accept,
            (false, true) => Verdict::Reject,
            (false, false) => Verdict::Neither,
            (true, true) => Verdict::Both,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Verdict::Accept => '1',
            Verdict::Reject => '0',
            Verdict::Neither => '-',
            Verdict::Both => '*',
        }
    }
}

/// Subset of Φ stored as two bit vectors over Φ⁺: `pos` marks φ, `neg` marks ∼φ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JudgmentSet {
    len: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl JudgmentSet {
    pub fn empty(len: usize) -> Self {
        let w = len.div_ceil(64);
        JudgmentSet { len, pos: vec![0; w], neg: vec![0; w] }
    }

    /// Complete complement-free set; `bits[i]` accepts φᵢ, otherwise ∼φᵢ.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut j = JudgmentSet::empty(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            j.set(i, if b { Verdict::Accept } else { Verdict::Reject });
        }
        j
    }

    pub fn from_verdicts(vs: &[Verdict]) -> Self {
        let mut j = JudgmentSet::empty(vs.len());
        for (i, &v) in vs.iter().enumerate() {
            j.set(i, v);
        }
        j
    }

    /// Parses a row of `1`, `0`, `-` (neither) and `*` (both).
    pub fn from_symbols(row: &str) -> Option<Self> {
        let vs = row
            .chars()
            .map(|c| match c {
                '1' => Some(Verdict::Accept),
                '0' => Some(Verdict::Reject),
                '-' => Some(Verdict::Neither),
                '*' => Some(Verdict::Both),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(JudgmentSet::from_verdicts(&vs))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.pos.iter().chain(&self.neg).all(|&w| w == 0)
    }

    pub fn verdict(&self, i: usize) -> Verdict {
        let (w, b) = (i / 64, i % 64);
        Verdict::from_flags(self.pos[w] >> b & 1 == 1, self.neg[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, i: usize, v: Verdict) {
        let (w, b) = (i / 64, i % 64);
        let (p, n) = match v {
            Verdict::Accept => (true, false),
            Verdict::Reject => (false, true),
            Verdict::Neither => (false, false),
            Verdict::Both => (true, true),
        };
        self.pos[w] = (self.pos[w] & !(1 << b)) | ((p as u64) << b);
        self.neg[w] = (self.neg[w] & !(1 << b)) | ((n as u64) << b);
    }

    pub fn contains(&self, item: AgendaItem) -> bool {
        let (w, b) = (item.index / 64, item.index % 64);
        let words = if item.positive { &self.pos } else { &self.neg };
        words[w] >> b & 1 == 1
    }

    pub fn insert(&mut self, item: AgendaItem) {
        let (w, b) = (item.index / 64, item.index % 64);
        let words = if item.positive { &mut self.pos } else { &mut self.neg };
        words[w] |= 1 << b;
    }

    pub fn remove(&mut self, item: AgendaItem) {
        let (w, b) = (item.index / 64, item.index % 64);
        let words = if item.positive { &mut self.pos } else { &mut self.neg };
        words[w] &= !(1 << b);
    }

    /// Contained items in Φ order.
    pub fn items(&self) -> impl Iterator<Item = AgendaItem> + '_ {
        (0..self.len)
            .flat_map(|i| [AgendaItem::pos(i), AgendaItem::neg(i)])
            .filter(|&it| self.contains(it))
    }

    pub fn is_subset(&self, other: &JudgmentSet) -> bool {
        self.pos.iter().zip(&other.pos).all(|(a, b)| a & !b == 0)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| a & !b == 0)
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len).all(|i| self.verdict(i) != Verdict::Neither)
    }

    pub fn is_complement_free(&self) -> bool {
        self.pos.iter().zip(&self.neg).all(|(a, b)| a & b == 0)
    }

    /// The characteristic vector, defined for complete complement-free sets.
    pub fn bits(&self) -> Option<Vec<bool>> {
        (0..self.len)
            .map(|i| match self.verdict(i) {
                Verdict::Accept => Some(true),
                Verdict::Reject => Some(false),
                _ => None,
            })
            .collect()
    }

    /// One symbol per Φ⁺ member: `1`, `0`, `-` (neither), `*` (both).
    pub fn symbols(&self) -> String {
        (0..self.len).map(|i| self.verdict(i).symbol()).collect()
    }
}

impl Ord for JudgmentSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in 0..self.len.min(other.len) {
            let o = self.verdict(i).rank().cmp(&other.verdict(i).rank());
            if o != Ordering::Equal {
                return o;
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for JudgmentSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JudgmentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols())
    }
}

pub const MAX_AGENTS: usize = 64;

/// One rational judgment set per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    agents: Vec<JudgmentSet>,
}

impl Profile {
    /// Odd `n ≥ 3`, every member complete, complement-free and consistent.
    pub fn new(agenda: &Agenda, agents: Vec<JudgmentSet>) -> Result<Profile> {
        let n = agents.len();
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::BadAgentCount(n));
        }
        Profile::any_size(agenda, agents)
    }

    /// As [`Profile::new`] but accepting any `1 ≤ n ≤ 64`.
    pub fn any_size(agenda: &Agenda, agents: Vec<JudgmentSet>) -> Result<Profile> {
        let n = agents.len();
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::BadAgentCount(n));
        }
        for (i, j) in agents.iter().enumerate() {
            agenda.check_width(j)?;
            let reason = if !j.is_complete() {
                "incomplete"
            } else if !j.is_complement_free() {
                "not complement-free"
            } else if !agenda.is_consistent(j) {
                "inconsistent"
            } else {
                continue;
            };
            let core = if reason == "inconsistent" { agenda.core_of(j) } else { Vec::new() };
            return Err(Error::IrrationalAgent { agent: i + 1, reason: reason.into(), core });
        }
        Ok(Profile { agents })
    }

    /// Builds from rows of `0`/`1`.
    pub fn from_rows(agenda: &Agenda, rows: &[&str]) -> Result<Profile> {
        let agents = rows
            .iter()
            .map(|r| {
                JudgmentSet::from_symbols(r)
                    .filter(|j| j.is_complete() && j.is_complement_free())
                    .ok_or_else(|| Error::WidthMismatch { expected: agenda.len(), found: r.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(agenda, agents)
    }

    pub(crate) fn unchecked(agents: Vec<JudgmentSet>) -> Profile {
        Profile { agents }
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[JudgmentSet] {
        &self.agents
    }

    pub fn agent(&self, i: usize) -> &JudgmentSet {
        &self.agents[i]
    }

    /// Copy with agent `i` replaced.
    pub fn with_agent(&self, i: usize, j: JudgmentSet) -> Profile {
        let mut agents = self.agents.clone();
        agents[i] = j;
        Profile { agents }
    }

    /// Accepting coalition of an item; bit `i` is agent `i`.
    pub fn coalition(&self, item: AgendaItem) -> u64 {
        self.agents
            .iter()
            .enumerate()
            .filter(|(_, j)| j.contains(item))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn support(&self, item: AgendaItem) -> SupportCount {
        let coalition = self.coalition(item);
        SupportCount { coalition, count: coalition.count_ones() as usize }
    }

    /// `|N_φ|` for every φ ∈ Φ⁺.
    pub fn positive_counts(&self) -> Vec<usize> {
        let len = self.agents.first().map_or(0, |j| j.len());
        (0..len).map(|i| self.support(AgendaItem::pos(i)).count).collect()
    }
}

/// The agents accepting a formula, as a bit mask over agent indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportCount {
    pub coalition: u64,
    pub count: usize,
}

impl SupportCount {
    /// 1-based agent numbers.
    pub fn agents(&self) -> Vec<usize> {
        (0..64).filter(|i| self.coalition >> i & 1 == 1).map(|i| i + 1).collect()
    }
}

pub fn support(agenda: &Agenda, profile: &Profile, phi: &Formula) -> Result<SupportCount> {
    Ok(profile.support(agenda.item_of(phi)?))
}

/// Number of Φ⁺ members on which two complete complement-free sets differ.
pub fn hamming(a: &JudgmentSet, b: &JudgmentSet) -> Result<usize> {
    if a.len != b.len {
        return Err(Error::WidthMismatch { expected: a.len, found: b.len });
    }
    for j in [a, b] {
        if !j.is_complete() || !j.is_complement_free() {
            return Err(Error::DistanceUndefined);
        }
    }
    Ok(a.pos.iter().zip(&b.pos).map(|(x, y)| (x ^ y).count_ones() as usize).sum())
}

/// `Σ_{φ∈Φ⁺} |J(φ) − K(φ)|` with `J(φ)` the membership indicator of φ.
/// Equals [`hamming`] on complete complement-free sets and stays defined for
/// incomplete ones; sets containing both φ and ∼φ are still rejected.
pub fn characteristic_distance(a: &JudgmentSet, b: &JudgmentSet) -> Result<usize> {
    if a.len != b.len {
        return Err(Error::WidthMismatch { expected: a.len, found: b.len });
    }
    if !a.is_complement_free() || !b.is_complement_free() {
        return Err(Error::DistanceUndefined);
    }
    Ok(a.pos.iter().zip(&b.pos).map(|(x, y)| (x ^ y).count_ones() as usize).sum())
}

pub fn distance_sum(j: &JudgmentSet, profile: &Profile) -> Result<usize> {
    profile.agents.iter().map(|a| hamming(j, a)).sum()
}

/// All profiles over J(Φ) with `n` agents, agent 1 most significant.
pub struct ProfileIter<'a> {
    sets: &'a [JudgmentSet],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> ProfileIter<'a> {
    pub fn new(agenda: &'a Agenda, n: usize, budget: &Budget) -> Result<ProfileIter<'a>> {
        let sets = agenda.judgment_sets();
        let total = profile_count(sets.len(), n);
        budget.check("profiles", total, budget.max_profiles)?;
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::BadAgentCount(n));
        }
        Ok(ProfileIter { sets, idx: vec![0; n], done: sets.is_empty() })
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }
}

pub fn profile_count(sets: usize, n: usize) -> u128 {
    (sets as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

impl Iterator for ProfileIter<'_> {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.done {
            return None;
        }
        let p = Profile::unchecked(self.idx.iter().map(|&i| self.sets[i].clone()).collect());
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.sets.len() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn doctrinal() -> Agenda {
        Agenda::parse(&["p", "q", "p & q"]).unwrap()
    }

    #[test]
    fn build_rejects_negated_and_duplicates() {
        assert_eq!(doctrinal().full().len(), 6);
        assert!(matches!(Agenda::parse(&["~p"]), Err(Error::NegatedMember(_))));
        assert!(matches!(Agenda::parse(&["p", "p"]), Err(Error::DuplicateMember(_))));
        assert!(matches!(Agenda::parse(&[]), Err(Error::EmptyAgenda)));
        let a = Agenda::parse(&["p"]).unwrap();
        assert_eq!(a.full(), vec![Formula::var("p"), Formula::not(Formula::var("p"))]);
    }

    #[test]
    fn validate_examples() {
        let a = doctrinal();
        let v = |fs: &[&str]| a.validate(&a.parse_judgment_set(fs).unwrap()).unwrap();
        let t = |c, f, k| Validity { complete: c, complement_free: f, consistent: k };
        assert_eq!(v(&["p", "q", "p & q"]), t(true, true, true));
        assert_eq!(v(&["p", "q", "~(p & q)"]), t(true, true, false));
        assert_eq!(v(&["p"]), t(false, true, true));
        assert_eq!(v(&["p", "~p"]), t(false, false, false));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(Agenda::parse(&["p"]).unwrap().judgment_sets().len(), 2);
        let rows: Vec<String> = doctrinal().judgment_sets().iter().map(|j| j.symbols()).collect();
        assert_eq!(rows, vec!["111", "100", "010", "000"]);
        let a = Agenda::parse(&["p", "p & ~p"]).unwrap();
        assert!(a.judgment_sets().iter().all(|j| j.verdict(1) == Verdict::Reject));
    }

    #[test]
    fn solver_path_matches_table_path() {
        let a = Agenda::parse(&["p", "q -> r", "p & q | ~r", "q <-> p", "r"]).unwrap();
        let with_table = a.judgment_sets().to_vec();
        let mut out = Vec::new();
        let mut bits = vec![false; a.len()];
        a.extend_solver(&vec![None; a.len()], 0, &mut Vec::new(), &mut bits, usize::MAX, &mut out);
        assert_eq!(with_table, out);
    }

    #[test]
    fn hamming_examples() {
        let a = doctrinal();
        let j1 = a.parse_judgment_set(&["p", "q", "p & q"]).unwrap();
        let j2 = a.parse_judgment_set(&["p", "~q", "~(p & q)"]).unwrap();
        let j4 = a.parse_judgment_set(&["~p", "~q", "~(p & q)"]).unwrap();
        assert_eq!(hamming(&j1, &j1).unwrap(), 0);
        assert_eq!(hamming(&j1, &j2).unwrap(), 2);
        assert_eq!(hamming(&j1, &j4).unwrap(), 3);
        let partial = a.parse_judgment_set(&["p"]).unwrap();
        assert_eq!(hamming(&j1, &partial), Err(Error::DistanceUndefined));
    }

    #[test]
    fn support_examples() {
        let a = doctrinal();
        let prof = Profile::from_rows(&a, &["111", "100", "010"]).unwrap();
        let s = support(&a, &prof, &Formula::var("p")).unwrap();
        assert_eq!((s.agents(), s.count), (vec![1, 2], 2));
        let s = support(&a, &prof, &logic::parse_formula("p & q").unwrap()).unwrap();
        assert_eq!((s.agents(), s.count), (vec![1], 1));
        for it in a.items() {
            assert_eq!(prof.support(it).count + prof.support(it.complement()).count, 3);
        }
        assert!(support(&a, &prof, &Formula::var("r")).is_err());
    }

    #[test]
    fn extension_examples() {
        let a = doctrinal();
        let ext = a.complete_extension(&a.parse_judgment_set(&["p"]).unwrap()).unwrap();
        assert!(ext.contains(AgendaItem::pos(0)) && ext.is_complete());
        let ext = a.complete_extension(&a.parse_judgment_set(&["p", "q"]).unwrap()).unwrap();
        assert_eq!(ext.symbols(), "111");
        let bad = a.parse_judgment_set(&["p", "~p"]).unwrap();
        assert_eq!(a.complete_extension(&bad), Err(Error::Inconsistent));
    }

    #[test]
    fn distance_sum_examples() {
        let a = doctrinal();
        let prof = Profile::from_rows(&a, &["111", "100", "010"]).unwrap();
        let j = |r: &str| JudgmentSet::from_symbols(r).unwrap();
        assert_eq!(distance_sum(&j("111"), &prof).unwrap(), 4);
        assert_eq!(distance_sum(&j("000"), &prof).unwrap(), 5);
        let same = Profile::from_rows(&a, &["111", "111", "111"]).unwrap();
        assert_eq!(distance_sum(&j("111"), &same).unwrap(), 0);
    }

    #[test]
    fn profile_validation() {
        let a = doctrinal();
        assert_eq!(Profile::from_rows(&a, &["111", "100"]), Err(Error::BadAgentCount(2)));
        match Profile::from_rows(&a, &["111", "110", "010"]) {
            Err(Error::IrrationalAgent { agent, core, .. }) => {
                assert_eq!(agent, 2);
                assert_eq!(core.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn profile_iteration_is_lexicographic() {
        let a = Agenda::parse(&["p"]).unwrap();
        let all: Vec<String> = ProfileIter::new(&a, 3, &Budget::default())
            .unwrap()
            .map(|p| p.agents().iter().map(|j| j.symbols()).collect())
            .collect();
        assert_eq!(all, vec!["111", "110", "101", "100", "011", "010", "001", "000"]);
        let tight = Budget::with_profiles(7);
        assert!(ProfileIter::new(&a, 3, &tight).is_err());
    }

    #[test]
    fn ordering_is_accept_first() {
        let mut v: Vec<JudgmentSet> =
            ["000", "101", "111", "100"].iter().map(|r| JudgmentSet::from_symbols(r).unwrap()).collect();
        v.sort();
        let rows: Vec<String> = v.iter().map(|j| j.symbols()).collect();
        assert_eq!(rows, vec!["111", "101", "100", "000"]);
    }
}
