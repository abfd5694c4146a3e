//! Exhaustive axiom checks and rules given by characteristic functions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::agenda::{profile_count, Agenda, AgendaItem, JudgmentSet, Profile, ProfileIter};
use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::rules::{majority_rule, QuotaRule, Rule};
use crate::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    U,
    A,
    N,
    I,
    S,
    MI,
    MN,
    WR,
    Complete,
    ComplementFree,
    Consistent,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::U,
        Axiom::A,
        Axiom::N,
        Axiom::I,
        Axiom::S,
        Axiom::MI,
        Axiom::MN,
        Axiom::WR,
        Axiom::Complete,
        Axiom::ComplementFree,
        Axiom::Consistent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::U => "U",
            Axiom::A => "A",
            Axiom::N => "N",
            Axiom::I => "I",
            Axiom::S => "S",
            Axiom::MI => "M^I",
            Axiom::MN => "M^N",
            Axiom::WR => "WR",
            Axiom::Complete => "Complete",
            Axiom::ComplementFree => "ComplementFree",
            Axiom::Consistent => "Consistent",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase();
        Axiom::ALL
            .into_iter()
            .find(|a| {
                let n = a.name().to_ascii_lowercase();
                n == key || n.replace('^', "") == key
            })
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// First counterexample found in canonical profile order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub profiles: Vec<Profile>,
    pub formulas: Vec<Formula>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) violated: {}", self.axiom, self.detail)
    }
}

/// Outcomes of a resolute rule on every profile, in canonical order.
struct OutcomeTable<'a> {
    agenda: &'a Agenda,
    n: usize,
    outcomes: Vec<JudgmentSet>,
}

impl<'a> OutcomeTable<'a> {
    fn build(rule: &Rule, agenda: &'a Agenda, n: usize, budget: &Budget) -> Result<Self> {
        if !rule.is_resolute() {
            return Err(Error::Irresolute);
        }
        let mut outcomes = Vec::new();
        for p in ProfileIter::new(agenda, n, budget)? {
            outcomes.push(rule.apply(agenda, &p)?);
        }
        Ok(OutcomeTable { agenda, n, outcomes })
    }

    fn sets(&self) -> &[JudgmentSet] {
        self.agenda.judgment_sets()
    }

    fn indices(&self, k: usize) -> Vec<usize> {
        let s = self.sets().len();
        let mut idx = vec![0; self.n];
        let mut k = k;
        for slot in idx.iter_mut().rev() {
            *slot = k % s;
            k /= s;
        }
        idx
    }

    fn index_of(&self, idx: &[usize]) -> usize {
        let s = self.sets().len();
        idx.iter().fold(0, |acc, &i| acc * s + i)
    }

    fn profile(&self, k: usize) -> Profile {
        Profile::unchecked(self.indices(k).into_iter().map(|i| self.sets()[i].clone()).collect())
    }

    fn coalition(&self, idx: &[usize], item: AgendaItem) -> u64 {
        idx.iter()
            .enumerate()
            .filter(|(_, &j)| self.sets()[j].contains(item))
            .fold(0, |m, (a, _)| m | 1 << a)
    }

    fn items(&self) -> Vec<AgendaItem> {
        self.agenda.items().collect()
    }

    fn violation(&self, axiom: Axiom, ks: &[usize], items: &[AgendaItem], detail: String) -> Violation {
        Violation {
            axiom,
            profiles: ks.iter().map(|&k| self.profile(k)).collect(),
            formulas: items.iter().map(|&it| self.agenda.formula(it)).collect(),
            detail,
        }
    }

    fn check(&self, axiom: Axiom) -> Option<Violation> {
        match axiom {
            Axiom::WR | Axiom::Complete | Axiom::ComplementFree | Axiom::Consistent => self.check_single(axiom),
            Axiom::U => self.check_unanimity(),
            Axiom::A => self.check_anonymity(),
            Axiom::I => self.check_independence(),
            Axiom::N => self.check_neutrality(),
            Axiom::S => self.check_systematicity(),
            Axiom::MI => self.check_i_monotonicity(),
            Axiom::MN => self.check_n_monotonicity(),
        }
    }

    fn check_single(&self, axiom: Axiom) -> Option<Violation> {
        for (k, out) in self.outcomes.iter().enumerate() {
            let (ok, what) = match axiom {
                Axiom::Complete => (out.is_complete(), "incomplete"),
                Axiom::ComplementFree => (out.is_complement_free(), "not complement-free"),
                Axiom::WR => (
                    out.is_complete() && out.is_complement_free(),
                    "not complete and complement-free",
                ),
                _ => (self.agenda.is_consistent(out), "inconsistent"),
            };
            if !ok {
                return Some(self.violation(
                    axiom,
                    &[k],
                    &[],
                    format!("outcome {} is {what}", self.agenda.show(out)),
                ));
            }
        }
        None
    }

    fn check_unanimity(&self) -> Option<Violation> {
        let full = (1u64 << self.n) - 1;
        let items = self.items();
        for (k, out) in self.outcomes.iter().enumerate() {
            let idx = self.indices(k);
            for &it in &items {
                if self.coalition(&idx, it) == full && !out.contains(it) {
                    let f = self.agenda.formula(it);
                    return Some(self.violation(
                        Axiom::U,
                        &[k],
                        &[it],
                        format!("every agent accepts `{f}` but the outcome does not"),
                    ));
                }
            }
        }
        None
    }

    fn check_anonymity(&self) -> Option<Violation> {
        for (k, out) in self.outcomes.iter().enumerate() {
            let mut idx = self.indices(k);
            idx.sort_unstable();
            let k2 = self.index_of(&idx);
            if &self.outcomes[k2] != out {
                return Some(self.violation(
                    Axiom::A,
                    &[k, k2],
                    &[],
                    "permuting the agents changes the outcome".into(),
                ));
            }
        }
        None
    }

    fn check_independence(&self) -> Option<Violation> {
        for it in self.items() {
            let mut seen: HashMap<u64, (usize, bool)> = HashMap::new();
            for (k, out) in self.outcomes.iter().enumerate() {
                let c = self.coalition(&self.indices(k), it);
                let v = out.contains(it);
                match seen.get(&c) {
                    Some(&(k0, v0)) if v0 != v => {
                        let f = self.agenda.formula(it);
                        return Some(self.violation(
                            Axiom::I,
                            &[k0, k],
                            &[it],
                            format!("same agents accept `{f}` in both profiles, outcomes differ on it"),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(c, (k, v));
                    }
                }
            }
        }
        None
    }

    fn check_neutrality(&self) -> Option<Violation> {
        let items = self.items();
        for (k, out) in self.outcomes.iter().enumerate() {
            let idx = self.indices(k);
            let mut seen: HashMap<u64, AgendaItem> = HashMap::new();
            for &it in &items {
                let c = self.coalition(&idx, it);
                match seen.get(&c) {
                    Some(&first) if out.contains(first) != out.contains(it) => {
                        let (a, b) = (self.agenda.formula(first), self.agenda.formula(it));
                        return Some(self.violation(
                            Axiom::N,
                            &[k],
                            &[first, it],
                            format!("`{a}` and `{b}` have the same supporters but are treated differently"),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(c, it);
                    }
                }
            }
        }
        None
    }

    fn check_systematicity(&self) -> Option<Violation> {
        let items = self.items();
        let mut seen: HashMap<u64, (usize, AgendaItem, bool)> = HashMap::new();
        for (k, out) in self.outcomes.iter().enumerate() {
            let idx = self.indices(k);
            for &it in &items {
                let c = self.coalition(&idx, it);
                let v = out.contains(it);
                match seen.get(&c) {
                    Some(&(k0, first, v0)) if v0 != v => {
                        let (a, b) = (self.agenda.formula(first), self.agenda.formula(it));
                        return Some(self.violation(
                            Axiom::S,
                            &[k0, k],
                            &[first, it],
                            format!("`{a}` and `{b}` have the same supporters but are treated differently"),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(c, (k, it, v));
                    }
                }
            }
        }
        None
    }

    fn check_i_monotonicity(&self) -> Option<Violation> {
        for it in self.items() {
            // first profile per coalition where the item is accepted / rejected
            let mut acc: BTreeMap<u64, usize> = BTreeMap::new();
            let mut rej: BTreeMap<u64, usize> = BTreeMap::new();
            for (k, out) in self.outcomes.iter().enumerate() {
                let c = self.coalition(&self.indices(k), it);
                let m = if out.contains(it) { &mut acc } else { &mut rej };
                m.entry(c).or_insert(k);
            }
            let mut best: Option<(usize, usize)> = None;
            for (&c, &ka) in &acc {
                for (&d, &kr) in &rej {
                    if c != d && c & !d == 0 && best.is_none_or(|b| (ka, kr) < b) {
                        best = Some((ka, kr));
                    }
                }
            }
            if let Some((ka, kr)) = best {
                let f = self.agenda.formula(it);
                return Some(self.violation(
                    Axiom::MI,
                    &[ka, kr],
                    &[it],
                    format!("`{f}` loses collective acceptance after gaining support"),
                ));
            }
        }
        None
    }

    fn check_n_monotonicity(&self) -> Option<Violation> {
        let items = self.items();
        for (k, out) in self.outcomes.iter().enumerate() {
            let idx = self.indices(k);
            let cs: Vec<u64> = items.iter().map(|&it| self.coalition(&idx, it)).collect();
            for (a, &fa) in items.iter().enumerate() {
                if !out.contains(fa) {
                    continue;
                }
                for (b, &fb) in items.iter().enumerate() {
                    if cs[a] != cs[b] && cs[a] & !cs[b] == 0 && !out.contains(fb) {
                        let (x, y) = (self.agenda.formula(fa), self.agenda.formula(fb));
                        return Some(self.violation(
                            Axiom::MN,
                            &[k],
                            &[fa, fb],
                            format!("`{y}` has strictly more supporters than the accepted `{x}` but is rejected"),
                        ));
                    }
                }
            }
        }
        None
    }
}

/// `None` when the axiom holds on every profile with `n` agents.
pub fn check_axiom(rule: &Rule, agenda: &Agenda, n: usize, axiom: Axiom, budget: &Budget) -> Result<Option<Violation>> {
    Ok(check_axioms(rule, agenda, n, &[axiom], budget)?.pop().and_then(|(_, v)| v))
}

/// Several axioms over one shared outcome table.
pub fn check_axioms(
    rule: &Rule,
    agenda: &Agenda,
    n: usize,
    axioms: &[Axiom],
    budget: &Budget,
) -> Result<Vec<(Axiom, Option<Violation>)>> {
    let t = OutcomeTable::build(rule, agenda, n, budget)?;
    Ok(axioms.iter().map(|&a| (a, t.check(a))).collect())
}

/// `h : {0..n} → {0,1}`, stored as `n + 1` flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountFn(pub Vec<bool>);

impl CountFn {
    pub fn parse(s: &str) -> Option<CountFn> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(CountFn)
    }

    pub fn threshold(n: usize, m: usize) -> CountFn {
        CountFn((0..=n).map(|i| i >= m).collect())
    }

    pub fn at(&self, i: usize) -> bool {
        self.0[i]
    }

    /// All `h` with `h(i) = 1 - h(n - i)` for `1 ≤ i ≤ n`, and `h(n) = 1` when
    /// `unanimous`. Empty for even `n`.
    pub fn symmetric(n: usize, unanimous: bool) -> Vec<CountFn> {
        if n.is_multiple_of(2) {
            return Vec::new();
        }
        let free: Vec<usize> = (if unanimous { 1 } else { 0 }..=(n - 1) / 2).collect();
        (0u64..1 << free.len())
            .map(|mask| {
                let mut h = vec![false; n + 1];
                for (b, &i) in free.iter().enumerate() {
                    h[i] = mask >> (free.len() - 1 - b) & 1 == 1;
                }
                for i in n.div_ceil(2)..=n {
                    h[i] = !h[n - i];
                }
                CountFn(h)
            })
            .collect()
    }
}

impl fmt::Display for CountFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacteristicH {
    Uniform(CountFn),
    /// One function per member of Φ⁺, shared with its complement.
    PerFormula(Vec<CountFn>),
    /// Keyed by the sorted multiset of judgment sets, so anonymous by
    /// construction.
    PerProfile(BTreeMap<Vec<JudgmentSet>, CountFn>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicRule {
    n: usize,
    h: CharacteristicH,
}

impl CharacteristicRule {
    pub fn h(&self) -> &CharacteristicH {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
        if profile.n() != self.n {
            return Err(Error::AgentCountMismatch { expected: self.n, found: profile.n() });
        }
        let per_profile = match &self.h {
            CharacteristicH::PerFormula(hs) if hs.len() != agenda.len() => {
                return Err(Error::WidthMismatch { expected: agenda.len(), found: hs.len() });
            }
            CharacteristicH::PerProfile(map) => {
                let mut key = profile.agents().to_vec();
                key.sort();
                Some(map.get(&key).ok_or(Error::MissingProfileEntry)?)
            }
            _ => None,
        };
        let mut out = JudgmentSet::empty(agenda.len());
        for item in agenda.items() {
            let h = match (&self.h, per_profile) {
                (CharacteristicH::Uniform(h), _) => h,
                (CharacteristicH::PerFormula(hs), _) => &hs[item.index],
                (_, Some(h)) => h,
                (CharacteristicH::PerProfile(_), None) => unreachable!("looked up above"),
            };
            if h.at(profile.support(item).count) {
                out.insert(item);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for CharacteristicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.h {
            CharacteristicH::Uniform(h) => {
                let name = if *h == CountFn::threshold(self.n, self.n.div_ceil(2)) {
                    " (majority)"
                } else if h.0.iter().enumerate().all(|(i, &b)| b == (i % 2 == 1)) {
                    " (parity)"
                } else {
                    ""
                };
                write!(f, "characteristic rule h={h}{name} (n={})", self.n)
            }
            CharacteristicH::PerFormula(hs) => {
                let parts: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
                write!(f, "per-formula characteristic rule h=[{}] (n={})", parts.join(" "), self.n)
            }
            CharacteristicH::PerProfile(m) => {
                write!(f, "per-profile characteristic rule over {} profiles (n={})", m.len(), self.n)
            }
        }
    }
}

fn validate_h(h: &CountFn, n: usize, unanimous: bool) -> Result<()> {
    if h.0.len() != n + 1 {
        return Err(Error::InvalidCharacteristic(format!("h has {} values, need n + 1 = {}", h.0.len(), n + 1)));
    }
    for i in 1..=n {
        if h.at(i) == h.at(n - i) {
            return Err(Error::InvalidCharacteristic(format!("h={h} breaks h({i}) = 1 - h({})", n - i)));
        }
    }
    if unanimous && !h.at(n) {
        return Err(Error::InvalidCharacteristic(format!("h={h} has h({n}) = 0 but unanimity needs 1")));
    }
    Ok(())
}

/// Rejects every `h` when `n` is even: `h(n/2) = 1 - h(n/2)` has no solution.
pub fn make_rule_from_h(h: CharacteristicH, n: usize, unanimous: bool) -> Result<Rule> {
    match &h {
        CharacteristicH::Uniform(f) => validate_h(f, n, unanimous)?,
        CharacteristicH::PerFormula(fs) => {
            for f in fs {
                validate_h(f, n, unanimous)?;
            }
        }
        CharacteristicH::PerProfile(m) => {
            for (key, f) in m {
                if key.len() != n || key.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidCharacteristic("profile keys must be sorted with n members".into()));
                }
                validate_h(f, n, unanimous)?;
            }
        }
    }
    Ok(Rule::Characteristic(CharacteristicRule { n, h }))
}

/// Observed acceptance per coalition, for each member of Φ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningCoalitions {
    pub n: usize,
    pub items: Vec<(AgendaItem, BTreeMap<u64, bool>)>,
}

impl WinningCoalitions {
    /// Winning coalitions of one item among those realised by some profile.
    pub fn winning(&self, item: AgendaItem) -> Vec<u64> {
        self.items
            .iter()
            .find(|(it, _)| *it == item)
            .map(|(_, m)| m.iter().filter(|(_, &w)| w).map(|(&c, _)| c).collect())
            .unwrap_or_default()
    }

    /// The grand coalition wins wherever it occurs.
    pub fn grand_coalition_wins(&self) -> bool {
        let full = (1u64 << self.n) - 1;
        self.items.iter().all(|(_, m)| m.get(&full).copied().unwrap_or(true))
    }

    /// All items agree on every coalition they share.
    pub fn identical(&self) -> bool {
        let mut global: HashMap<u64, bool> = HashMap::new();
        for (_, m) in &self.items {
            for (&c, &w) in m {
                if *global.entry(c).or_insert(w) != w {
                    return false;
                }
            }
        }
        true
    }

    /// Within each item, equal-size coalitions agree.
    pub fn cardinality_closed(&self) -> bool {
        self.items.iter().all(|(_, m)| {
            let mut by_size: HashMap<u32, bool> = HashMap::new();
            m.iter().all(|(&c, &w)| *by_size.entry(c.count_ones()).or_insert(w) == w)
        })
    }
}

pub fn extract_winning_coalitions(rule: &Rule, agenda: &Agenda, n: usize, budget: &Budget) -> Result<WinningCoalitions> {
    let t = OutcomeTable::build(rule, agenda, n, budget)?;
    if let Some(v) = t.check(Axiom::I) {
        return Err(Error::NotIndependent(Box::new(v)));
    }
    let mut items = Vec::new();
    for it in t.items() {
        let mut m = BTreeMap::new();
        for (k, out) in t.outcomes.iter().enumerate() {
            m.insert(t.coalition(&t.indices(k), it), out.contains(it));
        }
        items.push((it, m));
    }
    Ok(WinningCoalitions { n, items })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomClass {
    Majority,
    /// `F[WR,A,S]`, with (U) when `unanimity`.
    Systematic { unanimity: bool },
    /// `F[WR,A,N]`, with (U) when `unanimity`.
    Neutral { unanimity: bool },
    /// `F[WR,A,I]`, with (U) when `unanimity`.
    Independent { unanimity: bool },
    /// Uniform quota rules `F_m` with `n - n/k < m ≤ n`.
    QuotaRange { k: usize },
}

impl AxiomClass {
    pub const WRAUS: AxiomClass = AxiomClass::Systematic { unanimity: true };
    pub const WRAUN: AxiomClass = AxiomClass::Neutral { unanimity: true };
    pub const WRAUI: AxiomClass = AxiomClass::Independent { unanimity: true };

    /// Axioms every member of the class satisfies.
    pub fn axioms(self) -> Vec<Axiom> {
        use Axiom::*;
        let with_u = |mut v: Vec<Axiom>, u: bool| {
            if u {
                v.push(U);
            }
            v
        };
        match self {
            AxiomClass::Majority => vec![WR, A, S, MI, U],
            AxiomClass::Systematic { unanimity } => with_u(vec![WR, A, S], unanimity),
            AxiomClass::Neutral { unanimity } => with_u(vec![WR, A, N], unanimity),
            AxiomClass::Independent { unanimity } => with_u(vec![WR, A, I], unanimity),
            AxiomClass::QuotaRange { .. } => vec![A, I, N, MI, U],
        }
    }
}

impl fmt::Display for AxiomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = |b: bool| if b { ",U" } else { "" };
        match self {
            AxiomClass::Majority => f.write_str("majority"),
            AxiomClass::Systematic { unanimity } => write!(f, "F[WR,A{},S]", u(*unanimity)),
            AxiomClass::Neutral { unanimity } => write!(f, "F[WR,A{},N]", u(*unanimity)),
            AxiomClass::Independent { unanimity } => write!(f, "F[WR,A{},I]", u(*unanimity)),
            AxiomClass::QuotaRange { k } => write!(f, "uniform quota rules for k={k}"),
        }
    }
}

impl FromStr for AxiomClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "majority" => AxiomClass::Majority,
            "wraus" => AxiomClass::WRAUS,
            "wraun" => AxiomClass::WRAUN,
            "wraui" => AxiomClass::WRAUI,
            "wras" => AxiomClass::Systematic { unanimity: false },
            "wran" => AxiomClass::Neutral { unanimity: false },
            "wrai" => AxiomClass::Independent { unanimity: false },
            _ => {
                let k = s
                    .strip_prefix("quota-range:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| format!("unknown class `{s}`"))?;
                if k < 2 {
                    return Err(format!("quota-range needs k >= 2, got {k}"));
                }
                AxiomClass::QuotaRange { k }
            }
        })
    }
}

/// Quotas `m ≤ n` with `m > n - n/k`, i.e. `k·m > n·(k - 1)`.
pub fn quota_range(n: usize, k: usize) -> Vec<usize> {
    (0..=n).filter(|&m| k * m > n * (k - 1)).collect()
}

/// Every representative of the class for `n` agents.
pub fn enumerate_class_rules(class: AxiomClass, agenda: &Agenda, n: usize, budget: &Budget) -> Result<Vec<Rule>> {
    let symmetric = |u: bool| {
        let hs = CountFn::symmetric(n, u);
        if hs.is_empty() {
            Err(Error::InvalidCharacteristic(format!("no weakly rational anonymous rule exists for n = {n}")))
        } else {
            Ok(hs)
        }
    };
    match class {
        AxiomClass::Majority => Ok(vec![Rule::Quota(majority_rule(n)?)]),
        AxiomClass::QuotaRange { k } => {
            quota_range(n, k).into_iter().map(|m| Ok(Rule::Quota(QuotaRule::uniform(n, m)?))).collect()
        }
        AxiomClass::Systematic { unanimity } => symmetric(unanimity)?
            .into_iter()
            .map(|h| make_rule_from_h(CharacteristicH::Uniform(h), n, unanimity))
            .collect(),
        AxiomClass::Independent { unanimity } => {
            let hs = symmetric(unanimity)?;
            let total = profile_count(hs.len(), agenda.len());
            budget.check("rules in class", total, budget.max_profiles)?;
            let mut out = Vec::new();
            let mut idx = vec![0usize; agenda.len()];
            loop {
                let fam = idx.iter().map(|&i| hs[i].clone()).collect();
                out.push(make_rule_from_h(CharacteristicH::PerFormula(fam), n, unanimity)?);
                if !odometer(&mut idx, hs.len()) {
                    break;
                }
            }
            Ok(out)
        }
        AxiomClass::Neutral { unanimity } => {
            let hs = symmetric(unanimity)?;
            let keys = profile_multisets(agenda, n);
            let total = profile_count(hs.len(), keys.len());
            budget.check("rules in class", total, budget.max_profiles)?;
            let mut out = Vec::new();
            let mut idx = vec![0usize; keys.len()];
            loop {
                let map = keys.iter().cloned().zip(idx.iter().map(|&i| hs[i].clone())).collect();
                out.push(make_rule_from_h(CharacteristicH::PerProfile(map), n, unanimity)?);
                if !odometer(&mut idx, hs.len()) {
                    break;
                }
            }
            Ok(out)
        }
    }
}

fn odometer(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Sorted multisets of `n` members of J(Φ), in canonical order.
pub fn profile_multisets(agenda: &Agenda, n: usize) -> Vec<Vec<JudgmentSet>> {
    fn go(sets: &[JudgmentSet], start: usize, left: usize, cur: &mut Vec<JudgmentSet>, out: &mut Vec<Vec<JudgmentSet>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..sets.len() {
            cur.push(sets[i].clone());
            go(sets, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(agenda.judgment_sets(), 0, n, &mut Vec::new(), &mut out);
    out
}

/// Every outcome some member of the class produces on `profile`. For the
/// neutral class the per-profile functions are independent of each other, so
/// ranging over one symmetric `h` here covers every member.
pub fn class_outcomes(class: AxiomClass, agenda: &Agenda, profile: &Profile, rules: &[Rule]) -> Result<Vec<JudgmentSet>> {
    let n = profile.n();
    match class {
        AxiomClass::Neutral { unanimity } => CountFn::symmetric(n, unanimity)
            .into_iter()
            .map(|h| make_rule_from_h(CharacteristicH::Uniform(h), n, unanimity)?.apply(agenda, profile))
            .collect(),
        _ => rules.iter().map(|r| r.apply(agenda, profile)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::default()
    }

    fn doctrinal() -> Agenda {
        Agenda::parse(&["p", "q", "p & q"]).unwrap()
    }

    #[test]
    fn majority_is_weakly_rational() {
        let a = doctrinal();
        let r = Rule::majority(3).unwrap();
        assert!(check_axiom(&r, &a, 3, Axiom::WR, &budget()).unwrap().is_none());
        let v = check_axiom(&r, &a, 3, Axiom::Consistent, &budget()).unwrap().unwrap();
        assert_eq!(v.profiles[0].agents().iter().map(|j| j.symbols()).collect::<Vec<_>>(), ["111", "100", "010"]);
    }

    #[test]
    fn pbp_violates_unanimity_on_table_profile() {
        let a = Agenda::parse(&["p", "q", "r", "p | q | r"]).unwrap();
        let v = check_axiom(&Rule::PremiseBased, &a, 3, Axiom::U, &budget()).unwrap().unwrap();
        let rows: Vec<String> = v.profiles[0].agents().iter().map(|j| j.symbols()).collect();
        assert_eq!(rows, ["1001", "0101", "0011"]);
        assert_eq!(v.formulas[0].to_string(), "p | q | r");
    }

    #[test]
    fn uniform_quota_rules_satisfy_the_quota_axioms() {
        let a = Agenda::parse(&["p", "p | q"]).unwrap();
        for m in 0..=4 {
            let r = Rule::uniform_quota(3, m).unwrap();
            let res = check_axioms(&r, &a, 3, &[Axiom::A, Axiom::I, Axiom::MI, Axiom::N, Axiom::S, Axiom::MN], &budget())
                .unwrap();
            for (ax, v) in res {
                assert!(v.is_none(), "m={m} {ax}");
            }
            let u = check_axiom(&r, &a, 3, Axiom::U, &budget()).unwrap();
            assert_eq!(u.is_none(), m != 4, "m={m}");
        }
    }

    #[test]
    fn systematic_iff_neutral_and_independent() {
        let a = doctrinal();
        let mut rules = vec![Rule::PremiseBased, Rule::DistanceBased { lex_tie_break: true }];
        for m in 0..=4 {
            rules.push(Rule::uniform_quota(3, m).unwrap());
        }
        rules.push(Rule::Quota(QuotaRule::per_formula(3, vec![(2, 2), (1, 3), (2, 2)]).unwrap()));
        for r in rules {
            let res = check_axioms(&r, &a, 3, &[Axiom::S, Axiom::N, Axiom::I], &budget()).unwrap();
            let ok: Vec<bool> = res.iter().map(|(_, v)| v.is_none()).collect();
            assert_eq!(ok[0], ok[1] && ok[2], "{r}");
        }
    }

    #[test]
    fn h_rules() {
        let a = doctrinal();
        let maj = make_rule_from_h(CharacteristicH::Uniform(CountFn::parse("0011").unwrap()), 3, true).unwrap();
        let q = Rule::majority(3).unwrap();
        for p in ProfileIter::new(&a, 3, &budget()).unwrap() {
            assert_eq!(maj.apply(&a, &p).unwrap(), q.apply(&a, &p).unwrap());
        }
        let parity = make_rule_from_h(CharacteristicH::Uniform(CountFn::parse("0101").unwrap()), 3, true).unwrap();
        let res = check_axioms(&parity, &a, 3, &[Axiom::WR, Axiom::A, Axiom::U, Axiom::S], &budget()).unwrap();
        assert!(res.iter().all(|(_, v)| v.is_none()));
        let bad = make_rule_from_h(CharacteristicH::Uniform(CountFn::parse("0110").unwrap()), 3, false);
        assert!(matches!(bad, Err(Error::InvalidCharacteristic(_))));
    }

    #[test]
    fn even_n_rejects_every_h() {
        for bits in 0u32..32 {
            let h = CountFn((0..5).map(|i| bits >> i & 1 == 1).collect());
            assert!(make_rule_from_h(CharacteristicH::Uniform(h), 4, false).is_err());
        }
    }

    #[test]
    fn class_enumeration_counts() {
        let a = Agenda::parse(&["p", "q"]).unwrap();
        let s = enumerate_class_rules(AxiomClass::WRAUS, &a, 3, &budget()).unwrap();
        let names: Vec<String> = s.iter().map(|r| r.to_string()).collect();
        assert_eq!(names, ["characteristic rule h=0011 (majority) (n=3)", "characteristic rule h=0101 (parity) (n=3)"]);
        assert_eq!(enumerate_class_rules(AxiomClass::WRAUI, &a, 3, &budget()).unwrap().len(), 4);
        assert_eq!(quota_range(3, 2), vec![2, 3]);
        assert_eq!(quota_range(3, 3), vec![3]);
        assert_eq!(quota_range(5, 3), vec![4, 5]);
        let small = Agenda::parse(&["p"]).unwrap();
        // 4 multisets of 3 over {p, ~p}, 2 functions each
        assert_eq!(enumerate_class_rules(AxiomClass::WRAUN, &small, 3, &budget()).unwrap().len(), 16);
        assert!(enumerate_class_rules(AxiomClass::WRAUN, &doctrinal(), 3, &budget()).is_err());
    }

    #[test]
    fn per_profile_rules_are_anonymous_and_neutral() {
        let a = Agenda::parse(&["p", "q"]).unwrap();
        let keys = profile_multisets(&a, 3);
        let hs = CountFn::symmetric(3, true);
        let map = keys.iter().enumerate().map(|(i, k)| (k.clone(), hs[i % 2].clone())).collect();
        let r = make_rule_from_h(CharacteristicH::PerProfile(map), 3, true).unwrap();
        let res = check_axioms(&r, &a, 3, &[Axiom::WR, Axiom::A, Axiom::N, Axiom::U, Axiom::I], &budget()).unwrap();
        let ok: Vec<bool> = res.iter().map(|(_, v)| v.is_none()).collect();
        assert_eq!(ok, [true, true, true, true, false]);
    }

    #[test]
    fn winning_coalitions() {
        let a = doctrinal();
        let w = extract_winning_coalitions(&Rule::majority(3).unwrap(), &a, 3, &budget()).unwrap();
        assert_eq!(w.winning(AgendaItem::pos(0)), vec![0b011, 0b101, 0b110, 0b111]);
        assert!(w.grand_coalition_wins() && w.identical() && w.cardinality_closed());
        let w3 = extract_winning_coalitions(&Rule::uniform_quota(3, 3).unwrap(), &a, 3, &budget()).unwrap();
        for it in a.items() {
            assert_eq!(w3.winning(it), vec![0b111]);
        }
        match extract_winning_coalitions(&Rule::PremiseBased, &a, 3, &budget()) {
            Err(Error::NotIndependent(v)) => assert_eq!(v.profiles.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monotonicity_violations_are_found() {
        let a = Agenda::parse(&["p", "q"]).unwrap();
        let parity = make_rule_from_h(CharacteristicH::Uniform(CountFn::parse("0101").unwrap()), 3, true).unwrap();
        assert!(check_axiom(&parity, &a, 3, Axiom::MI, &budget()).unwrap().is_some());
        assert!(check_axiom(&parity, &a, 3, Axiom::MN, &budget()).unwrap().is_some());
        let maj = Rule::majority(3).unwrap();
        assert!(check_axiom(&maj, &a, 3, Axiom::MN, &budget()).unwrap().is_none());
    }
}
