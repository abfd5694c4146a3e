//! Agenda properties, safety verdicts with constructive witnesses, and
//! brute-force safety oracles.

pub mod qbf;

use std::fmt;
use std::str::FromStr;

use crate::agenda::{Agenda, AgendaItem, JudgmentSet, Profile, ProfileIter};
use crate::axioms::{class_outcomes, enumerate_class_rules, make_rule_from_h, quota_range, AxiomClass, CharacteristicH, CountFn};
use crate::error::{Error, Result};
use crate::logic::{self, Formula, ModelSet};
use crate::rules::{QuotaRule, Rule};
use crate::Budget;

pub use qbf::{check_sat2_side_conditions, eval_qbf, lift_to_sat2, mp_agenda_from_ssmp, ssmp_agenda_from_qbf, QbfInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgendaProperty {
    /// Median property: every mi-subset has at most two members.
    MP,
    /// Every mi-subset has at most `k` members.
    KMedian(usize),
    /// Every nontrivial mi-subset is `{φ, ψ}` with φ equivalent to ∼ψ.
    SMP,
    /// Every nontrivial mi-subset is `{φ, ∼φ}`.
    SSMP,
}

impl AgendaProperty {
    pub fn name(self) -> String {
        match self {
            AgendaProperty::MP => "MP".into(),
            AgendaProperty::KMedian(k) => format!("{k}MP"),
            AgendaProperty::SMP => "SMP".into(),
            AgendaProperty::SSMP => "SSMP".into(),
        }
    }
}

impl fmt::Display for AgendaProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for AgendaProperty {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mp" => Ok(AgendaProperty::MP),
            "smp" => Ok(AgendaProperty::SMP),
            "ssmp" => Ok(AgendaProperty::SSMP),
            _ => {
                let k = s
                    .strip_prefix("kmp:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| format!("unknown property `{s}`"))?;
                if k < 2 {
                    return Err(format!("kmp needs k >= 2, got {k}"));
                }
                Ok(AgendaProperty::KMedian(k))
            }
        }
    }
}

/// Minimally inconsistent subset of Φ, members in Φ order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MISubset {
    pub items: Vec<AgendaItem>,
    pub formulas: Vec<Formula>,
}

impl MISubset {
    pub fn size(&self) -> usize {
        self.items.len()
    }

    pub fn is_complement_pair(&self) -> bool {
        self.items.len() == 2 && self.items[0] == self.items[1].complement()
    }
}

impl fmt::Display for MISubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.formulas.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn item_key(it: &AgendaItem) -> (usize, bool) {
    (it.index, !it.positive)
}

/// Groups Φ⁺ indices into classes of formulas linked by shared variables.
/// Inconsistency never crosses classes.
fn components(agenda: &Agenda) -> Vec<Vec<usize>> {
    let vars: Vec<_> = agenda.positives().iter().map(|f| f.variables()).collect();
    let mut parent: Vec<usize> = (0..agenda.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if !vars[i].is_disjoint(&vars[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; vars.len()];
    for i in 0..vars.len() {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = out.len();
            out.push(Vec::new());
        }
        out[root_of[r]].push(i);
    }
    out
}

struct MiSearch<'a> {
    agenda: &'a Agenda,
    max_size: usize,
    out: Vec<Vec<AgendaItem>>,
}

impl MiSearch<'_> {
    fn minimal(&self, items: &[AgendaItem]) -> bool {
        (0..items.len()).all(|skip| {
            let rest: Vec<AgendaItem> =
                items.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &it)| it).collect();
            self.agenda.items_consistent(&rest)
        })
    }

    /// Extends a consistent, complement-free `cur` by items of later indices.
    fn go(&mut self, idx: &[usize], start: usize, cur: &mut Vec<AgendaItem>, models: Option<&ModelSet>) {
        if cur.len() == self.max_size {
            return;
        }
        for (k, &i) in idx.iter().enumerate().skip(start) {
            for it in [AgendaItem::pos(i), AgendaItem::neg(i)] {
                cur.push(it);
                let next = match (models, self.agenda.item_models(it)) {
                    (Some(m), Some(im)) => Some(m.and(im)),
                    _ => None,
                };
                let consistent = match &next {
                    Some(m) => !m.is_empty(),
                    None => self.agenda.items_consistent(cur),
                };
                if consistent {
                    self.go(idx, k + 1, cur, next.as_ref());
                } else if self.minimal(cur) {
                    self.out.push(cur.clone());
                }
                cur.pop();
            }
        }
    }
}

/// All mi-subsets of Φ with at most `max_size` members, by size then in Φ
/// order. Singletons are contradictions; a complement pair `{φ, ∼φ}` is
/// listed when φ is contingent.
pub fn minimal_inconsistent_subsets(agenda: &Agenda, max_size: Option<usize>, budget: &Budget) -> Result<Vec<MISubset>> {
    budget.check("agenda size for subset scan", agenda.len() as u128, budget.max_subset_agenda as u128)?;
    let max_size = max_size.unwrap_or(usize::MAX);
    let mut found: Vec<Vec<AgendaItem>> = Vec::new();
    if max_size >= 2 {
        for i in 0..agenda.len() {
            let (p, n) = (AgendaItem::pos(i), AgendaItem::neg(i));
            if !agenda.is_contradiction(p) && !agenda.is_contradiction(n) {
                found.push(vec![p, n]);
            }
        }
    }
    let full = agenda.truth_table().map(|t| ModelSet::full(t.rows()));
    for comp in components(agenda) {
        let mut s = MiSearch { agenda, max_size, out: Vec::new() };
        s.go(&comp, 0, &mut Vec::new(), full.as_ref());
        found.extend(s.out);
    }
    for f in &mut found {
        f.sort_by_key(item_key);
    }
    found.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| a.iter().map(item_key).cmp(b.iter().map(item_key)))
    });
    Ok(found
        .into_iter()
        .map(|items| MISubset { formulas: items.iter().map(|&it| agenda.formula(it)).collect(), items })
        .collect())
}

/// Result of a property check; `witness` is the first offending mi-subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: AgendaProperty,
    pub holds: bool,
    pub witness: Option<MISubset>,
}

fn complementary(agenda: &Agenda, a: AgendaItem, b: AgendaItem) -> bool {
    match (agenda.item_models(a), agenda.item_models(b)) {
        (Some(ma), Some(mb)) => *ma == mb.not(),
        _ => logic::are_equivalent(&agenda.formula(a), &Formula::not(agenda.formula(b))),
    }
}

fn offends(agenda: &Agenda, prop: AgendaProperty, d: &MISubset) -> bool {
    match prop {
        AgendaProperty::MP => d.size() > 2,
        AgendaProperty::KMedian(k) => d.size() > k,
        AgendaProperty::SMP => d.size() > 2 || (d.size() == 2 && !complementary(agenda, d.items[0], d.items[1])),
        AgendaProperty::SSMP => d.size() >= 2 && !d.is_complement_pair(),
    }
}

pub fn satisfies_property(agenda: &Agenda, prop: AgendaProperty, budget: &Budget) -> Result<PropertyCheck> {
    if let AgendaProperty::KMedian(k) = prop {
        if k < 2 {
            return Err(Error::InvalidQuota(format!("kMP needs k >= 2, got {k}")));
        }
        budget.check("k of kMP", k as u128, budget.max_k as u128)?;
    }
    let subsets = minimal_inconsistent_subsets(agenda, None, budget)?;
    let witness = subsets.into_iter().find(|d| offends(agenda, prop, d));
    Ok(PropertyCheck { property: prop, holds: witness.is_none(), witness })
}

/// Property check straight from the definitions: scans every subset of Φ
/// without using mi-subsets. Exponential in `|Φ|`; for testing.
pub fn satisfies_property_naive(agenda: &Agenda, prop: AgendaProperty) -> bool {
    let items: Vec<AgendaItem> = agenda.items().collect();
    let consistent = |s: &[AgendaItem]| agenda.items_consistent(s);
    let subsets = |mask: u64| -> Vec<AgendaItem> {
        items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &it)| it).collect()
    };
    for mask in 1u64..1 << items.len() {
        let s = subsets(mask);
        if consistent(&s) {
            continue;
        }
        match prop {
            AgendaProperty::MP | AgendaProperty::KMedian(_) => {
                let k = if let AgendaProperty::KMedian(k) = prop { k } else { 2 };
                let small = (1u64..1 << items.len())
                    .filter(|&sub| sub & !mask == 0 && (sub.count_ones() as usize) <= k)
                    .any(|sub| !consistent(&subsets(sub)));
                if !small {
                    return false;
                }
            }
            AgendaProperty::SMP | AgendaProperty::SSMP => {
                if s.iter().any(|&it| !consistent(&[it])) {
                    continue;
                }
                let paired = s.iter().any(|&a| {
                    s.iter().any(|&b| {
                        a != b
                            && if prop == AgendaProperty::SSMP {
                                a == b.complement()
                            } else {
                                logic::are_equivalent(&agenda.formula(a), &Formula::not(agenda.formula(b)))
                            }
                    })
                });
                if !paired {
                    return false;
                }
            }
        }
    }
    true
}

/// Property a class needs for safety, and whether contradictions must also
/// be absent (classes without unanimity).
pub fn required_property(class: AxiomClass) -> (AgendaProperty, bool) {
    match class {
        AxiomClass::Majority => (AgendaProperty::MP, false),
        AxiomClass::Systematic { unanimity } | AxiomClass::Neutral { unanimity } => (AgendaProperty::SMP, !unanimity),
        AxiomClass::Independent { unanimity } => (AgendaProperty::SSMP, !unanimity),
        AxiomClass::QuotaRange { k } => (AgendaProperty::KMedian(k), false),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsafetyWitness {
    pub rule: Rule,
    pub profile: Profile,
    pub outcome: JudgmentSet,
    /// The inconsistent part of the outcome the construction aims at.
    pub subset: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The required property holds (and the agenda has no contradictions
    /// when the class lacks unanimity).
    PropertyHolds(AgendaProperty),
    /// The k-median property fails through `subset`, but no quota in the
    /// class reaches it with this many agents: every quota rule in the
    /// class needs at least `min_quota` supporters, and spreading the
    /// rejections of `subset` evenly leaves fewer.
    QuotaTooHigh { subset: MISubset, min_quota: usize },
    Unsafe(UnsafetyWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyVerdict {
    pub safe: bool,
    pub property: PropertyCheck,
    pub certificate: Certificate,
}

pub fn safety_verdict(agenda: &Agenda, class: AxiomClass, n: usize, budget: &Budget) -> Result<SafetyVerdict> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::BadAgentCount(n));
    }
    let (prop, no_contradictions) = required_property(class);
    let check = satisfies_property(agenda, prop, budget)?;
    let contradiction = no_contradictions && agenda.items().any(|it| agenda.is_contradiction(it));
    if check.holds && !contradiction {
        return Ok(SafetyVerdict { safe: true, property: check, certificate: Certificate::PropertyHolds(prop) });
    }
    match construct_unsafety_witness(agenda, class, n, budget) {
        Ok(w) => Ok(SafetyVerdict { safe: false, property: check, certificate: Certificate::Unsafe(w) }),
        Err(Error::NoWitness(msg)) => {
            let (AxiomClass::QuotaRange { k }, Some(subset)) = (class, check.witness.clone()) else {
                return Err(Error::NoWitness(msg));
            };
            let min_quota = quota_range(n, k)[0];
            Ok(SafetyVerdict { safe: true, property: check, certificate: Certificate::QuotaTooHigh { subset, min_quota } })
        }
        Err(e) => Err(e),
    }
}

fn partial(agenda: &Agenda, items: &[AgendaItem]) -> JudgmentSet {
    let mut j = JudgmentSet::empty(agenda.len());
    for &it in items {
        j.insert(it);
    }
    j
}

fn extend(agenda: &Agenda, items: &[AgendaItem]) -> Result<JudgmentSet> {
    agenda.complete_extension(&partial(agenda, items))
}

fn finish(agenda: &Agenda, rule: Rule, agents: Vec<JudgmentSet>, subset: &[AgendaItem]) -> Result<UnsafetyWitness> {
    let profile = Profile::new(agenda, agents)?;
    let outcome = rule.apply(agenda, &profile)?;
    if agenda.is_consistent(&outcome) {
        return Err(Error::NoWitness(format!("{rule} stays consistent on the constructed profile")));
    }
    Ok(UnsafetyWitness { rule, profile, outcome, subset: subset.iter().map(|&it| agenda.formula(it)).collect() })
}

fn symmetric_rule(n: usize, h: CountFn, unanimity: bool) -> Result<Rule> {
    make_rule_from_h(CharacteristicH::Uniform(h), n, unanimity)
}

/// `(n-1)/2` agents accept Δ∖{φ}, `(n-1)/2` accept Δ∖{ψ}, and the middle
/// agent accepts φ and ψ but, where possible, no other member of Δ.
fn majority_witness(agenda: &Agenda, rule: Rule, d: &MISubset, n: usize) -> Result<UnsafetyWitness> {
    let (phi, psi) = (d.items[0], d.items[1]);
    let without = |x: AgendaItem| d.items.iter().copied().filter(|&y| y != x).collect::<Vec<_>>();
    let mut middle_items = vec![phi, psi];
    middle_items.extend(d.items[2..].iter().map(|it| it.complement()));
    let middle = extend(agenda, &middle_items).or_else(|_| extend(agenda, &[phi, psi]))?;
    let (a, b) = (extend(agenda, &without(phi))?, extend(agenda, &without(psi))?);
    let half = (n - 1) / 2;
    let mut agents = vec![a; half];
    agents.push(middle);
    agents.extend(std::iter::repeat_n(b, half));
    finish(agenda, rule, agents, &d.items)
}

/// Parity rule (`h(i) = 1` iff `i` odd) on J₁ = {∼φ,∼ψ}, J₂ = {φ,∼ψ},
/// J₃ = {∼φ,ψ}, further agents copying J₁.
fn parity_witness(agenda: &Agenda, d: &MISubset, n: usize, unanimity: bool) -> Result<UnsafetyWitness> {
    let (phi, psi) = (d.items[0], d.items[1]);
    let j1 = extend(agenda, &[phi.complement(), psi.complement()])?;
    let j2 = extend(agenda, &[phi, psi.complement()])?;
    let j3 = extend(agenda, &[phi.complement(), psi])?;
    let mut agents = vec![j1.clone(), j2, j3];
    agents.extend(std::iter::repeat_n(j1, n - 3));
    let rule = symmetric_rule(n, CountFn((0..=n).map(|i| i % 2 == 1).collect()), unanimity)?;
    finish(agenda, rule, agents, &d.items)
}

/// Quota rule accepting φ and ψ on a single vote, their complements only
/// unanimously, and majority elsewhere; agent 1 accepts φ, agent 2 accepts
/// ψ, the rest copy agent 1.
fn one_vote_witness(agenda: &Agenda, d: &MISubset, n: usize) -> Result<UnsafetyWitness> {
    let (phi, psi) = (d.items[0], d.items[1]);
    let maj = n.div_ceil(2);
    let mut quotas = vec![(maj, maj); agenda.len()];
    for it in [phi, psi] {
        quotas[it.index] = if it.positive { (1, n) } else { (n, 1) };
    }
    let rule = Rule::Quota(QuotaRule::per_formula(n, quotas)?);
    let j1 = extend(agenda, &[phi])?;
    let j2 = extend(agenda, &[psi])?;
    let mut agents = vec![j1.clone(), j2];
    agents.extend(std::iter::repeat_n(j1, n - 2));
    finish(agenda, rule, agents, &d.items)
}

/// Rule of the class accepting a contradiction: `h(i) = 1` iff `i` even,
/// which needs the class to drop unanimity.
fn contradiction_witness(agenda: &Agenda, n: usize) -> Result<UnsafetyWitness> {
    let bad = agenda.items().find(|&it| agenda.is_contradiction(it))
        .ok_or_else(|| Error::PropertyHolds("no contradictions".into()))?;
    let rule = symmetric_rule(n, CountFn((0..=n).map(|i| i % 2 == 0).collect()), false)?;
    let j = agenda.judgment_sets()[0].clone();
    finish(agenda, rule, vec![j; n], &[bad])
}

fn first_offending(agenda: &Agenda, prop: AgendaProperty, budget: &Budget) -> Result<Option<MISubset>> {
    Ok(satisfies_property(agenda, prop, budget)?.witness)
}

/// A rule of the class and a profile on which it returns an inconsistent
/// outcome. Fails with [`Error::PropertyHolds`] when the required property
/// holds, and with [`Error::NoWitness`] when a quota class cannot reach the
/// offending mi-subset with `n` agents.
pub fn construct_unsafety_witness(agenda: &Agenda, class: AxiomClass, n: usize, budget: &Budget) -> Result<UnsafetyWitness> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::BadAgentCount(n));
    }
    let smp_or_mp = |unanimity: bool| -> Result<Option<UnsafetyWitness>> {
        let Some(d) = first_offending(agenda, AgendaProperty::SMP, budget)? else { return Ok(None) };
        if d.size() >= 3 {
            let rule = symmetric_rule(n, CountFn::threshold(n, n.div_ceil(2)), unanimity)?;
            Ok(Some(majority_witness(agenda, rule, &d, n)?))
        } else {
            Ok(Some(parity_witness(agenda, &d, n, unanimity)?))
        }
    };
    let holds = |p: AgendaProperty| Error::PropertyHolds(p.name());
    let without_u = |unanimity: bool, p: AgendaProperty| {
        if unanimity {
            Err(holds(p))
        } else {
            contradiction_witness(agenda, n)
        }
    };
    match class {
        AxiomClass::Majority => {
            let d = first_offending(agenda, AgendaProperty::MP, budget)?.ok_or_else(|| holds(AgendaProperty::MP))?;
            majority_witness(agenda, Rule::majority(n)?, &d, n)
        }
        AxiomClass::Systematic { unanimity } | AxiomClass::Neutral { unanimity } => match smp_or_mp(unanimity)? {
            Some(w) => Ok(w),
            None => without_u(unanimity, AgendaProperty::SMP),
        },
        AxiomClass::Independent { unanimity } => {
            if let Some(w) = smp_or_mp(unanimity)? {
                return Ok(w);
            }
            match first_offending(agenda, AgendaProperty::SSMP, budget)? {
                Some(d) => one_vote_witness(agenda, &d, n),
                None => without_u(unanimity, AgendaProperty::SSMP),
            }
        }
        AxiomClass::QuotaRange { k } => {
            let m = quota_range(n, k)[0];
            let subsets = minimal_inconsistent_subsets(agenda, None, budget)?;
            let Some(d) = subsets.iter().filter(|d| d.size() > k).max_by_key(|d| d.size()) else {
                return Err(holds(AgendaProperty::KMedian(k)));
            };
            let s = d.size();
            if n - n.div_ceil(s) < m {
                return Err(Error::NoWitness(format!("no quota in the class reaches a {s}-member mi-subset with {n} agents")));
            }
            let agents = (0..n)
                .map(|i| {
                    let skip = d.items[i % s];
                    let rest: Vec<AgendaItem> = d.items.iter().copied().filter(|&x| x != skip).collect();
                    extend(agenda, &rest)
                })
                .collect::<Result<Vec<_>>>()?;
            finish(agenda, Rule::uniform_quota(n, m)?, agents, &d.items)
        }
    }
}

/// First profile (and outcome) where some member of the class is
/// inconsistent, by exhaustive search over the class and all profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceWitness {
    pub profile: Profile,
    pub outcome: JudgmentSet,
}

pub fn brute_force_unsafety(agenda: &Agenda, class: AxiomClass, n: usize, budget: &Budget) -> Result<Option<BruteForceWitness>> {
    let rules = match class {
        AxiomClass::Neutral { .. } => Vec::new(),
        _ => enumerate_class_rules(class, agenda, n, budget)?,
    };
    for profile in ProfileIter::new(agenda, n, budget)? {
        for outcome in class_outcomes(class, agenda, &profile, &rules)? {
            if !agenda.is_consistent(&outcome) {
                return Ok(Some(BruteForceWitness { profile, outcome }));
            }
        }
    }
    Ok(None)
}

/// Whether every member of the class is consistent on every profile.
pub fn brute_force_safety(agenda: &Agenda, class: AxiomClass, n: usize, budget: &Budget) -> Result<bool> {
    Ok(brute_force_unsafety(agenda, class, n, budget)?.is_none())
}
