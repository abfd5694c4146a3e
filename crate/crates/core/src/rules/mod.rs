//! Aggregation procedures and winner determination.

pub mod kemeny;

use std::fmt;

use crate::agenda::{self, Agenda, AgendaItem, JudgmentSet, Profile, Verdict};
use crate::axioms::CharacteristicRule;
use crate::error::{Error, Result};
use crate::logic::{Assignment, Formula};

/// Per-formula thresholds: φ is accepted iff at least `q` agents accept it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Quotas {
    Uniform(usize),
    /// `(q_φ, q_∼φ)` for each member of Φ⁺.
    PerFormula(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotaRule {
    n: usize,
    quotas: Quotas,
}

impl QuotaRule {
    pub fn uniform(n: usize, m: usize) -> Result<QuotaRule> {
        if m > n + 1 {
            return Err(Error::InvalidQuota(format!("m = {m} exceeds n + 1 = {}", n + 1)));
        }
        Ok(QuotaRule { n, quotas: Quotas::Uniform(m) })
    }

    pub fn per_formula(n: usize, quotas: Vec<(usize, usize)>) -> Result<QuotaRule> {
        if let Some(&(a, b)) = quotas.iter().find(|&&(a, b)| a > n + 1 || b > n + 1) {
            return Err(Error::InvalidQuota(format!("quota pair ({a}, {b}) exceeds n + 1 = {}", n + 1)));
        }
        Ok(QuotaRule { n, quotas: Quotas::PerFormula(quotas) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quotas(&self) -> &Quotas {
        &self.quotas
    }

    pub fn quota(&self, item: AgendaItem) -> usize {
        match &self.quotas {
            Quotas::Uniform(m) => *m,
            Quotas::PerFormula(q) => {
                let (p, n) = q[item.index];
                if item.positive {
                    p
                } else {
                    n
                }
            }
        }
    }

    pub fn apply(&self, agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
        if profile.n() != self.n {
            return Err(Error::AgentCountMismatch { expected: self.n, found: profile.n() });
        }
        if let Quotas::PerFormula(q) = &self.quotas {
            if q.len() != agenda.len() {
                return Err(Error::WidthMismatch { expected: agenda.len(), found: q.len() });
            }
        }
        let mut out = JudgmentSet::empty(agenda.len());
        for item in agenda.items() {
            if profile.support(item).count >= self.quota(item) {
                out.insert(item);
            }
        }
        Ok(out)
    }
}

/// `(n + 1) / 2`; `n` must be odd.
pub fn majority_rule(n: usize) -> Result<QuotaRule> {
    if n.is_multiple_of(2) {
        return Err(Error::BadAgentCount(n));
    }
    QuotaRule::uniform(n, n.div_ceil(2))
}

pub fn apply_quota(rule: &QuotaRule, agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
    rule.apply(agenda, profile)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Quota(QuotaRule),
    PremiseBased,
    /// Irresolute unless `lex_tie_break` keeps only the canonically first winner.
    DistanceBased { lex_tie_break: bool },
    Characteristic(CharacteristicRule),
}

impl Rule {
    pub fn majority(n: usize) -> Result<Rule> {
        Ok(Rule::Quota(majority_rule(n)?))
    }

    pub fn uniform_quota(n: usize, m: usize) -> Result<Rule> {
        Ok(Rule::Quota(QuotaRule::uniform(n, m)?))
    }

    pub fn is_resolute(&self) -> bool {
        !matches!(self, Rule::DistanceBased { lex_tie_break: false })
    }

    /// Every outcome; a single one unless the rule is irresolute.
    pub fn outcomes(&self, agenda: &Agenda, profile: &Profile) -> Result<Vec<JudgmentSet>> {
        Ok(match self {
            Rule::DistanceBased { lex_tie_break } => {
                let mut w = apply_dbp(agenda, profile)?.winners;
                if *lex_tie_break {
                    w.truncate(1);
                }
                w
            }
            _ => vec![self.apply(agenda, profile)?],
        })
    }

    pub fn apply(&self, agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
        match self {
            Rule::Quota(q) => q.apply(agenda, profile),
            Rule::PremiseBased => apply_pbp(agenda, profile),
            Rule::DistanceBased { lex_tie_break: true } => {
                Ok(apply_dbp(agenda, profile)?.winners.swap_remove(0))
            }
            Rule::DistanceBased { lex_tie_break: false } => Err(Error::Irresolute),
            Rule::Characteristic(c) => c.apply(agenda, profile),
        }
    }

    pub fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Quota(q) => match &q.quotas {
                Quotas::Uniform(m) if q.n % 2 == 1 && *m == q.n.div_ceil(2) => {
                    write!(f, "majority rule (n={})", q.n)
                }
                Quotas::Uniform(m) => write!(f, "uniform quota rule m={} (n={})", m, q.n),
                Quotas::PerFormula(qs) => {
                    let parts: Vec<String> = qs.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                    write!(f, "quota rule [{}] (n={})", parts.join(" "), q.n)
                }
            },
            Rule::PremiseBased => f.write_str("premise-based procedure"),
            Rule::DistanceBased { lex_tie_break: false } => f.write_str("distance-based procedure"),
            Rule::DistanceBased { lex_tie_break: true } => {
                f.write_str("distance-based procedure (lexicographic tie-break)")
            }
            Rule::Characteristic(c) => write!(f, "{c}"),
        }
    }
}

/// Majority on the literals, then every formula decided by the unique model
/// the accepted literals fix. Requires a variable-closed agenda.
pub fn apply_pbp(agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
    agenda.variable_closed()?;
    if let Some(tags) = agenda.premises() {
        for (f, &premise) in agenda.positives().iter().zip(tags) {
            if premise != matches!(f, Formula::Var(_)) {
                return Err(Error::PremisePartition(format!(
                    "premises must be exactly the literals; `{f}` is tagged {}",
                    if premise { "premise" } else { "conclusion" }
                )));
            }
        }
    }
    let n = profile.n();
    let mut model = Assignment::new();
    for (i, f) in agenda.positives().iter().enumerate() {
        if let Formula::Var(name) = f {
            let c = profile.support(AgendaItem::pos(i)).count;
            model.set(name.clone(), 2 * c > n);
        }
    }
    let mut out = JudgmentSet::empty(agenda.len());
    for (i, f) in agenda.positives().iter().enumerate() {
        let v = f.evaluate(&model)?;
        out.set(i, if v { Verdict::Accept } else { Verdict::Reject });
    }
    Ok(out)
}

/// Minimizers of the summed Hamming distance over J(Φ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbpOutcome {
    pub winners: Vec<JudgmentSet>,
    pub min_distance: usize,
}

pub fn apply_dbp(agenda: &Agenda, profile: &Profile) -> Result<DbpOutcome> {
    let mut best = usize::MAX;
    let mut winners = Vec::new();
    for j in agenda.judgment_sets() {
        let d = agenda::distance_sum(j, profile)?;
        if d < best {
            best = d;
            winners.clear();
        }
        if d == best {
            winners.push(j.clone());
        }
    }
    Ok(DbpOutcome { winners, min_distance: best })
}

/// Is φ in the outcome of a resolute rule?
pub fn windet(rule: &Rule, agenda: &Agenda, profile: &Profile, phi: &Formula) -> Result<bool> {
    let item = agenda.item_of(phi)?;
    if !rule.is_resolute() {
        return Err(Error::Irresolute);
    }
    Ok(rule.apply(agenda, profile)?.contains(item))
}

/// Is there a member of J(Φ) containing `l` within total distance `k`?
pub fn windet_star_k(agenda: &Agenda, profile: &Profile, l: &JudgmentSet, k: usize) -> Result<bool> {
    agenda.check_width(l)?;
    for j in agenda.judgment_sets() {
        if l.is_subset(j) && agenda::distance_sum(j, profile)? <= k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Smallest `k` for which some member of J(Φ) is within distance `k`, found by
/// binary search over `[0, |Φ⁺|·n]`.
pub fn winning_distance(agenda: &Agenda, profile: &Profile) -> Result<usize> {
    let empty = JudgmentSet::empty(agenda.len());
    let (mut lo, mut hi) = (0, agenda.len() * profile.n());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if windet_star_k(agenda, profile, &empty, mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Does some distance-based winner contain `l`?
pub fn windet_star(agenda: &Agenda, profile: &Profile, l: &JudgmentSet) -> Result<bool> {
    let kw = winning_distance(agenda, profile)?;
    windet_star_k(agenda, profile, l, kw)
}

/// Same question answered from the full winner list.
pub fn windet_star_direct(agenda: &Agenda, profile: &Profile, l: &JudgmentSet) -> Result<bool> {
    agenda.check_width(l)?;
    Ok(apply_dbp(agenda, profile)?.winners.iter().any(|w| l.is_subset(w)))
}

/// Fixes the members of Φ⁺ one at a time, keeping φᵢ whenever some winner
/// still extends the partial set, otherwise ∼φᵢ.
pub fn extract_dbp_winner(agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
    let kw = winning_distance(agenda, profile)?;
    let mut l = JudgmentSet::empty(agenda.len());
    for i in 0..agenda.len() {
        l.insert(AgendaItem::pos(i));
        if !windet_star_k(agenda, profile, &l, kw)? {
            l.remove(AgendaItem::pos(i));
            l.insert(AgendaItem::neg(i));
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{entails, parse_formula};

    fn doctrinal() -> (Agenda, Profile) {
        let a = Agenda::parse(&["p", "q", "p & q"]).unwrap();
        let p = Profile::from_rows(&a, &["111", "100", "010"]).unwrap();
        (a, p)
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn quota_examples() {
        let (a, p) = doctrinal();
        let out = majority_rule(3).unwrap().apply(&a, &p).unwrap();
        assert_eq!(a.show(&out), "{p, q, ~(p & q)}");
        assert!(!a.is_consistent(&out));
        let none = QuotaRule::uniform(3, 4).unwrap().apply(&a, &p).unwrap();
        assert!(none.is_empty());
        let all = QuotaRule::uniform(3, 0).unwrap().apply(&a, &p).unwrap();
        assert_eq!(all.symbols(), "***");
        assert!(QuotaRule::uniform(3, 5).is_err());
    }

    #[test]
    fn majority_quota_values() {
        assert_eq!(majority_rule(3).unwrap().quotas, Quotas::Uniform(2));
        assert_eq!(majority_rule(5).unwrap().quotas, Quotas::Uniform(3));
        assert_eq!(majority_rule(4), Err(Error::BadAgentCount(4)));
    }

    #[test]
    fn pbp_examples() {
        let a = Agenda::parse(&["p", "q", "r", "p | q | r"]).unwrap();
        let prof = Profile::from_rows(&a, &["1001", "0101", "0011"]).unwrap();
        let out = apply_pbp(&a, &prof).unwrap();
        assert_eq!(a.show(&out), "{~p, ~q, ~r, ~(p | q | r)}");

        let (a, p) = doctrinal();
        assert_eq!(apply_pbp(&a, &p).unwrap().symbols(), "111");
        for j in a.judgment_sets() {
            let u = Profile::new(&a, vec![j.clone(); 3]).unwrap();
            assert_eq!(&apply_pbp(&a, &u).unwrap(), j);
        }
        let open = Agenda::parse(&["p", "p & q"]).unwrap();
        let prof = Profile::from_rows(&open, &["11", "10", "10"]).unwrap();
        assert_eq!(apply_pbp(&open, &prof), Err(Error::NotVariableClosed("q".into())));
    }

    #[test]
    fn pbp_matches_entailment_definition() {
        let a = Agenda::parse(&["p", "q", "r", "p -> q", "q & r | p", "r <-> ~p"]).unwrap();
        let sets = a.judgment_sets();
        for x in sets.iter().step_by(3) {
            for y in sets.iter().step_by(2) {
                for z in sets {
                    let prof = Profile::new(&a, vec![x.clone(), y.clone(), z.clone()]).unwrap();
                    let delta: Vec<Formula> = (0..3)
                        .map(|i| {
                            let it = AgendaItem::pos(i);
                            a.formula(if prof.support(it).count >= 2 { it } else { it.complement() })
                        })
                        .collect();
                    let expected: Vec<AgendaItem> =
                        a.items().filter(|&it| entails(&delta, &a.formula(it))).collect();
                    let got: Vec<AgendaItem> = apply_pbp(&a, &prof).unwrap().items().collect();
                    assert_eq!(got, expected);
                }
            }
        }
    }

    #[test]
    fn dbp_examples() {
        let (a, p) = doctrinal();
        let out = apply_dbp(&a, &p).unwrap();
        let rows: Vec<String> = out.winners.iter().map(|j| j.symbols()).collect();
        assert_eq!(rows, vec!["111", "100", "010"]);
        assert_eq!(out.min_distance, 4);
        let u = Profile::from_rows(&a, &["100", "100", "100"]).unwrap();
        let out = apply_dbp(&a, &u).unwrap();
        assert_eq!((out.winners.len(), out.min_distance), (1, 0));
        assert_eq!(Rule::DistanceBased { lex_tie_break: false }.apply(&a, &p), Err(Error::Irresolute));
        let lex = Rule::DistanceBased { lex_tie_break: true }.apply(&a, &p).unwrap();
        assert_eq!(lex.symbols(), "111");
    }

    #[test]
    fn windet_examples() {
        let (a, p) = doctrinal();
        let maj = Rule::majority(3).unwrap();
        assert!(!windet(&maj, &a, &p, &f("p & q")).unwrap());
        assert!(windet(&Rule::PremiseBased, &a, &p, &f("p & q")).unwrap());
        assert!(windet(&maj, &a, &p, &f("p")).unwrap());
        assert!(windet(&maj, &a, &p, &f("r")).is_err());
    }

    #[test]
    fn windet_star_examples() {
        let (a, p) = doctrinal();
        let empty = JudgmentSet::empty(3);
        assert!(windet_star_k(&a, &p, &empty, 4).unwrap());
        assert!(!windet_star_k(&a, &p, &empty, 3).unwrap());
        assert!(windet_star_k(&a, &p, &empty, 3 * 3).unwrap());
        let pq = a.parse_judgment_set(&["p & q"]).unwrap();
        assert!(windet_star_k(&a, &p, &pq, 4).unwrap());
        assert!(windet_star(&a, &p, &pq).unwrap());
        let nn = a.parse_judgment_set(&["~p", "~q"]).unwrap();
        assert!(!windet_star(&a, &p, &nn).unwrap());
        assert!(windet_star(&a, &p, &empty).unwrap());
        assert_eq!(winning_distance(&a, &p).unwrap(), 4);
        assert_eq!(extract_dbp_winner(&a, &p).unwrap().symbols(), "111");
    }
}
