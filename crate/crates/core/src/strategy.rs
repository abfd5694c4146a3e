//! Hamming preferences, manipulation search and the SAT reduction to
//! manipulating the premise-based procedure.

use crate::agenda::{characteristic_distance, Agenda, JudgmentSet, Profile, ProfileIter, Verdict};
use crate::error::{Error, Result};
use crate::logic::{syntactic_variants, Assignment, Formula};
use crate::rules::{apply_pbp, Rule};
use crate::Budget;

/// Does the holder of `truth` strictly prefer `j` to `k`?
pub fn prefers(truth: &JudgmentSet, j: &JudgmentSet, k: &JudgmentSet) -> Result<bool> {
    Ok(characteristic_distance(truth, j)? < characteristic_distance(truth, k)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationInstance {
    pub agenda: Agenda,
    pub profile: Profile,
    /// 0-based.
    pub agent: usize,
}

impl ManipulationInstance {
    pub fn new(agenda: Agenda, profile: Profile, agent: usize) -> Result<Self> {
        if agent >= profile.n() {
            return Err(Error::AgentOutOfRange { agent: agent + 1, n: profile.n() });
        }
        Ok(ManipulationInstance { agenda, profile, agent })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub insincere: JudgmentSet,
    pub truthful_distance: usize,
    pub manipulated_distance: usize,
}

/// First insincere report in canonical order that moves the outcome strictly
/// closer to the agent's truthful set.
pub fn find_manipulation(rule: &Rule, inst: &ManipulationInstance) -> Result<Option<ManipulationWitness>> {
    let truth = inst.profile.agent(inst.agent);
    let truthful_distance = characteristic_distance(truth, &rule.apply(&inst.agenda, &inst.profile)?)?;
    for j in inst.agenda.judgment_sets() {
        if j == truth {
            continue;
        }
        let out = rule.apply(&inst.agenda, &inst.profile.with_agent(inst.agent, j.clone()))?;
        let d = characteristic_distance(truth, &out)?;
        if d < truthful_distance {
            return Ok(Some(ManipulationWitness { insincere: j.clone(), truthful_distance, manipulated_distance: d }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyWitness {
    pub profile: Profile,
    /// 0-based.
    pub agent: usize,
    pub witness: ManipulationWitness,
}

/// `None` when no agent can manipulate at any profile with `n` agents.
pub fn is_strategy_proof(rule: &Rule, agenda: &Agenda, n: usize, budget: &Budget) -> Result<Option<StrategyWitness>> {
    for profile in ProfileIter::new(agenda, n, budget)? {
        for agent in 0..n {
            let inst = ManipulationInstance { agenda: agenda.clone(), profile: profile.clone(), agent };
            if let Some(witness) = find_manipulation(rule, &inst)? {
                return Ok(Some(StrategyWitness { profile, agent, witness }));
            }
        }
    }
    Ok(None)
}

pub const FRESH_Q1: &str = "q1";
pub const FRESH_Q2: &str = "q2";

/// Three-agent instance where agent 3 can manipulate the premise-based
/// procedure iff `phi` is satisfiable. Φ⁺ lists the variables of `phi`
/// (sorted), then `q1`, `q2`, then `m + 2` variants of `q1 | phi & q2`.
pub fn build_manip_reduction(phi: &Formula) -> Result<ManipulationInstance> {
    let vars: Vec<String> = phi.variables().into_iter().collect();
    for q in [FRESH_Q1, FRESH_Q2] {
        if vars.iter().any(|v| v == q) {
            return Err(Error::FreshVariableCollision(q.into()));
        }
    }
    let m = vars.len();
    let (q1, q2) = (Formula::var(FRESH_Q1), Formula::var(FRESH_Q2));
    let psi = Formula::or(q1.clone(), Formula::and(phi.clone(), q2.clone()));
    let mut positives: Vec<Formula> = vars.iter().map(Formula::var).collect();
    positives.push(q1);
    positives.push(q2);
    positives.extend(syntactic_variants(&psi, m + 2));
    let agenda = Agenda::new(positives)?;

    let row = |p: bool, a: bool, b: bool| -> Result<JudgmentSet> {
        let mut v: Assignment = vars.iter().map(|x| (x.clone(), p)).collect();
        v.set(FRESH_Q1, a);
        v.set(FRESH_Q2, b);
        let vs = agenda
            .positives()
            .iter()
            .map(|f| f.evaluate(&v).map(|t| if t { Verdict::Accept } else { Verdict::Reject }))
            .collect::<Result<Vec<_>>>()?;
        Ok(JudgmentSet::from_verdicts(&vs))
    };
    let agents = vec![row(true, false, false)?, row(false, false, true)?, row(true, true, false)?];
    let profile = Profile::new(&agenda, agents)?;
    Ok(ManipulationInstance { agenda, profile, agent: 2 })
}

/// Checks an insincere report without search: completeness, consistency via
/// the single model its literals fix, and a strict improvement under the
/// premise-based procedure.
pub fn verify_manipulation_certificate(inst: &ManipulationInstance, jp: &JudgmentSet) -> bool {
    let agenda = &inst.agenda;
    if agenda.variable_closed().is_err() || jp.len() != agenda.len() {
        return false;
    }
    let Some(bits) = jp.bits() else { return false };
    let mut model = Assignment::new();
    for (f, &b) in agenda.positives().iter().zip(&bits) {
        if let Formula::Var(name) = f {
            model.set(name.clone(), b);
        }
    }
    for (f, &b) in agenda.positives().iter().zip(&bits) {
        if f.evaluate(&model).ok() != Some(b) {
            return false;
        }
    }
    let truth = inst.profile.agent(inst.agent);
    let (Ok(before), Ok(after)) = (
        apply_pbp(agenda, &inst.profile),
        apply_pbp(agenda, &inst.profile.with_agent(inst.agent, jp.clone())),
    ) else {
        return false;
    };
    matches!(prefers(truth, &after, &before), Ok(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn prefers_examples() {
        let a = Agenda::parse(&["p", "q", "p & q"]).unwrap();
        let j = |r: &str| JudgmentSet::from_symbols(r).unwrap();
        assert!(prefers(&j("111"), &j("111"), &j("010")).unwrap());
        assert!(!prefers(&j("111"), &j("010"), &j("010")).unwrap());
        assert!(prefers(&j("111"), &j("111"), &j("010")).unwrap());
        assert!(prefers(&j("111"), &j("1-1"), &j("000")).unwrap());
        assert_eq!(prefers(&j("111"), &j("*11"), &j("000")), Err(Error::DistanceUndefined));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn reduction_shape() {
        let inst = build_manip_reduction(&f("p1")).unwrap();
        assert_eq!(inst.agenda.len(), 6);
        let rows: Vec<String> = inst.profile.agents().iter().map(|j| j.symbols()).collect();
        assert_eq!(rows, ["100000", "001000", "110111"]);
        assert!(build_manip_reduction(&f("q1 & p")).is_err());
    }

    #[test]
    fn reduction_tracks_satisfiability() {
        let sat = build_manip_reduction(&f("p1")).unwrap();
        let w = find_manipulation(&Rule::PremiseBased, &sat).unwrap().unwrap();
        assert_eq!(w.truthful_distance, 4);
        assert!(w.manipulated_distance <= 3);
        assert!(verify_manipulation_certificate(&sat, &w.insincere));
        assert!(!verify_manipulation_certificate(&sat, sat.profile.agent(2)));
        assert!(!verify_manipulation_certificate(&sat, &JudgmentSet::empty(6)));

        let unsat = build_manip_reduction(&f("p1 & ~p1")).unwrap();
        assert!(find_manipulation(&Rule::PremiseBased, &unsat).unwrap().is_none());
    }

    #[test]
    fn quota_rules_are_strategy_proof() {
        let a = Agenda::parse(&["p", "q", "p & q"]).unwrap();
        for m in [2, 3] {
            let r = Rule::uniform_quota(3, m).unwrap();
            assert!(is_strategy_proof(&r, &a, 3, &Budget::default()).unwrap().is_none(), "m={m}");
        }
    }

    #[test]
    fn pbp_on_doctrinal_agenda_is_strategy_proof() {
        // Flipping a pivotal premise costs one disagreement and can win back
        // at most the conclusion, so no report is strictly better.
        let a = Agenda::parse(&["p", "q", "p & q"]).unwrap();
        assert!(is_strategy_proof(&Rule::PremiseBased, &a, 3, &Budget::default()).unwrap().is_none());
    }
}
