//! `∀x∃y.φ` formulas and the constructions reducing them to agenda
//! properties.

use std::collections::BTreeSet;
use std::fmt;

use crate::agenda::Agenda;
use crate::error::{Error, Result};
use crate::logic::{are_equivalent, is_consistent, is_tautology, Assignment, Formula};
use crate::Budget;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfInstance {
    pub universals: Vec<String>,
    pub existentials: Vec<String>,
    pub matrix: Formula,
}

impl QbfInstance {
    pub fn new(universals: Vec<String>, existentials: Vec<String>, matrix: Formula) -> Result<QbfInstance> {
        let mut seen = BTreeSet::new();
        for v in universals.iter().chain(&existentials) {
            if !seen.insert(v.clone()) {
                return Err(Error::Quantifier(format!("`{v}` is quantified twice")));
            }
        }
        if let Some(v) = matrix.variables().into_iter().find(|v| !seen.contains(v)) {
            return Err(Error::Quantifier(format!("`{v}` is free in the matrix")));
        }
        Ok(QbfInstance { universals, existentials, matrix })
    }
}

impl fmt::Display for QbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.universals.is_empty() {
            write!(f, "forall {} ", self.universals.join(" "))?;
        }
        if !self.existentials.is_empty() {
            write!(f, "exists {} ", self.existentials.join(" "))?;
        }
        write!(f, ": {}", self.matrix)
    }
}

fn assignments(vars: &[String]) -> impl Iterator<Item = Vec<(String, bool)>> + '_ {
    (0u64..1 << vars.len()).map(move |mask| {
        vars.iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), mask >> (vars.len() - 1 - i) & 1 == 1))
            .collect()
    })
}

/// Truth of `∀x∃y.φ` by enumerating both quantifier blocks.
pub fn eval_qbf(q: &QbfInstance, budget: &Budget) -> Result<bool> {
    let total = q.universals.len() + q.existentials.len();
    budget.check("quantified variables", total as u128, budget.max_qbf_vars as u128)?;
    for xs in assignments(&q.universals) {
        let mut found = false;
        for ys in assignments(&q.existentials) {
            let v: Assignment = xs.iter().cloned().chain(ys).collect();
            if q.matrix.evaluate(&v)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub const FRESH_A: &str = "a";
pub const FRESH_B: &str = "b";

/// The pair `∀x a ∃y b.(φ ∨ a) ∧ b` and `∀x a ∃y b.∼((φ ∨ a) ∧ b)`; both are
/// true exactly when `q` is.
pub fn lift_to_sat2(q: &QbfInstance) -> Result<(QbfInstance, QbfInstance)> {
    for fresh in [FRESH_A, FRESH_B] {
        if q.universals.iter().chain(&q.existentials).any(|v| v == fresh) {
            return Err(Error::FreshVariableCollision(fresh.into()));
        }
    }
    let lifted = Formula::and(Formula::or(q.matrix.clone(), Formula::var(FRESH_A)), Formula::var(FRESH_B));
    let mut xs = q.universals.clone();
    xs.push(FRESH_A.into());
    let mut ys = q.existentials.clone();
    ys.push(FRESH_B.into());
    Ok((
        QbfInstance::new(xs.clone(), ys.clone(), lifted.clone())?,
        QbfInstance::new(xs, ys, Formula::not(lifted))?,
    ))
}

/// φ must be neither a tautology nor a contradiction, nor equivalent to a
/// literal.
pub fn check_sat2_side_conditions(phi: &Formula) -> Result<()> {
    if is_tautology(phi) {
        return Err(Error::SideCondition(format!("`{phi}` is a tautology")));
    }
    if !is_consistent(std::slice::from_ref(phi)) {
        return Err(Error::SideCondition(format!("`{phi}` is a contradiction")));
    }
    for v in phi.variables() {
        for lit in [Formula::var(v.clone()), Formula::not(Formula::var(v))] {
            if are_equivalent(phi, &lit) {
                return Err(Error::SideCondition(format!("`{phi}` is equivalent to the literal `{lit}`")));
            }
        }
    }
    Ok(())
}

/// Φ⁺ = x₁, …, x_r, (φ ∧ T). It violates SSMP exactly when
/// `∀x∃y.φ ∧ ∀x∃y.∼φ` is false.
pub fn ssmp_agenda_from_qbf(q: &QbfInstance) -> Result<Agenda> {
    check_sat2_side_conditions(&q.matrix)?;
    let mut positives: Vec<Formula> = q.universals.iter().map(Formula::var).collect();
    positives.push(Formula::and(q.matrix.clone(), Formula::True));
    Agenda::new(positives)
}

pub fn copy_var(v: &str, j: usize) -> String {
    format!("{v}__{j}")
}

pub fn aux_var(j: usize) -> String {
    format!("aux__{j}")
}

/// For each `j` in `1..=m`: `aux__j`, then every φᵢ with variables renamed
/// `v ↦ v__j`, the `j`-th of them disjoined with `aux__j`.
pub fn mp_agenda_from_ssmp(agenda: &Agenda) -> Result<Agenda> {
    if let Some(v) = agenda.variables().iter().find(|v| v.contains("__") || v.as_str() == "aux") {
        return Err(Error::FreshVariableCollision(v.clone()));
    }
    let m = agenda.len();
    let mut positives = Vec::with_capacity(m * m + m);
    for j in 1..=m {
        let aux = Formula::var(aux_var(j));
        positives.push(aux.clone());
        for (i, phi) in agenda.positives().iter().enumerate() {
            let copy = phi.map_vars(&|v| copy_var(v, j));
            positives.push(if i + 1 == j { Formula::or(copy, aux.clone()) } else { copy });
        }
    }
    Agenda::new(positives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::safety::{satisfies_property, AgendaProperty};

    fn q(xs: &[&str], ys: &[&str], m: &str) -> QbfInstance {
        QbfInstance::new(
            xs.iter().map(|s| s.to_string()).collect(),
            ys.iter().map(|s| s.to_string()).collect(),
            parse_formula(m).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let b = Budget::default();
        assert!(eval_qbf(&q(&["x"], &["y"], "x <-> y"), &b).unwrap());
        assert!(!eval_qbf(&q(&["x"], &[], "x"), &b).unwrap());
        assert!(eval_qbf(&q(&["x"], &["y"], "(x | y) & (~x | ~y)"), &b).unwrap());
        assert!(!eval_qbf(&q(&["y"], &["x"], "x & y"), &b).unwrap());
        assert!(QbfInstance::new(vec!["x".into()], vec![], parse_formula("x & z").unwrap()).is_err());
        assert!(QbfInstance::new(vec!["x".into()], vec!["x".into()], parse_formula("x").unwrap()).is_err());
    }

    #[test]
    fn lift_preserves_truth() {
        let b = Budget::default();
        for (inst, truth) in [(q(&["x"], &["y"], "x <-> y"), true), (q(&["x"], &[], "x"), false)] {
            let (pos, neg) = lift_to_sat2(&inst).unwrap();
            assert_eq!(eval_qbf(&pos, &b).unwrap(), truth);
            assert!(eval_qbf(&neg, &b).unwrap());
            check_sat2_side_conditions(&pos.matrix).unwrap();
        }
        let (pos, _) = lift_to_sat2(&q(&["x"], &["y"], "x <-> y")).unwrap();
        assert_eq!(pos.to_string(), "forall x a exists y b : ((x <-> y) | a) & b");
        assert!(lift_to_sat2(&q(&["a"], &[], "a")).is_err());
    }

    #[test]
    fn side_conditions() {
        for bad in ["p | ~p", "p & ~p", "p & (q | ~q)", "~p"] {
            assert!(check_sat2_side_conditions(&parse_formula(bad).unwrap()).is_err(), "{bad}");
        }
        check_sat2_side_conditions(&parse_formula("p & q").unwrap()).unwrap();
    }

    #[test]
    fn ssmp_agenda_shape() {
        let (pos, _) = lift_to_sat2(&q(&["x"], &["y"], "x <-> y")).unwrap();
        let a = ssmp_agenda_from_qbf(&pos).unwrap();
        let shown: Vec<String> = a.positives().iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["x", "a", "((x <-> y) | a) & b & T"]);
        let b = Budget::default();
        assert!(satisfies_property(&a, AgendaProperty::SSMP, &b).unwrap().holds);
        let (pos, _) = lift_to_sat2(&q(&["x"], &[], "x")).unwrap();
        let a = ssmp_agenda_from_qbf(&pos).unwrap();
        assert!(!satisfies_property(&a, AgendaProperty::SSMP, &b).unwrap().holds);
    }

    #[test]
    fn copying_construction() {
        let a = Agenda::parse(&["p", "p & q"]).unwrap();
        let psi = mp_agenda_from_ssmp(&a).unwrap();
        let shown: Vec<String> = psi.positives().iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["aux__1", "p__1 | aux__1", "p__1 & q__1", "aux__2", "p__2", "p__2 & q__2 | aux__2"]);
        let b = Budget::default();
        assert!(!satisfies_property(&psi, AgendaProperty::MP, &b).unwrap().holds);
        let single = mp_agenda_from_ssmp(&Agenda::parse(&["p"]).unwrap()).unwrap();
        assert!(satisfies_property(&single, AgendaProperty::MP, &b).unwrap().holds);
        assert!(mp_agenda_from_ssmp(&Agenda::parse(&["aux"]).unwrap()).is_err());
        assert!(mp_agenda_from_ssmp(&Agenda::parse(&["p__1"]).unwrap()).is_err());
    }
}
