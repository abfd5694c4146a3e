#![allow(dead_code)]

use agorum::logic::Formula;
use agorum::safety::QbfInstance;
use agorum::{parse_formula, Agenda, JudgmentSet, Profile};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const POOL: [&str; 13] = [
    "p",
    "q",
    "r",
    "p & q",
    "p | q",
    "p -> q",
    "p <-> q",
    "q & r",
    "p & q & r",
    "p & p",
    "(p | q) & r",
    "p & ~p",
    "p | ~p",
];

/// Every agenda of one to three distinct pool formulas, in pool order.
pub fn corpus() -> Vec<Agenda> {
    let n = POOL.len();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Agenda::parse(&[POOL[i]]).unwrap());
        for j in i + 1..n {
            out.push(Agenda::parse(&[POOL[i], POOL[j]]).unwrap());
            for k in j + 1..n {
                out.push(Agenda::parse(&[POOL[i], POOL[j], POOL[k]]).unwrap());
            }
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_profile(agenda: &Agenda, n: usize, rng: &mut impl Rng) -> Profile {
    let sets = agenda.judgment_sets();
    let agents = (0..n).map(|_| sets[rng.gen_range(0..sets.len())].clone()).collect();
    Profile::any_size(agenda, agents).unwrap()
}

pub fn random_member(agenda: &Agenda, rng: &mut impl Rng) -> JudgmentSet {
    let sets = agenda.judgment_sets();
    sets[rng.gen_range(0..sets.len())].clone()
}

/// Disjunctive normal form of the boolean function whose truth table over
/// `vars` (first variable most significant) is `bits`.
pub fn dnf(vars: &[String], bits: u64) -> Formula {
    let rows = 1u64 << vars.len();
    let terms: Vec<Formula> = (0..rows)
        .filter(|r| bits >> r & 1 == 1)
        .map(|r| {
            Formula::conj(vars.iter().enumerate().map(|(i, v)| {
                let x = Formula::var(v.clone());
                if r >> (vars.len() - 1 - i) & 1 == 1 {
                    x
                } else {
                    Formula::not(x)
                }
            }))
        })
        .collect();
    if terms.is_empty() {
        Formula::False
    } else {
        Formula::disj(terms)
    }
}

/// One representative of every `∀x∃y.φ` with at most three variables, up to
/// equivalence of the matrix.
pub fn all_small_qbfs() -> Vec<QbfInstance> {
    let mut out = Vec::new();
    for total in 0..=3usize {
        for r in 0..=total {
            let xs: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
            let ys: Vec<String> = (1..=total - r).map(|i| format!("y{i}")).collect();
            let vars: Vec<String> = xs.iter().chain(&ys).cloned().collect();
            for bits in 0..1u64 << (1 << total) {
                out.push(QbfInstance::new(xs.clone(), ys.clone(), dnf(&vars, bits)).unwrap());
            }
        }
    }
    out
}

/// Formulas over `p1..p3` for the manipulation reduction, satisfiable and
/// not.
pub fn reduction_formulas() -> Vec<Formula> {
    [
        "p1",
        "~p1",
        "p1 & ~p1",
        "p1 | ~p1",
        "p1 & p2",
        "p1 & ~p2",
        "p1 | p2",
        "p1 -> p2",
        "p1 <-> p2",
        "(p1 <-> p2) & (p1 <-> ~p2)",
        "p1 & p2 & ~p1",
        "p1 & p2 & p3",
        "p1 | p2 | p3",
        "(p1 | p2) & ~p1 & ~p2",
        "(p1 -> p2) & (p2 -> p3) & p1 & ~p3",
        "(p1 -> p2) & (p2 -> p3) & p1",
        "~(p1 | p2 | p3)",
        "(p1 | p2) & (~p1 | p3) & (~p2 | ~p3)",
        "(p1 | p2) & (~p1 | p2) & (p1 | ~p2) & (~p1 | ~p2)",
        "p1 & (p2 | p3)",
        "(p1 <-> p2) <-> p3",
        "((p1 <-> p2) <-> p3) & ~p1 & ~p2 & ~p3",
        "~p1 & ~p2",
        "p1 -> (p2 -> p3)",
        "(p1 & ~p1) | (p2 & ~p2)",
        "(p1 | p2 | p3) & ~p1 & ~p2 & ~p3",
        "p2 & ~p3",
        "(p1 & p2) | (~p1 & ~p2)",
        "p3 <-> ~p3",
        "(p1 -> p3) & (p2 -> p3) & (p1 | p2) & ~p3",
        "~(p1 -> p1)",
        "T & p2",
        "F | p1",
        "F",
    ]
    .iter()
    .map(|s| parse_formula(s).unwrap())
    .collect()
}
