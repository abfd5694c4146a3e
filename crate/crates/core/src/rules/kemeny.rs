//! Kemeny winner via distance-based winner determination.
//!
//! A linear order over candidates is encoded by variables `p_a_b` ("a is
//! preferred to b") together with transitivity and antisymmetry formulas,
//! each repeated `m² + 1` times as syntactic variants so that breaking one of
//! them always costs more than any disagreement on the pair variables.

use crate::agenda::{Agenda, JudgmentSet, Profile, Verdict};
use crate::error::{Error, Result};
use crate::logic::{syntactic_variants, Assignment, Formula};
use crate::rules::windet_star;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    candidates: Vec<String>,
    /// Candidate indices, most preferred first.
    orders: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    pub fn new(candidates: Vec<String>, orders: Vec<Vec<String>>) -> Result<PreferenceProfile> {
        validate_candidates(&candidates)?;
        if orders.is_empty() {
            return Err(Error::Candidates("no voters".into()));
        }
        let mut idx_orders = Vec::with_capacity(orders.len());
        for (v, order) in orders.iter().enumerate() {
            let mut seen = vec![false; candidates.len()];
            let mut idx = Vec::with_capacity(order.len());
            for name in order {
                let i = candidates
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Error::Candidates(format!("voter {}: unknown candidate `{name}`", v + 1)))?;
                if seen[i] {
                    return Err(Error::Candidates(format!("voter {}: `{name}` ranked twice", v + 1)));
                }
                seen[i] = true;
                idx.push(i);
            }
            if idx.len() != candidates.len() {
                return Err(Error::Candidates(format!("voter {}: order is not total", v + 1)));
            }
            idx_orders.push(idx);
        }
        Ok(PreferenceProfile { candidates, orders: idx_orders })
    }

    /// Candidates in the order they first appear in the first voter's ranking.
    pub fn from_orders(orders: Vec<Vec<String>>) -> Result<PreferenceProfile> {
        let candidates = orders.first().cloned().unwrap_or_default();
        PreferenceProfile::new(candidates, orders)
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }
}

fn validate_candidates(c: &[String]) -> Result<()> {
    if c.len() < 2 {
        return Err(Error::Candidates(format!("need at least 2 candidates, got {}", c.len())));
    }
    for (i, name) in c.iter().enumerate() {
        if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric()) {
            return Err(Error::Candidates(format!("`{name}` must be nonempty and alphanumeric")));
        }
        if c[..i].contains(name) {
            return Err(Error::Candidates(format!("`{name}` listed twice")));
        }
    }
    Ok(())
}

pub fn pair_var(a: &str, b: &str) -> Formula {
    Formula::var(format!("p_{a}_{b}"))
}

/// Pair variables for all ordered pairs, then `m² + 1` variants of every
/// transitivity formula (ordered triples of distinct candidates), then of
/// every antisymmetry formula (unordered pairs).
pub fn build_kemeny_agenda(candidates: &[String]) -> Result<Agenda> {
    validate_candidates(candidates)?;
    let m = candidates.len();
    let copies = m * m + 1;
    let mut positives = Vec::new();
    for a in candidates {
        for b in candidates {
            if a != b {
                positives.push(pair_var(a, b));
            }
        }
    }
    for a in candidates {
        for b in candidates {
            for c in candidates {
                if a == b || b == c || a == c {
                    continue;
                }
                let base = Formula::implies(Formula::and(pair_var(a, b), pair_var(b, c)), pair_var(a, c));
                positives.extend(syntactic_variants(&base, copies));
            }
        }
    }
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            let base = Formula::iff(pair_var(a, b), Formula::not(pair_var(b, a)));
            positives.extend(syntactic_variants(&base, copies));
        }
    }
    Agenda::new(positives)
}

fn order_assignment(candidates: &[String], order: &[usize]) -> Assignment {
    let mut rank = vec![0; candidates.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let mut v = Assignment::new();
    for (i, a) in candidates.iter().enumerate() {
        for (j, b) in candidates.iter().enumerate() {
            if i != j {
                v.set(format!("p_{a}_{b}"), rank[i] < rank[j]);
            }
        }
    }
    v
}

/// One judgment set per voter; `n` need not be odd here.
pub fn encode_preference_profile(agenda: &Agenda, pp: &PreferenceProfile) -> Result<Profile> {
    let expected = build_kemeny_agenda(&pp.candidates)?;
    if expected.positives() != agenda.positives() {
        return Err(Error::Candidates("agenda was built for a different candidate list".into()));
    }
    let agents = pp
        .orders
        .iter()
        .map(|order| {
            let v = order_assignment(&pp.candidates, order);
            let vs = agenda
                .positives()
                .iter()
                .map(|f| f.evaluate(&v).map(|b| if b { Verdict::Accept } else { Verdict::Reject }))
                .collect::<Result<Vec<_>>>()?;
            Ok(JudgmentSet::from_verdicts(&vs))
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::any_size(agenda, agents)
}

/// Number of ordered candidate pairs on which two linear orders disagree.
pub fn preference_distance(p: &[usize], q: &[usize]) -> usize {
    let m = p.len();
    let rank = |o: &[usize]| {
        let mut r = vec![0; m];
        for (i, &c) in o.iter().enumerate() {
            r[c] = i;
        }
        r
    };
    let (rp, rq) = (rank(p), rank(q));
    let mut d = 0;
    for a in 0..m {
        for b in 0..m {
            if a != b && (rp[a] < rp[b]) != (rq[a] < rq[b]) {
                d += 1;
            }
        }
    }
    d
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Kemeny score of every candidate by enumerating all linear orders.
pub fn kemeny_scores(pp: &PreferenceProfile) -> Vec<usize> {
    let m = pp.candidates.len();
    let mut best = vec![usize::MAX; m];
    let mut q: Vec<usize> = (0..m).collect();
    loop {
        let s: usize = pp.orders.iter().map(|p| preference_distance(p, &q)).sum();
        best[q[0]] = best[q[0]].min(s);
        if !next_permutation(&mut q) {
            break;
        }
    }
    best
}

/// Is `c` a Kemeny winner? With `use_oracle` the answer comes from
/// enumerating orders; otherwise from one distance-based winner query.
pub fn kemeny_winner(pp: &PreferenceProfile, c: &str, use_oracle: bool) -> Result<bool> {
    let ci = pp
        .candidates
        .iter()
        .position(|x| x == c)
        .ok_or_else(|| Error::Candidates(format!("`{c}` is not a candidate")))?;
    if use_oracle {
        let s = kemeny_scores(pp);
        return Ok(s.iter().all(|&d| s[ci] <= d));
    }
    let agenda = build_kemeny_agenda(&pp.candidates)?;
    kemeny_winner_on(&agenda, pp, ci)
}

/// As [`kemeny_winner`] on a prebuilt agenda, which caches J(Φ) across calls.
pub fn kemeny_winner_on(agenda: &Agenda, pp: &PreferenceProfile, ci: usize) -> Result<bool> {
    let profile = encode_preference_profile(agenda, pp)?;
    let c = &pp.candidates[ci];
    let l: Vec<Formula> =
        pp.candidates.iter().filter(|d| *d != c).map(|d| pair_var(c, d)).collect();
    let l = agenda.judgment_set(&l)?;
    windet_star(agenda, &profile, &l)
}
