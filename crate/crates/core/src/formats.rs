//! Plain-text file formats for agendas, profiles, quota tables, preference
//! orders and quantified formulas. Blank lines and `#` comments are ignored
//! everywhere; errors carry 1-based line numbers.

use crate::agenda::{Agenda, JudgmentSet, Profile};
use crate::error::{Error, Result};
use crate::logic::{parse_formula, Formula};
use crate::rules::kemeny::PreferenceProfile;
use crate::safety::QbfInstance;

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Nonblank lines with their 1-based numbers, comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty())
}

/// One member of Φ⁺ per line. Lines prefixed `premise:` are premises; when
/// any line carries the prefix, the others are conclusions.
pub fn parse_agenda(text: &str) -> Result<Agenda> {
    let mut positives = Vec::new();
    let mut premises = Vec::new();
    for (line, l) in content_lines(text) {
        let (premise, body) = match l.strip_prefix("premise:") {
            Some(rest) => (true, rest.trim()),
            None => (false, l),
        };
        let f = parse_formula(body).map_err(|e| Error::from(e).at_line(line))?;
        if f.is_negated() {
            return Err(Error::NegatedMember(f).at_line(line));
        }
        if positives.contains(&f) {
            return Err(Error::DuplicateMember(f).at_line(line));
        }
        positives.push(f);
        premises.push(premise);
    }
    if premises.iter().any(|&p| p) {
        Agenda::with_premises(positives, premises)
    } else {
        Agenda::new(positives)
    }
}

pub fn write_agenda(agenda: &Agenda) -> String {
    let mut out = String::new();
    for (i, f) in agenda.positives().iter().enumerate() {
        if agenda.premises().is_some_and(|p| p[i]) {
            out.push_str("premise: ");
        }
        out.push_str(&f.to_string());
        out.push('\n');
    }
    out
}

/// One row of `0`/`1` per agent, column `j` giving the verdict on the
/// `j`-th member of Φ⁺.
pub fn parse_profile(text: &str, agenda: &Agenda) -> Result<Profile> {
    let mut agents = Vec::new();
    for (line, l) in content_lines(text) {
        let row: String = l.chars().filter(|c| !c.is_whitespace()).collect();
        if row.len() != agenda.len() {
            return Err(Error::WidthMismatch { expected: agenda.len(), found: row.len() }.at_line(line));
        }
        let j = JudgmentSet::from_symbols(&row)
            .filter(|j| j.is_complete())
            .ok_or_else(|| Error::InvalidCharacteristic(format!("row `{row}` must use only 0 and 1")).at_line(line))?;
        agents.push(j);
    }
    Profile::new(agenda, agents)
}

pub fn write_profile(profile: &Profile) -> String {
    profile.agents().iter().map(|j| format!("{}\n", j.symbols())).collect()
}

/// Like [`parse_profile`] without the odd `n ≥ 3` restriction.
pub fn parse_profile_any_size(text: &str, agenda: &Agenda) -> Result<Profile> {
    let mut agents = Vec::new();
    for (line, l) in content_lines(text) {
        let j = JudgmentSet::from_symbols(l)
            .filter(|j| j.is_complete() && j.len() == agenda.len())
            .ok_or_else(|| Error::WidthMismatch { expected: agenda.len(), found: l.len() }.at_line(line))?;
        agents.push(j);
    }
    Profile::any_size(agenda, agents)
}

/// One `q_accept q_reject` pair per member of Φ⁺.
pub fn parse_quotas(text: &str) -> Result<Vec<(usize, usize)>> {
    content_lines(text)
        .map(|(line, l)| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                [a, b] => match (a.parse(), b.parse()) {
                    (Ok(a), Ok(b)) => Ok((a, b)),
                    _ => Err(Error::InvalidQuota(format!("`{l}` is not a pair of counts")).at_line(line)),
                },
                _ => Err(Error::InvalidQuota(format!("expected two counts, got `{l}`")).at_line(line)),
            }
        })
        .collect()
}

/// One `a > b > c` ranking per voter; candidates are taken from the first.
pub fn parse_preferences(text: &str) -> Result<PreferenceProfile> {
    let orders: Vec<Vec<String>> = content_lines(text)
        .map(|(_, l)| l.split('>').map(|s| s.trim().to_string()).collect())
        .collect();
    PreferenceProfile::from_orders(orders)
}

pub fn write_preferences(pp: &PreferenceProfile) -> String {
    pp.orders()
        .iter()
        .map(|o| {
            let names: Vec<&str> = o.iter().map(|&c| pp.candidates()[c].as_str()).collect();
            format!("{}\n", names.join(" > "))
        })
        .collect()
}

/// `forall x1 x2 exists y1 : <formula>`; either block may be omitted.
pub fn parse_qbf(text: &str) -> Result<QbfInstance> {
    let mut lines = content_lines(text);
    let (line, l) = lines.next().ok_or_else(|| Error::Quantifier("empty input".into()))?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Quantifier("expected a single line".into()).at_line(extra));
    }
    let (prefix, matrix) = l
        .split_once(':')
        .ok_or_else(|| Error::Quantifier("missing `:` before the matrix".into()).at_line(line))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    // 0 before any block, 1 inside `forall`, 2 inside `exists`
    let mut block = 0;
    for w in prefix.split_whitespace() {
        match (w, block) {
            ("forall", 0) => block = 1,
            ("exists", 0 | 1) => block = 2,
            (_, 1 | 2) if w != "forall" && w != "exists" && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                if block == 1 { &mut xs } else { &mut ys }.push(w.to_string())
            }
            _ => return Err(Error::Quantifier(format!("unexpected `{w}` in the prefix")).at_line(line)),
        }
    }
    let matrix: Formula = parse_formula(matrix.trim()).map_err(|e| Error::from(e).at_line(line))?;
    QbfInstance::new(xs, ys, matrix).map_err(|e| e.at_line(line))
}

pub fn write_qbf(q: &QbfInstance) -> String {
    format!("{q}\n")
}
