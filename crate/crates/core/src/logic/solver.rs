use super::{Assignment, Formula};

#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    Const(bool),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
}

impl Node {
    fn compile(f: &Formula, names: &[String]) -> Node {
        let b = |x: &Formula| Box::new(Node::compile(x, names));
        match f {
            Formula::Var(n) => Node::Var(names.binary_search(n).expect("variable collected")),
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Not(a) => Node::Not(b(a)),
            Formula::And(x, y) => Node::And(b(x), b(y)),
            Formula::Or(x, y) => Node::Or(b(x), b(y)),
            Formula::Implies(x, y) => Node::Implies(b(x), b(y)),
            Formula::Iff(x, y) => Node::Iff(b(x), b(y)),
        }
    }

    /// Kleene evaluation under a partial assignment.
    fn eval(&self, a: &[Option<bool>]) -> Option<bool> {
        match self {
            Node::Var(i) => a[*i],
            Node::Const(c) => Some(*c),
            Node::Not(x) => x.eval(a).map(|v| !v),
            Node::And(x, y) => match (x.eval(a), y.eval(a)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Node::Or(x, y) => match (x.eval(a), y.eval(a)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Node::Implies(x, y) => match (x.eval(a), y.eval(a)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Node::Iff(x, y) => match (x.eval(a), y.eval(a)) {
                (Some(u), Some(v)) => Some(u == v),
                _ => None,
            },
        }
    }

    fn unassigned(&self, a: &[Option<bool>], out: &mut Vec<usize>) {
        match self {
            Node::Var(i) => {
                if a[*i].is_none() && !out.contains(i) {
                    out.push(*i);
                }
            }
            Node::Const(_) => {}
            Node::Not(x) => x.unassigned(a, out),
            Node::And(x, y) | Node::Or(x, y) | Node::Implies(x, y) | Node::Iff(x, y) => {
                x.unassigned(a, out);
                y.unassigned(a, out);
            }
        }
    }
}

/// Backtracking search over the formula trees. Conjunctions at the root are
/// split into separate constraints; a constraint left with a single open
/// variable forces that variable when one value falsifies it.
pub struct Solver {
    names: Vec<String>,
    constraints: Vec<Node>,
}

impl Solver {
    pub fn new(set: &[Formula]) -> Solver {
        let names: Vec<String> = super::variables_of(set).into_iter().collect();
        let mut constraints = Vec::new();
        let mut stack: Vec<&Formula> = set.iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(x, y) => {
                    stack.push(y);
                    stack.push(x);
                }
                Formula::Not(inner) => match &**inner {
                    Formula::Not(x) => stack.push(x),
                    _ => constraints.push(Node::compile(f, &names)),
                },
                _ => constraints.push(Node::compile(f, &names)),
            }
        }
        Solver { names, constraints }
    }

    pub fn solve(&self) -> Option<Assignment> {
        let mut a = vec![None; self.names.len()];
        if !self.search(&mut a) {
            return None;
        }
        Some(
            self.names
                .iter()
                .zip(a)
                .map(|(n, v)| (n.clone(), v.unwrap_or(false)))
                .collect(),
        )
    }

    fn search(&self, a: &mut Vec<Option<bool>>) -> bool {
        let mut trail: Vec<usize> = Vec::new();
        let ok = self.propagate(a, &mut trail);
        let result = ok && self.branch(a);
        if !result {
            for i in trail {
                a[i] = None;
            }
        }
        result
    }

    /// Forces single-variable constraints until fixpoint. Returns false on
    /// conflict.
    fn propagate(&self, a: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
        let mut open = Vec::new();
        loop {
            let mut changed = false;
            for c in &self.constraints {
                match c.eval(a) {
                    Some(true) => continue,
                    Some(false) => return false,
                    None => {}
                }
                open.clear();
                c.unassigned(a, &mut open);
                if open.len() != 1 {
                    continue;
                }
                let v = open[0];
                a[v] = Some(true);
                let t = c.eval(a);
                a[v] = Some(false);
                let f = c.eval(a);
                a[v] = None;
                let forced = match (t, f) {
                    (Some(false), Some(false)) => return false,
                    (Some(false), _) => false,
                    (_, Some(false)) => true,
                    _ => continue,
                };
                a[v] = Some(forced);
                trail.push(v);
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch(&self, a: &mut Vec<Option<bool>>) -> bool {
        let mut open = Vec::new();
        let mut pick = None;
        for c in &self.constraints {
            match c.eval(a) {
                Some(true) => continue,
                Some(false) => return false,
                None => {
                    c.unassigned(a, &mut open);
                    pick = open.first().copied();
                    break;
                }
            }
        }
        let Some(v) = pick else { return true };
        for value in [true, false] {
            a[v] = Some(value);
            if self.search(a) {
                return true;
            }
        }
        a[v] = None;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn solve(items: &[&str]) -> Option<Assignment> {
        let set: Vec<Formula> = items.iter().map(|s| parse_formula(s).unwrap()).collect();
        Solver::new(&set).solve()
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // pij: pigeon i in hole j
        let mut items = vec![
            "p11 | p12".to_string(),
            "p21 | p22".to_string(),
            "p31 | p32".to_string(),
        ];
        for j in 1..=2 {
            for a in 1..=3 {
                for b in a + 1..=3 {
                    items.push(format!("~(p{a}{j} & p{b}{j})"));
                }
            }
        }
        let refs: Vec<&str> = items.iter().map(|s| s.as_str()).collect();
        assert!(solve(&refs).is_none());
    }

    #[test]
    fn chain_is_forced() {
        let m = solve(&["a", "a -> b", "b -> c", "c <-> ~d"]).unwrap();
        assert_eq!(m.get("d"), Some(false));
        assert_eq!(m.get("c"), Some(true));
    }

    #[test]
    fn double_negation_and_constants() {
        assert!(solve(&["~~p", "~p"]).is_none());
        assert!(solve(&["T"]).is_some());
        assert!(solve(&["F | p"]).is_some());
        assert!(solve(&["~T"]).is_none());
    }
}
