//! Exhaustive search for solutions inside a ball of geodesics.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{Formula, Term};
use crate::graph::CommutationGraph;
use crate::system::EqSystem;
use crate::trace::{self, Letter, Word};

pub const DEFAULT_MAX_CHECKS: u64 = 10_000_000;

/// `lhs = rhs` when positive, `lhs ≠ rhs` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub lhs: Term,
    pub rhs: Term,
    pub positive: bool,
}

impl Literal {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Literal { lhs, rhs, positive: true }
    }

    pub fn from_formula(f: &Formula) -> Result<Self> {
        match f {
            Formula::Eq(t, u) => Ok(Literal { lhs: t.clone(), rhs: u.clone(), positive: true }),
            Formula::Neq(t, u) => Ok(Literal { lhs: t.clone(), rhs: u.clone(), positive: false }),
            Formula::Not(inner) => Ok(Literal::from_formula(inner)?.negated()),
            other => Err(Error::invalid(format!("not a literal: {other}"))),
        }
    }

    pub fn negated(self) -> Self {
        Literal { positive: !self.positive, ..self }
    }
}

/// Literals over an ordered list of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralSystem {
    pub vars: Vec<String>,
    pub literals: Vec<Literal>,
}

impl LiteralSystem {
    /// Variables default to those occurring, in order of first occurrence.
    pub fn new(literals: Vec<Literal>, vars: Option<Vec<String>>) -> Self {
        let vars = vars.unwrap_or_else(|| {
            let mut out: Vec<String> = Vec::new();
            for l in &literals {
                for t in [&l.lhs, &l.rhs] {
                    collect_ordered(t, &mut out);
                }
            }
            out
        });
        LiteralSystem { vars, literals }
    }

    pub fn from_formulas(fs: &[Formula], vars: Option<Vec<String>>) -> Result<Self> {
        Ok(Self::new(fs.iter().map(Literal::from_formula).collect::<Result<_>>()?, vars))
    }

    pub fn from_system(g: &CommutationGraph, s: &EqSystem) -> Self {
        let literals = s
            .rows
            .iter()
            .map(|r| Literal { lhs: s.row_term(g, &r.letters), rhs: Term::One, positive: r.positive })
            .collect();
        LiteralSystem { vars: s.vars.clone(), literals }
    }
}

fn collect_ordered(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::Mul(ts) => ts.iter().for_each(|s| collect_ordered(s, out)),
        Term::Inv(s) | Term::Pow(s, _) => collect_ordered(s, out),
        Term::Pair(l, r) => {
            collect_ordered(l, out);
            collect_ordered(r, out);
        }
        Term::One | Term::Gen(_) => {}
    }
}

/// A term compiled against a graph: constants folded and reduced.
#[derive(Clone, Debug)]
enum Node {
    Const(Word),
    Var(usize),
    Mul(Vec<Node>),
    Inv(Box<Node>),
    Pow(Box<Node>, i64),
}

fn compile(g: &CommutationGraph, vars: &[String], t: &Term) -> Result<Node> {
    Ok(match t {
        Term::One => Node::Const(Word::empty()),
        Term::Var(v) => Node::Var(
            vars.iter().position(|x| x == v).ok_or_else(|| Error::invalid(format!("variable ?{v} is not declared")))?,
        ),
        Term::Gen(name) => Node::Const(Word::letter(Letter::pos(
            g.index_of(name).ok_or_else(|| Error::invalid(format!("undeclared generator `{name}`")))?,
        ))),
        Term::Mul(ts) => {
            let mut parts: Vec<Node> = Vec::new();
            for s in ts {
                let n = compile(g, vars, s)?;
                match (parts.last_mut(), n) {
                    (Some(Node::Const(a)), Node::Const(b)) => *a = trace::reduce(g, &a.concat(&b)),
                    (_, Node::Mul(inner)) => parts.extend(inner),
                    (_, n) => parts.push(n),
                }
            }
            match parts.len() {
                0 => Node::Const(Word::empty()),
                1 => parts.pop().unwrap(),
                _ => Node::Mul(parts),
            }
        }
        Term::Inv(s) => match compile(g, vars, s)? {
            Node::Const(w) => Node::Const(w.inverse()),
            n => Node::Inv(Box::new(n)),
        },
        Term::Pow(s, k) => match compile(g, vars, s)? {
            Node::Const(w) => Node::Const(trace::reduce(g, &w.pow(*k))),
            n => Node::Pow(Box::new(n), *k),
        },
        Term::Pair(..) => return Err(Error::invalid("pair constants need a product structure")),
    })
}

fn eval(g: &CommutationGraph, n: &Node, vals: &[&Word]) -> Word {
    match n {
        Node::Const(w) => w.clone(),
        Node::Var(i) => vals[*i].clone(),
        Node::Mul(ns) => {
            let mut acc: Vec<Letter> = Vec::new();
            for m in ns {
                match m {
                    Node::Const(w) => acc.extend_from_slice(w.letters()),
                    Node::Var(i) => acc.extend_from_slice(vals[*i].letters()),
                    other => acc.extend_from_slice(eval(g, other, vals).letters()),
                }
            }
            Word::new(trace::reduce_letters(g, &acc))
        }
        Node::Inv(m) => eval(g, m, vals).inverse(),
        Node::Pow(m, k) => {
            let base = eval(g, m, vals);
            let mut b = if *k < 0 { base.inverse() } else { base };
            let mut e = k.unsigned_abs();
            let mut acc = Word::empty();
            while e > 0 {
                if e & 1 == 1 {
                    acc = trace::reduce(g, &acc.concat(&b));
                }
                e >>= 1;
                if e > 0 {
                    b = trace::reduce(g, &b.concat(&b));
                }
            }
            acc
        }
    }
}

/// Literal systems compiled for repeated evaluation.
pub struct Compiled<'g> {
    g: &'g CommutationGraph,
    checks: Vec<(Node, bool)>,
}

impl<'g> Compiled<'g> {
    pub fn new(g: &'g CommutationGraph, sys: &LiteralSystem) -> Result<Self> {
        let checks = sys
            .literals
            .iter()
            .map(|l| {
                let t = Term::Mul(vec![l.lhs.clone(), Term::inv(l.rhs.clone())]);
                Ok((compile(g, &sys.vars, &t)?, l.positive))
            })
            .collect::<Result<_>>()?;
        Ok(Compiled { g, checks })
    }

    pub fn holds(&self, vals: &[&Word]) -> bool {
        self.checks.iter().all(|(n, pos)| eval(self.g, n, vals).is_empty() == *pos)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedVariety {
    pub vars: Vec<String>,
    pub radius: usize,
    pub solutions: Vec<Vec<Word>>,
}

#[derive(Serialize)]
struct VarietyJson {
    vars: Vec<String>,
    radius: usize,
    count: usize,
    solutions: Vec<Vec<String>>,
}

impl BoundedVariety {
    pub fn to_json(&self, g: &CommutationGraph) -> serde_json::Value {
        serde_json::to_value(VarietyJson {
            vars: self.vars.iter().map(|v| format!("?{v}")).collect(),
            radius: self.radius,
            count: self.solutions.len(),
            solutions: self.solutions.iter().map(|s| s.iter().map(|w| trace::format_word(g, w)).collect()).collect(),
        })
        .expect("serializable")
    }
}

fn guard(domains: &[&[Word]], max_checks: u64) -> Result<()> {
    let mut total: u128 = 1;
    for d in domains {
        total = total.saturating_mul(d.len() as u128);
    }
    if total > max_checks as u128 {
        return Err(Error::Guard(format!("{total} assignments exceed the limit of {max_checks}")));
    }
    Ok(())
}

/// Calls `visit` on every tuple whose first coordinate is `first`, in
/// lexicographic order, stopping when it returns true.
fn sweep<'a>(domains: &[&'a [Word]], first: &'a Word, mut visit: impl FnMut(&[&'a Word]) -> bool) {
    let rest = &domains[1..];
    if rest.iter().any(|d| d.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; rest.len()];
    let mut tuple: Vec<&Word> = Vec::with_capacity(domains.len());
    loop {
        tuple.clear();
        tuple.push(first);
        tuple.extend(idx.iter().zip(rest).map(|(&i, d)| &d[i]));
        if visit(&tuple) {
            return;
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < rest[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn all_solutions(c: &Compiled, domains: &[&[Word]]) -> Vec<Vec<Word>> {
    if domains.is_empty() {
        return if c.holds(&[]) { vec![Vec::new()] } else { Vec::new() };
    }
    domains[0]
        .par_iter()
        .map(|first| {
            let mut found = Vec::new();
            sweep(domains, first, |t| {
                if c.holds(t) {
                    found.push(t.iter().map(|w| (*w).clone()).collect());
                }
                false
            });
            found
        })
        .collect::<Vec<Vec<Vec<Word>>>>()
        .into_iter()
        .flatten()
        .collect()
}

fn first_solution(c: &Compiled, domains: &[&[Word]]) -> Option<Vec<Word>> {
    if domains.is_empty() {
        return c.holds(&[]).then(Vec::new);
    }
    domains[0].par_iter().find_map_first(|first| {
        let mut found = None;
        sweep(domains, first, |t| {
            if c.holds(t) {
                found = Some(t.iter().map(|w| (*w).clone()).collect());
                true
            } else {
                false
            }
        });
        found
    })
}

pub fn solve_bounded(g: &CommutationGraph, sys: &LiteralSystem, radius: usize, max_checks: u64) -> Result<BoundedVariety> {
    let ball = trace::enumerate_geodesics(g, radius);
    let domains: Vec<&[Word]> = vec![&ball[..]; sys.vars.len()];
    guard(&domains, max_checks)?;
    let c = Compiled::new(g, sys)?;
    Ok(BoundedVariety { vars: sys.vars.clone(), radius, solutions: all_solutions(&c, &domains) })
}

/// `None` when both systems have the same solutions in the ball, otherwise
/// the first tuple on which they disagree.
pub fn verify_variety_eq(
    g: &CommutationGraph,
    s1: &LiteralSystem,
    s2: &LiteralSystem,
    radius: usize,
    max_checks: u64,
) -> Result<Option<Vec<Word>>> {
    let mut a = s1.vars.clone();
    let mut b = s2.vars.clone();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::invalid("the systems have different variables"));
    }
    let s2 = LiteralSystem { vars: s1.vars.clone(), literals: s2.literals.clone() };
    let ball = trace::enumerate_geodesics(g, radius);
    let domains: Vec<&[Word]> = vec![&ball[..]; s1.vars.len()];
    guard(&domains, max_checks)?;
    let c1 = Compiled::new(g, s1)?;
    let c2 = Compiled::new(g, &s2)?;
    if domains.is_empty() {
        return Ok((c1.holds(&[]) != c2.holds(&[])).then(Vec::new));
    }
    Ok(domains[0].par_iter().find_map_first(|first| {
        let mut found = None;
        sweep(&domains, first, |t| {
            if c1.holds(t) != c2.holds(t) {
                found = Some(t.iter().map(|w| (*w).clone()).collect());
                true
            } else {
                false
            }
        });
        found
    }))
}

/// First solution in canonical order, each variable ranging over its own
/// subdomain when one is given and over the ball otherwise.
pub fn search_assignment(
    g: &CommutationGraph,
    sys: &LiteralSystem,
    radius: usize,
    constraint: &[Option<Vec<Word>>],
    max_checks: u64,
) -> Result<Option<Vec<Word>>> {
    let ball = trace::enumerate_geodesics(g, radius);
    let subs: Vec<Option<Vec<Word>>> = (0..sys.vars.len())
        .map(|i| {
            constraint.get(i).cloned().flatten().map(|d| {
                let mut n: Vec<Word> = d.iter().map(|w| trace::normalize(g, w)).collect();
                n.sort();
                n.dedup();
                n
            })
        })
        .collect();
    let domains: Vec<&[Word]> = subs.iter().map(|s| s.as_deref().unwrap_or(&ball[..])).collect();
    guard(&domains, max_checks)?;
    let c = Compiled::new(g, sys)?;
    Ok(first_solution(&c, &domains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::trace::parse_word;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    fn lits(fs: &[&str]) -> LiteralSystem {
        let fs: Vec<Formula> = fs.iter().map(|s| parse_formula(s).unwrap()).collect();
        LiteralSystem::from_formulas(&fs, None).unwrap()
    }

    #[test]
    fn commuting_with_a() {
        let g = g1();
        let v = solve_bounded(&g, &lits(&["(= (comm ?x a) 1)"]), 1, DEFAULT_MAX_CHECKS).unwrap();
        let expect: Vec<Vec<Word>> =
            ["1", "a", "a^-1", "b", "b^-1"].iter().map(|s| vec![parse_word(&g, s).unwrap()]).collect();
        assert_eq!(v.solutions, expect);
        let v = solve_bounded(&g, &lits(&["(= ?x 1)"]), 2, DEFAULT_MAX_CHECKS).unwrap();
        assert_eq!(v.solutions, vec![vec![Word::empty()]]);
        let v = solve_bounded(&g, &lits(&["(= a 1)"]), 2, DEFAULT_MAX_CHECKS).unwrap();
        assert!(v.solutions.is_empty());
    }

    #[test]
    fn variety_comparison() {
        let g = g1();
        assert_eq!(verify_variety_eq(&g, &lits(&["(= ?x 1)"]), &lits(&["(= (pow ?x 2) 1)"]), 2, DEFAULT_MAX_CHECKS).unwrap(), None);
        let cex = verify_variety_eq(&g, &lits(&["(= ?x 1)"]), &lits(&["(= ?x a)"]), 1, DEFAULT_MAX_CHECKS).unwrap();
        assert_eq!(cex, Some(vec![Word::empty()]));
    }

    #[test]
    fn search() {
        let g = g1();
        let s = lits(&["(= (comm ?x c) 1)", "(!= ?x 1)"]);
        let r = search_assignment(&g, &s, 2, &[], DEFAULT_MAX_CHECKS).unwrap();
        assert_eq!(r, Some(vec![parse_word(&g, "c").unwrap()]));
        let r = search_assignment(&g, &s, 2, &[Some(vec![parse_word(&g, "a").unwrap()])], DEFAULT_MAX_CHECKS).unwrap();
        assert_eq!(r, None);
        assert!(matches!(solve_bounded(&g, &lits(&["(= (* ?x ?y ?z ?w) 1)"]), 3, 1000), Err(Error::Guard(_))));
    }
}
