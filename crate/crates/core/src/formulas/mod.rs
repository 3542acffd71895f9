//! First-order formulas over the group language with constants.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::graph::CommutationGraph;
use crate::trace::Word;

pub mod axioms;
pub mod code;
pub mod encode;
pub mod eval;
mod sexpr;

pub use axioms::{check_axioms, AxiomReport, AxiomResult};
pub use code::{translate_code, GroupCode};
pub use encode::{
    domain_system, encode_conj, encode_disj, encode_ineq_conj, encode_ineq_disj, prenex_positive, qf_normal_form,
    EncodingWitness, QfNormalForm,
};
pub use eval::{eval_ball, eval_formula, eval_term, BallStructure, Env, Model, ProductModel};
pub use sexpr::{parse_formula, parse_term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    One,
    Var(String),
    /// A generator constant, resolved against a graph at evaluation time.
    Gen(String),
    Mul(Vec<Term>),
    Inv(Box<Term>),
    Pow(Box<Term>, i64),
    /// A constant of a direct product, one component per factor.
    Pair(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Neq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn gen(name: &str) -> Term {
        Term::Gen(name.to_string())
    }

    pub fn inv(t: Term) -> Term {
        Term::Inv(Box::new(t))
    }

    pub fn pow(t: Term, k: i64) -> Term {
        Term::Pow(Box::new(t), k)
    }

    pub fn pair(l: Term, r: Term) -> Term {
        Term::Pair(Box::new(l), Box::new(r))
    }

    /// t⁻¹u⁻¹tu
    pub fn comm(t: Term, u: Term) -> Term {
        Term::Mul(vec![Term::inv(t.clone()), Term::inv(u.clone()), t, u])
    }

    /// u⁻¹tu
    pub fn conj(t: Term, u: Term) -> Term {
        Term::Mul(vec![Term::inv(u.clone()), t, u])
    }

    /// Constant term spelling out a word, runs collapsed into powers.
    pub fn from_word(g: &CommutationGraph, w: &Word) -> Term {
        let ls = w.letters();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let run = (j - i) as i64 * ls[i].sign() as i64;
            let base = Term::gen(g.name(ls[i].gen()));
            parts.push(if run == 1 { base } else { Term::pow(base, run) });
            i = j;
        }
        match parts.len() {
            0 => Term::One,
            1 => parts.pop().unwrap(),
            _ => Term::Mul(parts),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::One | Term::Gen(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Mul(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Term::Inv(t) | Term::Pow(t, _) => t.collect_vars(out),
            Term::Pair(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, map: &HashMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::One | Term::Gen(_) => self.clone(),
            Term::Mul(ts) => Term::Mul(ts.iter().map(|t| t.substitute(map)).collect()),
            Term::Inv(t) => Term::inv(t.substitute(map)),
            Term::Pow(t, k) => Term::pow(t.substitute(map), *k),
            Term::Pair(l, r) => Term::pair(l.substitute(map), r.substitute(map)),
        }
    }

    /// Node count, each power counted once.
    pub fn size(&self) -> usize {
        match self {
            Term::One | Term::Var(_) | Term::Gen(_) => 1,
            Term::Mul(ts) => 1 + ts.iter().map(Term::size).sum::<usize>(),
            Term::Inv(t) | Term::Pow(t, _) => 1 + t.size(),
            Term::Pair(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl Formula {
    pub fn eq(t: Term, u: Term) -> Formula {
        Formula::Eq(t, u)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// Conjunction with constants folded, nested conjunctions flattened and
    /// duplicates dropped; the empty conjunction is ⊤.
    pub fn and_all(parts: Vec<Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction counterpart of `and_all`; the empty disjunction is ⊥.
    pub fn or_all(parts: Vec<Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// Negation with constants folded and atoms flipped.
    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Eq(t, u) => Formula::Neq(t, u),
            Formula::Neq(t, u) => Formula::Eq(t, u),
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |t: &Term, bound: &Vec<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(t, u) | Formula::Neq(t, u) => {
                add(t, bound);
                add(u, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(t, u) | Formula::Neq(t, u) => {
                t.collect_vars(&mut out);
                u.collect_vars(&mut out);
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// No ¬, →, or ≠ anywhere.
    pub fn is_positive(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Not(_) | Formula::Implies(..) | Formula::Neq(..)) {
                ok = false;
            }
        });
        ok
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Forall(..) | Formula::Exists(..)) {
                ok = false;
            }
        });
        ok
    }

    /// Height of the connective/quantifier tree; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Neq(..) => 0,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.depth(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Neq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
        }
    }

    /// Capture-avoiding substitution of terms for free variables.
    pub fn substitute(&self, map: &HashMap<String, Term>, fresh: &mut FreshNames) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(t, u) => Formula::Eq(t.substitute(map), u.substitute(map)),
            Formula::Neq(t, u) => Formula::Neq(t.substitute(map), u.substitute(map)),
            Formula::Not(f) => Formula::not(f.substitute(map, fresh)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(map, fresh)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(map, fresh)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map, fresh), b.substitute(map, fresh)),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let mut inner: HashMap<String, Term> = map.clone();
                inner.remove(v);
                let captured = inner.values().any(|t| t.vars().contains(v));
                let (name, body) = if captured {
                    let nv = fresh.fresh(v);
                    inner.insert(v.clone(), Term::Var(nv.clone()));
                    (nv, f.substitute(&inner, fresh))
                } else {
                    (v.clone(), f.substitute(&inner, fresh))
                };
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(name, Box::new(body))
                } else {
                    Formula::Exists(name, Box::new(body))
                }
            }
        }
    }

    pub fn rename_free(&self, from: &str, to: &str, fresh: &mut FreshNames) -> Formula {
        let map = HashMap::from([(from.to_string(), Term::var(to))]);
        self.substitute(&map, fresh)
    }
}

/// Generates variable names not used so far.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
}

impl FreshNames {
    pub fn new<I: IntoIterator<Item = String>>(used: I) -> Self {
        FreshNames { used: used.into_iter().collect() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        let mut i = 0usize;
        loop {
            let cand = format!("{stem}{i}");
            if self.used.insert(cand.clone()) {
                return cand;
            }
            i += 1;
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::One => write!(f, "1"),
            Term::Var(v) => write!(f, "?{v}"),
            Term::Gen(g) => write!(f, "{g}"),
            Term::Mul(ts) => {
                write!(f, "(*")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
            Term::Inv(t) => write!(f, "(inv {t})"),
            Term::Pow(t, k) => write!(f, "(pow {t} {k})"),
            Term::Pair(l, r) => write!(f, "(pair {l} {r})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]| -> fmt::Result {
            write!(f, "({head}")?;
            for g in fs {
                write!(f, " {g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq(t, u) => write!(f, "(= {t} {u})"),
            Formula::Neq(t, u) => write!(f, "(!= {t} {u})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Forall(v, g) => write!(f, "(forall ?{v} {g})"),
            Formula::Exists(v, g) => write!(f, "(exists ?{v} {g})"),
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}
