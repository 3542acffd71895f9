//! Folding systems of equations and inequations into single atoms, and the
//! quantifier-free and prenex positive normal forms built on top.

use super::{Formula, FreshNames, Term};
use crate::error::{Error, Result};
use crate::graph::CommutationGraph;
use crate::trace::Word;

/// Constants driving the encoders: a non-commuting pair with cyclic
/// centralisers and the conjugation exponent of the domain system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingWitness {
    pub a: Term,
    pub b: Term,
    pub exponent: i64,
    /// Node-count ceiling for encoded terms.
    pub max_size: usize,
}

impl EncodingWitness {
    pub const DEFAULT_MAX_SIZE: usize = 1 << 22;

    pub fn new(a: Term, b: Term, exponent: i64) -> Self {
        EncodingWitness { a, b, exponent, max_size: Self::DEFAULT_MAX_SIZE }
    }

    pub fn from_words(g: &CommutationGraph, a: &Word, b: &Word, exponent: i64) -> Self {
        Self::new(Term::from_word(g, a), Term::from_word(g, b), exponent)
    }

    /// ab(ba)⁻¹, nontrivial whenever the witnesses do not commute.
    pub fn padding_term(&self) -> Term {
        Term::Mul(vec![self.a.clone(), self.b.clone(), Term::inv(self.a.clone()), Term::inv(self.b.clone())])
    }

    fn guard(&self, t: Term) -> Result<Term> {
        let n = t.size();
        if n > self.max_size {
            return Err(Error::Guard(format!("encoded term has {n} nodes, limit {}", self.max_size)));
        }
        Ok(t)
    }
}

/// The term `t u⁻¹` (or the nontrivial side alone) whose triviality the atom states.
pub fn atom_term(t: &Term, u: &Term) -> Term {
    match (t, u) {
        (_, Term::One) => t.clone(),
        (Term::One, _) => u.clone(),
        _ => Term::Mul(vec![t.clone(), Term::inv(u.clone())]),
    }
}

fn equation_terms(eqs: &[Formula]) -> Result<Vec<Term>> {
    eqs.iter()
        .map(|f| match f {
            Formula::Eq(t, u) => Ok(atom_term(t, u)),
            other => Err(Error::invalid(format!("expected an equation, found {other}"))),
        })
        .collect()
}

fn inequation_terms(ineqs: &[Formula]) -> Result<Vec<Term>> {
    ineqs
        .iter()
        .map(|f| match f {
            Formula::Neq(t, u) => Ok(atom_term(t, u)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(t, u) => Ok(atom_term(t, u)),
                other => Err(Error::invalid(format!("expected an inequation, found (not {other})"))),
            },
            other => Err(Error::invalid(format!("expected an inequation, found {other}"))),
        })
        .collect()
}

/// S₁² a S₁² a⁻¹ (S₂ b S₂ b⁻¹)⁻²
fn pair_conj(s1: Term, s2: Term, a: &Term, b: &Term) -> Term {
    let sq = Term::pow(s1, 2);
    let tail = Term::Mul(vec![s2.clone(), b.clone(), s2, Term::inv(b.clone())]);
    Term::Mul(vec![sq.clone(), a.clone(), sq, Term::inv(a.clone()), Term::pow(tail, -2)])
}

/// Left fold of the two-equation combinator over `S_i = 1`.
pub fn encode_conj_terms(eqs: &[Term], a: &Term, b: &Term, max_size: usize) -> Result<Term> {
    let (first, rest) = eqs.split_first().ok_or_else(|| Error::invalid("empty list of equations"))?;
    let mut acc = first.clone();
    for s in rest {
        acc = pair_conj(acc, s.clone(), a, b);
        if acc.size() > max_size {
            return Err(Error::Guard(format!("encoded term exceeds {max_size} nodes")));
        }
    }
    Ok(acc)
}

/// One equation with the same solutions as the conjunction in every group
/// where `a`, `b` satisfy the witness axioms.
pub fn encode_conj(eqs: &[Formula], a: &Term, b: &Term) -> Result<Formula> {
    let ts = equation_terms(eqs)?;
    if ts.len() == 1 {
        return Ok(eqs[0].clone());
    }
    Ok(Formula::Eq(encode_conj_terms(&ts, a, b, EncodingWitness::DEFAULT_MAX_SIZE)?, Term::One))
}

/// [x,y], [x, gyg⁻¹] for g = a^N and g = b^N.
pub fn domain_system_terms(x: &Term, y: &Term, w: &EncodingWitness) -> [Term; 3] {
    let conj_by = |c: &Term| Term::Mul(vec![Term::pow(c.clone(), w.exponent), y.clone(), Term::pow(c.clone(), -w.exponent)]);
    [
        Term::comm(x.clone(), y.clone()),
        Term::comm(x.clone(), conj_by(&w.a)),
        Term::comm(x.clone(), conj_by(&w.b)),
    ]
}

/// The three-commutator system in `?x`, `?y` whose solutions in a domain
/// have x = 1 or y = 1.
pub fn domain_system(w: &EncodingWitness) -> Vec<Formula> {
    domain_system_terms(&Term::var("x"), &Term::var("y"), w)
        .into_iter()
        .map(|t| Formula::Eq(t, Term::One))
        .collect()
}

pub fn encode_disj_terms(eqs: &[Term], w: &EncodingWitness) -> Result<Term> {
    let (first, rest) = eqs.split_first().ok_or_else(|| Error::invalid("empty list of equations"))?;
    let mut acc = first.clone();
    for s in rest {
        let sys = domain_system_terms(&acc, s, w);
        acc = w.guard(encode_conj_terms(&sys, &w.a, &w.b, w.max_size)?)?;
    }
    Ok(acc)
}

/// One equation with the same solutions as the disjunction in every domain
/// where the witness is valid.
pub fn encode_disj(eqs: &[Formula], w: &EncodingWitness) -> Result<Formula> {
    let ts = equation_terms(eqs)?;
    if ts.len() == 1 {
        return Ok(eqs[0].clone());
    }
    Ok(Formula::Eq(encode_disj_terms(&ts, w)?, Term::One))
}

/// ⋀ S_i ≠ 1 as R ≠ 1, R encoding the disjunction of the S_i = 1.
pub fn encode_ineq_conj(ineqs: &[Formula], w: &EncodingWitness) -> Result<Formula> {
    let ts = inequation_terms(ineqs)?;
    if ts.len() == 1 {
        return Ok(ineqs[0].clone());
    }
    Ok(Formula::Neq(encode_disj_terms(&ts, w)?, Term::One))
}

/// ⋁ S_i ≠ 1 as T ≠ 1, T encoding the conjunction of the S_i = 1.
pub fn encode_ineq_disj(ineqs: &[Formula], w: &EncodingWitness) -> Result<Formula> {
    let ts = inequation_terms(ineqs)?;
    if ts.len() == 1 {
        return Ok(ineqs[0].clone());
    }
    Ok(Formula::Neq(encode_conj_terms(&ts, &w.a, &w.b, w.max_size)?, Term::One))
}

/// ⋁_i (S_i = 1 ∧ T_i ≠ 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QfNormalForm {
    pub disjuncts: Vec<(Term, Term)>,
}

impl QfNormalForm {
    pub fn to_formula(&self) -> Formula {
        Formula::Or(
            self.disjuncts
                .iter()
                .map(|(s, t)| Formula::And(vec![Formula::Eq(s.clone(), Term::One), Formula::Neq(t.clone(), Term::One)]))
                .collect(),
        )
    }
}

type Literal = (Term, bool);

const MAX_DNF: usize = 4096;

fn cross(parts: Vec<Vec<Vec<Literal>>>) -> Result<Vec<Vec<Literal>>> {
    let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
    for p in parts {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for a in &acc {
            for c in &p {
                let mut m = a.clone();
                for lit in c {
                    if !m.contains(lit) {
                        m.push(lit.clone());
                    }
                }
                next.push(m);
            }
        }
        if next.len() > MAX_DNF {
            return Err(Error::Guard(format!("disjunctive normal form exceeds {MAX_DNF} disjuncts")));
        }
        acc = next;
    }
    Ok(acc)
}

fn union(parts: Vec<Vec<Vec<Literal>>>) -> Result<Vec<Vec<Literal>>> {
    let out: Vec<Vec<Literal>> = parts.into_iter().flatten().collect();
    if out.len() > MAX_DNF {
        return Err(Error::Guard(format!("disjunctive normal form exceeds {MAX_DNF} disjuncts")));
    }
    Ok(out)
}

/// Disjunctive normal form of `f` (negated when `neg`) as lists of literals
/// `(S, positive)` meaning S = 1 or S ≠ 1.
fn dnf(f: &Formula, neg: bool) -> Result<Vec<Vec<Literal>>> {
    match f {
        Formula::True => Ok(if neg { vec![] } else { vec![vec![]] }),
        Formula::False => Ok(if neg { vec![vec![]] } else { vec![] }),
        Formula::Eq(t, u) => Ok(vec![vec![(atom_term(t, u), !neg)]]),
        Formula::Neq(t, u) => Ok(vec![vec![(atom_term(t, u), neg)]]),
        Formula::Not(g) => dnf(g, !neg),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| dnf(g, neg)).collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::And(_)) != neg {
                cross(parts)
            } else {
                union(parts)
            }
        }
        Formula::Implies(a, b) => {
            let parts = vec![dnf(a, !neg)?, dnf(b, neg)?];
            if neg {
                cross(parts)
            } else {
                union(parts)
            }
        }
        Formula::Forall(..) | Formula::Exists(..) => Err(Error::invalid("quantifiers present in a quantifier-free context")),
    }
}

/// ⋁(S_i = 1 ∧ T_i ≠ 1) with the same solutions as φ in every domain where
/// the witness is valid.
pub fn qf_normal_form(phi: &Formula, w: &EncodingWitness) -> Result<QfNormalForm> {
    if !phi.is_quantifier_free() {
        return Err(Error::invalid("quantifiers present in a quantifier-free context"));
    }
    let mut disjuncts = Vec::new();
    for conj in dnf(phi, false)? {
        let eqs: Vec<Term> = conj.iter().filter(|l| l.1).map(|l| l.0.clone()).collect();
        let neqs: Vec<Term> = conj.iter().filter(|l| !l.1).map(|l| l.0.clone()).collect();
        let s = if eqs.is_empty() { Term::One } else { encode_conj_terms(&eqs, &w.a, &w.b, w.max_size)? };
        let t = if neqs.is_empty() { w.padding_term() } else { encode_disj_terms(&neqs, w)? };
        let pair = (s, t);
        if !disjuncts.contains(&pair) {
            disjuncts.push(pair);
        }
    }
    Ok(QfNormalForm { disjuncts })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quant {
    All,
    Ex,
}

/// Renames bound variables so that every quantifier binds a distinct name
/// that is also distinct from the free variables.
fn rename_apart(f: &Formula, fresh: &mut FreshNames, seen: &mut std::collections::BTreeSet<String>) -> Formula {
    match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let (name, body) = if seen.contains(v) {
                let nv = fresh.fresh(v);
                (nv.clone(), body.rename_free(v, &nv, fresh))
            } else {
                (v.clone(), body.as_ref().clone())
            };
            seen.insert(name.clone());
            let inner = Box::new(rename_apart(&body, fresh, seen));
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(name, inner)
            } else {
                Formula::Exists(name, inner)
            }
        }
        Formula::And(fs) => Formula::And(fs.iter().map(|g| rename_apart(g, fresh, seen)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| rename_apart(g, fresh, seen)).collect()),
        Formula::Not(g) => Formula::not(rename_apart(g, fresh, seen)),
        Formula::Implies(a, b) => {
            let a = rename_apart(a, fresh, seen);
            Formula::implies(a, rename_apart(b, fresh, seen))
        }
        _ => f.clone(),
    }
}

fn pull(f: &Formula) -> (Vec<(Quant, String)>, Formula) {
    match f {
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let q = if matches!(f, Formula::Forall(..)) { Quant::All } else { Quant::Ex };
            let (mut pre, m) = pull(b);
            pre.insert(0, (q, v.clone()));
            (pre, m)
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let mut pre = Vec::new();
            let mut ms = Vec::new();
            for g in fs {
                let (p, m) = pull(g);
                pre.extend(p);
                ms.push(m);
            }
            let m = if matches!(f, Formula::And(_)) { Formula::And(ms) } else { Formula::Or(ms) };
            (pre, m)
        }
        _ => (Vec::new(), f.clone()),
    }
}

/// Prenex form ∀x₁∃y₁…∀x_k∃y_k (S = 1) of a positive formula, inserting
/// dummy quantifiers where the prefix does not alternate.
pub fn prenex_positive(phi: &Formula, w: &EncodingWitness) -> Result<Formula> {
    if !phi.is_positive() {
        return Err(Error::invalid("formula is not positive"));
    }
    let mut fresh = FreshNames::new(phi.all_vars());
    let mut seen = phi.free_vars();
    let renamed = rename_apart(phi, &mut fresh, &mut seen);
    let (prefix, matrix) = pull(&renamed);

    let matrix = match matrix {
        Formula::Eq(..) => matrix,
        m => {
            let mut terms = Vec::new();
            for conj in dnf(&m, false)? {
                let ts: Vec<Term> = conj.into_iter().map(|l| l.0).collect();
                let t = if ts.is_empty() { Term::One } else { encode_conj_terms(&ts, &w.a, &w.b, w.max_size)? };
                if !terms.contains(&t) {
                    terms.push(t);
                }
            }
            let s = if terms.is_empty() { w.padding_term() } else { encode_disj_terms(&terms, w)? };
            Formula::Eq(s, Term::One)
        }
    };

    let mut shaped: Vec<(Quant, String)> = Vec::new();
    let mut expect = Quant::All;
    for (q, v) in prefix {
        if q != expect {
            let d = fresh.fresh(if expect == Quant::All { "x" } else { "y" });
            shaped.push((expect, d));
        }
        shaped.push((q, v));
        expect = if q == Quant::All { Quant::Ex } else { Quant::All };
    }
    if expect == Quant::Ex {
        shaped.push((Quant::Ex, fresh.fresh("y")));
    }
    Ok(shaped.into_iter().rev().fold(matrix, |body, (q, v)| match q {
        Quant::All => Formula::Forall(v, Box::new(body)),
        Quant::Ex => Formula::Exists(v, Box::new(body)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn wit() -> EncodingWitness {
        EncodingWitness::new(Term::gen("a"), Term::gen("b"), 10)
    }

    #[test]
    fn malcev_shape() {
        let eqs = [parse_formula("(= ?x 1)").unwrap(), parse_formula("(= ?y 1)").unwrap()];
        let f = encode_conj(&eqs, &Term::gen("a"), &Term::gen("b")).unwrap();
        let expect = parse_formula(
            "(= (* (pow ?x 2) a (pow ?x 2) (inv a) (pow (* ?y b ?y (inv b)) -2)) 1)",
        )
        .unwrap();
        assert_eq!(f, expect);
        assert_eq!(encode_conj(&eqs[..1], &Term::gen("a"), &Term::gen("b")).unwrap(), eqs[0]);
        assert!(encode_conj(&[], &Term::gen("a"), &Term::gen("b")).is_err());
    }

    #[test]
    fn domain_system_prints_and_parses() {
        for f in domain_system(&wit()) {
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
        let mut w0 = wit();
        w0.exponent = 0;
        assert_eq!(domain_system(&w0).len(), 3);
    }

    #[test]
    fn qf_shapes() {
        let w = wit();
        let nf = qf_normal_form(&parse_formula("(or (= ?x 1) (!= ?y 1))").unwrap(), &w).unwrap();
        assert_eq!(nf.disjuncts.len(), 2);
        assert_eq!(nf.disjuncts[0], (Term::var("x"), w.padding_term()));
        assert_eq!(nf.disjuncts[1], (Term::One, Term::var("y")));
        let nf = qf_normal_form(&parse_formula("(and (= ?x 1) (= ?y 1))").unwrap(), &w).unwrap();
        assert_eq!(nf.disjuncts.len(), 1);
        assert!(qf_normal_form(&parse_formula("(exists x (= x 1))").unwrap(), &w).is_err());
    }

    #[test]
    fn prenex_shapes() {
        let w = wit();
        let f = prenex_positive(&parse_formula("(exists y (= (comm ?y a) 1))").unwrap(), &w).unwrap();
        assert_eq!(f, parse_formula("(forall x0 (exists y (= (comm y a) 1)))").unwrap());
        let f = prenex_positive(&parse_formula("(forall x (and (= x 1) (= x x)))").unwrap(), &w).unwrap();
        match &f {
            Formula::Forall(x, body) => {
                assert_eq!(x, "x");
                assert!(matches!(body.as_ref(), Formula::Exists(y, _) if y == "y0"));
            }
            other => panic!("{other}"),
        }
        let shaped = parse_formula("(forall x (exists y (= (* x y) 1)))").unwrap();
        assert_eq!(prenex_positive(&shaped, &w).unwrap(), shaped);
        assert!(prenex_positive(&parse_formula("(not (= a 1))").unwrap(), &w).is_err());
    }

    #[test]
    fn prenex_renames_clashes() {
        let w = wit();
        let f = parse_formula("(or (exists x (= x a)) (exists x (= x b)))").unwrap();
        let p = prenex_positive(&f, &w).unwrap();
        let mut bound = Vec::new();
        p.visit(&mut |g| {
            if let Formula::Forall(v, _) | Formula::Exists(v, _) = g {
                bound.push(v.clone());
            }
        });
        let mut dedup = bound.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), bound.len());
    }
}
