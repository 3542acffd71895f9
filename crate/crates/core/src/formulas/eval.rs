//! Tarski evaluation over finite quantifier ranges.

use super::{Formula, Term};
use crate::error::{Error, Result};
use crate::graph::CommutationGraph;
use crate::trace::{self, Letter, Word};

/// A structure in the group language: elements, constants, operations, and
/// the finite range quantifiers sweep.
pub trait Model: Sync {
    type Elem: Clone + PartialEq + Send + Sync + std::fmt::Debug;

    fn domain(&self) -> &[Self::Elem];
    fn identity(&self) -> Self::Elem;
    fn generator(&self, name: &str) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn pair(&self, _left: &Term, _right: &Term) -> Result<Self::Elem> {
        Err(Error::invalid("pair constants need a product structure"))
    }
}

/// Variable assignment; later bindings shadow earlier ones.
#[derive(Clone, Debug)]
pub struct Env<E> {
    binds: Vec<(String, E)>,
}

impl<E: Clone> Default for Env<E> {
    fn default() -> Self {
        Env { binds: Vec::new() }
    }
}

impl<E: Clone> Env<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, E)>>(it: I) -> Self {
        Env { binds: it.into_iter().collect() }
    }

    pub fn get(&self, v: &str) -> Option<&E> {
        self.binds.iter().rev().find(|(n, _)| n == v).map(|(_, e)| e)
    }

    pub fn push(&mut self, v: &str, e: E) {
        self.binds.push((v.to_string(), e));
    }

    pub fn pop(&mut self) {
        self.binds.pop();
    }

    pub fn set_last(&mut self, e: E) {
        self.binds.last_mut().expect("empty environment").1 = e;
    }
}

/// Ball of geodesics in a partially commutative group, elements kept reduced.
#[derive(Clone, Debug)]
pub struct BallStructure {
    pub graph: CommutationGraph,
    pub domain: Vec<Word>,
}

impl BallStructure {
    pub fn ball(graph: &CommutationGraph, radius: usize) -> Self {
        BallStructure { graph: graph.clone(), domain: trace::enumerate_geodesics(graph, radius) }
    }

    /// Explicit domain; it must contain 1 and be closed under inverses.
    pub fn with_domain(graph: &CommutationGraph, domain: Vec<Word>) -> Result<Self> {
        let norm: Vec<Word> = domain.iter().map(|w| trace::normalize(graph, w)).collect();
        if !norm.iter().any(Word::is_empty) {
            return Err(Error::invalid("domain must contain the identity"));
        }
        for w in &norm {
            let i = trace::normalize(graph, &w.inverse());
            if !norm.contains(&i) {
                return Err(Error::invalid("domain must be closed under inverses"));
            }
        }
        Ok(BallStructure { graph: graph.clone(), domain: norm })
    }
}

impl Model for BallStructure {
    type Elem = Word;

    fn domain(&self) -> &[Word] {
        &self.domain
    }

    fn identity(&self) -> Word {
        Word::empty()
    }

    fn generator(&self, name: &str) -> Result<Word> {
        let i = self.graph.index_of(name).ok_or_else(|| Error::invalid(format!("undeclared generator `{name}`")))?;
        Ok(Word::letter(Letter::pos(i)))
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        trace::reduce(&self.graph, &a.concat(b))
    }

    fn inv(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn same(&self, a: &Word, b: &Word) -> bool {
        a == b || trace::equals(&self.graph, a, b)
    }
}

/// Direct product; a bare constant names a generator of whichever factor has it.
pub struct ProductModel<'a, A: Model, B: Model> {
    pub left: &'a A,
    pub right: &'a B,
    domain: Vec<(A::Elem, B::Elem)>,
}

impl<'a, A: Model, B: Model> ProductModel<'a, A, B> {
    pub fn new(left: &'a A, right: &'a B) -> Self {
        let mut domain = Vec::with_capacity(left.domain().len() * right.domain().len());
        for x in left.domain() {
            for y in right.domain() {
                domain.push((x.clone(), y.clone()));
            }
        }
        ProductModel { left, right, domain }
    }
}

impl<'a, A: Model, B: Model> Model for ProductModel<'a, A, B> {
    type Elem = (A::Elem, B::Elem);

    fn domain(&self) -> &[Self::Elem] {
        &self.domain
    }

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }

    fn generator(&self, name: &str) -> Result<Self::Elem> {
        match (self.left.generator(name), self.right.generator(name)) {
            (Ok(_), Ok(_)) => Err(Error::invalid(format!("constant `{name}` is ambiguous in the product; use (pair ...)"))),
            (Ok(x), Err(_)) => Ok((x, self.right.identity())),
            (Err(_), Ok(y)) => Ok((self.left.identity(), y)),
            (Err(e), Err(_)) => Err(e),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }

    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.left.same(&a.0, &b.0) && self.right.same(&a.1, &b.1)
    }

    fn pair(&self, l: &Term, r: &Term) -> Result<Self::Elem> {
        let x = eval_term(self.left, l, &Env::new())?;
        let y = eval_term(self.right, r, &Env::new())?;
        Ok((x, y))
    }
}

pub fn power<M: Model>(m: &M, x: &M::Elem, k: i64) -> M::Elem {
    let mut base = if k < 0 { m.inv(x) } else { x.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = m.identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = m.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = m.mul(&base, &base);
        }
    }
    acc
}

pub fn eval_term<M: Model>(m: &M, t: &Term, env: &Env<M::Elem>) -> Result<M::Elem> {
    Ok(match t {
        Term::One => m.identity(),
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| Error::invalid(format!("unbound variable ?{v}")))?,
        Term::Gen(g) => m.generator(g)?,
        Term::Mul(ts) => {
            let mut acc = m.identity();
            for s in ts {
                acc = m.mul(&acc, &eval_term(m, s, env)?);
            }
            acc
        }
        Term::Inv(s) => m.inv(&eval_term(m, s, env)?),
        Term::Pow(s, k) => power(m, &eval_term(m, s, env)?, *k),
        Term::Pair(l, r) => m.pair(l, r)?,
    })
}

pub fn eval_formula<M: Model>(m: &M, f: &Formula, env: &Env<M::Elem>) -> Result<bool> {
    let mut env = env.clone();
    eval_in(m, f, &mut env)
}

fn eval_in<M: Model>(m: &M, f: &Formula, env: &mut Env<M::Elem>) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(t, u) => m.same(&eval_term(m, t, env)?, &eval_term(m, u, env)?),
        Formula::Neq(t, u) => !m.same(&eval_term(m, t, env)?, &eval_term(m, u, env)?),
        Formula::Not(g) => !eval_in(m, g, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_in(m, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_in(m, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_in(m, a, env)? || eval_in(m, b, env)?,
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let want = matches!(f, Formula::Exists(..));
            env.push(v, m.identity());
            let mut res = !want;
            for x in m.domain() {
                env.set_last(x.clone());
                match eval_in(m, g, env) {
                    Ok(b) if b == want => {
                        res = want;
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        env.pop();
                        return Err(e);
                    }
                }
            }
            env.pop();
            res
        }
    })
}

/// Tarski evaluation over a ball structure.
pub fn eval_ball(s: &BallStructure, f: &Formula, env: &Env<Word>) -> Result<bool> {
    eval_formula(s, f, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    #[test]
    fn ball_examples() {
        let s = BallStructure::ball(&g1(), 1);
        let f = parse_formula("(exists x (and (= (comm x a) 1) (not (= x 1))))").unwrap();
        assert!(eval_ball(&s, &f, &Env::new()).unwrap());
        assert!(eval_ball(&s, &parse_formula("(forall x (= x x))").unwrap(), &Env::new()).unwrap());
        let far = parse_formula("(exists x (= x (* c a c a c)))").unwrap();
        assert!(!eval_ball(&s, &far, &Env::new()).unwrap());
        assert!(eval_ball(&s, &parse_formula("(= ?y 1)").unwrap(), &Env::new()).is_err());
    }

    #[test]
    fn product_constants() {
        let g = g1();
        let f2 = CommutationGraph::parse("gens: p q\n").unwrap();
        let l = BallStructure::ball(&g, 1);
        let r = BallStructure::ball(&f2, 1);
        let m = ProductModel::new(&l, &r);
        assert_eq!(m.domain().len(), 7 * 5);
        let f = parse_formula("(exists x (= x (pair a q)))").unwrap();
        assert!(eval_formula(&m, &f, &Env::new()).unwrap());
        let f = parse_formula("(= (* a q) (* q a))").unwrap();
        assert!(eval_formula(&m, &f, &Env::new()).unwrap());
        let amb = ProductModel::new(&l, &l);
        assert!(eval_formula(&amb, &parse_formula("(= a 1)").unwrap(), &Env::new()).is_err());
    }
}
