//! Group codes: a group interpreted inside another by four formulas, and the
//! translation of group-language formulas through a code.

use std::collections::HashMap;

use super::{Formula, FreshNames, Term};
use crate::error::{Error, Result};

/// Formulas U(X,P), E(X,Y,P), Mult(X,Y,Z,P), Inv(X,Y,P) over the tuples
/// `x`, `y`, `z` of equal length and the parameters `params`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCode {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub params: Vec<String>,
    pub universe: Formula,
    pub equal: Formula,
    pub mult: Formula,
    pub inv: Formula,
}

fn v(name: &str) -> Term {
    Term::var(name)
}

impl GroupCode {
    pub fn arity(&self) -> usize {
        self.x.len()
    }

    fn unary(params: Vec<String>, universe: Formula, equal: Formula) -> Self {
        GroupCode {
            x: vec!["x".into()],
            y: vec!["y".into()],
            z: vec!["z".into()],
            params,
            universe,
            equal,
            mult: Formula::Eq(Term::Mul(vec![v("x"), v("y")]), v("z")),
            inv: Formula::Eq(Term::inv(v("x")), v("y")),
        }
    }

    /// The group itself.
    pub fn identity() -> Self {
        Self::unary(Vec::new(), Formula::True, Formula::Eq(v("x"), v("y")))
    }

    /// The subgroup defined by `universe`, a formula in `?x` and the parameters.
    pub fn subgroup(universe: Formula, params: Vec<String>) -> Self {
        Self::unary(params, universe, Formula::Eq(v("x"), v("y")))
    }

    /// The quotient by the normal subgroup defined by `normal`, a formula in
    /// the free variable `var` and the parameters.
    pub fn quotient(normal: Formula, var: &str, params: Vec<String>) -> Self {
        let mut fresh = FreshNames::new(normal.all_vars().into_iter().chain(["x", "y", "z"].map(String::from)).chain(params.iter().cloned()));
        let w = fresh.fresh("v");
        let inside = normal.rename_free(var, &w, &mut fresh);
        let equal = Formula::exists(
            &w,
            Formula::And(vec![Formula::Eq(v("x"), Term::Mul(vec![v("y"), v(&w)])), inside]),
        );
        Self::unary(params, Formula::Eq(v("x"), v("x")), equal)
    }

    /// The quotient by the centre, defined by ∀w [v,w] = 1.
    pub fn center_quotient() -> Self {
        let center = Formula::forall("w", Formula::Eq(Term::comm(v("c"), v("w")), Term::One));
        Self::quotient(center, "c", Vec::new())
    }

    fn tuple(&self, var: &str) -> Vec<String> {
        if self.arity() == 1 {
            vec![var.to_string()]
        } else {
            (1..=self.arity()).map(|i| format!("{var}_{i}")).collect()
        }
    }

    fn instantiate(&self, f: &Formula, slots: &[(&Vec<String>, &str)], fresh: &mut FreshNames) -> Formula {
        let mut map = HashMap::new();
        for (formal, actual) in slots {
            for (a, b) in formal.iter().zip(self.tuple(actual)) {
                map.insert(a.clone(), Term::Var(b));
            }
        }
        f.substitute(&map, fresh)
    }
}

enum Prim {
    Equal(String, String),
    Mult(String, String, String),
    Inv(String, String),
}

struct Flattener<'a> {
    fresh: &'a mut FreshNames,
    prims: Vec<Prim>,
    introduced: Vec<String>,
}

impl Flattener<'_> {
    fn new_var(&mut self) -> String {
        let n = self.fresh.fresh("t");
        self.introduced.push(n.clone());
        n
    }

    fn flat(&mut self, t: &Term) -> Result<String> {
        match t {
            Term::Var(x) => Ok(x.clone()),
            Term::One => {
                let e = self.new_var();
                self.prims.push(Prim::Mult(e.clone(), e.clone(), e.clone()));
                Ok(e)
            }
            Term::Gen(g) => Err(Error::invalid(format!("constant `{g}` is not expressible through a code"))),
            Term::Pair(..) => Err(Error::invalid("pair constants are not expressible through a code")),
            Term::Mul(ts) => match ts.as_slice() {
                [] => self.flat(&Term::One),
                [only] => self.flat(only),
                [first, rest @ ..] => {
                    let mut acc = self.flat(first)?;
                    for s in rest {
                        let r = self.flat(s)?;
                        let out = self.new_var();
                        self.prims.push(Prim::Mult(acc, r, out.clone()));
                        acc = out;
                    }
                    Ok(acc)
                }
            },
            Term::Inv(s) => {
                let a = self.flat(s)?;
                let out = self.new_var();
                self.prims.push(Prim::Inv(a, out.clone()));
                Ok(out)
            }
            Term::Pow(s, k) => {
                let base = if *k < 0 { Term::inv(s.as_ref().clone()) } else { s.as_ref().clone() };
                let parts = vec![base; k.unsigned_abs() as usize];
                self.flat(&Term::Mul(parts))
            }
        }
    }
}

fn var_of(t: &Term) -> Option<&str> {
    match t {
        Term::Var(x) => Some(x),
        _ => None,
    }
}

/// An atom t = u as primitive atoms, with the fresh variables to quantify.
fn flatten_atom(t: &Term, u: &Term, fresh: &mut FreshNames) -> Result<(Vec<Prim>, Vec<String>)> {
    // The three primitive shapes pass through untouched.
    let direct = |l: &Term, r: &Term| -> Option<Prim> {
        let z = var_of(r)?;
        match l {
            Term::Var(x) => Some(Prim::Equal(x.clone(), z.to_string())),
            Term::Mul(ts) if ts.len() == 2 => Some(Prim::Mult(var_of(&ts[0])?.into(), var_of(&ts[1])?.into(), z.into())),
            Term::Inv(s) => Some(Prim::Inv(var_of(s)?.into(), z.into())),
            _ => None,
        }
    };
    if let Some(p) = direct(t, u) {
        return Ok((vec![p], Vec::new()));
    }
    if let Some(p) = direct(u, t) {
        let p = match p {
            Prim::Equal(a, b) => Prim::Equal(b, a),
            other => other,
        };
        return Ok((vec![p], Vec::new()));
    }
    let mut fl = Flattener { fresh, prims: Vec::new(), introduced: Vec::new() };
    let a = fl.flat(t)?;
    let b = fl.flat(u)?;
    fl.prims.push(Prim::Equal(a, b));
    Ok((fl.prims, fl.introduced))
}

struct Translator<'a> {
    code: &'a GroupCode,
    fresh: FreshNames,
}

impl Translator<'_> {
    fn prim(&mut self, p: &Prim) -> Formula {
        let c = self.code;
        match p {
            Prim::Equal(a, b) => c.instantiate(&c.equal, &[(&c.x, a), (&c.y, b)], &mut self.fresh),
            Prim::Mult(a, b, d) => c.instantiate(&c.mult, &[(&c.x, a), (&c.y, b), (&c.z, d)], &mut self.fresh),
            Prim::Inv(a, b) => c.instantiate(&c.inv, &[(&c.x, a), (&c.y, b)], &mut self.fresh),
        }
    }

    fn universe(&mut self, var: &str) -> Formula {
        let c = self.code;
        c.instantiate(&c.universe, &[(&c.x, var)], &mut self.fresh)
    }

    fn quantify(&mut self, exists: bool, var: &str, body: Formula) -> Formula {
        let guard = self.universe(var);
        let inner = if exists { Formula::and_all(vec![guard, body]) } else if guard == Formula::True { body } else { Formula::implies(guard, body) };
        self.code.tuple(var).iter().rev().fold(inner, |f, x| {
            if exists {
                Formula::exists(x, f)
            } else {
                Formula::forall(x, f)
            }
        })
    }

    fn atom(&mut self, t: &Term, u: &Term) -> Result<Formula> {
        let (prims, vars) = flatten_atom(t, u, &mut self.fresh)?;
        let body = Formula::and_all(prims.iter().map(|p| self.prim(p)).collect());
        Ok(vars.iter().rev().fold(body, |f, w| self.quantify(true, w, f)))
    }

    fn run(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(t, u) => self.atom(t, u)?,
            Formula::Neq(t, u) => Formula::not(self.atom(t, u)?),
            Formula::Not(g) => Formula::not(self.run(g)?),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.run(g)).collect::<Result<_>>()?),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.run(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Formula::implies(self.run(a)?, self.run(b)?),
            Formula::Forall(x, g) => {
                let body = self.run(g)?;
                self.quantify(false, x, body)
            }
            Formula::Exists(x, g) => {
                let body = self.run(g)?;
                self.quantify(true, x, body)
            }
        })
    }
}

/// Translates φ through the code: atoms are flattened into x = y, xy = z,
/// x⁻¹ = y and replaced by E, Mult, Inv; quantifiers are relativised to U.
pub fn translate_code(code: &GroupCode, phi: &Formula) -> Result<Formula> {
    if code.y.len() != code.arity() || code.z.len() != code.arity() || code.arity() == 0 {
        return Err(Error::invalid("code tuples must have equal nonzero length"));
    }
    let used = phi
        .all_vars()
        .into_iter()
        .chain(code.universe.all_vars())
        .chain(code.equal.all_vars())
        .chain(code.mult.all_vars())
        .chain(code.inv.all_vars())
        .chain(code.params.iter().cloned());
    let mut tr = Translator { code, fresh: FreshNames::new(used) };
    tr.run(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    #[test]
    fn identity_code_keeps_primitive_atoms() {
        let c = GroupCode::identity();
        for s in ["(forall x (exists y (= (* x y) ?z)))", "(exists x (= (inv x) ?y))", "(= ?x ?y)"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(translate_code(&c, &f).unwrap(), f, "{s}");
        }
    }

    #[test]
    fn flattens_long_terms() {
        let c = GroupCode::identity();
        let f = parse_formula("(= (* ?x ?y ?x) 1)").unwrap();
        let t = translate_code(&c, &f).unwrap();
        assert!(matches!(t, Formula::Exists(..)));
        assert!(translate_code(&c, &parse_formula("(= ?x a)").unwrap()).is_err());
    }

    #[test]
    fn quotient_relativises() {
        let normal = parse_formula("(= ?n ?n)").unwrap();
        let c = GroupCode::quotient(normal, "n", Vec::new());
        let f = parse_formula("(exists x (= x ?y))").unwrap();
        let t = translate_code(&c, &f).unwrap();
        let expect = parse_formula("(exists x (and (= x x) (exists v0 (and (= x (* ?y v0)) (= v0 v0)))))").unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn forall_gets_guard() {
        let u = parse_formula("(= (comm ?x ?p) 1)").unwrap();
        let c = GroupCode::subgroup(u, vec!["p".into()]);
        let t = translate_code(&c, &parse_formula("(forall x (= x x))").unwrap()).unwrap();
        assert!(matches!(t, Formula::Forall(_, ref b) if matches!(b.as_ref(), Formula::Implies(..))));
    }
}
