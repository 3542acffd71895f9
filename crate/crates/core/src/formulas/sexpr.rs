//! S-expression reader for terms and formulas.

use super::{Formula, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

struct Reader {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    /// Variables bound by enclosing quantifiers, innermost last.
    scope: Vec<String>,
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push((i + 1, Tok::Open));
            i += 1;
        } else if c == ')' {
            out.push((i + 1, Tok::Close));
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' && chars[i] != ')' {
                i += 1;
            }
            out.push((start + 1, Tok::Atom(chars[start..i].iter().collect())));
        }
    }
    out
}

impl Reader {
    fn new(text: &str) -> Self {
        Reader { toks: tokenize(text), at: 0, end: text.chars().count() + 1, scope: Vec::new() }
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Tok)> {
        let t = self.toks.get(self.at).cloned().ok_or_else(|| Error::parse(self.end, format!("unexpected end of input, expected {what}")))?;
        self.at += 1;
        Ok(t)
    }

    fn close(&mut self) -> Result<()> {
        match self.next("')'")? {
            (_, Tok::Close) => Ok(()),
            (p, _) => Err(Error::parse(p, "expected ')'")),
        }
    }

    fn at_close(&self) -> bool {
        matches!(self.toks.get(self.at), Some((_, Tok::Close)))
    }

    fn head(&mut self) -> Result<(usize, String)> {
        match self.next("an operator")? {
            (p, Tok::Atom(s)) => Ok((p, s)),
            (p, _) => Err(Error::parse(p, "expected an operator name")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return Err(Error::parse(self.pos(), "trailing input"));
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.next("a formula")? {
            (_, Tok::Atom(a)) if a == "true" => Ok(Formula::True),
            (_, Tok::Atom(a)) if a == "false" => Ok(Formula::False),
            (p, Tok::Atom(a)) => Err(Error::parse(p, format!("expected a formula, found '{a}'"))),
            (p, Tok::Close) => Err(Error::parse(p, "unexpected ')'")),
            (_, Tok::Open) => {
                let (p, h) = self.head()?;
                let f = match h.as_str() {
                    "=" | "!=" => {
                        let t = self.term()?;
                        let u = self.term()?;
                        if h == "=" {
                            Formula::Eq(t, u)
                        } else {
                            Formula::Neq(t, u)
                        }
                    }
                    "not" => Formula::not(self.formula()?),
                    "and" | "or" => {
                        let mut parts = Vec::new();
                        while !self.at_close() {
                            parts.push(self.formula()?);
                        }
                        if h == "and" {
                            Formula::And(parts)
                        } else {
                            Formula::Or(parts)
                        }
                    }
                    "implies" => {
                        let a = self.formula()?;
                        let b = self.formula()?;
                        Formula::implies(a, b)
                    }
                    "forall" | "exists" => {
                        let v = match self.next("a variable")? {
                            (_, Tok::Atom(v)) => v,
                            (q, _) => return Err(Error::parse(q, "expected a variable")),
                        };
                        let name = v.strip_prefix('?').unwrap_or(&v).to_string();
                        if name.is_empty() || !crate::graph::valid_generator_name(&name) {
                            return Err(Error::parse(p, format!("bad variable name '{v}'")));
                        }
                        self.scope.push(name.clone());
                        let body = self.formula();
                        self.scope.pop();
                        let body = Box::new(body?);
                        if h == "forall" {
                            Formula::Forall(name, body)
                        } else {
                            Formula::Exists(name, body)
                        }
                    }
                    _ => return Err(Error::parse(p, format!("unknown connective '{h}'"))),
                };
                self.close()?;
                Ok(f)
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.next("a term")? {
            (p, Tok::Atom(a)) => self.atom_term(p, &a),
            (p, Tok::Close) => Err(Error::parse(p, "unexpected ')'")),
            (_, Tok::Open) => {
                let (p, h) = self.head()?;
                let t = match h.as_str() {
                    "*" => {
                        let mut parts = Vec::new();
                        while !self.at_close() {
                            parts.push(self.term()?);
                        }
                        Term::Mul(parts)
                    }
                    "inv" => Term::inv(self.term()?),
                    "comm" | "conj" | "pair" => {
                        let t = self.term()?;
                        let u = self.term()?;
                        match h.as_str() {
                            "comm" => Term::comm(t, u),
                            "conj" => Term::conj(t, u),
                            _ => Term::pair(t, u),
                        }
                    }
                    "pow" => {
                        let t = self.term()?;
                        let k = match self.next("an exponent")? {
                            (q, Tok::Atom(k)) => k.parse::<i64>().map_err(|_| Error::parse(q, format!("bad exponent '{k}'")))?,
                            (q, _) => return Err(Error::parse(q, "expected an exponent")),
                        };
                        Term::pow(t, k)
                    }
                    _ => return Err(Error::parse(p, format!("unknown term operator '{h}'"))),
                };
                self.close()?;
                Ok(t)
            }
        }
    }

    fn atom_term(&self, p: usize, a: &str) -> Result<Term> {
        if a == "1" {
            return Ok(Term::One);
        }
        let (base, k) = crate::trace::split_power(a).ok_or_else(|| Error::parse(p, format!("bad exponent in '{a}'")))?;
        let t = if let Some(v) = base.strip_prefix('?') {
            if !crate::graph::valid_generator_name(v) {
                return Err(Error::parse(p, format!("bad variable name '{base}'")));
            }
            Term::var(v)
        } else if self.scope.iter().any(|s| s == base) {
            Term::var(base)
        } else if crate::graph::valid_generator_name(base) {
            Term::gen(base)
        } else {
            return Err(Error::parse(p, format!("bad symbol '{base}'")));
        };
        Ok(if a.contains('^') { Term::pow(t, k) } else { t })
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut r = Reader::new(text);
    let f = r.formula()?;
    r.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut r = Reader::new(text);
    let t = r.term()?;
    r.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f = parse_formula("(forall x (exists y (= (comm x y) 1)))").unwrap();
        let comm = Term::comm(Term::var("x"), Term::var("y"));
        assert_eq!(f, Formula::forall("x", Formula::exists("y", Formula::Eq(comm, Term::One))));
        assert_eq!(parse_formula("(= a 1)").unwrap(), Formula::Eq(Term::gen("a"), Term::One));
        match parse_formula("(= x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn variables_and_powers() {
        let f = parse_formula("(exists ?x (!= (* ?x a^-1) b^2))").unwrap();
        let expect = Formula::exists(
            "x",
            Formula::Neq(Term::Mul(vec![Term::var("x"), Term::pow(Term::gen("a"), -1)]), Term::pow(Term::gen("b"), 2)),
        );
        assert_eq!(f, expect);
        assert_eq!(parse_term("(conj x y)").unwrap(), Term::conj(Term::gen("x"), Term::gen("y")));
    }

    #[test]
    fn round_trip() {
        for s in [
            "(forall x (exists y (= (comm x y) 1)))",
            "(and (not (= ?x 1)) (or true false (implies (= a b) (!= (pow ?y -3) (inv (pair a b))))))",
            "(exists z (= (* ) z))",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn errors() {
        assert!(parse_formula("(= a b) x").is_err());
        assert!(parse_formula("(frob a)").is_err());
        assert!(parse_formula("(= (pow a x) 1)").is_err());
        assert!(parse_formula(")").is_err());
    }
}
