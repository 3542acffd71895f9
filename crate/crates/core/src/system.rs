//! Systems of equations and inequations whose rows are words over variables
//! and generators, e.g. `?x a ?x^-1 a^-1`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formulas::{Formula, Term};
use crate::graph::{valid_generator_name, CommutationGraph};
use crate::trace::{self, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Const(usize),
    Var(usize),
}

/// One occurrence `r_ij`: a generator or variable, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SysLetter {
    pub sym: Sym,
    pub inv: bool,
}

impl SysLetter {
    pub fn inverse(self) -> Self {
        SysLetter { sym: self.sym, inv: !self.inv }
    }

    pub fn constant(self) -> Option<Letter> {
        match self.sym {
            Sym::Const(g) => Some(Letter::new(g, self.inv)),
            Sym::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub letters: Vec<SysLetter>,
    /// `true` for `row = 1`, `false` for `row ≠ 1`.
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqSystem {
    pub vars: Vec<String>,
    pub rows: Vec<Row>,
}

fn parse_tokens(g: &CommutationGraph, text: &str, line: usize, vars: &mut Vec<String>) -> Result<Vec<SysLetter>> {
    let mut out = Vec::new();
    for (col, tok) in trace::tokens_with_columns(text) {
        if tok == "1" {
            continue;
        }
        let bad = || Error::parse(line, format!("bad token `{tok}` at column {col}"));
        let (name, exp) = trace::split_power(tok).ok_or_else(bad)?;
        let sym = if let Some(v) = name.strip_prefix('?') {
            if !valid_generator_name(v) {
                return Err(bad());
            }
            let i = match vars.iter().position(|x| x == v) {
                Some(i) => i,
                None => {
                    vars.push(v.to_string());
                    vars.len() - 1
                }
            };
            Sym::Var(i)
        } else {
            Sym::Const(g.index_of(name).ok_or_else(|| Error::invalid(format!("undeclared generator `{name}`")))?)
        };
        for _ in 0..exp.unsigned_abs() {
            out.push(SysLetter { sym, inv: exp < 0 });
        }
    }
    Ok(out)
}

impl EqSystem {
    /// One row per line; `!` in front marks an inequation; an optional
    /// `vars:` line fixes the variable order; `#` starts a comment.
    pub fn parse(g: &CommutationGraph, text: &str) -> Result<Self> {
        let mut vars = Vec::new();
        let mut rows = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                if !rows.is_empty() {
                    return Err(Error::parse(n + 1, "`vars:` must precede the rows"));
                }
                for v in rest.split_whitespace() {
                    let v = v.strip_prefix('?').unwrap_or(v);
                    if !valid_generator_name(v) || vars.iter().any(|x| x == v) {
                        return Err(Error::parse(n + 1, format!("bad or repeated variable `{v}`")));
                    }
                    vars.push(v.to_string());
                }
                continue;
            }
            let (positive, body) = match line.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, line),
            };
            let letters = parse_tokens(g, body, n + 1, &mut vars)?;
            rows.push(Row { letters, positive });
        }
        Ok(EqSystem { vars, rows })
    }

    /// A single row in the same token syntax.
    pub fn parse_row(g: &CommutationGraph, text: &str, vars: &mut Vec<String>) -> Result<Vec<SysLetter>> {
        parse_tokens(g, text, 1, vars)
    }

    pub fn format_letters(&self, g: &CommutationGraph, letters: &[SysLetter]) -> String {
        format_sys_letters(g, &self.vars, letters)
    }

    pub fn to_text(&self, g: &CommutationGraph) -> String {
        let mut s = String::new();
        if !self.vars.is_empty() {
            let vs: Vec<String> = self.vars.iter().map(|v| format!("?{v}")).collect();
            let _ = writeln!(s, "vars: {}", vs.join(" "));
        }
        for r in &self.rows {
            let _ = writeln!(s, "{}{}", if r.positive { "" } else { "! " }, self.format_letters(g, &r.letters));
        }
        s
    }

    pub fn equations_only(&self) -> bool {
        self.rows.iter().all(|r| r.positive)
    }

    /// |S| = Σ l_i (l_i − 1) over the rows.
    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.letters.len() * r.letters.len().saturating_sub(1)).sum()
    }

    /// The row with each variable replaced by its value.
    pub fn substitute(&self, row: &[SysLetter], values: &[Word]) -> Word {
        let mut out = Word::empty();
        for l in row {
            match l.sym {
                Sym::Const(g) => out.push(Letter::new(g, l.inv)),
                Sym::Var(i) => {
                    let v = if l.inv { values[i].inverse() } else { values[i].clone() };
                    out = out.concat(&v);
                }
            }
        }
        out
    }

    pub fn is_solution(&self, g: &CommutationGraph, values: &[Word]) -> bool {
        self.rows.iter().all(|r| trace::is_trivial(g, &self.substitute(&r.letters, values)) == r.positive)
    }

    pub fn row_term(&self, g: &CommutationGraph, row: &[SysLetter]) -> Term {
        let parts: Vec<Term> = row
            .iter()
            .map(|l| {
                let base = match l.sym {
                    Sym::Const(c) => Term::gen(g.name(c)),
                    Sym::Var(i) => Term::var(&self.vars[i]),
                };
                if l.inv {
                    Term::inv(base)
                } else {
                    base
                }
            })
            .collect();
        match parts.len() {
            0 => Term::One,
            1 => parts.into_iter().next().unwrap(),
            _ => Term::Mul(parts),
        }
    }

    /// The rows as atoms `row = 1` or `row ≠ 1`.
    pub fn formulas(&self, g: &CommutationGraph) -> Vec<Formula> {
        self.rows
            .iter()
            .map(|r| {
                let t = self.row_term(g, &r.letters);
                if r.positive {
                    Formula::Eq(t, Term::One)
                } else {
                    Formula::Neq(t, Term::One)
                }
            })
            .collect()
    }

    /// Expands atoms into letter rows; powers are unrolled.
    pub fn from_formulas(g: &CommutationGraph, atoms: &[Formula], vars: &[String]) -> Result<Self> {
        let mut sys = EqSystem { vars: vars.to_vec(), rows: Vec::new() };
        for f in atoms {
            let (t, u, positive) = match f {
                Formula::Eq(t, u) => (t, u, true),
                Formula::Neq(t, u) => (t, u, false),
                other => return Err(Error::invalid(format!("not an atom: {other}"))),
            };
            let mut letters = Vec::new();
            sys.expand(g, t, false, &mut letters)?;
            sys.expand(g, u, true, &mut letters)?;
            sys.rows.push(Row { letters, positive });
        }
        Ok(sys)
    }

    fn expand(&mut self, g: &CommutationGraph, t: &Term, inv: bool, out: &mut Vec<SysLetter>) -> Result<()> {
        match t {
            Term::One => {}
            Term::Var(v) => {
                let i = match self.vars.iter().position(|x| x == v) {
                    Some(i) => i,
                    None => {
                        self.vars.push(v.clone());
                        self.vars.len() - 1
                    }
                };
                out.push(SysLetter { sym: Sym::Var(i), inv });
            }
            Term::Gen(name) => {
                let c = g.index_of(name).ok_or_else(|| Error::invalid(format!("undeclared generator `{name}`")))?;
                out.push(SysLetter { sym: Sym::Const(c), inv });
            }
            Term::Mul(ts) => {
                if inv {
                    for s in ts.iter().rev() {
                        self.expand(g, s, true, out)?;
                    }
                } else {
                    for s in ts {
                        self.expand(g, s, false, out)?;
                    }
                }
            }
            Term::Inv(s) => self.expand(g, s, !inv, out)?,
            Term::Pow(s, k) => {
                let flip = (*k < 0) != inv;
                for _ in 0..k.unsigned_abs() {
                    self.expand(g, s, flip, out)?;
                }
            }
            Term::Pair(..) => return Err(Error::invalid("pair constants are not allowed in a system")),
        }
        Ok(())
    }
}

pub fn format_sys_letters(g: &CommutationGraph, vars: &[String], letters: &[SysLetter]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let name = |l: &SysLetter| match l.sym {
        Sym::Const(c) => g.name(c).to_string(),
        Sym::Var(i) => format!("?{}", vars[i]),
    };
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let run = (j - i) as i64 * if letters[i].inv { -1 } else { 1 };
        parts.push(if run == 1 { name(&letters[i]) } else { format!("{}^{run}", name(&letters[i])) });
        i = j;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    #[test]
    fn parse_and_print() {
        let g = g1();
        let s = EqSystem::parse(&g, "vars: ?y\n?x a ?x^-1 a^-1\n! ?y^2 # comment\n").unwrap();
        assert_eq!(s.vars, vec!["y", "x"]);
        assert_eq!(s.rows.len(), 2);
        assert!(!s.rows[1].positive);
        assert_eq!(s.rows[1].letters.len(), 2);
        assert_eq!(EqSystem::parse(&g, &s.to_text(&g)).unwrap(), s);
        assert_eq!(s.size(), 12 + 2);
        assert!(EqSystem::parse(&g, "?x d").is_err());
        assert!(matches!(EqSystem::parse(&g, "\n?x a^z"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn solutions() {
        let g = g1();
        let s = EqSystem::parse(&g, "?x a ?x^-1 a^-1\n! ?x").unwrap();
        assert!(s.is_solution(&g, &[trace::parse_word(&g, "b").unwrap()]));
        assert!(!s.is_solution(&g, &[Word::empty()]));
        assert!(!s.is_solution(&g, &[trace::parse_word(&g, "c").unwrap()]));
    }

    #[test]
    fn formulas_round_trip() {
        let g = g1();
        let s = EqSystem::parse(&g, "?x a^2 ?y^-1\n! ?x").unwrap();
        let back = EqSystem::from_formulas(&g, &s.formulas(&g), &s.vars).unwrap();
        assert_eq!(back, s);
    }
}
