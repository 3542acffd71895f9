//! Rigid test words b^m a^{m₁} b^m ⋯ a^{m_n} b^m and verification of
//! Skolem candidates in G[X].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{eval_term, BallStructure, Env, Formula, Term};
use crate::graph::CommutationGraph;
use crate::system::{EqSystem, Sym};
use crate::trace::{self, Letter, Word};

/// Depth-first walk through Δ from the smallest vertex, recording the
/// returns, cut after the last newly discovered vertex.
pub fn delta_walk(g: &CommutationGraph) -> Result<Vec<usize>> {
    if g.len() < 2 || !g.is_indecomposable() {
        return Err(Error::domain("the non-commutation graph must be connected with at least two vertices"));
    }
    fn dfs(g: &CommutationGraph, u: usize, seen: &mut [bool], walk: &mut Vec<usize>, last_new: &mut usize) {
        seen[u] = true;
        *last_new = walk.len();
        walk.push(u);
        for &v in g.dependent(u) {
            if v != u && !seen[v] {
                dfs(g, v, seen, walk, last_new);
                walk.push(u);
            }
        }
    }
    let mut seen = vec![false; g.len()];
    let mut walk = Vec::new();
    let mut last_new = 0;
    dfs(g, 0, &mut seen, &mut walk, &mut last_new);
    walk.truncate(last_new + 1);
    Ok(walk)
}

/// (a, b) with b = b₁⋯b_n⋯b₁ along the Δ-walk and a = b₂ b b₂.
pub fn base_elements(g: &CommutationGraph) -> Result<(Word, Word)> {
    let walk = delta_walk(g)?;
    let mut b: Word = walk.iter().map(|&v| Letter::pos(v)).collect();
    for &v in walk.iter().rev().skip(1) {
        b.push(Letter::pos(v));
    }
    let b2 = Word::letter(Letter::pos(walk[1]));
    let a = Word::concat_all([&b2, &b, &b2]);
    for w in [&a, &b] {
        if !consecutive_dependent(g, w) {
            return Err(Error::invariant("base word has commuting neighbours"));
        }
    }
    Ok((a, b))
}

/// No two adjacent letters commute (equal generators count as dependent).
pub fn consecutive_dependent(g: &CommutationGraph, w: &Word) -> bool {
    w.letters().windows(2).all(|p| !g.commutes(p[0].gen(), p[1].gen()))
}

/// Whether `pattern` is a factor of the trace of `word`, i.e. a contiguous
/// subword of some word trace-equal to `word`. Adjacent letters of the
/// pattern must be dependent.
pub fn occurs_as_trace_factor(g: &CommutationGraph, pattern: &Word, word: &Word) -> Result<bool> {
    let p = pattern.letters();
    let h = word.letters();
    if p.is_empty() {
        return Ok(true);
    }
    if !consecutive_dependent(g, pattern) {
        return Err(Error::invalid("pattern has commuting neighbours"));
    }
    let mut by_gen: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (i, l) in h.iter().enumerate() {
        by_gen[l.gen()].push(i);
    }
    let next_of = |gen: usize, after: usize| -> Option<usize> {
        let v = &by_gen[gen];
        let k = v.partition_point(|&q| q <= after);
        v.get(k).copied()
    };
    'start: for s in by_gen[p[0].gen()].iter().copied() {
        if h[s] != p[0] {
            continue;
        }
        let mut chain = vec![s];
        for l in &p[1..] {
            match next_of(l.gen(), *chain.last().unwrap()) {
                Some(q) if h[q] == *l => chain.push(q),
                _ => continue 'start,
            }
        }
        // convexity: nothing outside the chain lies between its ends
        let e = *chain.last().unwrap();
        let mut fwd = vec![false; e - s + 1];
        let mut reached = vec![false; g.len()];
        fwd[0] = true;
        reached[h[s].gen()] = true;
        for j in s + 1..=e {
            if g.dependent(h[j].gen()).iter().any(|&d| reached[d]) {
                fwd[j - s] = true;
                reached[h[j].gen()] = true;
            }
        }
        let mut reached = vec![false; g.len()];
        reached[h[e].gen()] = true;
        let mut convex = true;
        for j in (s..e).rev() {
            if g.dependent(h[j].gen()).iter().any(|&d| reached[d]) {
                reached[h[j].gen()] = true;
                if fwd[j - s] && chain.binary_search(&j).is_err() {
                    convex = false;
                    break;
                }
            }
        }
        if convex {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MerzlyakovParams {
    /// Repetition exponent of b.
    pub m: usize,
    /// Exponent sequences m_{i,1} < ⋯ < m_{i,n_i}, one per word.
    pub exponents: Vec<Vec<u64>>,
    /// Each n_i must exceed this bound.
    pub n_bound: usize,
}

impl MerzlyakovParams {
    /// m = |S| + 1 and n_i > |S|², with consecutive disjoint exponent ranges.
    pub fn defaults(sys: &EqSystem, count: usize) -> Self {
        let s = sys.size().max(1);
        Self::with(s + 1, s * s, count)
    }

    pub fn with(m: usize, n_bound: usize, count: usize) -> Self {
        let n = n_bound as u64 + 1;
        let exponents = (0..count as u64).map(|i| (i * n + 1..=(i + 1) * n).collect()).collect();
        MerzlyakovParams { m, exponents, n_bound }
    }
}

/// g_i = b^m a^{m_{i1}} b^m ⋯ a^{m_{in_i}} b^m (1-based `i`), checked for
/// monotone exponents, length above the bound, and freshness of every
/// b^m a^{m_ij} b^m against the history words.
pub fn merzlyakov_word(g: &CommutationGraph, i: usize, params: &MerzlyakovParams, history: &[Word]) -> Result<Word> {
    let exps = params
        .exponents
        .get(i.wrapping_sub(1))
        .ok_or_else(|| Error::invalid(format!("no exponent sequence for word {i}")))?;
    if exps.first() == Some(&0) || exps.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::domain("condition 1: exponents must be positive and strictly increasing"));
    }
    if exps.len() <= params.n_bound {
        return Err(Error::domain(format!(
            "condition 2: {} exponents do not exceed the bound {}",
            exps.len(),
            params.n_bound
        )));
    }
    let (a, b) = base_elements(g)?;
    let bm = b.pow(params.m as i64);
    let mut parts = vec![bm.clone()];
    for &e in exps {
        parts.push(a.pow(e as i64));
        parts.push(bm.clone());
    }
    let word = Word::concat_all(parts.iter());
    if !trace::is_geodesic(g, &word) {
        return Err(Error::invariant("test word is not geodesic"));
    }
    for &e in exps {
        let marker = Word::concat_all([&bm, &a.pow(e as i64), &bm]);
        for (l, h) in history.iter().enumerate() {
            if occurs_as_trace_factor(g, &marker, h)? {
                return Err(Error::domain(format!(
                    "condition 3: b^m a^{e} b^m already occurs in history word {}; choose larger exponents",
                    l + 1
                )));
            }
        }
    }
    Ok(word)
}

/// Candidate values q_i(x₁,…,x_i) for the existential variables, as words
/// over `skolem_graph(g, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemCandidate {
    pub q: Vec<Word>,
}

/// G[X]: the graph extended by isolated vertices `?x1`, …, `?xk`.
pub fn skolem_graph(g: &CommutationGraph, k: usize) -> Result<CommutationGraph> {
    let extra: Vec<String> = (1..=k).map(|i| format!("?x{i}")).collect();
    g.extend(&extra, &[])
}

impl SkolemCandidate {
    /// One word per line over the generators and `?x1`, `?x2`, ….
    pub fn parse(g: &CommutationGraph, text: &str) -> Result<(Self, CommutationGraph)> {
        let lines: Vec<&str> =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
        let gx = skolem_graph(g, lines.len())?;
        let q = lines.iter().map(|l| trace::parse_word(&gx, l)).collect::<Result<Vec<_>>>()?;
        let c = SkolemCandidate { q };
        c.check_scope(g)?;
        Ok((c, gx))
    }

    /// q_i may only use x₁, …, x_i.
    pub fn check_scope(&self, g: &CommutationGraph) -> Result<()> {
        for (i, w) in self.q.iter().enumerate() {
            if let Some(l) = w.letters().iter().find(|l| l.gen() > g.len() + i) {
                return Err(Error::invalid(format!(
                    "q{} uses x{}, which is not yet quantified",
                    i + 1,
                    l.gen() - g.len() + 1
                )));
            }
        }
        Ok(())
    }
}

/// (kind, index) for variable names `x<i>` / `y<i>`.
fn quantified_var(name: &str) -> Option<(char, usize)> {
    let kind = name.chars().next()?;
    if kind != 'x' && kind != 'y' {
        return None;
    }
    let i: usize = name[1..].parse().ok()?;
    (i >= 1).then_some((kind, i))
}

/// Substitutes x_i ↦ the vertex ?x_i and y_i ↦ q_i and decides every row in G[X].
pub fn skolem_check(g: &CommutationGraph, sys: &EqSystem, q: &SkolemCandidate) -> Result<bool> {
    let k = q.q.len();
    let gx = skolem_graph(g, k)?;
    q.check_scope(g)?;
    let mut values = Vec::with_capacity(sys.vars.len());
    for v in &sys.vars {
        let val = match quantified_var(v) {
            Some(('x', i)) if i <= k => Word::letter(Letter::pos(g.len() + i - 1)),
            Some(('y', i)) if i <= k => q.q[i - 1].clone(),
            _ => return Err(Error::invalid(format!("variable ?{v} is not among x1..x{k}, y1..y{k}"))),
        };
        values.push(val);
    }
    for r in &sys.rows {
        let mut w = Word::empty();
        for l in &r.letters {
            match l.sym {
                Sym::Const(c) => w.push(Letter::new(c, l.inv)),
                Sym::Var(i) => w = w.concat(&if l.inv { values[i].inverse() } else { values[i].clone() }),
            }
        }
        if trace::is_trivial(&gx, &w) != r.positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Optional `U = 1` and optional `V ≠ 1` sides of one disjunct.
type Disjunct = (Option<(Term, Term)>, Option<(Term, Term)>);

fn matrix_disjuncts(m: &Formula) -> Result<Vec<Disjunct>> {
    let one = |f: &Formula| -> Result<Disjunct> {
        match f {
            Formula::Eq(t, u) => Ok((Some((t.clone(), u.clone())), None)),
            Formula::Neq(t, u) => Ok((None, Some((t.clone(), u.clone())))),
            Formula::And(parts) => match parts.as_slice() {
                [Formula::Eq(t, u), Formula::Neq(v, w)] => Ok((Some((t.clone(), u.clone())), Some((v.clone(), w.clone())))),
                _ => Err(Error::invalid("disjunct is not of the form U = 1 and V != 1")),
            },
            _ => Err(Error::invalid("disjunct is not of the form U = 1 and V != 1")),
        }
    };
    match m {
        Formula::Or(ds) => ds.iter().map(one).collect(),
        other => Ok(vec![one(other)?]),
    }
}

/// Decides a prenex sentence ∀x₁∃y₁…∀x_k∃y_k ⋁(U = 1 ∧ V ≠ 1) in G[X]
/// with the existential variables replaced by the candidate.
pub fn lift_check(g: &CommutationGraph, phi: &Formula, q: &SkolemCandidate) -> Result<bool> {
    let mut universal = Vec::new();
    let mut existential = Vec::new();
    let mut cur = phi;
    loop {
        match cur {
            Formula::Forall(x, body) => match body.as_ref() {
                Formula::Exists(y, inner) => {
                    universal.push(x.clone());
                    existential.push(y.clone());
                    cur = inner;
                }
                _ => return Err(Error::invalid("quantifier prefix must alternate forall/exists")),
            },
            Formula::Exists(..) => return Err(Error::invalid("quantifier prefix must start with forall")),
            _ => break,
        }
    }
    let k = universal.len();
    if q.q.len() != k {
        return Err(Error::invalid(format!("{k} existential variables but {} candidate words", q.q.len())));
    }
    let disjuncts = matrix_disjuncts(cur)?;
    let gx = skolem_graph(g, k)?;
    q.check_scope(g)?;
    let model = BallStructure { graph: gx.clone(), domain: Vec::new() };
    let mut env = Env::new();
    for i in 0..k {
        env.push(&universal[i], Word::letter(Letter::pos(g.len() + i)));
        env.push(&existential[i], q.q[i].clone());
    }
    let trivial = |(t, u): &(Term, Term)| -> Result<bool> {
        let w = eval_term(&model, &Term::Mul(vec![t.clone(), Term::inv(u.clone())]), &env)?;
        Ok(trace::is_trivial(&gx, &w))
    };
    for (u, v) in &disjuncts {
        let u_ok = match u {
            Some(p) => trivial(p)?,
            None => true,
        };
        let v_ok = match v {
            Some(p) => !trivial(p)?,
            None => true,
        };
        if u_ok && v_ok {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::trace::parse_word;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    #[test]
    fn base_words() {
        let g = g1();
        let (a, b) = base_elements(&g).unwrap();
        assert_eq!(b, parse_word(&g, "a c b c a").unwrap());
        assert_eq!(a, parse_word(&g, "c a c b c a c").unwrap());
        let f2 = CommutationGraph::parse("gens: p q\n").unwrap();
        let (a, b) = base_elements(&f2).unwrap();
        assert_eq!(b, parse_word(&f2, "p q p").unwrap());
        assert_eq!(a, parse_word(&f2, "q p q p q").unwrap());
        assert!(base_elements(&CommutationGraph::parse("gens: a b\nedge: a b\n").unwrap()).is_err());
    }

    #[test]
    fn walk_truncates_after_last_new_vertex() {
        // Δ is a star with centre c
        let g = CommutationGraph::parse("gens: a b c d\nedge: a b\nedge: a d\nedge: b d\n").unwrap();
        assert_eq!(delta_walk(&g).unwrap(), vec![0, 2, 1, 2, 3]);
    }

    #[test]
    fn words_and_conditions() {
        let g = g1();
        let p = MerzlyakovParams { m: 2, exponents: vec![vec![1, 2], vec![2, 2], vec![3]], n_bound: 1 };
        let (a, b) = base_elements(&g).unwrap();
        let w = merzlyakov_word(&g, 1, &p, &[]).unwrap();
        let expect = Word::concat_all([&b.pow(2), &a, &b.pow(2), &a.pow(2), &b.pow(2)]);
        assert_eq!(w, expect);
        assert!(merzlyakov_word(&g, 2, &p, &[]).is_err());
        assert!(merzlyakov_word(&g, 3, &p, &[]).is_err());
        let p2 = MerzlyakovParams { m: 2, exponents: vec![vec![1, 2], vec![2, 3]], n_bound: 1 };
        assert!(merzlyakov_word(&g, 2, &p2, std::slice::from_ref(&w)).is_err());
        let p3 = MerzlyakovParams::with(2, 1, 2);
        let w1 = merzlyakov_word(&g, 1, &p3, &[]).unwrap();
        merzlyakov_word(&g, 2, &p3, &[w1]).unwrap();
    }

    #[test]
    fn trace_factors() {
        let g = g1();
        let w = |s: &str| parse_word(&g, s).unwrap();
        assert!(occurs_as_trace_factor(&g, &w("c a"), &w("c b a")).unwrap());
        assert!(occurs_as_trace_factor(&g, &w("a c"), &w("a b c")).unwrap());
        assert!(!occurs_as_trace_factor(&g, &w("a a"), &w("a c a")).unwrap());
        assert!(!occurs_as_trace_factor(&g, &w("a c a"), &w("a c c a")).unwrap());
        assert!(occurs_as_trace_factor(&g, &w("a c a"), &w("b a c a c")).unwrap());
    }

    #[test]
    fn skolem_examples() {
        let g = g1();
        let sys = EqSystem::parse(&g, "?x1^-1 ?y1^-1 ?x1 ?y1").unwrap();
        let gx = skolem_graph(&g, 1).unwrap();
        let q = |s: &str| SkolemCandidate { q: vec![parse_word(&gx, s).unwrap()] };
        assert!(skolem_check(&g, &sys, &q("?x1")).unwrap());
        assert!(!skolem_check(&g, &sys, &q("c")).unwrap());
        let sys2 = EqSystem::parse(&g, "?y1 ?x1 ?y1^-1 ?x1^-1 a a^-1").unwrap();
        assert!(skolem_check(&g, &sys2, &q("?x1^2")).unwrap());
        let bad = EqSystem::parse(&g, "?x2 ?y1").unwrap();
        assert!(skolem_check(&g, &bad, &q("?x1")).is_err());
    }

    #[test]
    fn lift_examples() {
        let g = g1();
        let gx = skolem_graph(&g, 1).unwrap();
        let q = SkolemCandidate { q: vec![parse_word(&gx, "?x1").unwrap()] };
        let f = parse_formula("(forall x (exists y (and (= (comm x y) 1) (!= x 1))))").unwrap();
        assert!(lift_check(&g, &f, &q).unwrap());
        let f = parse_formula("(forall x (exists y (and (= 1 1) (!= (* y (inv x)) 1))))").unwrap();
        assert!(!lift_check(&g, &f, &q).unwrap());
        let f = parse_formula("(forall x (exists y (or (and (= y 1) (!= x 1)) (and (= (comm x y) 1) (!= y 1)))))").unwrap();
        assert!(lift_check(&g, &f, &q).unwrap());
        let f = parse_formula("(exists y (= y 1))").unwrap();
        assert!(lift_check(&g, &f, &q).is_err());
    }
}
