//! Splitting formulas over a direct product A × B into pairs of factor
//! formulas: A × B ⊨ φ(ā, b̄) iff some pair (ψ, ψ′) has A ⊨ ψ(ā) and
//! B ⊨ ψ′(b̄). Factor formulas keep the variable names of φ.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formulas::{eval_formula, BallStructure, Env, Formula, Model, ProductModel, Term};
use crate::graph::CommutationGraph;
use crate::trace::{self, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaPairFamily {
    pub pairs: Vec<(Formula, Formula)>,
}

impl FormulaPairFamily {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> =
            self.pairs.iter().map(|(l, r)| json!({"left": l.to_string(), "right": r.to_string()})).collect();
        json!({"size": self.pairs.len(), "pairs": pairs})
    }

    pub fn is_positive(&self) -> bool {
        self.pairs.iter().all(|(l, r)| l.is_positive() && r.is_positive())
    }

    /// ∃ pair with A ⊨ ψ and B ⊨ ψ′.
    pub fn holds<A: Model, B: Model>(&self, a: &A, b: &B, env_a: &Env<A::Elem>, env_b: &Env<B::Elem>) -> Result<bool> {
        for (l, r) in &self.pairs {
            if eval_formula(a, l, env_a)? && eval_formula(b, r, env_b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Generator names of each factor, used to project bare constants. When a
/// side is unknown, bare constants are kept on both sides.
#[derive(Clone, Debug, Default)]
pub struct FactorNames {
    pub left: Option<BTreeSet<String>>,
    pub right: Option<BTreeSet<String>>,
}

impl FactorNames {
    pub fn from_graphs(a: &CommutationGraph, b: &CommutationGraph) -> Self {
        FactorNames { left: Some(a.names().iter().cloned().collect()), right: Some(b.names().iter().cloned().collect()) }
    }

    fn resolve(&self, name: &str, right: bool) -> Result<Term> {
        let (own, other) = if right { (&self.right, &self.left) } else { (&self.left, &self.right) };
        match (own, other) {
            (Some(o), Some(t)) => match (o.contains(name), t.contains(name)) {
                (true, true) => Err(Error::invalid(format!("constant `{name}` is ambiguous in the product; use (pair ...)"))),
                (true, false) => Ok(Term::gen(name)),
                (false, true) => Ok(Term::One),
                (false, false) => Err(Error::invalid(format!("undeclared generator `{name}`"))),
            },
            _ => Ok(Term::gen(name)),
        }
    }

    fn project(&self, t: &Term, right: bool) -> Result<Term> {
        Ok(match t {
            Term::One | Term::Var(_) => t.clone(),
            Term::Gen(n) => self.resolve(n, right)?,
            Term::Mul(ts) => Term::Mul(ts.iter().map(|s| self.project(s, right)).collect::<Result<_>>()?),
            Term::Inv(s) => Term::inv(self.project(s, right)?),
            Term::Pow(s, k) => Term::pow(self.project(s, right)?, *k),
            Term::Pair(l, r) => {
                if right {
                    (**r).clone()
                } else {
                    (**l).clone()
                }
            }
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FvOptions {
    /// Largest index set whose powerset is formed.
    pub max_index: usize,
    /// Keep every pair and quantifier; otherwise pairs with a ⊥ side are
    /// dropped and vacuous quantifiers removed.
    pub literal: bool,
}

impl Default for FvOptions {
    fn default() -> Self {
        FvOptions { max_index: 12, literal: false }
    }
}

struct Splitter<'a> {
    names: &'a FactorNames,
    opts: FvOptions,
    positive: bool,
}

type Pairs = Vec<(Formula, Formula)>;

impl Splitter<'_> {
    fn collect(&self, it: impl IntoIterator<Item = (Formula, Formula)>) -> Pairs {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in it {
            if !self.opts.literal && (p.0 == Formula::False || p.1 == Formula::False) {
                continue;
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        if self.opts.literal {
            return out;
        }
        // (ψ, χ₁), (ψ, χ₂) ↦ (ψ, χ₁ ∨ χ₂), and symmetrically
        let out = merge_sides(out, false);
        merge_sides(out, true)
    }

    fn quant(&self, exists: bool, v: &str, f: Formula) -> Formula {
        if !self.opts.literal && (matches!(f, Formula::True | Formula::False) || !f.free_vars().contains(v)) {
            return f;
        }
        if exists {
            Formula::exists(v, f)
        } else {
            Formula::forall(v, f)
        }
    }

    fn guard(&self, n: usize) -> Result<()> {
        if n > self.opts.max_index {
            return Err(Error::Guard(format!("powerset over {n} indices exceeds the limit {}", self.opts.max_index)));
        }
        Ok(())
    }

    fn negation(&self, fam: Pairs) -> Result<Pairs> {
        let n = fam.len();
        if self.opts.literal {
            self.guard(n)?;
            return Ok(self.collect((0..1u64 << n).map(|mask| {
                let left = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| Formula::negate(fam[j].0.clone())).collect();
                let right = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| Formula::negate(fam[i].1.clone())).collect();
                (Formula::and_all(left), Formula::and_all(right))
            })));
        }
        // an index with ψ = ⊤ must stay out of J, one with ψ′ = ⊤ must go in;
        // every other choice yields a ⊥ side
        if fam.iter().any(|(l, r)| *l == Formula::True && *r == Formula::True) {
            return Ok(Vec::new());
        }
        let forced: Vec<usize> = (0..n).filter(|&i| fam[i].1 == Formula::True).collect();
        let free: Vec<usize> = (0..n).filter(|&i| fam[i].0 != Formula::True && fam[i].1 != Formula::True).collect();
        self.guard(free.len())?;
        Ok(self.collect((0..1u64 << free.len()).map(|mask| {
            let mut in_j = vec![false; n];
            for &i in &forced {
                in_j[i] = true;
            }
            for (b, &i) in free.iter().enumerate() {
                in_j[i] = mask >> b & 1 == 1;
            }
            let left = (0..n).filter(|&j| in_j[j]).map(|j| Formula::negate(fam[j].0.clone())).collect();
            let right = (0..n).filter(|&i| !in_j[i]).map(|i| Formula::negate(fam[i].1.clone())).collect();
            (Formula::and_all(left), Formula::and_all(right))
        })))
    }

    fn conjunction(&self, a: Pairs, b: Pairs) -> Pairs {
        self.collect(a.iter().flat_map(|(l1, r1)| {
            b.iter().map(move |(l2, r2)| {
                (Formula::and_all(vec![l1.clone(), l2.clone()]), Formula::and_all(vec![r1.clone(), r2.clone()]))
            })
        }))
    }

    fn exists(&self, v: &str, fam: Pairs) -> Pairs {
        self.collect(fam.into_iter().map(|(l, r)| (self.quant(true, v, l), self.quant(true, v, r))))
    }

    /// Negation-free rewrite of ∀v over a family indexed by I: one pair per
    /// J′ ⊆ P(I), left ⋀_{J∈J′} ∀v ⋁_{j∈J} ψ_j, right ⋀_{J∉J′} ∀v ⋁_{i∉J} ψ′_i.
    fn forall_positive(&self, v: &str, fam: Pairs) -> Result<Pairs> {
        let n = fam.len();
        if n >= usize::BITS as usize - 1 {
            return Err(Error::Guard(format!("family of size {n} under a universal quantifier")));
        }
        let subsets = 1usize << n;
        self.guard(subsets)?;
        let left_of: Vec<Formula> = (0..subsets)
            .map(|m| self.quant(false, v, Formula::or_all((0..n).filter(|j| m >> j & 1 == 1).map(|j| fam[j].0.clone()).collect())))
            .collect();
        let right_of: Vec<Formula> = (0..subsets)
            .map(|m| self.quant(false, v, Formula::or_all((0..n).filter(|i| m >> i & 1 == 0).map(|i| fam[i].1.clone()).collect())))
            .collect();
        Ok(self.collect((0..1u64 << subsets).map(|jp| {
            let l = (0..subsets).filter(|m| jp >> m & 1 == 1).map(|m| left_of[m].clone()).collect();
            let r = (0..subsets).filter(|m| jp >> m & 1 == 0).map(|m| right_of[m].clone()).collect();
            (Formula::and_all(l), Formula::and_all(r))
        })))
    }

    fn split(&self, f: &Formula) -> Result<Pairs> {
        let not_positive = || Error::invalid(format!("not a positive formula: {f}"));
        Ok(match f {
            Formula::True => vec![(Formula::True, Formula::True)],
            Formula::False => Vec::new(),
            Formula::Eq(t, u) => {
                let l = Formula::eq(self.names.project(t, false)?, self.names.project(u, false)?);
                let r = Formula::eq(self.names.project(t, true)?, self.names.project(u, true)?);
                vec![(l, r)]
            }
            Formula::Neq(t, u) => {
                if self.positive {
                    return Err(not_positive());
                }
                self.negation(self.split(&Formula::eq(t.clone(), u.clone()))?)?
            }
            Formula::Not(g) => {
                if self.positive {
                    return Err(not_positive());
                }
                self.negation(self.split(g)?)?
            }
            Formula::Implies(a, b) => {
                if self.positive {
                    return Err(not_positive());
                }
                let mut out = self.negation(self.split(a)?)?;
                out.extend(self.split(b)?);
                self.collect(out)
            }
            Formula::Or(gs) => {
                let mut out = Vec::new();
                for g in gs {
                    out.extend(self.split(g)?);
                }
                self.collect(out)
            }
            Formula::And(gs) => {
                let mut acc = vec![(Formula::True, Formula::True)];
                for g in gs {
                    acc = self.conjunction(acc, self.split(g)?);
                }
                acc
            }
            Formula::Exists(v, g) => self.exists(v, self.split(g)?),
            Formula::Forall(v, g) => {
                let inner = self.split(g)?;
                if self.positive {
                    self.forall_positive(v, inner)?
                } else {
                    self.negation(self.exists(v, self.negation(inner)?))?
                }
            }
        })
    }
}

fn merge_sides(pairs: Pairs, by_right: bool) -> Pairs {
    let mut keys: Vec<Formula> = Vec::new();
    let mut groups: Vec<Vec<Formula>> = Vec::new();
    for (l, r) in pairs {
        let (k, v) = if by_right { (r, l) } else { (l, r) };
        match keys.iter().position(|x| *x == k) {
            Some(i) => groups[i].push(v),
            None => {
                keys.push(k);
                groups.push(vec![v]);
            }
        }
    }
    keys.into_iter()
        .zip(groups)
        .map(|(k, vs)| {
            let v = Formula::or_all(vs);
            if by_right {
                (v, k)
            } else {
                (k, v)
            }
        })
        .collect()
}

pub fn fv_split(phi: &Formula, names: &FactorNames, opts: FvOptions) -> Result<FormulaPairFamily> {
    let s = Splitter { names, opts, positive: false };
    Ok(FormulaPairFamily { pairs: s.split(phi)? })
}

/// Same decision procedure, but every output formula is positive when φ is.
pub fn fv_split_positive(phi: &Formula, names: &FactorNames, opts: FvOptions) -> Result<FormulaPairFamily> {
    if !phi.is_positive() {
        return Err(Error::invalid(format!("not a positive formula: {phi}")));
    }
    let s = Splitter { names, opts, positive: true };
    Ok(FormulaPairFamily { pairs: s.split(phi)? })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FvReport {
    pub holds: bool,
    pub family_size: usize,
    pub assignments: usize,
    /// Free variable ↦ (left value, right value) where the two sides disagree.
    pub counterexample: Option<Vec<(String, String, String)>>,
}

fn digits(mut idx: usize, base: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for d in out.iter_mut() {
        *d = idx % base;
        idx /= base;
    }
    out
}

const MAX_ASSIGNMENTS: usize = 10_000_000;

/// Compares direct evaluation of φ over the product of the two balls with
/// evaluation of `fam` factorwise, for every assignment of φ's free variables.
pub fn check_family(phi: &Formula, fam: &FormulaPairFamily, s1: &BallStructure, s2: &BallStructure) -> Result<FvReport> {
    check_family_on(phi, fam, s1, s2, None)
}

/// As `check_family`, restricted to `sample` assignments drawn with the seed.
pub fn check_family_sampled(
    phi: &Formula,
    fam: &FormulaPairFamily,
    s1: &BallStructure,
    s2: &BallStructure,
    sample: usize,
    seed: u64,
) -> Result<FvReport> {
    check_family_on(phi, fam, s1, s2, Some((sample, seed)))
}

fn check_family_on(
    phi: &Formula,
    fam: &FormulaPairFamily,
    s1: &BallStructure,
    s2: &BallStructure,
    sample: Option<(usize, u64)>,
) -> Result<FvReport> {
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let k = vars.len();
    let (d1, d2) = (s1.domain.len(), s2.domain.len());
    let count = |d: usize| d.checked_pow(k as u32).filter(|&n| n <= MAX_ASSIGNMENTS);
    let (n1, n2) = match (count(d1), count(d2), count(d1 * d2)) {
        (Some(a), Some(b), Some(_)) => (a, b),
        _ => return Err(Error::Guard(format!("too many assignments for {k} free variables"))),
    };
    let env_of = |dom: &[Word], idx: usize, base: usize| {
        Env::from_pairs(vars.iter().cloned().zip(digits(idx, base, k).into_iter().map(|d| dom[d].clone())))
    };
    let table = |s: &BallStructure, n: usize, d: usize, right: bool| -> Result<Vec<Vec<bool>>> {
        fam.pairs
            .par_iter()
            .map(|p| {
                let f = if right { &p.1 } else { &p.0 };
                (0..n).map(|i| eval_formula(s, f, &env_of(&s.domain, i, d))).collect()
            })
            .collect()
    };
    let t1 = table(s1, n1, d1, false)?;
    let t2 = table(s2, n2, d2, true)?;
    let prod = ProductModel::new(s1, s2);
    let indices: Vec<usize> = match sample {
        None => (0..n1 * n2).collect(),
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| rng.gen_range(0..n1 * n2)).collect()
        }
    };
    let mismatch = indices
        .par_iter()
        .map(|&idx| -> Result<Option<usize>> {
            let (i1, i2) = (idx % n1, idx / n1);
            let (a, b) = (digits(i1, d1, k), digits(i2, d2, k));
            let env = Env::from_pairs(
                vars.iter().cloned().zip(a.iter().zip(&b).map(|(&x, &y)| (s1.domain[x].clone(), s2.domain[y].clone()))),
            );
            let direct = eval_formula(&prod, phi, &env)?;
            let split = (0..fam.pairs.len()).any(|p| t1[p][i1] && t2[p][i2]);
            Ok((direct != split).then_some(idx))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    let counterexample = mismatch.map(|idx| {
        let (a, b) = (digits(idx % n1, d1, k), digits(idx / n1, d2, k));
        vars.iter()
            .enumerate()
            .map(|(j, v)| {
                (
                    format!("?{v}"),
                    trace::format_word(&s1.graph, &s1.domain[a[j]]),
                    trace::format_word(&s2.graph, &s2.domain[b[j]]),
                )
            })
            .collect()
    });
    Ok(FvReport { holds: counterexample.is_none(), family_size: fam.len(), assignments: indices.len(), counterexample })
}

pub fn fv_check(phi: &Formula, s1: &BallStructure, s2: &BallStructure, opts: FvOptions) -> Result<FvReport> {
    let fam = fv_split(phi, &FactorNames::from_graphs(&s1.graph, &s2.graph), opts)?;
    check_family(phi, &fam, s1, s2)
}

// ---------------------------------------------------------------------------
// Random formulas over a product signature

#[derive(Clone, Debug)]
pub struct RandomFormulaConfig {
    /// Exact quantifier depth.
    pub depth: usize,
    /// Variable names available; at most four are used.
    pub pool: Vec<String>,
    /// Names allowed to occur free (a prefix of the pool).
    pub max_free: usize,
    pub left_gens: Vec<String>,
    pub right_gens: Vec<String>,
    pub positive: bool,
}

impl RandomFormulaConfig {
    pub fn new(depth: usize, left: &CommutationGraph, right: &CommutationGraph) -> Self {
        RandomFormulaConfig {
            depth,
            pool: ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect(),
            max_free: 1,
            left_gens: left.names().to_vec(),
            right_gens: right.names().to_vec(),
            positive: false,
        }
    }
}

fn random_const<R: Rng>(rng: &mut R, cfg: &RandomFormulaConfig) -> Term {
    let side = |rng: &mut R, gens: &[String]| {
        if gens.is_empty() || rng.gen_bool(0.25) {
            Term::One
        } else {
            let g = Term::gen(&gens[rng.gen_range(0..gens.len())]);
            if rng.gen_bool(0.3) {
                Term::inv(g)
            } else {
                g
            }
        }
    };
    let l = side(rng, &cfg.left_gens);
    let r = side(rng, &cfg.right_gens);
    Term::pair(l, r)
}

fn random_term<R: Rng>(rng: &mut R, cfg: &RandomFormulaConfig, scope: &[String]) -> Term {
    let factor = |rng: &mut R| {
        let t = if !scope.is_empty() && rng.gen_bool(0.7) {
            Term::var(&scope[rng.gen_range(0..scope.len())])
        } else {
            random_const(rng, cfg)
        };
        if rng.gen_bool(0.25) {
            Term::inv(t)
        } else {
            t
        }
    };
    match rng.gen_range(0..3) {
        0 => factor(rng),
        1 => Term::Mul(vec![factor(rng), factor(rng)]),
        _ => Term::comm(factor(rng), factor(rng)),
    }
}

fn random_atom<R: Rng>(rng: &mut R, cfg: &RandomFormulaConfig, scope: &[String]) -> Formula {
    let t = random_term(rng, cfg, scope);
    let u = if rng.gen_bool(0.5) { Term::One } else { random_term(rng, cfg, scope) };
    if !cfg.positive && rng.gen_bool(0.3) {
        Formula::Neq(t, u)
    } else {
        Formula::Eq(t, u)
    }
}

fn random_at<R: Rng>(rng: &mut R, cfg: &RandomFormulaConfig, depth: usize, bound: &mut Vec<String>) -> Formula {
    let mut scope: Vec<String> = cfg.pool.iter().take(cfg.max_free).cloned().collect();
    for b in bound.iter() {
        if !scope.contains(b) {
            scope.push(b.clone());
        }
    }
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 if !cfg.positive => Formula::not(random_atom(rng, cfg, &scope)),
            1 => Formula::And(vec![random_atom(rng, cfg, &scope), random_atom(rng, cfg, &scope)]),
            2 => Formula::Or(vec![random_atom(rng, cfg, &scope), random_atom(rng, cfg, &scope)]),
            _ => random_atom(rng, cfg, &scope),
        };
    }
    if rng.gen_bool(0.65) {
        let names: Vec<&String> = cfg.pool.iter().take(4).collect();
        let fresh: Vec<&String> = names.iter().copied().filter(|n| !bound.contains(n)).collect();
        let v = if fresh.is_empty() { names[rng.gen_range(0..names.len())] } else { fresh[rng.gen_range(0..fresh.len())] }.clone();
        bound.push(v.clone());
        let body = random_at(rng, cfg, depth - 1, bound);
        bound.pop();
        return if rng.gen_bool(0.5) { Formula::forall(&v, body) } else { Formula::exists(&v, body) };
    }
    let side = random_at(rng, cfg, 0, bound);
    let main = random_at(rng, cfg, depth, bound);
    match rng.gen_range(0..if cfg.positive { 2 } else { 4 }) {
        0 => Formula::And(vec![main, side]),
        1 => Formula::Or(vec![side, main]),
        2 => Formula::not(main),
        _ => Formula::implies(side, main),
    }
}

/// A formula whose quantifier depth is exactly `cfg.depth`.
pub fn random_formula<R: Rng>(rng: &mut R, cfg: &RandomFormulaConfig) -> Formula {
    random_at(rng, cfg, cfg.depth, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    fn f2() -> CommutationGraph {
        CommutationGraph::parse("gens: s t\n").unwrap()
    }

    fn literal() -> FvOptions {
        FvOptions { literal: true, ..Default::default() }
    }

    fn pf(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn clause_examples() {
        let names = FactorNames::default();
        let fam = fv_split(&pf("(= ?x1 (pair c1 c2))"), &names, literal()).unwrap();
        assert_eq!(fam.pairs, vec![(pf("(= ?x1 c1)"), pf("(= ?x1 c2)"))]);

        let fam = fv_split(&pf("(not (= ?x1 ?x2))"), &names, literal()).unwrap();
        assert_eq!(fam.pairs, vec![(Formula::True, pf("(!= ?x1 ?x2)")), (pf("(!= ?x1 ?x2)"), Formula::True)]);

        let fam = fv_split(&pf("(exists x0 (= x0 ?x1))"), &names, literal()).unwrap();
        assert_eq!(fam.pairs, vec![(pf("(exists x0 (= x0 ?x1))"), pf("(exists x0 (= x0 ?x1))"))]);
    }

    #[test]
    fn literal_sizes() {
        let names = FactorNames::default();
        let atoms = pf("(or (= ?x1 ?x2) (= ?x1 ?x3) (= ?x2 ?x3))");
        let three = fv_split(&atoms, &names, literal()).unwrap();
        assert_eq!(three.len(), 3);
        let neg = fv_split(&Formula::not(atoms), &names, literal()).unwrap();
        assert_eq!(neg.len(), 8);
        let pos = fv_split_positive(&pf("(forall x0 (= x0 ?x1))"), &names, literal()).unwrap();
        assert_eq!(pos.len(), 4);
        assert!(pos.is_positive());
        let big = pf("(forall x0 (or (= x0 ?x1) (= x0 ?x2) (= x0 ?x3) (= x0 ?x4)))");
        assert!(matches!(fv_split_positive(&big, &names, literal()), Err(Error::Guard(_))));
        assert!(fv_split_positive(&pf("(not (= ?x1 ?x2))"), &names, literal()).is_err());
    }

    #[test]
    fn small_checks() {
        let s1 = BallStructure::ball(&g1(), 1);
        let s2 = BallStructure::ball(&f2(), 1);
        for f in [
            "(= ?x1 ?x2)",
            "(not (exists x (= x (pair c s))))",
            "(forall y (exists x (= (comm x y) 1)))",
            "(forall x (= x x))",
            "(exists x (and (= (comm x (pair a 1)) 1) (not (= x 1))))",
            "(implies (= ?x1 (pair a s)) (exists y (= (* y y) ?x1)))",
        ] {
            let phi = pf(f);
            for opts in [FvOptions::default(), literal()] {
                match fv_check(&phi, &s1, &s2, opts) {
                    Ok(r) => assert!(r.holds, "{f}: {:?}", r.counterexample),
                    Err(Error::Guard(_)) => assert!(opts.literal, "{f}"),
                    Err(e) => panic!("{f}: {e}"),
                }
            }
        }
    }

    #[test]
    fn positive_matches_general() {
        let s1 = BallStructure::ball(&g1(), 1);
        let s2 = BallStructure::ball(&f2(), 1);
        let names = FactorNames::from_graphs(&s1.graph, &s2.graph);
        for f in ["(forall x0 (= x0 ?x1))", "(and (= ?x1 (pair c 1)) (= ?x2 (pair 1 s)))", "(forall y (exists x (= (* x y) 1)))"] {
            let phi = pf(f);
            let pos = fv_split_positive(&phi, &names, FvOptions::default()).unwrap();
            assert!(pos.is_positive(), "{f}");
            assert!(check_family(&phi, &pos, &s1, &s2).unwrap().holds, "{f}");
        }
    }

    #[test]
    fn random_formulas_have_requested_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = RandomFormulaConfig::new(3, &g1(), &f2());
        for _ in 0..20 {
            let f = random_formula(&mut rng, &cfg);
            assert_eq!(f.quantifier_depth(), 3, "{f}");
            assert!(f.free_vars().len() <= 1);
            assert!(parse_formula(&f.to_string()).is_ok());
        }
    }
}
