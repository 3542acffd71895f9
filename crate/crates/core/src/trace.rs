//! Words over A^{±1} as elements of the partially commutative group and monoid.
//!
//! Reduction scans left to right keeping, per generator, a stack of surviving
//! positions; a new letter cancels against the latest surviving letter among
//! the generators it does not commute with, if that letter is its inverse.
//! Canonical forms are the lexicographically least linearisation of the
//! dependence order, letters ordered by (generator index, + before −).

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::CommutationGraph;

/// A signed generator occurrence. Ordered by generator, positive first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    #[inline]
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter(((gen as u32) << 1) | inverse as u32)
    }

    #[inline]
    pub fn pos(gen: usize) -> Self {
        Self::new(gen, false)
    }

    #[inline]
    pub fn neg(gen: usize) -> Self {
        Self::new(gen, true)
    }

    #[inline]
    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub(crate) fn key(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}", self.gen(), if self.is_inverse() { "'" } else { "" })
    }
}

/// A finite sequence of letters; the empty word is the identity.
///
/// `Ord` is shortlex: shorter words first, then lexicographic by letter order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Formal inverse: reversed, every letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Literal concatenation (no cancellation).
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn concat_all<'a, I: IntoIterator<Item = &'a Word>>(parts: I) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    /// Literal power; negative exponents repeat the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        let mut v = Vec::with_capacity(base.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Generators occurring literally (not after reduction).
    pub fn support(&self) -> BTreeSet<usize> {
        self.0.iter().map(|l| l.gen()).collect()
    }
}

// ---------------------------------------------------------------------------
// Text syntax

/// Parses whitespace-separated tokens `g`, `g^-1`, `g^k`, `1`.
pub fn parse_word(g: &CommutationGraph, text: &str) -> Result<Word> {
    let mut out = Vec::new();
    for (col, tok) in tokens_with_columns(text) {
        if tok == "1" {
            continue;
        }
        let (name, exp) = split_power(tok).ok_or_else(|| Error::parse(col, format!("bad token `{tok}`")))?;
        let gen = g
            .index_of(name)
            .ok_or_else(|| Error::invalid(format!("undeclared generator `{name}`")))?;
        let l = Letter::new(gen, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            out.push(l);
        }
    }
    Ok(Word(out))
}

/// Splits `name^k` into (name, k); a bare name has exponent 1.
pub(crate) fn split_power(tok: &str) -> Option<(&str, i64)> {
    let (name, exp) = match tok.split_once('^') {
        None => (tok, 1),
        Some((n, e)) => (n, e.parse::<i64>().ok()?),
    };
    if name.is_empty() || exp == 0 || name.contains(['(', ')']) {
        return None;
    }
    Some((name, exp))
}

pub(crate) fn tokens_with_columns(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

/// Prints a word with runs of equal letters collapsed into powers; `1` if empty.
pub fn format_word(g: &CommutationGraph, w: &Word) -> String {
    format_letters(w.letters(), |gen| g.name(gen).to_string())
}

pub(crate) fn format_letters(letters: &[Letter], name: impl Fn(usize) -> String) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let run = (j - i) as i64 * l.sign() as i64;
        let n = name(l.gen());
        parts.push(if run == 1 { n } else { format!("{n}^{run}") });
        i = j;
    }
    parts.join(" ")
}

// ---------------------------------------------------------------------------
// Reduction kernel

/// Left-to-right cancellation. Returns surviving indices (in order) and, if
/// requested, the cancelled pairs `(i, j)` with `i < j`.
pub(crate) fn reduce_indices(
    g: &CommutationGraph,
    letters: &[Letter],
    mut pairs: Option<&mut Vec<(usize, usize)>>,
) -> Vec<usize> {
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    let mut alive = vec![false; letters.len()];
    for (t, &x) in letters.iter().enumerate() {
        let gen = x.gen();
        let mut top: Option<usize> = None;
        for &h in g.dependent(gen) {
            if let Some(&p) = stacks[h].last() {
                if top.is_none_or(|q| p > q) {
                    top = Some(p);
                }
            }
        }
        match top {
            Some(p) if letters[p] == x.inverse() => {
                stacks[gen].pop();
                alive[p] = false;
                if let Some(out) = pairs.as_deref_mut() {
                    out.push((p, t));
                }
            }
            _ => {
                stacks[gen].push(t);
                alive[t] = true;
            }
        }
    }
    (0..letters.len()).filter(|&i| alive[i]).collect()
}

/// A geodesic representative obtained by cancellation only (letter order kept).
pub fn reduce(g: &CommutationGraph, w: &Word) -> Word {
    reduce_indices(g, w.letters(), None).into_iter().map(|i| w.0[i]).collect()
}

pub fn reduce_letters(g: &CommutationGraph, letters: &[Letter]) -> Vec<Letter> {
    reduce_indices(g, letters, None).into_iter().map(|i| letters[i]).collect()
}

pub fn is_trivial(g: &CommutationGraph, w: &Word) -> bool {
    reduce_indices(g, w.letters(), None).is_empty()
}

/// Lexicographically least linearisation of the trace of `letters`
/// (no cancellation: this is the monoid normal form).
pub(crate) fn linearize(g: &CommutationGraph, letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    if n <= 1 {
        return letters.to_vec();
    }
    let mut last: Vec<usize> = vec![usize::MAX; g.len()];
    let mut indeg = vec![0u32; n];
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, l) in letters.iter().enumerate() {
        let gen = l.gen();
        for &h in g.dependent(gen) {
            let p = last[h];
            if p != usize::MAX {
                succ[p].push(i as u32);
                indeg[i] += 1;
            }
        }
        last[gen] = i;
    }
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
    for i in 0..n {
        if indeg[i] == 0 {
            heap.push(Reverse((letters[i].key(), i as u32)));
        }
    }
    let mut out = Vec::with_capacity(n);
    while let Some(Reverse((_, i))) = heap.pop() {
        let i = i as usize;
        out.push(letters[i]);
        for &s in &succ[i] {
            let s = s as usize;
            indeg[s] -= 1;
            if indeg[s] == 0 {
                heap.push(Reverse((letters[s].key(), s as u32)));
            }
        }
    }
    out
}

/// Canonical geodesic: reduce, then take the lex-least linearisation.
pub fn normalize(g: &CommutationGraph, w: &Word) -> Word {
    Word(linearize(g, &reduce_letters(g, w.letters())))
}

/// Canonical form in the trace monoid T(A^{±1}); a and a⁻¹ are distinct
/// letters that do not commute with each other.
pub fn monoid_normal_form(g: &CommutationGraph, w: &Word) -> Word {
    Word(linearize(g, w.letters()))
}

pub fn monoid_equal(g: &CommutationGraph, u: &Word, v: &Word) -> bool {
    u.len() == v.len() && monoid_normal_form(g, u) == monoid_normal_form(g, v)
}

pub fn equals(g: &CommutationGraph, u: &Word, v: &Word) -> bool {
    is_trivial(g, &u.concat(&v.inverse()))
}

pub fn is_geodesic(g: &CommutationGraph, w: &Word) -> bool {
    reduce_indices(g, w.letters(), None).len() == w.len()
}

/// Searches for a subword a B a⁻¹ in which a commutes with every letter of B.
pub fn find_cancellable_pattern(g: &CommutationGraph, w: &Word) -> Option<(usize, usize)> {
    let ls = w.letters();
    for i in 0..ls.len() {
        let a = ls[i];
        for j in i + 1..ls.len() {
            let b = ls[j];
            if b == a.inverse() {
                return Some((i, j));
            }
            if b.gen() != a.gen() && !g.commutes(a.gen(), b.gen()) {
                break;
            }
        }
    }
    None
}

/// Generators of a geodesic for `w`.
pub fn alpha(g: &CommutationGraph, w: &Word) -> BTreeSet<usize> {
    reduce(g, w).support()
}

/// 𝔸(w): generators outside α(w) that commute with w.
pub fn a_set(g: &CommutationGraph, w: &Word) -> BTreeSet<usize> {
    let r = reduce(g, w);
    let al = r.support();
    (0..g.len())
        .filter(|x| !al.contains(x))
        .filter(|&x| {
            let xw = Word::letter(Letter::pos(x));
            commute(g, &xw, &r)
        })
        .collect()
}

/// [u, v] = 1 in the group.
pub fn commute(g: &CommutationGraph, u: &Word, v: &Word) -> bool {
    let c = Word::concat_all([&u.inverse(), &v.inverse(), u, v]);
    is_trivial(g, &c)
}

/// Whether `uv` is geodesic (the product is written u∘v). Both inputs must be geodesic.
pub fn is_geodesic_concat(g: &CommutationGraph, u: &Word, v: &Word) -> Result<bool> {
    if !is_geodesic(g, u) || !is_geodesic(g, v) {
        return Err(Error::invalid("is_geodesic_concat needs geodesic inputs"));
    }
    Ok(is_geodesic(g, &u.concat(v)))
}

/// v = u ∘ v′ for some v′.
pub fn left_divides(g: &CommutationGraph, u: &Word, v: &Word) -> bool {
    let (u, v) = (reduce(g, u), reduce(g, v));
    u.len() <= v.len() && reduce(g, &u.inverse().concat(&v)).len() + u.len() == v.len()
}

/// v = v′ ∘ u for some v′.
pub fn right_divides(g: &CommutationGraph, u: &Word, v: &Word) -> bool {
    let (u, v) = (reduce(g, u), reduce(g, v));
    u.len() <= v.len() && reduce(g, &v.concat(&u.inverse())).len() + u.len() == v.len()
}

/// Positions of the minimal occurrences (possible first letters) of a trace.
pub(crate) fn minimal_positions(g: &CommutationGraph, letters: &[Letter]) -> Vec<usize> {
    let mut blocked = vec![false; g.len()];
    let mut out = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        if !blocked[l.gen()] {
            out.push(i);
        }
        for &h in g.dependent(l.gen()) {
            blocked[h] = true;
        }
    }
    out
}

/// Positions of the maximal occurrences (possible last letters) of a trace.
pub(crate) fn maximal_positions(g: &CommutationGraph, letters: &[Letter]) -> Vec<usize> {
    let rev: Vec<Letter> = letters.iter().rev().copied().collect();
    let n = letters.len();
    let mut out: Vec<usize> = minimal_positions(g, &rev).into_iter().map(|i| n - 1 - i).collect();
    out.sort_unstable();
    out
}

/// Greatest common left divisor, by repeatedly peeling the smallest common first letter.
pub fn left_gcd(g: &CommutationGraph, u: &Word, v: &Word) -> Word {
    let mut a = reduce(g, u).into_letters();
    let mut b = reduce(g, v).into_letters();
    let mut out = Vec::new();
    loop {
        let ma = minimal_positions(g, &a);
        let mb = minimal_positions(g, &b);
        let mut best: Option<(Letter, usize, usize)> = None;
        for &i in &ma {
            if let Some(&j) = mb.iter().find(|&&j| b[j] == a[i]) {
                if best.is_none_or(|(l, _, _)| a[i] < l) {
                    best = Some((a[i], i, j));
                }
            }
        }
        match best {
            None => break,
            Some((l, i, j)) => {
                out.push(l);
                a.remove(i);
                b.remove(j);
            }
        }
    }
    Word(linearize(g, &out))
}

/// Splits the canonical form into commuting blocks, one per Δ-component of α(w),
/// ordered by smallest generator.
pub fn block_decomposition(g: &CommutationGraph, w: &Word) -> Vec<Word> {
    let nw = normalize(g, w);
    let al: Vec<usize> = nw.support().into_iter().collect();
    g.delta_components_of(&al)
        .into_iter()
        .map(|comp| {
            let part: Vec<Letter> = nw.0.iter().copied().filter(|l| comp.binary_search(&l.gen()).is_ok()).collect();
            Word(linearize(g, &part))
        })
        .collect()
}

/// w = conjugator ∘ core ∘ conjugator⁻¹ with a cyclically reduced core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub conjugator: Word,
    pub core: Word,
}

pub fn cyclic_reduce(g: &CommutationGraph, w: &Word) -> CyclicDecomposition {
    let mut core = normalize(g, w).into_letters();
    let mut conj = Vec::new();
    loop {
        let mins = minimal_positions(g, &core);
        let maxs = maximal_positions(g, &core);
        let mut best: Option<(Letter, usize, usize)> = None;
        for &i in &mins {
            let x = core[i];
            if let Some(&j) = maxs.iter().find(|&&j| core[j] == x.inverse()) {
                if best.is_none_or(|(l, _, _)| x < l) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((x, i, j)) = best else { break };
        conj.push(x);
        let rest: Vec<Letter> =
            core.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &l)| l).collect();
        core = linearize(g, &rest);
    }
    CyclicDecomposition { conjugator: Word(linearize(g, &conj)), core: Word(core) }
}

pub fn is_cyclically_reduced(g: &CommutationGraph, w: &Word) -> bool {
    is_geodesic(g, w) && is_geodesic(g, &w.concat(w))
}

/// Index of each occurrence among the occurrences of its generator.
fn generator_ranks(g: &CommutationGraph, letters: &[Letter]) -> Vec<usize> {
    let mut seen = vec![0usize; g.len()];
    letters
        .iter()
        .map(|l| {
            let r = seen[l.gen()];
            seen[l.gen()] += 1;
            r
        })
        .collect()
}

/// All left divisors (prefixes of the trace) of a geodesic word, as subsequences.
pub(crate) fn left_divisors(g: &CommutationGraph, w: &Word) -> Vec<Word> {
    let ls = w.letters();
    let ranks = generator_ranks(g, ls);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let start = vec![0usize; g.len()];
    seen.insert(start.clone());
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(counts) = stack.pop() {
        let inside = |i: usize| ranks[i] < counts[ls[i].gen()];
        out.push(Word((0..ls.len()).filter(|&i| inside(i)).map(|i| ls[i]).collect()));
        let rest: Vec<usize> = (0..ls.len()).filter(|&i| !inside(i)).collect();
        let rest_letters: Vec<Letter> = rest.iter().map(|&i| ls[i]).collect();
        for p in minimal_positions(g, &rest_letters) {
            let mut next = counts.clone();
            next[rest_letters[p].gen()] += 1;
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    out
}

/// All cyclic permutations d⁻¹ z d over left divisors d of a cyclically reduced z.
pub fn cyclic_permutations(g: &CommutationGraph, z: &Word) -> Result<Vec<Word>> {
    let z = normalize(g, z);
    if !is_cyclically_reduced(g, &z) {
        return Err(Error::domain("word is not cyclically reduced"));
    }
    let mut out = BTreeSet::new();
    for d in left_divisors(g, &z) {
        out.insert(normalize(g, &Word::concat_all([&d.inverse(), &z, &d])));
    }
    Ok(out.into_iter().collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least root of a single cyclically reduced block: (r, m) with r^m = v, m maximal.
pub(crate) fn block_root(g: &CommutationGraph, v: &Word) -> (Word, u64) {
    let ls = v.letters();
    let mut counts = vec![0u64; g.len()];
    for l in ls {
        counts[l.gen()] += 1;
    }
    let d = counts.iter().fold(0, |acc, &c| gcd(acc, c));
    let ranks = generator_ranks(g, ls);
    for m in (2..=d).rev().filter(|m| d % m == 0) {
        let take = |i: usize| (ranks[i] as u64) < counts[ls[i].gen()] / m;
        let mut last = vec![usize::MAX; g.len()];
        let mut closed = true;
        for (i, l) in ls.iter().enumerate() {
            if take(i) {
                for &h in g.dependent(l.gen()) {
                    let p = last[h];
                    if p != usize::MAX && !take(p) {
                        closed = false;
                    }
                }
            }
            last[l.gen()] = i;
        }
        if !closed {
            continue;
        }
        let r: Word = (0..ls.len()).filter(|&i| take(i)).map(|i| ls[i]).collect();
        if normalize(g, &r.pow(m as i64)) == *v {
            return (normalize(g, &r), m);
        }
    }
    (v.clone(), 1)
}

/// Least root: (r, m) with r^m = w and m maximal.
pub fn root(g: &CommutationGraph, w: &Word) -> Result<(Word, u64)> {
    let cd = cyclic_reduce(g, w);
    if cd.core.is_empty() {
        return Err(Error::domain("the identity has no root"));
    }
    let roots: Vec<(Word, u64)> =
        block_decomposition(g, &cd.core).iter().map(|b| block_root(g, b)).collect();
    let m = roots.iter().fold(0, |acc, (_, e)| gcd(acc, *e));
    let mut parts = vec![cd.conjugator.clone()];
    for (r, e) in &roots {
        parts.push(r.pow((e / m) as i64));
    }
    parts.push(cd.conjugator.inverse());
    Ok((normalize(g, &Word::concat_all(parts.iter())), m))
}

/// Every canonical geodesic of length ≤ `radius`, in shortlex order.
pub fn enumerate_geodesics(g: &CommutationGraph, radius: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for len in 1..=radius {
        let mut next = BTreeSet::new();
        for w in &layer {
            for gen in 0..g.len() {
                for inv in [false, true] {
                    let ext = w.concat(&Word::letter(Letter::new(gen, inv)));
                    let nw = normalize(g, &ext);
                    if nw.len() == len {
                        next.insert(nw);
                    }
                }
            }
        }
        layer = next.into_iter().collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every letter of the alphabet A^{±1}, in letter order.
pub fn all_letters(g: &CommutationGraph) -> Vec<Letter> {
    (0..g.len()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    fn w(g: &CommutationGraph, s: &str) -> Word {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let g = g1();
        let x = w(&g, "a^2 b^-1 c 1 c");
        assert_eq!(x.len(), 5);
        assert_eq!(format_word(&g, &x), "a^2 b^-1 c^2");
        assert_eq!(format_word(&g, &Word::empty()), "1");
        assert!(parse_word(&g, "d").is_err());
        assert!(parse_word(&g, "a^0").is_err());
        assert!(parse_word(&g, "a^x").is_err());
    }

    #[test]
    fn normalize_examples() {
        let g = g1();
        assert!(normalize(&g, &w(&g, "c a b a^-1 b^-1 c^-1")).is_empty());
        assert_eq!(normalize(&g, &w(&g, "a b a^-1")), w(&g, "b"));
        assert_eq!(normalize(&g, &w(&g, "c b c^-1")), w(&g, "c b c^-1"));
        assert_eq!(normalize(&g, &w(&g, "b a")), w(&g, "a b"));
    }

    #[test]
    fn equals_examples() {
        let g = g1();
        assert!(equals(&g, &w(&g, "a b"), &w(&g, "b a")));
        assert!(!equals(&g, &w(&g, "a c"), &w(&g, "c a")));
        assert!(equals(&g, &w(&g, "c a b a^-1 b^-1 c^-1"), &Word::empty()));
    }

    #[test]
    fn geodesic_examples() {
        let g = g1();
        assert!(!is_geodesic(&g, &w(&g, "a b a^-1")));
        assert!(is_geodesic(&g, &w(&g, "a c a^-1")));
        assert!(is_geodesic(&g, &Word::empty()));
        assert!(find_cancellable_pattern(&g, &w(&g, "a c a^-1")).is_none());
        assert_eq!(find_cancellable_pattern(&g, &w(&g, "a b a^-1")), Some((0, 2)));
    }

    #[test]
    fn alpha_and_a_set() {
        let g = g1();
        assert_eq!(alpha(&g, &w(&g, "a b a^-1")), BTreeSet::from([1]));
        assert_eq!(alpha(&g, &w(&g, "a c")), BTreeSet::from([0, 2]));
        assert!(alpha(&g, &Word::empty()).is_empty());
        assert_eq!(a_set(&g, &w(&g, "a")), BTreeSet::from([1]));
        assert!(a_set(&g, &w(&g, "c")).is_empty());
        assert_eq!(a_set(&g, &Word::empty()), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn concat_examples() {
        let g = g1();
        assert!(is_geodesic_concat(&g, &w(&g, "a"), &w(&g, "c")).unwrap());
        assert!(!is_geodesic_concat(&g, &w(&g, "a"), &w(&g, "a^-1")).unwrap());
        assert!(is_geodesic_concat(&g, &w(&g, "a c"), &w(&g, "a")).unwrap());
        assert!(is_geodesic_concat(&g, &w(&g, "a a^-1"), &w(&g, "a")).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let g = g1();
        assert!(left_divides(&g, &w(&g, "a"), &w(&g, "a b")));
        assert!(left_divides(&g, &w(&g, "b"), &w(&g, "a b")));
        assert!(!left_divides(&g, &w(&g, "c"), &w(&g, "a c")));
        assert!(right_divides(&g, &w(&g, "c"), &w(&g, "a c")));
        assert_eq!(left_gcd(&g, &w(&g, "a b"), &w(&g, "a c")), w(&g, "a"));
        assert!(left_gcd(&g, &w(&g, "c"), &w(&g, "a")).is_empty());
    }

    #[test]
    fn block_examples() {
        let g = g1();
        assert_eq!(block_decomposition(&g, &w(&g, "a b")), vec![w(&g, "a"), w(&g, "b")]);
        assert_eq!(block_decomposition(&g, &w(&g, "a c")), vec![w(&g, "a c")]);
        assert!(block_decomposition(&g, &Word::empty()).is_empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = g1();
        let cd = cyclic_reduce(&g, &w(&g, "a c a^-1"));
        assert_eq!((cd.conjugator, cd.core), (w(&g, "a"), w(&g, "c")));
        let cd = cyclic_reduce(&g, &w(&g, "a c"));
        assert_eq!((cd.conjugator, cd.core), (Word::empty(), w(&g, "a c")));
        let cd = cyclic_reduce(&g, &Word::empty());
        assert!(cd.conjugator.is_empty() && cd.core.is_empty());
    }

    #[test]
    fn cyclic_permutation_examples() {
        let g = g1();
        let perms = cyclic_permutations(&g, &w(&g, "a c")).unwrap();
        assert_eq!(perms, vec![w(&g, "a c"), w(&g, "c a")]);
        assert_eq!(cyclic_permutations(&g, &w(&g, "a b")).unwrap(), vec![w(&g, "a b")]);
        assert_eq!(cyclic_permutations(&g, &w(&g, "a")).unwrap(), vec![w(&g, "a")]);
        assert!(cyclic_permutations(&g, &w(&g, "a c a^-1")).is_err());
    }

    #[test]
    fn root_examples() {
        let g = g1();
        assert_eq!(root(&g, &w(&g, "a c a c")).unwrap(), (w(&g, "a c"), 2));
        assert_eq!(root(&g, &w(&g, "a")).unwrap(), (w(&g, "a"), 1));
        assert_eq!(root(&g, &w(&g, "a^2 b^2")).unwrap(), (w(&g, "a b"), 2));
        assert_eq!(root(&g, &w(&g, "c a^3 c^-1")).unwrap(), (w(&g, "c a c^-1"), 3));
        assert!(root(&g, &Word::empty()).is_err());
    }

    #[test]
    fn ball_counts() {
        let g = g1();
        assert_eq!(enumerate_geodesics(&g, 1).len(), 7);
        let f2 = CommutationGraph::parse("gens: a b\n").unwrap();
        assert_eq!(enumerate_geodesics(&f2, 2).len(), 17);
        let z2 = CommutationGraph::parse("gens: a b\nedge: a b\n").unwrap();
        assert_eq!(enumerate_geodesics(&z2, 2).len(), 13);
    }

    #[test]
    fn monoid_form_keeps_inverse_pairs() {
        let g = g1();
        let x = w(&g, "a a^-1");
        assert_eq!(monoid_normal_form(&g, &x).len(), 2);
        assert!(monoid_equal(&g, &w(&g, "a^-1 b"), &w(&g, "b a^-1")));
        assert!(!monoid_equal(&g, &w(&g, "a a^-1"), &w(&g, "a^-1 a")));
    }
}
