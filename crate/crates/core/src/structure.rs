//! Centralisers, conjugacy, domain witnesses and separation in G[X].

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{EncodingWitness, Formula};
use crate::graph::CommutationGraph;
use crate::trace::{self, Letter, Word};

/// C(w) = conj · (⟨√v₁⟩ × ⋯ × ⟨√v_k⟩ × ⟨𝔸(core)⟩) · conj⁻¹ for
/// w = conj ∘ core ∘ conj⁻¹ with blocks v_i of the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentraliserDescription {
    pub conjugator: Word,
    pub core: Word,
    pub cyclic_parts: Vec<Word>,
    pub abelian_part: Vec<usize>,
}

impl CentraliserDescription {
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_parts.len() == 1 && self.abelian_part.is_empty()
    }

    /// Generators of the subgroup, conjugated back, in canonical form.
    pub fn generators(&self, g: &CommutationGraph) -> Vec<Word> {
        let conj = |x: &Word| trace::normalize(g, &Word::concat_all([&self.conjugator, x, &self.conjugator.inverse()]));
        self.cyclic_parts
            .iter()
            .map(conj)
            .chain(self.abelian_part.iter().map(|&i| conj(&Word::letter(Letter::pos(i)))))
            .collect()
    }

    pub fn to_json(&self, g: &CommutationGraph) -> serde_json::Value {
        let f = |w: &Word| trace::format_word(g, w);
        serde_json::json!({
            "conjugator": f(&self.conjugator),
            "core": f(&self.core),
            "cyclic_parts": self.cyclic_parts.iter().map(f).collect::<Vec<_>>(),
            "abelian_part": self.abelian_part.iter().map(|&i| g.name(i)).collect::<Vec<_>>(),
            "generators": self.generators(g).iter().map(f).collect::<Vec<_>>(),
            "cyclic": self.is_cyclic(),
        })
    }
}

pub fn centraliser(g: &CommutationGraph, w: &Word) -> Result<CentraliserDescription> {
    let cd = trace::cyclic_reduce(g, w);
    if cd.core.is_empty() {
        return Err(Error::domain("the centraliser of the identity is the whole group"));
    }
    let cyclic_parts = trace::block_decomposition(g, &cd.core)
        .iter()
        .map(|b| trace::block_root(g, b).0)
        .collect();
    let abelian_part = trace::a_set(g, &cd.core).into_iter().collect();
    Ok(CentraliserDescription { conjugator: cd.conjugator, core: cd.core, cyclic_parts, abelian_part })
}

pub fn has_cyclic_centraliser(g: &CommutationGraph, w: &Word) -> Result<bool> {
    Ok(centraliser(g, w)?.is_cyclic())
}

/// Some t with t·z·t⁻¹ = target for cyclically reduced blocks z, target,
/// by a breadth-first search over cyclic permutations of z.
fn block_conjugator(g: &CommutationGraph, z: &Word, target: &Word) -> Option<Word> {
    let mut seen: HashMap<Word, Word> = HashMap::new();
    seen.insert(z.clone(), Word::empty());
    let mut queue = VecDeque::from([z.clone()]);
    while let Some(cur) = queue.pop_front() {
        let t = seen[&cur].clone();
        if &cur == target {
            return Some(t);
        }
        let ls = cur.letters();
        let mut moves = Vec::new();
        // first letter to the end: x⁻¹·cur·x
        for i in trace::minimal_positions(g, ls) {
            let x = Word::letter(ls[i]);
            moves.push((Word::concat_all([&x.inverse(), &cur, &x]), x.inverse()));
        }
        // last letter to the front: x·cur·x⁻¹
        for i in trace::maximal_positions(g, ls) {
            let x = Word::letter(ls[i]);
            moves.push((Word::concat_all([&x, &cur, &x.inverse()]), x));
        }
        for (next, step) in moves {
            let next = trace::normalize(g, &next);
            if !seen.contains_key(&next) {
                let nt = trace::normalize(g, &step.concat(&t));
                seen.insert(next.clone(), nt);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Some T with T·u·T⁻¹ = v, if u and v are conjugate.
pub fn conjugate(g: &CommutationGraph, u: &Word, v: &Word) -> Result<Option<Word>> {
    let cu = trace::cyclic_reduce(g, u);
    let cv = trace::cyclic_reduce(g, v);
    let bu = trace::block_decomposition(g, &cu.core);
    let bv = trace::block_decomposition(g, &cv.core);
    if bu.len() != bv.len() {
        return Ok(None);
    }
    let by_alpha = |bs: &[Word]| -> BTreeMap<Vec<usize>, Word> {
        bs.iter().map(|b| (b.support().into_iter().collect(), b.clone())).collect()
    };
    let (mu, mv) = (by_alpha(&bu), by_alpha(&bv));
    let mut t = Word::empty();
    for (alpha, zb) in &mu {
        let Some(tb) = mv.get(alpha) else { return Ok(None) };
        if zb.len() != tb.len() {
            return Ok(None);
        }
        match block_conjugator(g, zb, tb) {
            Some(c) => t = t.concat(&c),
            None => return Ok(None),
        }
    }
    let whole = trace::normalize(g, &Word::concat_all([&cv.conjugator, &t, &cu.conjugator.inverse()]));
    let check = Word::concat_all([&whole, u, &whole.inverse()]);
    if !trace::equals(g, &check, v) {
        return Err(Error::invariant("assembled conjugator does not conjugate"));
    }
    Ok(Some(whole))
}

/// Two non-commuting full-alphabet words with cyclic centralisers, and the
/// conjugation exponent used by the domain system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainWitness {
    pub a: Word,
    pub b: Word,
    pub exponent: usize,
}

impl DomainWitness {
    pub fn encoding(&self, g: &CommutationGraph) -> EncodingWitness {
        EncodingWitness::from_words(g, &self.a, &self.b, self.exponent as i64)
    }

    pub fn to_json(&self, g: &CommutationGraph) -> serde_json::Value {
        serde_json::json!({
            "a": trace::format_word(g, &self.a),
            "b": trace::format_word(g, &self.b),
            "exponent": self.exponent,
        })
    }
}

pub fn default_exponent(g: &CommutationGraph) -> usize {
    3 * g.cdim_estimate().chosen + 4
}

pub fn domain_witnesses(g: &CommutationGraph) -> Result<DomainWitness> {
    if g.is_abelian() {
        return Err(Error::domain("the group is abelian, hence not a domain"));
    }
    if !g.is_indecomposable() {
        return Err(Error::domain("the group is a nontrivial direct product, hence not a domain"));
    }
    let (a, b) = crate::merzlyakov::base_elements(g)?;
    check_witness_pair(g, &a, &b)?;
    Ok(DomainWitness { a, b, exponent: default_exponent(g) })
}

/// Cyclic centralisers meeting trivially. For cyclic C(a), C(b), a common
/// nontrivial element would make the roots commute, so non-commutation of
/// the roots decides it.
pub fn check_witness_pair(g: &CommutationGraph, a: &Word, b: &Word) -> Result<()> {
    for (name, w) in [("a", a), ("b", b)] {
        if trace::is_trivial(g, w) || !has_cyclic_centraliser(g, w)? {
            return Err(Error::invariant(format!("witness {name} lacks a cyclic centraliser")));
        }
    }
    let (ra, _) = trace::root(g, a)?;
    let (rb, _) = trace::root(g, b)?;
    if trace::commute(g, &ra, &rb) {
        return Err(Error::invariant("witness centralisers intersect"));
    }
    Ok(())
}

pub fn domain_system(g: &CommutationGraph, w: &DomainWitness) -> Vec<Formula> {
    crate::formulas::domain_system(&w.encoding(g))
}

/// Whether g^N z g^{-N} = g ∘ m ∘ g⁻¹ without cancellation, for a cyclically
/// reduced block g.
pub fn power_conjugate_split(g: &CommutationGraph, z: &Word, block: &Word, n: usize) -> Result<bool> {
    let block = trace::normalize(g, block);
    if block.is_empty() || !trace::is_cyclically_reduced(g, &block) || trace::block_decomposition(g, &block).len() != 1 {
        return Err(Error::domain("conjugating word is not a cyclically reduced block"));
    }
    let z = trace::normalize(g, z);
    if z.is_empty() {
        return Ok(true);
    }
    let gn = block.pow(n as i64);
    let w = trace::normalize(g, &Word::concat_all([&gn, &z, &gn.inverse()]));
    let mid = trace::normalize(g, &Word::concat_all([&block.inverse(), &w, &block]));
    if mid.len() + 2 * block.len() != w.len() {
        return Ok(false);
    }
    let left = block.concat(&mid);
    Ok(trace::is_geodesic_concat(g, &block, &mid)? && trace::is_geodesic_concat(g, &left, &block.inverse())?)
}

/// Replaces each variable letter by its assigned word.
pub fn specialise(gx: &CommutationGraph, base: &CommutationGraph, w: &Word, values: &HashMap<usize, Word>) -> Result<Word> {
    let mut out = Word::empty();
    for &l in w.letters() {
        if l.gen() < base.len() {
            out.push(l);
            continue;
        }
        let val = values
            .get(&l.gen())
            .ok_or_else(|| Error::invalid(format!("no value for variable `{}`", gx.name(l.gen()))))?;
        out = out.concat(&if l.is_inverse() { val.inverse() } else { val.clone() });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Separation {
    pub assignment: Vec<(String, String)>,
    pub image: String,
    pub method: String,
}

/// An assignment of the variables of `gx` (vertices beyond `base`) under
/// which `w` stays nontrivial in the base group.
pub fn separate_in_gx(gx: &CommutationGraph, base: &CommutationGraph, w: &Word, fallback_radius: usize) -> Result<Separation> {
    if trace::is_trivial(gx, w) {
        return Err(Error::domain("the word is trivial in G[X]"));
    }
    let vars: Vec<usize> = (base.len()..gx.len()).collect();
    let render = |vals: &HashMap<usize, Word>, image: &Word, method: &str| Separation {
        assignment: vars.iter().map(|&v| (gx.name(v).to_string(), trace::format_word(base, &vals[&v]))).collect(),
        image: trace::format_word(base, image),
        method: method.to_string(),
    };

    if let Ok(wit) = domain_witnesses(base) {
        let step = 6 * base.cdim_estimate().chosen as i64 + 8;
        let vals: HashMap<usize, Word> =
            vars.iter().enumerate().map(|(i, &v)| (v, wit.a.pow(step * (i as i64 + 1)))).collect();
        let image = trace::normalize(base, &specialise(gx, base, w, &vals)?);
        if !image.is_empty() {
            return Ok(render(&vals, &image, "power"));
        }
    }

    let ball = trace::enumerate_geodesics(base, fallback_radius);
    let total = (ball.len() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if total > 10_000_000 {
        return Err(Error::Guard(format!("fallback search over {total} assignments")));
    }
    let mut idx = vec![0usize; vars.len()];
    loop {
        let vals: HashMap<usize, Word> = vars.iter().zip(&idx).map(|(&v, &i)| (v, ball[i].clone())).collect();
        let image = trace::normalize(base, &specialise(gx, base, w, &vals)?);
        if !image.is_empty() {
            return Ok(render(&vals, &image, "search"));
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Err(Error::domain("no separating assignment found in the search ball"));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < ball.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::parse_word;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    fn w(g: &CommutationGraph, s: &str) -> Word {
        parse_word(g, s).unwrap()
    }

    #[test]
    fn centraliser_examples() {
        let g = g1();
        let c = centraliser(&g, &w(&g, "a")).unwrap();
        assert_eq!(c.cyclic_parts, vec![w(&g, "a")]);
        assert_eq!(c.abelian_part, vec![1]);
        let c = centraliser(&g, &w(&g, "c")).unwrap();
        assert!(c.is_cyclic());
        let c = centraliser(&g, &w(&g, "a c a c")).unwrap();
        assert_eq!(c.cyclic_parts, vec![w(&g, "a c")]);
        assert!(c.abelian_part.is_empty());
        assert!(centraliser(&g, &Word::empty()).is_err());
        assert!(has_cyclic_centraliser(&g, &w(&g, "a c")).unwrap());
        assert!(!has_cyclic_centraliser(&g, &w(&g, "a")).unwrap());
    }

    #[test]
    fn conjugated_centraliser_generators_commute() {
        let g = g1();
        let x = w(&g, "c a^2 b c^-1");
        for gen in centraliser(&g, &x).unwrap().generators(&g) {
            assert!(trace::commute(&g, &gen, &x));
        }
    }

    #[test]
    fn conjugacy_examples() {
        let g = g1();
        let t = conjugate(&g, &w(&g, "a c"), &w(&g, "c a")).unwrap().unwrap();
        assert!(t == w(&g, "a^-1") || t == w(&g, "c"));
        assert_eq!(conjugate(&g, &w(&g, "a b"), &w(&g, "b a")).unwrap(), Some(Word::empty()));
        assert_eq!(conjugate(&g, &w(&g, "a"), &w(&g, "c")).unwrap(), None);
        assert_eq!(conjugate(&g, &w(&g, "a c"), &w(&g, "a c^-1")).unwrap(), None);
    }

    #[test]
    fn conjugacy_needs_more_than_one_rotation() {
        // a–c commute; cba is conjugate to abc only through several rotations.
        let g = CommutationGraph::parse("gens: a b c\nedge: a c\n").unwrap();
        let u = w(&g, "a b c");
        let v = w(&g, "c b a");
        let t = conjugate(&g, &u, &v).unwrap().unwrap();
        assert!(trace::equals(&g, &Word::concat_all([&t, &u, &t.inverse()]), &v));
    }

    #[test]
    fn witnesses() {
        let g = g1();
        let d = domain_witnesses(&g).unwrap();
        assert_eq!(d.exponent, 10);
        assert_eq!(d.b, w(&g, "a c b c a"));
        assert_eq!(d.a, w(&g, "c a c b c a c"));
        assert!(domain_witnesses(&CommutationGraph::parse("gens: a b\nedge: a b\n").unwrap()).is_err());
        assert!(domain_witnesses(&CommutationGraph::parse("gens: a b c\nedge: a b\nedge: b c\n").unwrap()).is_err());
    }

    #[test]
    fn power_split_examples() {
        let g = g1();
        assert!(power_conjugate_split(&g, &w(&g, "c"), &w(&g, "a c"), 10).unwrap());
        assert!(!power_conjugate_split(&g, &w(&g, "a c"), &w(&g, "a c"), 10).unwrap());
        assert!(power_conjugate_split(&g, &Word::empty(), &w(&g, "a c"), 10).unwrap());
        assert!(power_conjugate_split(&g, &w(&g, "c"), &w(&g, "a b"), 3).is_err());
    }

    #[test]
    fn separation_examples() {
        let g = g1();
        let gx = g.extend(&["x".to_string()], &[]).unwrap();
        let s = separate_in_gx(&gx, &g, &w(&gx, "x"), 2).unwrap();
        assert_eq!(s.method, "power");
        let s = separate_in_gx(&gx, &g, &w(&gx, "x^-1 c^-1 x c"), 2).unwrap();
        assert!(s.image != "1");
        assert!(separate_in_gx(&gx, &g, &w(&gx, "x x^-1"), 2).is_err());
    }
}
