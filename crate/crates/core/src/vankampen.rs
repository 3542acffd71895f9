//! Cancellation schemes: occurrence pairings of trivial words (bands) and the
//! product decomposition of a trivial product of geodesic factors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::CommutationGraph;
use crate::trace::{self, Word};

/// Pairs `(i, j)`, `i < j`, of occurrences that cancel, sorted by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationPairing {
    pub pairs: Vec<(usize, usize)>,
    pub len: usize,
}

impl CancellationPairing {
    pub fn is_complete(&self) -> bool {
        2 * self.pairs.len() == self.len
    }

    /// Partner of each occurrence, if any.
    pub fn partners(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.len];
        for &(i, j) in &self.pairs {
            out[i] = Some(j);
            out[j] = Some(i);
        }
        out
    }
}

/// Pairing induced by the canonical left-to-right reduction.
pub fn cancellation_pairing(g: &CommutationGraph, w: &Word) -> CancellationPairing {
    let mut pairs = Vec::new();
    trace::reduce_indices(g, w.letters(), Some(&mut pairs));
    pairs.sort_unstable();
    CancellationPairing { pairs, len: w.len() }
}

/// Checks the pairing invariants: inverse letters, letters unpaired inside a
/// span commute with the paired letter, and crossing pairs carry distinct
/// commuting generators.
pub fn check_pairing(g: &CommutationGraph, w: &Word, p: &CancellationPairing) -> Result<()> {
    let ls = w.letters();
    let partner = p.partners();
    for &(i, j) in &p.pairs {
        if i >= j || ls[j] != ls[i].inverse() {
            return Err(Error::invariant(format!("pair ({i},{j}) does not carry inverse letters")));
        }
        for k in i + 1..j {
            let inside = partner[k].is_some_and(|q| q > i && q < j);
            if !inside && (ls[k].gen() == ls[i].gen() || !g.commutes(ls[k].gen(), ls[i].gen())) {
                return Err(Error::invariant(format!("occurrence {k} blocks pair ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// Pieces `pieces[l][i]` (0-based factors) with the optional remainders `v_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductScheme {
    pub k: usize,
    pub pieces: Vec<Vec<Option<Word>>>,
    pub remainders: Option<Vec<Word>>,
    pub pairing: CancellationPairing,
}

impl ProductScheme {
    pub fn piece(&self, l: usize, i: usize) -> &Word {
        self.pieces[l][i].as_ref().expect("diagonal piece is undefined")
    }

    /// The factor `l` reassembled in the order w_l^{l-1}⋯w_l^1 · v_l · w_l^k⋯w_l^{l+1}.
    pub fn reassemble(&self, l: usize) -> Word {
        let mut parts: Vec<&Word> = (0..l).rev().map(|i| self.piece(l, i)).collect();
        if let Some(rem) = &self.remainders {
            parts.push(&rem[l]);
        }
        parts.extend((l + 1..self.k).rev().map(|i| self.piece(l, i)));
        Word::concat_all(parts)
    }

    /// Serializable view: 1-based `"l,i"` keys.
    pub fn to_json(&self, g: &CommutationGraph) -> serde_json::Value {
        let mut pieces = BTreeMap::new();
        for l in 0..self.k {
            for i in 0..self.k {
                if let Some(p) = &self.pieces[l][i] {
                    pieces.insert(format!("{},{}", l + 1, i + 1), trace::format_word(g, p));
                }
            }
        }
        let mut obj = serde_json::json!({
            "pairs": self.pairing.pairs.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "pieces": pieces,
        });
        if let Some(rem) = &self.remainders {
            obj["remainders"] = rem.iter().map(|v| trace::format_word(g, v)).collect();
        }
        obj
    }
}

/// Splits a trivial product w₁⋯w_k of geodesic words into the pieces of the
/// cancellation scheme.
pub fn product_scheme(g: &CommutationGraph, ws: &[Word]) -> Result<ProductScheme> {
    for (l, w) in ws.iter().enumerate() {
        if !trace::is_geodesic(g, w) {
            return Err(Error::invalid(format!("factor {} is not geodesic", l + 1)));
        }
    }
    let whole = Word::concat_all(ws.iter());
    let pairing = cancellation_pairing(g, &whole);
    if !pairing.is_complete() {
        return Err(Error::domain("the product is not trivial"));
    }
    let k = ws.len();
    let mut owner = Vec::with_capacity(whole.len());
    for (l, w) in ws.iter().enumerate() {
        owner.extend(std::iter::repeat_n(l, w.len()));
    }
    let partner = pairing.partners();
    let mut pieces: Vec<Vec<Option<Word>>> =
        (0..k).map(|l| (0..k).map(|i| (i != l).then(Word::empty)).collect()).collect();
    for (pos, &l) in owner.iter().enumerate() {
        let q = partner[pos].ok_or_else(|| Error::invariant("unpaired occurrence in trivial product"))?;
        let target = owner[q];
        if target == l {
            return Err(Error::invariant(format!("band with both ends in factor {}", l + 1)));
        }
        pieces[l][target].as_mut().unwrap().push(whole.letters()[pos]);
    }
    let scheme = ProductScheme { k, pieces, remainders: None, pairing };
    for l in 0..k {
        if !trace::monoid_equal(g, &scheme.reassemble(l), &ws[l]) {
            return Err(Error::invariant(format!("factor {} does not reassemble", l + 1)));
        }
        for i in l + 1..k {
            let prod = scheme.piece(l, i).concat(scheme.piece(i, l));
            if !trace::is_trivial(g, &prod) {
                return Err(Error::invariant(format!("pieces ({},{}) are not mutually inverse", l + 1, i + 1)));
            }
        }
    }
    Ok(scheme)
}

/// As `product_scheme`, for w₁⋯w_k = v: each factor also carries a remainder
/// v_l with v = v₁∘⋯∘v_k.
pub fn product_scheme_rem(g: &CommutationGraph, ws: &[Word], v: &Word) -> Result<ProductScheme> {
    if !trace::is_geodesic(g, v) {
        return Err(Error::invalid("remainder is not geodesic"));
    }
    if !trace::equals(g, &Word::concat_all(ws.iter()), v) {
        return Err(Error::domain("the product does not equal the remainder"));
    }
    let k = ws.len();
    let mut all = ws.to_vec();
    all.push(v.inverse());
    let full = product_scheme(g, &all)?;
    let remainders: Vec<Word> = (0..k).map(|l| full.piece(l, k).clone()).collect();
    let pieces = full.pieces.iter().take(k).map(|row| row[..k].to_vec()).collect();
    let joined = Word::concat_all(remainders.iter());
    if joined.len() != v.len() || !trace::monoid_equal(g, &joined, v) {
        return Err(Error::invariant("remainders do not multiply to v"));
    }
    Ok(ProductScheme { k, pieces, remainders: Some(remainders), pairing: full.pairing })
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
    fn six_letter_commutator_pairing() {
        let g = g1();
        let x = w(&g, "c a b a^-1 b^-1 c^-1");
        let p = cancellation_pairing(&g, &x);
        assert_eq!(p.pairs, vec![(0, 5), (1, 3), (2, 4)]);
        check_pairing(&g, &x, &p).unwrap();
        assert_eq!(cancellation_pairing(&g, &w(&g, "a a^-1")).pairs, vec![(0, 1)]);
        assert!(cancellation_pairing(&g, &w(&g, "a c")).pairs.is_empty());
    }

    #[test]
    fn two_factor_scheme() {
        let g = g1();
        let u = w(&g, "a c b");
        let s = product_scheme(&g, &[u.clone(), u.inverse()]).unwrap();
        assert_eq!(s.piece(0, 1), &u);
        assert_eq!(s.piece(1, 0), &u.inverse());
        assert!(product_scheme(&g, &[w(&g, "a"), w(&g, "b")]).is_err());
    }

    #[test]
    fn three_factor_scheme() {
        let g = g1();
        let ws = [w(&g, "c a"), w(&g, "b a^-1"), w(&g, "b^-1 c^-1")];
        let s = product_scheme(&g, &ws).unwrap();
        assert_eq!(s.piece(0, 1), &w(&g, "a"));
        assert_eq!(s.piece(0, 2), &w(&g, "c"));
        assert_eq!(s.piece(1, 0), &w(&g, "a^-1"));
        assert_eq!(s.piece(1, 2), &w(&g, "b"));
    }

    #[test]
    fn remainder_scheme() {
        let g = g1();
        let v = w(&g, "a c b");
        let s = product_scheme_rem(&g, std::slice::from_ref(&v), &v).unwrap();
        assert_eq!(s.remainders.as_ref().unwrap()[0], v);
        let s = product_scheme_rem(&g, &[w(&g, "a c"), w(&g, "c^-1")], &w(&g, "a")).unwrap();
        assert_eq!(s.piece(0, 1), &w(&g, "c"));
        assert_eq!(s.remainders.as_ref().unwrap()[0], w(&g, "a"));
        assert!(product_scheme_rem(&g, &[w(&g, "a"), w(&g, "b")], &w(&g, "c")).is_err());
    }
}
