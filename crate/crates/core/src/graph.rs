//! Commutation graphs and the structure read off their complement.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Finite simple graph on named generators; an edge means the two generators commute.
#[derive(Clone, Debug)]
pub struct CommutationGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    commute: Vec<bool>,
    dependent: Vec<Vec<usize>>,
}

impl PartialEq for CommutationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.commute == other.commute
    }
}

impl Eq for CommutationGraph {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CdimEstimate {
    pub lower: usize,
    pub lattice_height: usize,
    pub chosen: usize,
}

pub(crate) fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl CommutationGraph {
    /// Builds a graph from generator names and commuting pairs (by name).
    pub fn new<S: AsRef<str>>(names: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate generator `{n}`")));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *index.get(u).ok_or_else(|| Error::invalid(format!("unknown endpoint `{u}`")))?;
            let iv = *index.get(v).ok_or_else(|| Error::invalid(format!("unknown endpoint `{v}`")))?;
            if iu == iv {
                return Err(Error::invalid(format!("self-loop on `{u}`")));
            }
            pairs.push((iu, iv));
        }
        Ok(Self::from_indices(names, index, &pairs))
    }

    fn from_indices(names: Vec<String>, index: HashMap<String, usize>, pairs: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut commute = vec![false; n * n];
        for &(u, v) in pairs {
            commute[u * n + v] = true;
            commute[v * n + u] = true;
        }
        let dependent = (0..n)
            .map(|i| (0..n).filter(|&j| j == i || !commute[i * n + j]).collect())
            .collect();
        CommutationGraph { names, index, commute, dependent }
    }

    /// Parses the line-oriented graph file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut edges: Vec<(String, String, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.is_some() {
                    return Err(Error::parse(lineno, "`gens:` given twice"));
                }
                let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                for g in &list {
                    if !valid_generator_name(g) {
                        return Err(Error::parse(lineno, format!("bad generator name `{g}`")));
                    }
                }
                gens = Some(list);
            } else if let Some(rest) = line.strip_prefix("edge:") {
                let ends: Vec<&str> = rest.split_whitespace().collect();
                if ends.len() != 2 {
                    return Err(Error::parse(lineno, "an edge needs exactly two endpoints"));
                }
                edges.push((ends[0].to_string(), ends[1].to_string(), lineno));
            } else {
                return Err(Error::parse(lineno, format!("unrecognised line `{line}`")));
            }
        }
        let gens = gens.ok_or_else(|| Error::parse(1, "missing `gens:` line"))?;
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g) {
                return Err(Error::invalid(format!("duplicate generator `{g}`")));
            }
        }
        let pairs: Vec<(String, String)> = edges.iter().map(|(u, v, _)| (u.clone(), v.clone())).collect();
        Self::new(&gens, &pairs)
    }

    /// Renders the graph back into the file format, edges in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.names.join(" "));
        for (u, v) in self.edges() {
            out.push_str(&format!("edge: {} {}\n", self.names[u], self.names[v]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// True iff `i != j` and the two generators commute.
    #[inline]
    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.commute[i * self.names.len() + j]
    }

    /// The generator itself followed by every generator it does not commute with.
    #[inline]
    pub fn dependent(&self, i: usize) -> &[usize] {
        &self.dependent[i]
    }

    /// Commuting pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.commutes(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges of the non-commutation graph.
    pub fn delta_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.commutes(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Adds new generators (appended after the existing ones, so old indices stay
    /// valid) together with their commuting pairs given by index.
    pub fn extend(&self, extra: &[String], extra_edges: &[(usize, usize)]) -> Result<Self> {
        let mut names = self.names.clone();
        let mut index = self.index.clone();
        for e in extra {
            if index.insert(e.clone(), names.len()).is_some() {
                return Err(Error::invalid(format!("generator `{e}` already present")));
            }
            names.push(e.clone());
        }
        let mut pairs = self.edges();
        for &(u, v) in extra_edges {
            if u == v || u >= names.len() || v >= names.len() {
                return Err(Error::invalid("bad edge in graph extension"));
            }
            pairs.push((u, v));
        }
        Ok(Self::from_indices(names, index, &pairs))
    }

    /// Full subgraph on the given vertices (in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let names: Vec<String> = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut pairs = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.commutes(u, v) {
                    pairs.push((i, j));
                }
            }
        }
        Self::from_indices(names, index, &pairs)
    }

    /// Connected components of Δ restricted to `subset`, each sorted, ordered by
    /// smallest vertex.
    pub fn delta_components_of(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let inside: BTreeSet<usize> = subset.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &inside {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in self.dependent(u) {
                    if inside.contains(&v) && seen.insert(v) {
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn delta_components(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.delta_components_of(&all)
    }

    /// The direct factors G(I₁) × ⋯ × G(I_k), one per component of Δ.
    pub fn direct_decomposition(&self) -> Vec<CommutationGraph> {
        self.delta_components().iter().map(|c| self.induced(c)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.delta_edges().is_empty()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.delta_components().len() <= 1
    }

    /// Diameter of Δ; `None` when Δ is disconnected.
    pub fn diameter_delta(&self) -> Option<usize> {
        let n = self.len();
        let mut best = 0;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in self.dependent(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            for &d in &dist {
                if d == usize::MAX {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }

    /// Generators commuting with every other generator.
    pub fn center_generators(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dependent(i).len() == 1).collect()
    }

    /// c(Y): generators commuting with or equal to every member of `ys`.
    fn star_meet(&self, ys: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| ys.iter().all(|&y| x == y || self.commutes(x, y)))
            .collect()
    }

    /// Longest strictly descending chain of closed generator sets under Y ↦ cc(Y).
    pub fn lattice_height(&self) -> usize {
        let n = self.len();
        let top: Vec<usize> = (0..n).collect();
        let stars: Vec<BTreeSet<usize>> =
            (0..n).map(|y| self.star_meet(&[y]).into_iter().collect()).collect();
        // Closed sets are exactly the intersections of single-generator stars.
        let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
        closed.insert(top.clone());
        let mut frontier = vec![top];
        while let Some(s) = frontier.pop() {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            for star in &stars {
                let next: Vec<usize> = set.intersection(star).copied().collect();
                if closed.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        let mut sets: Vec<Vec<usize>> = closed.into_iter().collect();
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut depth = vec![0usize; sets.len()];
        for i in 0..sets.len() {
            for j in 0..i {
                if sets[j].len() > sets[i].len() && sets[i].iter().all(|x| sets[j].contains(x)) {
                    depth[i] = depth[i].max(depth[j] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Conservative centraliser-dimension estimate used for every downstream exponent.
    pub fn cdim_estimate(&self) -> CdimEstimate {
        if self.is_empty() {
            return CdimEstimate { lower: 0, lattice_height: 0, chosen: 0 };
        }
        let lattice_height = self.lattice_height();
        match self.diameter_delta() {
            Some(lower) => CdimEstimate { lower, lattice_height, chosen: lower.max(lattice_height).max(1) },
            None => {
                let mut lower = 0;
                let mut additive = 0;
                for comp in self.delta_components() {
                    if comp.len() == 1 {
                        // central generator: contributes to the center rank
                        additive += 1;
                        continue;
                    }
                    let est = self.induced(&comp).cdim_estimate();
                    lower += est.lower;
                    additive += est.chosen;
                }
                let chosen = additive.max(lattice_height).max(lower).max(1);
                CdimEstimate { lower, lattice_height, chosen }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = g1();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edges(), vec![(0, 1)]);
        let single = CommutationGraph::parse("gens: a\n").unwrap();
        assert_eq!(single.len(), 1);
        assert!(CommutationGraph::parse("gens: a b\nedge: a a\n").is_err());
        assert!(CommutationGraph::parse("gens: a a\n").is_err());
        assert!(CommutationGraph::parse("gens: a\nedge: a q\n").is_err());
        let commented = CommutationGraph::parse("# c\ngens: a b # two\n\nedge: b a\n").unwrap();
        assert_eq!(commented.edges(), vec![(0, 1)]);
    }

    #[test]
    fn gamma_and_delta_partition_pairs() {
        let g = g1();
        let n = g.len();
        assert_eq!(g.edges().len() + g.delta_edges().len(), n * (n - 1) / 2);
    }

    #[test]
    fn decomposition_examples() {
        let comps = g1().delta_components();
        assert_eq!(comps, vec![vec![0, 1, 2]]);
        let g = CommutationGraph::parse("gens: a b c\nedge: a b\nedge: b c\n").unwrap();
        assert_eq!(g.delta_components(), vec![vec![0, 2], vec![1]]);
        let z2 = CommutationGraph::parse("gens: a b\nedge: a b\n").unwrap();
        let parts = z2.direct_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].names(), &["a".to_string()]);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(g1().diameter_delta(), Some(2));
        let f2 = CommutationGraph::parse("gens: a b\n").unwrap();
        assert_eq!(f2.diameter_delta(), Some(1));
        let z2 = CommutationGraph::parse("gens: a b\nedge: a b\n").unwrap();
        assert_eq!(z2.diameter_delta(), None);
    }

    #[test]
    fn center_examples() {
        assert!(g1().center_generators().is_empty());
        let z3 = CommutationGraph::parse("gens: a b c\nedge: a b\nedge: b c\nedge: a c\n").unwrap();
        assert_eq!(z3.center_generators(), vec![0, 1, 2]);
        let star = CommutationGraph::parse("gens: h p q r\nedge: h p\nedge: h q\nedge: h r\n").unwrap();
        assert_eq!(star.center_generators(), vec![0]);
    }

    #[test]
    fn cdim_examples() {
        let e = g1().cdim_estimate();
        assert_eq!((e.lower, e.chosen), (2, 2));
        assert_eq!(e.lattice_height, 2);
        let f2 = CommutationGraph::parse("gens: a b\n").unwrap();
        assert_eq!(f2.cdim_estimate().chosen, 2);
        let z = CommutationGraph::parse("gens: a\n").unwrap();
        assert_eq!(z.cdim_estimate().chosen, 1);
    }

    #[test]
    fn text_round_trip() {
        let g = g1();
        assert_eq!(CommutationGraph::parse(&g.to_text()).unwrap(), g);
    }
}
