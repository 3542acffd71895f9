//! Partition tables and combinatorial generalised equations.
//!
//! A partition table cuts every occurrence `r_ij` of a system into a short
//! word `V_ij` over fresh letters `Z` (constants keep their letter unless
//! they cancel against a variable), such that each row vanishes in a
//! partially commutative group `Γ_T` on `A ⊔ Z`. Reading all `V_ij` in a row
//! gives the items `h_1 … h_ρ` of the generalised equation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::CommutationGraph;
use crate::system::{EqSystem, Sym, SysLetter};
use crate::trace::{self, Letter, Word};
use crate::vankampen;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    /// Γ_T: the base generators followed by `z1 … zp`.
    pub graph: CommutationGraph,
    pub base_len: usize,
    pub z_count: usize,
    /// `cells[i][j]` is V_ij, a word over Γ_T.
    pub cells: Vec<Vec<Word>>,
}

fn z_names(g: &CommutationGraph, k: usize) -> Vec<String> {
    let mut prefix = "z".to_string();
    while (1..=k).any(|i| g.index_of(&format!("{prefix}{i}")).is_some()) {
        prefix.insert(0, '_');
    }
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

impl PartitionTable {
    pub fn is_z(&self, l: Letter) -> bool {
        l.gen() >= self.base_len
    }

    pub fn row_word(&self, i: usize) -> Word {
        Word::concat_all(self.cells[i].iter())
    }

    /// Conditions 0)–3), agreement of Γ_T with Γ on A, and the extra rules
    /// the enumeration relies on (a z touches a variable cell; z-free cells
    /// only at constants).
    pub fn check(&self, g: &CommutationGraph, sys: &EqSystem) -> Result<()> {
        let bad = |m: String| Err(Error::domain(m));
        if self.graph.len() != self.base_len + self.z_count || self.base_len != g.len() {
            return bad("table graph does not extend the base graph".into());
        }
        for u in 0..g.len() {
            for v in 0..g.len() {
                if self.graph.commutes(u, v) != g.commutes(u, v) {
                    return bad("table graph disagrees with the base graph".into());
                }
            }
        }
        if self.cells.len() != sys.rows.len() {
            return bad("row count mismatch".into());
        }
        let mut seen: BTreeMap<Letter, (usize, usize)> = BTreeMap::new();
        for (i, row) in sys.rows.iter().enumerate() {
            let l = row.letters.len();
            if self.cells[i].len() != l {
                return bad(format!("row {} has the wrong number of cells", i + 1));
            }
            for (j, (cell, r)) in self.cells[i].iter().zip(&row.letters).enumerate() {
                if cell.len() > l.saturating_sub(1) {
                    return bad(format!("cell ({},{}) is longer than {}", i + 1, j + 1, l.saturating_sub(1)));
                }
                match r.sym {
                    Sym::Const(c) => {
                        if cell.len() != 1 {
                            return bad(format!("constant cell ({},{}) must have one letter", i + 1, j + 1));
                        }
                        let x = cell.letters()[0];
                        if !self.is_z(x) && x != Letter::new(c, r.inv) {
                            return bad(format!("constant cell ({},{}) changes its letter", i + 1, j + 1));
                        }
                    }
                    Sym::Var(_) => {
                        if cell.letters().iter().any(|&x| !self.is_z(x)) {
                            return bad(format!("variable cell ({},{}) contains a constant", i + 1, j + 1));
                        }
                    }
                }
                for &x in cell.letters() {
                    if self.is_z(x) && seen.insert(x, (i, j)).is_some() {
                        return bad(format!("letter {} occurs twice", self.graph.name(x.gen())));
                    }
                }
            }
        }
        for z in 0..self.z_count {
            let p = seen.get(&Letter::pos(self.base_len + z));
            let n = seen.get(&Letter::neg(self.base_len + z));
            match (p, n) {
                (Some(a), Some(b)) if a.0 == b.0 && a.1 != b.1 => {}
                _ => return bad(format!("z{} must occur once with each sign, in distinct cells of one row", z + 1)),
            }
        }
        for (x, _) in sys.vars.iter().enumerate() {
            let mut states = BTreeSet::new();
            for (i, row) in sys.rows.iter().enumerate() {
                for (j, r) in row.letters.iter().enumerate() {
                    if r.sym == Sym::Var(x) {
                        states.insert(self.cells[i][j].is_empty());
                    }
                }
            }
            if states.len() > 1 {
                return bad(format!("cells of ?{} are neither all empty nor all nonempty", sys.vars[x]));
            }
        }
        for i in 0..self.cells.len() {
            if !trace::is_trivial(&self.graph, &self.row_word(i)) {
                return bad(format!("row {} does not vanish in the table graph", i + 1));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let names = self.graph.names();
        let edges: Vec<[&str; 2]> = self
            .graph
            .edges()
            .into_iter()
            .filter(|&(u, v)| u >= self.base_len || v >= self.base_len)
            .map(|(u, v)| [names[u].as_str(), names[v].as_str()])
            .collect();
        let rows: Vec<Vec<String>> =
            self.cells.iter().map(|r| r.iter().map(|c| trace::format_word(&self.graph, c)).collect()).collect();
        json!({ "z": self.z_count, "z_names": &names[self.base_len..], "edges": edges, "rows": rows })
    }

    pub fn from_json(g: &CommutationGraph, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::invalid(format!("table JSON: {m}"));
        let z_count = v["z"].as_u64().ok_or_else(|| bad("missing `z`"))? as usize;
        let names: Vec<String> = match v.get("z_names").and_then(Value::as_array) {
            Some(a) => a.iter().map(|n| n.as_str().map(String::from).ok_or_else(|| bad("bad z name"))).collect::<Result<_>>()?,
            None => z_names(g, z_count),
        };
        if names.len() != z_count {
            return Err(bad("z_names length differs from z"));
        }
        let bare = g.extend(&names, &[])?;
        let mut edges = Vec::new();
        for e in v["edges"].as_array().ok_or_else(|| bad("missing `edges`"))? {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("edge must be a pair"))?;
            let idx = |x: &Value| -> Result<usize> {
                let n = x.as_str().ok_or_else(|| bad("edge endpoint must be a name"))?;
                bare.index_of(n).ok_or_else(|| bad(&format!("unknown vertex `{n}`")))
            };
            let (a, b) = (idx(&pair[0])?, idx(&pair[1])?);
            if a < g.len() && b < g.len() {
                return Err(bad("edges between base generators come from the base graph"));
            }
            edges.push((a, b));
        }
        let graph = g.extend(&names, &edges)?;
        let cells = v["rows"]
            .as_array()
            .ok_or_else(|| bad("missing `rows`"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("row must be an array"))?
                    .iter()
                    .map(|c| trace::parse_word(&graph, c.as_str().ok_or_else(|| bad("cell must be a string"))?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionTable { graph, base_len: g.len(), z_count, cells })
    }
}

// ---------------------------------------------------------------------------
// Enumeration

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Tl {
    A(Letter),
    Z(usize, bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    A(usize),
    Z(usize),
}

type EdgeSet = BTreeSet<(Node, Node)>;

#[derive(Clone, Debug)]
struct RowShape {
    cells: Vec<Vec<Tl>>,
    z: usize,
    minimal: Vec<EdgeSet>,
}

#[derive(Clone, Debug)]
pub struct TableEnumConfig {
    pub limit: Option<usize>,
    pub max_z: usize,
    pub max_graphs_per_shape: Option<usize>,
}

impl Default for TableEnumConfig {
    fn default() -> Self {
        TableEnumConfig { limit: None, max_z: 6, max_graphs_per_shape: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct EnumReport {
    pub emitted: usize,
    pub shapes: usize,
    /// Some shape was dropped because it needed more than `max_z` letters.
    pub z_cap_hit: bool,
    /// Some shape had more admissible graphs than `max_graphs_per_shape`.
    pub graph_cap_hit: bool,
    pub stopped_at_limit: bool,
}

struct RowGen<'a> {
    row: &'a [SysLetter],
    empty: &'a [bool],
    max_z: usize,
    out: Vec<Vec<Vec<Tl>>>,
    capped: bool,
}

#[derive(Clone)]
struct Open {
    id: usize,
    pos: usize,
    at_const: bool,
}

impl RowGen<'_> {
    fn capacity_after(&self, p: usize) -> usize {
        let l = self.row.len();
        self.row[p..]
            .iter()
            .map(|r| match r.sym {
                Sym::Const(_) => 1,
                Sym::Var(x) if self.empty[x] => 0,
                Sym::Var(_) => l - 1,
            })
            .sum()
    }

    fn position(&mut self, p: usize, cells: &mut Vec<Vec<Tl>>, open: &mut Vec<Open>, used: &mut BTreeSet<(usize, usize)>, next: usize) {
        if p == self.row.len() {
            if open.is_empty() {
                self.out.push(cells.clone());
            }
            return;
        }
        if open.len() > self.capacity_after(p) {
            return;
        }
        let r = self.row[p];
        match r.sym {
            Sym::Const(c) => {
                cells.push(vec![Tl::A(Letter::new(c, r.inv))]);
                self.position(p + 1, cells, open, used, next);
                cells.pop();
                // open a letter to be cancelled by a later variable cell
                if next < self.max_z {
                    open.push(Open { id: next, pos: p, at_const: true });
                    cells.push(vec![Tl::Z(next, false)]);
                    self.position(p + 1, cells, open, used, next + 1);
                    cells.pop();
                    open.pop();
                } else if open.len() < self.capacity_after(p + 1) {
                    self.capped = true;
                }
                for k in 0..open.len() {
                    let o = open[k].clone();
                    if o.at_const || used.contains(&(o.pos, p)) {
                        continue;
                    }
                    open.remove(k);
                    used.insert((o.pos, p));
                    cells.push(vec![Tl::Z(o.id, true)]);
                    self.position(p + 1, cells, open, used, next);
                    cells.pop();
                    used.remove(&(o.pos, p));
                    open.insert(k, o);
                }
            }
            Sym::Var(x) => {
                cells.push(Vec::new());
                if self.empty[x] {
                    self.position(p + 1, cells, open, used, next);
                } else {
                    self.fill(p, cells, open, used, next);
                }
                cells.pop();
            }
        }
    }

    fn fill(&mut self, p: usize, cells: &mut Vec<Vec<Tl>>, open: &mut Vec<Open>, used: &mut BTreeSet<(usize, usize)>, next: usize) {
        let len = cells.last().unwrap().len();
        if len > 0 {
            self.position(p + 1, cells, open, used, next);
        }
        if len + 1 > self.row.len() - 1 {
            return;
        }
        if next < self.max_z {
            open.push(Open { id: next, pos: p, at_const: false });
            cells.last_mut().unwrap().push(Tl::Z(next, false));
            self.fill(p, cells, open, used, next + 1);
            cells.last_mut().unwrap().pop();
            open.pop();
        } else if open.len() < self.capacity_after(p + 1) {
            self.capped = true;
        }
        for k in 0..open.len() {
            let o = open[k].clone();
            if o.pos == p || used.contains(&(o.pos, p)) {
                continue;
            }
            open.remove(k);
            used.insert((o.pos, p));
            cells.last_mut().unwrap().push(Tl::Z(o.id, true));
            self.fill(p, cells, open, used, next);
            cells.last_mut().unwrap().pop();
            used.remove(&(o.pos, p));
            open.insert(k, o);
        }
    }
}

/// All perfect matchings of the given (index, letter) list into inverse pairs.
fn inverse_matchings(items: &[(usize, Letter)], out: &mut Vec<Vec<(usize, usize)>>, acc: &mut Vec<(usize, usize)>) {
    let Some((&(i, l), rest)) = items.split_first() else {
        out.push(acc.clone());
        return;
    };
    for (k, &(j, m)) in rest.iter().enumerate() {
        if m == l.inverse() {
            let mut remaining = rest.to_vec();
            remaining.remove(k);
            acc.push((i, j));
            inverse_matchings(&remaining, out, acc);
            acc.pop();
        }
    }
}

fn minimize(mut sets: Vec<EdgeSet>) -> Vec<EdgeSet> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sets.dedup();
    let mut out: Vec<EdgeSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

/// Minimal edge sets over Z-letters under which the flattened row vanishes.
fn row_requirements(g: &CommutationGraph, cells: &[Vec<Tl>]) -> Vec<EdgeSet> {
    let flat: Vec<Tl> = cells.iter().flatten().copied().collect();
    let node = |t: Tl| match t {
        Tl::A(l) => Node::A(l.gen()),
        Tl::Z(z, _) => Node::Z(z),
    };
    let mut partner = vec![usize::MAX; flat.len()];
    let mut zpos: BTreeMap<usize, usize> = BTreeMap::new();
    let mut consts = Vec::new();
    for (k, &t) in flat.iter().enumerate() {
        match t {
            Tl::Z(z, _) => {
                if let Some(q) = zpos.insert(z, k) {
                    partner[q] = k;
                    partner[k] = q;
                }
            }
            Tl::A(l) => consts.push((k, l)),
        }
    }
    let mut matchings = Vec::new();
    inverse_matchings(&consts, &mut matchings, &mut Vec::new());
    let mut sets = Vec::new();
    'm: for m in matchings {
        let mut part = partner.clone();
        for (i, j) in m {
            part[i] = j;
            part[j] = i;
        }
        let mut req = EdgeSet::new();
        for i in 0..flat.len() {
            let j = part[i];
            if j < i {
                continue;
            }
            for k in i + 1..j {
                if part[k] > i && part[k] < j {
                    continue;
                }
                let (a, b) = (node(flat[i]), node(flat[k]));
                match (a, b) {
                    _ if a == b => continue 'm,
                    (Node::A(x), Node::A(y)) => {
                        if !g.commutes(x, y) {
                            continue 'm;
                        }
                    }
                    _ => {
                        req.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
        sets.push(req);
    }
    minimize(sets)
}

fn row_shapes(g: &CommutationGraph, row: &[SysLetter], empty: &[bool], max_z: usize) -> (Vec<RowShape>, bool) {
    let mut gen = RowGen { row, empty, max_z, out: Vec::new(), capped: false };
    gen.position(0, &mut Vec::new(), &mut Vec::new(), &mut BTreeSet::new(), 0);
    let shapes = gen
        .out
        .into_iter()
        .filter_map(|cells| {
            let minimal = row_requirements(g, &cells);
            let z = cells.iter().flatten().filter(|t| matches!(t, Tl::Z(_, false))).count();
            (!minimal.is_empty()).then_some(RowShape { cells, z, minimal })
        })
        .collect();
    (shapes, gen.capped)
}

fn shift(set: &EdgeSet, off: usize) -> EdgeSet {
    let s = |n: Node| match n {
        Node::Z(z) => Node::Z(z + off),
        a => a,
    };
    set.iter().map(|&(a, b)| (s(a), s(b))).collect()
}

/// Streams partition tables; `emit` returns `false` to stop.
pub fn partition_tables(
    g: &CommutationGraph,
    sys: &EqSystem,
    cfg: &TableEnumConfig,
    emit: &mut dyn FnMut(PartitionTable) -> bool,
) -> Result<EnumReport> {
    if !sys.equations_only() {
        return Err(Error::invalid("partition tables need a system of equations"));
    }
    let mut report = EnumReport::default();
    if cfg.limit == Some(0) {
        report.stopped_at_limit = true;
        return Ok(report);
    }
    let nv = sys.vars.len();
    for mask in 0..(1u64 << nv) {
        // all-nonempty choices first
        let empty: Vec<bool> = (0..nv).map(|x| (mask >> x) & 1 == 1).collect();
        let mut per_row = Vec::new();
        for row in &sys.rows {
            let (shapes, capped) = row_shapes(g, &row.letters, &empty, cfg.max_z);
            report.z_cap_hit |= capped;
            per_row.push(shapes);
        }
        if per_row.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; per_row.len()];
        loop {
            let chosen: Vec<&RowShape> = idx.iter().zip(&per_row).map(|(&i, s)| &s[i]).collect();
            let total_z: usize = chosen.iter().map(|s| s.z).sum();
            if total_z > cfg.max_z {
                report.z_cap_hit = true;
            } else if !emit_shape(g, &chosen, total_z, cfg, &mut report, emit)? {
                return Ok(report);
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < per_row[k].len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || idx.is_empty() {
                break;
            }
        }
    }
    Ok(report)
}

fn emit_shape(
    g: &CommutationGraph,
    chosen: &[&RowShape],
    total_z: usize,
    cfg: &TableEnumConfig,
    report: &mut EnumReport,
    emit: &mut dyn FnMut(PartitionTable) -> bool,
) -> Result<bool> {
    report.shapes += 1;
    let mut offsets = Vec::new();
    let mut off = 0;
    for s in chosen {
        offsets.push(off);
        off += s.z;
    }
    let mut combined: Vec<EdgeSet> = vec![EdgeSet::new()];
    for (s, &o) in chosen.iter().zip(&offsets) {
        let mut next = Vec::new();
        for c in &combined {
            for m in &s.minimal {
                next.push(c.union(&shift(m, o)).copied().collect());
            }
        }
        combined = minimize(next);
    }
    let mut free: Vec<(Node, Node)> = Vec::new();
    for z in 0..total_z {
        for a in 0..g.len() {
            free.push((Node::A(a), Node::Z(z)));
        }
        for w in z + 1..total_z {
            free.push((Node::Z(z), Node::Z(w)));
        }
    }
    free.sort();
    if free.len() > 120 {
        return Err(Error::Guard(format!("{} free commutation choices", free.len())));
    }
    let names = z_names(g, total_z);
    let base = g.extend(&names, &[])?;
    let idx_of = |n: Node| match n {
        Node::A(a) => a,
        Node::Z(z) => g.len() + z,
    };
    let cells: Vec<Vec<Word>> = chosen
        .iter()
        .zip(&offsets)
        .map(|(s, &o)| {
            s.cells
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&t| match t {
                            Tl::A(l) => l,
                            Tl::Z(z, inv) => Letter::new(g.len() + o + z, inv),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut graphs_here = 0usize;
    for (t, req) in combined.iter().enumerate() {
        let others: Vec<(Node, Node)> = free.iter().copied().filter(|e| !req.contains(e)).collect();
        for size in 0..=others.len() {
            let mut comb: Vec<usize> = (0..size).collect();
            loop {
                let mut set: EdgeSet = req.clone();
                set.extend(comb.iter().map(|&i| others[i]));
                if !combined[..t].iter().any(|r| r.is_subset(&set)) {
                    if cfg.max_graphs_per_shape.is_some_and(|m| graphs_here >= m) {
                        report.graph_cap_hit = true;
                        return Ok(true);
                    }
                    graphs_here += 1;
                    let edges: Vec<(usize, usize)> = set.iter().map(|&(a, b)| (idx_of(a), idx_of(b))).collect();
                    let graph = base.extend(&[], &edges)?;
                    let table = PartitionTable { graph, base_len: g.len(), z_count: total_z, cells: cells.clone() };
                    for i in 0..table.cells.len() {
                        if !trace::is_trivial(&table.graph, &table.row_word(i)) {
                            return Err(Error::invariant("enumerated row does not vanish"));
                        }
                    }
                    report.emitted += 1;
                    if !emit(table) || cfg.limit.is_some_and(|l| report.emitted >= l) {
                        report.stopped_at_limit = true;
                        return Ok(false);
                    }
                }
                // next combination of `size` out of `others`
                let n = others.len();
                let mut i = size;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if comb[i] < n - size + i {
                        comb[i] += 1;
                        for j in i + 1..size {
                            comb[j] = comb[j - 1] + 1;
                        }
                        i = usize::MAX;
                        break;
                    }
                }
                if i != usize::MAX {
                    break;
                }
            }
        }
    }
    Ok(true)
}

pub fn collect_tables(g: &CommutationGraph, sys: &EqSystem, cfg: &TableEnumConfig) -> Result<(Vec<PartitionTable>, EnumReport)> {
    let mut out = Vec::new();
    let report = partition_tables(g, sys, cfg, &mut |t| {
        out.push(t);
        true
    })?;
    Ok((out, report))
}

// ---------------------------------------------------------------------------
// Generalised equations

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Var { eps: i8, dual: usize },
    Const { letter: Letter },
}

/// A base over the boundaries `alpha < beta` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeBase {
    pub alpha: usize,
    pub beta: usize,
    pub kind: BaseKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub alpha: usize,
    pub beta: usize,
    pub eps: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralisedEquation {
    /// Items h_1 … h_ρ between boundaries 1 … ρ+1.
    pub rho: usize,
    pub bases: Vec<GeBase>,
    /// Item pairs (i < j, 1-based) that must commute.
    pub commutations: Vec<(usize, usize)>,
    pub vars: Vec<String>,
    /// Span of the designated occurrence of each variable; `None` when its
    /// cells are empty.
    pub p_spans: Vec<Option<Span>>,
}

pub fn build_ge(g: &CommutationGraph, sys: &EqSystem, t: &PartitionTable) -> Result<GeneralisedEquation> {
    t.check(g, sys)?;
    let mut item_letter = Vec::new();
    let mut spans: Vec<Vec<(usize, usize)>> = Vec::new();
    for row in &t.cells {
        let mut rs = Vec::new();
        for cell in row {
            let start = item_letter.len() + 1;
            item_letter.extend_from_slice(cell.letters());
            rs.push((start, start + cell.len()));
        }
        spans.push(rs);
    }
    let rho = item_letter.len();
    let mut bases = Vec::new();
    let add_pair = |bases: &mut Vec<GeBase>, a: (usize, usize, i8), b: (usize, usize, i8)| {
        let i = bases.len();
        bases.push(GeBase { alpha: a.0, beta: a.1, kind: BaseKind::Var { eps: a.2, dual: i + 1 } });
        bases.push(GeBase { alpha: b.0, beta: b.1, kind: BaseKind::Var { eps: b.2, dual: i } });
    };
    for z in 0..t.z_count {
        let find = |l: Letter| item_letter.iter().position(|&x| x == l).map(|k| k + 1);
        let p = find(Letter::pos(t.base_len + z)).ok_or_else(|| Error::invariant("missing z"))?;
        let n = find(Letter::neg(t.base_len + z)).ok_or_else(|| Error::invariant("missing z inverse"))?;
        add_pair(&mut bases, (p, p + 1, 1), (n, n + 1, -1));
    }
    let mut p_spans = Vec::new();
    for x in 0..sys.vars.len() {
        let occ: Vec<(usize, usize, i8)> = sys
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.letters.iter().enumerate().filter(move |(_, r)| r.sym == Sym::Var(x)).map(move |(j, r)| (i, j, r.inv))
            })
            .map(|(i, j, inv)| (spans[i][j].0, spans[i][j].1, if inv { -1 } else { 1 }))
            .collect();
        if occ.is_empty() {
            return Err(Error::invalid(format!("variable ?{} has no occurrence", sys.vars[x])));
        }
        let nonempty: Vec<_> = occ.into_iter().filter(|o| o.0 < o.1).collect();
        p_spans.push(nonempty.first().map(|&(a, b, e)| Span { alpha: a, beta: b, eps: e }));
        for p in 0..nonempty.len() {
            for q in p + 1..nonempty.len() {
                add_pair(&mut bases, nonempty[p], nonempty[q]);
            }
        }
    }
    for (i, row) in sys.rows.iter().enumerate() {
        for (j, r) in row.letters.iter().enumerate() {
            if let Sym::Const(c) = r.sym {
                let (a, _) = spans[i][j];
                bases.push(GeBase { alpha: a, beta: a + 1, kind: BaseKind::Const { letter: Letter::new(c, r.inv) } });
            }
        }
    }
    let mut commutations = Vec::new();
    for i in 0..rho {
        for j in i + 1..rho {
            let (u, v) = (item_letter[i].gen(), item_letter[j].gen());
            if u != v && t.graph.commutes(u, v) {
                commutations.push((i + 1, j + 1));
            }
        }
    }
    let ge = GeneralisedEquation { rho, bases, commutations, vars: sys.vars.clone(), p_spans };
    ge.validate()?;
    Ok(ge)
}

impl GeneralisedEquation {
    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.bases.iter().enumerate() {
            if b.alpha < 1 || b.alpha >= b.beta || b.beta > self.rho + 1 {
                return Err(Error::invariant(format!("base {i} has bad boundaries")));
            }
            match b.kind {
                BaseKind::Var { dual, .. } => match self.bases.get(dual).map(|d| d.kind) {
                    Some(BaseKind::Var { dual: back, .. }) if back == i && dual != i => {}
                    _ => return Err(Error::invariant(format!("base {i} has no proper dual"))),
                },
                BaseKind::Const { .. } => {
                    if b.beta != b.alpha + 1 {
                        return Err(Error::invariant(format!("constant base {i} is not of unit width")));
                    }
                }
            }
        }
        for &(i, j) in &self.commutations {
            if i < 1 || j > self.rho || i >= j {
                return Err(Error::invariant("bad commutation pair"));
            }
        }
        Ok(())
    }

    fn span_word(u: &[Word], alpha: usize, beta: usize, eps: i8) -> Word {
        let w = Word::concat_all(u[alpha - 1..beta - 1].iter());
        if eps < 0 {
            w.inverse()
        } else {
            w
        }
    }

    /// Dual pairs, each listed once.
    pub fn dual_pairs(&self) -> Vec<(usize, usize)> {
        self.bases
            .iter()
            .enumerate()
            .filter_map(|(i, b)| match b.kind {
                BaseKind::Var { dual, .. } if i < dual => Some((i, dual)),
                _ => None,
            })
            .collect()
    }

    fn eps(&self, i: usize) -> i8 {
        match self.bases[i].kind {
            BaseKind::Var { eps, .. } => eps,
            BaseKind::Const { .. } => 1,
        }
    }

    fn is_unit(&self, i: usize) -> bool {
        self.bases[i].beta == self.bases[i].alpha + 1
    }

    /// Solution check in the trace monoid over `amb` (any graph extending the
    /// constants' graph): items nonempty and geodesic, every side geodesic as
    /// written, unit-width duals graphically equal, coefficients literal.
    pub fn check_solution(&self, amb: &CommutationGraph, u: &[Word]) -> Result<bool> {
        if u.len() != self.rho {
            return Err(Error::invalid(format!("expected {} items, got {}", self.rho, u.len())));
        }
        if u.iter().any(|w| w.is_empty() || !trace::is_geodesic(amb, w)) {
            return Ok(false);
        }
        for (i, j) in self.dual_pairs() {
            let (a, b) = (&self.bases[i], &self.bases[j]);
            let l = Self::span_word(u, a.alpha, a.beta, self.eps(i));
            let r = Self::span_word(u, b.alpha, b.beta, self.eps(j));
            let ok = if self.is_unit(i) && self.is_unit(j) {
                l == r
            } else {
                trace::is_geodesic(amb, &l) && trace::is_geodesic(amb, &r) && trace::monoid_equal(amb, &l, &r)
            };
            if !ok {
                return Ok(false);
            }
        }
        for b in &self.bases {
            if let BaseKind::Const { letter } = b.kind {
                if u[b.alpha - 1] != Word::letter(letter) {
                    return Ok(false);
                }
            }
        }
        for &(i, j) in &self.commutations {
            let l = u[i - 1].concat(&u[j - 1]);
            let r = u[j - 1].concat(&u[i - 1]);
            if !(trace::is_geodesic(amb, &l) && trace::is_geodesic(amb, &r) && trace::monoid_equal(amb, &l, &r)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// P_x(h) as signed item indices.
    pub fn p_map(&self) -> Vec<(String, Vec<(usize, i8)>)> {
        self.vars
            .iter()
            .zip(&self.p_spans)
            .map(|(x, s)| {
                let items = match s {
                    None => Vec::new(),
                    Some(sp) if sp.eps > 0 => (sp.alpha..sp.beta).map(|k| (k, 1)).collect(),
                    Some(sp) => (sp.alpha..sp.beta).rev().map(|k| (k, -1)).collect(),
                };
                (x.clone(), items)
            })
            .collect()
    }

    pub fn p_image(&self, u: &[Word]) -> Vec<Word> {
        self.p_spans
            .iter()
            .map(|s| match s {
                None => Word::empty(),
                Some(sp) => Self::span_word(u, sp.alpha, sp.beta, sp.eps),
            })
            .collect()
    }

    pub fn format_p_map(&self) -> BTreeMap<String, String> {
        self.p_map()
            .into_iter()
            .map(|(x, items)| {
                let s = if items.is_empty() {
                    "1".to_string()
                } else {
                    items.iter().map(|&(k, e)| if e > 0 { format!("h{k}") } else { format!("h{k}^-1") }).collect::<Vec<_>>().join(" ")
                };
                (format!("?{x}"), s)
            })
            .collect()
    }

    pub fn to_json(&self, g: &CommutationGraph) -> Value {
        let bases: Vec<Value> = self
            .bases
            .iter()
            .map(|b| match b.kind {
                BaseKind::Var { eps, dual } => json!({"type": "var", "alpha": b.alpha, "beta": b.beta, "eps": eps, "dual": dual}),
                BaseKind::Const { letter } => json!({
                    "type": "const", "alpha": b.alpha, "beta": b.beta,
                    "letter": trace::format_word(g, &Word::letter(letter)),
                }),
            })
            .collect();
        let graphical: Vec<[usize; 2]> = self
            .dual_pairs()
            .into_iter()
            .filter(|&(i, j)| self.is_unit(i) && self.is_unit(j))
            .map(|(i, j)| [i, j])
            .collect();
        let p: serde_json::Map<String, Value> = self
            .vars
            .iter()
            .zip(&self.p_spans)
            .map(|(x, s)| {
                (x.clone(), s.map_or(Value::Null, |sp| json!({"alpha": sp.alpha, "beta": sp.beta, "eps": sp.eps})))
            })
            .collect();
        json!({
            "rho": self.rho,
            "boundaries": self.rho + 1,
            "bases": bases,
            "commutations": self.commutations.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "graphical": graphical,
            "vars": self.vars,
            "p_spans": p,
            "p_map": self.format_p_map(),
        })
    }

    pub fn from_json(g: &CommutationGraph, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::invalid(format!("GE JSON: {m}"));
        let num = |x: &Value, k: &str| -> Result<usize> { x[k].as_u64().map(|n| n as usize).ok_or_else(|| bad(&format!("missing `{k}`"))) };
        let rho = num(v, "rho")?;
        let mut bases = Vec::new();
        for b in v["bases"].as_array().ok_or_else(|| bad("missing `bases`"))? {
            let (alpha, beta) = (num(b, "alpha")?, num(b, "beta")?);
            let kind = match b["type"].as_str() {
                Some("var") => BaseKind::Var {
                    eps: b["eps"].as_i64().filter(|e| *e == 1 || *e == -1).ok_or_else(|| bad("bad eps"))? as i8,
                    dual: num(b, "dual")?,
                },
                Some("const") => {
                    let w = trace::parse_word(g, b["letter"].as_str().ok_or_else(|| bad("missing letter"))?)?;
                    if w.len() != 1 {
                        return Err(bad("constant base letter must be one letter"));
                    }
                    BaseKind::Const { letter: w.letters()[0] }
                }
                _ => return Err(bad("unknown base type")),
            };
            bases.push(GeBase { alpha, beta, kind });
        }
        let commutations = v["commutations"]
            .as_array()
            .ok_or_else(|| bad("missing `commutations`"))?
            .iter()
            .map(|p| {
                let a = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("bad pair"))?;
                Ok((a[0].as_u64().ok_or_else(|| bad("bad pair"))? as usize, a[1].as_u64().ok_or_else(|| bad("bad pair"))? as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        let vars: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("missing `vars`"))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("bad var")))
            .collect::<Result<_>>()?;
        let p_spans = vars
            .iter()
            .map(|x| {
                let s = &v["p_spans"][x];
                if s.is_null() {
                    Ok(None)
                } else {
                    Ok(Some(Span {
                        alpha: num(s, "alpha")?,
                        beta: num(s, "beta")?,
                        eps: s["eps"].as_i64().ok_or_else(|| bad("bad eps"))? as i8,
                    }))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ge = GeneralisedEquation { rho, bases, commutations, vars, p_spans };
        ge.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(ge)
    }
}

/// P(Ũ) for a solution Ũ over `amb`, verified against the system there.
pub fn lift_solution(ge: &GeneralisedEquation, sys: &EqSystem, amb: &CommutationGraph, u: &[Word]) -> Result<Vec<Word>> {
    if !ge.check_solution(amb, u)? {
        return Err(Error::domain("not a solution of the generalised equation"));
    }
    let x: Vec<Word> = ge.p_image(u).iter().map(|w| trace::normalize(amb, w)).collect();
    if !sys.is_solution(amb, &x) {
        return Err(Error::invariant("lifted tuple does not solve the system"));
    }
    Ok(x)
}

/// A table and GE solution induced by a group solution.
#[derive(Clone, Debug)]
pub struct Induced {
    pub table: PartitionTable,
    pub ge: GeneralisedEquation,
    pub solution: Vec<Word>,
    pub z_values: Vec<Word>,
}

impl Induced {
    pub fn to_json(&self, g: &CommutationGraph) -> Value {
        json!({
            "table": self.table.to_json(),
            "ge": self.ge.to_json(g),
            "solution": self.solution.iter().map(|w| trace::format_word(g, w)).collect::<Vec<_>>(),
            "z_values": self.z_values.iter().map(|w| trace::format_word(g, w)).collect::<Vec<_>>(),
        })
    }
}

pub fn induced_table(g: &CommutationGraph, sys: &EqSystem, w: &[Word]) -> Result<Induced> {
    if !sys.equations_only() {
        return Err(Error::invalid("induced tables need a system of equations"));
    }
    if w.len() != sys.vars.len() {
        return Err(Error::invalid(format!("expected {} values, got {}", sys.vars.len(), w.len())));
    }
    let w: Vec<Word> = w.iter().map(|x| trace::normalize(g, x)).collect();
    if !sys.is_solution(g, &w) {
        return Err(Error::domain("the tuple is not a solution"));
    }
    // z ids by creation; (row, l, i) with l < i
    let mut z_vals: Vec<Word> = Vec::new();
    let mut cells_tl: Vec<Vec<Vec<Tl>>> = Vec::new();
    for row in &sys.rows {
        let k = row.letters.len();
        let factors: Vec<Word> = row
            .letters
            .iter()
            .map(|r| match r.sym {
                Sym::Const(c) => Word::letter(Letter::new(c, r.inv)),
                Sym::Var(x) => {
                    if r.inv {
                        w[x].inverse()
                    } else {
                        w[x].clone()
                    }
                }
            })
            .collect();
        let scheme = vankampen::product_scheme(g, &factors)?;
        let is_const = |p: usize| matches!(row.letters[p].sym, Sym::Const(_));
        let mut zid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for l in 0..k {
            for i in l + 1..k {
                let piece = scheme.piece(l, i);
                if piece.is_empty() || (is_const(l) && is_const(i)) {
                    continue;
                }
                zid.insert((l, i), z_vals.len());
                z_vals.push(trace::normalize(g, piece));
            }
        }
        let mut cells = Vec::new();
        for l in 0..k {
            let order = (0..l).rev().chain((l + 1..k).rev());
            let mut cell = Vec::new();
            for i in order {
                if scheme.piece(l, i).is_empty() {
                    continue;
                }
                match zid.get(&(l.min(i), l.max(i))) {
                    Some(&z) => cell.push(Tl::Z(z, l > i)),
                    None => cell.push(Tl::A(factors[l].letters()[0])),
                }
            }
            cells.push(cell);
        }
        cells_tl.push(cells);
    }
    // canonical numbering by first occurrence, first occurrence positive
    let mut order: Vec<usize> = Vec::new();
    let mut flip: BTreeMap<usize, bool> = BTreeMap::new();
    for t in cells_tl.iter().flatten().flatten() {
        if let Tl::Z(z, inv) = *t {
            if let std::collections::btree_map::Entry::Vacant(e) = flip.entry(z) {
                e.insert(inv);
                order.push(z);
            }
        }
    }
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &z)| (z, r)).collect();
    let z_values: Vec<Word> =
        order.iter().map(|&z| if flip[&z] { z_vals[z].inverse() } else { z_vals[z].clone() }).collect();
    let n = g.len();
    let mut edges = Vec::new();
    let alphas: Vec<BTreeSet<usize>> = z_values.iter().map(|v| v.support()).collect();
    for (zi, v) in z_values.iter().enumerate() {
        for a in trace::a_set(g, v) {
            edges.push((a, n + zi));
        }
        for zj in zi + 1..z_values.len() {
            let disjoint = alphas[zi].is_disjoint(&alphas[zj]);
            if disjoint && alphas[zi].iter().all(|&p| alphas[zj].iter().all(|&q| g.commutes(p, q))) {
                edges.push((n + zi, n + zj));
            }
        }
    }
    let graph = g.extend(&z_names(g, z_values.len()), &edges)?;
    let cells: Vec<Vec<Word>> = cells_tl
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    c.iter()
                        .map(|&t| match t {
                            Tl::A(l) => l,
                            Tl::Z(z, inv) => Letter::new(n + rank[&z], inv != flip[&z]),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let table = PartitionTable { graph, base_len: n, z_count: z_values.len(), cells };
    table.check(g, sys).map_err(|e| Error::invariant(format!("induced table: {e}")))?;
    let ge = build_ge(g, sys, &table)?;

    // item values, then literal agreement across unit-width duals
    let mut vals: Vec<Word> = Vec::with_capacity(ge.rho);
    for row in &table.cells {
        for cell in row {
            for &l in cell.letters() {
                vals.push(if l.gen() >= n {
                    let v = &z_values[l.gen() - n];
                    if l.is_inverse() {
                        v.inverse()
                    } else {
                        v.clone()
                    }
                } else {
                    Word::letter(l)
                });
            }
        }
    }
    let mut links: Vec<Vec<(usize, i8, i8)>> = vec![Vec::new(); ge.rho + 1];
    for (i, j) in ge.dual_pairs() {
        if ge.is_unit(i) && ge.is_unit(j) {
            let (a, b) = (ge.bases[i].alpha, ge.bases[j].alpha);
            links[a].push((b, ge.eps(i), ge.eps(j)));
            links[b].push((a, ge.eps(j), ge.eps(i)));
        }
    }
    let const_items: BTreeSet<usize> = ge
        .bases
        .iter()
        .filter(|b| matches!(b.kind, BaseKind::Const { .. }))
        .map(|b| b.alpha)
        .collect();
    let mut fixed = vec![false; ge.rho + 1];
    let starts: Vec<usize> = const_items.iter().copied().chain(1..=ge.rho).collect();
    for s in starts {
        if fixed[s] {
            continue;
        }
        fixed[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &(b, ea, eb) in &links[a] {
                let mut v = vals[a - 1].clone();
                if ea != eb {
                    v = v.inverse();
                }
                if fixed[b] {
                    if vals[b - 1] != v {
                        return Err(Error::invariant("inconsistent literal values across graphical duals"));
                    }
                } else {
                    vals[b - 1] = v;
                    fixed[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    if !ge.check_solution(g, &vals)? {
        return Err(Error::invariant("induced items do not solve the generalised equation"));
    }
    for (x, p) in ge.p_image(&vals).iter().enumerate() {
        if !trace::monoid_equal(g, p, &w[x]) {
            return Err(Error::invariant(format!("P(U) differs from the solution at ?{}", sys.vars[x])));
        }
    }
    Ok(Induced { table, ge, solution: vals, z_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::parse_word;

    fn g1() -> CommutationGraph {
        CommutationGraph::parse("gens: a b c\nedge: a b\n").unwrap()
    }

    fn comm_table(g: &CommutationGraph) -> PartitionTable {
        let v = json!({"z": 1, "edges": [["z1", "a"]], "rows": [["z1", "a", "z1^-1", "a^-1"]]});
        PartitionTable::from_json(g, &v).unwrap()
    }

    #[test]
    fn enumeration_contains_commutator_table() {
        let g = g1();
        let sys = EqSystem::parse(&g, "?x a ?x^-1 a^-1").unwrap();
        let want = comm_table(&g);
        want.check(&g, &sys).unwrap();
        let mut found = false;
        let rep = partition_tables(&g, &sys, &TableEnumConfig::default(), &mut |t| {
            t.check(&g, &sys).unwrap();
            found |= t == want;
            !found
        })
        .unwrap();
        assert!(found, "{rep:?}");
    }

    #[test]
    fn constants_only_and_limit() {
        let g = g1();
        let sys = EqSystem::parse(&g, "a a^-1").unwrap();
        let (ts, _) = collect_tables(&g, &sys, &TableEnumConfig::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].z_count, 0);
        let cfg = TableEnumConfig { limit: Some(0), ..Default::default() };
        assert!(collect_tables(&g, &EqSystem::parse(&g, "?x a ?x^-1 a^-1").unwrap(), &cfg).unwrap().0.is_empty());
    }

    #[test]
    fn build_and_check() {
        let g = g1();
        let sys = EqSystem::parse(&g, "?x a ?x^-1 a^-1").unwrap();
        let ge = build_ge(&g, &sys, &comm_table(&g)).unwrap();
        assert_eq!(ge.rho, 4);
        assert_eq!(ge.commutations, vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
        let z = &ge.bases[0];
        assert_eq!((z.alpha, z.beta), (1, 2));
        assert_eq!(ge.format_p_map()["?x"], "h1");
        let w = |s: &str| parse_word(&g, s).unwrap();
        assert!(!ge.check_solution(&g, &[w("c"), w("a"), w("c^-1"), w("a^-1")]).unwrap());
        assert!(ge.check_solution(&g, &[w("b"), w("a"), w("b^-1"), w("a^-1")]).unwrap());
        assert!(!ge.check_solution(&g, &[Word::empty(), w("a"), Word::empty(), w("a^-1")]).unwrap());
        assert!(ge.check_solution(&g, &[w("b")]).is_err());
        let back = GeneralisedEquation::from_json(&g, &ge.to_json(&g)).unwrap();
        assert_eq!(back, ge);
    }

    #[test]
    fn induce_and_lift() {
        let g = g1();
        let sys = EqSystem::parse(&g, "?x a ?x^-1 a^-1").unwrap();
        let w = |s: &str| parse_word(&g, s).unwrap();
        let ind = induced_table(&g, &sys, &[w("b")]).unwrap();
        assert_eq!(ind.table, comm_table(&g));
        assert_eq!(ind.z_values, vec![w("b")]);
        assert_eq!(lift_solution(&ind.ge, &sys, &g, &ind.solution).unwrap(), vec![w("b")]);
        assert!(induced_table(&g, &sys, &[w("c")]).is_err());
        let ind = induced_table(&g, &sys, &[w("a")]).unwrap();
        assert_eq!(ind.table.z_count, 2);
    }

    #[test]
    fn lift_over_extended_group() {
        let g = g1();
        let sys = EqSystem::parse(&g, "?x a ?x^-1 a^-1").unwrap();
        let ge = build_ge(&g, &sys, &comm_table(&g)).unwrap();
        let gx = g.extend(&["t".to_string()], &[(0, 3)]).unwrap();
        let w = |s: &str| parse_word(&gx, s).unwrap();
        let x = lift_solution(&ge, &sys, &gx, &[w("t"), w("a"), w("t^-1"), w("a^-1")]).unwrap();
        assert_eq!(x, vec![w("t")]);
    }
}
