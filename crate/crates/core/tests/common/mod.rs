//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's normal-form or reduction code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;

use pcgroup::{CommutationGraph, Letter, Word};
use rand::Rng;

pub fn graph(text: &str) -> CommutationGraph {
    CommutationGraph::parse(text).unwrap()
}

/// a, b, c with the single edge a–b.
pub fn gamma1() -> CommutationGraph {
    graph("gens: a b c\nedge: a b\n")
}

pub fn free2() -> CommutationGraph {
    graph("gens: a b\n")
}

pub fn plane() -> CommutationGraph {
    graph("gens: a b\nedge: a b\n")
}

pub fn word(g: &CommutationGraph, s: &str) -> Word {
    pcgroup::trace::parse_word(g, s).unwrap()
}

pub fn letters(g: &CommutationGraph) -> Vec<Letter> {
    (0..g.len()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]).collect()
}

pub fn random_word<R: Rng>(rng: &mut R, g: &CommutationGraph, max_len: usize) -> Word {
    let ls = letters(g);
    let n = rng.gen_range(0..=max_len);
    Word::new((0..n).map(|_| ls[rng.gen_range(0..ls.len())]).collect())
}

/// Every word reachable from `w` by swapping adjacent commuting letters and
/// deleting adjacent inverse pairs; returns the shortest ones.
pub fn bfs_shortest(g: &CommutationGraph, w: &Word) -> BTreeSet<Vec<Letter>> {
    let start = w.letters().to_vec();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut best = usize::MAX;
    let mut shortest = BTreeSet::new();
    while let Some(cur) = queue.pop_front() {
        if cur.len() < best {
            best = cur.len();
            shortest.clear();
        }
        if cur.len() == best {
            shortest.insert(cur.clone());
        }
        for i in 0..cur.len().saturating_sub(1) {
            let (x, y) = (cur[i], cur[i + 1]);
            let next = if x.gen() == y.gen() {
                if x.is_inverse() == y.is_inverse() {
                    continue;
                }
                let mut n = cur.clone();
                n.drain(i..i + 2);
                n
            } else if g.commutes(x.gen(), y.gen()) {
                let mut n = cur.clone();
                n.swap(i, i + 1);
                n
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    shortest
}

pub fn bfs_length(g: &CommutationGraph, w: &Word) -> usize {
    bfs_shortest(g, w).iter().next().map_or(0, Vec::len)
}

/// Literal product, no reduction.
pub fn product(ws: &[&Word]) -> Word {
    Word::new(ws.iter().flat_map(|w| w.letters().iter().copied()).collect())
}

/// Some t of length ≤ `radius` with t u t⁻¹ = v, by exhaustive search.
pub fn brute_conjugator(g: &CommutationGraph, ball: &[Word], u: &Word, v: &Word) -> Option<Word> {
    ball.iter().find(|t| pcgroup::trace::equals(g, &product(&[t, u, &t.inverse()]), v)).cloned()
}

/// Path of the built CLI binary.
pub fn cli_binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_pcgroup"))
}

pub fn data(name: &str) -> String {
    format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub struct CliRun {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl CliRun {
    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

pub fn cli(args: &[&str]) -> CliRun {
    let o = Command::new(cli_binary()).args(args).output().unwrap();
    CliRun { code: o.status.code().unwrap_or(-1), stdout: o.stdout, stderr: o.stderr }
}
