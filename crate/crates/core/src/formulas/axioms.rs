//! Exhaustive ball checks of the four axioms satisfied by a witness pair.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::CommutationGraph;
use crate::trace::{self, Word};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: String,
    pub statement: String,
    pub holds: bool,
    /// Values of the quantified variables refuting the axiom.
    pub counterexample: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub radius: usize,
    pub witness_a: String,
    pub witness_b: String,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }
}

fn first_failure<F>(ball: &[Word], arity: usize, fails: F) -> Option<Vec<Word>>
where
    F: Fn(&[&Word]) -> bool + Sync,
{
    ball.par_iter()
        .enumerate()
        .find_map_first(|(_, x)| {
            let mut idx = vec![0usize; arity.saturating_sub(1)];
            loop {
                let mut tuple: Vec<&Word> = vec![x];
                tuple.extend(idx.iter().map(|&i| &ball[i]));
                if fails(&tuple) {
                    return Some(tuple.into_iter().cloned().collect());
                }
                // odometer over the remaining coordinates
                let mut k = idx.len();
                loop {
                    if k == 0 {
                        return None;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < ball.len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
}

/// Checks (I)–(IV) for the witnesses `a`, `b` over every tuple from the ball
/// of radius `radius`; (II) is the statement that x²y²z² = 1 has only
/// pairwise commuting solutions.
pub fn check_axioms(g: &CommutationGraph, radius: usize, a: &Word, b: &Word) -> AxiomReport {
    let ball = trace::enumerate_geodesics(g, radius);
    let comm = |u: &Word, v: &Word| trace::commute(g, u, v);
    let sq = |u: &Word| u.concat(u);
    let mut results = Vec::new();
    let mut push = |name: &str, statement: &str, cex: Option<Vec<Word>>| {
        results.push(AxiomResult {
            name: name.to_string(),
            statement: statement.to_string(),
            holds: cex.is_none(),
            counterexample: cex.map(|ws| ws.iter().map(|w| trace::format_word(g, w)).collect()),
        });
    };

    push(
        "I",
        "forall x (([x,a]=1 and [x,b]=1) -> x=1)",
        first_failure(&ball, 1, |t| !t[0].is_empty() && comm(t[0], a) && comm(t[0], b)),
    );
    push(
        "II",
        "forall x y z (x^2 y^2 z^2=1 -> [x,y]=[x,z]=[y,z]=1)",
        first_failure(&ball, 3, |t| {
            let p = Word::concat_all([&sq(t[0]), &sq(t[1]), &sq(t[2])]);
            trace::is_trivial(g, &p) && !(comm(t[0], t[1]) && comm(t[0], t[2]) && comm(t[1], t[2]))
        }),
    );
    push(
        "III",
        "forall x y (x^2=y^2 -> x=y)",
        first_failure(&ball, 2, |t| trace::equals(g, &sq(t[0]), &sq(t[1])) && !trace::equals(g, t[0], t[1])),
    );
    push(
        "IV",
        "forall x ([x^2,c]=1 -> [x,c]=1) for c in {a,b}",
        first_failure(&ball, 1, |t| {
            let s = sq(t[0]);
            (comm(&s, a) && !comm(t[0], a)) || (comm(&s, b) && !comm(t[0], b))
        }),
    );
    AxiomReport {
        radius,
        witness_a: trace::format_word(g, a),
        witness_b: trace::format_word(g, b),
        results,
    }
}
