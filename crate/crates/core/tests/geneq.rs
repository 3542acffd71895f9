mod common;

use std::collections::HashSet;

use common::*;
use pcgroup::geneq::{self, PartitionTable, TableEnumConfig};
use pcgroup::solver::{self, LiteralSystem};
use pcgroup::system::EqSystem;
use pcgroup::trace;

fn stream(g: &pcgroup::CommutationGraph, sys: &EqSystem) -> HashSet<String> {
    let mut seen = HashSet::new();
    geneq::partition_tables(g, sys, &TableEnumConfig::default(), &mut |t: PartitionTable| {
        seen.insert(t.to_json().to_string());
        true
    })
    .unwrap();
    seen
}

#[test]
fn every_small_solution_is_covered_by_an_enumerated_table() {
    let g = gamma1();
    for text in ["?x a ?x^-1 a^-1", "?x c ?x^-1 c^-1", "?x ?x a^-1"] {
        let sys = EqSystem::parse(&g, text).unwrap();
        let tables = stream(&g, &sys);
        let sols = solver::solve_bounded(&g, &LiteralSystem::from_system(&g, &sys), 2, solver::DEFAULT_MAX_CHECKS).unwrap();
        for w in &sols.solutions {
            let ind = geneq::induced_table(&g, &sys, w).unwrap();
            let key = ind.table.to_json().to_string();
            assert!(tables.contains(&key), "{text}: table of {} missing", trace::format_word(&g, &w[0]));
        }
    }
}

#[test]
fn enumerated_tables_are_valid_and_build() {
    let g = gamma1();
    let sys = EqSystem::parse(&g, "?x a ?x^-1 b^-1").unwrap();
    let cfg = TableEnumConfig { limit: Some(500), ..Default::default() };
    let (tables, _) = geneq::collect_tables(&g, &sys, &cfg).unwrap();
    assert!(!tables.is_empty());
    for t in &tables {
        t.check(&g, &sys).unwrap();
        let ge = geneq::build_ge(&g, &sys, t).unwrap();
        ge.validate().unwrap();
        let back = PartitionTable::from_json(&g, &t.to_json()).unwrap();
        assert_eq!(&back, t);
    }
}

#[test]
fn unsolvable_single_row_has_no_tables() {
    let g = gamma1();
    // a and c do not commute, so no table can make the row trivial
    let sys = EqSystem::parse(&g, "a c a^-1 c^-1").unwrap();
    assert!(geneq::collect_tables(&g, &sys, &TableEnumConfig::default()).unwrap().0.is_empty());
    let sys = EqSystem::parse(&g, "a b a^-1 b^-1").unwrap();
    assert_eq!(geneq::collect_tables(&g, &sys, &TableEnumConfig::default()).unwrap().0.len(), 1);
}

#[test]
fn induced_solutions_round_trip() {
    let g = gamma1();
    for text in ["?x a ?x^-1 a^-1", "?x ?y ?x^-1 ?y^-1", "?x ?y c^-1"] {
        let sys = EqSystem::parse(&g, text).unwrap();
        let sols = solver::solve_bounded(&g, &LiteralSystem::from_system(&g, &sys), 1, solver::DEFAULT_MAX_CHECKS).unwrap();
        assert!(!sols.solutions.is_empty());
        for w in &sols.solutions {
            let ind = geneq::induced_table(&g, &sys, w).unwrap();
            let amb = &ind.table.graph;
            assert!(ind.ge.check_solution(amb, &ind.solution).unwrap());
            for (p, x) in ind.ge.p_image(&ind.solution).iter().zip(w) {
                assert!(trace::monoid_equal(amb, p, x));
            }
            let lifted = geneq::lift_solution(&ind.ge, &sys, amb, &ind.solution).unwrap();
            for (l, x) in lifted.iter().zip(w) {
                assert!(trace::equals(amb, l, x));
            }
        }
    }
}
