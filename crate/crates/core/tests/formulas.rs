mod common;

use common::*;
use pcgroup::formulas::{self, parse_formula, BallStructure, Env};
use pcgroup::fv::{self, RandomFormulaConfig};
use pcgroup::Formula;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), depth in 0usize..4) {
        let mut cfg = RandomFormulaConfig::new(depth, &gamma1(), &free2());
        cfg.positive = seed % 2 == 0;
        let f = fv::random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn sentence_truth_on_balls() {
    let g = gamma1();
    let s = BallStructure::ball(&g, 1);
    let t = |text: &str| formulas::eval_ball(&s, &parse_formula(text).unwrap(), &Env::new()).unwrap();
    assert!(t("(= (comm a b) 1)"));
    assert!(!t("(= (comm a c) 1)"));
    assert!(t("(exists x (and (!= x 1) (= (comm x a) 1)))"));
    assert!(t("(forall x (= (* x (inv x)) 1))"));
}

#[test]
fn qf_normal_form_preserves_solutions() {
    let g = gamma1();
    let w = pcgroup::structure::domain_witnesses(&g).unwrap().encoding(&g);
    let phi = parse_formula("(or (and (= ?x a) (!= ?y 1)) (not (= (comm ?x ?y) 1)))").unwrap();
    let nf = formulas::qf_normal_form(&phi, &w).unwrap().to_formula();
    let s = BallStructure::ball(&g, 1);
    for x in &s.domain {
        for y in &s.domain {
            let env = Env::from_pairs([("x".to_string(), x.clone()), ("y".to_string(), y.clone())]);
            assert_eq!(formulas::eval_ball(&s, &phi, &env).unwrap(), formulas::eval_ball(&s, &nf, &env).unwrap());
        }
    }
    assert!(matches!(nf, Formula::Or(_)));
}
