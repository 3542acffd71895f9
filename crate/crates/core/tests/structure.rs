mod common;

use common::*;
use pcgroup::{structure, trace};

#[test]
fn centraliser_generators_commute_with_the_word() {
    let g = gamma1();
    for w in trace::enumerate_geodesics(&g, 3).iter().filter(|w| !w.is_empty()) {
        let c = structure::centraliser(&g, w).unwrap();
        for x in c.generators(&g) {
            assert!(trace::equals(&g, &x.concat(w), &w.concat(&x)), "{} vs {}", trace::format_word(&g, &x), trace::format_word(&g, w));
        }
    }
}

#[test]
fn frozen_centralisers() {
    let g = gamma1();
    let c = structure::centraliser(&g, &word(&g, "a")).unwrap();
    assert_eq!(c.cyclic_parts, vec![word(&g, "a")]);
    assert_eq!(c.abelian_part, vec![1]);
    assert!(structure::centraliser(&g, &word(&g, "c")).unwrap().is_cyclic());
    let c = structure::centraliser(&g, &word(&g, "a c a c")).unwrap();
    assert_eq!(c.cyclic_parts, vec![word(&g, "a c")]);
    assert!(c.abelian_part.is_empty());
}

#[test]
fn conjugacy_agrees_with_search_on_a_ball() {
    let g = gamma1();
    let ball = trace::enumerate_geodesics(&g, 2);
    let conjugators = trace::enumerate_geodesics(&g, 2);
    for u in &ball {
        for v in &ball {
            let found = structure::conjugate(&g, u, v).unwrap();
            if let Some(t) = &found {
                assert!(trace::equals(&g, &product(&[t, u, &t.inverse()]), v));
            }
            if brute_conjugator(&g, &conjugators, u, v).is_some() {
                assert!(found.is_some());
            }
        }
    }
}

#[test]
fn separation_keeps_words_nontrivial() {
    let g = gamma1();
    let gx = g.extend(&["x".to_string(), "y".to_string()], &[]).unwrap();
    for text in ["x a x^-1 a^-1", "x y x^-1 y^-1", "x^2 y^-2", "x c y c^-1", "x"] {
        let w = word(&gx, text);
        let s = structure::separate_in_gx(&gx, &g, &w, 2).unwrap();
        let image = trace::parse_word(&g, &s.image).unwrap();
        assert!(!trace::is_trivial(&g, &image), "{text}");
    }
    assert!(structure::separate_in_gx(&gx, &g, &word(&gx, "x a x^-1 a^-1 a x a^-1 x^-1"), 2).is_err());
}

#[test]
fn domains_and_non_domains() {
    assert!(structure::domain_witnesses(&gamma1()).is_ok());
    assert!(structure::domain_witnesses(&free2()).is_ok());
    assert!(structure::domain_witnesses(&plane()).is_err());
    let square = graph("gens: a b c d\nedge: a c\nedge: a d\nedge: b c\nedge: b d\n");
    assert!(structure::domain_witnesses(&square).is_err());
}
