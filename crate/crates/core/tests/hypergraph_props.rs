use eqclass::hypergraph::{all_hypergraphs, edge_surjective_hom, function_of, hypergraph_of, lemma4_check};
use eqclass::BooleanFunction;

#[test]
fn function_and_hypergraph_are_inverse() {
    for f in (1..=4).flat_map(BooleanFunction::all_of_arity) {
        if !f.is_monotone() || f.constant_value() == Some(true) || f.constant_value() == Some(false) {
            continue;
        }
        let g = hypergraph_of(&f).unwrap();
        assert_eq!(function_of(&g), f);
        let text = g.to_string();
        assert_eq!(text.parse::<eqclass::hypergraph::Hypergraph>().unwrap(), g);
    }
}

#[test]
fn homomorphism_witnesses_verify_and_give_minors() {
    let graphs: Vec<_> = (1..=3).flat_map(|n| all_hypergraphs(n, n)).collect();
    for g in &graphs {
        for h in &graphs {
            if let Some(w) = edge_surjective_hom(g, h).unwrap() {
                assert!(w.verify(g, h), "{g} -> {h} via {:?}", w.map);
                let r = lemma4_check(g, h, 10_000_000).unwrap();
                assert!(r.minor.is_some(), "homomorphism {g} -> {h} without a minor");
            }
        }
    }
}
