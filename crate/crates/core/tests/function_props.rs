use eqclass::function::Point;
use eqclass::parse::{format_function, parse_function, Style};
use eqclass::BooleanFunction;
use proptest::prelude::*;

fn upto(n: usize) -> impl Iterator<Item = BooleanFunction> {
    (1..=n).flat_map(BooleanFunction::all_of_arity)
}

fn arb_function(max_arity: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_arity).prop_flat_map(|n| {
        proptest::collection::vec(any::<u64>(), if n <= 6 { 1 } else { 1 << (n - 6) }).prop_map(move |mut words| {
            if n < 6 {
                words[0] &= (1u64 << (1 << n)) - 1;
            }
            BooleanFunction::from_words(n, words).unwrap()
        })
    })
}

#[test]
fn dnf_reparse_agrees_pointwise() {
    for f in upto(4) {
        let text = format_function(&f, Style::Dnf);
        let g = parse_function(&text).unwrap();
        for bits in 0..1u32 << f.arity() {
            let p = Point::new(f.arity(), bits).unwrap();
            assert_eq!(f.eval(&p).unwrap(), g.eval(&p).unwrap(), "{text} at {bits:b}");
        }
    }
}

#[test]
fn automorphisms_commute() {
    for f in upto(3) {
        assert_eq!(f.dual().complement(), f.underline());
        assert_eq!(f.complement().dual(), f.underline());
        assert_eq!(f.underline().underline(), f);
        assert_eq!(f.dual().dual(), f);
    }
}

#[test]
fn zhegalkin_is_a_bijection() {
    for f in upto(4) {
        let p = f.zhegalkin();
        assert_eq!(BooleanFunction::from_zhegalkin(&p), f);
        assert_eq!(BooleanFunction::from_zhegalkin(&p).zhegalkin(), p);
    }
}

#[test]
fn essential_core_is_idempotent() {
    for f in upto(4) {
        let (core, map) = f.essential_core();
        let (again, map2) = core.essential_core();
        assert_eq!(again, core);
        assert_eq!(map.len(), f.essential_arity());
        if f.is_constant() {
            assert!(map2.is_empty());
        } else {
            assert_eq!(map2, (1..=core.arity()).collect::<Vec<_>>(), "{f}");
            assert_eq!(core.essential_arity(), core.arity());
        }
    }
}

#[test]
fn composition_is_associative_at_small_arity() {
    // f(g_1, g_2)(h) == f(g_1(h), g_2(h)) for every binary f and g_i,
    // against a fixed set of inner tuples.
    let inner: Vec<Vec<BooleanFunction>> = [
        ["x1&x2@3", "x3"],
        ["x1^x3", "!x2@3"],
        ["x1|x2|x3", "x2&!x3"],
        ["0@3", "x1"],
    ]
    .iter()
    .map(|hs| hs.iter().map(|h| parse_function(h).unwrap().widen(3).unwrap()).collect())
    .collect();
    let binary: Vec<BooleanFunction> = BooleanFunction::all_of_arity(2).collect();
    for f in &binary {
        for g1 in &binary {
            for g2 in &binary {
                let fg = f.compose(&[g1.clone(), g2.clone()]).unwrap();
                for hs in &inner {
                    let left = fg.compose(hs).unwrap();
                    let right = f
                        .compose(&[g1.compose(hs).unwrap(), g2.compose(hs).unwrap()])
                        .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn hex_literal_round_trips(f in arb_function(9)) {
        let text = format_function(&f, Style::Hex);
        prop_assert_eq!(parse_function(&text).unwrap(), f);
    }

    #[test]
    fn composition_is_associative(f in arb_function(3), g in arb_function(3), h in arb_function(3)) {
        let gs: Vec<BooleanFunction> = (0..f.arity())
            .map(|i| {
                let widened = g.widen(3).unwrap();
                if i % 2 == 0 { widened } else { widened.complement() }
            })
            .collect();
        let hs: Vec<BooleanFunction> = (0..3).map(|i| if i == 1 { h.widen(3).unwrap().dual() } else { h.widen(3).unwrap() }).collect();
        let left = f.compose(&gs).unwrap().compose(&hs).unwrap();
        let inner: Vec<BooleanFunction> = gs.iter().map(|g| g.compose(&hs).unwrap()).collect();
        prop_assert_eq!(left, f.compose(&inner).unwrap());
    }

    #[test]
    fn substitution_matches_composition_with_projections(f in arb_function(4), seed in any::<u64>()) {
        let m = 3;
        let map: Vec<usize> = (0..f.arity()).map(|i| ((seed >> (2 * i)) % m as u64) as usize + 1).collect();
        let projections: Vec<BooleanFunction> = map.iter().map(|&v| BooleanFunction::projection(m, v).unwrap()).collect();
        prop_assert_eq!(f.substitute(&map, m).unwrap(), f.compose(&projections).unwrap());
    }
}
