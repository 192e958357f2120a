use eqclass::minor::{canonical_key, compare, equivalent, minor_leq, Relation, DEFAULT_BUDGET};
use eqclass::BooleanFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(rng: &mut ChaCha8Rng, max_arity: usize) -> BooleanFunction {
    let n = rng.gen_range(1..=max_arity);
    BooleanFunction::from_words(n, vec![rng.gen::<u64>() & ((1u64 << (1 << n)) - 1)]).unwrap()
}

/// A random minor of `f`, so that related triples are common.
fn random_minor(rng: &mut ChaCha8Rng, f: &BooleanFunction) -> BooleanFunction {
    let m = rng.gen_range(1..=f.arity());
    let map: Vec<usize> = (0..f.arity()).map(|_| rng.gen_range(1..=m)).collect();
    f.substitute(&map, m).unwrap()
}

fn check_witness(g: &BooleanFunction, f: &BooleanFunction) -> bool {
    match minor_leq(g, f).unwrap() {
        Some(w) => {
            assert!(w.verify(g, f), "witness for {g} <= {f} does not replay");
            true
        }
        None => false,
    }
}

#[test]
fn preorder_laws_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut related = 0;
    for _ in 0..1000 {
        let f = random_function(&mut rng, 4);
        let g = if rng.gen_bool(0.7) { random_minor(&mut rng, &f) } else { random_function(&mut rng, 4) };
        let h = if rng.gen_bool(0.7) { random_minor(&mut rng, &g) } else { random_function(&mut rng, 4) };
        assert!(check_witness(&f, &f));
        let hg = check_witness(&h, &g);
        let gf = check_witness(&g, &f);
        if hg && gf {
            related += 1;
            assert!(check_witness(&h, &f), "transitivity fails on {h} <= {g} <= {f}");
        }
    }
    assert!(related > 300, "too few related triples: {related}");
}

#[test]
fn strict_minors_have_fewer_essential_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2000 {
        let f = random_function(&mut rng, 5);
        let g = random_minor(&mut rng, &f);
        let c = compare(&g, &f, DEFAULT_BUDGET).unwrap();
        assert!(matches!(c.relation, Relation::Le | Relation::Equivalent), "{g} is a minor of {f}");
        if c.relation == Relation::Le {
            assert!(g.essential_arity() < f.essential_arity(), "{g} < {f}");
        }
    }
}

#[test]
fn canonical_key_decides_equivalence() {
    let all: Vec<BooleanFunction> = (1..=3).flat_map(BooleanFunction::all_of_arity).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..3000 {
        let a = &all[rng.gen_range(0..all.len())];
        let b = &all[rng.gen_range(0..all.len())];
        let same_key = canonical_key(a).unwrap() == canonical_key(b).unwrap();
        assert_eq!(same_key, equivalent(a, b).unwrap(), "{a} vs {b}");
    }
}
