use eqclass::classes::{is_subclass, member, ClassId};
use eqclass::classify::{classify_interval, count_monadic_interval, VerdictKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn level(k: VerdictKind) -> u8 {
    match k {
        VerdictKind::Empty => 0,
        VerdictKind::Finite(_) => 1,
        VerdictKind::CountablyInfinite => 2,
        VerdictKind::Uncountable => 3,
    }
}

#[test]
fn verdicts_are_monotone_in_the_interval() {
    let catalog = ClassId::catalog(4);
    let pairs: Vec<(ClassId, ClassId)> = catalog
        .iter()
        .flat_map(|&a| catalog.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| is_subclass(a, b))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for _ in 0..20_000 {
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        let (c, d) = pairs[rng.gen_range(0..pairs.len())];
        // <c, d> inside <a, b>
        if !(is_subclass(a, c) && is_subclass(d, b)) {
            continue;
        }
        checked += 1;
        let outer = classify_interval(a, b).unwrap().kind;
        let inner = classify_interval(c, d).unwrap().kind;
        assert!(level(inner) <= level(outer), "<{c}, {d}> is {inner} inside <{a}, {b}> which is {outer}");
    }
    assert!(checked > 500, "only {checked} nested pairs sampled");
}

#[test]
fn verdicts_are_self_dual() {
    let catalog = ClassId::catalog(4);
    for &a in &catalog {
        for &b in &catalog {
            let v = classify_interval(a, b).unwrap();
            let d = classify_interval(a.dual(), b.dual()).unwrap();
            assert_eq!(v.kind, d.kind, "<{a}, {b}>");
            if let Some(w) = &v.witness {
                assert!(member(&w.function, b).unwrap(), "{} not in {b}", w.spec);
                assert!(member(&w.function.dual(), b.dual()).unwrap(), "dual of {} not in {}", w.spec, b.dual());
            }
        }
    }
}

#[test]
fn finite_counts_match_materialized_lattice() {
    let catalog = ClassId::catalog(3);
    let mut counted = 0;
    for &a in &catalog {
        for &b in &catalog {
            if let VerdictKind::Finite(Some(n)) = classify_interval(a, b).unwrap().kind {
                if let Some(m) = count_monadic_interval(a, b, 3).unwrap() {
                    assert_eq!(n as usize, m, "<{a}, {b}>");
                    counted += 1;
                }
            }
        }
    }
    assert!(counted > 0);
}
