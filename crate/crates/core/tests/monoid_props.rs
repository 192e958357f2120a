use eqclass::monoid::{compose_classes, is_idempotent_at_cap, random_class, CappedClass};
use eqclass::BooleanFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x1() -> BooleanFunction {
    BooleanFunction::projection(1, 1).unwrap()
}

#[test]
fn closures_are_closed_and_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let k = random_class(&mut rng, 3).unwrap();
        assert!(k.is_closed());
        let kk = compose_classes(&k, &k).unwrap();
        if k.contains(&x1()) {
            assert!(k.is_subset(&kk));
        }
        if is_idempotent_at_cap(&k) {
            assert_eq!(kk, k);
        }
        // Closing again adds nothing.
        let gens: Vec<BooleanFunction> = k.iter().cloned().collect();
        assert_eq!(CappedClass::closure(&gens, 3).unwrap(), k);
    }
}

#[test]
fn composition_is_monotone_and_contains_both_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let i = random_class(&mut rng, 3).unwrap();
        let j = random_class(&mut rng, 3).unwrap();
        let ij = compose_classes(&i, &j).unwrap();
        // A minor-closed class holding x1 holds every projection.
        if j.contains(&x1()) {
            assert!(i.is_subset(&ij), "I not in IJ");
        }
        if i.contains(&x1()) {
            assert!(j.is_subset(&ij), "J not in IJ");
        }
        let bigger = i.union(&j).unwrap();
        assert!(ij.is_subset(&compose_classes(&bigger, &bigger).unwrap()));
    }
}

#[test]
fn union_and_intersection_are_lattice_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..30 {
        let a = random_class(&mut rng, 3).unwrap();
        let b = random_class(&mut rng, 3).unwrap();
        let u = a.union(&b).unwrap();
        let m = a.intersect(&b).unwrap();
        assert!(a.is_subset(&u) && b.is_subset(&u));
        assert!(m.is_subset(&a) && m.is_subset(&b));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }
}
