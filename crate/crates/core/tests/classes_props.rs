use eqclass::classes::{member, separating_rank, ClassId, Context, Level, Rank, SepKind};
use eqclass::monoid::for_each_map;
use eqclass::BooleanFunction;

fn upto(n: usize) -> impl Iterator<Item = BooleanFunction> {
    (1..=n).flat_map(BooleanFunction::all_of_arity)
}

fn context_class(c: Context) -> Option<ClassId> {
    match c {
        Context::All => None,
        Context::Tc => Some(ClassId::Tc),
        Context::M => Some(ClassId::M),
        Context::Mc => Some(ClassId::Mc),
    }
}

#[test]
fn compound_tags_are_meets() {
    let catalog = ClassId::catalog(4);
    for f in upto(3) {
        for &c in &catalog {
            if let ClassId::Sep { kind, context, level } = c {
                let base = member(&f, ClassId::sep(kind, Context::All, level)).unwrap();
                let ctx = context_class(context).map_or(true, |k| member(&f, k).unwrap());
                assert_eq!(member(&f, c).unwrap(), base && ctx, "{f} in {c}");
            }
        }
    }
}

#[test]
fn duality_transports_membership() {
    let catalog = ClassId::catalog(4);
    for f in upto(3) {
        let d = f.dual();
        for &c in &catalog {
            assert_eq!(member(&f, c).unwrap(), member(&d, c.dual()).unwrap(), "{f} in {c}");
        }
    }
}

#[test]
fn rank_chain_at_arity_four() {
    for f in upto(4) {
        for (a, kind) in [(true, SepKind::U), (false, SepKind::W)] {
            let class = |m| ClassId::sep(kind, Context::All, Level::Rank(m));
            match separating_rank(&f, a).unwrap() {
                Rank::Finite(m) => {
                    for k in 2..=m {
                        assert!(member(&f, class(k)).unwrap(), "{f} rank {m} but not in {}", class(k));
                    }
                    assert!(!member(&f, class(m + 1)).unwrap(), "{f} rank {m} but in {}", class(m + 1));
                }
                Rank::BelowTwo => assert!(!member(&f, class(2)).unwrap()),
                Rank::Infinite => {
                    assert!(member(&f, ClassId::sep(kind, Context::All, Level::Infinite)).unwrap());
                    for k in 2..=6 {
                        assert!(member(&f, class(k)).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn catalog_classes_are_minor_closed() {
    let catalog = ClassId::catalog(4);
    for f in upto(3) {
        let inside: Vec<ClassId> = catalog.iter().copied().filter(|&c| member(&f, c).unwrap()).collect();
        let n = f.arity();
        for m in 1..=3 {
            for_each_map(n, m, |map| {
                let map1: Vec<usize> = map.iter().map(|v| v + 1).collect();
                let g = f.substitute(&map1, m).unwrap();
                for &c in &inside {
                    assert!(member(&g, c).unwrap(), "{g} is a minor of {f} in {c}");
                }
            });
        }
    }
}
