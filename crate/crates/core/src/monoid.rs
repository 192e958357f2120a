//! Equational classes truncated at an arity cap.
//!
//! A [`CappedClass`] keeps every member of arity `1..=cap`. Lattice
//! operations are exact on such truncations. Class composition only sees
//! inner functions up to the cap, so it under-approximates the composition of
//! the untruncated classes.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::function::{BooleanFunction, FunctionError};

pub const MAX_CAP: usize = 8;
pub const DEFAULT_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("cap {0} is outside 1..=8")]
    CapOutOfRange(usize),
    #[error("function of arity {arity} exceeds the cap {cap}")]
    TooWide { arity: usize, cap: usize },
    #[error("classes have different caps ({0} and {1})")]
    CapMismatch(usize, usize),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

fn check_cap(cap: usize) -> Result<(), MonoidError> {
    if (1..=MAX_CAP).contains(&cap) {
        Ok(())
    } else {
        Err(MonoidError::CapOutOfRange(cap))
    }
}

/// A set of Boolean functions of arity at most `cap`, grouped by arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CappedClass {
    cap: usize,
    members: Vec<BTreeSet<BooleanFunction>>,
}

impl CappedClass {
    pub fn empty(cap: usize) -> Result<Self, MonoidError> {
        check_cap(cap)?;
        Ok(CappedClass {
            cap,
            members: vec![BTreeSet::new(); cap],
        })
    }

    /// The class generated by `gens`: every `f(p_1, ..., p_n)` with `f` a
    /// generator and the `p_i` projections of a common arity up to the cap.
    pub fn closure(gens: &[BooleanFunction], cap: usize) -> Result<Self, MonoidError> {
        let mut class = CappedClass::empty(cap)?;
        let gens: BTreeSet<&BooleanFunction> = gens.iter().collect();
        for g in gens {
            if g.arity() > cap {
                return Err(MonoidError::TooWide {
                    arity: g.arity(),
                    cap,
                });
            }
            for m in 1..=cap {
                for_each_map(g.arity(), m, |map| {
                    class.members[m - 1].insert(g.substitute0(map, m));
                });
            }
        }
        Ok(class)
    }

    /// Wraps an arbitrary member set without closing it. Exists to exercise
    /// laws that need non-closed classes.
    #[doc(hidden)]
    pub fn from_members_unchecked(
        cap: usize,
        fs: impl IntoIterator<Item = BooleanFunction>,
    ) -> Result<Self, MonoidError> {
        let mut class = CappedClass::empty(cap)?;
        for f in fs {
            if f.arity() > cap {
                return Err(MonoidError::TooWide {
                    arity: f.arity(),
                    cap,
                });
            }
            class.members[f.arity() - 1].insert(f);
        }
        Ok(class)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Members of arity `m`; empty for `m` outside `1..=cap`.
    pub fn members_of_arity(&self, m: usize) -> &BTreeSet<BooleanFunction> {
        static EMPTY: BTreeSet<BooleanFunction> = BTreeSet::new();
        if m == 0 || m > self.cap {
            &EMPTY
        } else {
            &self.members[m - 1]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &BooleanFunction> {
        self.members.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(BTreeSet::is_empty)
    }

    pub fn contains(&self, f: &BooleanFunction) -> bool {
        self.members_of_arity(f.arity()).contains(f)
    }

    /// Whether every minor of every member (up to the cap) is a member.
    pub fn is_closed(&self) -> bool {
        self.iter().all(|f| {
            (1..=self.cap).all(|m| {
                let mut ok = true;
                for_each_map(f.arity(), m, |map| {
                    ok = ok && self.members[m - 1].contains(&f.substitute0(map, m));
                });
                ok
            })
        })
    }

    pub fn is_subset(&self, other: &CappedClass) -> bool {
        self.cap == other.cap
            && self
                .members
                .iter()
                .zip(&other.members)
                .all(|(a, b)| a.is_subset(b))
    }

    pub fn union(&self, other: &CappedClass) -> Result<CappedClass, MonoidError> {
        self.zip_sets(other, |a, b| a.union(b).cloned().collect())
    }

    pub fn intersect(&self, other: &CappedClass) -> Result<CappedClass, MonoidError> {
        self.zip_sets(other, |a, b| a.intersection(b).cloned().collect())
    }

    fn zip_sets(
        &self,
        other: &CappedClass,
        op: impl Fn(&BTreeSet<BooleanFunction>, &BTreeSet<BooleanFunction>) -> BTreeSet<BooleanFunction>,
    ) -> Result<CappedClass, MonoidError> {
        if self.cap != other.cap {
            return Err(MonoidError::CapMismatch(self.cap, other.cap));
        }
        Ok(CappedClass {
            cap: self.cap,
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    /// Applies `op` to every member.
    pub fn map(&self, op: impl Fn(&BooleanFunction) -> BooleanFunction) -> CappedClass {
        let mut out = CappedClass {
            cap: self.cap,
            members: vec![BTreeSet::new(); self.cap],
        };
        for f in self.iter() {
            let g = op(f);
            out.members[g.arity() - 1].insert(g);
        }
        out
    }

    /// Members as `tt:` literals, grouped by arity.
    pub fn hex_members(&self) -> Vec<Vec<String>> {
        self.members
            .iter()
            .map(|set| set.iter().map(crate::parse::format_hex).collect())
            .collect()
    }
}

/// Calls `visit` with every map `{0..n} -> {0..m}` in lexicographic order.
pub fn for_each_map(n: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    let mut map = vec![0usize; n];
    loop {
        visit(&map);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            map[k] += 1;
            if map[k] < m {
                break;
            }
            map[k] = 0;
        }
    }
}

/// The composition `IJ`: all `f(g_1, ..., g_n)` with `f` in `I` and the `g_i`
/// in `J` of one common arity, everything within the shared cap.
pub fn compose_classes(i: &CappedClass, j: &CappedClass) -> Result<CappedClass, MonoidError> {
    if i.cap != j.cap {
        return Err(MonoidError::CapMismatch(i.cap, j.cap));
    }
    let cap = i.cap;
    let fs: Vec<&BooleanFunction> = i.iter().collect();
    let members = (1..=cap)
        .map(|m| {
            let inner: Vec<&BooleanFunction> = j.members_of_arity(m).iter().collect();
            if inner.is_empty() {
                return BTreeSet::new();
            }
            fs.par_iter()
                .map(|f| composites(f, &inner, m))
                .reduce(BTreeSet::new, |mut a, b| {
                    a.extend(b);
                    a
                })
        })
        .collect();
    Ok(CappedClass { cap, members })
}

/// All `f(g_1, ..., g_n)` with the `g_i` drawn from `inner`, all of arity `m`.
fn composites(f: &BooleanFunction, inner: &[&BooleanFunction], m: usize) -> BTreeSet<BooleanFunction> {
    let mut out = BTreeSet::new();
    // Only the essential positions of f influence the composite.
    let (f, positions) = f.essential_core();
    if positions.is_empty() {
        let c = f.value(0);
        out.insert(BooleanFunction::constant(m, c).expect("m is within the cap"));
        return out;
    }
    let f = &f;
    let n = f.arity();
    if m <= 6 {
        // Single-word tables: expand f into minterms and share the partial
        // products of a tuple prefix across all tuples extending it.
        let ones: Vec<u32> = f.ones().collect();
        let words: Vec<u64> = inner.iter().map(|g| g.words()[0]).collect();
        let mut levels: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
        levels.push(vec![u64::MAX]);
        fn rec(
            depth: usize,
            n: usize,
            m: usize,
            words: &[u64],
            ones: &[u32],
            levels: &mut Vec<Vec<u64>>,
            out: &mut BTreeSet<BooleanFunction>,
        ) {
            if depth == n {
                let prods = &levels[n];
                let w = ones.iter().fold(0u64, |acc, &idx| acc | prods[idx as usize]);
                out.insert(BooleanFunction::from_words_unchecked(m, vec![w]));
                return;
            }
            for &g in words {
                let prev = &levels[depth];
                let mut next = Vec::with_capacity(prev.len() * 2);
                // Index bit `depth` selects the literal of g_{depth+1}; the
                // lower bits come from `prev`.
                next.extend(prev.iter().map(|p| p & !g));
                next.extend(prev.iter().map(|p| p & g));
                levels.push(next);
                rec(depth + 1, n, m, words, ones, levels, out);
                levels.pop();
            }
        }
        rec(0, n, m, &words, &ones, &mut levels, &mut out);
        return out;
    }
    let mut tuple = vec![0usize; n];
    for_each_map(n, inner.len(), |map| {
        tuple.copy_from_slice(map);
        let gs: Vec<BooleanFunction> = tuple.iter().map(|&k| inner[k].clone()).collect();
        out.insert(f.compose(&gs).expect("arities agree by construction"));
    });
    out
}

/// `KK = K` within the cap.
pub fn is_idempotent_at_cap(k: &CappedClass) -> bool {
    compose_classes(k, k).map(|kk| kk == *k).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct AssocLemmaReport {
    /// `(IJ)K ⊆ I(JK)` at the cap.
    pub subset_holds: bool,
    /// `(IJ)K = I(JK)` at the cap.
    pub equality_holds: bool,
    pub j_closed: bool,
}

/// Compares `(IJ)K` with `I(JK)` at the shared cap.
pub fn assoc_lemma_check(
    i: &CappedClass,
    j: &CappedClass,
    k: &CappedClass,
) -> Result<AssocLemmaReport, MonoidError> {
    let left = compose_classes(&compose_classes(i, j)?, k)?;
    let right = compose_classes(i, &compose_classes(j, k)?)?;
    Ok(AssocLemmaReport {
        subset_holds: left.is_subset(&right),
        equality_holds: left == right,
        j_closed: j.is_closed(),
    })
}

/// Cover relation of the inclusion order on `classes`, as index pairs
/// `(lower, upper)` in ascending order.
pub fn hasse_edges(classes: &[CappedClass]) -> Vec<(usize, usize)> {
    let below = |a: usize, b: usize| a != b && classes[a].is_subset(&classes[b]) && classes[a] != classes[b];
    let n = classes.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if below(a, b) && !(0..n).any(|c| below(a, c) && below(c, b)) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// A random closed class: the closure of one or two random generators of
/// arity at most `min(cap, 3)`, with small arities favoured.
pub fn random_class<R: Rng>(rng: &mut R, cap: usize) -> Result<CappedClass, MonoidError> {
    check_cap(cap)?;
    let count = rng.gen_range(1..=2);
    let gens: Vec<BooleanFunction> = (0..count)
        .map(|_| {
            let top = cap.min(3);
            let arity = if rng.gen_bool(0.6) { rng.gen_range(1..=top.min(2)) } else { rng.gen_range(1..=top) };
            let table: u64 = rng.gen::<u64>() & ((1u64 << (1u32 << arity)) - 1);
            BooleanFunction::from_words(arity, vec![table])
        })
        .collect::<Result<_, _>>()?;
    CappedClass::closure(&gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn var(m: usize, i: usize) -> BooleanFunction {
        BooleanFunction::projection(m, i).unwrap()
    }

    fn not1() -> BooleanFunction {
        var(1, 1).complement()
    }

    fn and2() -> BooleanFunction {
        BooleanFunction::from_words(2, vec![0x8]).unwrap()
    }

    fn or2() -> BooleanFunction {
        BooleanFunction::from_words(2, vec![0xE]).unwrap()
    }

    #[test]
    fn negation_closure() {
        let k = CappedClass::closure(&[not1()], 2).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.contains(&var(2, 2).complement()));
        assert!(k.is_closed());
    }

    #[test]
    fn projection_closure() {
        let p = CappedClass::closure(&[var(1, 1)], 4).unwrap();
        for m in 1..=4 {
            assert_eq!(p.members_of_arity(m).len(), m);
        }
    }

    #[test]
    fn conjunction_closure() {
        let k = CappedClass::closure(&[and2()], 2).unwrap();
        assert!(k.contains(&var(1, 1)));
        assert!(k.contains(&var(2, 1)) && k.contains(&var(2, 2)));
        assert!(k.contains(&and2()));
        assert_eq!(k.members_of_arity(2).len(), 3);
    }

    #[test]
    fn closure_rejects_wide_generators() {
        assert!(matches!(
            CappedClass::closure(&[and2()], 1),
            Err(MonoidError::TooWide { .. })
        ));
        assert!(CappedClass::empty(9).is_err());
    }

    #[test]
    fn map_enumeration_counts() {
        let mut count = 0;
        for_each_map(3, 4, |_| count += 1);
        assert_eq!(count, 64);
    }

    #[test]
    fn double_negation() {
        let k = CappedClass::closure(&[not1()], 2).unwrap();
        let kk = compose_classes(&k, &k).unwrap();
        assert!(kk.contains(&var(1, 1)));
        assert_eq!(kk, CappedClass::closure(&[var(1, 1)], 2).unwrap());
        assert!(!is_idempotent_at_cap(&CappedClass::closure(&[not1()], 3).unwrap()));
    }

    #[test]
    fn projections_are_identity() {
        let p = CappedClass::closure(&[var(1, 1)], 3).unwrap();
        let k = CappedClass::closure(&[and2(), not1()], 3).unwrap();
        assert_eq!(compose_classes(&k, &p).unwrap(), k);
        assert_eq!(compose_classes(&p, &k).unwrap(), k);
        assert!(is_idempotent_at_cap(&p));
    }

    #[test]
    fn conjunctions_and_constants_are_idempotent() {
        let cap = 3;
        let lambda = CappedClass::closure(
            &[
                BooleanFunction::from_fn(3, |a| a == 7).unwrap(),
                BooleanFunction::constant(1, false).unwrap(),
                BooleanFunction::constant(1, true).unwrap(),
            ],
            cap,
        )
        .unwrap();
        assert!(is_idempotent_at_cap(&lambda));
    }

    #[test]
    fn intersect_and_or_closures() {
        let a = CappedClass::closure(&[and2()], 3).unwrap();
        let o = CappedClass::closure(&[or2()], 3).unwrap();
        let p = CappedClass::closure(&[var(1, 1)], 3).unwrap();
        assert_eq!(a.intersect(&o).unwrap(), p);
        assert_eq!(a.union(&a).unwrap(), a);
    }

    #[test]
    fn fast_composition_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let i = random_class(&mut rng, 3).unwrap();
            let j = random_class(&mut rng, 3).unwrap();
            let fast = compose_classes(&i, &j).unwrap();
            let mut slow = CappedClass::empty(3).unwrap();
            for f in i.iter() {
                for m in 1..=3 {
                    let inner: Vec<&BooleanFunction> = j.members_of_arity(m).iter().collect();
                    if inner.is_empty() {
                        continue;
                    }
                    for_each_map(f.arity(), inner.len(), |map| {
                        let gs: Vec<BooleanFunction> = map.iter().map(|&k| inner[k].clone()).collect();
                        slow.members[m - 1].insert(f.compose(&gs).unwrap());
                    });
                }
            }
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn composition_with_wide_cap() {
        let k = CappedClass::closure(&[and2()], 7).unwrap();
        let p = CappedClass::closure(&[var(1, 1)], 7).unwrap();
        assert_eq!(compose_classes(&p, &k).unwrap(), k);
    }

    #[test]
    fn unchecked_constructor_can_break_closure() {
        let raw = CappedClass::from_members_unchecked(2, [and2()]).unwrap();
        assert!(!raw.is_closed());
        let i = CappedClass::closure(&[and2()], 2).unwrap();
        let report = assoc_lemma_check(&i, &raw, &i).unwrap();
        assert!(report.subset_holds);
        assert!(!report.j_closed);
    }

    #[test]
    fn hasse_of_chain() {
        let p = CappedClass::closure(&[var(1, 1)], 2).unwrap();
        let a = CappedClass::closure(&[and2()], 2).unwrap();
        let e = CappedClass::empty(2).unwrap();
        assert_eq!(hasse_edges(&[e, p, a]), vec![(0, 1), (1, 2)]);
    }
}
