//! The minor preorder: `g ≼ f` when `g = f(x_{σ(1)}, ..., x_{σ(n)})` for some
//! map `σ` from the positions of `f` to the variables of `g`.
//!
//! The search runs on essential cores and assigns `σ` one position at a time.
//! Three prunes keep it exact:
//!
//! * the image of `σ` must cover every variable of the core of `g`;
//! * positions of `f` that can be freely permuted get non-decreasing values,
//!   and interchangeable variables of `g` are introduced in index order;
//! * after each assignment, every point of `g` is checked against the range of
//!   values `f` can still take given the assigned prefix.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::function::BooleanFunction;

/// Default node budget for one search.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Largest essential arity accepted by [`canonical_key`].
pub const CANONICAL_KEY_MAX_ARITY: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("search budget exhausted after {nodes} nodes")]
    Inconclusive { nodes: u64 },
    #[error("essential arity {0} is too large for a permutation sweep (max 10)")]
    TooWide(usize),
    #[error("an antichain check needs at least two functions")]
    TooFewFunctions,
}

/// `σ` as a list: position `i` of `f` (1-based) maps to variable `map[i-1]` of `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubstitutionWitness {
    pub map: Vec<usize>,
}

impl SubstitutionWitness {
    /// `f(x_{σ(1)}, ..., x_{σ(n)})` as an `m`-ary function.
    pub fn replay(&self, f: &BooleanFunction, m: usize) -> BooleanFunction {
        let zero_based: Vec<usize> = self.map.iter().map(|v| v - 1).collect();
        f.substitute0(&zero_based, m)
    }

    /// Whether replaying against `f` reproduces `g`.
    pub fn verify(&self, g: &BooleanFunction, f: &BooleanFunction) -> bool {
        self.map.len() == f.arity()
            && self.map.iter().all(|&v| v >= 1 && v <= g.arity())
            && self.replay(f, g.arity()) == *g
    }
}

/// Search outcome with the number of nodes visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSearch {
    pub witness: Option<SubstitutionWitness>,
    pub nodes: u64,
}

/// Decides `g ≼ f` with the default budget.
pub fn minor_leq(
    g: &BooleanFunction,
    f: &BooleanFunction,
) -> Result<Option<SubstitutionWitness>, MinorError> {
    minor_leq_budget(g, f, DEFAULT_BUDGET).map(|s| s.witness)
}

/// Decides `g ≼ f`, giving up after `budget` nodes.
pub fn minor_leq_budget(
    g: &BooleanFunction,
    f: &BooleanFunction,
    budget: u64,
) -> Result<MinorSearch, MinorError> {
    let (gc, gmap) = g.essential_core();
    let (fc, fmap) = f.essential_core();
    let lift = |core_map: Vec<usize>| {
        let mut map = vec![1usize; f.arity()];
        for (c, &orig) in fmap.iter().enumerate() {
            map[orig - 1] = gmap.get(core_map[c]).copied().unwrap_or(1);
        }
        SubstitutionWitness { map }
    };

    if let Some(c) = gc.constant_value() {
        // A constant minor exists iff the diagonal of f is that constant.
        let diagonal_ok = f.value(0) == c && f.value((f.table_len() - 1) as u32) == c;
        let witness = diagonal_ok.then(|| SubstitutionWitness {
            map: vec![1; f.arity()],
        });
        return Ok(MinorSearch { witness, nodes: 1 });
    }
    if fc.is_constant() || gc.arity() > fc.arity() {
        return Ok(MinorSearch {
            witness: None,
            nodes: 1,
        });
    }
    let mut search = CoreSearch::new(&gc, &fc, budget);
    let found = search.run()?;
    Ok(MinorSearch {
        witness: found.map(lift),
        nodes: search.nodes,
    })
}

/// Partition of the variables into maximal sets closed under transpositions
/// that leave `f` unchanged. Returns, per variable, the previous variable in
/// its block.
fn symmetry_predecessors(f: &BooleanFunction) -> Vec<Option<usize>> {
    let n = f.arity();
    let mut reps: Vec<usize> = Vec::new();
    let mut last_in_block: Vec<usize> = Vec::new();
    let mut prev = vec![None; n];
    for v in 0..n {
        match reps.iter().position(|&r| f.symmetric_in0(r, v)) {
            Some(b) => {
                prev[v] = Some(last_in_block[b]);
                last_in_block[b] = v;
            }
            None => {
                reps.push(v);
                last_in_block.push(v);
            }
        }
    }
    prev
}

/// Bitset pair per prefix length: whether some completion of a prefix
/// pattern yields 1, and whether some completion yields 0.
struct PrefixTables {
    can1: Vec<Vec<u64>>,
    can0: Vec<Vec<u64>>,
}

impl PrefixTables {
    fn new(f: &BooleanFunction) -> Self {
        let n = f.arity();
        let mut can1 = vec![Vec::new(); n + 1];
        let mut can0 = vec![Vec::new(); n + 1];
        can1[n] = f.words().to_vec();
        can0[n] = f.complement().words().to_vec();
        for len in (0..n).rev() {
            let size = 1usize << len;
            let mut c1 = vec![0u64; word_count_bits(size)];
            let mut c0 = vec![0u64; word_count_bits(size)];
            let hi = 1usize << len;
            for q in 0..size {
                let a = q;
                let b = q | hi;
                if get(&can1[len + 1], a) || get(&can1[len + 1], b) {
                    set(&mut c1, q);
                }
                if get(&can0[len + 1], a) || get(&can0[len + 1], b) {
                    set(&mut c0, q);
                }
            }
            can1[len] = c1;
            can0[len] = c0;
        }
        PrefixTables { can1, can0 }
    }

    #[inline]
    fn allows(&self, len: usize, pattern: u32, value: bool) -> bool {
        let table = if value { &self.can1[len] } else { &self.can0[len] };
        get(table, pattern as usize)
    }
}

#[inline]
fn word_count_bits(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn get(words: &[u64], i: usize) -> bool {
    (words[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
fn set(words: &mut [u64], i: usize) {
    words[i >> 6] |= 1 << (i & 63);
}

const CACHE_SIZE: usize = 16;

struct CoreSearch {
    k: usize,
    n: usize,
    tables: PrefixTables,
    f_prev: Vec<Option<usize>>,
    g_prev: Vec<Option<usize>>,
    /// g values, one bool per point.
    g_values: Vec<bool>,
    /// patterns[len][a]: prefix pattern of length `len` induced by point `a`.
    patterns: Vec<Vec<u32>>,
    sigma: Vec<usize>,
    used: Vec<u32>,
    uncovered: usize,
    cache: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl CoreSearch {
    fn new(g: &BooleanFunction, f: &BooleanFunction, budget: u64) -> Self {
        let k = g.arity();
        let n = f.arity();
        let points = 1usize << k;
        let mut patterns = vec![Vec::new(); n + 1];
        patterns[0] = vec![0u32; points];
        CoreSearch {
            k,
            n,
            tables: PrefixTables::new(f),
            f_prev: symmetry_predecessors(f),
            g_prev: symmetry_predecessors(g),
            g_values: (0..points as u32).map(|a| g.value(a)).collect(),
            patterns,
            sigma: vec![0; n],
            used: vec![0; k],
            uncovered: k,
            cache: Vec::with_capacity(CACHE_SIZE),
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Result<Option<Vec<usize>>, MinorError> {
        debug_assert!(self.k <= self.n);
        if self.descend(0)? {
            Ok(Some(self.sigma.clone()))
        } else {
            Ok(None)
        }
    }

    fn pattern_of(&self, a: u32, len: usize) -> u32 {
        (0..len).fold(0u32, |acc, p| acc | (((a >> self.sigma[p]) & 1) << p))
    }

    /// Checks the prefix of length `len` (positions `0..len` assigned) and
    /// fills `patterns[len]` on success.
    fn consistent(&mut self, len: usize) -> bool {
        for idx in 0..self.cache.len() {
            let a = self.cache[idx];
            let pat = self.pattern_of(a, len);
            if !self.tables.allows(len, pat, self.g_values[a as usize]) {
                if idx > 0 {
                    self.cache.swap(idx, idx - 1);
                }
                return false;
            }
        }
        let v = self.sigma[len - 1];
        let shift = len - 1;
        let (lower, upper) = self.patterns.split_at_mut(len);
        let prev = &lower[len - 1];
        let next = &mut upper[0];
        next.resize(prev.len(), 0);
        for (a, (&p, slot)) in prev.iter().zip(next.iter_mut()).enumerate() {
            let pat = p | ((((a as u32) >> v) & 1) << shift);
            *slot = pat;
            if !self.tables.allows(len, pat, self.g_values[a]) {
                if self.cache.len() == CACHE_SIZE {
                    self.cache.pop();
                }
                self.cache.insert(0, a as u32);
                return false;
            }
        }
        true
    }

    fn descend(&mut self, pos: usize) -> Result<bool, MinorError> {
        if pos == self.n {
            return Ok(self.uncovered == 0);
        }
        let remaining_after = self.n - pos - 1;
        let lo = self.f_prev[pos].map_or(0, |p| self.sigma[p]);
        for v in lo..self.k {
            if let Some(pv) = self.g_prev[v] {
                if self.used[pv] == 0 {
                    continue;
                }
            }
            let newly = self.used[v] == 0;
            let uncovered_after = self.uncovered - newly as usize;
            if uncovered_after > remaining_after {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(MinorError::Inconclusive { nodes: self.nodes });
            }
            self.sigma[pos] = v;
            if !self.consistent(pos + 1) {
                continue;
            }
            self.used[v] += 1;
            self.uncovered = uncovered_after;
            if self.descend(pos + 1)? {
                return Ok(true);
            }
            self.used[v] -= 1;
            self.uncovered += newly as usize;
        }
        Ok(false)
    }
}

/// Result of comparing two functions in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equivalent,
    /// Left is a minor of right only.
    Le,
    /// Right is a minor of left only.
    Ge,
    Incomparable,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equivalent => "equivalent",
            Relation::Le => "le",
            Relation::Ge => "ge",
            Relation::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub relation: Relation,
    /// Witness for `a ≼ b`.
    pub le_witness: Option<SubstitutionWitness>,
    /// Witness for `b ≼ a`.
    pub ge_witness: Option<SubstitutionWitness>,
    pub nodes: u64,
}

/// Compares `a` and `b` in both directions.
pub fn compare(a: &BooleanFunction, b: &BooleanFunction, budget: u64) -> Result<Comparison, MinorError> {
    let le = minor_leq_budget(a, b, budget)?;
    let ge = minor_leq_budget(b, a, budget)?;
    let relation = match (le.witness.is_some(), ge.witness.is_some()) {
        (true, true) => Relation::Equivalent,
        (true, false) => Relation::Le,
        (false, true) => Relation::Ge,
        (false, false) => Relation::Incomparable,
    };
    Ok(Comparison {
        relation,
        le_witness: le.witness,
        ge_witness: ge.witness,
        nodes: le.nodes + ge.nodes,
    })
}

/// `g ≼ f` and `f ≼ g`.
pub fn equivalent(g: &BooleanFunction, f: &BooleanFunction) -> Result<bool, MinorError> {
    if g.essential_arity() != f.essential_arity() {
        return Ok(false);
    }
    Ok(minor_leq(g, f)?.is_some() && minor_leq(f, g)?.is_some())
}

/// The lexicographically smallest table (read from index 0) of the essential
/// core over all variable permutations. Two functions are equivalent exactly
/// when their keys agree.
pub fn canonical_key(f: &BooleanFunction) -> Result<BooleanFunction, MinorError> {
    let (core, _) = f.essential_core();
    let n = core.arity();
    if n > CANONICAL_KEY_MAX_ARITY {
        return Err(MinorError::TooWide(n));
    }
    // Heap's algorithm: every permutation, one transposition per step.
    let mut best = core.clone();
    let mut cur = core;
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            cur.swap_vars0(j, i);
            if cur.cmp_bits(&best) == Ordering::Less {
                best = cur.clone();
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Outcome of one ordered pair in an antichain check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairResult {
    /// `fs[i] ≼ fs[j]` does not hold.
    None,
    /// `fs[i] ≼ fs[j]` holds.
    Minor,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub result: PairResult,
    pub witness: Option<SubstitutionWitness>,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntichainReport {
    pub verdict: Verdict,
    pub functions: Vec<String>,
    /// Every ordered pair `(i, j)`, `i != j`, sorted.
    pub pairs: Vec<PairReport>,
    pub total_nodes: u64,
}

impl AntichainReport {
    /// The first pair with `fs[i] ≼ fs[j]`.
    pub fn first_violation(&self) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.result == PairResult::Minor)
    }
}

/// Checks that no member of `fs` is a minor of another.
pub fn verify_antichain(fs: &[BooleanFunction], budget: u64) -> Result<AntichainReport, MinorError> {
    if fs.len() < 2 {
        return Err(MinorError::TooFewFunctions);
    }
    let pairs_idx: Vec<(usize, usize)> = (0..fs.len())
        .flat_map(|i| (0..fs.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pairs: Vec<PairReport> = pairs_idx
        .par_iter()
        .map(|&(i, j)| match minor_leq_budget(&fs[i], &fs[j], budget) {
            Ok(s) => PairReport {
                i,
                j,
                result: if s.witness.is_some() {
                    PairResult::Minor
                } else {
                    PairResult::None
                },
                witness: s.witness,
                nodes: s.nodes,
            },
            Err(MinorError::Inconclusive { nodes }) => PairReport {
                i,
                j,
                result: PairResult::Inconclusive,
                witness: None,
                nodes,
            },
            Err(e) => unreachable!("minor search only fails on budget: {e}"),
        })
        .collect();
    let verdict = if pairs.iter().any(|p| p.result == PairResult::Minor) {
        Verdict::False
    } else if pairs.iter().any(|p| p.result == PairResult::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::True
    };
    Ok(AntichainReport {
        verdict,
        functions: fs.iter().map(crate::parse::format_hex).collect(),
        total_nodes: pairs.iter().map(|p| p.nodes).sum(),
        pairs,
    })
}

/// Members of `fs` with no other member strictly below them, in input order.
pub fn minimal_elements(fs: &[BooleanFunction]) -> Result<Vec<BooleanFunction>, MinorError> {
    let mut out = Vec::new();
    'outer: for (i, f) in fs.iter().enumerate() {
        for (j, g) in fs.iter().enumerate() {
            if i == j || g.essential_arity() > f.essential_arity() {
                continue;
            }
            if minor_leq(g, f)?.is_some() && !equivalent(g, f)? {
                continue 'outer;
            }
        }
        out.push(f.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_big_g, make_f, make_h};
    use crate::parse::parse_function;

    fn p(s: &str) -> BooleanFunction {
        parse_function(s).unwrap()
    }

    #[test]
    fn diagonal_witness() {
        let w = minor_leq(&p("x1"), &p("x1 & x2")).unwrap().unwrap();
        assert_eq!(w.map, vec![1, 1]);
        assert!(w.verify(&p("x1"), &p("x1 & x2")));
    }

    #[test]
    fn antichain_families_are_incomparable() {
        assert!(minor_leq(&make_f(4).unwrap(), &make_f(5).unwrap()).unwrap().is_none());
        assert!(minor_leq(&make_h(2).unwrap(), &make_h(3).unwrap()).unwrap().is_none());
        assert!(minor_leq(&make_h(3).unwrap(), &make_h(2).unwrap()).unwrap().is_none());
    }

    #[test]
    fn equivalence() {
        assert!(equivalent(&p("x1 & x2"), &p("x2 & x1")).unwrap());
        assert!(equivalent(&p("x1 & x2@3"), &p("x1 & x2")).unwrap());
        assert!(!equivalent(&make_f(4).unwrap(), &make_f(5).unwrap()).unwrap());
    }

    #[test]
    fn witnesses_use_original_indices() {
        let g = p("x2 & x4@5");
        let f = p("x3 & !x1 | x1 & x2@4");
        // f(x2, x4, x4, *) = x4 & !x2 | x2 & x4 = x4: not g.
        let result = minor_leq(&g, &f).unwrap();
        if let Some(w) = &result {
            assert!(w.verify(&g, &f));
        }
        let h = p("x1 & x3@3");
        let w = minor_leq(&g, &h).unwrap().unwrap();
        assert!(w.verify(&g, &h));
        assert_eq!(w.map[1], 1);
    }

    #[test]
    fn constant_minors() {
        let zero = p("0@3");
        let f = p("x1 & !x2");
        let w = minor_leq(&zero, &f).unwrap().unwrap();
        assert!(w.verify(&zero, &f));
        assert!(minor_leq(&p("1@2"), &f).unwrap().is_none());
        assert!(minor_leq(&p("x1"), &p("1@2")).unwrap().is_none());
    }

    #[test]
    fn canonical_keys() {
        assert_eq!(canonical_key(&p("x1 & x2")).unwrap(), canonical_key(&p("x2 & x1")).unwrap());
        let proj = BooleanFunction::projection(5, 3).unwrap();
        assert_eq!(canonical_key(&proj).unwrap(), canonical_key(&p("x1")).unwrap());
        assert_ne!(
            canonical_key(&make_f(4).unwrap()).unwrap(),
            canonical_key(&crate::families::make_g(4).unwrap()).unwrap()
        );
        assert!(matches!(canonical_key(&make_f(11).unwrap()), Err(MinorError::TooWide(11))));
    }

    #[test]
    fn canonical_key_is_a_permutation_minimum() {
        let f = p("x1 & !x2 | x3 ^ x4");
        let key = canonical_key(&f).unwrap();
        let mut best = f.clone();
        crate::monoid::for_each_map(4, 4, |perm| {
            let mut seen = [false; 4];
            perm.iter().for_each(|&v| seen[v] = true);
            if seen.iter().all(|&s| s) {
                let g = f.substitute0(perm, 4);
                if g.cmp_bits(&best) == Ordering::Less {
                    best = g;
                }
            }
        });
        assert_eq!(key, best);
    }

    #[test]
    fn antichains() {
        let fs: Vec<_> = (4..=7).map(|n| make_f(n).unwrap()).collect();
        assert_eq!(verify_antichain(&fs, DEFAULT_BUDGET).unwrap().verdict, Verdict::True);
        let gs: Vec<_> = (3..=5).map(|m| make_big_g(3, m).unwrap()).collect();
        assert_eq!(verify_antichain(&gs, DEFAULT_BUDGET).unwrap().verdict, Verdict::True);
        let report = verify_antichain(&[p("x1"), p("x1 & x2")], DEFAULT_BUDGET).unwrap();
        assert_eq!(report.verdict, Verdict::False);
        let v = report.first_violation().unwrap();
        assert_eq!((v.i, v.j), (0, 1));
        assert!(v.witness.as_ref().unwrap().verify(&p("x1"), &p("x1 & x2")));
        assert!(verify_antichain(&[p("x1")], 10).is_err());
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let f = make_f(8).unwrap();
        let g = make_f(7).unwrap();
        assert!(matches!(
            minor_leq_budget(&g, &f, 1),
            Err(MinorError::Inconclusive { .. })
        ));
    }

    #[test]
    fn minimal_elements_examples() {
        assert_eq!(minimal_elements(&[p("x1"), p("x1 & x2")]).unwrap(), vec![p("x1")]);
        let h2 = make_h(2).unwrap();
        let h3 = make_h(3).unwrap();
        let g33 = make_big_g(3, 3).unwrap();
        assert_eq!(
            minimal_elements(&[h2.clone(), h3.clone(), g33]).unwrap(),
            vec![h2, h3]
        );
    }
}
