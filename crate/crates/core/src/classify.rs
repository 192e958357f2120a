//! Cardinality of closed intervals `⟨C1, C2⟩` between catalog classes.
//!
//! The verdict is decided symbolically from the inclusion table:
//!
//! 1. `C1 ⊄ C2`: the interval is empty.
//! 2. `C2 ∖ C1` holds only quasi-monadic functions: finite.
//! 3. `C2` lies in `V`, `Λ` or `L`, or is sandwiched as
//!    `C ∩ Mc ⊆ C1`, `C2 ⊆ C ∩ M` for a separating clone `C`: countably
//!    infinite.
//! 4. Otherwise the interval contains one of the minimal uncountable
//!    intervals of [`minimal_interval_table`], and the antichain family of
//!    that entry supplies a witness.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::assoc::{is_quasi_associative, AssocError};
use crate::classes::{
    difference_sample, is_subclass, member, representatives, ClassError, ClassId, Context, Level,
    SepKind,
};
use crate::families::{quasi_monadic_lattice, Family, FamilyError, FamilySpec};
use crate::function::BooleanFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "count")]
pub enum VerdictKind {
    Empty,
    /// The exact number of classes, when it was computed.
    Finite(Option<u64>),
    CountablyInfinite,
    Uncountable,
}

impl VerdictKind {
    pub fn is_countable(&self) -> bool {
        !matches!(self, VerdictKind::Uncountable)
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::Empty => f.write_str("Empty"),
            VerdictKind::Finite(Some(n)) => write!(f, "Finite({n})"),
            VerdictKind::Finite(None) => f.write_str("Finite"),
            VerdictKind::CountablyInfinite => f.write_str("CountablyInfinite"),
            VerdictKind::Uncountable => f.write_str("Uncountable"),
        }
    }
}

/// How a family member is turned into the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Identity,
    Complement,
    Dual,
}

impl Transform {
    pub fn apply(self, f: &BooleanFunction) -> BooleanFunction {
        match self {
            Transform::Identity => f.clone(),
            Transform::Complement => f.complement(),
            Transform::Dual => f.dual(),
        }
    }

    fn mirror(self) -> Transform {
        match self {
            Transform::Identity => Transform::Dual,
            Transform::Dual => Transform::Identity,
            Transform::Complement => Transform::Complement,
        }
    }
}

/// A family member, possibly complemented or dualized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessSpec {
    pub family: FamilySpec,
    pub transform: Transform,
}

impl WitnessSpec {
    fn new(family: FamilySpec, transform: Transform) -> Self {
        WitnessSpec { family, transform }
    }

    pub fn build(&self) -> Result<BooleanFunction, FamilyError> {
        Ok(self.transform.apply(&self.family.build()?))
    }

    /// The corresponding witness for the dual interval.
    pub fn dual(&self) -> WitnessSpec {
        WitnessSpec::new(self.family.clone(), self.transform.mirror())
    }
}

impl fmt::Display for WitnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transform {
            Transform::Identity => write!(f, "{}", self.family),
            Transform::Complement => write!(f, "complement({})", self.family),
            Transform::Dual => write!(f, "dual({})", self.family),
        }
    }
}

impl Serialize for WitnessSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One minimal uncountable interval with the family that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalInterval {
    pub lower: ClassId,
    pub upper: ClassId,
    pub witness: WitnessSpec,
    /// Stable label of the group this entry belongs to.
    pub group: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub spec: WitnessSpec,
    pub function: BooleanFunction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalVerdict {
    pub lower: ClassId,
    pub upper: ClassId,
    #[serde(flatten)]
    pub kind: VerdictKind,
    /// Which clause decided the verdict.
    pub justification: String,
    /// The separating clone used by the sandwich clause.
    pub via: Option<ClassId>,
    /// The minimal interval found inside an uncountable interval.
    pub minimal: Option<(ClassId, ClassId)>,
    pub witness: Option<Witness>,
}

fn sep(kind: SepKind, context: Context, level: Level) -> ClassId {
    ClassId::sep(kind, context, level)
}

/// The part of `c` reachable from its members of essential arity at least
/// 2: `c` with the quasi-monadic functions that are not minors of such
/// members removed. `c ∖ core_part(c)` consists of quasi-monadic functions.
pub fn core_part(c: ClassId) -> ClassId {
    use ClassId::*;
    if c.is_quasi_monadic() {
        return Empty;
    }
    match c {
        M | M0 | M1 => Mc,
        Lambda | Lambda0 | Lambda1 => LambdaC,
        V | V0 | V1 => Vc,
        Sep {
            kind,
            context: Context::M,
            level,
        } => sep(kind, Context::Mc, level),
        other => other,
    }
}

/// Indices into [`quasi_monadic_lattice`] generator flags: `x1`, `!x1`, 0, 1.
fn monadic_generators(c: ClassId) -> Option<[bool; 4]> {
    use ClassId::*;
    Some(match c {
        Empty => [false, false, false, false],
        C0 => [false, false, true, false],
        C1 => [false, false, false, true],
        C => [false, false, true, true],
        Ic => [true, false, false, false],
        I0 => [true, false, true, false],
        I1 => [true, false, false, true],
        I => [true, false, true, true],
        IStar => [true, true, false, false],
        Omega1 => [true, true, true, true],
        _ => return None,
    })
}

/// Largest parameter considered for the sandwich clause.
fn sandwich_bound(c1: ClassId, c2: ClassId) -> u32 {
    c1.param().unwrap_or(0).max(c2.param().unwrap_or(0)).max(2) + 2
}

/// Candidate clones `C` for the sandwich clause, as `(C, C ∩ Mc, C ∩ M)`.
fn sandwich_candidates(bound: u32) -> Vec<(ClassId, ClassId, ClassId)> {
    let mut out = vec![(ClassId::Omega, ClassId::Mc, ClassId::M)];
    for kind in [SepKind::U, SepKind::W] {
        let mut levels: Vec<Level> = (2..=bound).map(Level::Rank).collect();
        levels.push(Level::Infinite);
        for level in levels {
            out.push((
                sep(kind, Context::All, level),
                sep(kind, Context::Mc, level),
                sep(kind, Context::M, level),
            ));
        }
    }
    out
}

fn witness_of(entry: &MinimalInterval) -> Result<Witness, ClassifyError> {
    Ok(Witness {
        function: entry.witness.build()?,
        spec: entry.witness.clone(),
    })
}

/// Decides the cardinality of `⟨c1, c2⟩`.
pub fn classify_interval(c1: ClassId, c2: ClassId) -> Result<IntervalVerdict, ClassifyError> {
    let mut verdict = IntervalVerdict {
        lower: c1,
        upper: c2,
        kind: VerdictKind::Empty,
        justification: "empty.not_subclass".into(),
        via: None,
        minimal: None,
        witness: None,
    };
    if !is_subclass(c1, c2) {
        return Ok(verdict);
    }
    if is_subclass(core_part(c2), c1) {
        verdict.justification = "thm5.finite".into();
        let count = match (monadic_generators(c1), monadic_generators(c2)) {
            (Some(g1), Some(g2)) => {
                let free = g1.iter().zip(&g2).filter(|(a, b)| !**a && **b).count();
                Some(1u64 << free)
            }
            _ => None,
        };
        verdict.kind = VerdictKind::Finite(count);
        return Ok(verdict);
    }
    verdict.kind = VerdictKind::CountablyInfinite;
    for (i, bound) in [ClassId::V, ClassId::Lambda, ClassId::L].into_iter().enumerate() {
        if is_subclass(c2, bound) {
            verdict.justification = format!("thm9.bullet{}", i + 1);
            verdict.via = Some(bound);
            return Ok(verdict);
        }
    }
    for (c, meet_mc, meet_m) in sandwich_candidates(sandwich_bound(c1, c2)) {
        if is_subclass(meet_mc, c1) && is_subclass(c2, meet_m) {
            verdict.justification = "thm9.bullet4".into();
            verdict.via = Some(c);
            return Ok(verdict);
        }
    }
    verdict.kind = VerdictKind::Uncountable;
    verdict.justification = "thm10.witness".into();
    let bound = sandwich_bound(c1, c2);
    if let Some(entry) = minimal_interval_table(bound)
        .iter()
        .find(|e| is_subclass(c1, e.lower) && is_subclass(e.upper, c2))
    {
        verdict.minimal = Some((entry.lower, entry.upper));
        verdict.witness = Some(witness_of(entry)?);
    }
    Ok(verdict)
}

/// The minimal uncountable intervals, with separating ranks up to
/// `max_param` in the parameterized groups.
pub fn minimal_interval_table(max_param: u32) -> Vec<MinimalInterval> {
    use ClassId::*;
    use Transform::*;
    let f5 = FamilySpec::new(Family::F, 5);
    let g5 = FamilySpec::new(Family::G, 5);
    let u5 = FamilySpec::new(Family::U, 5);
    let tu5 = FamilySpec::new(Family::Tu, 5);
    let h4 = FamilySpec::new(Family::H, 4);
    let g24 = FamilySpec::big_g(2, 4);
    let t7 = FamilySpec::new(Family::T, 7);
    let s7 = FamilySpec::new(Family::S, 7);
    let w = WitnessSpec::new;
    let mut table = Vec::new();
    let mut push = |lower, upper, witness: WitnessSpec, group| {
        table.push(MinimalInterval {
            lower,
            upper,
            witness,
            group,
        })
    };

    push(T0, Omega, w(f5.clone(), Dual), "below-omega");
    for c in [T1, L, S, M] {
        push(c, Omega, w(f5.clone(), Identity), "below-omega");
    }
    for c in [Tc, L0, M0, ClassId::u(2)] {
        push(c, T0, w(f5.clone(), Identity), "below-t0");
    }
    for c in [Tc, L1, M1, ClassId::w(2)] {
        push(c, T1, w(f5.clone(), Dual), "below-t1");
    }
    for c in [Mc, Sc, sep(SepKind::U, Context::Tc, Level::Rank(2)), sep(SepKind::W, Context::Tc, Level::Rank(2))] {
        push(c, Tc, w(g5.clone(), Identity), "below-tc");
    }

    let mut levels: Vec<Level> = (2..=max_param.max(2)).map(Level::Rank).collect();
    levels.push(Level::Infinite);
    for &level in &levels {
        for (kind, t) in [(SepKind::U, Identity), (SepKind::W, Dual)] {
            let top = sep(kind, Context::All, level);
            for ctx in [Context::Tc, Context::M] {
                push(sep(kind, ctx, level), top, w(u5.clone(), t), "separating-context");
            }
            push(
                sep(kind, Context::Mc, level),
                sep(kind, Context::Tc, level),
                w(tu5.clone(), t),
                "separating-tc",
            );
        }
    }

    push(Lambda, M, w(h4.clone(), Identity), "monotone");
    push(V, M, w(h4.clone(), Identity), "monotone");
    push(sep(SepKind::U, Context::M, Level::Rank(2)), M0, w(h4.clone(), Identity), "monotone");
    push(sep(SepKind::W, Context::M, Level::Rank(2)), M1, w(h4.clone(), Dual), "monotone");
    push(sep(SepKind::U, Context::Mc, Level::Rank(2)), Mc, w(h4.clone(), Identity), "monotone");
    push(sep(SepKind::W, Context::Mc, Level::Rank(2)), Mc, w(h4.clone(), Dual), "monotone");
    push(SM, sep(SepKind::U, Context::Mc, Level::Rank(2)), w(h4.clone(), Dual), "monotone");
    push(SM, sep(SepKind::W, Context::Mc, Level::Rank(2)), w(h4.clone(), Identity), "monotone");
    // Covers that fail every countability clause but are missing from the
    // usual list of minimal intervals; found by sweeping all catalog pairs.
    push(Lambda1, M1, w(h4.clone(), Identity), "supplement");
    push(V0, M0, w(h4.clone(), Identity), "supplement");

    for n in 2..=max_param.max(2) {
        let spec = FamilySpec::new(Family::H, n as usize + 1);
        for ctx in [Context::All, Context::Tc, Context::M, Context::Mc] {
            push(
                sep(SepKind::W, ctx, Level::Rank(n + 1)),
                sep(SepKind::W, ctx, Level::Rank(n)),
                w(spec.clone(), Identity),
                "rank-step",
            );
            push(
                sep(SepKind::U, ctx, Level::Rank(n + 1)),
                sep(SepKind::U, ctx, Level::Rank(n)),
                w(spec.clone(), Dual),
                "rank-step",
            );
        }
    }

    push(Lambda0, sep(SepKind::U, Context::M, Level::Infinite), w(g24.clone(), Identity), "limit");
    push(LambdaC, sep(SepKind::U, Context::Mc, Level::Infinite), w(g24.clone(), Identity), "limit");
    push(V1, sep(SepKind::W, Context::M, Level::Infinite), w(g24.clone(), Dual), "limit");
    push(Vc, sep(SepKind::W, Context::Mc, Level::Infinite), w(g24.clone(), Dual), "limit");

    push(Ic, SM, w(t7.clone(), Identity), "self-dual");
    push(SM, Sc, w(s7.clone(), Identity), "self-dual");
    push(Lc, Sc, w(s7, Identity), "self-dual");
    push(Sc, S, w(t7.clone(), Complement), "self-dual");
    push(LS, S, w(t7, Complement), "self-dual");
    table
}

/// Result of checking one table entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryCheck {
    pub entry: MinimalInterval,
    pub in_upper: bool,
    pub outside_lower: bool,
    pub quasi_associative: bool,
    /// The entry is not implied by a sandwich or bounding clause.
    pub not_countable: bool,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.in_upper && self.outside_lower && !self.quasi_associative && self.not_countable
    }
}

/// Validates every entry of the table: the witness lies in the difference
/// and is not quasi-associative.
pub fn validate_minimal_table(max_param: u32) -> Result<Vec<EntryCheck>, ClassifyError> {
    let table = minimal_interval_table(max_param);
    let mut cache: BTreeMap<String, (BooleanFunction, bool)> = BTreeMap::new();
    let mut out = Vec::with_capacity(table.len());
    for entry in table {
        let key = entry.witness.to_string();
        if !cache.contains_key(&key) {
            let f = entry.witness.build()?;
            let qa = is_quasi_associative(&f)?;
            cache.insert(key.clone(), (f, qa));
        }
        let (f, qa) = &cache[&key];
        let in_upper = member(f, entry.upper)?;
        let outside_lower = !member(f, entry.lower)?;
        let verdict = classify_interval(entry.lower, entry.upper)?;
        out.push(EntryCheck {
            in_upper,
            outside_lower,
            quasi_associative: *qa,
            not_countable: !verdict.kind.is_countable(),
            entry,
        });
    }
    Ok(out)
}

/// Scan of a difference at an arity cap for non-quasi-associative members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub lower: ClassId,
    pub upper: ClassId,
    pub cap: usize,
    pub verdict: VerdictKind,
    pub sample_size: usize,
    /// Members of the difference whose core is not associative.
    pub non_associative: Vec<BooleanFunction>,
}

impl CrossCheck {
    /// A non-quasi-associative member only appears in uncountable intervals.
    pub fn consistent(&self) -> bool {
        self.non_associative.is_empty() || self.verdict == VerdictKind::Uncountable
    }

    /// Whether the cap was already large enough to exhibit a witness.
    pub fn witness_at_cap(&self) -> bool {
        !self.non_associative.is_empty()
    }
}

pub fn cross_check_thm10(c1: ClassId, c2: ClassId, arity_cap: usize) -> Result<CrossCheck, ClassifyError> {
    let verdict = classify_interval(c1, c2)?.kind;
    let sample = if verdict == VerdictKind::Empty {
        Vec::new()
    } else {
        difference_sample(c1, c2, arity_cap)?
    };
    let mut non_associative = Vec::new();
    for f in &sample {
        if !is_quasi_associative(f)? {
            non_associative.push(f.clone());
        }
    }
    Ok(CrossCheck {
        lower: c1,
        upper: c2,
        cap: arity_cap,
        verdict,
        sample_size: sample.len(),
        non_associative,
    })
}

/// Summary of [`cross_check_all`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckSummary {
    pub pairs: usize,
    pub uncountable: usize,
    pub uncountable_with_witness: usize,
    /// Pairs with a non-quasi-associative member but a countable verdict.
    pub violations: Vec<(ClassId, ClassId, BooleanFunction)>,
}

/// Runs the cross-check over every pair `c1 ⊆ c2` of the catalog with ranks
/// up to `max_param`, sharing membership tables between pairs.
pub fn cross_check_all(max_param: u32, arity_cap: usize) -> Result<CrossCheckSummary, ClassifyError> {
    let reps = representatives(arity_cap)?;
    let qa: Vec<bool> = reps
        .par_iter()
        .map(is_quasi_associative)
        .collect::<Result<_, _>>()?;
    let classes = ClassId::catalog(max_param);
    let masks: Vec<Vec<bool>> = classes
        .par_iter()
        .map(|&c| reps.iter().map(|f| member(f, c)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (0..classes.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| is_subclass(classes[i], classes[j]))
        .collect();
    let results: Vec<(usize, usize, VerdictKind, Option<usize>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let kind = classify_interval(classes[i], classes[j])?.kind;
            let bad = (0..reps.len()).find(|&k| masks[j][k] && !masks[i][k] && !qa[k]);
            Ok((i, j, kind, bad))
        })
        .collect::<Result<_, ClassifyError>>()?;
    let mut summary = CrossCheckSummary {
        pairs: results.len(),
        uncountable: 0,
        uncountable_with_witness: 0,
        violations: Vec::new(),
    };
    for (i, j, kind, bad) in results {
        if kind == VerdictKind::Uncountable {
            summary.uncountable += 1;
            if bad.is_some() {
                summary.uncountable_with_witness += 1;
            }
        } else if let Some(k) = bad {
            summary.violations.push((classes[i], classes[j], reps[k].clone()));
        }
    }
    Ok(summary)
}

/// Number of classes of the quasi-monadic lattice between `c1` and `c2`,
/// counted on materialized classes at `cap`.
pub fn count_monadic_interval(c1: ClassId, c2: ClassId, cap: usize) -> Result<Option<usize>, ClassifyError> {
    let (Some(g1), Some(g2)) = (monadic_generators(c1), monadic_generators(c2)) else {
        return Ok(None);
    };
    let lattice = quasi_monadic_lattice(cap).map_err(|_| ClassError::CapOutOfRange(cap))?;
    let find = |g: [bool; 4]| lattice.iter().find(|c| c.generators == g).map(|c| &c.class);
    let (Some(lo), Some(hi)) = (find(g1), find(g2)) else {
        return Ok(None);
    };
    Ok(Some(
        lattice
            .iter()
            .filter(|c| lo.is_subset(&c.class) && c.class.is_subset(hi))
            .count(),
    ))
}
