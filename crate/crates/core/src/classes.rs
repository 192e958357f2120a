//! The named classes: Post's clones plus the empty class and the three
//! classes of constants.
//!
//! Membership is decided by predicates on truth tables. Inclusion between
//! classes is read off a table of cover relations; [`validate_table`] checks
//! that table against the predicates on all small functions.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::function::BooleanFunction;
use crate::minor::canonical_key;

/// Largest essential arity accepted by [`separating_rank`].
pub const RANK_MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("essential arity {0} exceeds 16 for a separating-rank computation")]
    TooWide(usize),
    #[error("unknown class name `{0}`")]
    UnknownClass(String),
    #[error("arity cap {0} is outside 1..=4")]
    CapOutOfRange(usize),
}

/// `U` classes are built from 1-separating functions, `W` classes from
/// 0-separating ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SepKind {
    U,
    W,
}

impl SepKind {
    fn value(self) -> bool {
        self == SepKind::U
    }

    fn dual(self) -> SepKind {
        match self {
            SepKind::U => SepKind::W,
            SepKind::W => SepKind::U,
        }
    }
}

/// The class a separating family is intersected with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    All,
    Tc,
    M,
    Mc,
}

impl Context {
    fn prefix(self) -> &'static str {
        match self {
            Context::All => "",
            Context::Tc => "Tc",
            Context::M => "M",
            Context::Mc => "Mc",
        }
    }
}

/// Separation rank parameter: `Rank(m)` with `m >= 2`, or the limit class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Rank(u32),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    Empty,
    C0,
    C1,
    C,
    Ic,
    I0,
    I1,
    I,
    IStar,
    Omega1,
    Lambda,
    Lambda0,
    Lambda1,
    LambdaC,
    V,
    V0,
    V1,
    Vc,
    L,
    L0,
    L1,
    Lc,
    LS,
    S,
    Sc,
    SM,
    M,
    M0,
    M1,
    Mc,
    T0,
    T1,
    Tc,
    Omega,
    Sep {
        kind: SepKind,
        context: Context,
        level: Level,
    },
}

const BASIC: [(ClassId, &str); 34] = [
    (ClassId::Empty, "Empty"),
    (ClassId::C0, "C0"),
    (ClassId::C1, "C1"),
    (ClassId::C, "C"),
    (ClassId::Ic, "Ic"),
    (ClassId::I0, "I0"),
    (ClassId::I1, "I1"),
    (ClassId::I, "I"),
    (ClassId::IStar, "Istar"),
    (ClassId::Omega1, "Omega1"),
    (ClassId::Lambda, "Lambda"),
    (ClassId::Lambda0, "Lambda0"),
    (ClassId::Lambda1, "Lambda1"),
    (ClassId::LambdaC, "LambdaC"),
    (ClassId::V, "V"),
    (ClassId::V0, "V0"),
    (ClassId::V1, "V1"),
    (ClassId::Vc, "Vc"),
    (ClassId::L, "L"),
    (ClassId::L0, "L0"),
    (ClassId::L1, "L1"),
    (ClassId::Lc, "Lc"),
    (ClassId::LS, "LS"),
    (ClassId::S, "S"),
    (ClassId::Sc, "Sc"),
    (ClassId::SM, "SM"),
    (ClassId::M, "M"),
    (ClassId::M0, "M0"),
    (ClassId::M1, "M1"),
    (ClassId::Mc, "Mc"),
    (ClassId::T0, "T0"),
    (ClassId::T1, "T1"),
    (ClassId::Tc, "Tc"),
    (ClassId::Omega, "Omega"),
];

impl ClassId {
    pub fn sep(kind: SepKind, context: Context, level: Level) -> ClassId {
        ClassId::Sep {
            kind,
            context,
            level,
        }
    }

    /// `U_m` for `m >= 2`.
    pub fn u(m: u32) -> ClassId {
        ClassId::sep(SepKind::U, Context::All, Level::Rank(m))
    }

    /// `W_m` for `m >= 2`.
    pub fn w(m: u32) -> ClassId {
        ClassId::sep(SepKind::W, Context::All, Level::Rank(m))
    }

    /// The 34 unparameterized classes.
    pub fn basic() -> impl Iterator<Item = ClassId> {
        BASIC.iter().map(|(c, _)| *c)
    }

    /// Every class, with separating ranks `2..=max_param` plus the limit.
    pub fn catalog(max_param: u32) -> Vec<ClassId> {
        let mut out: Vec<ClassId> = ClassId::basic().collect();
        for kind in [SepKind::U, SepKind::W] {
            for context in [Context::All, Context::Tc, Context::M, Context::Mc] {
                for m in 2..=max_param {
                    out.push(ClassId::sep(kind, context, Level::Rank(m)));
                }
                out.push(ClassId::sep(kind, context, Level::Infinite));
            }
        }
        out
    }

    /// Largest rank parameter in the name, if any.
    pub fn param(&self) -> Option<u32> {
        match self {
            ClassId::Sep {
                level: Level::Rank(m),
                ..
            } => Some(*m),
            _ => None,
        }
    }

    /// The image under `f -> f^d`.
    pub fn dual(self) -> ClassId {
        use ClassId::*;
        match self {
            C0 => C1,
            C1 => C0,
            I0 => I1,
            I1 => I0,
            Lambda => V,
            V => Lambda,
            Lambda0 => V1,
            V1 => Lambda0,
            Lambda1 => V0,
            V0 => Lambda1,
            LambdaC => Vc,
            Vc => LambdaC,
            L0 => L1,
            L1 => L0,
            M0 => M1,
            M1 => M0,
            T0 => T1,
            T1 => T0,
            Sep {
                kind,
                context,
                level,
            } => Sep {
                kind: kind.dual(),
                context,
                level,
            },
            other => other,
        }
    }

    /// Whether every member has essential arity at most 1.
    pub fn is_quasi_monadic(&self) -> bool {
        use ClassId::*;
        matches!(self, Empty | C0 | C1 | C | Ic | I0 | I1 | I | IStar | Omega1)
    }

    /// Whether the class contains every projection.
    pub fn is_clone(&self) -> bool {
        !matches!(self, ClassId::Empty | ClassId::C0 | ClassId::C1 | ClassId::C)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::Sep {
                kind,
                context,
                level,
            } => {
                let k = match kind {
                    SepKind::U => "U",
                    SepKind::W => "W",
                };
                match level {
                    Level::Rank(m) => write!(f, "{}{}{}", context.prefix(), k, m),
                    Level::Infinite => write!(f, "{}{}Inf", context.prefix(), k),
                }
            }
            basic => {
                let name = BASIC
                    .iter()
                    .find(|(c, _)| c == basic)
                    .map(|(_, n)| *n)
                    .expect("every basic class is named");
                f.write_str(name)
            }
        }
    }
}

impl FromStr for ClassId {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((c, _)) = BASIC.iter().find(|(_, n)| *n == s) {
            return Ok(*c);
        }
        if matches!(s, "IStar" | "I*") {
            return Ok(ClassId::IStar);
        }
        if matches!(s, "Omega(1)") {
            return Ok(ClassId::Omega1);
        }
        let unknown = || ClassError::UnknownClass(s.to_string());
        let (context, rest) = if let Some(r) = s.strip_prefix("Tc") {
            (Context::Tc, r)
        } else if let Some(r) = s.strip_prefix("Mc") {
            (Context::Mc, r)
        } else if let Some(r) = s.strip_prefix('M') {
            (Context::M, r)
        } else {
            (Context::All, s)
        };
        let (kind, rest) = if let Some(r) = rest.strip_prefix('U') {
            (SepKind::U, r)
        } else if let Some(r) = rest.strip_prefix('W') {
            (SepKind::W, r)
        } else {
            return Err(unknown());
        };
        let level = if matches!(rest, "Inf" | "inf") {
            Level::Infinite
        } else {
            match rest.parse::<u32>() {
                Ok(m) if m >= 2 => Level::Rank(m),
                _ => return Err(unknown()),
            }
        };
        Ok(ClassId::sep(kind, context, level))
    }
}

impl Serialize for ClassId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Largest `k` such that `f` is `a`-separating of rank `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rank {
    /// Some set of at most two points of `f^{-1}(a)` is not `a`-separating.
    BelowTwo,
    /// Rank `m` but not `m + 1`.
    Finite(u32),
    /// `f^{-1}(a)` is empty or itself `a`-separating.
    Infinite,
}

impl Rank {
    /// Whether `f` is `a`-separating of rank `m`.
    pub fn at_least(self, level: Level) -> bool {
        match (self, level) {
            (Rank::Infinite, _) => true,
            (Rank::Finite(r), Level::Rank(m)) => r >= m,
            _ => false,
        }
    }
}

/// Separating rank of `f` with respect to `a`. Dummy variables do not change
/// the rank, so the computation runs on the essential core.
pub fn separating_rank(f: &BooleanFunction, a: bool) -> Result<Rank, ClassError> {
    let (core, _) = f.essential_core();
    let n = core.arity();
    if n > RANK_MAX_ARITY {
        return Err(ClassError::TooWide(n));
    }
    let full: u32 = (1u32 << n) - 1;
    // For each point of f^{-1}(a), the coordinates that differ from a. A set
    // of points is a-separating iff these sets do not cover all coordinates.
    let table = if a { core.clone() } else { core.complement() };
    let mut sets: Vec<u32> = table
        .ones()
        .map(|p| if a { !p & full } else { p })
        .collect();
    if sets.is_empty() {
        return Ok(Rank::Infinite);
    }
    if sets.iter().fold(0, |acc, s| acc | s) != full {
        return Ok(Rank::Infinite);
    }
    // Only inclusion-maximal sets matter for a smallest cover.
    sets.sort_unstable_by_key(|s| std::cmp::Reverse(s.count_ones()));
    sets.dedup();
    let mut maximal: Vec<u32> = Vec::new();
    for s in sets {
        if !maximal.iter().any(|&t| s & t == s) {
            maximal.push(s);
        }
    }
    let size = smallest_cover(&maximal, full, n);
    Ok(if size <= 2 {
        Rank::BelowTwo
    } else {
        Rank::Finite(size as u32 - 1)
    })
}

/// Size of a smallest subfamily of `sets` whose union is `full`, by iterative
/// deepening over the lowest uncovered element.
fn smallest_cover(sets: &[u32], full: u32, n: usize) -> usize {
    let mut containing: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &s in sets {
        for (c, list) in containing.iter_mut().enumerate() {
            if (s >> c) & 1 == 1 {
                list.push(s);
            }
        }
    }
    fn search(
        covered: u32,
        left: usize,
        full: u32,
        containing: &[Vec<u32>],
        failed: &mut HashSet<(u32, usize)>,
    ) -> bool {
        if covered == full {
            return true;
        }
        if left == 0 || failed.contains(&(covered, left)) {
            return false;
        }
        let c = (!covered & full).trailing_zeros() as usize;
        for &s in &containing[c] {
            if search(covered | s, left - 1, full, containing, failed) {
                return true;
            }
        }
        failed.insert((covered, left));
        false
    }
    let mut failed = HashSet::new();
    (1..=n)
        .find(|&k| search(0, k, full, &containing, &mut failed))
        .expect("the union of all sets is full")
}

fn is_conjunction_core(f: &BooleanFunction) -> bool {
    let (core, _) = f.essential_core();
    !core.is_constant() && core.count_ones() == 1 && core.value((core.table_len() - 1) as u32)
}

fn is_disjunction_core(f: &BooleanFunction) -> bool {
    let (core, _) = f.essential_core();
    !core.is_constant() && core.count_ones() == core.table_len() as u64 - 1 && !core.value(0)
}

fn is_variable(f: &BooleanFunction) -> bool {
    let (core, _) = f.essential_core();
    core.arity() == 1 && core.words()[0] == 0b10 && !f.is_constant()
}

fn t0(f: &BooleanFunction) -> bool {
    !f.value(0)
}

fn t1(f: &BooleanFunction) -> bool {
    f.value((f.table_len() - 1) as u32)
}

fn in_context(f: &BooleanFunction, context: Context) -> bool {
    match context {
        Context::All => true,
        Context::Tc => t0(f) && t1(f),
        Context::M => f.is_monotone(),
        Context::Mc => f.is_monotone() && t0(f) && t1(f),
    }
}

/// Decides `f ∈ c`.
pub fn member(f: &BooleanFunction, c: ClassId) -> Result<bool, ClassError> {
    use ClassId::*;
    let konst = f.constant_value();
    let lambda = || konst.is_some() || is_conjunction_core(f);
    let vee = || konst.is_some() || is_disjunction_core(f);
    let linear = || f.degree() <= 1;
    Ok(match c {
        Empty => false,
        C0 => konst == Some(false),
        C1 => konst == Some(true),
        C => konst.is_some(),
        Ic => is_variable(f),
        I0 => is_variable(f) || konst == Some(false),
        I1 => is_variable(f) || konst == Some(true),
        I => is_variable(f) || konst.is_some(),
        IStar => f.essential_arity() == 1,
        Omega1 => f.essential_arity() <= 1,
        Lambda => lambda(),
        Lambda0 => lambda() && t0(f),
        Lambda1 => lambda() && t1(f),
        LambdaC => lambda() && t0(f) && t1(f),
        V => vee(),
        V0 => vee() && t0(f),
        V1 => vee() && t1(f),
        Vc => vee() && t0(f) && t1(f),
        L => linear(),
        L0 => linear() && t0(f),
        L1 => linear() && t1(f),
        Lc => linear() && t0(f) && t1(f),
        LS => linear() && f.dual() == *f,
        S => f.dual() == *f,
        Sc => f.dual() == *f && t0(f) && t1(f),
        SM => f.dual() == *f && f.is_monotone(),
        M => f.is_monotone(),
        M0 => f.is_monotone() && t0(f),
        M1 => f.is_monotone() && t1(f),
        Mc => f.is_monotone() && t0(f) && t1(f),
        T0 => t0(f),
        T1 => t1(f),
        Tc => t0(f) && t1(f),
        Omega => true,
        Sep {
            kind,
            context,
            level,
        } => in_context(f, context) && separating_rank(f, kind.value())?.at_least(level),
    })
}

/// Cover relations between classes, lower class first. The separating
/// families follow fixed rules in addition to these edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionTable {
    pub edges: Vec<(ClassId, ClassId)>,
}

fn sep(kind: SepKind, context: Context, level: Level) -> ClassId {
    ClassId::sep(kind, context, level)
}

impl InclusionTable {
    /// The covers of Post's lattice together with the four non-clone classes.
    pub fn post_lattice() -> InclusionTable {
        use ClassId::*;
        use Context::Mc as CMc;
        let inf = Level::Infinite;
        let r2 = Level::Rank(2);
        let edges = vec![
            (Empty, C0),
            (Empty, C1),
            (Empty, Ic),
            (C0, I0),
            (C0, C),
            (C1, I1),
            (C1, C),
            (C, I),
            (Ic, IStar),
            (Ic, I0),
            (Ic, I1),
            (Ic, LambdaC),
            (Ic, Vc),
            (Ic, Lc),
            (Ic, SM),
            (I0, I),
            (I0, Lambda0),
            (I0, V0),
            (I0, L0),
            (I1, I),
            (I1, V1),
            (I1, Lambda1),
            (I1, L1),
            (I, Omega1),
            (I, Lambda),
            (I, V),
            (IStar, Omega1),
            (IStar, LS),
            (Omega1, L),
            (LambdaC, Lambda0),
            (LambdaC, Lambda1),
            (Lambda0, Lambda),
            (Lambda1, Lambda),
            (LambdaC, sep(SepKind::U, CMc, inf)),
            (Lambda0, sep(SepKind::U, Context::M, inf)),
            (Lambda1, M1),
            (Lambda, M),
            (Vc, V0),
            (Vc, V1),
            (V0, V),
            (V1, V),
            (Vc, sep(SepKind::W, CMc, inf)),
            (V1, sep(SepKind::W, Context::M, inf)),
            (V0, M0),
            (V, M),
            (Lc, L0),
            (Lc, L1),
            (Lc, LS),
            (Lc, Sc),
            (L0, L),
            (L1, L),
            (LS, L),
            (LS, S),
            (L0, T0),
            (L1, T1),
            (L, Omega),
            (SM, Sc),
            (SM, sep(SepKind::U, CMc, r2)),
            (SM, sep(SepKind::W, CMc, r2)),
            (Sc, S),
            (Sc, Tc),
            (S, Omega),
            (sep(SepKind::U, CMc, r2), Mc),
            (sep(SepKind::U, Context::M, r2), M0),
            (sep(SepKind::U, Context::Tc, r2), Tc),
            (sep(SepKind::U, Context::All, r2), T0),
            (sep(SepKind::W, CMc, r2), Mc),
            (sep(SepKind::W, Context::M, r2), M1),
            (sep(SepKind::W, Context::Tc, r2), Tc),
            (sep(SepKind::W, Context::All, r2), T1),
            (Mc, M0),
            (Mc, M1),
            (Mc, Tc),
            (M0, M),
            (M1, M),
            (M0, T0),
            (M1, T1),
            (M, Omega),
            (Tc, T0),
            (Tc, T1),
            (T0, Omega),
            (T1, Omega),
        ];
        InclusionTable { edges }
    }

    /// Classes directly above `c`. `bound` is the largest rank an infinite
    /// separating class needs to step down to.
    fn upper_covers(&self, c: ClassId, bound: u32) -> Vec<ClassId> {
        let mut out: Vec<ClassId> = self
            .edges
            .iter()
            .filter(|(lo, _)| *lo == c)
            .map(|(_, hi)| *hi)
            .collect();
        if let ClassId::Sep {
            kind,
            context,
            level,
        } = c
        {
            match level {
                Level::Rank(m) if m > 2 => out.push(sep(kind, context, Level::Rank(m - 1))),
                Level::Rank(_) => {}
                Level::Infinite => out.push(sep(kind, context, Level::Rank(bound.max(2)))),
            }
            match context {
                Context::Mc => {
                    out.push(sep(kind, Context::Tc, level));
                    out.push(sep(kind, Context::M, level));
                }
                Context::Tc | Context::M => out.push(sep(kind, Context::All, level)),
                Context::All => {}
            }
        }
        out
    }

    /// Whether `c1 ⊆ c2` follows from the table.
    pub fn is_subclass(&self, c1: ClassId, c2: ClassId) -> bool {
        if c1 == c2 {
            return true;
        }
        let bound = c1.param().unwrap_or(2).max(c2.param().unwrap_or(2));
        let mut seen = BTreeSet::from([c1]);
        let mut stack = vec![c1];
        while let Some(c) = stack.pop() {
            for up in self.upper_covers(c, bound) {
                if up == c2 {
                    return true;
                }
                if seen.insert(up) {
                    stack.push(up);
                }
            }
        }
        false
    }
}

fn default_table() -> &'static InclusionTable {
    static TABLE: OnceLock<InclusionTable> = OnceLock::new();
    TABLE.get_or_init(InclusionTable::post_lattice)
}

/// Whether `c1 ⊆ c2`.
pub fn is_subclass(c1: ClassId, c2: ClassId) -> bool {
    default_table().is_subclass(c1, c2)
}

/// Every catalog class is an idempotent of the composition monoid: the
/// clones, the empty class and the three constant classes.
pub fn is_idempotent_class(c: ClassId) -> bool {
    let _ = c;
    true
}

/// One representative per equivalence class among all functions of arity
/// at most `max_arity`: the canonical key of each.
pub fn representatives(max_arity: usize) -> Result<Vec<BooleanFunction>, ClassError> {
    if !(1..=4).contains(&max_arity) {
        return Err(ClassError::CapOutOfRange(max_arity));
    }
    static CACHE: OnceLock<Vec<BooleanFunction>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let mut keys = BTreeSet::new();
        for n in 1..=4 {
            for f in BooleanFunction::all_of_arity(n) {
                keys.insert(canonical_key(&f).expect("arity at most 4"));
            }
        }
        let mut v: Vec<BooleanFunction> = keys.into_iter().collect();
        v.sort_by_key(|f| (f.essential_arity(), f.arity(), f.words().to_vec()));
        v
    });
    Ok(all
        .iter()
        .filter(|f| f.arity() <= max_arity)
        .cloned()
        .collect())
}

/// Functions of arity at most `arity_cap` in `c2` but not in `c1`, one per
/// equivalence class.
pub fn difference_sample(
    c1: ClassId,
    c2: ClassId,
    arity_cap: usize,
) -> Result<Vec<BooleanFunction>, ClassError> {
    let reps = representatives(arity_cap)?;
    let mut out = Vec::new();
    for f in reps {
        if member(&f, c2)? && !member(&f, c1)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Discrepancies between an inclusion table and the membership predicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Table claims `c1 ⊆ c2` but the function is in `c1` and not in `c2`.
    pub unsound: Vec<(ClassId, ClassId, String)>,
    /// Predicates agree with `c1 ⊆ c2` on every small function, yet the table
    /// does not derive it.
    pub incomplete: Vec<(ClassId, ClassId)>,
    pub classes: usize,
    pub functions: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.unsound.is_empty() && self.incomplete.is_empty()
    }
}

/// Checks `table` against the predicates on every function of arity at most
/// `max_arity`, for the catalog with ranks `2..=max_param`.
///
/// Soundness is checked for every derived inclusion. Completeness is checked
/// for ranks 2 and 3 and the limit, where functions of arity 4 already
/// separate all distinct classes.
pub fn validate_table(
    table: &InclusionTable,
    max_arity: usize,
    max_param: u32,
) -> Result<ValidationReport, ClassError> {
    let reps = representatives(max_arity)?;
    let classes = ClassId::catalog(max_param);
    let mut masks: BTreeMap<ClassId, Vec<bool>> = BTreeMap::new();
    for &c in &classes {
        let m = reps.iter().map(|f| member(f, c)).collect::<Result<Vec<_>, _>>()?;
        masks.insert(c, m);
    }
    let mut report = ValidationReport {
        classes: classes.len(),
        functions: reps.len(),
        ..Default::default()
    };
    let complete_scope = |c: &ClassId| c.param().map_or(true, |m| m <= 3);
    for &c1 in &classes {
        for &c2 in &classes {
            if c1 == c2 {
                continue;
            }
            let derived = table.is_subclass(c1, c2);
            let (m1, m2) = (&masks[&c1], &masks[&c2]);
            let violation = m1.iter().zip(m2).position(|(&a, &b)| a && !b);
            match (derived, violation) {
                (true, Some(i)) => report.unsound.push((c1, c2, crate::parse::format_hex(&reps[i]))),
                (false, None) if complete_scope(&c1) && complete_scope(&c2) => {
                    report.incomplete.push((c1, c2))
                }
                _ => {}
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::parse::parse_function;

    fn p(s: &str) -> BooleanFunction {
        parse_function(s).unwrap()
    }

    fn c(s: &str) -> ClassId {
        s.parse().unwrap()
    }

    #[test]
    fn names_round_trip() {
        for class in ClassId::catalog(5) {
            assert_eq!(class.to_string().parse::<ClassId>().unwrap(), class);
        }
        assert_eq!(c("TcW2"), ClassId::sep(SepKind::W, Context::Tc, Level::Rank(2)));
        assert_eq!(c("McUInf"), ClassId::sep(SepKind::U, Context::Mc, Level::Infinite));
        assert_eq!(c("MU2"), ClassId::sep(SepKind::U, Context::M, Level::Rank(2)));
        assert_eq!(c("M1"), ClassId::M1);
        assert!("U1".parse::<ClassId>().is_err());
        assert!("Foo".parse::<ClassId>().is_err());
    }

    #[test]
    fn basic_memberships() {
        assert!(member(&p("x1 & x2"), ClassId::M).unwrap());
        assert!(!member(&p("x1 & x2"), ClassId::S).unwrap());
        assert!(member(&make_f(4).unwrap(), ClassId::L).unwrap());
        assert!(!member(&make_f(5).unwrap(), ClassId::L).unwrap());
        assert!(member(&p("x1 & x3@4"), ClassId::LambdaC).unwrap());
        assert!(member(&p("x2 | x3"), ClassId::Vc).unwrap());
        assert!(!member(&p("x2 | x3"), ClassId::Lambda).unwrap());
        assert!(member(&p("!x2@3"), ClassId::IStar).unwrap());
        assert!(!member(&p("!x2@3"), ClassId::I).unwrap());
        assert!(member(&p("0@2"), ClassId::C0).unwrap());
        assert!(member(&p("0@2"), ClassId::Lambda0).unwrap());
        assert!(member(&p("1"), ClassId::Lambda1).unwrap());
    }

    #[test]
    fn ranks() {
        assert_eq!(separating_rank(&p("x1 & x2"), true).unwrap(), Rank::Infinite);
        assert_eq!(separating_rank(&make_h(4).unwrap(), false).unwrap(), Rank::Finite(3));
        assert_eq!(separating_rank(&make_u(4).unwrap(), true).unwrap(), Rank::Infinite);
        assert_eq!(separating_rank(&make_tu(4).unwrap(), true).unwrap(), Rank::Infinite);
        assert_eq!(separating_rank(&p("0@3"), true).unwrap(), Rank::Infinite);
        assert_eq!(separating_rank(&p("1@3"), true).unwrap(), Rank::BelowTwo);
        assert_eq!(separating_rank(&p("x1 ^ x2"), true).unwrap(), Rank::BelowTwo);
        assert!(separating_rank(&make_h(17).unwrap(), true).is_err());
    }

    /// Smallest non-separating subset by brute force over subsets.
    fn naive_rank(f: &BooleanFunction, a: bool) -> Rank {
        let n = f.arity();
        let pts: Vec<u32> = (0..f.table_len() as u32).filter(|&x| f.value(x) == a).collect();
        let shared = |set: &[u32]| {
            (0..n).any(|i| set.iter().all(|&x| ((x >> i) & 1 == 1) == a))
        };
        if shared(&pts) {
            return Rank::Infinite;
        }
        for size in 1..=pts.len() {
            let mut found = false;
            crate::monoid::for_each_map(size, pts.len(), |idx| {
                if !found && idx.windows(2).all(|w| w[0] < w[1]) {
                    let set: Vec<u32> = idx.iter().map(|&i| pts[i]).collect();
                    found = !shared(&set);
                }
            });
            if found {
                return if size <= 2 { Rank::BelowTwo } else { Rank::Finite(size as u32 - 1) };
            }
        }
        unreachable!()
    }

    #[test]
    fn rank_matches_brute_force() {
        for n in 1..=3 {
            for f in BooleanFunction::all_of_arity(n) {
                for a in [false, true] {
                    assert_eq!(separating_rank(&f, a).unwrap(), naive_rank(&f, a), "{f} a={a}");
                }
            }
        }
        let thr = p("x1&x2&x3 | x1&x2&x4 | x1&x3&x4 | x2&x3&x4");
        assert_eq!(separating_rank(&thr, true).unwrap(), Rank::Finite(3));
        assert_eq!(naive_rank(&thr, true), Rank::Finite(3));
    }

    #[test]
    fn inclusion_examples() {
        assert!(is_subclass(ClassId::Sc, ClassId::S));
        assert!(is_subclass(ClassId::u(3), ClassId::u(2)));
        assert!(!is_subclass(ClassId::u(2), ClassId::u(3)));
        assert!(!is_subclass(ClassId::M, ClassId::L));
        assert!(is_subclass(c("McUInf"), c("U7")));
        assert!(!is_subclass(c("U7"), c("UInf")));
        assert!(is_subclass(ClassId::LambdaC, ClassId::M0));
        assert!(is_subclass(ClassId::SM, c("TcW2")));
        assert!(is_subclass(ClassId::Empty, ClassId::Omega));
        assert!(!is_subclass(ClassId::Omega1, ClassId::M));
    }

    #[test]
    fn table_validates() {
        let report = validate_table(&InclusionTable::post_lattice(), 4, 4).unwrap();
        assert!(report.unsound.is_empty(), "{:?}", report.unsound);
        assert!(report.incomplete.is_empty(), "{:?}", report.incomplete);
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut bad = InclusionTable::post_lattice();
        bad.edges.push((ClassId::M, ClassId::L));
        let report = validate_table(&bad, 3, 3).unwrap();
        assert!(!report.unsound.is_empty());
        let mut missing = InclusionTable::post_lattice();
        missing.edges.retain(|e| *e != (ClassId::Sc, ClassId::S));
        let report = validate_table(&missing, 3, 3).unwrap();
        assert!(report.incomplete.contains(&(ClassId::Sc, ClassId::S)));
    }

    #[test]
    fn duality_transport() {
        for n in 1..=3 {
            for f in BooleanFunction::all_of_arity(n) {
                let d = f.dual();
                for class in ClassId::catalog(3) {
                    assert_eq!(
                        member(&f, class).unwrap(),
                        member(&d, class.dual()).unwrap(),
                        "{f} {class}"
                    );
                }
            }
        }
    }

    #[test]
    fn idempotent_catalog() {
        assert!(ClassId::catalog(4).into_iter().all(is_idempotent_class));
    }

    #[test]
    fn difference_samples() {
        let d = difference_sample(ClassId::Mc, ClassId::M, 1).unwrap();
        assert_eq!(d, vec![p("0"), p("1")]);
        let d = difference_sample(ClassId::Empty, ClassId::Ic, 2).unwrap();
        assert_eq!(d, vec![p("x1")]);
        assert!(difference_sample(ClassId::Lambda, ClassId::Lambda, 3).unwrap().is_empty());
        assert!(difference_sample(ClassId::Empty, ClassId::Omega, 5).is_err());
    }
}
