//! Associativity of n-ary functions.
//!
//! An `n`-ary `f` is associative when all `n` ways of nesting `f` inside
//! itself agree as `(2n-1)`-ary functions. It suffices to compare the
//! nestings with distinct variables `x_1, ..., x_{2n-1}`.

use serde::Serialize;
use thiserror::Error;

use crate::families::{Family, FamilyError, FamilySpec};
use crate::function::{BooleanFunction, FunctionError, MAX_ARITY};
use crate::minor::{minor_leq, MinorError};

/// Largest arity for which the nestings fit in a truth table.
pub const ASSOC_MAX_ARITY: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssocError {
    #[error("arity {0} is too large for an associativity check (max 10)")]
    TooWide(usize),
    #[error("result arity {0} exceeds 20")]
    ArityOverflow(usize),
    #[error("needs essential arity at least 2, got {0}")]
    TooNarrow(usize),
    #[error("no stated non-associativity instance for {0}")]
    NoInstance(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Minor(#[from] MinorError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// A point where nesting at position `i` and at position `j` disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonAssocWitness {
    /// 1-based nesting positions, `i < j`.
    pub i: usize,
    pub j: usize,
    /// The point of arity `2n - 1`, `x1` in bit 0.
    pub point: u32,
    pub frame: usize,
    /// Values of the nesting at `i` and at `j`.
    pub left: bool,
    pub right: bool,
}

impl NonAssocWitness {
    /// 1-based positions of the coordinates equal to 1.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.frame)
            .filter(|t| (self.point >> t) & 1 == 1)
            .map(|t| t + 1)
            .collect()
    }

    /// Recomputes both nestings through [`BooleanFunction::compose`].
    pub fn replay(&self, f: &BooleanFunction) -> Result<(bool, bool), AssocError> {
        let left = nesting_by_compose(f, self.i)?;
        let right = nesting_by_compose(f, self.j)?;
        Ok((left.value(self.point), right.value(self.point)))
    }

    pub fn verify(&self, f: &BooleanFunction) -> bool {
        matches!(self.replay(f), Ok((l, r)) if l == self.left && r == self.right && l != r)
    }
}

/// `f(x_1, ..., x_{i-1}, f(x_i, ..., x_{i+n-1}), x_{i+n}, ..., x_{2n-1})`.
pub fn nesting(f: &BooleanFunction, i: usize) -> Result<BooleanFunction, AssocError> {
    let n = f.arity();
    let frame = 2 * n - 1;
    if frame > MAX_ARITY {
        return Err(AssocError::ArityOverflow(frame));
    }
    assert!((1..=n).contains(&i), "nesting position out of range");
    Ok(nest_at(f, f, i - 1))
}

/// Substitutes `inner` at 0-based position `pos` of `outer`; the result has
/// arity `outer + inner - 1`.
fn nest_at(outer: &BooleanFunction, inner: &BooleanFunction, pos: usize) -> BooleanFunction {
    let k = inner.arity();
    let arity = outer.arity() + k - 1;
    let low = (1u32 << pos) - 1;
    let inner_mask = ((1u64 << k) - 1) as u32;
    BooleanFunction::from_fn(arity, |p| {
        let v = inner.value((p >> pos) & inner_mask) as u32;
        let q = (p & low) | (v << pos) | ((p >> (pos + k)) << (pos + 1));
        outer.value(q)
    })
    .expect("arity checked by the caller")
}

fn nesting_by_compose(f: &BooleanFunction, i: usize) -> Result<BooleanFunction, AssocError> {
    let n = f.arity();
    let frame = 2 * n - 1;
    if frame > MAX_ARITY {
        return Err(AssocError::ArityOverflow(frame));
    }
    let inner_map: Vec<usize> = (i..i + n).collect();
    let inner = f.substitute(&inner_map, frame)?;
    let mut args = Vec::with_capacity(n);
    for k in 1..=n {
        args.push(match k.cmp(&i) {
            std::cmp::Ordering::Less => BooleanFunction::projection(frame, k)?,
            std::cmp::Ordering::Equal => inner.clone(),
            std::cmp::Ordering::Greater => BooleanFunction::projection(frame, k + n - 1)?,
        });
    }
    Ok(f.compose(&args)?)
}

fn first_difference(a: &BooleanFunction, b: &BooleanFunction) -> Option<u32> {
    a.words()
        .iter()
        .zip(b.words())
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(w, (x, y))| (w * 64) as u32 + (x ^ y).trailing_zeros())
}

/// `None` when `f` is associative, else the first witness in `(i, j, point)`
/// order.
pub fn is_associative(f: &BooleanFunction) -> Result<Option<NonAssocWitness>, AssocError> {
    let n = f.arity();
    if n > ASSOC_MAX_ARITY {
        return Err(AssocError::TooWide(n));
    }
    if n == 1 {
        return Ok(None);
    }
    let nests: Vec<BooleanFunction> = (1..=n).map(|i| nest_at(f, f, i - 1)).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            if let Some(point) = first_difference(&nests[i - 1], &nests[j - 1]) {
                return Ok(Some(NonAssocWitness {
                    i,
                    j,
                    point,
                    frame: 2 * n - 1,
                    left: nests[i - 1].value(point),
                    right: nests[j - 1].value(point),
                }));
            }
        }
    }
    Ok(None)
}

/// Whether `f` is a minor of some associative function. Adding or removing
/// dummy variables does not matter, so this is associativity of the core.
pub fn is_quasi_associative(f: &BooleanFunction) -> Result<bool, AssocError> {
    let (core, _) = f.essential_core();
    Ok(is_associative(&core)?.is_none())
}

/// `f^k`: `f^0` is the unary diagonal, `f^1 = f`, and `f^k` substitutes `f`
/// for the last argument of `f^{k-1}`.
pub fn iterate(f: &BooleanFunction, k: usize) -> Result<BooleanFunction, AssocError> {
    let n = f.arity();
    if k == 0 {
        let top = (f.table_len() - 1) as u32;
        return Ok(BooleanFunction::from_fn(1, |x| f.value(if x == 1 { top } else { 0 }))?);
    }
    let arity = k * (n - 1) + 1;
    if arity > MAX_ARITY {
        return Err(AssocError::ArityOverflow(arity));
    }
    let mut acc = f.clone();
    for _ in 1..k {
        let last = acc.arity() - 1;
        acc = nest_at(&acc, f, last);
    }
    Ok(acc)
}

/// `f' = f ⊕ x_{n+1} ⊕ x_{n+2}` with both checks on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub function: BooleanFunction,
    /// `f'` is not a minor of `f`.
    pub not_below: bool,
    /// Identifying the two new variables gives back `f` (with one dummy).
    pub identifies_back: bool,
}

/// The strictly larger function used to show that no class below `Ω` is
/// maximal.
pub fn strict_extension_witness(f: &BooleanFunction) -> Result<ExtensionWitness, AssocError> {
    let e = f.essential_arity();
    if e < 2 {
        return Err(AssocError::TooNarrow(e));
    }
    let n = f.arity();
    if n + 2 > MAX_ARITY {
        return Err(AssocError::ArityOverflow(n + 2));
    }
    let wide = f.widen(n + 2)?;
    let x = BooleanFunction::projection(n + 2, n + 1)?;
    let y = BooleanFunction::projection(n + 2, n + 2)?;
    let function = wide.xor(&x).xor(&y);
    let not_below = minor_leq(&function, f)?.is_none();
    let mut map: Vec<usize> = (1..=n + 1).collect();
    map.push(n + 1);
    let identifies_back = function.substitute(&map, n + 1)? == f.widen(n + 1)?;
    Ok(ExtensionWitness {
        function,
        not_below,
        identifies_back,
    })
}

/// The self-composite `f_N(x_1, ..., x_{N-1}, f_N(x_N, ..., x_{2N-1}))` of the
/// essential core, with its essential arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthWitness {
    pub function: BooleanFunction,
    pub essential_arity: usize,
    pub expected: usize,
}

impl GrowthWitness {
    pub fn holds(&self) -> bool {
        self.essential_arity == self.expected
    }
}

pub fn arity_growth_witness(f: &BooleanFunction) -> Result<GrowthWitness, AssocError> {
    let (core, _) = f.essential_core();
    let big_n = f.essential_arity();
    if big_n < 2 {
        return Err(AssocError::TooNarrow(big_n));
    }
    let frame = 2 * big_n - 1;
    if frame > MAX_ARITY {
        return Err(AssocError::ArityOverflow(frame));
    }
    let function = nest_at(&core, &core, big_n - 1);
    Ok(GrowthWitness {
        essential_arity: function.essential_arity(),
        function,
        expected: frame,
    })
}

/// An explicit non-associativity instance for a family member: positions,
/// point and the two values claimed for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub spec: String,
    pub i: usize,
    pub j: usize,
    pub frame: usize,
    pub point: u32,
    pub claimed: (bool, bool),
    pub computed: (bool, bool),
}

impl FamilyInstance {
    pub fn holds(&self) -> bool {
        self.claimed == self.computed && self.computed.0 != self.computed.1
    }

    pub fn witness(&self) -> Option<NonAssocWitness> {
        (self.computed.0 != self.computed.1).then(|| NonAssocWitness {
            i: self.i,
            j: self.j,
            point: self.point,
            frame: self.frame,
            left: self.computed.0,
            right: self.computed.1,
        })
    }
}

fn point_with_ones(ones: impl IntoIterator<Item = usize>) -> u32 {
    ones.into_iter().fold(0, |p, t| p | 1 << (t - 1))
}

/// The known non-associativity instance for `spec`, evaluated. `mu` has none.
pub fn family_instance(spec: &FamilySpec) -> Result<FamilyInstance, AssocError> {
    let f = spec.build()?;
    let a = f.arity();
    let frame = 2 * a - 1;
    if frame > MAX_ARITY {
        return Err(AssocError::ArityOverflow(frame));
    }
    let n = spec.n;
    let all = 1..=frame;
    let (i, j, point, claimed) = match spec.family {
        Family::F => {
            let zeros = |t: usize| t <= n - 1 || t == n + 1;
            (2, 3, point_with_ones(all.filter(|&t| !zeros(t))), (true, false))
        }
        Family::G => (1, 3, point_with_ones(all.filter(|&t| t == 1 || t > n)), (true, false)),
        Family::U => (1, 2, point_with_ones(all.filter(|&t| t != 2)), (false, true)),
        Family::Tu => (
            1,
            2,
            point_with_ones(all.filter(|&t| !(2..=n - 1).contains(&t))),
            (true, false),
        ),
        Family::H => (1, 2, point_with_ones(1..=n), (false, true)),
        Family::BigG => (2, 3, point_with_ones(1..=2), (false, true)),
        Family::T => (
            1,
            2,
            point_with_ones(all.filter(|&t| t <= n + 2 || t >= 2 * n + 2)),
            (false, true),
        ),
        Family::S => (1, 2, point_with_ones(1..=n + 2), (false, true)),
        Family::Mu => return Err(AssocError::NoInstance(spec.to_string())),
    };
    let computed = (nest_at(&f, &f, i - 1).value(point), nest_at(&f, &f, j - 1).value(point));
    Ok(FamilyInstance {
        spec: spec.to_string(),
        i,
        j,
        frame,
        point,
        claimed,
        computed,
    })
}
