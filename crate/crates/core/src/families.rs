//! Generators for the antichain families and the quasi-monadic lattice.
//!
//! Family members are built straight from their defining weight conditions.
//! Where a family has an extra guard argument (`u_n`, `tu_n`) the guard sits
//! at position 1 and the remaining arguments shift up by one.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classes::{member, ClassError, ClassId, Context, Level, SepKind};
use crate::function::{BooleanFunction, MAX_ARITY};
use crate::monoid::{CappedClass, MonoidError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{spec}: parameters outside the accepted range ({range})")]
    OutOfRange { spec: String, range: &'static str },
    #[error("unknown family spec `{0}`")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `f_n`: 1 exactly on points of weight 1 or n-1.
    F,
    /// `g_n`: 0 exactly when the number of zeros is 1 or n.
    G,
    /// `u_n = x_0 & f_n`.
    U,
    /// `tu_n = x_0 & g_n`.
    Tu,
    /// `H_n`: 1 exactly on points of weight at least 2.
    H,
    /// `G^n_m = H_n(x_1, ..., x_{n-1}, H_m(x_n, ..., x_{m+n-1}))`.
    BigG,
    /// Odd threshold (majority) function.
    Mu,
    /// `T_n`: selects `H_n`, `mu_n` or the dual of `H_n` by its last two arguments.
    T,
    /// `s_n`: `T_n` with both selector arguments negated.
    S,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::F => "f",
            Family::G => "g",
            Family::U => "u",
            Family::Tu => "tu",
            Family::H => "H",
            Family::BigG => "G",
            Family::Mu => "mu",
            Family::T => "T",
            Family::S => "s",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Family> {
        Some(match s {
            "f" => Family::F,
            "g" => Family::G,
            "u" => Family::U,
            "tu" => Family::Tu,
            "H" => Family::H,
            "G" => Family::BigG,
            "mu" => Family::Mu,
            "T" => Family::T,
            "s" => Family::S,
            _ => return None,
        })
    }
}

/// A family name with its parameters, written `f@5` or `G@3,5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    /// Second parameter; only `G` uses it.
    pub m: Option<usize>,
}

/// A generated function together with whether its parameters lie in the
/// range for which the family is an antichain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub function: BooleanFunction,
    pub in_antichain_range: bool,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        FamilySpec { family, n, m: None }
    }

    pub fn big_g(n: usize, m: usize) -> Self {
        FamilySpec {
            family: Family::BigG,
            n,
            m: Some(m),
        }
    }

    /// True when `text` starts like a family spec (`name@`).
    pub fn looks_like(text: &str) -> bool {
        text.split_once('@')
            .map(|(name, _)| Family::from_symbol(name.trim()).is_some())
            .unwrap_or(false)
    }

    pub fn arity(&self) -> usize {
        match self.family {
            Family::F | Family::G | Family::H | Family::Mu => self.n,
            Family::U | Family::Tu => self.n + 1,
            Family::BigG => self.m.unwrap_or(0) + self.n - 1,
            Family::T | Family::S => self.n + 2,
        }
    }

    fn range_text(&self) -> &'static str {
        match self.family {
            Family::F | Family::G | Family::U | Family::Tu => "n >= 4",
            Family::H => "n >= 2",
            Family::BigG => "m >= n >= 2",
            Family::Mu => "odd n >= 3",
            Family::T | Family::S => "odd n >= 7",
        }
    }

    /// Whether the parameters lie in the range where the family is proved to
    /// be an antichain.
    pub fn in_antichain_range(&self) -> bool {
        let n = self.n;
        match self.family {
            Family::F | Family::G | Family::U | Family::Tu => n >= 4,
            Family::H => n >= 2,
            Family::BigG => matches!(self.m, Some(m) if m >= n && n >= 2),
            Family::Mu => n >= 3 && n % 2 == 1,
            Family::T | Family::S => n >= 7 && n % 2 == 1,
        }
    }

    /// Whether the definition still makes sense, possibly outside the antichain range.
    fn structurally_valid(&self) -> bool {
        let n = self.n;
        let shape = match self.family {
            Family::F | Family::G | Family::U | Family::Tu | Family::H => n >= 2,
            Family::BigG => matches!(self.m, Some(m) if m >= 2 && n >= 2),
            Family::Mu => n >= 1 && n % 2 == 1,
            Family::T | Family::S => n >= 3 && n % 2 == 1,
        };
        let params_ok = (self.family == Family::BigG) == self.m.is_some();
        shape && params_ok && self.arity() <= MAX_ARITY
    }

    /// Builds the function, rejecting parameters outside the antichain range.
    pub fn build(&self) -> Result<BooleanFunction, FamilyError> {
        if !self.in_antichain_range() || self.arity() > MAX_ARITY {
            return Err(FamilyError::OutOfRange {
                spec: self.to_string(),
                range: self.range_text(),
            });
        }
        Ok(self.generate())
    }

    /// Builds the function for any structurally meaningful parameters and
    /// flags results outside the antichain range.
    pub fn build_extended(&self) -> Result<Generated, FamilyError> {
        if !self.structurally_valid() {
            return Err(FamilyError::OutOfRange {
                spec: self.to_string(),
                range: self.range_text(),
            });
        }
        Ok(Generated {
            function: self.generate(),
            in_antichain_range: self.in_antichain_range(),
        })
    }

    fn generate(&self) -> BooleanFunction {
        let n = self.n as u32;
        let build = |arity: usize, f: &dyn Fn(u32) -> bool| {
            BooleanFunction::from_fn(arity, f).expect("arity checked by caller")
        };
        match self.family {
            Family::F => build(self.n, &|a| f_value(n, a)),
            Family::G => build(self.n, &|a| g_value(n, a)),
            Family::U => build(self.n + 1, &|a| a & 1 == 1 && f_value(n, a >> 1)),
            Family::Tu => build(self.n + 1, &|a| a & 1 == 1 && g_value(n, a >> 1)),
            Family::H => build(self.n, &|a| a.count_ones() >= 2),
            Family::BigG => {
                let outer = n - 1;
                build(self.arity(), &|a| {
                    let head = (a & ((1 << outer) - 1)).count_ones();
                    let inner = (a >> outer).count_ones() >= 2;
                    head + inner as u32 >= 2
                })
            }
            Family::Mu => build(self.n, &|a| a.count_ones() >= (n + 1) / 2),
            Family::T => build(self.n + 2, &|a| t_value(n, a)),
            Family::S => build(self.n + 2, &|a| t_value(n, a ^ (0b11 << n))),
        }
    }
}

fn f_value(n: u32, a: u32) -> bool {
    let w = a.count_ones();
    w == 1 || w == n - 1
}

fn g_value(n: u32, a: u32) -> bool {
    let w = a.count_ones();
    !(w == 0 || w == n - 1)
}

fn t_value(n: u32, a: u32) -> bool {
    let w = (a & ((1 << n) - 1)).count_ones();
    match (a >> n) & 0b11 {
        0b11 => w >= 2,
        0b00 => w + 1 >= n,
        _ => w >= (n + 1) / 2,
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}@{},{}", self.family.symbol(), self.n, m),
            None => write!(f, "{}@{}", self.family.symbol(), self.n),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let unknown = || FamilyError::Unknown(text.to_string());
        let (name, params) = text.trim().split_once('@').ok_or_else(unknown)?;
        let family = Family::from_symbol(name.trim()).ok_or_else(unknown)?;
        let nums: Vec<usize> = params
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| unknown())?;
        match (family, nums.as_slice()) {
            (Family::BigG, [n, m]) => Ok(FamilySpec::big_g(*n, *m)),
            (Family::BigG, _) => Err(unknown()),
            (_, [n]) => Ok(FamilySpec::new(family, *n)),
            _ => Err(unknown()),
        }
    }
}

fn build_strict(spec: FamilySpec) -> Result<BooleanFunction, FamilyError> {
    spec.build()
}

pub fn make_f(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::F, n))
}

pub fn make_g(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::G, n))
}

pub fn make_u(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::U, n))
}

pub fn make_tu(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::Tu, n))
}

pub fn make_h(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::H, n))
}

/// `G^n_m`, of arity `m + n - 1`.
pub fn make_big_g(n: usize, m: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::big_g(n, m))
}

pub fn make_mu(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::Mu, n))
}

pub fn make_t(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::T, n))
}

pub fn make_s(n: usize) -> Result<BooleanFunction, FamilyError> {
    build_strict(FamilySpec::new(Family::S, n))
}

/// One of the sixteen classes `S Ic` with `S` a set of unary functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiMonadicClass {
    pub name: &'static str,
    /// Which of `x1`, `!x1`, `0`, `1` generate the class, in that order.
    pub generators: [bool; 4],
    pub class: CappedClass,
}

const QM_NAMES: [(&str, [bool; 4]); 16] = [
    ("Empty", [false, false, false, false]),
    ("C0", [false, false, true, false]),
    ("C1", [false, false, false, true]),
    ("C", [false, false, true, true]),
    ("Ic", [true, false, false, false]),
    ("I0", [true, false, true, false]),
    ("I1", [true, false, false, true]),
    ("I", [true, false, true, true]),
    ("{!x1}Ic", [false, true, false, false]),
    ("{0,!x1}Ic", [false, true, true, false]),
    ("{1,!x1}Ic", [false, true, false, true]),
    ("{0,1,!x1}Ic", [false, true, true, true]),
    ("I*", [true, true, false, false]),
    ("{0,x1,!x1}Ic", [true, true, true, false]),
    ("{1,x1,!x1}Ic", [true, true, false, true]),
    ("Omega(1)", [true, true, true, true]),
];

/// The unary generators `x1`, `!x1`, `0`, `1`.
pub fn unary_functions() -> [BooleanFunction; 4] {
    let x = BooleanFunction::projection(1, 1).expect("unary projection");
    [
        x.clone(),
        x.complement(),
        BooleanFunction::constant(1, false).expect("unary constant"),
        BooleanFunction::constant(1, true).expect("unary constant"),
    ]
}

/// The sixteen equational classes made of quasi-monadic functions, each
/// materialized up to `cap`.
pub fn quasi_monadic_lattice(cap: usize) -> Result<Vec<QuasiMonadicClass>, MonoidError> {
    let unary = unary_functions();
    QM_NAMES
        .iter()
        .map(|&(name, generators)| {
            let gens: Vec<BooleanFunction> = unary
                .iter()
                .zip(generators)
                .filter(|(_, on)| *on)
                .map(|(g, _)| g.clone())
                .collect();
            Ok(QuasiMonadicClass {
                name,
                generators,
                class: CappedClass::closure(&gens, cap)?,
            })
        })
        .collect()
}

/// A stated placement of a family member: inside `inside`, outside each
/// class of `outside`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Placement {
    pub label: &'static str,
    pub spec: String,
    /// The member is dualized before testing.
    pub dual: bool,
    pub inside: ClassId,
    pub outside: Vec<ClassId>,
}

/// Outcome of checking one [`Placement`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PlacementCheck {
    pub placement: Placement,
    pub inside_holds: bool,
    /// Classes from `outside` that contain the member after all.
    pub unexpected: Vec<ClassId>,
}

impl PlacementCheck {
    pub fn holds(&self) -> bool {
        self.inside_holds && self.unexpected.is_empty()
    }
}

impl Placement {
    pub fn function(&self) -> Result<BooleanFunction, crate::parse::ParseError> {
        let f = crate::parse::parse_function(&self.spec)?;
        Ok(if self.dual { f.dual() } else { f })
    }

    pub fn check(&self) -> Result<PlacementCheck, ClassError> {
        let f = self
            .function()
            .expect("placement specs are generated in range");
        let inside_holds = member(&f, self.inside)?;
        let mut unexpected = Vec::new();
        for &c in &self.outside {
            if member(&f, c)? {
                unexpected.push(c);
            }
        }
        Ok(PlacementCheck {
            placement: self.clone(),
            inside_holds,
            unexpected,
        })
    }
}

/// The class placements used to locate each antichain family, for members
/// of arity at most `max_arity` (`T` and `s` at `n` in 7 and 9 regardless).
pub fn placement_claims(max_arity: usize) -> Vec<Placement> {
    use ClassId::*;
    let tc = |k: SepKind| ClassId::sep(k, Context::Tc, Level::Rank(2));
    let mc = |k: SepKind, l: Level| ClassId::sep(k, Context::Mc, l);
    let m2 = |k: SepKind| ClassId::sep(k, Context::M, Level::Rank(2));
    let uinf = ClassId::sep(SepKind::U, Context::All, Level::Infinite);
    let tcuinf = ClassId::sep(SepKind::U, Context::Tc, Level::Infinite);
    let mut out = Vec::new();
    let mut push = |label, spec: String, dual, inside, outside: Vec<ClassId>| {
        out.push(Placement {
            label,
            spec,
            dual,
            inside,
            outside,
        })
    };
    for n in 4..=max_arity {
        push("f", format!("f@{n}"), false, T0, vec![T1, Tc, ClassId::u(2), S, M]);
        push("g", format!("g@{n}"), false, Tc, vec![Mc, Sc, tc(SepKind::U), tc(SepKind::W)]);
        push("H", format!("H@{n}"), false, mc(SepKind::W, Level::Rank(2)), vec![ClassId::u(2), Lambda, V]);
        push("H-dual", format!("H@{n}"), true, mc(SepKind::U, Level::Rank(2)), vec![ClassId::w(2), Lambda, V]);
    }
    for n in 4..max_arity {
        push("u", format!("u@{n}"), false, uinf, vec![tc(SepKind::U)]);
        push("tu", format!("tu@{n}"), false, tcuinf, vec![m2(SepKind::U)]);
    }
    for n in 2..max_arity {
        let n32 = n as u32;
        push(
            "H-rank",
            format!("H@{}", n + 1),
            false,
            mc(SepKind::W, Level::Rank(n32)),
            vec![ClassId::w(n32 + 1)],
        );
        for m in n + 1..=max_arity {
            if m + n <= max_arity {
                push(
                    "G-rank",
                    format!("G@{},{}", n + 1, m),
                    false,
                    mc(SepKind::W, Level::Rank(n32)),
                    vec![ClassId::w(n32 + 1)],
                );
            }
        }
    }
    for m in 2..max_arity {
        push("G-limit", format!("G@2,{m}"), false, mc(SepKind::W, Level::Infinite), vec![V]);
    }
    for n in [7, 9] {
        push("T", format!("T@{n}"), false, SM, vec![L]);
        push("s", format!("s@{n}"), false, Sc, vec![SM, L]);
    }
    out
}
