//! Text formats for Boolean functions.
//!
//! * `tt:<n>:0x<hex>`: the truth table as a hexadecimal number whose bit `i`
//!   is the value at point index `i`. The digit count is exactly
//!   `ceil(2^n / 4)`.
//! * formulas over `x1..x20` with `!`, `&`, `^`, `|` (tightest first),
//!   parentheses, constants `0`/`1` and an optional `@n` arity suffix.
//! * family specs such as `f@5` or `G@3,5`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::families::{FamilyError, FamilySpec};
use crate::function::{BooleanFunction, FunctionError, MAX_ARITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arity {0} is outside 1..=20")]
    Arity(usize),
    #[error("hex table for arity {arity} needs {expected} digits, got {found}")]
    HexLength {
        arity: usize,
        expected: usize,
        found: usize,
    },
    #[error("hex table sets bits beyond 2^{0}")]
    HexOverflow(usize),
    #[error("arity suffix @{suffix} is smaller than the largest variable x{max}")]
    SuffixTooSmall { suffix: usize, max: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// Output style for [`format_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Hex,
    Anf,
    Dnf,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept family parameters outside the antichain range.
    pub allow_extended: bool,
}

/// Parses a truth-table literal, a formula or a family spec.
pub fn parse_function(text: &str) -> Result<BooleanFunction, ParseError> {
    parse_function_with(text, ParseOptions::default())
}

pub fn parse_function_with(text: &str, opts: ParseOptions) -> Result<BooleanFunction, ParseError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("tt:") {
        return parse_hex(rest);
    }
    if FamilySpec::looks_like(text) {
        let spec: FamilySpec = text.parse()?;
        return Ok(if opts.allow_extended {
            spec.build_extended()?.function
        } else {
            spec.build()?
        });
    }
    parse_formula(text)
}

fn parse_hex(rest: &str) -> Result<BooleanFunction, ParseError> {
    let syntax = |msg: &str| ParseError::Syntax {
        pos: 0,
        msg: msg.to_string(),
    };
    let (n, hex) = rest
        .split_once(':')
        .ok_or_else(|| syntax("expected tt:<n>:<hex>"))?;
    let n: usize = n.trim().parse().map_err(|_| syntax("bad arity in tt literal"))?;
    if !(1..=MAX_ARITY).contains(&n) {
        return Err(ParseError::Arity(n));
    }
    let hex = hex.trim();
    let hex = hex
        .strip_prefix("0x")
        .or_else(|| hex.strip_prefix("0X"))
        .unwrap_or(hex);
    let expected = ((1usize << n) + 3) / 4;
    if hex.len() != expected {
        return Err(ParseError::HexLength {
            arity: n,
            expected,
            found: hex.len(),
        });
    }
    let mut words = vec![0u64; if n <= 6 { 1 } else { 1 << (n - 6) }];
    for (k, c) in hex.chars().rev().enumerate() {
        let d = c.to_digit(16).ok_or_else(|| syntax("non-hex digit in tt literal"))? as u64;
        let bit = 4 * k;
        words[bit / 64] |= d << (bit % 64);
    }
    BooleanFunction::from_words(n, words).map_err(|_| ParseError::HexOverflow(n))
}

/// Canonical `tt:` literal.
pub fn format_hex(f: &BooleanFunction) -> String {
    let n = f.arity();
    let digits = ((1usize << n) + 3) / 4;
    let mut s = format!("tt:{n}:0x");
    for k in (0..digits).rev() {
        let bit = 4 * k;
        let d = (f.words()[bit / 64] >> (bit % 64)) & 0xF;
        write!(s, "{d:X}").expect("writing to a String");
    }
    s
}

pub fn format_function(f: &BooleanFunction, style: Style) -> String {
    match style {
        Style::Hex => format_hex(f),
        Style::Anf => f.zhegalkin().to_string(),
        Style::Dnf => format_dnf(f),
    }
}

/// Disjunction of the minimal true points for monotone functions, canonical
/// minterms otherwise. Re-parses to the same function.
pub fn format_dnf(f: &BooleanFunction) -> String {
    let n = f.arity();
    let with_suffix = |body: String, max_var: usize| {
        if max_var < n {
            format!("{body}@{n}")
        } else {
            body
        }
    };
    if let Some(c) = f.constant_value() {
        let body = if c { "1" } else { "0" }.to_string();
        return if n == 1 { body } else { with_suffix(body, 0) };
    }
    let mut max_var = 0;
    let terms: Vec<String> = if f.is_monotone() {
        let mins = minimal_true_points(f);
        mins.iter()
            .map(|&p| {
                let vars: Vec<String> = (0..n)
                    .filter(|v| (p >> v) & 1 == 1)
                    .map(|v| {
                        max_var = max_var.max(v + 1);
                        format!("x{}", v + 1)
                    })
                    .collect();
                vars.join("&")
            })
            .collect()
    } else {
        max_var = n;
        f.ones()
            .map(|p| {
                (0..n)
                    .map(|v| {
                        if (p >> v) & 1 == 1 {
                            format!("x{}", v + 1)
                        } else {
                            format!("!x{}", v + 1)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect()
    };
    with_suffix(terms.join(" | "), max_var)
}

/// True points with no true point strictly below them, ordered by weight
/// then index.
pub(crate) fn minimal_true_points(f: &BooleanFunction) -> Vec<u32> {
    let n = f.arity();
    let mut mins: Vec<u32> = f
        .ones()
        .filter(|&p| (0..n).all(|v| (p >> v) & 1 == 0 || !f.value(p & !(1 << v))))
        .collect();
    mins.sort_by_key(|&p| (p.count_ones(), p.reverse_bits()));
    mins
}

#[derive(Debug)]
enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_var: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn binary(
        &mut self,
        op: u8,
        next: fn(&mut Self) -> Result<Expr, ParseError>,
        make: fn(Box<Expr>, Box<Expr>) -> Expr,
    ) -> Result<Expr, ParseError> {
        let mut lhs = next(self)?;
        while self.peek() == Some(op) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        self.binary(b'|', Self::xor, Expr::Or)
    }

    fn xor(&mut self) -> Result<Expr, ParseError> {
        self.binary(b'^', Self::and, Expr::Xor)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        self.binary(b'&', Self::unary, Expr::And)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.or()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'0') | Some(b'1') => {
                let c = self.src[self.pos] == b'1';
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return self.err("constants are 0 or 1");
                }
                Ok(Expr::Const(c))
            }
            Some(b'x') => {
                self.pos += 1;
                match self.number() {
                    Some(i) if (1..=MAX_ARITY).contains(&i) => {
                        self.max_var = self.max_var.max(i);
                        Ok(Expr::Var(i - 1))
                    }
                    Some(_) => self.err("variable index must be in 1..=20"),
                    None => self.err("expected a variable index after `x`"),
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of formula"),
        }
    }
}

fn eval(e: &Expr, a: u32) -> bool {
    match e {
        Expr::Const(c) => *c,
        Expr::Var(v) => (a >> v) & 1 == 1,
        Expr::Not(x) => !eval(x, a),
        Expr::And(x, y) => eval(x, a) && eval(y, a),
        Expr::Xor(x, y) => eval(x, a) ^ eval(y, a),
        Expr::Or(x, y) => eval(x, a) || eval(y, a),
    }
}

fn to_function(e: &Expr, n: usize) -> BooleanFunction {
    match e {
        Expr::Const(c) => BooleanFunction::constant(n, *c).expect("arity checked"),
        Expr::Var(v) => BooleanFunction::projection(n, v + 1).expect("index checked"),
        Expr::Not(x) => to_function(x, n).complement(),
        Expr::And(x, y) => to_function(x, n).and(&to_function(y, n)),
        Expr::Xor(x, y) => to_function(x, n).xor(&to_function(y, n)),
        Expr::Or(x, y) => to_function(x, n).or(&to_function(y, n)),
    }
}

fn parse_formula(text: &str) -> Result<BooleanFunction, ParseError> {
    let (body, suffix) = match text.rsplit_once('@') {
        Some((body, s)) => {
            let s = s.trim();
            let n: usize = s.parse().map_err(|_| ParseError::Syntax {
                pos: body.len() + 1,
                msg: "arity suffix must be a number".into(),
            })?;
            (body, Some(n))
        }
        None => (text, None),
    };
    let mut p = Parser {
        src: body.as_bytes(),
        pos: 0,
        max_var: 0,
    };
    let expr = p.or()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let n = match suffix {
        Some(s) if !(1..=MAX_ARITY).contains(&s) => return Err(ParseError::Arity(s)),
        Some(s) if s < p.max_var => {
            return Err(ParseError::SuffixTooSmall {
                suffix: s,
                max: p.max_var,
            })
        }
        Some(s) => s,
        None => p.max_var.max(1),
    };
    if n <= 12 {
        Ok(BooleanFunction::from_fn(n, |a| eval(&expr, a))?)
    } else {
        Ok(to_function(&expr, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> BooleanFunction {
        parse_function(text).unwrap()
    }

    #[test]
    fn hex_literals() {
        assert_eq!(p("tt:2:0x8"), p("x1 & x2"));
        assert_eq!(p("tt:2:0xC"), BooleanFunction::projection(2, 2).unwrap());
        assert_eq!(format_hex(&p("x1 & x2")), "tt:2:0x8");
        assert_eq!(format_hex(&p("x1")), "tt:1:0x2");
        assert_eq!(format_hex(&p("x1 ^ x2 ^ x3")), "tt:3:0x96");
        assert!(matches!(
            parse_function("tt:2:0x08"),
            Err(ParseError::HexLength { .. })
        ));
        assert!(matches!(parse_function("tt:1:0x4"), Err(ParseError::HexOverflow(1))));
        assert!(matches!(parse_function("tt:21:0x0"), Err(ParseError::Arity(21))));
    }

    #[test]
    fn hex_round_trip_wide() {
        let f = p("T@7");
        assert_eq!(p(&format_hex(&f)), f);
        let g = p("(x1 ^ x7) & x8 | x3@10");
        assert_eq!(p(&format_hex(&g)), g);
    }

    #[test]
    fn precedence() {
        // `!` > `&` > `^` > `|`
        assert_eq!(p("x1 | x2 & x3"), p("x1 | (x2 & x3)"));
        assert_eq!(p("x1 ^ x2 & x3"), p("x1 ^ (x2 & x3)"));
        assert_eq!(p("x1 | x2 ^ x3"), p("x1 | (x2 ^ x3)"));
        assert_eq!(p("!x1 & x2"), p("(!x1) & x2"));
    }

    #[test]
    fn arity_suffix() {
        let f = p("x1 & x2@4");
        assert_eq!(f.arity(), 4);
        assert_eq!(f.essential_arity(), 2);
        assert_eq!(p("1").arity(), 1);
        assert_eq!(p("0@3"), BooleanFunction::constant(3, false).unwrap());
        assert!(matches!(
            parse_function("x3@2"),
            Err(ParseError::SuffixTooSmall { .. })
        ));
        assert!(parse_function("x21").is_err());
        assert!(parse_function("x1 &").is_err());
        assert!(parse_function("(x1").is_err());
        assert!(parse_function("x1 x2").is_err());
        assert!(parse_function("10").is_err());
    }

    #[test]
    fn family_specs() {
        assert_eq!(p("f@5"), crate::families::make_f(5).unwrap());
        assert!(parse_function("f@3").is_err());
        let opts = ParseOptions { allow_extended: true };
        assert_eq!(parse_function_with("f@3", opts).unwrap().arity(), 3);
    }

    #[test]
    fn anf_output() {
        assert_eq!(format_function(&p("x1 | x2"), Style::Anf), "x1 + x2 + x1*x2");
        assert_eq!(format_function(&p("1"), Style::Anf), "1");
        assert_eq!(format_function(&p("0"), Style::Anf), "0");
    }

    #[test]
    fn dnf_output() {
        assert_eq!(format_dnf(&p("x1 & x2 | x3")), "x3 | x1&x2");
        assert_eq!(format_dnf(&p("x2@3")), "x2@3");
        assert_eq!(format_dnf(&p("0@2")), "0@2");
        assert_eq!(format_dnf(&p("1")), "1");
        assert_eq!(format_dnf(&p("x1 ^ x2")), "x1&!x2 | !x1&x2");
    }

    #[test]
    fn dnf_round_trip_exhaustive() {
        for n in 1..=4 {
            for t in 0..(1u64 << (1 << n)) {
                let f = BooleanFunction::from_words(n, vec![t]).unwrap();
                let back = p(&format_dnf(&f));
                assert_eq!(back, f, "{}", format_dnf(&f));
            }
        }
    }

    #[test]
    fn formula_on_wide_arity() {
        let f = p("x1 & x14");
        assert_eq!(f.arity(), 14);
        assert_eq!(f.count_ones(), 1 << 12);
    }
}
