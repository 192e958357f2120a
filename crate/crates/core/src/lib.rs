//! Executable theory of equational classes of Boolean functions.
//!
//! The crate works with Boolean functions as bit-packed truth tables and
//! provides the minor preorder (simple variable substitution), membership in
//! the classes of Post's lattice, the classical antichain families, hypergraph
//! homomorphisms, associativity checks, class composition at an arity cap and
//! a classifier for closed intervals of equational classes.

pub mod assoc;
pub mod classes;
pub mod classify;
pub mod families;
pub mod function;
pub mod hypergraph;
pub mod minor;
pub mod monoid;
pub mod parse;
pub mod selfcheck;

pub use function::{BooleanFunction, FunctionError, Point, Polynomial, MAX_ARITY};
pub use parse::{format_function, parse_function, ParseError, Style};

/// Guide chapters, compiled and run as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/functions.md")]
    mod functions {}
    #[doc = include_str!("../../../book/src/minors.md")]
    mod minors {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    mod hypergraphs {}
    #[doc = include_str!("../../../book/src/associativity.md")]
    mod associativity {}
    #[doc = include_str!("../../../book/src/class-algebra.md")]
    mod class_algebra {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
}
