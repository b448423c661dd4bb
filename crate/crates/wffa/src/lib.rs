//! Weighted finite finance automata.
//!
//! Market scenarios are finance words, sequences of `(symbol, datum)` pairs.
//! Automata assign each scenario a value in the arctic (max, +) or tropical
//! (min, +) semiring. Transition weights are expressions over the datum read
//! on the transition.
//!
//! Modules:
//! - [`semiring`]: exact extended rationals, the two semirings, finance words.
//! - [`expr`] and [`text`]: the expression language and its concrete syntax.
//! - [`pwa`]: piecewise-affine normal forms of arctic expressions.
//! - [`automaton`]: automata, evaluation engines and closure constructions.
//! - [`regex`]: weighted regular expressions and the translations to and from automata.
//! - [`decide`]: support and strict-threshold decision procedures.
//! - [`instruments`]: builders for standard financial instruments and scenario files.

pub mod automaton;
pub mod decide;
pub mod error;
pub mod expr;
pub mod instruments;
pub mod pwa;
pub mod regex;
pub mod semiring;
pub mod text;

pub use automaton::{MatrixForm, NormalizeMode, NormalizeStrategy, Run, StateId, Wffa};
pub use error::{Error, Result};
pub use expr::{ExprClass, FExpr, GuardKind};
pub use pwa::{Interval, Monomial, PiecewiseAffine};
pub use regex::{Regex, RegexClass, RegexFlags};
pub use semiring::{ExtReal, FinanceWord, Rational, SemiringKind, SemiringSpec, Symbol};
