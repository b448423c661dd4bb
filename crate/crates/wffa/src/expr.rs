//! Finance expressions: syntax, evaluation, size and classification.

use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{bind_unchecked, ExtReal, SemiringSpec};

/// An expression denoting a function from data values to semiring values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FExpr {
    /// A semiring constant.
    Const(ExtReal),
    /// The data binding `<<s>>`, i.e. `d * s`.
    Bind(ExtReal),
    Plus(Box<FExpr>, Box<FExpr>),
    Times(Box<FExpr>, Box<FExpr>),
    Eq(Box<FExpr>, Box<FExpr>),
    Neq(Box<FExpr>, Box<FExpr>),
}

/// Syntactic expression classes, from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExprClass {
    Constant,
    Primitive,
    Affine,
    BasicConstraint,
    SimpleConstraint,
    PlainConstraint,
    Constraint,
    Monomial,
    General,
}

impl ExprClass {
    /// Whether every expression of class `self` also belongs to class `other`.
    pub fn within(self, other: ExprClass) -> bool {
        use ExprClass::*;
        if self == other || other == General {
            return true;
        }
        match self {
            Constant => matches!(other, Primitive | Affine),
            Primitive => other == Affine,
            BasicConstraint => matches!(other, SimpleConstraint | PlainConstraint | Constraint),
            SimpleConstraint | PlainConstraint => other == Constraint,
            _ => false,
        }
    }

    /// Least class containing both arguments.
    pub fn join(self, other: ExprClass) -> ExprClass {
        use ExprClass::*;
        if self.within(other) {
            return other;
        }
        if other.within(self) {
            return self;
        }
        for candidate in [Affine, Constraint] {
            if self.within(candidate) && other.within(candidate) {
                return candidate;
            }
        }
        General
    }
}

impl fmt::Display for ExprClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ExprClass::Constant => "constant",
            ExprClass::Primitive => "primitive",
            ExprClass::Affine => "affine",
            ExprClass::BasicConstraint => "basic-constraint",
            ExprClass::SimpleConstraint => "simple-constraint",
            ExprClass::PlainConstraint => "plain-constraint",
            ExprClass::Constraint => "constraint",
            ExprClass::Monomial => "monomial",
            ExprClass::General => "general",
        };
        f.write_str(name)
    }
}

/// Derived guard macros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardKind {
    Le,
    Lt,
    Min,
}

impl FExpr {
    pub fn constant(s: impl Into<ExtReal>) -> FExpr {
        FExpr::Const(s.into())
    }

    pub fn bind(s: impl Into<ExtReal>) -> FExpr {
        FExpr::Bind(s.into())
    }

    pub fn plus(l: FExpr, r: FExpr) -> FExpr {
        FExpr::Plus(Box::new(l), Box::new(r))
    }

    pub fn times(l: FExpr, r: FExpr) -> FExpr {
        FExpr::Times(Box::new(l), Box::new(r))
    }

    pub fn eq(l: FExpr, r: FExpr) -> FExpr {
        FExpr::Eq(Box::new(l), Box::new(r))
    }

    pub fn neq(l: FExpr, r: FExpr) -> FExpr {
        FExpr::Neq(Box::new(l), Box::new(r))
    }

    /// Left-associated sum of the given summands; `None` for an empty list.
    pub fn sum_of<I: IntoIterator<Item = FExpr>>(terms: I) -> Option<FExpr> {
        terms.into_iter().reduce(FExpr::plus)
    }

    /// The top-level summands of a left- or right-nested sum.
    pub fn summands(&self) -> Vec<&FExpr> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a FExpr, out: &mut Vec<&'a FExpr>) {
            match e {
                FExpr::Plus(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            FExpr::Const(_) | FExpr::Bind(_) => 1,
            FExpr::Plus(l, r) | FExpr::Times(l, r) | FExpr::Eq(l, r) | FExpr::Neq(l, r) => {
                l.size() + r.size() + 1
            }
        }
    }

    /// Evaluates at datum `d` without checking `d` against the domain.
    pub fn eval_unchecked(&self, spec: &SemiringSpec, d: &ExtReal) -> ExtReal {
        match self {
            FExpr::Const(s) => s.clone(),
            FExpr::Bind(s) => bind_unchecked(d, s),
            FExpr::Plus(l, r) => spec.add(&l.eval_unchecked(spec, d), &r.eval_unchecked(spec, d)),
            FExpr::Times(l, r) => spec.mul(&l.eval_unchecked(spec, d), &r.eval_unchecked(spec, d)),
            FExpr::Eq(l, r) => truth(spec, l.eval_unchecked(spec, d) == r.eval_unchecked(spec, d)),
            FExpr::Neq(l, r) => truth(spec, l.eval_unchecked(spec, d) != r.eval_unchecked(spec, d)),
        }
    }

    /// Evaluates at datum `d`.
    pub fn eval(&self, spec: &SemiringSpec, d: &ExtReal) -> Result<ExtReal> {
        spec.check_data(d)?;
        Ok(self.eval_unchecked(spec, d))
    }

    /// Checks every leaf constant against the carrier of `spec`.
    pub fn check_carrier(&self, spec: &SemiringSpec) -> Result<()> {
        match self {
            FExpr::Const(s) | FExpr::Bind(s) => spec.check_carrier(s),
            FExpr::Plus(l, r) | FExpr::Times(l, r) | FExpr::Eq(l, r) | FExpr::Neq(l, r) => {
                l.check_carrier(spec)?;
                r.check_carrier(spec)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, FExpr::Const(_))
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self, FExpr::Const(_) | FExpr::Bind(_))
    }

    /// A primitive expression or `<<s>> & s'`.
    pub fn is_affine(&self) -> bool {
        match self {
            FExpr::Times(l, r) => matches!((l.as_ref(), r.as_ref()), (FExpr::Bind(_), FExpr::Const(_))),
            other => other.is_primitive(),
        }
    }

    /// A single comparison node.
    pub fn is_plain_constraint(&self) -> bool {
        matches!(self, FExpr::Eq(..) | FExpr::Neq(..))
    }

    /// A product of comparison nodes.
    pub fn is_constraint(&self) -> bool {
        match self {
            FExpr::Times(l, r) => l.is_constraint() && r.is_constraint(),
            other => other.is_plain_constraint(),
        }
    }

    /// `(p1 | p2) = p3` or `(p1 | p2) != p3` with primitive operands.
    ///
    /// A bare primitive on the left is also accepted, read as `p1 | p1`.
    pub fn is_basic_constraint(&self) -> bool {
        match self {
            FExpr::Eq(l, r) | FExpr::Neq(l, r) => {
                let left_ok = match l.as_ref() {
                    FExpr::Plus(a, b) => a.is_primitive() && b.is_primitive(),
                    other => other.is_primitive(),
                };
                left_ok && r.is_primitive()
            }
            _ => false,
        }
    }

    /// A basic constraint or the product of two basic constraints.
    pub fn is_simple_constraint(&self) -> bool {
        match self {
            FExpr::Times(l, r) => l.is_basic_constraint() && r.is_basic_constraint(),
            other => other.is_basic_constraint(),
        }
    }

    /// `c & a` with `c` a simple constraint and `a` affine.
    pub fn is_monomial(&self) -> bool {
        match self {
            FExpr::Times(c, a) => c.is_simple_constraint() && a.is_affine(),
            _ => false,
        }
    }

    /// The most specific class of the expression.
    pub fn classify(&self) -> ExprClass {
        if self.is_constant() {
            ExprClass::Constant
        } else if self.is_primitive() {
            ExprClass::Primitive
        } else if self.is_affine() {
            ExprClass::Affine
        } else if self.is_basic_constraint() {
            ExprClass::BasicConstraint
        } else if self.is_simple_constraint() {
            ExprClass::SimpleConstraint
        } else if self.is_plain_constraint() {
            ExprClass::PlainConstraint
        } else if self.is_constraint() {
            ExprClass::Constraint
        } else if self.is_monomial() {
            ExprClass::Monomial
        } else {
            ExprClass::General
        }
    }

    /// Whether every leaf constant is finite.
    pub fn has_finite_leaves(&self) -> bool {
        match self {
            FExpr::Const(s) | FExpr::Bind(s) => s.is_finite(),
            FExpr::Plus(l, r) | FExpr::Times(l, r) | FExpr::Eq(l, r) | FExpr::Neq(l, r) => {
                l.has_finite_leaves() && r.has_finite_leaves()
            }
        }
    }

    /// Negates every leaf constant.
    ///
    /// Evaluating the result in the tropical semiring yields the negation of the
    /// arctic value at every datum, with `-inf` mapped to `+inf`.
    pub fn negated(&self) -> FExpr {
        match self {
            FExpr::Const(s) => FExpr::Const(-s),
            FExpr::Bind(s) => FExpr::Bind(-s),
            FExpr::Plus(l, r) => FExpr::plus(l.negated(), r.negated()),
            FExpr::Times(l, r) => FExpr::times(l.negated(), r.negated()),
            FExpr::Eq(l, r) => FExpr::eq(l.negated(), r.negated()),
            FExpr::Neq(l, r) => FExpr::neq(l.negated(), r.negated()),
        }
    }
}

fn truth(spec: &SemiringSpec, b: bool) -> ExtReal {
    if b {
        spec.one()
    } else {
        spec.zero()
    }
}

/// `[e1 <= e2] = [(e1 | e2) = e2]`.
pub fn guard_le(e1: FExpr, e2: FExpr) -> FExpr {
    FExpr::eq(FExpr::plus(e1, e2.clone()), e2)
}

/// `[e1 < e2] = [(e1 | e2) != e1]`.
pub fn guard_lt(e1: FExpr, e2: FExpr) -> FExpr {
    FExpr::neq(FExpr::plus(e1.clone(), e2), e1)
}

/// `min(e1, e2) = ([e1 <= e2] & e1) | ([e2 <= e1] & e2)`.
pub fn guard_min(e1: FExpr, e2: FExpr) -> FExpr {
    FExpr::plus(
        FExpr::times(guard_le(e1.clone(), e2.clone()), e1.clone()),
        FExpr::times(guard_le(e2.clone(), e1), e2),
    )
}

/// Builds a derived guard; guards are only meaningful in the arctic semiring.
pub fn build_guard(spec: &SemiringSpec, kind: GuardKind, e1: FExpr, e2: FExpr) -> Result<FExpr> {
    if !spec.is_arctic() {
        return Err(Error::Unsupported("derived guards need the arctic semiring".into()));
    }
    Ok(match kind {
        GuardKind::Le => guard_le(e1, e2),
        GuardKind::Lt => guard_lt(e1, e2),
        GuardKind::Min => guard_min(e1, e2),
    })
}

/// Structural size of an expression.
pub fn expr_size(e: &FExpr) -> usize {
    e.size()
}

/// Evaluates an expression at a datum.
pub fn eval_expr(spec: &SemiringSpec, e: &FExpr, d: &ExtReal) -> Result<ExtReal> {
    e.eval(spec, d)
}

/// Most specific syntactic class.
pub fn classify_expr(e: &FExpr) -> ExprClass {
    e.classify()
}
