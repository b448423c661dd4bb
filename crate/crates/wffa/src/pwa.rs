//! Piecewise-affine normal forms of arctic expressions over non-negative data.
//!
//! A [`PiecewiseAffine`] function with breakpoints `0 < d1 < ... < dk` stores one
//! piece per cell of the partition `{0}, (0,d1), {d1}, ..., {dk}, (dk,inf)`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{ExprClass, FExpr};
use crate::semiring::{ExtReal, Rational, SemiringSpec};

/// One affine piece `x -> a*x + b`, or the constant `-inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Zero,
    Line { slope: Rational, intercept: Rational },
}

impl Piece {
    fn line(slope: Rational, intercept: Rational) -> Piece {
        Piece::Line { slope, intercept }
    }

    fn one() -> Piece {
        Piece::line(Rational::zero(), Rational::zero())
    }

    fn at(&self, x: &Rational) -> ExtReal {
        match self {
            Piece::Zero => ExtReal::NegInf,
            Piece::Line { slope, intercept } => ExtReal::Finite(slope * x + intercept),
        }
    }

    fn times(&self, other: &Piece) -> Piece {
        match (self, other) {
            (Piece::Line { slope: a1, intercept: b1 }, Piece::Line { slope: a2, intercept: b2 }) => {
                Piece::line(a1 + a2, b1 + b2)
            }
            _ => Piece::Zero,
        }
    }

    /// The coefficient pair `<a, b>`; the zero piece is reported as `<0, -inf>`.
    pub fn coefficients(&self) -> (ExtReal, ExtReal) {
        match self {
            Piece::Zero => (ExtReal::zero_value(), ExtReal::NegInf),
            Piece::Line { slope, intercept } => (ExtReal::Finite(slope.clone()), ExtReal::Finite(intercept.clone())),
        }
    }
}

/// A cell of the partition induced by the breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Point(Rational),
    /// Open interval; `None` as upper end means unbounded.
    Open(Rational, Option<Rational>),
}

/// A piecewise-affine function on `[0, inf)`.
#[derive(Debug, Clone)]
pub struct PiecewiseAffine {
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece>,
}

impl PartialEq for PiecewiseAffine {
    /// Equality as functions: same breakpoints, same interval pieces, same point values.
    fn eq(&self, other: &Self) -> bool {
        self.breakpoints == other.breakpoints
            && self.cells().zip(other.cells()).all(|((cell, p), (_, q))| match cell {
                Cell::Point(x) => p.at(&x) == q.at(&x),
                Cell::Open(..) => p == q,
            })
    }
}

/// A closed interval `[lo, hi]` of data values; `hi` may be `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Option<Rational>,
}

impl Interval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Result<Interval> {
        let lo = match lo {
            ExtReal::Finite(r) if !r.is_negative() => r,
            other => return Err(Error::Domain(format!("interval lower end {other} must be finite and >= 0"))),
        };
        let hi = match hi {
            ExtReal::Finite(r) if r >= lo => Some(r),
            ExtReal::PosInf => None,
            other => return Err(Error::Domain(format!("interval upper end {other} is below the lower end"))),
        };
        Ok(Interval { lo, hi })
    }

    /// `[0, inf)`.
    pub fn non_negative() -> Interval {
        Interval {
            lo: Rational::zero(),
            hi: None,
        }
    }

    pub fn bounded(lo: i64, hi: i64) -> Interval {
        Interval::new(ExtReal::from_int(lo), ExtReal::from_int(hi)).expect("valid bounds")
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.lo && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    /// Whether `self` lies inside `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo
            && match (&self.hi, &other.hi) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            }
    }
}

/// Result of a supremum computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supremum {
    pub value: ExtReal,
    /// Some point of the interval realizes the value (vacuously true for `-inf`).
    pub attained: bool,
    /// A point where the value is attained, or the boundary point it is approached at.
    pub witness: Option<Rational>,
}

/// A guarded affine expression `c & a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub constraint: FExpr,
    pub affine: FExpr,
}

impl Monomial {
    pub fn to_expr(&self) -> FExpr {
        FExpr::times(self.constraint.clone(), self.affine.clone())
    }
}

fn midpoint(lo: &Rational, hi: &Option<Rational>) -> Rational {
    match hi {
        Some(h) => (lo + h) / Rational::from_integer(2.into()),
        None => lo + Rational::one(),
    }
}

impl PiecewiseAffine {
    /// The same piece everywhere.
    pub fn uniform(piece: Piece) -> Self {
        PiecewiseAffine {
            breakpoints: Vec::new(),
            pieces: vec![piece.clone(), piece],
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn cell_count(&self) -> usize {
        self.pieces.len()
    }

    /// Number of affine pieces in the sense of the minimal partition size `k`.
    pub fn affine_piece_count(&self) -> usize {
        self.breakpoints.len() + 1
    }

    fn point(&self, j: usize) -> Rational {
        if j == 0 {
            Rational::zero()
        } else {
            self.breakpoints[j - 1].clone()
        }
    }

    fn cell(&self, idx: usize) -> Cell {
        let j = idx / 2;
        if idx.is_multiple_of(2) {
            Cell::Point(self.point(j))
        } else {
            Cell::Open(self.point(j), self.breakpoints.get(j).cloned())
        }
    }

    /// Cells paired with their pieces, left to right.
    pub fn cells(&self) -> impl Iterator<Item = (Cell, &Piece)> + '_ {
        self.pieces.iter().enumerate().map(|(i, p)| (self.cell(i), p))
    }

    fn cell_index(&self, x: &Rational) -> usize {
        if x.is_zero() {
            return 0;
        }
        match self.breakpoints.binary_search(x) {
            Ok(i) => 2 * (i + 1),
            Err(i) => 2 * i + 1,
        }
    }

    /// Value at a non-negative datum.
    pub fn eval(&self, x: &Rational) -> ExtReal {
        assert!(!x.is_negative(), "piecewise-affine functions are defined on [0, inf)");
        self.pieces[self.cell_index(x)].at(x)
    }

    /// The piece governing the open or point cell that contains `x`.
    fn piece_at(&self, x: &Rational) -> &Piece {
        &self.pieces[self.cell_index(x)]
    }

    /// The piece of the open interval that contains `(lo, hi)`.
    fn piece_on(&self, lo: &Rational, hi: &Option<Rational>) -> &Piece {
        self.piece_at(&midpoint(lo, hi))
    }

    fn refined_points(&self, other: &PiecewiseAffine) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.breakpoints.iter().chain(other.breakpoints.iter()).cloned().collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Combines two functions cell by cell on their common refinement.
    ///
    /// `point_op` produces the piece on a point cell. `open_op` produces the pieces on
    /// an open cell, possibly splitting it at one interior point.
    fn combine(
        &self,
        other: &PiecewiseAffine,
        point_op: impl Fn(&Rational, &Piece, &Piece) -> Piece,
        open_op: impl Fn(&Rational, &Option<Rational>, &Piece, &Piece) -> Split,
    ) -> PiecewiseAffine {
        let pts = self.refined_points(other);
        let mut breakpoints = Vec::new();
        let mut pieces = Vec::new();
        let zero = Rational::zero();
        let mut lo = zero;
        for j in 0..=pts.len() {
            pieces.push(point_op(&lo, self.piece_at(&lo), other.piece_at(&lo)));
            let hi = pts.get(j).cloned();
            let (p, q) = (self.piece_on(&lo, &hi), other.piece_on(&lo, &hi));
            match open_op(&lo, &hi, p, q) {
                Split::Whole(piece) => pieces.push(piece),
                Split::At { left, x, at, right } => {
                    pieces.push(left);
                    breakpoints.push(x);
                    pieces.push(at);
                    pieces.push(right);
                }
            }
            if let Some(h) = hi {
                breakpoints.push(h.clone());
                lo = h;
            }
        }
        let mut out = PiecewiseAffine { breakpoints, pieces };
        out.canonicalize();
        out
    }

    /// Removes every breakpoint whose neighbouring cells agree as functions.
    fn canonicalize(&mut self) {
        let mut j = 1;
        while j <= self.breakpoints.len() {
            let left = &self.pieces[2 * j - 1];
            let right = &self.pieces[2 * j + 1];
            let x = &self.breakpoints[j - 1];
            if left == right && self.pieces[2 * j].at(x) == left.at(x) {
                self.breakpoints.remove(j - 1);
                self.pieces.drain(2 * j..2 * j + 2);
            } else {
                j += 1;
            }
        }
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &PiecewiseAffine) -> PiecewiseAffine {
        self.combine(
            other,
            |x, p, q| if p.at(x) >= q.at(x) { p.clone() } else { q.clone() },
            max_on,
        )
    }

    /// Pointwise sum (the arctic product).
    pub fn add(&self, other: &PiecewiseAffine) -> PiecewiseAffine {
        self.combine(other, |_, p, q| p.times(q), |_, _, p, q| Split::Whole(p.times(q)))
    }

    /// Indicator of equality (`equal == true`) or inequality.
    pub fn compare(&self, other: &PiecewiseAffine, equal: bool) -> PiecewiseAffine {
        let indicator = move |b: bool| if b == equal { Piece::one() } else { Piece::Zero };
        self.combine(
            other,
            move |x, p, q| indicator(p.at(x) == q.at(x)),
            move |lo, hi, p, q| match coincidence(lo, hi, p, q) {
                Coincide::Everywhere => Split::Whole(indicator(true)),
                Coincide::Nowhere => Split::Whole(indicator(false)),
                Coincide::At(x) => Split::At {
                    left: indicator(false),
                    x,
                    at: indicator(true),
                    right: indicator(false),
                },
            },
        )
    }

    /// Whether some datum has a value other than `-inf`.
    pub fn support_nonempty(&self) -> bool {
        self.pieces.iter().any(|p| *p != Piece::Zero)
    }

    /// Supremum over `iv`.
    pub fn sup(&self, iv: &Interval) -> Supremum {
        let mut best = Supremum {
            value: ExtReal::NegInf,
            attained: true,
            witness: None,
        };
        for (cell, piece) in self.cells() {
            let Piece::Line { slope, intercept } = piece else { continue };
            let candidate = match clip(&cell, iv) {
                None => continue,
                Some(Segment::Point(x)) => Supremum {
                    value: ExtReal::Finite(slope * &x + intercept),
                    attained: true,
                    witness: Some(x),
                },
                Some(Segment::Range { lo, lo_closed, hi, hi_closed }) => match slope.cmp(&Rational::zero()) {
                    Ordering::Greater => match hi {
                        None => Supremum {
                            value: ExtReal::PosInf,
                            attained: false,
                            witness: None,
                        },
                        Some(h) => Supremum {
                            value: ExtReal::Finite(slope * &h + intercept),
                            attained: hi_closed,
                            witness: Some(h),
                        },
                    },
                    Ordering::Less => Supremum {
                        value: ExtReal::Finite(slope * &lo + intercept),
                        attained: lo_closed,
                        witness: Some(lo),
                    },
                    Ordering::Equal => Supremum {
                        value: ExtReal::Finite(intercept.clone()),
                        attained: true,
                        witness: Some(midpoint(&lo, &hi)),
                    },
                },
            };
            match candidate.value.cmp(&best.value) {
                Ordering::Greater => best = candidate,
                Ordering::Equal if candidate.attained && !best.attained => best = candidate,
                _ => {}
            }
        }
        best
    }

    /// One monomial per non-zero cell; their sum equals the function.
    pub fn to_monomials(&self) -> Vec<Monomial> {
        let x = || FExpr::bind(1);
        let c = |r: &Rational| FExpr::Const(ExtReal::Finite(r.clone()));
        let mut out = Vec::new();
        for (cell, piece) in self.cells() {
            let Piece::Line { slope, intercept } = piece else { continue };
            let constraint = match &cell {
                Cell::Point(d) => FExpr::eq(x(), c(d)),
                Cell::Open(lo, hi) => {
                    let above = FExpr::neq(FExpr::plus(x(), c(lo)), c(lo));
                    match hi {
                        None => above,
                        Some(h) => FExpr::times(above, FExpr::neq(FExpr::plus(x(), c(h)), x())),
                    }
                }
            };
            let affine = FExpr::times(FExpr::Bind(ExtReal::Finite(slope.clone())), c(intercept));
            out.push(Monomial { constraint, affine });
        }
        if out.is_empty() {
            out.push(Monomial {
                constraint: FExpr::eq(FExpr::constant(0), FExpr::constant(0)),
                affine: FExpr::Const(ExtReal::NegInf),
            });
        }
        out
    }
}

#[allow(clippy::large_enum_variant)]
enum Split {
    Whole(Piece),
    At { left: Piece, x: Rational, at: Piece, right: Piece },
}

enum Coincide {
    Everywhere,
    Nowhere,
    At(Rational),
}

/// The unique crossing of two distinct lines strictly inside `(lo, hi)`.
fn crossing(lo: &Rational, hi: &Option<Rational>, p: &Piece, q: &Piece) -> Option<Rational> {
    let (Piece::Line { slope: a1, intercept: b1 }, Piece::Line { slope: a2, intercept: b2 }) = (p, q) else {
        return None;
    };
    if a1 == a2 {
        return None;
    }
    let x = (b2 - b1) / (a1 - a2);
    let inside = x > *lo && hi.as_ref().is_none_or(|h| x < *h);
    inside.then_some(x)
}

fn coincidence(lo: &Rational, hi: &Option<Rational>, p: &Piece, q: &Piece) -> Coincide {
    if p == q {
        return Coincide::Everywhere;
    }
    match crossing(lo, hi, p, q) {
        Some(x) => Coincide::At(x),
        None => Coincide::Nowhere,
    }
}

fn max_on(lo: &Rational, hi: &Option<Rational>, p: &Piece, q: &Piece) -> Split {
    if p == q {
        return Split::Whole(p.clone());
    }
    let pick = |x: &Rational| if p.at(x) >= q.at(x) { p.clone() } else { q.clone() };
    match crossing(lo, hi, p, q) {
        Some(x) => {
            let left = pick(&midpoint(lo, &Some(x.clone())));
            let right = pick(&midpoint(&x, hi));
            Split::At {
                left,
                x,
                at: p.clone(),
                right,
            }
        }
        None => Split::Whole(pick(&midpoint(lo, hi))),
    }
}

enum Segment {
    Point(Rational),
    Range {
        lo: Rational,
        lo_closed: bool,
        hi: Option<Rational>,
        hi_closed: bool,
    },
}

/// Intersection of a cell with a closed interval.
fn clip(cell: &Cell, iv: &Interval) -> Option<Segment> {
    match cell {
        Cell::Point(x) => iv.contains(x).then(|| Segment::Point(x.clone())),
        Cell::Open(a, b) => {
            let (lo, lo_closed) = if iv.lo > *a { (iv.lo.clone(), true) } else { (a.clone(), false) };
            let (hi, hi_closed) = match (b, &iv.hi) {
                (None, None) => (None, false),
                (Some(b), None) => (Some(b.clone()), false),
                (None, Some(h)) => (Some(h.clone()), true),
                (Some(b), Some(h)) => {
                    if h < b {
                        (Some(h.clone()), true)
                    } else {
                        (Some(b.clone()), false)
                    }
                }
            };
            match &hi {
                None => Some(Segment::Range { lo, lo_closed, hi, hi_closed }),
                Some(h) => match lo.cmp(h) {
                    Ordering::Less => Some(Segment::Range { lo, lo_closed, hi, hi_closed }),
                    Ordering::Equal if lo_closed && hi_closed => Some(Segment::Point(lo)),
                    _ => None,
                },
            }
        }
    }
}

/// Piecewise-affine normal form of an arctic expression on `[0, inf)`.
pub fn compile_pwa(e: &FExpr) -> Result<PiecewiseAffine> {
    let leaf = |s: &ExtReal, bind: bool| -> Result<PiecewiseAffine> {
        let piece = match s {
            ExtReal::NegInf => Piece::Zero,
            ExtReal::PosInf => {
                return Err(Error::Unsupported(
                    "piecewise-affine analysis is only defined for arctic expressions".into(),
                ))
            }
            ExtReal::Finite(r) if bind => Piece::line(r.clone(), Rational::zero()),
            ExtReal::Finite(r) => Piece::line(Rational::zero(), r.clone()),
        };
        Ok(PiecewiseAffine::uniform(piece))
    };
    Ok(match e {
        FExpr::Const(s) => leaf(s, false)?,
        FExpr::Bind(s) => leaf(s, true)?,
        FExpr::Plus(l, r) => compile_pwa(l)?.max(&compile_pwa(r)?),
        FExpr::Times(l, r) => compile_pwa(l)?.add(&compile_pwa(r)?),
        FExpr::Eq(l, r) => compile_pwa(l)?.compare(&compile_pwa(r)?, true),
        FExpr::Neq(l, r) => compile_pwa(l)?.compare(&compile_pwa(r)?, false),
    })
}

/// Compiles with an explicit semiring check.
pub fn compile_pwa_for(spec: &SemiringSpec, e: &FExpr) -> Result<PiecewiseAffine> {
    if !spec.is_arctic() {
        return Err(Error::Unsupported("piecewise-affine analysis needs the arctic semiring".into()));
    }
    compile_pwa(e)
}

/// Supremum of `p` over `iv`, and whether it is attained.
pub fn pwa_sup(p: &PiecewiseAffine, iv: &Interval) -> (ExtReal, bool) {
    let s = p.sup(iv);
    (s.value, s.attained)
}

pub fn pwa_support_nonempty(p: &PiecewiseAffine) -> bool {
    p.support_nonempty()
}

pub fn pwa_to_monomials(p: &PiecewiseAffine) -> Vec<Monomial> {
    p.to_monomials()
}

/// Shrinks a sum of primitive expressions to at most two (non-negative data) or
/// three (arbitrary real data) summands with the same values.
pub fn reduce_primitive_sum(spec: &SemiringSpec, terms: &[FExpr]) -> Result<Vec<FExpr>> {
    if !spec.is_arctic() {
        return Err(Error::Unsupported("primitive-sum reduction needs the arctic semiring".into()));
    }
    let mut consts: Vec<&ExtReal> = Vec::new();
    let mut slopes: Vec<&ExtReal> = Vec::new();
    for t in terms {
        match t {
            FExpr::Const(s) => consts.push(s),
            FExpr::Bind(s) => slopes.push(s),
            other => {
                return Err(Error::Classification(format!(
                    "`{other}` is {}, expected a primitive expression",
                    other.classify()
                )))
            }
        }
    }
    let max_const = consts.iter().max().map(|s| FExpr::Const((*s).clone()));
    let max_slope = slopes.iter().max().map(|s| FExpr::Bind((*s).clone()));
    let out: Vec<FExpr> = match spec.binding() {
        crate::semiring::Binding::TimesNonNeg => max_const.into_iter().chain(max_slope).collect(),
        crate::semiring::Binding::TimesReal => {
            let min_finite_slope = slopes.iter().filter(|s| s.is_finite()).min();
            let mut out: Vec<FExpr> = max_slope.into_iter().collect();
            if let Some(m) = min_finite_slope {
                let m = FExpr::Bind((*m).clone());
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            out.extend(max_const);
            out
        }
    };
    debug_assert!(out.len() <= 5);
    debug_assert!(out.iter().all(|e| e.classify().within(ExprClass::Primitive)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{guard_le, guard_lt};
    use crate::semiring::{int, rat};

    fn c(n: i64) -> FExpr {
        FExpr::constant(n)
    }

    fn b(n: i64) -> FExpr {
        FExpr::bind(n)
    }

    fn agrees(e: &FExpr) {
        let p = compile_pwa(e).unwrap();
        let arc = SemiringSpec::arctic();
        let mut samples: Vec<Rational> = vec![int(0), rat(1, 3), int(1), int(7), int(100)];
        let mut prev = int(0);
        for d in p.breakpoints() {
            samples.push(d.clone());
            samples.push((&prev + d) / int(2));
            prev = d.clone();
        }
        samples.push(&prev + int(1));
        for x in samples {
            assert_eq!(p.eval(&x), e.eval(&arc, &ExtReal::Finite(x.clone())).unwrap(), "at {x} for {e}");
        }
    }

    #[test]
    fn affine_line_has_no_breakpoints() {
        let e = FExpr::times(b(2), c(1));
        let p = compile_pwa(&e).unwrap();
        assert!(p.breakpoints().is_empty());
        for piece in p.pieces() {
            assert_eq!(piece.coefficients(), (ExtReal::from_int(2), ExtReal::from_int(1)));
        }
        agrees(&e);
    }

    #[test]
    fn three_piece_example() {
        // 2x+1 on (0,3], -4x+6 on [5,inf), -inf elsewhere.
        let x = b(1);
        let left = FExpr::times(
            FExpr::times(guard_lt(c(0), x.clone()), guard_le(x.clone(), c(3))),
            FExpr::times(b(2), c(1)),
        );
        let right = FExpr::times(guard_le(c(5), x.clone()), FExpr::times(b(-4), c(6)));
        let e = FExpr::plus(left, right);
        let p = compile_pwa(&e).unwrap();
        assert_eq!(p.breakpoints(), &[int(3), int(5)]);
        assert_eq!(p.affine_piece_count(), 3);
        agrees(&e);
    }

    #[test]
    fn zero_expression() {
        let p = compile_pwa(&FExpr::Const(ExtReal::NegInf)).unwrap();
        assert!(!p.support_nonempty());
        assert!(p.pieces().iter().all(|x| x.coefficients() == (ExtReal::zero_value(), ExtReal::NegInf)));
        assert_eq!(pwa_sup(&p, &Interval::bounded(0, 5)), (ExtReal::NegInf, true));
    }

    #[test]
    fn crossing_inserts_breakpoint() {
        let e = FExpr::plus(b(1), c(5));
        let p = compile_pwa(&e).unwrap();
        assert_eq!(p.breakpoints(), &[int(5)]);
        agrees(&e);
    }

    #[test]
    fn sup_examples() {
        let p = compile_pwa(&b(1)).unwrap();
        assert_eq!(pwa_sup(&p, &Interval::non_negative()), (ExtReal::PosInf, false));
        assert_eq!(pwa_sup(&p, &Interval::bounded(0, 10)), (ExtReal::from_int(10), true));
        let q = compile_pwa(&FExpr::times(guard_lt(b(1), c(3)), b(2))).unwrap();
        assert_eq!(pwa_sup(&q, &Interval::bounded(0, 10)), (ExtReal::from_int(6), false));
        assert_eq!(pwa_sup(&q, &Interval::bounded(1, 2)), (ExtReal::from_int(4), true));
        let neg = compile_pwa(&FExpr::times(b(-1), c(4))).unwrap();
        assert_eq!(pwa_sup(&neg, &Interval::non_negative()), (ExtReal::from_int(4), true));
    }

    #[test]
    fn support_examples() {
        let guard = FExpr::eq(b(1), FExpr::Const(ExtReal::from_ratio(1, 2)));
        let p = compile_pwa(&guard).unwrap();
        assert!(p.support_nonempty());
        assert_eq!(p.eval(&rat(1, 2)), ExtReal::zero_value());
        assert_eq!(p.eval(&rat(1, 3)), ExtReal::NegInf);
        assert!(!compile_pwa(&FExpr::neq(b(1), b(1))).unwrap().support_nonempty());
    }

    #[test]
    fn monomials_reproduce_function() {
        let arc = SemiringSpec::arctic();
        let zero = compile_pwa(&FExpr::Const(ExtReal::NegInf)).unwrap();
        let ms = zero.to_monomials();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].to_expr().to_string(), "0 = 0 & -inf");
        let e = FExpr::plus(FExpr::times(b(2), c(1)), FExpr::times(guard_le(b(1), c(4)), c(20)));
        let p = compile_pwa(&e).unwrap();
        let ms = p.to_monomials();
        assert!(ms.len() <= p.cell_count());
        let sum = FExpr::sum_of(ms.iter().map(Monomial::to_expr)).unwrap();
        for m in &ms {
            assert_eq!(m.to_expr().classify(), ExprClass::Monomial);
        }
        for x in [rat(0, 1), rat(1, 2), int(4), rat(19, 2), int(7), int(30)] {
            let x = ExtReal::Finite(x);
            assert_eq!(sum.eval(&arc, &x).unwrap(), e.eval(&arc, &x).unwrap());
        }
    }

    #[test]
    fn primitive_sum_reduction() {
        let nn = SemiringSpec::arctic();
        let out = reduce_primitive_sum(&nn, &[c(1), c(4), b(2), b(5)]).unwrap();
        assert_eq!(out, vec![c(4), b(5)]);
        assert_eq!(reduce_primitive_sum(&nn, &[c(3)]).unwrap(), vec![c(3)]);
        let re = SemiringSpec::arctic_reals();
        let out = reduce_primitive_sum(&re, &[b(1), b(-2), c(0)]).unwrap();
        assert_eq!(out, vec![b(1), b(-2), c(0)]);
        assert!(reduce_primitive_sum(&nn, &[FExpr::plus(c(1), c(2))]).is_err());
    }

    #[test]
    fn tropical_constants_are_rejected() {
        assert!(compile_pwa(&FExpr::Const(ExtReal::PosInf)).is_err());
        assert!(compile_pwa_for(&SemiringSpec::tropical(), &c(1)).is_err());
    }
}
