//! Extended rationals, the arctic and tropical finance semirings, and finance words.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers used for every finite quantity.
pub type Rational = BigRational;

/// Build a rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A rational number extended with `-inf` and `+inf`.
///
/// The derived ordering is total with `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtReal {
    pub fn from_int(n: i64) -> Self {
        ExtReal::Finite(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        ExtReal::Finite(rat(n, d))
    }

    pub fn zero_value() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Renders the value rounded to `places` decimal digits (display only).
    pub fn to_decimal_string(&self, places: usize) -> String {
        match self {
            ExtReal::Finite(r) => round_decimal(r, places),
            other => other.to_string(),
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl From<i64> for ExtReal {
    fn from(n: i64) -> Self {
        ExtReal::from_int(n)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(r) => ExtReal::Finite(-r),
        }
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        -(self.clone())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ext_real(s.trim()).ok_or_else(|| Error::parse(1, 1, format!("invalid number `{s}`")))
    }
}

/// Formats a rational exactly: terminating decimals as decimals, everything else as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_multiple_of(&two) {
        den /= &two;
        twos += 1;
    }
    while den.is_multiple_of(&five) {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(BigInt::from(10).pow(places as u32));
    debug_assert!(scaled.is_integer());
    let digits = scaled.numer().abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

fn round_decimal(r: &Rational, places: usize) -> String {
    let scale = Rational::from_integer(BigInt::from(10).pow(places as u32));
    let scaled = (r * &scale).round();
    let value = scaled / scale;
    if places == 0 {
        return value.numer().to_string();
    }
    let digits = (value.clone() * Rational::from_integer(BigInt::from(10).pow(places as u32)))
        .to_integer()
        .abs()
        .to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Parses `-inf`, `+inf`, `inf`, integers, decimals and fractions `p/q`.
pub fn parse_ext_real(s: &str) -> Option<ExtReal> {
    match s {
        "-inf" => return Some(ExtReal::NegInf),
        "+inf" | "inf" => return Some(ExtReal::PosInf),
        _ => {}
    }
    parse_rational(s).map(ExtReal::Finite)
}

/// Parses an optionally signed decimal or fraction literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let n = parse_decimal(num)?;
        let d = parse_decimal(den)?;
        if d.is_zero() {
            return None;
        }
        n / d
    } else {
        parse_decimal(body)?
    };
    Some(if negative { -value } else { value })
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = BigInt::from(10).pow(frac_part.len() as u32);
    Some(Rational::new(numer, denom))
}

/// Which semiring operations are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiringKind {
    /// (max, +) over the reals with `-inf`.
    Arctic,
    /// (min, +) over the reals with `+inf`.
    Tropical,
}

/// Admissible data values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataDomain {
    NonNegReals,
    AllReals,
}

/// The data-binding function; both variants multiply, they differ in the admissible data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Binding {
    TimesNonNeg,
    TimesReal,
}

/// A finance semiring: semiring operations, data domain and binding function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemiringSpec {
    kind: SemiringKind,
    domain: DataDomain,
}

impl SemiringSpec {
    /// Arctic semiring with non-negative data.
    pub const fn arctic() -> Self {
        SemiringSpec {
            kind: SemiringKind::Arctic,
            domain: DataDomain::NonNegReals,
        }
    }

    /// Arctic semiring with arbitrary real data.
    pub const fn arctic_reals() -> Self {
        SemiringSpec {
            kind: SemiringKind::Arctic,
            domain: DataDomain::AllReals,
        }
    }

    /// Tropical semiring with non-negative data.
    pub const fn tropical() -> Self {
        SemiringSpec {
            kind: SemiringKind::Tropical,
            domain: DataDomain::NonNegReals,
        }
    }

    /// Tropical data is restricted to non-negative reals.
    pub fn new(kind: SemiringKind, domain: DataDomain) -> Result<Self> {
        if kind == SemiringKind::Tropical && domain == DataDomain::AllReals {
            return Err(Error::Unsupported(
                "the tropical semiring is only available over non-negative data".into(),
            ));
        }
        Ok(SemiringSpec { kind, domain })
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn domain(&self) -> DataDomain {
        self.domain
    }

    pub fn binding(&self) -> Binding {
        match self.domain {
            DataDomain::NonNegReals => Binding::TimesNonNeg,
            DataDomain::AllReals => Binding::TimesReal,
        }
    }

    pub fn is_arctic(&self) -> bool {
        self.kind == SemiringKind::Arctic
    }

    pub fn zero(&self) -> ExtReal {
        match self.kind {
            SemiringKind::Arctic => ExtReal::NegInf,
            SemiringKind::Tropical => ExtReal::PosInf,
        }
    }

    pub fn one(&self) -> ExtReal {
        ExtReal::zero_value()
    }

    pub fn is_zero(&self, v: &ExtReal) -> bool {
        *v == self.zero()
    }

    pub fn is_one(&self, v: &ExtReal) -> bool {
        matches!(v, ExtReal::Finite(r) if r.is_zero())
    }

    /// Semiring sum without carrier checks.
    pub fn add(&self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        let pick_a = match self.kind {
            SemiringKind::Arctic => a >= b,
            SemiringKind::Tropical => a <= b,
        };
        if pick_a {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Semiring product without carrier checks; the semiring zero absorbs.
    pub fn mul(&self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        let zero = self.zero();
        if *a == zero || *b == zero {
            return zero;
        }
        match (a, b) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(x + y),
            (ExtReal::Finite(_), inf) | (inf, _) => inf.clone(),
        }
    }

    /// Comparison where "better" means larger for arctic and smaller for tropical.
    pub fn better(&self, a: &ExtReal, b: &ExtReal) -> Ordering {
        match self.kind {
            SemiringKind::Arctic => a.cmp(b),
            SemiringKind::Tropical => b.cmp(a),
        }
    }

    pub fn check_carrier(&self, v: &ExtReal) -> Result<()> {
        let bad = match self.kind {
            SemiringKind::Arctic => *v == ExtReal::PosInf,
            SemiringKind::Tropical => *v == ExtReal::NegInf,
        };
        if bad {
            Err(Error::Carrier {
                value: v.to_string(),
                semiring: self.kind_name(),
            })
        } else {
            Ok(())
        }
    }

    pub fn check_data(&self, d: &ExtReal) -> Result<()> {
        match d {
            ExtReal::Finite(r) => {
                if self.domain == DataDomain::NonNegReals && r.is_negative() {
                    Err(Error::Domain(format!("data value {d} is negative")))
                } else {
                    Ok(())
                }
            }
            _ => Err(Error::Domain(format!("data value {d} is not finite"))),
        }
    }

    /// Data binding `d * s`, with `d * (-inf) = -inf` and `d * (+inf) = +inf`.
    pub fn bind(&self, d: &ExtReal, s: &ExtReal) -> Result<ExtReal> {
        self.check_data(d)?;
        Ok(bind_unchecked(d, s))
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            SemiringKind::Arctic => "arctic",
            SemiringKind::Tropical => "tropical",
        }
    }
}

pub(crate) fn bind_unchecked(d: &ExtReal, s: &ExtReal) -> ExtReal {
    match (d, s) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(x * y),
        (_, inf) => inf.clone(),
    }
}

impl fmt::Display for SemiringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let domain = match self.domain {
            DataDomain::NonNegReals => "nonneg",
            DataDomain::AllReals => "reals",
        };
        write!(f, "{} {}", self.kind_name(), domain)
    }
}

impl FromStr for SemiringSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = match parts.next() {
            Some("arctic") => SemiringKind::Arctic,
            Some("tropical") => SemiringKind::Tropical,
            other => return Err(Error::parse(1, 1, format!("unknown semiring kind {other:?}"))),
        };
        let domain = match parts.next() {
            None | Some("nonneg") => DataDomain::NonNegReals,
            Some("reals") => DataDomain::AllReals,
            Some(other) => return Err(Error::parse(1, 1, format!("unknown data domain `{other}`"))),
        };
        if let Some(extra) = parts.next() {
            return Err(Error::parse(1, 1, format!("unexpected `{extra}` in semiring description")));
        }
        SemiringSpec::new(kind, domain)
    }
}

/// Checked semiring sum.
pub fn sr_add(spec: &SemiringSpec, a: &ExtReal, b: &ExtReal) -> Result<ExtReal> {
    spec.check_carrier(a)?;
    spec.check_carrier(b)?;
    Ok(spec.add(a, b))
}

/// Checked semiring product.
pub fn sr_mul(spec: &SemiringSpec, a: &ExtReal, b: &ExtReal) -> Result<ExtReal> {
    spec.check_carrier(a)?;
    spec.check_carrier(b)?;
    Ok(spec.mul(a, b))
}

/// Checked data binding.
pub fn bind(spec: &SemiringSpec, d: &ExtReal, s: &ExtReal) -> Result<ExtReal> {
    spec.check_carrier(s)?;
    spec.bind(d, s)
}

/// Alphabet symbols are plain identifiers.
pub type Symbol = String;

/// A market scenario: a sequence of (event symbol, data value) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinanceWord {
    pub letters: Vec<(Symbol, ExtReal)>,
}

impl FinanceWord {
    pub fn new(letters: Vec<(Symbol, ExtReal)>) -> Self {
        FinanceWord { letters }
    }

    pub fn empty() -> Self {
        FinanceWord::default()
    }

    /// Convenience constructor from `(symbol, integer)` pairs.
    pub fn from_ints(letters: &[(&str, i64)]) -> Self {
        FinanceWord::new(letters.iter().map(|(a, d)| (a.to_string(), ExtReal::from_int(*d))).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The sub-word of positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> FinanceWord {
        FinanceWord::new(self.letters[start..end].to_vec())
    }

    /// Checks every symbol against `alphabet` and every datum against the domain.
    pub fn validate(&self, spec: &SemiringSpec, alphabet: &BTreeSet<Symbol>) -> Result<()> {
        for (a, d) in &self.letters {
            if !alphabet.contains(a) {
                return Err(Error::UnknownSymbol(a.clone()));
            }
            spec.check_data(d)?;
        }
        Ok(())
    }
}

impl fmt::Display for FinanceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("eps");
        }
        for (a, d) in &self.letters {
            write!(f, "({a},{d})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> ExtReal {
        ExtReal::from_int(n)
    }

    #[test]
    fn arctic_and_tropical_basic_ops() {
        let arc = SemiringSpec::arctic();
        let trop = SemiringSpec::tropical();
        assert_eq!(sr_add(&arc, &v(3), &ExtReal::NegInf).unwrap(), v(3));
        assert_eq!(sr_add(&arc, &v(2), &v(5)).unwrap(), v(5));
        assert_eq!(sr_add(&trop, &v(2), &v(5)).unwrap(), v(2));
        assert_eq!(sr_mul(&arc, &v(3), &v(0)).unwrap(), v(3));
        assert_eq!(sr_mul(&arc, &ExtReal::NegInf, &v(7)).unwrap(), ExtReal::NegInf);
        assert_eq!(sr_mul(&trop, &v(4), &v(2)).unwrap(), v(6));
        assert_eq!(sr_mul(&trop, &ExtReal::PosInf, &v(2)).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn carrier_violations_are_reported() {
        assert!(sr_add(&SemiringSpec::arctic(), &ExtReal::PosInf, &v(1)).is_err());
        assert!(sr_mul(&SemiringSpec::tropical(), &ExtReal::NegInf, &v(1)).is_err());
    }

    #[test]
    fn binding_conventions() {
        let arc = SemiringSpec::arctic();
        let d: ExtReal = "0.05".parse().unwrap();
        assert_eq!(bind(&arc, &d, &v(1000)).unwrap(), v(50));
        assert_eq!(bind(&arc, &ExtReal::from_ratio(5, 2), &ExtReal::NegInf).unwrap(), ExtReal::NegInf);
        assert_eq!(bind(&arc, &v(0), &v(7)).unwrap(), v(0));
        assert_eq!(bind(&arc, &v(0), &ExtReal::NegInf).unwrap(), ExtReal::NegInf);
        assert_eq!(bind(&SemiringSpec::tropical(), &v(0), &ExtReal::PosInf).unwrap(), ExtReal::PosInf);
        assert!(bind(&arc, &v(-1), &v(2)).is_err());
        assert_eq!(bind(&SemiringSpec::arctic_reals(), &v(-1), &v(2)).unwrap(), v(-2));
    }

    #[test]
    fn tropical_over_all_reals_is_rejected() {
        assert!(SemiringSpec::new(SemiringKind::Tropical, DataDomain::AllReals).is_err());
    }

    #[test]
    fn number_formatting_round_trips() {
        for s in ["0", "-50", "0.05", "-2.125", "1/3", "-7/6", "-inf", "+inf", "480"] {
            let x: ExtReal = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(x.to_string().parse::<ExtReal>().unwrap(), x);
        }
        assert_eq!("2.50".parse::<ExtReal>().unwrap().to_string(), "2.5");
        assert_eq!(".5".parse::<ExtReal>().unwrap().to_string(), "0.5");
        assert!("1/0".parse::<ExtReal>().is_err());
        assert!("abc".parse::<ExtReal>().is_err());
    }

    #[test]
    fn decimal_rounding_for_display() {
        let x = ExtReal::from_ratio(2, 3);
        assert_eq!(x.to_decimal_string(3), "0.667");
        assert_eq!(ExtReal::from_ratio(-1, 8).to_decimal_string(2), "-0.13");
        assert_eq!(ExtReal::NegInf.to_decimal_string(2), "-inf");
    }

    #[test]
    fn ordering_is_total() {
        assert!(ExtReal::NegInf < v(-1000));
        assert!(v(1000) < ExtReal::PosInf);
        assert!(ExtReal::from_ratio(1, 3) < ExtReal::from_ratio(1, 2));
    }

    #[test]
    fn spec_text_round_trip() {
        for spec in [SemiringSpec::arctic(), SemiringSpec::arctic_reals(), SemiringSpec::tropical()] {
            assert_eq!(spec.to_string().parse::<SemiringSpec>().unwrap(), spec);
        }
    }
}
