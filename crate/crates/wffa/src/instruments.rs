//! Builders for standard instruments, effective duration, and scenario files.
//!
//! All builders work over the arctic semiring with non-negative data. Discounting
//! is never modelled inside an automaton: discount factors or discounted cash
//! flows are part of the scenario data.
//!
//! Scenario file grammar, one scenario per line:
//!
//! ```text
//! line     := [label ","] letter ("," letter)*  |  [label]  |  "#" comment
//! letter   := symbol ":" number
//! ```
//!
//! A line without letters is the empty scenario. A first field containing `:`
//! is a letter, not a label.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::automaton::Wffa;
use crate::error::{Error, Result};
use crate::expr::{guard_le, guard_lt, FExpr};
use crate::semiring::{parse_ext_real, ExtReal, FinanceWord, Rational, SemiringSpec, Symbol};

/// Symbol used by single-event instruments.
pub const BOT: &str = "bot";

fn c(r: &Rational) -> FExpr {
    FExpr::Const(ExtReal::Finite(r.clone()))
}

fn b(r: &Rational) -> FExpr {
    FExpr::Bind(ExtReal::Finite(r.clone()))
}

fn v(r: &Rational) -> ExtReal {
    ExtReal::Finite(r.clone())
}

fn zero() -> ExtReal {
    ExtReal::zero_value()
}

fn non_negative(name: &str, r: &Rational) -> Result<()> {
    if r.is_negative() {
        Err(Error::Domain(format!("{name} = {} must be non-negative", v(r))))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Long,
    Short,
}

/// Coupon bond: coupons `C`, face value `F`, purchase price `P0`.
///
/// Words look like `(cpn,d1)...(cpn,d_{n-1})(fin,d_n)` or end in `(dfl,d)` on default.
pub fn build_bond(coupon: &Rational, face: &Rational, price: &Rational) -> Result<Wffa> {
    non_negative("coupon", coupon)?;
    non_negative("face value", face)?;
    let mut a = Wffa::new(SemiringSpec::arctic(), ["cpn", "fin", "dfl"]);
    let qc = a.add_state("q_c");
    let qf = a.add_state("q_f");
    let qd = a.add_state("q_d");
    a.set_initial(qc, v(&-price))?;
    a.set_final(qf, zero())?;
    a.set_final(qd, zero())?;
    a.add_transition(qc, "cpn", qc, b(coupon))?;
    a.add_transition(qc, "fin", qf, b(&(coupon + face)))?;
    a.add_transition(qc, "dfl", qd, FExpr::constant(0))?;
    Ok(a)
}

/// Dividend discount model over `(div,d1)...(div,dn)(sell,s)` with discounted cash flows as data.
pub fn build_ddm() -> Wffa {
    let mut a = Wffa::new(SemiringSpec::arctic(), ["div", "sell"]);
    let qh = a.add_state("q_h");
    let qs = a.add_state("q_s");
    a.set_initial(qh, zero()).expect("finite");
    a.set_final(qs, zero()).expect("finite");
    a.add_transition(qh, "div", qh, FExpr::bind(1)).expect("valid");
    a.add_transition(qh, "sell", qs, FExpr::bind(1)).expect("valid");
    a
}

/// European call on the one-letter word `(bot, S_T)`.
///
/// The long position aggregates an exercise and a dismissal run by max; the short
/// position guards both runs so that exactly one contributes.
pub fn build_euro_call(position: Position, premium: &Rational, strike: &Rational) -> Result<Wffa> {
    non_negative("strike", strike)?;
    let mut a = Wffa::new(SemiringSpec::arctic(), [BOT]);
    let qs = a.add_state("q_s");
    let qe = a.add_state("q_e");
    let qd = a.add_state("q_d");
    a.set_final(qd, zero())?;
    match position {
        Position::Long => {
            a.set_initial(qs, v(&-premium))?;
            a.set_final(qe, v(&-strike))?;
            a.add_transition(qs, BOT, qe, FExpr::bind(1))?;
            a.add_transition(qs, BOT, qd, FExpr::constant(0))?;
        }
        Position::Short => {
            a.set_initial(qs, v(premium))?;
            a.set_final(qe, v(strike))?;
            let x = FExpr::bind(1);
            a.add_transition(qs, BOT, qe, FExpr::times(guard_lt(c(strike), x.clone()), FExpr::bind(-1)))?;
            a.add_transition(qs, BOT, qd, FExpr::times(guard_le(x, c(strike)), FExpr::constant(0)))?;
        }
    }
    Ok(a)
}

/// American call on `(bot,S_1)...(bot,S_T)`.
pub fn build_american_call(premium: &Rational, strike: &Rational) -> Result<Wffa> {
    non_negative("strike", strike)?;
    let mut a = Wffa::new(SemiringSpec::arctic(), [BOT]);
    let qw = a.add_state("q_w");
    let qe = a.add_state("q_e");
    let qd = a.add_state("q_d");
    a.set_initial(qw, v(&-premium))?;
    a.set_final(qe, v(&-strike))?;
    a.set_final(qd, zero())?;
    a.add_transition(qw, BOT, qw, FExpr::constant(0))?;
    a.add_transition(qw, BOT, qe, FExpr::bind(1))?;
    a.add_transition(qw, BOT, qd, FExpr::constant(0))?;
    a.add_transition(qe, BOT, qe, FExpr::constant(0))?;
    Ok(a)
}

/// Buy limit order for `qty` shares at price `limit`; `a` keeps the order active, `c` cancels.
///
/// The value is the acquisition cost at the first price at or below the limit,
/// and `-inf` if the order never executes.
pub fn build_limit_order(limit: &Rational, qty: &Rational) -> Result<Wffa> {
    non_negative("limit", limit)?;
    non_negative("quantity", qty)?;
    let mut a = Wffa::new(SemiringSpec::arctic(), ["a", "c"]);
    let qw = a.add_state("q_w");
    let qe = a.add_state("q_e");
    let qc = a.add_state("q_c");
    a.set_initial(qw, zero())?;
    a.set_final(qe, zero())?;
    let x = FExpr::bind(1);
    a.add_transition(qw, "a", qw, guard_lt(c(limit), x.clone()))?;
    a.add_transition(qw, "a", qe, FExpr::times(guard_le(x, c(limit)), b(qty)))?;
    a.add_transition(qw, "c", qc, FExpr::constant(0))?;
    a.add_transition(qe, "a", qe, FExpr::constant(0))?;
    Ok(a)
}

/// Long call at the lower strike combined with a short call at the higher strike.
pub fn build_bull_spread(
    premium_low: &Rational,
    strike_low: &Rational,
    premium_high: &Rational,
    strike_high: &Rational,
) -> Result<Wffa> {
    if strike_low >= strike_high {
        return Err(Error::Domain(format!(
            "bull spread needs K_low < K_high, got {} and {}",
            v(strike_low),
            v(strike_high)
        )));
    }
    let long = build_euro_call(Position::Long, premium_low, strike_low)?;
    let short = build_euro_call(Position::Short, premium_high, strike_high)?;
    crate::automaton::op_hadamard(&long, &short)
}

/// Instrument parameters, one variant per builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstrumentParams {
    Bond { coupon: Rational, face: Rational, price: Rational },
    Ddm,
    EuroCall { position: Position, premium: Rational, strike: Rational },
    AmerCall { premium: Rational, strike: Rational },
    LimitOrder { limit: Rational, qty: Rational },
    BullSpread { premium_low: Rational, strike_low: Rational, premium_high: Rational, strike_high: Rational },
}

impl InstrumentParams {
    pub fn build(&self) -> Result<Wffa> {
        match self {
            InstrumentParams::Bond { coupon, face, price } => build_bond(coupon, face, price),
            InstrumentParams::Ddm => Ok(build_ddm()),
            InstrumentParams::EuroCall { position, premium, strike } => build_euro_call(*position, premium, strike),
            InstrumentParams::AmerCall { premium, strike } => build_american_call(premium, strike),
            InstrumentParams::LimitOrder { limit, qty } => build_limit_order(limit, qty),
            InstrumentParams::BullSpread { premium_low, strike_low, premium_high, strike_high } => {
                build_bull_spread(premium_low, strike_low, premium_high, strike_high)
            }
        }
    }
}

/// Exact `base^(-exp)`.
fn inverse_power(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc.recip()
}

/// The bond scenario `(cpn,d1)...(cpn,d_{n-1})(fin,d_n)` with `d_i = (1 + s_i + shift)^(-i)`.
pub fn discount_word(spots: &[Rational], shift: &Rational) -> Result<FinanceWord> {
    if spots.is_empty() {
        return Err(Error::Domain("at least one spot rate is required".into()));
    }
    let n = spots.len();
    let mut letters = Vec::with_capacity(n);
    for (i, s) in spots.iter().enumerate() {
        let base = Rational::one() + s + shift;
        if !base.is_positive() {
            return Err(Error::Domain(format!("1 + s_{} + shift = {} is not positive", i + 1, v(&base))));
        }
        let sym = if i + 1 == n { "fin" } else { "cpn" };
        letters.push((sym.to_string(), v(&inverse_power(&base, i + 1))));
    }
    Ok(FinanceWord::new(letters))
}

/// `(V(-delta) - V(+delta)) / (2 V delta)` for a bond automaton with zero purchase price.
pub fn effective_duration(bond: &Wffa, spots: &[Rational], delta: &Rational) -> Result<Rational> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta = {} must be positive", v(delta))));
    }
    let value = |shift: &Rational| -> Result<Rational> {
        let w = discount_word(spots, shift)?;
        match bond.behavior_matrix(&w)? {
            ExtReal::Finite(r) => Ok(r),
            other => Err(Error::Domain(format!("bond value {other} is not finite"))),
        }
    };
    let v0 = value(&Rational::zero())?;
    if v0.is_zero() {
        return Err(Error::Domain("bond value is zero; duration is undefined".into()));
    }
    let down = value(&-delta)?;
    let up = value(delta)?;
    let two = Rational::from_integer(2.into());
    Ok((down - up) / (two * v0 * delta))
}

/// Parsed scenario file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSet {
    pub alphabet: BTreeSet<Symbol>,
    pub rows: Vec<FinanceWord>,
    pub labels: Vec<Option<String>>,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Parses scenarios and validates symbols against `alphabet` and data against the domain of `spec`.
pub fn parse_scenarios(text: &str, spec: &SemiringSpec, alphabet: &BTreeSet<Symbol>) -> Result<ScenarioSet> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let number = idx + 1;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut fields: Vec<(usize, &str)> = Vec::new();
        let mut offset = 0;
        for part in line.split(',') {
            let lead = part.len() - part.trim_start().len();
            fields.push((offset + lead + 1, part.trim()));
            offset += part.len() + 1;
        }
        if fields.len() == 1 && fields[0].1.is_empty() {
            rows.push(FinanceWord::empty());
            labels.push(None);
            continue;
        }
        let mut label = None;
        if !fields[0].1.contains(':') {
            let (col, text) = fields.remove(0);
            if text.is_empty() || text.contains(char::is_whitespace) {
                return Err(Error::parse(number, col, "expected a label or `symbol:value`"));
            }
            label = Some(text.to_string());
        }
        let mut letters = Vec::with_capacity(fields.len());
        for (col, field) in fields {
            let (sym, value) = field
                .split_once(':')
                .ok_or_else(|| Error::parse(number, col, format!("expected `symbol:value`, found `{field}`")))?;
            let (sym, value) = (sym.trim(), value.trim());
            if sym.is_empty() {
                return Err(Error::parse(number, col, "missing symbol"));
            }
            let d = parse_ext_real(value)
                .filter(ExtReal::is_finite)
                .ok_or_else(|| Error::parse(number, col, format!("`{value}` is not a finite number")))?;
            if !alphabet.contains(sym) {
                return Err(Error::Domain(format!("line {number}: symbol `{sym}` is not in the alphabet")));
            }
            spec.check_data(&d).map_err(|e| Error::Domain(format!("line {number}: {e}")))?;
            letters.push((sym.to_string(), d));
        }
        rows.push(FinanceWord::new(letters));
        labels.push(label);
    }
    Ok(ScenarioSet {
        alphabet: alphabet.clone(),
        rows,
        labels,
    })
}

pub fn load_scenarios(path: &Path, spec: &SemiringSpec, alphabet: &BTreeSet<Symbol>) -> Result<ScenarioSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenarios(&text, spec, alphabet)
}

/// Evaluation engine for batch runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Matrix,
    BruteForce,
}

/// Evaluates every row in parallel; results keep the input order.
pub fn evaluate_batch(a: &Wffa, rows: &[FinanceWord], engine: Engine) -> Vec<Result<ExtReal>> {
    rows.par_iter()
        .map(|w| match engine {
            Engine::Matrix => a.behavior_matrix(w),
            Engine::BruteForce => a.behavior_bruteforce(w),
        })
        .collect()
}
