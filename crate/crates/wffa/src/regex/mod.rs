//! Weighted regular expressions over finance words.
//!
//! Sub-expressions are reference counted, so large expressions produced by state
//! elimination share structure instead of copying it.

mod convert;
mod syntax;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{ExprClass, FExpr};
use crate::semiring::{ExtReal, FinanceWord, SemiringSpec, Symbol};

pub use convert::{regex_to_wffa, regex_to_wffa_over, wffa_to_regex};
pub use syntax::{parse_regex, print_regex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    /// Matches only the empty word, with the given weight.
    EpsAtom(ExtReal),
    /// Matches one letter with the given symbol; the weight is the expression applied to its datum.
    LetterAtom(Symbol, FExpr),
    Sum(Arc<Regex>, Arc<Regex>),
    Cauchy(Arc<Regex>, Arc<Regex>),
    Star(Arc<Regex>),
}

/// Grammar membership of a regular expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegexFlags {
    pub eps_free: bool,
    pub restricted: bool,
    pub general: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegexClass {
    pub flags: RegexFlags,
    /// Join of the classes of all letter expressions.
    pub weight_class: ExprClass,
}

impl Regex {
    pub fn eps(s: impl Into<ExtReal>) -> Regex {
        Regex::EpsAtom(s.into())
    }

    pub fn letter(a: impl Into<Symbol>, e: FExpr) -> Regex {
        Regex::LetterAtom(a.into(), e)
    }

    pub fn sum(l: Regex, r: Regex) -> Regex {
        Regex::Sum(Arc::new(l), Arc::new(r))
    }

    pub fn cauchy(l: Regex, r: Regex) -> Regex {
        Regex::Cauchy(Arc::new(l), Arc::new(r))
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Arc::new(r))
    }

    /// Symbols of all letter atoms.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        collect_symbols(self, &mut out, &mut seen);
        out
    }

    /// Value on the empty word; `None` when a star is applied to an improper sub-expression.
    pub fn epsilon_value(&self, spec: &SemiringSpec) -> Option<ExtReal> {
        match self {
            Regex::EpsAtom(s) => Some(s.clone()),
            Regex::LetterAtom(..) => Some(spec.zero()),
            Regex::Sum(l, r) => Some(spec.add(&l.epsilon_value(spec)?, &r.epsilon_value(spec)?)),
            Regex::Cauchy(l, r) => Some(spec.mul(&l.epsilon_value(spec)?, &r.epsilon_value(spec)?)),
            Regex::Star(c) => {
                let inner = c.epsilon_value(spec)?;
                spec.is_zero(&inner).then(|| spec.one())
            }
        }
    }

    /// Every star is applied to a sub-expression with value zero on the empty word.
    pub fn validate(&self, spec: &SemiringSpec) -> bool {
        self.epsilon_value(spec).is_some()
    }

    /// Derivable from `R ::= e_a | R|R | R.R | R.R* | R*.R`.
    pub fn is_eps_free(&self) -> bool {
        match self {
            Regex::EpsAtom(_) | Regex::Star(_) => false,
            Regex::LetterAtom(..) => true,
            Regex::Sum(l, r) => l.is_eps_free() && r.is_eps_free(),
            Regex::Cauchy(l, r) => match (&**l, &**r) {
                (_, Regex::Star(c)) if l.is_eps_free() && c.is_eps_free() => true,
                (Regex::Star(c), _) if c.is_eps_free() && r.is_eps_free() => true,
                _ => l.is_eps_free() && r.is_eps_free(),
            },
        }
    }

    /// Derivable from `R ::= s_eps | e_a | R|R | R.R | F*` with `F` epsilon-free.
    pub fn is_restricted(&self) -> bool {
        match self {
            Regex::EpsAtom(_) | Regex::LetterAtom(..) => true,
            Regex::Sum(l, r) | Regex::Cauchy(l, r) => l.is_restricted() && r.is_restricted(),
            Regex::Star(c) => c.is_eps_free(),
        }
    }

    /// Join of the expression classes of all letter atoms (`Constant` if there are none).
    pub fn weight_class(&self) -> ExprClass {
        match self {
            Regex::EpsAtom(_) => ExprClass::Constant,
            Regex::LetterAtom(_, e) => e.classify(),
            Regex::Sum(l, r) | Regex::Cauchy(l, r) => l.weight_class().join(r.weight_class()),
            Regex::Star(c) => c.weight_class(),
        }
    }

    /// Letter expressions in left-to-right order.
    pub fn letter_expressions(&self) -> Vec<&FExpr> {
        let mut out = Vec::new();
        fn go<'a>(r: &'a Regex, out: &mut Vec<&'a FExpr>) {
            match r {
                Regex::EpsAtom(_) => {}
                Regex::LetterAtom(_, e) => out.push(e),
                Regex::Sum(l, r) | Regex::Cauchy(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                Regex::Star(c) => go(c, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Number of nodes, counting shared sub-expressions once per occurrence.
    pub fn size(&self) -> usize {
        match self {
            Regex::EpsAtom(_) | Regex::LetterAtom(..) => 1,
            Regex::Sum(l, r) | Regex::Cauchy(l, r) => 1 + l.size() + r.size(),
            Regex::Star(c) => 1 + c.size(),
        }
    }
}

fn collect_symbols(r: &Regex, out: &mut BTreeSet<Symbol>, seen: &mut std::collections::HashSet<usize>) {
    if !seen.insert(r as *const Regex as usize) {
        return;
    }
    match r {
        Regex::EpsAtom(_) => {}
        Regex::LetterAtom(a, _) => {
            out.insert(a.clone());
        }
        Regex::Sum(l, r) | Regex::Cauchy(l, r) => {
            collect_symbols(l, out, seen);
            collect_symbols(r, out, seen);
        }
        Regex::Star(c) => collect_symbols(c, out, seen),
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_regex(self))
    }
}

impl std::str::FromStr for Regex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Regex> {
        parse_regex(s)
    }
}

pub fn epsilon_value(spec: &SemiringSpec, r: &Regex) -> Option<ExtReal> {
    r.epsilon_value(spec)
}

pub fn validate(spec: &SemiringSpec, r: &Regex) -> bool {
    r.validate(spec)
}

fn invalid(r: &Regex) -> Error {
    Error::InvalidRegex(format!("a star in `{r}` is applied to an expression with non-zero empty-word value"))
}

/// Grammar flags and weight class of a valid expression.
pub fn classify_regex(spec: &SemiringSpec, r: &Regex) -> Result<RegexClass> {
    if !r.validate(spec) {
        return Err(invalid(r));
    }
    Ok(RegexClass {
        flags: RegexFlags {
            eps_free: r.is_eps_free(),
            restricted: r.is_restricted(),
            general: true,
        },
        weight_class: r.weight_class(),
    })
}

/// Direct evaluation by enumerating splits and factorizations of the word.
pub fn regex_semantics_oracle(spec: &SemiringSpec, r: &Regex, w: &FinanceWord) -> Result<ExtReal> {
    if !r.validate(spec) {
        return Err(invalid(r));
    }
    for (_, d) in &w.letters {
        spec.check_data(d)?;
    }
    let mut oracle = Oracle {
        spec,
        w,
        memo: HashMap::new(),
    };
    Ok(oracle.eval(r, 0, w.len()))
}

struct Oracle<'a> {
    spec: &'a SemiringSpec,
    w: &'a FinanceWord,
    memo: HashMap<(usize, usize, usize), ExtReal>,
}

impl Oracle<'_> {
    /// Value of `r` on the factor `w[i..j]`.
    fn eval(&mut self, r: &Regex, i: usize, j: usize) -> ExtReal {
        let key = (r as *const Regex as usize, i, j);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let spec = self.spec;
        let v = match r {
            Regex::EpsAtom(s) => {
                if i == j {
                    s.clone()
                } else {
                    spec.zero()
                }
            }
            Regex::LetterAtom(a, e) => {
                if j == i + 1 && self.w.letters[i].0 == *a {
                    e.eval_unchecked(spec, &self.w.letters[i].1)
                } else {
                    spec.zero()
                }
            }
            Regex::Sum(l, r) => {
                let a = self.eval(l, i, j);
                let b = self.eval(r, i, j);
                spec.add(&a, &b)
            }
            Regex::Cauchy(l, r) => {
                let mut acc = spec.zero();
                for k in i..=j {
                    let a = self.eval(l, i, k);
                    if spec.is_zero(&a) {
                        continue;
                    }
                    let b = self.eval(r, k, j);
                    acc = spec.add(&acc, &spec.mul(&a, &b));
                }
                acc
            }
            Regex::Star(c) => {
                if i == j {
                    spec.one()
                } else {
                    let mut acc = spec.zero();
                    for k in i + 1..=j {
                        let a = self.eval(c, i, k);
                        if spec.is_zero(&a) {
                            continue;
                        }
                        let b = self.eval(r, k, j);
                        acc = spec.add(&acc, &spec.mul(&a, &b));
                    }
                    acc
                }
            }
        };
        self.memo.insert(key, v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc() -> SemiringSpec {
        SemiringSpec::arctic()
    }

    fn bond() -> Regex {
        parse_regex("eps[-95] . (cpn[<<5>>])* . (fin[<<105>>] | dfl[0])").unwrap()
    }

    fn word(letters: &[(&str, &str)]) -> FinanceWord {
        FinanceWord::new(letters.iter().map(|(a, d)| (a.to_string(), d.parse().unwrap())).collect())
    }

    #[test]
    fn epsilon_values_and_validity() {
        assert_eq!(Regex::eps(-95).epsilon_value(&arc()), Some(ExtReal::from_int(-95)));
        assert_eq!(bond().epsilon_value(&arc()), Some(ExtReal::NegInf));
        assert!(bond().validate(&arc()));
        assert_eq!(Regex::star(Regex::eps(0)).epsilon_value(&arc()), None);
        assert!(!Regex::star(Regex::eps(5)).validate(&arc()));
        assert!(Regex::star(Regex::letter("bot", FExpr::constant(0))).validate(&arc()));
    }

    #[test]
    fn bond_oracle() {
        let w = word(&[("cpn", "0.9"), ("fin", "0.8")]);
        assert_eq!(regex_semantics_oracle(&arc(), &bond(), &w).unwrap(), "-6.5".parse().unwrap());
        let eur = parse_regex("eps[-2] . (bot[<<1>> & -50] | bot[0])").unwrap();
        let w = word(&[("bot", "55")]);
        assert_eq!(regex_semantics_oracle(&arc(), &eur, &w).unwrap(), ExtReal::from_int(3));
        assert_eq!(
            regex_semantics_oracle(&arc(), &eur, &FinanceWord::empty()).unwrap(),
            eur.epsilon_value(&arc()).unwrap()
        );
    }

    #[test]
    fn classification() {
        let amer = parse_regex("eps[-2] . (bot[0])* . (bot[<<1>> & -50] | bot[0]) . (bot[0])*").unwrap();
        let c = classify_regex(&arc(), &amer).unwrap();
        assert!(c.flags.restricted && !c.flags.eps_free);
        let l = classify_regex(&arc(), &Regex::letter("a", FExpr::bind(1))).unwrap();
        assert!(l.flags.eps_free && l.flags.restricted);
        assert_eq!(l.weight_class, ExprClass::Primitive);
        let e = classify_regex(&arc(), &Regex::eps(3)).unwrap();
        assert!(e.flags.restricted && !e.flags.eps_free);
        assert!(classify_regex(&arc(), &Regex::star(Regex::eps(3))).is_err());
    }
}
