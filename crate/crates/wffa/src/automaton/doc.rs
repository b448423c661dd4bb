//! Line-oriented text format for automata.
//!
//! ```text
//! format wffa/1
//! semiring arctic nonneg
//! alphabet a c
//! states q_w q_e q_c
//! initial q_w 0
//! final q_e 0
//! transition q_w a q_w : <<1>> & -50
//! ```
//!
//! `#` starts a comment. `states` and `alphabet` may repeat; states must be
//! declared before they are referenced.

use std::fmt::Write as _;

use super::Wffa;
use crate::error::{Error, Result};
use crate::semiring::{parse_ext_real, SemiringSpec};
use crate::text::parse_expr;

const HEADER: &str = "wffa/1";

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn error(&self, token: &str, message: impl Into<String>) -> Error {
        let column = token_column(self.text, token);
        Error::parse(self.number, column, message)
    }
}

fn token_column(line: &str, token: &str) -> usize {
    let offset = token.as_ptr() as usize - line.as_ptr() as usize;
    if offset <= line.len() {
        line[..offset].chars().count() + 1
    } else {
        1
    }
}

/// Parses an automaton document.
pub fn parse_wffa(text: &str) -> Result<Wffa> {
    let mut spec: Option<SemiringSpec> = None;
    let mut seen_format = false;
    let mut out: Option<Wffa> = None;

    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Line {
            number: idx + 1,
            text: raw,
        };
        let mut words = content.split_whitespace();
        let Some(keyword) = words.next() else { continue };

        if !seen_format {
            if keyword != "format" {
                return Err(line.error(keyword, format!("expected `format {HEADER}`")));
            }
            match words.next() {
                Some(HEADER) => {}
                Some(other) => return Err(line.error(other, format!("unsupported format `{other}`"))),
                None => return Err(Error::parse(line.number, raw.len() + 1, "missing format version")),
            }
            seen_format = true;
            continue;
        }

        if keyword == "semiring" {
            if out.is_some() {
                return Err(line.error(keyword, "`semiring` must precede all other declarations"));
            }
            let rest: Vec<&str> = words.collect();
            let parsed: SemiringSpec = rest
                .join(" ")
                .parse()
                .map_err(|e: Error| line.error(rest.first().copied().unwrap_or(keyword), e.to_string()))?;
            spec = Some(parsed);
            continue;
        }

        let a = out.get_or_insert_with(|| Wffa::new(spec.unwrap_or_else(SemiringSpec::arctic), Vec::<String>::new()));
        match keyword {
            "alphabet" => {
                for sym in words {
                    a.add_symbol(sym);
                }
            }
            "states" => {
                for name in words {
                    if a.state_by_name(name).is_some() {
                        return Err(line.error(name, format!("state `{name}` declared twice")));
                    }
                    a.add_state(name);
                }
            }
            "initial" | "final" => {
                let name = words.next().ok_or_else(|| line.error(keyword, "missing state name"))?;
                let q = a
                    .state_by_name(name)
                    .ok_or_else(|| line.error(name, format!("unknown state `{name}`")))?;
                let weight = match words.next() {
                    Some(tok) => parse_ext_real(tok).ok_or_else(|| line.error(tok, "expected a weight"))?,
                    None => a.spec.one(),
                };
                if let Some(extra) = words.next() {
                    return Err(line.error(extra, "unexpected trailing input"));
                }
                let result = if keyword == "initial" {
                    a.set_initial(q, weight)
                } else {
                    a.set_final(q, weight)
                };
                result.map_err(|e| line.error(name, e.to_string()))?;
            }
            "transition" => {
                let (head, expr_text) = content
                    .split_once(':')
                    .ok_or_else(|| line.error(keyword, "expected `transition <src> <symbol> <dst> : <expr>`"))?;
                let parts: Vec<&str> = head.split_whitespace().skip(1).collect();
                let [src, sym, dst] = parts[..] else {
                    return Err(line.error(keyword, "expected `transition <src> <symbol> <dst> : <expr>`"));
                };
                let p = a.state_by_name(src).ok_or_else(|| line.error(src, format!("unknown state `{src}`")))?;
                let q = a.state_by_name(dst).ok_or_else(|| line.error(dst, format!("unknown state `{dst}`")))?;
                if !a.alphabet.contains(sym) {
                    return Err(line.error(sym, format!("symbol `{sym}` is not in the alphabet")));
                }
                let offset = token_column(raw, expr_text) - 1;
                let e = parse_expr(expr_text).map_err(|err| match err {
                    Error::Parse { column, message, .. } => Error::parse(line.number, column + offset, message),
                    other => other,
                })?;
                a.add_transition(p, sym, q, e).map_err(|err| line.error(expr_text.trim(), err.to_string()))?;
            }
            other => return Err(line.error(other, format!("unknown declaration `{other}`"))),
        }
    }

    if !seen_format {
        return Err(Error::parse(1, 1, format!("empty document; expected `format {HEADER}`")));
    }
    Ok(out.unwrap_or_else(|| Wffa::new(spec.unwrap_or_else(SemiringSpec::arctic), Vec::<String>::new())))
}

/// Prints an automaton; [`parse_wffa`] reads the output back to an equal automaton.
pub fn print_wffa(a: &Wffa) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "format {HEADER}");
    let _ = writeln!(s, "semiring {}", a.spec);
    let _ = write!(s, "alphabet");
    for sym in &a.alphabet {
        let _ = write!(s, " {sym}");
    }
    let _ = write!(s, "\nstates");
    for name in &a.states {
        let _ = write!(s, " {name}");
    }
    s.push('\n');
    for (q, w) in &a.initial {
        let _ = writeln!(s, "initial {} {w}", a.states[*q]);
    }
    for (q, w) in &a.finals {
        let _ = writeln!(s, "final {} {w}", a.states[*q]);
    }
    for ((p, sym, q), e) in &a.transitions {
        let _ = writeln!(s, "transition {} {sym} {} : {e}", a.states[*p], a.states[*q]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{ExtReal, FinanceWord};

    const LIMIT: &str = "format wffa/1
semiring arctic nonneg
alphabet a c
states q_w q_e q_c   # waiting, executed, cancelled
initial q_w 0
final q_e 0
transition q_w a q_w : (50 | <<1>>) != 50
transition q_w a q_e : ((<<1>> | 50) = 50) & <<10>>
transition q_e a q_e : 0
transition q_w c q_c : 0
transition q_c a q_c : 0
";

    #[test]
    fn parse_and_round_trip() {
        let a = parse_wffa(LIMIT).unwrap();
        assert_eq!(a.state_count(), 3);
        let w = FinanceWord::from_ints(&[("a", 51), ("a", 53), ("a", 48), ("a", 46)]);
        assert_eq!(a.behavior_matrix(&w).unwrap(), ExtReal::from_int(480));
        let printed = print_wffa(&a);
        let back = parse_wffa(&printed).unwrap();
        assert_eq!(back, a);
        assert_eq!(print_wffa(&back), printed);
    }

    #[test]
    fn errors_are_positioned() {
        let bad = LIMIT.replace("transition q_e a q_e : 0", "transition q_e a q_x : 0");
        match parse_wffa(&bad).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (9, 18)),
            other => panic!("{other:?}"),
        }
        let bad = LIMIT.replace("transition q_c a q_c : 0", "transition q_c a q_c : 0 &");
        match parse_wffa(&bad).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (11, 27)),
            other => panic!("{other:?}"),
        }
        assert!(parse_wffa("states a").is_err());
        assert!(parse_wffa("format wffa/1\nstates q\nbogus q").is_err());
    }
}
