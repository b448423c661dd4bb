//! Concrete syntax for regular expressions.
//!
//! ```text
//! sum     := cat ("|" cat)*
//! cat     := postfix ("." postfix)*
//! postfix := atom "*"*
//! atom    := "eps[" literal "]" | symbol "[" expr "]" | "(" sum ")"
//! ```
//!
//! Symbols are identifiers (`[A-Za-z_][A-Za-z0-9_]*`) other than `eps`.

use super::Regex;
use crate::error::Result;
use crate::text::Cursor;

pub fn parse_regex(text: &str) -> Result<Regex> {
    let mut cur = Cursor::new(text);
    let r = sum(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(r)
}

fn sum(cur: &mut Cursor) -> Result<Regex> {
    let mut acc = cat(cur)?;
    while cur.eat("|") {
        acc = Regex::sum(acc, cat(cur)?);
    }
    Ok(acc)
}

fn cat(cur: &mut Cursor) -> Result<Regex> {
    let mut acc = postfix(cur)?;
    while cur.eat(".") {
        acc = Regex::cauchy(acc, postfix(cur)?);
    }
    Ok(acc)
}

fn postfix(cur: &mut Cursor) -> Result<Regex> {
    let mut r = atom(cur)?;
    while cur.eat("*") {
        r = Regex::star(r);
    }
    Ok(r)
}

fn atom(cur: &mut Cursor) -> Result<Regex> {
    if cur.eat("(") {
        let r = sum(cur)?;
        cur.expect(")")?;
        return Ok(r);
    }
    match cur.peek() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return Err(cur.error("expected a symbol, `eps[`, or `(`")),
    }
    let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
    cur.expect("[")?;
    let r = if name == "eps" {
        Regex::EpsAtom(cur.literal()?)
    } else {
        Regex::LetterAtom(name.to_string(), cur.expr()?)
    };
    cur.expect("]")?;
    Ok(r)
}

/// Prints with the minimal parentheses needed to parse back to the same tree.
pub fn print_regex(r: &Regex) -> String {
    let mut out = String::new();
    write(r, 0, &mut out);
    out
}

/// `ctx`: 0 = anywhere, 1 = operand of `.` (right side needs > 1), 2 = operand of `*`.
fn write(r: &Regex, ctx: u8, out: &mut String) {
    let level = match r {
        Regex::Sum(..) => 0,
        Regex::Cauchy(..) => 1,
        _ => 2,
    };
    let wrap = level < ctx;
    if wrap {
        out.push('(');
    }
    match r {
        Regex::EpsAtom(s) => out.push_str(&format!("eps[{s}]")),
        Regex::LetterAtom(a, e) => out.push_str(&format!("{a}[{e}]")),
        Regex::Sum(l, rr) => {
            write(l, 0, out);
            out.push_str(" | ");
            write(rr, 1, out);
        }
        Regex::Cauchy(l, rr) => {
            write(l, 1, out);
            out.push_str(" . ");
            write(rr, 2, out);
        }
        Regex::Star(c) => {
            write(c, 2, out);
            out.push('*');
        }
    }
    if wrap {
        out.push(')');
    }
}
