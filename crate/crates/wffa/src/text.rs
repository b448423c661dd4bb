//! Concrete syntax for expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product ("|" product)*
//! product := compare ("&" compare)*
//! compare := atom (("=" | "!=") atom)?
//! atom    := literal | "<<" literal ">>" | "(" sum ")"
//! literal := "-inf" | "+inf" | "inf" | [+-]? decimal ("/" decimal)?
//! ```

use crate::error::{Error, Result};
use crate::expr::FExpr;
use crate::semiring::{parse_ext_real, ExtReal};

/// A position-tracking reader shared by the expression and regex parsers.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Consumes `token` if the remaining input starts with it.
    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    /// Consumes characters while `pred` holds.
    pub(crate) fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        let found = match self.rest().chars().next() {
            Some(c) => format!(" (found `{c}`)"),
            None => " (found end of input)".to_string(),
        };
        Error::parse(line, column, format!("{}{found}", message.into()))
    }

    pub(crate) fn literal(&mut self) -> Result<ExtReal> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        if rest.starts_with(['-', '+']) {
            len = 1;
        }
        let body = &rest[len..];
        if body.starts_with("inf") {
            len += 3;
        } else {
            len += body
                .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '/'))
                .unwrap_or(body.len());
        }
        let text = &rest[..len];
        match parse_ext_real(text) {
            Some(v) if !text.is_empty() => {
                self.pos += len;
                Ok(v)
            }
            _ => {
                self.pos = start;
                Err(self.error("expected a number"))
            }
        }
    }

    pub(crate) fn expr(&mut self) -> Result<FExpr> {
        let mut acc = self.product()?;
        while self.peek() == Some('|') {
            self.eat("|");
            let rhs = self.product()?;
            acc = FExpr::plus(acc, rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<FExpr> {
        let mut acc = self.compare()?;
        while self.peek() == Some('&') {
            self.eat("&");
            let rhs = self.compare()?;
            acc = FExpr::times(acc, rhs);
        }
        Ok(acc)
    }

    fn compare(&mut self) -> Result<FExpr> {
        let lhs = self.atom()?;
        let node = if self.eat("!=") {
            FExpr::neq(lhs, self.atom()?)
        } else if self.eat("=") {
            FExpr::eq(lhs, self.atom()?)
        } else {
            return Ok(lhs);
        };
        if matches!(self.peek(), Some('=')) || self.rest().starts_with("!=") {
            return Err(self.error("comparisons do not chain; add parentheses"));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<FExpr> {
        if self.eat("<<") {
            let s = self.literal()?;
            self.expect(">>")?;
            Ok(FExpr::Bind(s))
        } else if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            Ok(e)
        } else {
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' || c == 'i' => {
                    Ok(FExpr::Const(self.literal()?))
                }
                _ => Err(self.error("expected a number, `<<`, or `(`")),
            }
        }
    }
}

/// Parses an expression.
pub fn parse_expr(text: &str) -> Result<FExpr> {
    let mut cur = Cursor::new(text);
    let e = cur.expr()?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Prints an expression with the minimal parentheses needed to parse it back identically.
pub fn print_expr(e: &FExpr) -> String {
    let mut out = String::new();
    write_expr(e, 0, &mut out);
    out
}

fn write_expr(e: &FExpr, ctx: u8, out: &mut String) {
    let (level, l, r, op, left_ctx, right_ctx) = match e {
        FExpr::Const(s) => {
            out.push_str(&s.to_string());
            return;
        }
        FExpr::Bind(s) => {
            out.push_str(&format!("<<{s}>>"));
            return;
        }
        FExpr::Plus(l, r) => (0, l, r, " | ", 0, 1),
        FExpr::Times(l, r) => (1, l, r, " & ", 1, 2),
        FExpr::Eq(l, r) => (2, l, r, " = ", 3, 3),
        FExpr::Neq(l, r) => (2, l, r, " != ", 3, 3),
    };
    let wrap = ctx > level;
    if wrap {
        out.push('(');
    }
    write_expr(l, left_ctx, out);
    out.push_str(op);
    write_expr(r, right_ctx, out);
    if wrap {
        out.push(')');
    }
}

impl std::fmt::Display for FExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_expr(self))
    }
}

impl std::str::FromStr for FExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_expr("<<1>> & -50").unwrap(),
            FExpr::times(FExpr::bind(1), FExpr::constant(-50))
        );
        assert_eq!(
            parse_expr("(<<1>> | 0) = 0").unwrap(),
            FExpr::eq(FExpr::plus(FExpr::bind(1), FExpr::constant(0)), FExpr::constant(0))
        );
        assert_eq!(parse_expr("-inf").unwrap(), FExpr::Const(ExtReal::NegInf));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1 | 2 & 3 | 4").unwrap();
        let expected = FExpr::plus(
            FExpr::plus(FExpr::constant(1), FExpr::times(FExpr::constant(2), FExpr::constant(3))),
            FExpr::constant(4),
        );
        assert_eq!(e, expected);
        let right = FExpr::plus(FExpr::constant(1), FExpr::plus(FExpr::constant(2), FExpr::constant(3)));
        assert_eq!(print_expr(&right), "1 | (2 | 3)");
        assert_eq!(parse_expr(&print_expr(&right)).unwrap(), right);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("<<1>> & ").unwrap_err() {
            Error::Parse { column, .. } => assert_eq!(column, 9),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("1 = 2 = 3").is_err());
        assert!(parse_expr("(1 | 2").is_err());
        assert!(parse_expr("1 2").is_err());
        assert!(parse_expr("<<x>>").is_err());
    }

    #[test]
    fn nested_comparisons_print_with_parentheses() {
        let e = FExpr::eq(FExpr::neq(FExpr::bind(1), FExpr::constant(2)), FExpr::constant(0));
        let text = print_expr(&e);
        assert_eq!(text, "(<<1>> != 2) = 0");
        assert_eq!(parse_expr(&text).unwrap(), e);
    }
}
