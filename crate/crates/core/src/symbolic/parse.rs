//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus. A minus sign
//! directly in front of a numeric literal (not followed by `^`) yields a
//! negative constant. Exponents are folded to constants. `D(U, x, ...)` is
//! the derivative marker used by PDE residual templates.

use super::expr::{BinaryOp, Expr, UnaryOp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let value = lit
                    .parse::<f64>()
                    .map_err(|_| syntax(start, format!("malformed number `{lit}`")))?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() != Tok::Minus {
            return self.power();
        }
        self.bump();
        if let (Tok::Num(n), next) = (self.peek().clone(), self.peek_at(1)) {
            if *next != Tok::Caret {
                self.bump();
                return Ok(Expr::Const(-n));
            }
        }
        Ok(Expr::unary(UnaryOp::Neg, self.unary()?))
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?.fold_constants();
        match exponent.as_const() {
            Some(e) if e.is_finite() => Ok(Expr::binary(BinaryOp::Pow, base, Expr::Const(e))),
            _ => Err(syntax(at, "exponent must be a finite constant")),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Const(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Var(name));
                }
                self.bump();
                if name == "D" {
                    return self.marker(at);
                }
                let op = UnaryOp::from_name(&name).ok_or(Error::UnknownFunction {
                    name: name.clone(),
                    offset: at,
                })?;
                let arg = self.expr()?;
                if *self.peek() == Tok::Comma {
                    return Err(syntax(self.offset(), format!("`{name}` takes one argument")));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::unary(op, arg))
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => Err(syntax(at, format!("unexpected token {other:?}"))),
        }
    }

    fn marker(&mut self, at: usize) -> Result<Expr> {
        let mut idents = Vec::new();
        loop {
            match self.bump() {
                Tok::Ident(v) => idents.push(v),
                _ => return Err(syntax(self.toks[self.pos - 1].1, "derivative marker expects names")),
            }
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return Err(syntax(self.toks[self.pos - 1].1, "expected `,` or `)`")),
            }
        }
        if idents.len() < 2 {
            return Err(syntax(at, "derivative marker needs a function and at least one variable"));
        }
        let func = idents.remove(0);
        Ok(Expr::Marker { func, wrt: idents })
    }
}

/// Parses `text` into an expression tree without simplification.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn sqrt_action_shape() {
        let e = parse_expr("y + sqrt(t)*y^2").unwrap();
        let expected = Expr::binary(
            BinaryOp::Add,
            v("y"),
            Expr::binary(
                BinaryOp::Mul,
                Expr::unary(UnaryOp::Sqrt, v("t")),
                Expr::binary(BinaryOp::Pow, v("y"), Expr::Const(2.0)),
            ),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn single_variable() {
        assert_eq!(parse_expr("y").unwrap(), v("y"));
    }

    #[test]
    fn reciprocal_shape() {
        let e = parse_expr("1/(y^2+1)").unwrap();
        let expected = Expr::binary(
            BinaryOp::Div,
            Expr::Const(1.0),
            Expr::binary(
                BinaryOp::Add,
                Expr::binary(BinaryOp::Pow, v("y"), Expr::Const(2.0)),
                Expr::Const(1.0),
            ),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence_rules() {
        // unary minus binds looser than ^
        assert_eq!(
            parse_expr("-y^2").unwrap(),
            Expr::unary(UnaryOp::Neg, Expr::binary(BinaryOp::Pow, v("y"), Expr::Const(2.0)))
        );
        // right associative exponent chain folds to a constant exponent
        assert_eq!(
            parse_expr("y^2^3").unwrap(),
            Expr::binary(BinaryOp::Pow, v("y"), Expr::Const(8.0))
        );
        assert_eq!(
            parse_expr("a - b - c").unwrap(),
            Expr::binary(BinaryOp::Sub, Expr::binary(BinaryOp::Sub, v("a"), v("b")), v("c"))
        );
        assert_eq!(parse_expr("-2").unwrap(), Expr::Const(-2.0));
        assert_eq!(
            parse_expr("-2^2").unwrap(),
            Expr::unary(UnaryOp::Neg, Expr::binary(BinaryOp::Pow, Expr::Const(2.0), Expr::Const(2.0)))
        );
        assert_eq!(parse_expr("1.5e-3").unwrap(), Expr::Const(1.5e-3));
    }

    #[test]
    fn markers() {
        assert_eq!(
            parse_expr("D(U,t) - D(U, x, x)").unwrap(),
            Expr::binary(
                BinaryOp::Sub,
                Expr::marker("U", vec!["t".into()]),
                Expr::marker("U", vec!["x".into(), "x".into()])
            )
        );
        assert!(parse_expr("D(U)").is_err());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_expr("y + foo(t)").unwrap_err(),
            Error::UnknownFunction {
                name: "foo".into(),
                offset: 4
            }
        );
        match parse_expr("y + * 2").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 4),
            e => panic!("{e}"),
        }
        match parse_expr("(y + 1").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 6),
            e => panic!("{e}"),
        }
        assert!(matches!(parse_expr("y^t"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("sin(1, 2)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("y $ 2"), Err(Error::Syntax { offset: 2, .. })));
        assert!(parse_expr("").is_err());
        assert!(parse_expr("y y").is_err());
    }
}
