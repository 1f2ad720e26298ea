//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 't' | 'u' | 'p' | 'inf' | func '(' args ')' | '(' expr ')'
//! cond    := expr ('<' | '<=' | '>' | '>=' | '=') expr
//! piecewise(cond, expr, [cond, expr, ...] expr)
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-u^2`
//! is `-(u^2)`. A minus directly in front of a numeric literal folds into
//! the literal.

use super::ast::{BinOp, CmpOp, Condition, Expr, Func, Var};
use super::{ExtReal, ParseError};

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
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Cmp(_) => "comparison".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
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
            b'<' | b'>' | b'=' => {
                let eq_follows = bytes.get(i + 1) == Some(&b'=');
                let op = match (c, eq_follows) {
                    (b'<', true) => CmpOp::Le,
                    (b'<', false) => CmpOp::Lt,
                    (b'>', true) => CmpOp::Ge,
                    (b'>', false) => CmpOp::Gt,
                    _ => CmpOp::Eq,
                };
                if eq_follows {
                    i += 1;
                }
                Tok::Cmp(op)
            }
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let text = &src[i..j];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: vec!["number".into()],
                    found: format!("`{text}`"),
                })?;
                i = j;
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((start, Tok::Ident(src[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["expression".into()],
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

enum Arg {
    Expr(Expr),
    Cond(Condition),
}

const OPERAND: &[&str] = &["number", "identifier", "`(`", "`-`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(ExtReal::Finite(x)) => Expr::Const(ExtReal::Finite(-x)),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::num(x))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "t" => Ok(Expr::Var(Var::T)),
                    "u" => Ok(Expr::Var(Var::U)),
                    "p" => Ok(Expr::Var(Var::P)),
                    "inf" => Ok(Expr::Const(ExtReal::PosInf)),
                    "piecewise" => self.piecewise(offset),
                    other => match Func::from_name(other) {
                        Some(func) => self.call(func, offset),
                        None => Err(ParseError::UnknownIdentifier {
                            offset,
                            name: other.to_string(),
                        }),
                    },
                }
            }
            _ => Err(self.error(OPERAND)),
        }
    }

    fn args(&mut self) -> Result<Vec<(usize, Arg)>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            let at = self.offset();
            let lhs = self.expr()?;
            let arg = if let Tok::Cmp(op) = *self.peek() {
                self.bump();
                let rhs = self.expr()?;
                Arg::Cond(Condition { lhs, op, rhs })
            } else {
                Arg::Expr(lhs)
            };
            args.push((at, arg));
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.error(&["`,`", "`)`", "operator"])),
            }
        }
    }

    fn call(&mut self, func: Func, offset: usize) -> Result<Expr, ParseError> {
        let raw = self.args()?;
        if !func.accepts(raw.len()) {
            return Err(ParseError::Arity {
                offset,
                name: func.name().to_string(),
                found: raw.len(),
            });
        }
        let mut args = Vec::with_capacity(raw.len());
        for (at, arg) in raw {
            match arg {
                Arg::Expr(e) => args.push(e),
                Arg::Cond(_) => {
                    return Err(ParseError::MisplacedCondition { offset: at });
                }
            }
        }
        Ok(Expr::call(func, args))
    }

    fn piecewise(&mut self, offset: usize) -> Result<Expr, ParseError> {
        let raw = self.args()?;
        if raw.len() < 3 || raw.len() % 2 == 0 {
            return Err(ParseError::Arity {
                offset,
                name: "piecewise".into(),
                found: raw.len(),
            });
        }
        let mut branches = Vec::new();
        let mut iter = raw.into_iter();
        let last = iter.len() - 1;
        let mut pending: Option<Condition> = None;
        for (i, (at, arg)) in iter.by_ref().enumerate() {
            let want_cond = i < last && i % 2 == 0;
            match (arg, want_cond) {
                (Arg::Cond(c), true) => pending = Some(c),
                (Arg::Expr(e), false) => match pending.take() {
                    Some(c) => branches.push((c, e)),
                    None => {
                        return Ok(Expr::Piecewise {
                            branches,
                            otherwise: Box::new(e),
                        })
                    }
                },
                (Arg::Expr(_), true) => {
                    return Err(ParseError::Syntax {
                        offset: at,
                        expected: vec!["condition".into()],
                        found: "expression".into(),
                    })
                }
                (Arg::Cond(_), false) => {
                    return Err(ParseError::MisplacedCondition { offset: at })
                }
            }
        }
        unreachable!("odd argument count always ends with the otherwise branch")
    }
}

/// Parses a scalar expression in `t`, `u` and `p`.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}
