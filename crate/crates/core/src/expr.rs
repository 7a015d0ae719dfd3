//! A small arithmetic language for custom weights `f(D, di, dj)`.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := unary ("^" factor)?
//! unary  := "-" unary | atom
//! atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Variables: `D`, `di`, `dj`, `n`, `p`, `diam`.
//! Functions: `sqrt/1`, `abs/1`, `min/2`, `max/2`, `log/1`, `exp/1`, `eq/2`.

use std::fmt;

use crate::error::{EvalError, WeightSpecError};
use crate::weights::WeightContext;

/// Tolerance used by `eq(a, b)`.
pub const EQ_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Distance,
    DegreeI,
    DegreeJ,
    Order,
    Probability,
    Diameter,
}

impl Var {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "D" => Self::Distance,
            "di" => Self::DegreeI,
            "dj" => Self::DegreeJ,
            "n" => Self::Order,
            "p" => Self::Probability,
            "diam" => Self::Diameter,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Distance => "D",
            Self::DegreeI => "di",
            Self::DegreeJ => "dj",
            Self::Order => "n",
            Self::Probability => "p",
            Self::Diameter => "diam",
        }
    }

    fn value(self, ctx: &WeightContext) -> f64 {
        match self {
            Self::Distance => f64::from(ctx.distance),
            Self::DegreeI => ctx.di,
            Self::DegreeJ => ctx.dj,
            Self::Order => ctx.n as f64,
            Self::Probability => ctx.p,
            Self::Diameter => f64::from(ctx.diam),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Abs,
    Min,
    Max,
    Log,
    Exp,
    Eq,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Self::Sqrt,
            "abs" => Self::Abs,
            "min" => Self::Min,
            "max" => Self::Max,
            "log" => Self::Log,
            "exp" => Self::Exp,
            "eq" => Self::Eq,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sqrt => "sqrt",
            Self::Abs => "abs",
            Self::Min => "min",
            Self::Max => "max",
            Self::Log => "log",
            Self::Exp => "exp",
            Self::Eq => "eq",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::Min | Self::Max | Self::Eq => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            Self::Add => '+',
            Self::Sub => '-',
            Self::Mul => '*',
            Self::Div => '/',
            Self::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

// Binding strength used by the printer; higher binds tighter.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_POWER: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn parse(src: &str) -> Result<Self, WeightSpecError> {
        let tokens = tokenize(src)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: src.len(),
        };
        let expr = parser.expr()?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(syntax(tok.offset, format!("unexpected {}", tok.kind))),
        }
    }

    pub fn eval(&self, ctx: &WeightContext) -> Result<f64, EvalError> {
        let value = self.eval_inner(ctx)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_inner(&self, ctx: &WeightContext) -> Result<f64, EvalError> {
        Ok(match self {
            Self::Num(v) => *v,
            Self::Var(v) => v.value(ctx),
            Self::Neg(e) => -e.eval_inner(ctx)?,
            Self::Binary(op, l, r) => {
                let (a, b) = (l.eval_inner(ctx)?, r.eval_inner(ctx)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => checked_div(a, b)?,
                    BinOp::Pow => a.powf(b),
                }
            }
            Self::Call(func, args) => {
                let a = args[0].eval_inner(ctx)?;
                match func {
                    Func::Sqrt if a < 0.0 => return Err(EvalError::NegativeSqrt(a)),
                    Func::Sqrt => a.sqrt(),
                    Func::Abs => a.abs(),
                    Func::Log if a <= 0.0 => return Err(EvalError::NonPositiveLog(a)),
                    Func::Log => a.ln(),
                    Func::Exp => a.exp(),
                    Func::Min => a.min(args[1].eval_inner(ctx)?),
                    Func::Max => a.max(args[1].eval_inner(ctx)?),
                    Func::Eq => indicator_eq(a, args[1].eval_inner(ctx)?),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Self::Num(_) | Self::Var(_) | Self::Call(..) => PREC_ATOM,
            Self::Neg(_) => PREC_UNARY,
            Self::Binary(BinOp::Pow, ..) => PREC_POWER,
            Self::Binary(BinOp::Mul | BinOp::Div, ..) => PREC_PRODUCT,
            Self::Binary(BinOp::Add | BinOp::Sub, ..) => PREC_SUM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Self::Num(v) => write!(f, "{v}"),
            Self::Var(v) => f.write_str(v.name()),
            Self::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, PREC_UNARY)
            }
            Self::Binary(op, l, r) => {
                let (lp, rp) = match op {
                    BinOp::Add | BinOp::Sub => (PREC_SUM, PREC_PRODUCT),
                    BinOp::Mul | BinOp::Div => (PREC_PRODUCT, PREC_POWER),
                    BinOp::Pow => (PREC_UNARY, PREC_POWER),
                };
                l.write_at(f, lp)?;
                write!(f, "{}", op.symbol())?;
                r.write_at(f, rp)
            }
            Self::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, arg) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    arg.write_at(f, 0)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[inline]
pub(crate) fn checked_div(a: f64, b: f64) -> Result<f64, EvalError> {
    if b == 0.0 {
        Err(EvalError::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

#[inline]
pub(crate) fn indicator_eq(a: f64, b: f64) -> f64 {
    if (a - b).abs() <= EQ_TOLERANCE {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Num(v) => write!(f, "number {v}"),
            Self::Ident(s) => write!(f, "identifier `{s}`"),
            Self::Op(c) => write!(f, "`{c}`"),
            Self::LParen => f.write_str("`(`"),
            Self::RParen => f.write_str("`)`"),
            Self::Comma => f.write_str("`,`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> WeightSpecError {
    WeightSpecError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>, WeightSpecError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                i += 1;
                TokenKind::Op(c as char)
            }
            b'(' => {
                i += 1;
                TokenKind::LParen
            }
            b')' => {
                i += 1;
                TokenKind::RParen
            }
            b',' => {
                i += 1;
                TokenKind::Comma
            }
            b'0'..=b'9' => {
                i = scan_number(bytes, i)?;
                let value: f64 = src[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "malformed number"))?;
                if !value.is_finite() {
                    return Err(syntax(start, "number out of range"));
                }
                TokenKind::Num(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                TokenKind::Ident(src[start..i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        tokens.push(Token {
            kind,
            offset: start,
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> Result<usize, WeightSpecError> {
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    digits(&mut i);
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return Err(syntax(i, "expected digits after decimal point"));
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return Err(syntax(i, "expected exponent digits"));
        }
    }
    Ok(i)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        tok
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), WeightSpecError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(syntax(
                tok.offset,
                format!("expected {what}, found {}", tok.kind),
            )),
            None => Err(syntax(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr, WeightSpecError> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, WeightSpecError> {
        let mut lhs = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, WeightSpecError> {
        let base = self.unary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, WeightSpecError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, WeightSpecError> {
        let offset = self.here();
        let Some(tok) = self.next() else {
            return Err(syntax(offset, "unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Num(v) => Ok(Expr::Num(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                let is_call = matches!(
                    self.peek(),
                    Some(Token {
                        kind: TokenKind::LParen,
                        ..
                    })
                );
                if !is_call {
                    return Var::from_name(&name)
                        .map(Expr::Var)
                        .ok_or(WeightSpecError::UnknownIdentifier { name, offset });
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(WeightSpecError::UnknownIdentifier { name, offset });
                };
                self.pos += 1;
                let mut args = vec![self.expr()?];
                while let Some(TokenKind::Comma) = self.peek().map(|t| &t.kind) {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(TokenKind::RParen, "`,` or `)`")?;
                if args.len() != func.arity() {
                    return Err(WeightSpecError::WrongArity {
                        name,
                        offset,
                        expected: func.arity(),
                        got: args.len(),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            other => Err(syntax(tok.offset, format!("unexpected {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(distance: u32, di: f64, dj: f64) -> WeightContext {
        WeightContext {
            distance,
            di,
            dj,
            n: 10,
            diam: 2,
            p: 0.5,
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let c = ctx(2, 3.0, 5.0);
        let eval = |s: &str| Expr::parse(s).unwrap().eval(&c).unwrap();
        assert_eq!(eval("1+2*3"), 7.0);
        assert_eq!(eval("(1+2)*3"), 9.0);
        assert_eq!(eval("2^3^2"), 512.0);
        assert_eq!(eval("-2^2"), 4.0);
        assert_eq!(eval("2^-1"), 0.5);
        assert_eq!(eval("8/4/2"), 1.0);
        assert_eq!(eval("10-3-2"), 5.0);
        assert_eq!(eval("min(di,dj)+max(di,dj)"), 8.0);
        assert_eq!(eval("1.5e1 + 2E-1"), 15.2);
        assert_eq!(eval("eq(D, 2)"), 1.0);
        assert_eq!(eval("n*p + diam"), 7.0);
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let err = Expr::parse("D +").unwrap_err();
        assert_eq!(err.offset(), Some(3));
        assert!(matches!(err, WeightSpecError::Syntax { .. }));

        assert_eq!(Expr::parse("(D").unwrap_err().offset(), Some(2));
        assert_eq!(Expr::parse("D D").unwrap_err().offset(), Some(2));
        assert_eq!(Expr::parse("D $ 1").unwrap_err().offset(), Some(2));
        assert_eq!(Expr::parse("").unwrap_err().offset(), Some(0));
        assert_eq!(Expr::parse("1.").unwrap_err().offset(), Some(2));
    }

    #[test]
    fn identifier_and_arity_errors() {
        assert!(matches!(
            Expr::parse("x + 1"),
            Err(WeightSpecError::UnknownIdentifier { ref name, offset: 0 }) if name == "x"
        ));
        assert!(matches!(
            Expr::parse("2*foo(D)"),
            Err(WeightSpecError::UnknownIdentifier { offset: 2, .. })
        ));
        assert!(matches!(
            Expr::parse("min(D)"),
            Err(WeightSpecError::WrongArity {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(
            Expr::parse("sqrt(D, di)"),
            Err(WeightSpecError::WrongArity { .. })
        ));
    }

    #[test]
    fn evaluation_errors() {
        let c = ctx(1, 0.0, 0.0);
        let eval = |s: &str| Expr::parse(s).unwrap().eval(&c);
        assert_eq!(eval("1/(D-1)"), Err(EvalError::DivisionByZero));
        assert_eq!(eval("sqrt(-D)"), Err(EvalError::NegativeSqrt(-1.0)));
        assert_eq!(eval("log(di)"), Err(EvalError::NonPositiveLog(0.0)));
        assert_eq!(eval("exp(1000)"), Err(EvalError::NonFinite));
        assert_eq!(eval("eq(D,1)*(di+dj)"), Ok(0.0));
    }

    #[test]
    fn printer_inserts_needed_parentheses() {
        for (src, printed) in [
            ("(di+dj)*D", "(di+dj)*D"),
            ("1/(diam+1-D)", "1/(diam+1-D)"),
            ("-(D^2)", "-(D^2)"),
            ("(-D)^2", "-D^2"),
            ("(2^3)^2", "(2^3)^2"),
            ("2^(3^2)", "2^3^2"),
            ("D-(di-dj)", "D-(di-dj)"),
            ("D/(di*dj)", "D/(di*dj)"),
            ("--D", "--D"),
        ] {
            assert_eq!(Expr::parse(src).unwrap().to_string(), printed, "{src}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000, 0u32..4).prop_map(|(m, e)| Expr::Num(f64::from(m) / 10f64.powi(e as i32))),
            prop_oneof![
                Just(Var::Distance),
                Just(Var::DegreeI),
                Just(Var::DegreeJ),
                Just(Var::Order),
                Just(Var::Probability),
                Just(Var::Diameter),
            ]
            .prop_map(Expr::Var),
        ];
        leaf.prop_recursive(5, 40, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow),
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| Expr::Binary(
                        op,
                        Box::new(l),
                        Box::new(r)
                    )),
                inner.clone().prop_map(|e| Expr::Call(Func::Sqrt, vec![e])),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Eq, vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e, "printed as {}", printed);
        }
    }
}
