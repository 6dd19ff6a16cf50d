//! A small expression language over multivectors.
//!
//! ```text
//! expr    := expr ('+' | '-') expr                 all binaries left-assoc; lowest
//!          | expr ('<|' | '|>') expr
//!          | expr '*' expr
//!          | expr '^' expr
//!          | '-' expr                              highest
//!          | number | e<k> | name '(' args ')' | '(' expr ')'
//! ```
//!
//! `^` is an operator, so blade literals such as `e0^e2` are expressions.
//! A number immediately followed by `e<digits>` is read as an exponent:
//! `2e1` is twenty; write `2*e1` for the scaled basis vector.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::blades::{BladeId, MAX_DIMENSION};
use crate::error::{Error, ParseError, Result};
use crate::frames::Frame;
use crate::maps::{self, Representation, Versor};
use crate::multivector::{format_real, Multivector};
use crate::products;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Gp,
    Outer,
    LeftContraction,
    RightContraction,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Outer => 4,
            BinOp::Gp => 3,
            BinOp::LeftContraction | BinOp::RightContraction => 2,
            BinOp::Add | BinOp::Sub => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Gp => "*",
            BinOp::Outer => "^",
            BinOp::LeftContraction => "<|",
            BinOp::RightContraction => "|>",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Rev,
    Gi,
    Inv,
    Dual,
    Undual,
    GradePart,
    Even,
    Odd,
    Sp,
    Fdot,
    Hip,
    Cp,
    Acp,
    Rp,
    Norm,
    Mag,
    Proj,
    Refl,
    Vp,
    Cross,
}

impl Func {
    pub const ALL: [Func; 20] = [
        Func::Rev,
        Func::Gi,
        Func::Inv,
        Func::Dual,
        Func::Undual,
        Func::GradePart,
        Func::Even,
        Func::Odd,
        Func::Sp,
        Func::Fdot,
        Func::Hip,
        Func::Cp,
        Func::Acp,
        Func::Rp,
        Func::Norm,
        Func::Mag,
        Func::Proj,
        Func::Refl,
        Func::Vp,
        Func::Cross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Rev => "rev",
            Func::Gi => "gi",
            Func::Inv => "inv",
            Func::Dual => "dual",
            Func::Undual => "undual",
            Func::GradePart => "gradepart",
            Func::Even => "even",
            Func::Odd => "odd",
            Func::Sp => "sp",
            Func::Fdot => "fdot",
            Func::Hip => "hip",
            Func::Cp => "cp",
            Func::Acp => "acp",
            Func::Rp => "rp",
            Func::Norm => "norm",
            Func::Mag => "mag",
            Func::Proj => "proj",
            Func::Refl => "refl",
            Func::Vp => "vp",
            Func::Cross => "cross",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Inclusive range of accepted argument counts.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Func::Rev | Func::Gi | Func::Inv | Func::Even | Func::Odd | Func::Norm | Func::Mag => (1, 1),
            Func::Dual | Func::Undual => (1, 2),
            Func::Refl => (4, 4),
            _ => (2, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Basis(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    /// `d` or `u` in the last two arguments of `refl`.
    Rep(Representation),
}

/// A parsed expression node with its byte span in the source text.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Range<usize>,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(BinOp),
    Minus,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number `{}`", format_real(*x)),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(op) => format!("`{}`", op.symbol()),
            Tok::Minus => "`-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn peek_byte(&self, at: usize) -> Option<u8> {
        self.bytes().get(at).copied()
    }

    fn error(&self, offset: usize, expected: &[&str], found: String) -> ParseError {
        ParseError { offset, expected: expected.iter().map(|s| s.to_string()).collect(), found }
    }

    fn next(&mut self) -> std::result::Result<(Tok, Range<usize>), ParseError> {
        while self.peek_byte(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(b) = self.peek_byte(start) else {
            return Ok((Tok::End, start..start));
        };
        let one = |t: Tok, lx: &mut Self| {
            lx.pos += 1;
            Ok((t, start..start + 1))
        };
        match b {
            b'+' => one(Tok::Op(BinOp::Add), self),
            b'-' => one(Tok::Minus, self),
            b'*' => one(Tok::Op(BinOp::Gp), self),
            b'^' => one(Tok::Op(BinOp::Outer), self),
            b'(' => one(Tok::LParen, self),
            b')' => one(Tok::RParen, self),
            b',' => one(Tok::Comma, self),
            b'<' | b'|' => {
                let (want, op) =
                    if b == b'<' { (b'|', BinOp::LeftContraction) } else { (b'>', BinOp::RightContraction) };
                if self.peek_byte(start + 1) == Some(want) {
                    self.pos += 2;
                    Ok((Tok::Op(op), start..start + 2))
                } else {
                    let tok = if b == b'<' { "<|" } else { "|>" };
                    Err(self.error(start, &[tok], self.found_at(start)))
                }
            }
            b'0'..=b'9' | b'.' => self.number(start),
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let mut end = start;
                while self.peek_byte(end).is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    end += 1;
                }
                self.pos = end;
                Ok((Tok::Ident(self.src[start..end].to_string()), start..end))
            }
            _ => Err(self.error(start, &["expression"], self.found_at(start))),
        }
    }

    fn found_at(&self, at: usize) -> String {
        match self.src[at..].chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        }
    }

    fn number(&mut self, start: usize) -> std::result::Result<(Tok, Range<usize>), ParseError> {
        let digits = |lx: &Self, mut at: usize| {
            while lx.peek_byte(at).is_some_and(|c| c.is_ascii_digit()) {
                at += 1;
            }
            at
        };
        let mut end = digits(self, start);
        let int_digits = end - start;
        let mut frac_digits = 0;
        if self.peek_byte(end) == Some(b'.') {
            let after = digits(self, end + 1);
            frac_digits = after - end - 1;
            end = after;
        }
        if int_digits == 0 && frac_digits == 0 {
            return Err(self.error(start, &["digit"], self.found_at(start + 1)));
        }
        if matches!(self.peek_byte(end), Some(b'e' | b'E')) {
            let mut at = end + 1;
            if matches!(self.peek_byte(at), Some(b'+' | b'-')) {
                at += 1;
            }
            if self.peek_byte(at).is_some_and(|c| c.is_ascii_digit()) {
                end = digits(self, at);
            }
        }
        let value: f64 = self.src[start..end]
            .parse()
            .map_err(|_| self.error(start, &["number"], format!("`{}`", &self.src[start..end])))?;
        if !value.is_finite() {
            return Err(self.error(start, &["finite number"], format!("`{}`", &self.src[start..end])));
        }
        self.pos = end;
        Ok((Tok::Num(value), start..end))
    }
}

/// Where an operand may end; decides the expected set reported after it.
#[derive(Clone, Copy)]
enum Closer {
    Top,
    Paren,
    Args,
}

impl Closer {
    fn tokens(self) -> &'static [&'static str] {
        match self {
            Closer::Top => &["end of input"],
            Closer::Paren => &[")"],
            Closer::Args => &[",", ")"],
        }
    }
}

const OPERAND: [&str; 5] = ["number", "basis blade", "function call", "(", "-"];
const OPERATORS: [&str; 6] = ["+", "-", "*", "^", "<|", "|>"];

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    span: Range<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, span) = lexer.next()?;
        Ok(Parser { lexer, tok, span })
    }

    fn advance(&mut self) -> Result<(Tok, Range<usize>)> {
        let (tok, span) = self.lexer.next()?;
        Ok((std::mem::replace(&mut self.tok, tok), std::mem::replace(&mut self.span, span)))
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        ParseError {
            offset: self.span.start,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.tok.describe(),
        }
        .into()
    }

    fn binary_op(&self) -> Option<BinOp> {
        match self.tok {
            Tok::Op(op) => Some(op),
            Tok::Minus => Some(BinOp::Sub),
            _ => None,
        }
    }

    fn expression(&mut self, min_prec: u8) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.advance()?;
            let rhs = self.expression(prec + 1)?;
            let span = lhs.span.start..rhs.span.end;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            let (_, span) = self.advance()?;
            let inner = self.unary()?;
            let span = span.start..inner.span.end;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(x) => {
                let (_, span) = self.advance()?;
                Ok(Expr { kind: ExprKind::Number(x), span })
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expression(1)?;
                if self.tok != Tok::RParen {
                    return Err(self.after_operand(Closer::Paren));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let (_, span) = self.advance()?;
                if let Some(k) = basis_index(&name) {
                    return Ok(Expr { kind: ExprKind::Basis(k), span });
                }
                if self.tok != Tok::LParen {
                    return match Func::from_name(&name) {
                        Some(_) => Err(self.unexpected(&["("])),
                        None => Err(Error::UnknownFunction { name, offset: span.start }),
                    };
                }
                let func = Func::from_name(&name)
                    .ok_or_else(|| Error::UnknownFunction { name: name.clone(), offset: span.start })?;
                self.call(func, span)
            }
            _ => Err(self.unexpected(&OPERAND)),
        }
    }

    fn call(&mut self, func: Func, name_span: Range<usize>) -> Result<Expr> {
        self.advance()?;
        let mut args = Vec::new();
        if self.tok != Tok::RParen {
            loop {
                let arg =
                    if func == Func::Refl && args.len() >= 2 { self.representation()? } else { self.expression(1)? };
                args.push(arg);
                match self.tok {
                    Tok::Comma => {
                        self.advance()?;
                    }
                    Tok::RParen => break,
                    _ => return Err(self.after_operand(Closer::Args)),
                }
            }
        }
        let (_, close) = self.advance()?;
        let (lo, hi) = func.arity();
        if args.len() < lo || args.len() > hi {
            let expected = if lo == hi { lo.to_string() } else { format!("{lo} or {hi}") };
            return Err(Error::Arity {
                name: func.name().into(),
                offset: name_span.start,
                expected,
                found: args.len(),
            });
        }
        Ok(Expr { kind: ExprKind::Call(func, args), span: name_span.start..close.end })
    }

    fn representation(&mut self) -> Result<Expr> {
        if let Tok::Ident(s) = &self.tok {
            if let Some(rep) = Representation::from_token(s) {
                let (_, span) = self.advance()?;
                return Ok(Expr { kind: ExprKind::Rep(rep), span });
            }
        }
        Err(self.unexpected(&["d", "u"]))
    }

    fn after_operand(&self, closer: Closer) -> Error {
        let mut expected: Vec<&str> = OPERATORS.to_vec();
        expected.extend_from_slice(closer.tokens());
        self.unexpected(&expected)
    }
}

fn basis_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // indices past the largest supported dimension are rejected at eval time
    Some(digits.parse().unwrap_or(usize::MAX))
}

pub fn parse_expression(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let expr = p.expression(1)?;
    if p.tok != Tok::End {
        return Err(p.after_operand(Closer::Top));
    }
    Ok(expr)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(x) => write!(f, "{}", format_real(*x)),
            ExprKind::Basis(k) => write!(f, "e{k}"),
            ExprKind::Rep(Representation::Direct) => write!(f, "u"),
            ExprKind::Rep(Representation::Dual) => write!(f, "d"),
            ExprKind::Neg(inner) => match inner.kind {
                ExprKind::Binary(..) => write!(f, "-({inner})"),
                _ => write!(f, "-{inner}"),
            },
            ExprKind::Binary(op, l, r) => {
                let prec = op.precedence();
                let wrap = |e: &Expr, strict: bool| match &e.kind {
                    ExprKind::Binary(o, ..) if o.precedence() < prec || (strict && o.precedence() == prec) => {
                        format!("({e})")
                    }
                    _ => e.to_string(),
                };
                write!(f, "{} {} {}", wrap(l, false), op.symbol(), wrap(r, true))
            }
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Evaluates an expression in a frame. Failures carry the text of the
/// innermost sub-expression that raised them.
pub fn eval(expr: &Expr, frame: &Arc<Frame>) -> Result<Multivector> {
    eval_node(expr, frame).map_err(|e| match e {
        Error::Eval { .. } => e,
        other => Error::Eval { expr: expr.to_string(), source: Box::new(other) },
    })
}

fn eval_node(expr: &Expr, frame: &Arc<Frame>) -> Result<Multivector> {
    let ev = |e: &Expr| eval(e, frame);
    match &expr.kind {
        ExprKind::Number(x) => Ok(Multivector::scalar(frame, *x)),
        ExprKind::Basis(k) => {
            if *k >= frame.dimension().min(MAX_DIMENSION) {
                return Err(Error::domain(format!(
                    "basis vector e{k} is out of range for dimension {}",
                    frame.dimension()
                )));
            }
            Multivector::blade(frame, BladeId::vector(*k), 1.0)
        }
        ExprKind::Rep(_) => Err(Error::domain("`d`/`u` are only valid as refl arguments")),
        ExprKind::Neg(inner) => Ok(ev(inner)?.neg()),
        ExprKind::Binary(op, l, r) => {
            let (x, y) = (ev(l)?, ev(r)?);
            match op {
                BinOp::Add => x.add(&y),
                BinOp::Sub => x.sub(&y),
                BinOp::Gp => products::gp(&x, &y),
                BinOp::Outer => products::outer(&x, &y),
                BinOp::LeftContraction => products::contract_left(&x, &y),
                BinOp::RightContraction => products::contract_right(&x, &y),
            }
        }
        ExprKind::Call(func, args) => call(*func, args, frame),
    }
}

fn call(func: Func, args: &[Expr], frame: &Arc<Frame>) -> Result<Multivector> {
    let arg = |i: usize| eval(&args[i], frame);
    let opt = |i: usize| args.get(i).map(|a| eval(a, frame)).transpose();
    let scalar = |x: f64| Ok(Multivector::scalar(frame, x));
    match func {
        Func::Rev => Ok(arg(0)?.reverse()),
        Func::Gi => Ok(arg(0)?.grade_involution()),
        Func::Inv => products::blade_inverse(&arg(0)?),
        Func::Dual => products::dual(&arg(0)?, opt(1)?.as_ref()),
        Func::Undual => products::undual(&arg(0)?, opt(1)?.as_ref()),
        Func::GradePart => {
            let k = arg(1)?;
            let g = k.scalar_part();
            if k.len() > usize::from(g != 0.0) || g < 0.0 || g.fract() != 0.0 {
                return Err(Error::domain("grade must be a non-negative integer"));
            }
            arg(0)?.grade_part(g as usize)
        }
        Func::Even => Ok(arg(0)?.even_part()),
        Func::Odd => Ok(arg(0)?.odd_part()),
        Func::Sp => scalar(products::scalar_product(&arg(0)?, &arg(1)?)?),
        Func::Fdot => products::fat_dot(&arg(0)?, &arg(1)?),
        Func::Hip => products::hestenes(&arg(0)?, &arg(1)?),
        Func::Cp => products::commutator(&arg(0)?, &arg(1)?),
        Func::Acp => products::anti_commutator(&arg(0)?, &arg(1)?),
        Func::Rp => products::regressive(&arg(0)?, &arg(1)?),
        Func::Norm => scalar(products::norm(&arg(0)?)?),
        Func::Mag => scalar(products::magnitude(&arg(0)?)?),
        Func::Proj => maps::project(&arg(0)?, &arg(1)?),
        Func::Refl => {
            let rep = |i: usize| match args[i].kind {
                ExprKind::Rep(r) => Ok(r),
                _ => Err(Error::domain("refl representation must be `d` or `u`")),
            };
            maps::reflect(&arg(0)?, &arg(1)?, rep(2)?, rep(3)?)
        }
        Func::Vp => Versor::new(arg(0)?)?.apply(&arg(1)?),
        Func::Cross => products::cross3(&arg(0)?, &arg(1)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{compile_frame, FrameSpec};
    use crate::linalg::Matrix;

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    fn n(x: f64) -> Expr {
        Expr { kind: ExprKind::Number(x), span: 0..0 }
    }

    fn e(k: usize) -> Expr {
        Expr { kind: ExprKind::Basis(k), span: 0..0 }
    }

    fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr { kind: ExprKind::Binary(op, Box::new(l), Box::new(r)), span: 0..0 }
    }

    fn run(s: &str, frame: &Arc<Frame>) -> Result<String> {
        Ok(eval(&parse_expression(s)?, frame)?.to_string())
    }

    #[test]
    fn precedence() {
        assert_eq!(p("e0^e1"), bin(BinOp::Outer, e(0), e(1)));
        assert_eq!(p("2*e0 + 3"), bin(BinOp::Add, bin(BinOp::Gp, n(2.0), e(0)), n(3.0)));
        let l = bin(BinOp::Outer, bin(BinOp::Outer, e(0), e(2)), e(3));
        let r = bin(BinOp::Outer, bin(BinOp::Outer, e(0), e(1)), e(3));
        assert_eq!(p("(e0^e2^e3)*(e0^e1^e3)"), bin(BinOp::Gp, l, r));
        assert_eq!(p("e0 <| e1*e2"), bin(BinOp::LeftContraction, e(0), bin(BinOp::Gp, e(1), e(2))));
        assert_eq!(p("1 - 2 - 3"), bin(BinOp::Sub, bin(BinOp::Sub, n(1.0), n(2.0)), n(3.0)));
        let neg = Expr { kind: ExprKind::Neg(Box::new(e(0))), span: 0..0 };
        assert_eq!(p("-e0^e1"), bin(BinOp::Outer, neg, e(1)));
    }

    #[test]
    fn numbers() {
        assert_eq!(p("2e1"), n(20.0));
        assert_eq!(p(".5"), n(0.5));
        assert_eq!(p("1.5e-3"), n(1.5e-3));
        assert!(parse_expression("1e999").is_err());
        assert!(parse_expression(".").is_err());
    }

    #[test]
    fn syntax_errors() {
        let Err(Error::Parse(err)) = parse_expression("e0 +") else { panic!() };
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"number".to_string()));
        let Err(Error::Parse(err)) = parse_expression("(e0 e1)") else { panic!() };
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&")".to_string()));
        let Err(Error::Parse(err)) = parse_expression("e0 < e1") else { panic!() };
        assert_eq!(err.offset, 3);
        assert!(matches!(parse_expression("foo(e0)"), Err(Error::UnknownFunction { offset: 0, .. })));
        assert!(matches!(parse_expression("sp(e0)"), Err(Error::Arity { found: 1, .. })));
        assert!(matches!(parse_expression("dual(e0, e1, e2)"), Err(Error::Arity { found: 3, .. })));
        assert!(parse_expression("refl(e0, e1, x, u)").is_err());
        assert!(parse_expression("rev").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "e0^e1",
            "2*e0 + 3",
            "(e0^e2^e3)*(e0^e1^e3)",
            "a",
            "1 - (2 - 3)",
            "-(e0 + e1)*e2",
            "e0 - -e1",
            "refl(e0, e1 + e2, d, u)",
            "gradepart(e0*e1 + 1e-7, 0)",
            "(e0 <| e1) |> e2",
        ] {
            let Ok(a) = parse_expression(s) else { continue };
            assert_eq!(p(&a.to_string()), a, "{s} -> {a}");
        }
    }

    #[test]
    fn evaluation() {
        let f5 = compile_frame(&FrameSpec::euclidean(5)).unwrap();
        assert_eq!(run("(e0^e2^e3)*(e0^e1^e3)", &f5).unwrap(), "1*e1^e2");
        assert_eq!(run("e0*e0", &f5).unwrap(), "1");
        assert_eq!(run("sp(e0^e1, e0^e1)", &f5).unwrap(), "-1");
        assert_eq!(run("gradepart(1 + e0 + e0^e1, 1)", &f5).unwrap(), "1*e0");
        assert!(run("gradepart(e0, 0.5)", &f5).is_err());
        assert!(run("e5", &f5).is_err());
        let f3 = compile_frame(&FrameSpec::euclidean(3)).unwrap();
        assert_eq!(run("cross(e0, e1)", &f3).unwrap(), "1*e2");
        assert_eq!(run("refl(e0, e0, d, u)", &f3).unwrap(), "-1*e0");
        assert_eq!(run("vp(e0, e1)", &f3).unwrap(), "1*e1");
        let swap =
            compile_frame(&FrameSpec::matrix(Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap())).unwrap();
        let err = run("inv(e0)", &swap).unwrap_err();
        let Error::Eval { expr, source } = &err else { panic!("{err:?}") };
        assert_eq!(expr, "inv(e0)");
        assert_eq!(source.to_string(), "null blade has no inverse");
        let m = compile_frame(&FrameSpec::diagonal(&[1.0, -1.0])).unwrap();
        let err = run("1 + mag(e0^e1)", &m).unwrap_err();
        assert!(matches!(&err, Error::Eval { expr, .. } if expr == "mag(e0 ^ e1)"));
    }
}
