//! Arithmetic expressions in the single variable `x`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?          right-associative
//! unary  := '-' unary | atom
//! atom   := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func   := exp | log | sqrt | abs | sin | cos
//! ```
//!
//! `Display` prints a fully parenthesized form that parses back to the same tree.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::math;

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
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sin,
        Func::Cos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => core::f64::consts::PI,
            Constant::E => core::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Const(Constant),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(&'static str),
    UnknownIdentifier(String),
}

/// Parse failure at byte `offset` of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error at byte {}: {m}", self.offset),
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier '{name}' at byte {}", self.offset)
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalError {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    NegativeFractionalPower,
    /// Overflow or an otherwise non-finite intermediate.
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self {
            EvalError::DivisionByZero => "division by zero",
            EvalError::LogOfNonPositive => "log of a nonpositive number",
            EvalError::SqrtOfNegative => "sqrt of a negative number",
            EvalError::NegativeFractionalPower => "fractional power of a negative number",
            EvalError::NonFinite => "non-finite value",
        };
        f.write_str(m)
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<alloc::vec::Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut out = alloc::vec::Vec::new();
    let mut i = 0;
    let syntax = |m, offset| ParseError {
        kind: ParseErrorKind::Syntax(m),
        offset,
    };
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push((Tok::Op(c as char), i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if i < b.len() && b[i] == b'.' {
                    i += 1;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent only when digits follow, so "2e" lexes as 2 then e.
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        while j < b.len() && b[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax("malformed number", start))?;
                if !v.is_finite() {
                    return Err(syntax("number out of range", start));
                }
                out.push((Tok::Num(v), start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(String::from(&src[start..i])), start));
            }
            _ => return Err(syntax("unexpected character", i)),
        }
    }
    Ok(out)
}

struct Parser {
    toks: alloc::vec::Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn err(&self, m: &'static str) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(m),
            offset: self.offset(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        let tok = match self.toks.get(self.pos) {
            Some((t, _)) => t.clone(),
            None => return Err(self.err("unexpected end of input")),
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Number(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(Constant::Pi)),
                "e" => Ok(Expr::Const(Constant::E)),
                other => match Func::from_name(other) {
                    Some(f) => {
                        if self.peek() != Some(&Tok::LParen) {
                            return Err(self.err("expected '(' after function name"));
                        }
                        self.pos += 1;
                        let arg = self.expr()?;
                        self.close()?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None => Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                        offset,
                    }),
                },
            },
            Tok::RParen => Err(ParseError {
                kind: ParseErrorKind::Syntax("unexpected ')'"),
                offset,
            }),
            Tok::Op(_) => Err(ParseError {
                kind: ParseErrorKind::Syntax("expected an operand"),
                offset,
            }),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected ')'"))
        }
    }
}

/// Parse `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax("empty expression"),
            offset: 0,
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

fn finite(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn power(a: f64, b: f64) -> Result<f64, EvalError> {
    if a < 0.0 && b != math::floor(b) {
        return Err(EvalError::NegativeFractionalPower);
    }
    if a == 0.0 && b < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    finite(math::pow(a, b))
}

/// Evaluate `ast` at `x`.
pub fn eval(ast: &Expr, x: f64) -> Result<f64, EvalError> {
    match ast {
        Expr::Number(v) => Ok(*v),
        Expr::Var => finite(x),
        Expr::Const(c) => Ok(c.value()),
        Expr::Neg(e) => Ok(-eval(e, x)?),
        Expr::Binary(op, l, r) => {
            let a = eval(l, x)?;
            let b = eval(r, x)?;
            match op {
                BinOp::Add => finite(a + b),
                BinOp::Sub => finite(a - b),
                BinOp::Mul => finite(a * b),
                BinOp::Div => {
                    if b == 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        finite(a / b)
                    }
                }
                BinOp::Pow => power(a, b),
            }
        }
        Expr::Call(f, arg) => {
            let a = eval(arg, x)?;
            match f {
                Func::Exp => finite(math::exp(a)),
                Func::Log => {
                    if a <= 0.0 {
                        Err(EvalError::LogOfNonPositive)
                    } else {
                        Ok(math::ln(a))
                    }
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        Err(EvalError::SqrtOfNegative)
                    } else {
                        Ok(math::sqrt(a))
                    }
                }
                Func::Abs => Ok(math::abs(a)),
                Func::Sin => Ok(math::sin(a)),
                Func::Cos => Ok(math::cos(a)),
            }
        }
    }
}

impl Expr {
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval(self, x)
    }
}

impl core::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug formatting of f64 is the shortest round-trip representation.
            Expr::Number(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("x"),
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn num(v: f64) -> Box<Expr> {
        Box::new(Expr::Number(v))
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("x^(-3)").unwrap(),
            Expr::Binary(
                BinOp::Pow,
                Box::new(Expr::Var),
                Box::new(Expr::Neg(num(3.0)))
            )
        );
        assert_eq!(parse("1").unwrap(), Expr::Number(1.0));
        assert_eq!(
            parse("2*x^0.5 - x").unwrap(),
            Expr::Binary(
                BinOp::Sub,
                Box::new(Expr::Binary(
                    BinOp::Mul,
                    num(2.0),
                    Box::new(Expr::Binary(BinOp::Pow, Box::new(Expr::Var), num(0.5)))
                )),
                Box::new(Expr::Var)
            )
        );
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(parse("2^3^2").unwrap().eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("2^-1").unwrap().eval(0.0).unwrap(), 0.5);
    }

    #[test]
    fn evaluation() {
        assert_eq!(parse("x^2").unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(parse("x^(-2)").unwrap().eval(2.0).unwrap(), 0.25);
        assert_eq!(parse("x^(-3)").unwrap().eval(2.0).unwrap(), 0.125);
        assert_eq!(
            parse(" 1 + 2 * 3 - 4 / 2 ").unwrap().eval(0.0).unwrap(),
            5.0
        );
        assert_eq!(parse("-x^2").unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(parse("-(x^2)").unwrap().eval(3.0).unwrap(), -9.0);
        assert!(
            (parse("exp(log(x)) + sqrt(abs(-4)) + sin(pi/2) + cos(0)")
                .unwrap()
                .eval(2.5)
                .unwrap()
                - 6.5)
                .abs()
                < 1e-14
        );
        assert!((parse("e").unwrap().eval(0.0).unwrap() - core::f64::consts::E).abs() < 1e-16);
        assert_eq!(parse("1.5e2").unwrap().eval(0.0).unwrap(), 150.0);
        assert_eq!(parse("2E-1").unwrap().eval(0.0).unwrap(), 0.2);
        assert_eq!(parse(".5").unwrap().eval(0.0).unwrap(), 0.5);
        // Integer powers of negative numbers are fine.
        assert_eq!(parse("x^3").unwrap().eval(-2.0).unwrap(), -8.0);
    }

    #[test]
    fn evaluation_errors() {
        assert_eq!(
            parse("1/x").unwrap().eval(0.0),
            Err(EvalError::DivisionByZero)
        );
        assert_eq!(
            parse("log(x)").unwrap().eval(0.0),
            Err(EvalError::LogOfNonPositive)
        );
        assert_eq!(
            parse("sqrt(x)").unwrap().eval(-1.0),
            Err(EvalError::SqrtOfNegative)
        );
        assert_eq!(
            parse("x^0.5").unwrap().eval(-1.0),
            Err(EvalError::NegativeFractionalPower)
        );
        assert_eq!(
            parse("x^(-1)").unwrap().eval(0.0),
            Err(EvalError::DivisionByZero)
        );
        assert_eq!(
            parse("exp(x)").unwrap().eval(1000.0),
            Err(EvalError::NonFinite)
        );
    }

    #[test]
    fn parse_errors() {
        let e = parse("2 * y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("y".to_string()));
        assert_eq!(e.offset, 4);
        let e = parse("(1 + 2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.offset, 6);
        assert_eq!(parse("1 + * 2").unwrap_err().offset, 4);
        assert_eq!(parse("3 $").unwrap_err().offset, 2);
        assert!(parse("").is_err());
        assert!(parse("exp 2").is_err());
        assert!(parse("1 2").is_err());
        assert!(parse("1e999").is_err());
    }

    #[test]
    fn display_round_trip_examples() {
        for src in [
            "x^(-3)",
            "2*x^0.5 - x",
            "-(-x)",
            "exp(-x/2)*(1+x^2)",
            "1e-7*x",
            "2^3^2",
        ] {
            let a = parse(src).unwrap();
            assert_eq!(parse(&a.to_string()).unwrap(), a, "{src} -> {a}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..1e6).prop_map(Expr::Number),
            (0u32..1000).prop_map(|n| Expr::Number(n as f64)),
            (-300i32..300).prop_map(|e| Expr::Number(libm::pow(10.0, e as f64))),
            Just(Expr::Var),
            Just(Expr::Const(Constant::Pi)),
            Just(Expr::Const(Constant::E)),
        ];
        leaf.prop_recursive(6, 64, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| Expr::Binary(
                        op,
                        Box::new(l),
                        Box::new(r)
                    )),
                (0usize..6, inner).prop_map(|(i, a)| Expr::Call(Func::ALL[i], Box::new(a))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn print_parse_round_trip(ast in arb_expr()) {
            let printed = ast.to_string();
            let parsed = parse(&printed).unwrap();
            prop_assert_eq!(&parsed, &ast);
            prop_assert_eq!(parse(&parsed.to_string()).unwrap(), parsed);
        }
    }
}
