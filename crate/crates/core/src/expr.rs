//! Parser and evaluator for coefficient expressions in the variable `x`.
//!
//! Coefficients of a problem are given as textual formulas such as
//! `8*x^2*(x^4-3*x^2-5)/(x^2+1)^2`. The grammar supports real literals,
//! the variable `x`, the binary operators `+ - * / ^`, unary minus, the
//! functions `exp`, `sin`, `cos`, `sqrt`, and parentheses. `^` is
//! right-associative and binds tighter than unary minus, so `-x^2`
//! means `-(x^2)` and `2^3^2` means `2^(3^2)`. Whitespace is not
//! significant.
//!
//! Parse errors carry the byte offset of the offending token. Evaluation
//! reports domain errors (division by zero, square root of a negative
//! number, non-integer power of a non-positive base, overflow) instead of
//! returning NaN or infinity.
//!
//! Integer exponents are evaluated by repeated squaring, which keeps
//! polynomial coefficients exact; non-integer exponents of a positive
//! base go through `exp(b*ln(a))`.

use std::fmt;

use crate::error::{Error, Result};

/// Binary operators, in source form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

/// Built-in functions of one argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parse `input` into an expression tree.
    pub fn parse(input: &str) -> Result<Expr> {
        let mut p = Parser {
            src: input.as_bytes(),
            pos: 0,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// Evaluate at `x`, reporting domain violations as errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval(x)?;
                let b = rhs.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(domain(x, "division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => pow(a, b, x)?,
                }
            }
            Expr::Call(f, arg) => {
                let a = arg.eval(x)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(domain(x, "square root of a negative number"));
                        }
                        a.sqrt()
                    }
                }
            }
        };
        if !v.is_finite() {
            return Err(domain(x, "non-finite result (overflow)"));
        }
        Ok(v)
    }
}

fn domain(x: f64, message: &str) -> Error {
    Error::Domain {
        x,
        message: message.to_string(),
    }
}

fn pow(base: f64, exponent: f64, x: f64) -> Result<f64> {
    if exponent.fract() == 0.0 && exponent.abs() <= 2f64.powi(31) {
        let n = exponent as i64;
        if base == 0.0 && n < 0 {
            return Err(domain(x, "zero raised to a negative power"));
        }
        return Ok(powi(base, n));
    }
    if base <= 0.0 {
        return Err(domain(x, "non-integer power of a non-positive base"));
    }
    Ok((exponent * base.ln()).exp())
}

/// Integer power by repeated squaring. `powi(0.0, 0) == 1.0`.
fn powi(base: f64, n: i64) -> f64 {
    let mut e = n.unsigned_abs();
    let mut b = base;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    if n < 0 {
        1.0 / acc
    } else {
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    /// `expr := term (('+'|'-') term)*`
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(ch) = self.peek() {
            let op = match ch {
                b'+' => BinOp::Add,
                b'-' => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    /// `term := unary (('*'|'/') unary)*`
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(ch) = self.peek() {
            let op = match ch {
                b'*' => BinOp::Mul,
                b'/' => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    /// `unary := '-' unary | power`
    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    /// `power := atom ('^' unary)?`, right-associative via the `unary`
    /// recursion, which also admits `x^-2`.
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    /// `atom := number | 'x' | ident '(' expr ')' | '(' expr ')'`
    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => self.identifier(),
            Some(_) => Err(self.syntax("expected a number, `x`, a function call or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut saw_digit = false;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
            saw_digit = true;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        // Exponent part only when it is complete; `1e` followed by a
        // non-digit is the literal `1` and a separate identifier.
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let mut probe = self.pos + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                probe += 1;
                while probe < self.src.len() && self.src[probe].is_ascii_digit() {
                    probe += 1;
                }
                self.pos = probe;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        Ok(Expr::Num(value))
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if name == "x" {
            return Ok(Expr::Var);
        }
        if let Some(f) = Func::from_name(name) {
            if self.peek() != Some(b'(') {
                return Err(self.syntax(&format!("expected `(` after `{name}`")));
            }
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.syntax("expected `)`"));
            }
            self.pos += 1;
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        Err(Error::UnknownIdentifier {
            name: name.to_string(),
            offset: start,
        })
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; parsing it back yields the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_str(src: &str, x: f64) -> Result<f64> {
        Expr::parse(src)?.eval(x)
    }

    #[test]
    fn square_is_exact() {
        assert_eq!(eval_str("x^2", 3.0).unwrap(), 9.0);
    }

    #[test]
    fn rational_coefficient_at_zero() {
        let src = "4*(4*x^12-24*x^10-7*x^8+96*x^6+46*x^4-60*x^2-15)/(x^2+1)^4";
        assert_eq!(eval_str(src, 0.0).unwrap(), -60.0);
    }

    #[test]
    fn exponentials() {
        let v = eval_str("exp(2*x)-exp(x)", 1.0).unwrap();
        let expect = (2.0f64).exp() - 1.0f64.exp();
        assert!((v - expect).abs() <= 1e-15 * expect.abs());
    }

    #[test]
    fn division_by_zero_is_reported() {
        match eval_str("1/(x-1)", 1.0) {
            Err(Error::Domain { x, .. }) => assert_eq!(x, 1.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_of_negative_is_reported() {
        assert!(matches!(
            eval_str("sqrt(x-2)", 0.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn syntax_error_carries_byte_offset() {
        match Expr::parse("2*^3") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_carries_name_and_offset() {
        match Expr::parse("2*y") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "y");
                assert_eq!(offset, 2);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        assert_eq!(eval_str("-x^2", 2.0).unwrap(), -4.0);
        assert_eq!(eval_str("(-x)^2", 2.0).unwrap(), 4.0);
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(eval_str("2^3^2", 0.0).unwrap(), 512.0);
    }

    #[test]
    fn negative_integer_exponent() {
        assert_eq!(eval_str("x^-2", 2.0).unwrap(), 0.25);
        assert!(matches!(eval_str("x^-1", 0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn non_integer_exponent_needs_positive_base() {
        let v = eval_str("x^1.5", 4.0).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        assert!(matches!(
            eval_str("(0-x)^1.5", 2.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn scientific_literals_and_near_miss() {
        assert_eq!(eval_str("1e-2", 0.0).unwrap(), 0.01);
        assert_eq!(eval_str("2E3", 0.0).unwrap(), 2000.0);
        // `1exp(x)` is not a number followed by a call; it is the literal
        // `1` with trailing input, hence a syntax error.
        assert!(Expr::parse("1exp(x)").is_err());
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(eval_str("exp(x)", 1e4), Err(Error::Domain { .. })));
    }

    fn leaf() -> impl Strategy<Value = Expr> {
        prop_oneof![
            (0u32..1000).prop_map(|n| Expr::Num(n as f64 / 8.0)),
            Just(Expr::Var),
        ]
    }

    fn tree() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(5, 48, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (any::<u8>(), inner.clone(), inner.clone()).prop_map(|(k, a, b)| {
                    let op = match k % 5 {
                        0 => BinOp::Add,
                        1 => BinOp::Sub,
                        2 => BinOp::Mul,
                        3 => BinOp::Div,
                        _ => BinOp::Pow,
                    };
                    Expr::Bin(op, Box::new(a), Box::new(b))
                }),
                (any::<u8>(), inner).prop_map(|(k, a)| {
                    let f = match k % 4 {
                        0 => Func::Exp,
                        1 => Func::Sin,
                        2 => Func::Cos,
                        _ => Func::Sqrt,
                    };
                    Expr::Call(f, Box::new(a))
                }),
            ]
        })
    }

    proptest! {
        /// Pretty-printing then re-parsing returns the identical tree, so
        /// evaluation at any point is bit-identical.
        #[test]
        fn print_parse_round_trip(e in tree()) {
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).expect("printed form parses");
            prop_assert_eq!(&reparsed, &e);
            for i in 0..100 {
                let x = i as f64 * 0.1;
                match (e.eval(x), reparsed.eval(x)) {
                    (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "eval mismatch: {:?} vs {:?}", a, b),
                }
            }
        }
    }
}
