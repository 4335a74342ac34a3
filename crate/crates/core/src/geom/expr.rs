//! Arithmetic expressions over named real variables: parsing, exact symbolic
//! differentiation and floating-point evaluation.
//!
//! Grammar (whitespace-insensitive, left-associative):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' '-'? integer)?
//! base   := number | ident | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp
//! ```
//! The identifier `pi` denotes the constant π.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(BigRational),
    Pi,
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

// `add`, `mul` and friends are simplifying constructors taking two trees, not operator impls.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(BigRational::one())
    }

    pub fn int(v: i64) -> Expr {
        Expr::Const(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    fn as_const(&self) -> Option<&BigRational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            _ if a.is_zero() => b,
            _ if b.is_zero() => a,
            _ => match b {
                Expr::Neg(inner) => Expr::sub(a, *inner),
                b => Expr::Add(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            _ if b.is_zero() => a,
            _ if a.is_zero() => Expr::neg(b),
            _ if a == b => Expr::zero(),
            _ => match b {
                Expr::Neg(inner) => Expr::add(a, *inner),
                b => Expr::Sub(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            _ if a.is_zero() || b.is_zero() => Expr::zero(),
            _ if a.is_one() => b,
            _ if b.is_one() => a,
            (Some(x), _) if *x == -BigRational::one() => Expr::neg(b),
            (_, Some(y)) if *y == -BigRational::one() => Expr::neg(a),
            _ => match (a, b) {
                (Expr::Neg(x), Expr::Neg(y)) => Expr::mul(*x, *y),
                (Expr::Neg(x), y) | (y, Expr::Neg(x)) => Expr::neg(Expr::mul(*x, y)),
                (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
            _ if a.is_zero() && !b.is_zero() => Expr::zero(),
            _ if b.is_one() => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        match (&a, k) {
            (_, 0) => Expr::one(),
            (_, 1) => a,
            (Expr::Const(c), k) if !c.is_zero() || k > 0 => {
                let mut out = BigRational::one();
                for _ in 0..k.unsigned_abs() {
                    out *= c;
                }
                Expr::Const(if k < 0 { out.recip() } else { out })
            }
            _ => Expr::Pow(Box::new(a), k),
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        match (f, &a) {
            (Func::Sin, e) if e.is_zero() => Expr::zero(),
            (Func::Cos | Func::Exp, e) if e.is_zero() => Expr::one(),
            _ => Expr::Call(f, Box::new(a)),
        }
    }

    /// Exact derivative with respect to `var`, simplified on the fly.
    pub fn derivative(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) | Expr::Pi => Expr::zero(),
            Expr::Var(v) => {
                if v == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Add(a, b) => Expr::add(a.derivative(var), b.derivative(var)),
            Expr::Sub(a, b) => Expr::sub(a.derivative(var), b.derivative(var)),
            Expr::Neg(a) => Expr::neg(a.derivative(var)),
            Expr::Mul(a, b) => Expr::add(Expr::mul(a.derivative(var), (**b).clone()), Expr::mul((**a).clone(), b.derivative(var))),
            Expr::Div(a, b) => {
                let num = Expr::sub(Expr::mul(a.derivative(var), (**b).clone()), Expr::mul((**a).clone(), b.derivative(var)));
                Expr::div(num, Expr::pow((**b).clone(), 2))
            }
            Expr::Pow(a, k) => Expr::mul(Expr::mul(Expr::int(*k as i64), Expr::pow((**a).clone(), k - 1)), a.derivative(var)),
            Expr::Call(f, a) => {
                let inner = a.derivative(var);
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, (**a).clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, (**a).clone())),
                    Func::Exp => self.clone(),
                };
                Expr::mul(outer, inner)
            }
        }
    }

    /// Names of the free variables, sorted and without repeats.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) | Expr::Pi => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
        }
    }

    /// Replaces variables by positions in `names`; fails on unknown identifiers.
    pub fn bind(&self, names: &[String]) -> Result<Bound> {
        if let Some(v) = self.variables().into_iter().find(|v| !names.contains(v)) {
            return Err(Error::UnknownIdentifier(v));
        }
        Ok(Bound(compile(self, names)))
    }

    /// Evaluates with the given variable values (by name).
    pub fn eval(&self, names: &[String], values: &[f64]) -> Result<f64> {
        self.bind(names)?.eval(values)
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

fn compile(e: &Expr, names: &[String]) -> Node {
    let c = |x: &Expr| Box::new(compile(x, names));
    match e {
        Expr::Const(q) => Node::Const(q.to_f64().unwrap_or(f64::NAN)),
        Expr::Pi => Node::Const(std::f64::consts::PI),
        Expr::Var(v) => Node::Var(names.iter().position(|n| n == v).expect("bound variable")),
        Expr::Add(a, b) => Node::Add(c(a), c(b)),
        Expr::Sub(a, b) => Node::Sub(c(a), c(b)),
        Expr::Mul(a, b) => Node::Mul(c(a), c(b)),
        Expr::Div(a, b) => Node::Div(c(a), c(b)),
        Expr::Neg(a) => Node::Neg(c(a)),
        Expr::Pow(a, k) => Node::Pow(c(a), *k),
        Expr::Call(f, a) => Node::Call(*f, c(a)),
    }
}

/// An expression with variables resolved to argument positions.
#[derive(Clone, Debug)]
pub struct Bound(Node);

impl Bound {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = eval_node(&self.0, x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("non-finite value at {x:?}")))
        }
    }
}

fn eval_node(n: &Node, x: &[f64]) -> Result<f64> {
    Ok(match n {
        Node::Const(c) => *c,
        Node::Var(i) => x[*i],
        Node::Add(a, b) => eval_node(a, x)? + eval_node(b, x)?,
        Node::Sub(a, b) => eval_node(a, x)? - eval_node(b, x)?,
        Node::Mul(a, b) => eval_node(a, x)? * eval_node(b, x)?,
        Node::Div(a, b) => {
            let d = eval_node(b, x)?;
            if d == 0.0 {
                return Err(Error::Evaluation(format!("division by zero at {x:?}")));
            }
            eval_node(a, x)? / d
        }
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Pow(a, k) => {
            let b = eval_node(a, x)?;
            if b == 0.0 && *k < 0 {
                return Err(Error::Evaluation(format!("division by zero at {x:?}")));
            }
            b.powi(*k)
        }
        Node::Call(f, a) => f.apply(eval_node(a, x)?),
    })
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Const(c) if c.is_negative() || !c.is_integer() => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => f.write_str(v),
            Expr::Add(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" + ")?;
                write_operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" - ")?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("*")?;
                write_operand(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("/")?;
                write_operand(f, b, 4)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Expr::Pow(a, k) => {
                write_operand(f, a, 5)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset, message: message.into() })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(self.pos, format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' { Expr::Add(Box::new(lhs), Box::new(rhs)) } else { Expr::Sub(Box::new(lhs), Box::new(rhs)) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' { Expr::Mul(Box::new(lhs), Box::new(rhs)) } else { Expr::Div(Box::new(lhs), Box::new(rhs)) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(start, "expected an integer exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let k: i32 = text.parse().map_err(|_| Error::Syntax { offset: start, message: "exponent too large".into() })?;
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn base(&mut self) -> Result<Expr> {
        let Some(c) = self.peek() else {
            return self.error(self.pos, "unexpected end of input");
        };
        let start = self.pos;
        if c.is_ascii_digit() || c == b'.' {
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return parse_decimal(text).map(Expr::Const).ok_or(Error::Syntax { offset: start, message: format!("invalid number `{text}`") });
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            if self.peek() == Some(b'(') {
                let func = match name {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    _ => return self.error(start, format!("unknown function `{name}`")),
                };
                self.pos += 1;
                let arg = self.expr()?;
                self.expect(b')')?;
                return Ok(Expr::Call(func, Box::new(arg)));
            }
            return Ok(if name == "pi" { Expr::Pi } else { Expr::Var(name.to_string()) });
        }
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        self.error(start, format!("unexpected `{}`", c as char))
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(num, den))
}

/// Parses an expression; syntax errors carry the byte offset of the offending token.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return p.error(p.pos, format!("unexpected `{}`", c as char));
    }
    Ok(e)
}

/// Simplifies by rebuilding the tree through the folding constructors.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Pi | Expr::Var(_) => e.clone(),
        Expr::Add(a, b) => Expr::add(simplify(a), simplify(b)),
        Expr::Sub(a, b) => Expr::sub(simplify(a), simplify(b)),
        Expr::Mul(a, b) => Expr::mul(simplify(a), simplify(b)),
        Expr::Div(a, b) => Expr::div(simplify(a), simplify(b)),
        Expr::Neg(a) => Expr::neg(simplify(a)),
        Expr::Pow(a, k) => Expr::pow(simplify(a), *k),
        Expr::Call(f, a) => Expr::call(*f, simplify(a)),
    }
}
