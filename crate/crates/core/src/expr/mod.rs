//! Scalar expressions in one variable, evaluated as plain values or as
//! degree-2 forward-mode jets.

mod jet;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use jet::Jet2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Cosh,
    Sinh,
    Tanh,
    Arcosh,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "cosh" => Func::Cosh,
            "sinh" => Func::Sinh,
            "tanh" => Func::Tanh,
            "arcosh" | "acosh" => Func::Arcosh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
            Func::Tanh => "tanh",
            Func::Arcosh => "arcosh",
        }
    }
}

/// Expression tree. Every variant carries exactly the children its arity
/// requires, so a constructed tree is always well formed.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// Numbers the evaluator can run on: `f64` for values, [`Jet2`] for values
/// with first and second derivatives.
trait Scalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn variable(x: f64) -> Self;
    fn value(&self) -> f64;
    fn is_const(&self) -> bool;
    fn pow(self, e: Self) -> Self;
    fn call(self, f: Func) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn variable(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn is_const(&self) -> bool {
        true
    }
    fn pow(self, e: Self) -> Self {
        if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
            self.powi(e as i32)
        } else {
            self.powf(e)
        }
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Cosh => self.cosh(),
            Func::Sinh => self.sinh(),
            Func::Tanh => self.tanh(),
            Func::Arcosh => self.acosh(),
        }
    }
}

impl Scalar for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn variable(x: f64) -> Self {
        Jet2::variable(x)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn is_const(&self) -> bool {
        self.is_constant()
    }
    fn pow(self, e: Self) -> Self {
        Jet2::pow(self, e)
    }
    fn call(self, f: Func) -> Self {
        match f {
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Cosh => self.cosh(),
            Func::Sinh => self.sinh(),
            Func::Tanh => self.tanh(),
            Func::Arcosh => self.acosh(),
        }
    }
}

/// A parsed expression in a single named variable. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Arc<Node>,
    source: Arc<str>,
    variable: Arc<str>,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.variable == other.variable
    }
}

impl Expr {
    pub fn parse(source: &str, variable: &str) -> Result<Self> {
        Self::parse_with(source, variable, &BTreeMap::new())
    }

    /// Parse with named parameters substituted as constants.
    pub fn parse_with(
        source: &str,
        variable: &str,
        params: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        let root = parser::Parser::new(source, variable, params)?.parse_all()?;
        Ok(Self {
            root: Arc::new(root),
            source: source.into(),
            variable: variable.into(),
        })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    /// Whether the expression is the constant zero (the literal `0`).
    pub fn is_zero(&self) -> bool {
        matches!(*self.root, Node::Const(c) if c == 0.0)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = eval_node::<f64>(&self.root, x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { at: x })
        }
    }

    /// Value, first and second derivative at `x`, by forward-mode
    /// differentiation.
    pub fn eval_jet2(&self, x: f64) -> Result<Jet2> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain {
                what: "expressions are defined for positive arguments only".into(),
                at: x,
            });
        }
        let j = eval_node::<Jet2>(&self.root, x)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::Overflow { at: x })
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized rendering that reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.variable)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, var: &str) -> fmt::Result {
    let bin = |f: &mut fmt::Formatter<'_>, a: &Node, op: &str, b: &Node| {
        write!(f, "(")?;
        write_node(f, a, var)?;
        write!(f, " {op} ")?;
        write_node(f, b, var)?;
        write!(f, ")")
    };
    match node {
        Node::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
        Node::Const(c) => write!(f, "{c:?}"),
        Node::Var => write!(f, "{var}"),
        Node::Neg(a) => {
            write!(f, "(-")?;
            write_node(f, a, var)?;
            write!(f, ")")
        }
        Node::Add(a, b) => bin(f, a, "+", b),
        Node::Sub(a, b) => bin(f, a, "-", b),
        Node::Mul(a, b) => bin(f, a, "*", b),
        Node::Div(a, b) => bin(f, a, "/", b),
        Node::Pow(a, b) => bin(f, a, "^", b),
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, var)?;
            write!(f, ")")
        }
    }
}

fn domain(what: &str, at: f64) -> Error {
    Error::Domain {
        what: what.into(),
        at,
    }
}

fn eval_node<S: Scalar>(node: &Node, x: f64) -> Result<S> {
    Ok(match node {
        Node::Const(c) => S::constant(*c),
        Node::Var => S::variable(x),
        Node::Neg(a) => -eval_node::<S>(a, x)?,
        Node::Add(a, b) => eval_node::<S>(a, x)? + eval_node::<S>(b, x)?,
        Node::Sub(a, b) => eval_node::<S>(a, x)? - eval_node::<S>(b, x)?,
        Node::Mul(a, b) => eval_node::<S>(a, x)? * eval_node::<S>(b, x)?,
        Node::Div(a, b) => eval_node::<S>(a, x)? / eval_node::<S>(b, x)?,
        Node::Pow(a, b) => {
            let base = eval_node::<S>(a, x)?;
            let exponent = eval_node::<S>(b, x)?;
            let integral = exponent.is_const() && exponent.value().fract() == 0.0;
            if base.value() < 0.0 && !integral {
                return Err(domain("negative base raised to a non-integer power", x));
            }
            if base.value() == 0.0 && !exponent.is_const() {
                return Err(domain("zero base raised to a variable power", x));
            }
            base.pow(exponent)
        }
        Node::Call(func, a) => {
            let arg = eval_node::<S>(a, x)?;
            let v = arg.value();
            match func {
                Func::Log if v <= 0.0 => return Err(domain("log of a non-positive number", x)),
                Func::Sqrt if v < 0.0 => return Err(domain("sqrt of a negative number", x)),
                Func::Arcosh if v < 1.0 => return Err(domain("arcosh of a number below 1", x)),
                _ => {}
            }
            arg.call(*func)
        }
    })
}
