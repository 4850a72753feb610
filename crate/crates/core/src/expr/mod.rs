//! Real-valued coefficient expressions in one free variable.
//!
//! Expressions are parsed from text, evaluated at any [`Real`] scalar and
//! differentiated symbolically. The grammar is
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          (right-associative)
//! primary := number | 'pi' | <var> | func '(' expr ')' | bessel '(' expr ',' expr ')' | '(' expr ')'
//! func    := exp | ln | sin | cos | sqrt | abs | cbrt
//! bessel  := besselj | bessely             (first argument must be constant)
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` reads as `-(x^2)`.
//!
//! [`Real`]: crate::Real

mod diff;
mod eval;
mod parse;
mod print;

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

pub use parse::parse;

/// Elementary functions of one argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Abs,
    /// Real cube root, defined for negative arguments.
    Cbrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Cbrt => "cbrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "cbrt" => Func::Cbrt,
            _ => return None,
        })
    }
}

/// Bessel function kind for the `besselj` / `bessely` hooks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BesselKind {
    J,
    Y,
}

impl BesselKind {
    pub fn name(self) -> &'static str {
        match self {
            BesselKind::J => "besselj",
            BesselKind::Y => "bessely",
        }
    }
}

/// Expression tree node. The free variable is anonymous at this level;
/// [`Expr`] attaches its name.
#[derive(Clone, Debug, PartialEq)]
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
    /// Bessel function of constant real order.
    Bessel(BesselKind, f64, Box<Node>),
}

impl Node {
    pub fn c(v: f64) -> Node {
        Node::Const(v)
    }

    pub fn var() -> Node {
        Node::Var
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Node::Const(v) => Some(*v),
            _ => None,
        }
    }

    /// True when the subtree contains no occurrence of the free variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::Var => false,
            Node::Neg(a) | Node::Call(_, a) | Node::Bessel(_, _, a) => a.is_constant(),
            Node::Add(a, b)
            | Node::Sub(a, b)
            | Node::Mul(a, b)
            | Node::Div(a, b)
            | Node::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Replaces every occurrence of the free variable with `with`.
    pub fn substitute(&self, with: &Node) -> Node {
        let sub = |n: &Node| Box::new(n.substitute(with));
        match self {
            Node::Const(v) => Node::Const(*v),
            Node::Var => with.clone(),
            Node::Neg(a) => Node::Neg(sub(a)),
            Node::Add(a, b) => Node::Add(sub(a), sub(b)),
            Node::Sub(a, b) => Node::Sub(sub(a), sub(b)),
            Node::Mul(a, b) => Node::Mul(sub(a), sub(b)),
            Node::Div(a, b) => Node::Div(sub(a), sub(b)),
            Node::Pow(a, b) => Node::Pow(sub(a), sub(b)),
            Node::Call(f, a) => Node::Call(*f, sub(a)),
            Node::Bessel(k, nu, a) => Node::Bessel(*k, *nu, sub(a)),
        }
    }

    pub fn pow(self, exponent: Node) -> Node {
        simplify::pow(self, exponent)
    }

    pub fn powf(self, exponent: f64) -> Node {
        simplify::pow(self, Node::Const(exponent))
    }

    pub fn call(self, f: Func) -> Node {
        simplify::call(f, self)
    }

    pub fn exp(self) -> Node {
        self.call(Func::Exp)
    }

    pub fn ln(self) -> Node {
        self.call(Func::Ln)
    }

    pub fn sin(self) -> Node {
        self.call(Func::Sin)
    }

    pub fn cos(self) -> Node {
        self.call(Func::Cos)
    }

    pub fn sqrt(self) -> Node {
        self.call(Func::Sqrt)
    }

    pub fn abs(self) -> Node {
        self.call(Func::Abs)
    }

    pub fn cbrt(self) -> Node {
        self.call(Func::Cbrt)
    }

    pub fn bessel(kind: BesselKind, order: f64, arg: Node) -> Node {
        Node::Bessel(kind, order, Box::new(arg))
    }
}

/// Smart constructors with constant folding and 0/1 identities. Nothing
/// beyond that: no reassociation, no canonical ordering.
pub(crate) mod simplify {
    use super::{Func, Node};

    fn fold(v: f64) -> Option<Node> {
        v.is_finite().then_some(Node::Const(v))
    }

    pub fn add(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => {
                fold(x + y).unwrap_or_else(|| Node::Add(Box::new(a), Box::new(b)))
            }
            (Some(0.0), _) => b,
            (_, Some(0.0)) => a,
            _ => Node::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => {
                fold(x - y).unwrap_or_else(|| Node::Sub(Box::new(a), Box::new(b)))
            }
            (_, Some(0.0)) => a,
            (Some(0.0), _) => neg(b),
            _ => Node::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => {
                fold(x * y).unwrap_or_else(|| Node::Mul(Box::new(a), Box::new(b)))
            }
            (Some(0.0), _) | (_, Some(0.0)) => Node::Const(0.0),
            (Some(1.0), _) => b,
            (_, Some(1.0)) => a,
            (Some(-1.0), _) => neg(b),
            (_, Some(-1.0)) => neg(a),
            _ => Node::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != 0.0 => {
                fold(x / y).unwrap_or_else(|| Node::Div(Box::new(a), Box::new(b)))
            }
            (_, Some(1.0)) => a,
            (Some(0.0), _) => Node::Const(0.0),
            _ => Node::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Node) -> Node {
        match a {
            Node::Const(v) => Node::Const(-v),
            Node::Neg(inner) => *inner,
            other => Node::Neg(Box::new(other)),
        }
    }

    pub fn pow(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (_, Some(0.0)) => Node::Const(1.0),
            (_, Some(1.0)) => a,
            (Some(x), Some(e)) if x > 0.0 || e.fract() == 0.0 => {
                let v = if e.fract() == 0.0 && e.abs() < 1024.0 {
                    x.powi(e as i32)
                } else {
                    x.powf(e)
                };
                fold(v).unwrap_or_else(|| Node::Pow(Box::new(a), Box::new(b)))
            }
            _ => Node::Pow(Box::new(a), Box::new(b)),
        }
    }

    pub fn call(f: Func, a: Node) -> Node {
        if let Some(x) = a.as_const() {
            let v = match f {
                Func::Exp => Some(x.exp()),
                Func::Ln if x > 0.0 => Some(x.ln()),
                Func::Sin => Some(x.sin()),
                Func::Cos => Some(x.cos()),
                Func::Sqrt if x >= 0.0 => Some(x.sqrt()),
                Func::Abs => Some(x.abs()),
                Func::Cbrt => Some(x.cbrt()),
                _ => None,
            };
            if let Some(n) = v.and_then(fold) {
                return n;
            }
        }
        Node::Call(f, Box::new(a))
    }
}

impl Add for Node {
    type Output = Node;
    fn add(self, rhs: Node) -> Node {
        simplify::add(self, rhs)
    }
}

impl Sub for Node {
    type Output = Node;
    fn sub(self, rhs: Node) -> Node {
        simplify::sub(self, rhs)
    }
}

impl Mul for Node {
    type Output = Node;
    fn mul(self, rhs: Node) -> Node {
        simplify::mul(self, rhs)
    }
}

impl Div for Node {
    type Output = Node;
    fn div(self, rhs: Node) -> Node {
        simplify::div(self, rhs)
    }
}

impl Neg for Node {
    type Output = Node;
    fn neg(self) -> Node {
        simplify::neg(self)
    }
}

/// A parsed expression together with the name of its free variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    var: String,
}

impl Expr {
    pub fn new(root: Node, var: impl Into<String>) -> Self {
        Expr {
            root,
            var: var.into(),
        }
    }

    pub fn constant(v: f64, var: impl Into<String>) -> Self {
        Expr::new(Node::Const(v), var)
    }

    pub fn parse(source: &str, var: &str) -> Result<Expr, ExprError> {
        parse(source, var)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    /// Value of a variable-free expression.
    pub fn constant_value(&self) -> Option<f64> {
        if self.is_constant() {
            self.eval(0.0f64).ok()
        } else {
            None
        }
    }

    /// Exact symbolic derivative with respect to the free variable.
    pub fn derivative(&self) -> Expr {
        Expr::new(diff::derivative(&self.root), self.var.clone())
    }

    /// Composes `self ∘ inner`: the result is expressed in `inner`'s variable.
    pub fn compose(&self, inner: &Expr) -> Expr {
        Expr::new(self.root.substitute(&inner.root), inner.var.clone())
    }

    /// Renames the free variable without touching the tree.
    pub fn with_var(mut self, var: impl Into<String>) -> Expr {
        self.var = var.into();
        self
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        print::write_node(f, &self.root, &self.var)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Errors from parsing or evaluating an expression.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{name}` at byte {offset} takes {expected} argument(s), found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("domain error in `{subexpr}` at {var} = {at}: {reason}")]
    Domain {
        subexpr: String,
        var: String,
        at: f64,
        reason: &'static str,
    },
}

impl ExprError {
    /// Byte offset of a parse error, if any.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { offset, .. }
            | ExprError::UnknownIdentifier { offset, .. }
            | ExprError::Arity { offset, .. } => Some(*offset),
            ExprError::Domain { .. } => None,
        }
    }
}
