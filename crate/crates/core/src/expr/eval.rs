use super::{BesselKind, Expr, ExprError, Func, Node};
use crate::special;
use crate::Real;

struct Fault<'a> {
    node: &'a Node,
    reason: &'static str,
}

type R<'a, T> = Result<T, Fault<'a>>;

fn check<T: Real>(node: &Node, v: T) -> R<'_, T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Fault {
            node,
            reason: "non-finite result",
        })
    }
}

fn fault<'a, T>(node: &'a Node, reason: &'static str) -> R<'a, T> {
    Err(Fault { node, reason })
}

/// Integer exponent, if the value is exactly an `i32`.
fn as_int<T: Real>(e: T) -> Option<i32> {
    if e.fract() == T::zero() && e.abs() <= T::lit(i32::MAX as f64) {
        e.to_i32()
    } else {
        None
    }
}

fn eval_node<T: Real>(node: &Node, x: T) -> R<'_, T> {
    let v = match node {
        Node::Const(c) => T::lit(*c),
        Node::Var => x,
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Add(a, b) => eval_node(a, x)? + eval_node(b, x)?,
        Node::Sub(a, b) => eval_node(a, x)? - eval_node(b, x)?,
        Node::Mul(a, b) => eval_node(a, x)? * eval_node(b, x)?,
        Node::Div(a, b) => {
            let num = eval_node(a, x)?;
            let den = eval_node(b, x)?;
            if den == T::zero() {
                return fault(node, "division by zero");
            }
            num / den
        }
        Node::Pow(a, b) => {
            let base = eval_node(a, x)?;
            let e = eval_node(b, x)?;
            match as_int(e) {
                Some(n) => {
                    if base == T::zero() && n < 0 {
                        return fault(node, "division by zero");
                    }
                    base.powi(n)
                }
                None => {
                    if base <= T::zero() {
                        return fault(node, "non-integer power of non-positive base");
                    }
                    base.powf(e)
                }
            }
        }
        Node::Call(f, a) => {
            let u = eval_node(a, x)?;
            match f {
                Func::Exp => u.exp(),
                Func::Ln => {
                    if u <= T::zero() {
                        return fault(node, "logarithm of non-positive value");
                    }
                    u.ln()
                }
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Sqrt => {
                    if u < T::zero() {
                        return fault(node, "square root of negative value");
                    }
                    u.sqrt()
                }
                Func::Abs => u.abs(),
                Func::Cbrt => u.cbrt(),
            }
        }
        Node::Bessel(kind, nu, a) => {
            let u = eval_node(a, x)?;
            if u <= T::zero() {
                return fault(node, "Bessel function of non-positive argument");
            }
            let nu = T::lit(*nu);
            match kind {
                BesselKind::J => special::bessel_j(nu, u),
                BesselKind::Y => special::bessel_y(nu, u),
            }
        }
    };
    check(node, v)
}

impl Expr {
    /// Evaluates the expression at `x`.
    ///
    /// Fails with [`ExprError::Domain`] naming the offending subexpression
    /// instead of returning NaN or infinity.
    pub fn eval<T: Real>(&self, x: T) -> Result<T, ExprError> {
        let at = x.as_f64();
        if !x.is_finite() {
            return Err(ExprError::Domain {
                subexpr: self.var.clone(),
                var: self.var.clone(),
                at,
                reason: "non-finite argument",
            });
        }
        eval_node(&self.root, x).map_err(|f| ExprError::Domain {
            subexpr: Expr::new(f.node.clone(), self.var.clone()).to_string(),
            var: self.var.clone(),
            at,
            reason: f.reason,
        })
    }
}
