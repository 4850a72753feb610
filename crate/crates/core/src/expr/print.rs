use std::fmt::{self, Write};

use super::Node;

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn prec(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => ADD,
        Node::Mul(..) | Node::Div(..) => MUL,
        Node::Neg(..) => NEG,
        Node::Const(v) if v.is_sign_negative() => NEG,
        Node::Pow(..) => POW,
        _ => ATOM,
    }
}

/// Shortest text that parses back to exactly `v`.
pub(crate) fn number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn child(f: &mut fmt::Formatter<'_>, node: &Node, var: &str, min: u8) -> fmt::Result {
    if prec(node) < min {
        f.write_char('(')?;
        write_node(f, node, var)?;
        f.write_char(')')
    } else {
        write_node(f, node, var)
    }
}

pub(super) fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, var: &str) -> fmt::Result {
    match node {
        Node::Const(v) => f.write_str(&number(*v)),
        Node::Var => f.write_str(var),
        Node::Neg(a) => {
            f.write_char('-')?;
            child(f, a, var, POW)
        }
        // Negated right operands are always parenthesized for readability.
        Node::Add(a, b) | Node::Sub(a, b) => {
            child(f, a, var, ADD)?;
            f.write_str(if matches!(node, Node::Add(..)) {
                " + "
            } else {
                " - "
            })?;
            child(f, b, var, if prec(b) == NEG { ATOM } else { MUL })
        }
        Node::Mul(a, b) | Node::Div(a, b) => {
            child(f, a, var, MUL)?;
            f.write_char(if matches!(node, Node::Mul(..)) {
                '*'
            } else {
                '/'
            })?;
            child(f, b, var, POW)
        }
        Node::Pow(a, b) => {
            child(f, a, var, ATOM)?;
            f.write_char('^')?;
            child(f, b, var, POW)
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, var)?;
            f.write_char(')')
        }
        Node::Bessel(kind, nu, a) => {
            write!(f, "{}({}, ", kind.name(), number(*nu))?;
            write_node(f, a, var)?;
            f.write_char(')')
        }
    }
}
