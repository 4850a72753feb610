use super::{simplify as s, Func, Node};

fn c(v: f64) -> Node {
    Node::Const(v)
}

pub(super) fn derivative(node: &Node) -> Node {
    match node {
        Node::Const(_) => c(0.0),
        Node::Var => c(1.0),
        Node::Neg(a) => s::neg(derivative(a)),
        Node::Add(a, b) => s::add(derivative(a), derivative(b)),
        Node::Sub(a, b) => s::sub(derivative(a), derivative(b)),
        Node::Mul(a, b) => s::add(
            s::mul(derivative(a), (**b).clone()),
            s::mul((**a).clone(), derivative(b)),
        ),
        Node::Div(a, b) => {
            let num = s::sub(
                s::mul(derivative(a), (**b).clone()),
                s::mul((**a).clone(), derivative(b)),
            );
            s::div(num, s::pow((**b).clone(), c(2.0)))
        }
        Node::Pow(a, b) => {
            let (a, b) = (&**a, &**b);
            if let Some(e) = b.as_const() {
                // d(a^e) = e a^(e-1) a'
                s::mul(s::mul(c(e), s::pow(a.clone(), c(e - 1.0))), derivative(a))
            } else if a.is_constant() {
                // d(c^b) = c^b ln(c) b'
                s::mul(
                    s::mul(node.clone(), s::call(Func::Ln, a.clone())),
                    derivative(b),
                )
            } else {
                // d(a^b) = a^b (b' ln a + b a'/a)
                let inner = s::add(
                    s::mul(derivative(b), s::call(Func::Ln, a.clone())),
                    s::div(s::mul(b.clone(), derivative(a)), a.clone()),
                );
                s::mul(node.clone(), inner)
            }
        }
        Node::Call(f, a) => {
            let u = (**a).clone();
            let du = derivative(a);
            let outer = match f {
                Func::Exp => node.clone(),
                Func::Ln => return s::div(du, u),
                Func::Sin => s::call(Func::Cos, u),
                Func::Cos => s::neg(s::call(Func::Sin, u)),
                Func::Sqrt => return s::div(du, s::mul(c(2.0), node.clone())),
                // sign(u), undefined at 0
                Func::Abs => s::div(u, node.clone()),
                Func::Cbrt => return s::div(du, s::mul(c(3.0), s::pow(node.clone(), c(2.0)))),
            };
            s::mul(outer, du)
        }
        Node::Bessel(kind, nu, a) => {
            // Z'_nu = (Z_{nu-1} - Z_{nu+1}) / 2 for Z = J, Y
            let u = (**a).clone();
            let lower = Node::bessel(*kind, nu - 1.0, u.clone());
            let upper = Node::bessel(*kind, nu + 1.0, u);
            let outer = s::mul(c(0.5), s::sub(lower, upper));
            s::mul(outer, derivative(a))
        }
    }
}
