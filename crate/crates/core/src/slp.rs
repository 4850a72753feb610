//! Problem records for the canonical and Liouville normal forms.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::liouville::LiouvilleInvariant;
use crate::Real;

/// Separated boundary condition coefficients.
///
/// At the left end the condition reads `d0 u(a) - d1 p(a) u'(a) = 0`, at the
/// right end `d0 u(b) + d1 p(b) u'(b) = 0`. Dirichlet is `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryCoeffs<T> {
    pub d0: T,
    pub d1: T,
}

impl<T: Real> BoundaryCoeffs<T> {
    pub fn new(d0: T, d1: T) -> Self {
        BoundaryCoeffs { d0, d1 }
    }

    pub fn dirichlet() -> Self {
        BoundaryCoeffs {
            d0: T::one(),
            d1: T::zero(),
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        self.d1 == T::zero() && self.d0 != T::zero()
    }

    pub fn is_degenerate(&self) -> bool {
        self.d0 == T::zero() && self.d1 == T::zero()
    }
}

/// `-(p u')' + q u = λ r u` on `[a, b]`.
#[derive(Clone, Debug)]
pub struct CanonicalSlp<T> {
    pub p: Expr,
    pub q: Expr,
    pub r: Expr,
    pub a: T,
    pub b: T,
    pub left: BoundaryCoeffs<T>,
    pub right: BoundaryCoeffs<T>,
}

impl<T: Real> CanonicalSlp<T> {
    /// Dirichlet problem on `[a, b]`.
    pub fn dirichlet(p: Expr, q: Expr, r: Expr, a: T, b: T) -> Self {
        CanonicalSlp {
            p,
            q,
            r,
            a,
            b,
            left: BoundaryCoeffs::dirichlet(),
            right: BoundaryCoeffs::dirichlet(),
        }
    }

    /// Parses the three coefficients in the variable `x`.
    pub fn parse(p: &str, q: &str, r: &str, a: T, b: T) -> Result<Self> {
        Ok(Self::dirichlet(
            Expr::parse(p, "x")?,
            Expr::parse(q, "x")?,
            Expr::parse(r, "x")?,
            a,
            b,
        ))
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(DEFAULT_SAMPLES)
    }

    /// Checks the interval, the boundary coefficients, and the positivity of
    /// `p` and `r` at `samples` equispaced points including both ends.
    pub fn validate_with(&self, samples: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        if !interval_ok(self.a, self.b) {
            out.push(Violation::Interval {
                lo: self.a.as_f64(),
                hi: self.b.as_f64(),
            });
            return out;
        }
        check_bc(&mut out, &self.left, &self.right);
        for (name, coeff, positive) in [
            ("p", &self.p, true),
            ("q", &self.q, false),
            ("r", &self.r, true),
        ] {
            for x in sample_points(self.a, self.b, samples) {
                match coeff.eval(x) {
                    Ok(v) if positive && !(v > T::zero()) => {
                        out.push(Violation::NotPositive {
                            coeff: name,
                            at: x.as_f64(),
                            value: v.as_f64(),
                        });
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        out.push(Violation::Evaluation {
                            coeff: name,
                            at: x.as_f64(),
                            message: e.to_string(),
                        });
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Potential of a Liouville normal form problem: either an expression in
/// `t` or the invariant of a transformed canonical problem.
#[derive(Clone, Debug)]
pub enum Potential<T> {
    Expr(Expr),
    Transformed(Arc<LiouvilleInvariant<T>>),
}

impl<T: Real> Potential<T> {
    pub fn eval(&self, t: T) -> Result<T> {
        match self {
            Potential::Expr(e) => Ok(e.eval(t)?),
            Potential::Transformed(inv) => inv.at_t(t),
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            Potential::Expr(e) => Some(e),
            Potential::Transformed(_) => None,
        }
    }
}

/// `-v'' + I(t) v = λ v` on `[alpha, beta]`.
#[derive(Clone, Debug)]
pub struct SchrodingerSlp<T> {
    pub invariant: Potential<T>,
    pub alpha: T,
    pub beta: T,
    pub left: BoundaryCoeffs<T>,
    pub right: BoundaryCoeffs<T>,
}

impl<T: Real> SchrodingerSlp<T> {
    pub fn dirichlet(invariant: Expr, alpha: T, beta: T) -> Self {
        SchrodingerSlp {
            invariant: Potential::Expr(invariant),
            alpha,
            beta,
            left: BoundaryCoeffs::dirichlet(),
            right: BoundaryCoeffs::dirichlet(),
        }
    }

    /// Parses the potential in the variable `t`.
    pub fn parse(invariant: &str, alpha: T, beta: T) -> Result<Self> {
        Ok(Self::dirichlet(Expr::parse(invariant, "t")?, alpha, beta))
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(DEFAULT_SAMPLES)
    }

    pub fn validate_with(&self, samples: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        if !interval_ok(self.alpha, self.beta) {
            out.push(Violation::Interval {
                lo: self.alpha.as_f64(),
                hi: self.beta.as_f64(),
            });
            return out;
        }
        check_bc(&mut out, &self.left, &self.right);
        for t in sample_points(self.alpha, self.beta, samples) {
            if let Err(e) = self.invariant.eval(t) {
                out.push(Violation::Evaluation {
                    coeff: "I",
                    at: t.as_f64(),
                    message: e.to_string(),
                });
                break;
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Either form of the problem.
#[derive(Clone, Debug)]
pub enum Problem<T> {
    Canonical(CanonicalSlp<T>),
    Schrodinger(SchrodingerSlp<T>),
}

impl<T: Real> Problem<T> {
    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Problem::Canonical(p) => p.validate(),
            Problem::Schrodinger(p) => p.validate(),
        }
    }
}

pub const DEFAULT_SAMPLES: usize = 201;

fn interval_ok<T: Real>(a: T, b: T) -> bool {
    a.is_finite() && b.is_finite() && a < b
}

fn check_bc<T: Real>(
    out: &mut Vec<Violation>,
    left: &BoundaryCoeffs<T>,
    right: &BoundaryCoeffs<T>,
) {
    for (side, bc) in [("left", left), ("right", right)] {
        if bc.is_degenerate() || !bc.d0.is_finite() || !bc.d1.is_finite() {
            out.push(Violation::DegenerateBoundary { side });
        }
    }
}

/// `n` equispaced points from `a` to `b` inclusive, with exact endpoints.
pub fn sample_points<T: Real>(a: T, b: T, n: usize) -> impl Iterator<Item = T> {
    let n = n.max(2);
    let last = T::from_index(n - 1);
    (0..n).map(move |i| {
        if i == n - 1 {
            b
        } else {
            a + (b - a) * T::from_index(i) / last
        }
    })
}

/// One reason a problem was rejected.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Interval {
        lo: f64,
        hi: f64,
    },
    DegenerateBoundary {
        side: &'static str,
    },
    NotPositive {
        coeff: &'static str,
        at: f64,
        value: f64,
    },
    Evaluation {
        coeff: &'static str,
        at: f64,
        message: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Interval { lo, hi } => {
                write!(f, "interval [{lo}, {hi}] is not finite and increasing")
            }
            Violation::DegenerateBoundary { side } => {
                write!(f, "{side} boundary coefficients are both zero")
            }
            Violation::NotPositive { coeff, at, value } => {
                write!(f, "{coeff} must be positive but {coeff}({at}) = {value}")
            }
            Violation::Evaluation { coeff, at, message } => {
                write!(f, "{coeff} cannot be evaluated at {at}: {message}")
            }
        }
    }
}

/// The generalized second Paine problem `I(t) = k/(t+m)²` on `(0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PaineSpec<T> {
    pub k: T,
    pub m: T,
}

impl<T: Real> PaineSpec<T> {
    pub fn new(k: T, m: T) -> Result<Self> {
        if !(k > T::zero() && k.is_finite()) {
            return Err(Error::param(format!(
                "k must be positive and finite, got {k}"
            )));
        }
        if !(m > T::zero() && m.is_finite()) {
            return Err(Error::param(format!(
                "m must be positive and finite, got {m}"
            )));
        }
        Ok(PaineSpec { k, m })
    }

    /// The classical parameters `k = 1`, `m = 0.1`.
    pub fn classical() -> Self {
        PaineSpec {
            k: T::one(),
            m: T::lit(0.1),
        }
    }

    pub fn target(&self, t: T) -> T {
        let s = t + self.m;
        self.k / (s * s)
    }

    pub fn invariant_expr(&self) -> Expr {
        let t = Node::var() + Node::c(self.m.as_f64());
        Expr::new(Node::c(self.k.as_f64()) / t.powf(2.0), "t")
    }

    pub fn schrodinger(&self) -> SchrodingerSlp<T> {
        SchrodingerSlp::dirichlet(self.invariant_expr(), T::zero(), T::PI())
    }
}

/// Leading eigenvalues of a problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    /// Interior grid points of the coarse level.
    pub grid_size: usize,
    pub extrapolated: bool,
    /// `|λ_fine - λ_coarse| / 3` when extrapolated, NaN otherwise.
    pub error_estimates: Vec<T>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validation_examples() {
        let ok = CanonicalSlp::parse("1", "0", "1", 0.0, PI).unwrap();
        assert!(ok.validate().is_empty());

        let r_sign = CanonicalSlp::parse("1", "0", "x", -1.0, 1.0).unwrap();
        let v = r_sign.validate();
        assert!(matches!(v[..], [Violation::NotPositive { coeff: "r", at, .. }] if at <= 0.0));

        let mut bad_bc = ok.clone();
        bad_bc.left = BoundaryCoeffs::new(0.0, 0.0);
        assert_eq!(
            bad_bc.validate(),
            vec![Violation::DegenerateBoundary { side: "left" }]
        );

        let backwards = CanonicalSlp::parse("1", "0", "1", 1.0, 0.0).unwrap();
        assert!(matches!(
            backwards.validate()[..],
            [Violation::Interval { .. }]
        ));

        let ln = CanonicalSlp::parse("1", "ln(x)", "1", 0.0, 1.0).unwrap();
        assert!(matches!(
            ln.validate()[..],
            [Violation::Evaluation { coeff: "q", .. }]
        ));
    }

    #[test]
    fn paine_problem() {
        let s = PaineSpec::new(1.0f64, 0.1).unwrap().schrodinger();
        assert!(s.validate().is_empty());
        assert!((s.invariant.eval(0.0).unwrap() - 100.0).abs() < 1e-12);
        assert!((s.invariant.eval(PI).unwrap() - 1.0 / (PI + 0.1).powi(2)).abs() < 1e-15);
        let s2 = PaineSpec::new(2.0, 1.0).unwrap();
        assert_eq!(s2.target(0.0), 2.0);
        assert_eq!(PaineSpec::new(0.75, 0.5).unwrap().target(0.0), 3.0);
        assert!(s.left.is_dirichlet() && s.right.is_dirichlet());
        assert!(PaineSpec::new(0.0, 0.1).is_err());
        assert!(PaineSpec::new(1.0, -0.1).is_err());
    }

    #[test]
    fn sample_points_hit_both_ends() {
        let v: Vec<f64> = sample_points(0.0, 0.3, 4).collect();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.3);
    }
}
