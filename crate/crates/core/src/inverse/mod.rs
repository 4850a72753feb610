//! Canonical problems whose Liouville normal form is `I(t) = k/(t+m)²` on
//! `(0, π)`, built in closed form.
//!
//! Each constructor fixes part of `(p, q, r)` and solves for the rest. Cases
//! 1, 2-A, 2-B and 4 are exact; 2-C and 3 are valid near an expansion point
//! only and carry trust-region diagnostics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::liouville::TransformMap;
use crate::slp::{CanonicalSlp, PaineSpec};
use crate::Real;

mod case1;
mod case2;
mod case3;
mod case4;

pub use case2::{c1_exact_x, c2_exact_x};

/// Constructor names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    Case1,
    Case2A1,
    Case2A2,
    Case2B,
    Case2C1,
    Case2C2,
    Case3J,
    Case3Y,
    Case4,
    Case4General,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 10] = [
        CaseLabel::Case1,
        CaseLabel::Case2A1,
        CaseLabel::Case2A2,
        CaseLabel::Case2B,
        CaseLabel::Case2C1,
        CaseLabel::Case2C2,
        CaseLabel::Case3J,
        CaseLabel::Case3Y,
        CaseLabel::Case4,
        CaseLabel::Case4General,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Case1 => "case1",
            CaseLabel::Case2A1 => "case2-A1",
            CaseLabel::Case2A2 => "case2-A2",
            CaseLabel::Case2B => "case2-B",
            CaseLabel::Case2C1 => "case2-C1",
            CaseLabel::Case2C2 => "case2-C2",
            CaseLabel::Case3J => "case3-J",
            CaseLabel::Case3Y => "case3-Y",
            CaseLabel::Case4 => "case4",
            CaseLabel::Case4General => "case4-general",
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            CaseLabel::Case2C1 | CaseLabel::Case2C2 | CaseLabel::Case3J | CaseLabel::Case3Y
        )
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = CaseLabel::ALL.iter().map(|l| l.as_str()).collect();
                Error::param(format!(
                    "unknown case '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Root of the indicial equation to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::param(format!(
                "unknown branch '{s}', expected plus or minus"
            ))),
        }
    }
}

/// Sub-construction. `Power`/`Exponential` pick the `k = 3/4` forms of case 1,
/// the rest the subcases of case 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Variant {
    #[default]
    #[serde(rename = "auto")]
    Auto,
    A1,
    A2,
    B,
    C1,
    C2,
    #[serde(rename = "power")]
    Power,
    #[serde(rename = "exponential")]
    Exponential,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "auto" => Variant::Auto,
            "a1" => Variant::A1,
            "a2" => Variant::A2,
            "b" => Variant::B,
            "c1" => Variant::C1,
            "c2" => Variant::C2,
            "power" => Variant::Power,
            "exponential" | "exp" => Variant::Exponential,
            _ => {
                return Err(Error::param(format!(
                    "unknown variant '{s}', expected auto, A1, A2, B, C1, C2, power or exponential"
                )))
            }
        })
    }
}

/// Constructor inputs. Fields a case does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseParams {
    pub k: f64,
    pub m: f64,
    pub q0: f64,
    pub r0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    /// Shift of `x`; each case has its own default (`x₁` for the Y branch).
    pub x0: Option<f64>,
    pub branch: Branch,
    pub variant: Variant,
    pub n_r: f64,
}

impl Default for InverseParams {
    fn default() -> Self {
        InverseParams {
            k: 1.0,
            m: 0.1,
            q0: 1.0,
            r0: 1.0,
            c1: 2.0,
            x0: None,
            branch: Branch::Plus,
            variant: Variant::Auto,
            n_r: 2.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    RealDistinct,
    Equal,
    Complex,
}

/// Roots of `ρ² - ρ - (k - q₀) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndicialRoots {
    pub discriminant: f64,
    pub kind: RootKind,
    /// Larger root, or the common real part.
    pub rho1: f64,
    pub rho2: f64,
    pub mu: f64,
}

pub const EQUAL_ROOTS_TOL: f64 = 1e-12;

pub fn indicial_roots(k: f64, q0: f64) -> IndicialRoots {
    let disc = 1.0 + 4.0 * (k - q0);
    if disc.abs() <= EQUAL_ROOTS_TOL {
        IndicialRoots {
            discriminant: disc,
            kind: RootKind::Equal,
            rho1: 0.5,
            rho2: 0.5,
            mu: 0.0,
        }
    } else if disc > 0.0 {
        let s = disc.sqrt();
        IndicialRoots {
            discriminant: disc,
            kind: RootKind::RealDistinct,
            rho1: 0.5 * (1.0 + s),
            rho2: 0.5 * (1.0 - s),
            mu: 0.0,
        }
    } else {
        IndicialRoots {
            discriminant: disc,
            kind: RootKind::Complex,
            rho1: 0.5,
            rho2: 0.5,
            mu: 0.5 * (-disc).sqrt(),
        }
    }
}

/// Where an asymptotic construction can be trusted.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Validity {
    pub expansion_point: Option<String>,
    /// Sub-interval of `[0, π]` inside the trust region, if non-empty.
    pub trust_region: Option<[f64; 2]>,
    pub warnings: Vec<String>,
}

/// A constructed canonical problem with its closed-form Liouville map.
#[derive(Clone, Debug)]
pub struct InverseResult<T> {
    pub label: CaseLabel,
    pub canonical: CanonicalSlp<T>,
    pub map: TransformMap<T>,
    pub exact: bool,
    pub validity: Validity,
    /// Named constants of the construction, in a fixed order.
    pub extras: BTreeMap<&'static str, f64>,
    pub spec: PaineSpec<T>,
    pub params: InverseParams,
}

/// Shared output of the per-case constructors, all in `f64`.
pub(crate) struct Built {
    p: Node,
    q: Node,
    r: Node,
    a: f64,
    b: f64,
    t_of_x: Node,
    x_of_t: Node,
    exact: bool,
    validity: Validity,
    extras: BTreeMap<&'static str, f64>,
}

/// `x + x0`.
pub(crate) fn shifted(x0: f64) -> Node {
    Node::var() + Node::c(x0)
}

pub(crate) fn t_var_plus(m: f64) -> Node {
    Node::var() + Node::c(m)
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::param(msg()))
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::numerical(format!("{name} = {v} is not finite")))
    }
}

/// Runs the constructor for `label`.
pub fn build<T: Real>(label: CaseLabel, params: &InverseParams) -> Result<InverseResult<T>> {
    let spec = PaineSpec::new(params.k, params.m)?;
    for (name, v) in [
        ("q0", params.q0),
        ("r0", params.r0),
        ("C1", params.c1),
        ("n_r", params.n_r),
    ] {
        require(v.is_finite(), || format!("{name} must be finite, got {v}"))?;
    }
    if let Some(x0) = params.x0 {
        require(x0.is_finite(), || format!("x0 must be finite, got {x0}"))?;
    }
    if params.variant != Variant::Auto {
        let ok = match label {
            CaseLabel::Case1 => matches!(params.variant, Variant::Power | Variant::Exponential),
            CaseLabel::Case2A1 => params.variant == Variant::A1,
            CaseLabel::Case2A2 => params.variant == Variant::A2,
            CaseLabel::Case2B => params.variant == Variant::B,
            CaseLabel::Case2C1 => params.variant == Variant::C1,
            CaseLabel::Case2C2 => params.variant == Variant::C2,
            _ => false,
        };
        require(ok, || {
            format!("variant {:?} does not apply to {label}", params.variant)
        })?;
    }
    let built = match label {
        CaseLabel::Case1 => case1::build(&spec, params)?,
        CaseLabel::Case2A1 => case2::build(&spec, params, Variant::A1)?,
        CaseLabel::Case2A2 => case2::build(&spec, params, Variant::A2)?,
        CaseLabel::Case2B => case2::build(&spec, params, Variant::B)?,
        CaseLabel::Case2C1 => case2::build(&spec, params, Variant::C1)?,
        CaseLabel::Case2C2 => case2::build(&spec, params, Variant::C2)?,
        CaseLabel::Case3J => case3::build_j(&spec, params)?,
        CaseLabel::Case3Y => case3::build_y(&spec, params)?,
        CaseLabel::Case4 => case4::build(&spec, params)?,
        CaseLabel::Case4General => case4::build_general(&spec, params)?,
    };
    finish(label, params, spec, built)
}

/// Case 2 with the subcase picked from the discriminant (or `params.variant`).
pub fn build_case2<T: Real>(params: &InverseParams) -> Result<InverseResult<T>> {
    let label = match params.variant {
        Variant::Auto => match indicial_roots(params.k, params.q0).kind {
            RootKind::Equal => CaseLabel::Case2A1,
            RootKind::RealDistinct => CaseLabel::Case2B,
            RootKind::Complex => CaseLabel::Case2C1,
        },
        Variant::A1 => CaseLabel::Case2A1,
        Variant::A2 => CaseLabel::Case2A2,
        Variant::B => CaseLabel::Case2B,
        Variant::C1 => CaseLabel::Case2C1,
        Variant::C2 => CaseLabel::Case2C2,
        v => {
            return Err(Error::param(format!(
                "variant {v:?} does not apply to case 2"
            )))
        }
    };
    build(label, params)
}

fn finish<T: Real>(
    label: CaseLabel,
    params: &InverseParams,
    spec: PaineSpec<f64>,
    built: Built,
) -> Result<InverseResult<T>> {
    let a = finite("a", built.a)?;
    let b = finite("b", built.b)?;
    if !(a < b) {
        return Err(Error::param(format!(
            "{label}: constructed interval [{a}, {b}] is not increasing"
        )));
    }
    for (name, v) in &built.extras {
        finite(name, *v)?;
    }
    let canonical = CanonicalSlp::dirichlet(
        Expr::new(built.p, "x"),
        Expr::new(built.q, "x"),
        Expr::new(built.r, "x"),
        T::lit(a),
        T::lit(b),
    );
    canonical.ensure_valid()?;
    let map = TransformMap::closed(
        &canonical,
        Expr::new(built.t_of_x, "x"),
        Expr::new(built.x_of_t, "t"),
        T::zero(),
        T::PI(),
    );
    Ok(InverseResult {
        label,
        canonical,
        map,
        exact: built.exact,
        validity: built.validity,
        extras: built.extras,
        spec: PaineSpec {
            k: T::lit(spec.k),
            m: T::lit(spec.m),
        },
        params: params.clone(),
    })
}

/// Intersection of `[lo, hi]` with `[0, π]`.
pub(crate) fn clip_t(lo: f64, hi: f64) -> Option<[f64; 2]> {
    let (lo, hi) = (lo.max(0.0), hi.min(std::f64::consts::PI));
    (lo < hi).then_some([lo, hi])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicial_examples() {
        let r = indicial_roots(2.0, 0.0);
        assert_eq!(r.kind, RootKind::RealDistinct);
        assert_eq!((r.rho1, r.rho2), (2.0, -1.0));
        let r = indicial_roots(0.75, 0.0);
        assert_eq!((r.rho1, r.rho2), (1.5, -0.5));
        let r = indicial_roots(0.0, 1.0);
        assert_eq!(r.kind, RootKind::Complex);
        assert!((r.mu - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(indicial_roots(0.75, 1.0).kind, RootKind::Equal);
    }

    #[test]
    fn labels_round_trip() {
        for l in CaseLabel::ALL {
            assert_eq!(l.as_str().parse::<CaseLabel>().unwrap(), l);
        }
        assert!("case5".parse::<CaseLabel>().is_err());
    }

    #[test]
    fn case2_auto_routing() {
        let p = InverseParams {
            k: 0.75,
            q0: 1.0,
            ..Default::default()
        };
        assert_eq!(build_case2::<f64>(&p).unwrap().label, CaseLabel::Case2A1);
        let p = InverseParams {
            k: 3.0,
            q0: 1.0,
            ..Default::default()
        };
        assert_eq!(build_case2::<f64>(&p).unwrap().label, CaseLabel::Case2B);
        let p = InverseParams {
            k: 1.0,
            q0: 2.0,
            ..Default::default()
        };
        assert_eq!(build_case2::<f64>(&p).unwrap().label, CaseLabel::Case2C1);
    }
}
