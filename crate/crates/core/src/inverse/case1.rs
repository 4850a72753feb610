//! `q = 0`, `r = r₀`: power-law `p` from the indicial roots of `k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{require, shifted, t_var_plus, Branch, Built, InverseParams, Validity, Variant};
use crate::error::{Error, Result};
use crate::expr::Node;
use crate::slp::PaineSpec;

pub(crate) fn is_three_quarters(k: f64) -> bool {
    (k - 0.75).abs() <= 1e-12
}

/// `ρ` and `2ρ + 1` for the chosen root of `ρ² - ρ - k = 0`.
pub(crate) fn rho(k: f64, branch: Branch) -> (f64, f64) {
    let s = (1.0 + 4.0 * k).sqrt();
    match branch {
        Branch::Plus => (0.5 * (1.0 + s), 2.0 + s),
        Branch::Minus => (0.5 * (1.0 - s), 2.0 - s),
    }
}

pub(crate) fn build(spec: &PaineSpec<f64>, params: &InverseParams) -> Result<Built> {
    let (k, m, r0) = (spec.k, spec.m, params.r0);
    require(r0 > 0.0, || format!("case1 requires r0 > 0, got {r0}"))?;
    let x0 = params.x0.unwrap_or(0.0);
    let exponential = match params.variant {
        Variant::Exponential => true,
        Variant::Power => false,
        _ => params.branch == Branch::Minus && is_three_quarters(k),
    };
    if params.variant != Variant::Auto {
        require(is_three_quarters(k), || {
            format!("variants power/exponential exist only for k = 3/4, got k = {k}")
        })?;
    }
    if exponential {
        return Ok(exponential_form(m, r0, x0));
    }
    let branch = if params.variant == Variant::Power {
        Branch::Plus
    } else {
        params.branch
    };
    let (rho, s) = rho(k, branch);
    if s.abs() < 1e-8 {
        return Err(Error::param(format!(
            "2ρ+1 = {s:e} is too close to 0; use the exponential variant"
        )));
    }
    let base = Node::c(r0 * s) * shifted(x0);
    let p = Node::c(1.0 / r0) * base.clone().powf(4.0 * rho / s);
    let t_of_x = base.powf(1.0 / s) - Node::c(m);
    let x_of_t = t_var_plus(m).powf(s) / Node::c(r0 * s) - Node::c(x0);
    let a = -x0 + m.powf(s) / (r0 * s);
    let b = -x0 + (PI + m).powf(s) / (r0 * s);
    let extras = BTreeMap::from([
        ("rho", rho),
        ("two_rho_plus_one", s),
        ("x0", x0),
        ("r0", r0),
        ("delta0", m.powf(2.0 * rho)),
        ("gamma0", (PI + m).powf(2.0 * rho)),
    ]);
    Ok(Built {
        p,
        q: Node::c(0.0),
        r: Node::c(r0),
        a,
        b,
        t_of_x,
        x_of_t,
        exact: true,
        validity: Validity::default(),
        extras,
    })
}

/// The `ρ = -1/2` root at `k = 3/4`, where `2ρ + 1 = 0`.
fn exponential_form(m: f64, r0: f64, x0: f64) -> Built {
    let arg = Node::c(r0) * shifted(x0);
    let p = Node::c(1.0 / r0) * (Node::c(-2.0) * arg.clone()).exp();
    let t_of_x = arg.exp() - Node::c(m);
    let x_of_t = t_var_plus(m).ln() / Node::c(r0) - Node::c(x0);
    let extras = BTreeMap::from([
        ("rho", -0.5),
        ("x0", x0),
        ("r0", r0),
        ("delta0", 1.0 / m),
        ("gamma0", 1.0 / (PI + m)),
    ]);
    Built {
        p,
        q: Node::c(0.0),
        r: Node::c(r0),
        a: -x0 + m.ln() / r0,
        b: -x0 + (PI + m).ln() / r0,
        t_of_x,
        x_of_t,
        exact: true,
        validity: Validity::default(),
        extras,
    }
}
