//! `q = q₀` and `r = r₀` both constant: `p` from Bessel solutions through
//! Bowman's rewriting, truncated for small (J) or large (Y) arguments
//! `τ̄ = √(q₀/r₀) (t + m)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{clip_t, require, shifted, t_var_plus, Built, InverseParams, Validity};
use crate::error::{Error, Result};
use crate::expr::{BesselKind, Node};
use crate::slp::PaineSpec;
use crate::special::{bessel_j, bessel_y, bessel_zeros, gamma};

const ZERO_TOL: f64 = 1e-8;

fn order(k: f64) -> f64 {
    0.5 * (4.0 * k + 1.0).sqrt()
}

fn check_params(params: &InverseParams) -> Result<(f64, f64)> {
    let (q0, r0) = (params.q0, params.r0);
    require(q0 > 0.0 && r0 > 0.0, || {
        format!("case3 requires q0 > 0 and r0 > 0, got q0 = {q0}, r0 = {r0}")
    })?;
    Ok((q0, r0))
}

/// Rejects endpoints on a zero of `Z_ν` and warns about interior ones.
fn zero_guards(kind: BesselKind, nu: f64, lo: f64, hi: f64, validity: &mut Validity) -> Result<()> {
    let zeros = bessel_zeros(kind, nu, hi + 1.0);
    for (end, at) in [("left", lo), ("right", hi)] {
        if let Some(z) = zeros.iter().find(|z| (*z - at).abs() <= ZERO_TOL) {
            return Err(Error::param(format!(
                "{end} endpoint τ̄ = {at} lies on the zero {z} of {}_{nu}",
                kind_letter(kind)
            )));
        }
    }
    for z in zeros.iter().filter(|z| **z > lo && **z < hi) {
        validity.warnings.push(format!(
            "p vanishes inside the interval where τ̄ = {z} (zero of {}_{nu})",
            kind_letter(kind)
        ));
    }
    Ok(())
}

fn kind_letter(kind: BesselKind) -> &'static str {
    match kind {
        BesselKind::J => "J",
        BesselKind::Y => "Y",
    }
}

/// Small-argument branch with `J_ν`, `ν = ½√(4k+1)`.
pub(crate) fn build_j(spec: &PaineSpec<f64>, params: &InverseParams) -> Result<Built> {
    let (q0, r0) = check_params(params)?;
    let (k, m) = (spec.k, spec.m);
    let x0 = params.x0.unwrap_or(0.0);
    let nu = order(k);
    let g = gamma(nu + 1.0)?;
    let gamma_tri = (nu + 1.0) * g * g;
    let c = 0.5 * gamma_tri * (q0 * r0).sqrt();
    let e = 1.0 / (2.0 + 2.0 * nu);
    let scale = (q0 / r0).sqrt();
    let gamma_dia = 2.0 / scale * c.powf(e);

    let (lo, hi) = (scale * m, scale * (PI + m));
    let mut validity = Validity {
        expansion_point: Some("tau_bar -> 0".into()),
        trust_region: clip_t(0.0, 0.5 / scale - m),
        warnings: Vec::new(),
    };
    zero_guards(BesselKind::J, nu, lo, hi, &mut validity)?;
    if hi > 0.5 {
        validity.warnings.push(format!(
            "τ̄ reaches {hi} > 0.5, outside the small-argument regime"
        ));
    }

    let xbar = (Node::c(c) * shifted(x0)).powf(e);
    let p = Node::c(4.0 / r0)
        * xbar.clone().powf(2.0)
        * Node::bessel(BesselKind::J, nu, Node::c(2.0) * xbar).powf(4.0);
    let t_of_x = Node::c(gamma_dia) * shifted(x0).powf(e) - Node::c(m);
    let x_of_t = (t_var_plus(m) / Node::c(gamma_dia)).powf(1.0 / e) - Node::c(x0);
    let end = |tau: f64| (tau / gamma_dia).powf(1.0 / e) - x0;
    let jl = bessel_j(nu, lo);
    let jh = bessel_j(nu, hi);
    Ok(Built {
        p,
        q: Node::c(q0),
        r: Node::c(r0),
        a: end(m),
        b: end(PI + m),
        t_of_x,
        x_of_t,
        exact: false,
        validity,
        extras: BTreeMap::from([
            ("nu", nu),
            ("gamma_tri", gamma_tri),
            ("gamma_dia", gamma_dia),
            ("x0", x0),
            ("q0", q0),
            ("r0", r0),
            ("tau_bar_min", lo),
            ("tau_bar_max", hi),
            ("delta0", lo * jl * jl),
            ("gamma0", hi * jh * jh),
        ]),
    })
}

/// Large-argument branch with `Y_ν`; the shift is called `x₁`.
pub(crate) fn build_y(spec: &PaineSpec<f64>, params: &InverseParams) -> Result<Built> {
    let (q0, r0) = check_params(params)?;
    let (k, m) = (spec.k, spec.m);
    let x1 = params.x0.unwrap_or(0.0);
    let nu = order(k);
    let scale = (q0 / r0).sqrt();
    let (lo, hi) = (scale * m, scale * (PI + m));
    let mut validity = Validity {
        expansion_point: Some("tau_bar -> infinity".into()),
        trust_region: clip_t(5.0 / scale - m, PI),
        warnings: Vec::new(),
    };
    zero_guards(BesselKind::Y, nu, lo, hi, &mut validity)?;
    if lo < 5.0 {
        validity.warnings.push(format!(
            "τ̄ drops to {lo} < 5, outside the large-argument regime"
        ));
    }
    let arg = Node::c(PI * (q0 * r0).sqrt()) * shifted(x1);
    let p = Node::c(PI * PI * q0)
        * shifted(x1).powf(2.0)
        * Node::bessel(BesselKind::Y, nu, arg).powf(4.0);
    let t_of_x = Node::c(PI * r0) * shifted(x1) - Node::c(m);
    let x_of_t = t_var_plus(m) / Node::c(PI * r0) - Node::c(x1);
    let yl = bessel_y(nu, lo);
    let yh = bessel_y(nu, hi);
    Ok(Built {
        p,
        q: Node::c(q0),
        r: Node::c(r0),
        a: -x1 + m / (PI * r0),
        b: -x1 + (PI + m) / (PI * r0),
        t_of_x,
        x_of_t,
        exact: false,
        validity,
        extras: BTreeMap::from([
            ("nu", nu),
            ("x1", x1),
            ("q0", q0),
            ("r0", r0),
            ("tau_bar_min", lo),
            ("tau_bar_max", hi),
            ("delta0", lo * yl * yl),
            ("gamma0", hi * yh * yh),
        ]),
    })
}
