//! `p` and `r` both non-constant, `q = q₀`. The subcase follows the sign of
//! `1 + 4(k - q₀)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{
    clip_t, indicial_roots, require, shifted, t_var_plus, Branch, Built, InverseParams, RootKind,
    Validity, Variant,
};
use crate::error::{Error, Result};
use crate::expr::Node;
use crate::slp::PaineSpec;

pub(crate) fn build(
    spec: &PaineSpec<f64>,
    params: &InverseParams,
    variant: Variant,
) -> Result<Built> {
    let (k, q0) = (spec.k, params.q0);
    require(q0 != 0.0, || "case2 requires q0 != 0".into())?;
    let roots = indicial_roots(k, q0);
    let want = match variant {
        Variant::A1 | Variant::A2 => RootKind::Equal,
        Variant::B => RootKind::RealDistinct,
        _ => RootKind::Complex,
    };
    if roots.kind != want {
        let need = match want {
            RootKind::Equal => "1 + 4k = 4q0",
            RootKind::RealDistinct => "1 + 4k > 4q0",
            RootKind::Complex => "1 + 4k < 4q0",
        };
        return Err(Error::param(format!(
            "variant {variant:?} requires {need}, but 1 + 4(k - q0) = {}",
            roots.discriminant
        )));
    }
    let x0 = params.x0.unwrap_or(0.0);
    let m = spec.m;
    let mut built = match variant {
        Variant::A1 => a1(m, x0),
        Variant::A2 => a2(m, x0)?,
        Variant::B => b(m, x0, roots.discriminant, params.branch),
        Variant::C1 => c1(m, x0, roots.mu)?,
        _ => c2(m, x0, roots.mu)?,
    };
    built.q = Node::c(q0);
    built.extras.insert("x0", x0);
    built.extras.insert("q0", q0);
    built.extras.insert("discriminant", roots.discriminant);
    Ok(built)
}

fn a1(m: f64, x0: f64) -> Built {
    let p = Node::c(1.0);
    let r = (Node::c(2.0) * shifted(x0)).exp();
    Built {
        p,
        q: Node::c(0.0),
        r,
        a: -x0 + m.ln(),
        b: -x0 + (PI + m).ln(),
        t_of_x: shifted(x0).exp() - Node::c(m),
        x_of_t: t_var_plus(m).ln() - Node::c(x0),
        exact: true,
        validity: Validity::default(),
        extras: BTreeMap::from([("rho", 0.5), ("delta0", m), ("gamma0", PI + m)]),
    }
}

/// Second solution `τ^½ ln τ` of the double root.
fn a2(m: f64, x0: f64) -> Result<Built> {
    require(m > 1.0, || {
        format!("case2-A2 needs m > 1 (p vanishes where t + m = 1), got m = {m}")
    })?;
    let s = Node::c(3.0) * shifted(x0);
    let p = s.clone().powf(4.0 / 3.0);
    let r = (Node::c(2.0) * s.clone().powf(1.0 / 3.0)).exp();
    let t_of_x = s.powf(1.0 / 3.0).exp() - Node::c(m);
    let x_of_t = t_var_plus(m).ln().powf(3.0) / Node::c(3.0) - Node::c(x0);
    let (lm, lb) = (m.ln(), (PI + m).ln());
    Ok(Built {
        p,
        q: Node::c(0.0),
        r,
        a: -x0 + lm.powi(3) / 3.0,
        b: -x0 + lb.powi(3) / 3.0,
        t_of_x,
        x_of_t,
        exact: true,
        validity: Validity::default(),
        extras: BTreeMap::from([
            ("rho", 0.5),
            ("delta0", m * lm * lm),
            ("gamma0", (PI + m) * lb * lb),
        ]),
    })
}

fn b(m: f64, x0: f64, disc: f64, branch: Branch) -> Built {
    // d = 2ρ - 1
    let d = match branch {
        Branch::Plus => disc.sqrt(),
        Branch::Minus => -disc.sqrt(),
    };
    let rho = 0.5 * (1.0 + d);
    let base = Node::c(d) * shifted(x0);
    let p = Node::c(d * d) * shifted(x0).powf(2.0);
    let r = base.clone().powf(2.0 / d);
    Built {
        p,
        q: Node::c(0.0),
        r,
        a: -x0 + m.powf(d) / d,
        b: -x0 + (PI + m).powf(d) / d,
        t_of_x: base.powf(1.0 / d) - Node::c(m),
        x_of_t: t_var_plus(m).powf(d) / Node::c(d) - Node::c(x0),
        exact: true,
        validity: Validity::default(),
        extras: BTreeMap::from([
            ("rho", rho),
            ("delta0", m.powf(2.0 * rho)),
            ("gamma0", (PI + m).powf(2.0 * rho)),
        ]),
    }
}

/// `x + x₀` as a function of `τ` for which the C1 coefficients are exact;
/// the constructor truncates it to `τ - 1`.
pub fn c1_exact_x(mu: f64, tau: f64) -> f64 {
    let l = tau.ln();
    0.5 * l + (2.0 * mu * l).sin() / (4.0 * mu)
}

/// As [`c1_exact_x`] for C2, whose leading term is `(μ²/3)(τ - 1)³`.
pub fn c2_exact_x(mu: f64, tau: f64) -> f64 {
    let l = tau.ln();
    0.5 * l - (2.0 * mu * l).sin() / (4.0 * mu)
}

/// Interior points of `(lo, hi)` where `μ ln τ` hits `offset + nπ`.
fn crossings(mu: f64, lo: f64, hi: f64, offset: f64) -> Vec<f64> {
    let (u0, u1) = (mu * lo.ln(), mu * hi.ln());
    let first = ((u0 - offset) / PI).floor() as i64 + 1;
    let last = ((u1 - offset) / PI).ceil() as i64 - 1;
    (first..=last)
        .map(|n| ((offset + n as f64 * PI) / mu).exp())
        .collect()
}

fn guard(mu: f64, tau: f64, offset: f64, what: &str) -> Result<()> {
    let u = mu * tau.ln();
    let n = ((u - offset) / PI).round();
    if (u - offset - n * PI).abs() < 1e-10 {
        let which = if offset == 0.0 {
            format!("{n}π")
        } else {
            format!("π({} - 1/2)", n + 1.0)
        };
        return Err(Error::param(format!(
            "μ ln({tau}) = {which} makes {what} vanish"
        )));
    }
    Ok(())
}

fn tau_warnings(validity: &mut Validity, m: f64) {
    let (lo, hi) = (m, PI + m);
    if (lo - 1.0).abs() > 0.5 || (hi - 1.0).abs() > 0.5 {
        validity.warnings.push(format!(
            "τ = t + m ranges over [{lo}, {hi}], leaving |τ - 1| <= 0.5"
        ));
    }
    validity.expansion_point = Some("tau = 1".into());
    validity.trust_region = clip_t(0.5 - m, 1.5 - m);
}

fn c1(m: f64, x0: f64, mu: f64) -> Result<Built> {
    let half_pi = PI / 2.0;
    guard(mu, m, half_pi, "δ₀")?;
    guard(mu, PI + m, half_pi, "γ₀")?;
    let mut validity = Validity::default();
    tau_warnings(&mut validity, m);
    for tau in crossings(mu, m, PI + m, half_pi) {
        validity
            .warnings
            .push(format!("p vanishes inside the interval at τ = {tau}"));
    }
    let tau = Node::c(1.0) + shifted(x0);
    let p = (Node::c(mu) * tau.clone().ln()).cos().powf(4.0);
    let r = tau.clone().powf(2.0);
    let cm = (mu * m.ln()).cos();
    let cb = (mu * (PI + m).ln()).cos();
    Ok(Built {
        p,
        q: Node::c(0.0),
        r,
        a: -x0 + m - 1.0,
        b: -x0 + PI + m - 1.0,
        t_of_x: tau - Node::c(m),
        x_of_t: Node::var() + Node::c(m - 1.0 - x0),
        exact: false,
        validity,
        extras: BTreeMap::from([
            ("rho", 0.5),
            ("mu", mu),
            ("delta0", m * cm * cm),
            ("gamma0", (PI + m) * cb * cb),
        ]),
    })
}

fn c2(m: f64, x0: f64, mu: f64) -> Result<Built> {
    guard(mu, m, 0.0, "δ₀")?;
    guard(mu, PI + m, 0.0, "γ₀")?;
    let mut validity = Validity::default();
    tau_warnings(&mut validity, m);
    for tau in crossings(mu, m, PI + m, 0.0) {
        validity
            .warnings
            .push(format!("p vanishes inside the interval at τ = {tau}"));
    }
    let mu2 = mu * mu;
    let tau = Node::c(1.0) + (Node::c(3.0 / mu2) * shifted(x0)).cbrt();
    let p = (Node::c(mu) * tau.clone().ln()).sin().powf(4.0);
    let r = tau.clone().powf(2.0);
    let sm = (mu * m.ln()).sin();
    let sb = (mu * (PI + m).ln()).sin();
    Ok(Built {
        p,
        q: Node::c(0.0),
        r,
        a: -x0 + mu2 / 3.0 * (m - 1.0).powi(3),
        b: -x0 + mu2 / 3.0 * (PI + m - 1.0).powi(3),
        t_of_x: tau - Node::c(m),
        x_of_t: Node::c(mu2 / 3.0) * (Node::var() + Node::c(m - 1.0)).powf(3.0) - Node::c(x0),
        exact: false,
        validity,
        extras: BTreeMap::from([
            ("rho", 0.5),
            ("mu", mu),
            ("delta0", m * sm * sm),
            ("gamma0", (PI + m) * sb * sb),
        ]),
    })
}
