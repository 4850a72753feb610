//! `q/r` fixed by a reciprocal-linear weight: `p`, `q`, `r` are powers of
//! `x + x₀`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{require, shifted, t_var_plus, Built, InverseParams, Validity};
use crate::error::Result;
use crate::expr::Node;
use crate::slp::PaineSpec;

pub(crate) fn build(spec: &PaineSpec<f64>, params: &InverseParams) -> Result<Built> {
    let (k, m, c1) = (spec.k, spec.m, params.c1);
    require(c1 > 0.0, || format!("case4 requires C1 > 0, got {c1}"))?;
    let x0 = params.x0.unwrap_or(2.0 * (m / c1).sqrt());
    let s = shifted(x0);
    let p = Node::c(c1.powi(3) / 8.0) * s.clone().powf(3.0);
    let q = Node::c(0.5 * k * c1.powi(3)) * s.clone();
    let r = (Node::c(0.5 * c1) * s.clone()).powf(5.0);
    Ok(Built {
        p,
        q,
        r,
        a: -x0 + 2.0 * (m / c1).sqrt(),
        b: -x0 + 2.0 * ((PI + m) / c1).sqrt(),
        t_of_x: Node::c(c1 / 4.0) * s.powf(2.0) - Node::c(m),
        x_of_t: Node::c(2.0) * (t_var_plus(m) / Node::c(c1)).sqrt() - Node::c(x0),
        exact: true,
        validity: Validity::default(),
        extras: BTreeMap::from([
            ("C1", c1),
            ("x0", x0),
            ("delta0", (c1 * m).powi(2)),
            ("gamma0", c1 * c1 * (PI + m).powi(2)),
        ]),
    })
}

/// Free weight power `n_r ∈ (2, 3)`, with `q` of power `n_r - 2`.
pub(crate) fn build_general(spec: &PaineSpec<f64>, params: &InverseParams) -> Result<Built> {
    let (k, m, c1, nr) = (spec.k, spec.m, params.c1, params.n_r);
    require(c1 > 0.0, || {
        format!("case4-general requires C1 > 0, got {c1}")
    })?;
    require(nr > 2.0 && nr < 3.0, || {
        format!("n_r must lie in (2, 3), got {nr}")
    })?;
    let d = 3.0 - nr;
    // x + x0 = C1^(2-n_r) (t+m)^(3-n_r) / (3-n_r)
    let x_plus = |tau: f64| c1.powf(2.0 - nr) * tau.powf(d) / d;
    let x0 = params.x0.unwrap_or_else(|| x_plus(m));
    // C1 (t + m) = [C1 (3 - n_r) (x + x0)]^(1/(3 - n_r))
    let base = Node::c(c1 * d) * shifted(x0);
    let p = base.clone().powf((4.0 - nr) / d);
    let q = Node::c(c1 * c1 * k) * base.clone().powf((nr - 2.0) / d);
    let r = base.clone().powf(nr / d);
    Ok(Built {
        p,
        q,
        r,
        a: -x0 + x_plus(m),
        b: -x0 + x_plus(PI + m),
        t_of_x: base.powf(1.0 / d) / Node::c(c1) - Node::c(m),
        x_of_t: Node::c(c1.powf(2.0 - nr) / d) * t_var_plus(m).powf(d) - Node::c(x0),
        exact: true,
        validity: Validity::default(),
        extras: BTreeMap::from([
            ("C1", c1),
            ("x0", x0),
            ("n_r", nr),
            ("n_q", nr - 2.0),
            ("delta0", (c1 * m).powi(2)),
            ("gamma0", (c1 * (PI + m)).powi(2)),
        ]),
    })
}
