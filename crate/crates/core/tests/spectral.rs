use std::f64::consts::PI;

use liouville_core::eigen::{solve_spectrum, Mesh, SolveOptions};
use liouville_core::inverse::{build, Branch, CaseLabel, InverseParams};
use liouville_core::liouville::{build_map, forward_transform, invariant_at_x, DEFAULT_QUAD_TOL};
use liouville_core::slp::{CanonicalSlp, PaineSpec, Problem};
use liouville_core::verify::{compare_forms, spectral_match};

/// λ₁ of `-v'' + v/(t+0.1)² = λv` on (0, π), Dirichlet, from a Richardson
/// pair at n = 16000 / 32001.
const PAINE_LAMBDA1: f64 = 1.519_865_821_099_347;

#[test]
fn paine_reference_eigenvalue() {
    let p = Problem::Schrodinger(PaineSpec::<f64>::classical().schrodinger());
    let a = solve_spectrum(&p, &SolveOptions::new(2000, 1, true)).unwrap();
    let b = solve_spectrum(&p, &SolveOptions::new(4000, 1, true)).unwrap();
    let (la, lb) = (a.eigenvalues[0], b.eigenvalues[0]);
    assert!((la - lb).abs() <= 1e-7, "{la} vs {lb}");
    assert!((lb - PAINE_LAMBDA1).abs() <= 1e-6, "{lb}");
}

#[test]
fn forward_transform_of_case4() {
    let r = build::<f64>(CaseLabel::Case4, &InverseParams::default()).unwrap();
    let (schr, map) = forward_transform(&r.canonical, DEFAULT_QUAD_TOL).unwrap();
    assert!((schr.beta - PI).abs() < 1e-10, "{}", schr.beta);
    assert!(schr.left.is_dirichlet() && schr.right.is_dirichlet());
    for i in 1..20 {
        let t = PI * i as f64 / 20.0;
        let x = map.x_of_t(t).unwrap();
        let want = 1.0 / (t + 0.1) / (t + 0.1);
        assert!((invariant_at_x(&r.canonical, x).unwrap() - want).abs() < 1e-9);
        assert!((map.t_of_x(x).unwrap() - t).abs() < 1e-12);
    }
}

#[test]
fn transform_rejects_non_positive_coefficients() {
    let c = CanonicalSlp::parse("x - 1", "0", "1", 0.0, 2.0).unwrap();
    let e = forward_transform(&c, DEFAULT_QUAD_TOL).unwrap_err();
    assert!(e.is_input(), "{e}");
    let c = CanonicalSlp::parse("1", "0", "1", 2.0, 1.0).unwrap();
    assert!(build_map(&c, DEFAULT_QUAD_TOL).unwrap_err().is_input());
}

/// Oracle-first: spectra of every exact construction agree with the
/// Schrödinger form within five combined Richardson estimates.
#[test]
fn exact_constructions_share_the_paine_spectrum() {
    let cases = [
        (CaseLabel::Case4, InverseParams::default()),
        (
            CaseLabel::Case1,
            InverseParams {
                k: 2.0,
                ..Default::default()
            },
        ),
        (
            CaseLabel::Case1,
            InverseParams {
                k: 0.75,
                ..Default::default()
            },
        ),
        (
            CaseLabel::Case1,
            InverseParams {
                k: 0.75,
                branch: Branch::Minus,
                ..Default::default()
            },
        ),
        (
            CaseLabel::Case2A1,
            InverseParams {
                k: 0.75,
                q0: 1.0,
                ..Default::default()
            },
        ),
        (
            CaseLabel::Case2A2,
            InverseParams {
                k: 0.75,
                q0: 1.0,
                m: 2.0,
                ..Default::default()
            },
        ),
        (
            CaseLabel::Case2B,
            InverseParams {
                k: 3.0,
                q0: 1.0,
                ..Default::default()
            },
        ),
    ];
    for (label, p) in cases {
        let r = build::<f64>(label, &p).unwrap();
        let report = spectral_match(&r, 5, 2000, 101).unwrap();
        assert!(
            report.passed,
            "{label}: {:?} vs {:?}",
            report.spectral_gaps, report.gap_budgets
        );
        assert!(report.endpoint_error.unwrap() < 1e-10);
        assert_eq!(report.spectral_gaps.len(), 5);
    }
}

#[test]
fn classical_case4_first_eigenvalue() {
    let r = build::<f64>(CaseLabel::Case4, &InverseParams::default()).unwrap();
    let opts = SolveOptions::new(2000, 1, true).with_mesh(Mesh::Map(r.map.clone()));
    let s = solve_spectrum(&Problem::Canonical(r.canonical.clone()), &opts).unwrap();
    assert!(
        (s.eigenvalues[0] - PAINE_LAMBDA1).abs() < 1e-6,
        "{}",
        s.eigenvalues[0]
    );
}

/// `r ~ x^(2/3)` near `a ≈ 3e-4`: a uniform x-grid under-resolves the layer
/// that the map mesh spreads out evenly in t.
#[test]
fn map_mesh_resolves_endpoint_layer() {
    let r = build::<f64>(
        CaseLabel::Case2B,
        &InverseParams {
            k: 3.0,
            q0: 1.0,
            ..Default::default()
        },
    )
    .unwrap();
    let s = r.spec.schrodinger();
    let uniform = compare_forms(&r.canonical, Mesh::Uniform, &s, 3, 2000).unwrap();
    let mapped = compare_forms(&r.canonical, Mesh::Map(r.map.clone()), &s, 3, 2000).unwrap();
    assert!(mapped.within_budget());
    for (u, m) in uniform.gaps.iter().zip(&mapped.gaps) {
        assert!(*u < 1e-2, "{u}");
        assert!(m * 100.0 < *u, "{m} vs {u}");
    }
}

#[test]
fn verification_rejects_bad_requests() {
    let r = build::<f64>(CaseLabel::Case4, &InverseParams::default()).unwrap();
    assert!(spectral_match(&r, 0, 2000, 101).unwrap_err().is_input());
    assert!(spectral_match(&r, 11, 2000, 101).unwrap_err().is_input());
    assert!(spectral_match(&r, 3, 100, 101).unwrap_err().is_input());
}

/// Asymptotic constructions never fail verification outright; the report
/// records what went wrong.
#[test]
fn asymptotic_reports_carry_warnings() {
    let c1 = build::<f64>(
        CaseLabel::Case2C1,
        &InverseParams {
            k: 1.0,
            q0: 2.0,
            m: 1.0,
            ..Default::default()
        },
    )
    .unwrap();
    let report = spectral_match(&c1, 3, 400, 101).unwrap();
    assert!(report.passed && !report.exact);
    assert!(report.endpoint_error.is_none());
    assert!(report.roundtrip_residual.is_finite());

    let y = build::<f64>(
        CaseLabel::Case3Y,
        &InverseParams {
            k: 2.0,
            q0: 1.0,
            m: 20.0,
            ..Default::default()
        },
    )
    .unwrap();
    let report = spectral_match(&y, 3, 400, 101).unwrap();
    assert!(report.passed);
    assert!(!report.trust_warnings.is_empty());
    // The construction replaces an oscillating factor by its mean, so the
    // residual stays O(1) even deep in the large-argument regime.
    assert!(
        report.roundtrip_residual > 1e-2,
        "{}",
        report.roundtrip_residual
    );
}
