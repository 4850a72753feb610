use std::f64::consts::PI;

use liouville_core::inverse::{
    build, build_case2, c1_exact_x, c2_exact_x, indicial_roots, Branch, CaseLabel, InverseParams,
    RootKind, Variant,
};
use liouville_core::verify::{asymptotic_profile, roundtrip_invariant, ROUNDTRIP_TOL};
use liouville_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> InverseParams {
    InverseParams::default()
}

/// Every exact construction used in the spectral checks.
fn exact_cases() -> Vec<(CaseLabel, InverseParams)> {
    let k34 = |branch| InverseParams {
        k: 0.75,
        branch,
        ..params()
    };
    vec![
        (CaseLabel::Case4, params()),
        (
            CaseLabel::Case4General,
            InverseParams {
                n_r: 2.75,
                ..params()
            },
        ),
        (CaseLabel::Case1, InverseParams { k: 2.0, ..params() }),
        (
            CaseLabel::Case1,
            InverseParams {
                k: 2.0,
                branch: Branch::Minus,
                ..params()
            },
        ),
        (CaseLabel::Case1, k34(Branch::Plus)),
        (CaseLabel::Case1, k34(Branch::Minus)),
        (
            CaseLabel::Case2A1,
            InverseParams {
                k: 0.75,
                q0: 1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2A2,
            InverseParams {
                k: 0.75,
                q0: 1.0,
                m: 2.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2B,
            InverseParams {
                k: 3.0,
                q0: 1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2B,
            InverseParams {
                k: 3.0,
                q0: 1.0,
                branch: Branch::Minus,
                ..params()
            },
        ),
    ]
}

#[test]
fn exact_cases_reproduce_the_invariant() {
    for (label, p) in exact_cases() {
        let r = build::<f64>(label, &p).unwrap();
        assert!(r.exact, "{label}");
        let res = roundtrip_invariant(&r, 101).unwrap();
        assert!(res <= ROUNDTRIP_TOL, "{label} {p:?}: {res:e}");
    }
}

#[test]
fn closed_form_maps_hit_the_paine_interval() {
    for (label, p) in exact_cases() {
        let r = build::<f64>(label, &p).unwrap();
        let (a, b) = r.map.domain_x();
        assert!(r.map.t_of_x(a).unwrap().abs() < 1e-12, "{label}");
        assert!((r.map.t_of_x(b).unwrap() - PI).abs() < 1e-12, "{label}");
        for i in 0..=20 {
            let t = PI * i as f64 / 20.0;
            let back = r.map.t_of_x(r.map.x_of_t(t).unwrap()).unwrap();
            assert!((back - t).abs() < 1e-11, "{label} at {t}: {back}");
        }
    }
}

#[test]
fn case1_documented_values() {
    let r = build::<f64>(CaseLabel::Case1, &InverseParams { k: 2.0, ..params() }).unwrap();
    assert_eq!(r.canonical.p.to_string(), "(5*x)^1.6");
    assert!((r.canonical.a - 2e-6).abs() < 1e-20);
    assert!((r.canonical.b - (PI + 0.1f64).powi(5) / 5.0).abs() < 1e-12);
    assert_eq!(r.extras["rho"], 2.0);

    let power = build::<f64>(
        CaseLabel::Case1,
        &InverseParams {
            k: 0.75,
            ..params()
        },
    )
    .unwrap();
    assert!((power.canonical.a - 2.5e-5).abs() < 1e-18);
    let p: f64 = power.canonical.p.eval(1.0).unwrap();
    assert!((p - 8.0).abs() < 1e-12, "{p}");

    let exp = build::<f64>(
        CaseLabel::Case1,
        &InverseParams {
            k: 0.75,
            branch: Branch::Minus,
            ..params()
        },
    )
    .unwrap();
    assert!((exp.canonical.a - 0.1f64.ln()).abs() < 1e-15);
    assert!((exp.canonical.b - (PI + 0.1).ln()).abs() < 1e-15);
    let p: f64 = exp.canonical.p.eval(0.0).unwrap();
    assert!((p - 1.0).abs() < 1e-15);
}

#[test]
fn branch_identities_for_random_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 50 {
        let k: f64 = rng.gen_range(0.0..10.0);
        if (k - 0.75).abs() < 1e-3 {
            continue;
        }
        let s = (1.0 + 4.0 * k).sqrt();
        for (branch, sign) in [(Branch::Plus, 1.0), (Branch::Minus, -1.0)] {
            let r = build::<f64>(
                CaseLabel::Case1,
                &InverseParams {
                    k,
                    branch,
                    ..params()
                },
            );
            let r = match r {
                Ok(r) => r,
                // 2ρ + 1 = 0 only at k = 3/4
                Err(e) => panic!("k={k}: {e}"),
            };
            let rho = r.extras["rho"];
            let s1 = r.extras["two_rho_plus_one"];
            let d = 3.0 - 4.0 * k;
            let tol = |v: f64| 1e-12 * v.abs().max(1.0);
            assert!((s1 - 2.0 * rho - 1.0).abs() <= tol(s1));
            assert!((s1 - d / (2.0 - sign * s)).abs() <= tol(s1), "k={k}");
            let e = 4.0 * rho / s1;
            assert!(
                (e - 2.0 * (1.0 - 4.0 * k + sign * s) / d).abs() <= tol(e),
                "k={k}"
            );
            let g = (2.0 * rho - 1.0) / s1;
            assert!(
                (g - (-(1.0 + 4.0 * k) + sign * 2.0 * s) / d).abs() <= tol(g),
                "k={k}"
            );
        }
        checked += 1;
    }
}

#[test]
fn indicial_boundary_routes_to_a_variants() {
    for q0 in [0.5, 1.0, 2.0, 7.25] {
        let k = q0 - 0.25;
        assert_eq!(indicial_roots(k, q0).kind, RootKind::Equal);
        let p = InverseParams { k, q0, ..params() };
        assert_eq!(build_case2::<f64>(&p).unwrap().label, CaseLabel::Case2A1);
        let a2 = InverseParams {
            m: 2.0,
            variant: Variant::A2,
            ..p
        };
        assert_eq!(build_case2::<f64>(&a2).unwrap().label, CaseLabel::Case2A2);
        let b = InverseParams {
            variant: Variant::B,
            ..p
        };
        assert!(matches!(build_case2::<f64>(&b), Err(Error::Parameter(_))));
    }
    assert_eq!(indicial_roots(3.0, 1.0).kind, RootKind::RealDistinct);
    assert_eq!(indicial_roots(1.0, 2.0).kind, RootKind::Complex);
}

#[test]
fn case2_documented_values() {
    let a1 = build::<f64>(
        CaseLabel::Case2A1,
        &InverseParams {
            k: 0.75,
            q0: 1.0,
            ..params()
        },
    )
    .unwrap();
    assert!((a1.canonical.a - 0.1f64.ln()).abs() < 1e-15);
    assert!((a1.extras["delta0"] - 0.1).abs() < 1e-15);
    assert!((a1.extras["gamma0"] - (PI + 0.1)).abs() < 1e-14);

    let b = build::<f64>(
        CaseLabel::Case2B,
        &InverseParams {
            k: 3.0,
            q0: 1.0,
            ..params()
        },
    )
    .unwrap();
    assert!((b.canonical.a - 0.001 / 3.0).abs() < 1e-17);
    assert!((b.canonical.b - (PI + 0.1).powi(3) / 3.0).abs() < 1e-12);
    let p: f64 = b.canonical.p.eval(2.0).unwrap();
    assert!((p - 36.0).abs() < 1e-12);

    let c1 = build::<f64>(
        CaseLabel::Case2C1,
        &InverseParams {
            k: 1.0,
            q0: 2.0,
            ..params()
        },
    )
    .unwrap();
    assert!((c1.extras["mu"] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((c1.canonical.a - (0.1 - 1.0)).abs() < 1e-15);
    assert!(!c1.exact);

    // A2 needs ln m > 0 for the cube-root map to stay real and increasing
    let bad = InverseParams {
        k: 0.75,
        q0: 1.0,
        ..params()
    };
    assert!(build::<f64>(CaseLabel::Case2A2, &bad).is_err());
}

#[test]
fn c1_truncation_ratio_stays_bounded() {
    let mu = 3f64.sqrt() / 2.0;
    let ratios: Vec<f64> = [1.1, 1.05, 1.025]
        .iter()
        .map(|&tau| (c1_exact_x(mu, tau) - (tau - 1.0)).abs() / (tau - 1.0).powi(2))
        .collect();
    for w in ratios.windows(2) {
        assert!(w[1] <= w[0] * 1.5, "{ratios:?}");
    }
    assert!(ratios.iter().all(|r| *r < 2.0), "{ratios:?}");
}

#[test]
fn c2_leading_coefficient() {
    for mu in [0.5, 3f64.sqrt() / 2.0, 1.5] {
        let tau = 1.025;
        let est = c2_exact_x(mu, tau) / (tau - 1.0f64).powi(3);
        let want = mu * mu / 3.0;
        assert!((est / want - 1.0).abs() <= 0.05, "mu={mu}: {est} vs {want}");
    }
}

/// The C1 construction uses `x = τ - 1` exactly, so at `t = 0` (τ = m) the
/// invariant differs from `k/m²` by a fixed amount. The residual is measured
/// against that value rather than assumed small.
#[test]
fn c1_profile_near_and_away_from_expansion_point() {
    let p = InverseParams {
        k: 1.0,
        q0: 2.0,
        m: 1.0,
        ..params()
    };
    let r = build::<f64>(CaseLabel::Case2C1, &p).unwrap();
    let profile = asymptotic_profile(&r, 101);
    assert_eq!(profile.len(), 101);
    let (t0, r0) = profile[0];
    assert_eq!(t0, 0.0);
    assert!((r0 - 0.5).abs() < 1e-9, "{r0}");
    assert!(profile.iter().all(|(_, v)| v.is_finite()));
}

#[test]
fn case3_documented_values() {
    let j = build::<f64>(
        CaseLabel::Case3J,
        &InverseParams {
            k: 0.75,
            q0: 1.0,
            x0: Some(0.0),
            ..params()
        },
    )
    .unwrap();
    assert!(
        (j.extras["gamma_tri"] - 2.0).abs() < 1e-13,
        "{:?}",
        j.extras
    );
    assert!((j.canonical.a - 6.25e-6).abs() < 1e-18, "{}", j.canonical.a);
    assert!(!j.exact);
    assert!(
        j.validity.warnings.iter().any(|w| w.contains("0.5")),
        "{:?}",
        j.validity.warnings
    );

    let y = build::<f64>(
        CaseLabel::Case3Y,
        &InverseParams {
            k: 0.75,
            q0: 1.0,
            x0: Some(0.0),
            ..params()
        },
    )
    .unwrap();
    assert!((y.canonical.a - 0.1 / PI).abs() < 1e-15);
    assert!((y.canonical.b - (PI + 0.1) / PI).abs() < 1e-15);
    assert!(!y.validity.warnings.is_empty());
}

#[test]
fn asymptotic_cases_report_trust_regions() {
    let cases = [
        (
            CaseLabel::Case2C1,
            InverseParams {
                k: 1.0,
                q0: 2.0,
                m: 1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2C2,
            InverseParams {
                k: 1.0,
                q0: 2.0,
                m: 1.5,
                ..params()
            },
        ),
        (
            CaseLabel::Case3J,
            InverseParams {
                k: 2.0,
                q0: 1.0,
                m: 0.1,
                ..params()
            },
        ),
        (
            CaseLabel::Case3Y,
            InverseParams {
                k: 2.0,
                q0: 1.0,
                m: 20.0,
                ..params()
            },
        ),
    ];
    for (label, p) in cases {
        let r = build::<f64>(label, &p).unwrap();
        assert!(!r.exact, "{label}");
        assert!(r.validity.expansion_point.is_some(), "{label}");
        let profile = asymptotic_profile(&r, 41);
        assert_eq!(profile.len(), 41);
    }
}

#[test]
fn parameter_errors_are_input_errors() {
    let bad = [
        (
            CaseLabel::Case4,
            InverseParams {
                c1: -1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case1,
            InverseParams {
                k: -1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case1,
            InverseParams {
                r0: 0.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2A1,
            InverseParams {
                k: 1.0,
                q0: 1.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case2B,
            InverseParams {
                k: 1.0,
                q0: 2.0,
                ..params()
            },
        ),
        (
            CaseLabel::Case4General,
            InverseParams {
                n_r: 3.5,
                ..params()
            },
        ),
        (
            CaseLabel::Case3J,
            InverseParams {
                q0: -1.0,
                ..params()
            },
        ),
        (CaseLabel::Case4, InverseParams { m: 0.0, ..params() }),
    ];
    for (label, p) in bad {
        let e = build::<f64>(label, &p).unwrap_err();
        assert!(e.is_input(), "{label} {p:?}: {e}");
    }
}

#[test]
fn single_precision_build() {
    let r = build::<f32>(CaseLabel::Case4, &params()).unwrap();
    let res = roundtrip_invariant(&r, 21).unwrap();
    assert!(res < 1e-2, "{res}");
}
