use std::f64::consts::PI;

use liouville_core::special::{
    bessel_j, bessel_ode_residual, bessel_y, candidate_residual, gamma, BowmanParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn samples(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.5..40.0)))
        .collect()
}

#[test]
fn tabulated_values() {
    // reference values from scipy.special
    let cases: [(f64, f64, f64, f64); 5] = [
        (0.0, 1.0, 0.765_197_686_557_966_6, 0.088_256_964_215_676_96),
        (1.0, 1.0, 0.440_050_585_744_933_5, -0.781_212_821_300_288_7),
        (
            0.0,
            10.0,
            -0.245_935_764_451_348_3,
            0.055_671_167_283_599_39,
        ),
        (2.0, 5.0, 0.046_565_116_277_752_21, 0.367_662_882_605_524_6),
        (5.0, 2.5, 0.019_501_625_134_503_22, -3.830_176_000_740_753),
    ];
    for (nu, x, j, y) in cases {
        assert!((bessel_j(nu, x) - j).abs() < 1e-13, "J_{nu}({x})");
        assert!(
            (bessel_y(nu, x) - y).abs() < 1e-12 * y.abs().max(1.0),
            "Y_{nu}({x})"
        );
    }
    assert!((gamma(4.5f64).unwrap() - 11.631_728_396_567_45).abs() < 1e-12);
}

#[test]
fn wronskian_holds() {
    for (nu, x) in samples(200, 1) {
        let w = bessel_j(nu + 1.0, x) * bessel_y(nu, x) - bessel_j(nu, x) * bessel_y(nu + 1.0, x);
        let scaled = w * PI * x / 2.0;
        assert!((scaled - 1.0).abs() <= 1e-9, "nu={nu} x={x}: {scaled}");
    }
}

#[test]
fn three_term_recurrence() {
    for (nu, x) in samples(200, 2) {
        let nu = nu + 1.0;
        for f in [bessel_j::<f64>, bessel_y::<f64>] {
            let (lo, mid, hi) = (f(nu - 1.0, x), f(nu, x), f(nu + 1.0, x));
            let scale = lo.abs().max(hi.abs()).max(mid.abs() * 2.0 * nu / x);
            let r = (lo + hi - 2.0 * nu / x * mid).abs() / scale;
            assert!(r <= 1e-9, "nu={nu} x={x}: {r}");
        }
    }
}

#[test]
fn half_order_closed_forms() {
    for i in 0..200 {
        let x = 0.1 + 0.2 * i as f64;
        let f = (2.0 / (PI * x)).sqrt();
        assert!((bessel_j(0.5, x) - f * x.sin()).abs() <= 1e-10);
        assert!((bessel_y(0.5, x) + f * x.cos()).abs() <= 1e-10);
        let j32 = f * (x.sin() / x - x.cos());
        assert!((bessel_j(1.5, x) - j32).abs() <= 1e-10, "{x}");
    }
}

/// `√τ J_ν(τ)` and `√τ Y_ν(τ)` with `ν = √(k + 1/4)` solve
/// `τ² ω'' + (τ² - k) ω = 0`.
#[test]
fn paine_bessel_equation() {
    for k in [0.75, 2.0] {
        let params = BowmanParams::<f64> {
            p_bar: -0.5,
            alpha_bar: 1.0,
            beta_bar_sq: -k,
            r_bar: 1.0,
        };
        let nu = params.order().unwrap();
        assert!((nu - (k + 0.25f64).sqrt()).abs() < 1e-15);
        for i in 0..=90 {
            let tau = 1.0 + 0.1 * i as f64;
            let rj =
                candidate_residual(&params, tau, |s: f64| Ok(s.sqrt() * bessel_j(nu, s))).unwrap();
            let ry =
                candidate_residual(&params, tau, |s: f64| Ok(s.sqrt() * bessel_y(nu, s))).unwrap();
            assert!(
                rj.abs() <= 1e-6 && ry.abs() <= 1e-6,
                "k={k} tau={tau}: {rj} {ry}"
            );
        }
    }
}

#[test]
fn bowman_solutions_and_negative_control() {
    let params = BowmanParams::<f64> {
        p_bar: 0.7,
        alpha_bar: 1.3,
        beta_bar_sq: 0.2,
        r_bar: 1.5,
    };
    for x in [0.4, 1.0, 2.2, 3.1] {
        let r = bessel_ode_residual(&params, 1.0, -0.4, x).unwrap();
        assert!(r.abs() < 1e-6, "{x}: {r}");
        let wrong = candidate_residual(&params, x, |s| params.solution(1.0, 0.0, 0.5, s)).unwrap();
        assert!(wrong.abs() > 1e-3, "{x}: {wrong}");
    }
    let complex = BowmanParams {
        beta_bar_sq: 1.0,
        ..params
    };
    assert!(complex.order().is_none());
    assert!(bessel_ode_residual(&complex, 1.0, 0.0, 1.0).is_err());
}
