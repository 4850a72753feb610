//! Gamma and real-order Bessel functions of the first and second kind.
//!
//! `J_ν` uses the ascending series for `x <= max(12, 2ν)` and the Hankel
//! asymptotic expansion beyond. `Y_ν` uses Temme's series for `x < 2` and
//! Steed's continued fraction otherwise, both at an order reduced by an
//! integer and then recurred forward; this is uniform in `ν`, so integer
//! orders need no special handling.

use crate::error::{Error, Result};
use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)`, exactly zero at integers.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let r = x - two * (x / two).round();
    if r.fract() == T::zero() {
        T::zero()
    } else {
        (T::PI() * r).sin()
    }
}

/// `cos(πx)`, exactly zero at half-integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    sin_pi(x + T::lit(0.5))
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x.fract() == T::zero()
}

fn lanczos<T: Real>(x: T) -> T {
    // valid for x >= 0.5
    let x = x - T::one();
    let mut a = T::lit(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(*c) / (x + T::from_index(i));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + T::lit(0.5)) * (-t).exp() * a
}

/// Gamma function. Fails at the poles `0, -1, -2, ...`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::param(format!("gamma of non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::param(format!("gamma has a pole at {x}")));
    }
    if x < T::lit(0.5) {
        Ok(T::PI() / (sin_pi(x) * lanczos(T::one() - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// `1/Γ(x)`, entire: zero at the poles of Γ.
pub fn rgamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x < T::lit(0.5) {
        sin_pi(x) * lanczos(T::one() - x) / T::PI()
    } else {
        T::one() / lanczos(x)
    }
}

fn integer_order<T: Real>(nu: T) -> Option<i64> {
    (nu.fract() == T::zero()).then(|| nu.to_i64()).flatten()
}

fn j_series<T: Real>(nu: T, x: T) -> T {
    let half = x / T::lit(2.0);
    let q = -(half * half);
    let mut term = half.powf(nu) * rgamma(nu + T::one());
    let mut sum = term;
    let mut k = T::zero();
    let tiny = T::lit(T::EPS) * T::lit(0.1);
    loop {
        k = k + T::one();
        term = term * q / (k * (k + nu));
        sum = sum + term;
        if term.abs() <= tiny * sum.abs() && k > x {
            return sum;
        }
        if k > T::lit(500.0) {
            return sum;
        }
    }
}

/// Hankel expansion; returns `(J_ν(x), Y_ν(x))`.
fn hankel<T: Real>(nu: T, x: T) -> (T, T) {
    let mu = T::lit(4.0) * nu * nu;
    let (mut p, mut q) = (T::zero(), T::zero());
    let mut term = T::one();
    let mut prev = T::infinity();
    let tiny = T::lit(T::EPS) * T::lit(0.1);
    for k in 0..60usize {
        if k > 0 {
            let kk = T::from_index(k);
            let odd = T::from_index(2 * k - 1);
            term = term * (mu - odd * odd) / (kk * T::lit(8.0) * x);
        }
        // the series is asymptotic: stop at the smallest term
        if k > 2 && term.abs() > prev {
            break;
        }
        prev = term.abs();
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p = p + signed;
        } else {
            q = q + signed;
        }
        if term.abs() < tiny {
            break;
        }
    }
    let chi = x - (nu / T::lit(2.0) + T::lit(0.25)) * T::PI();
    let f = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let (s, c) = chi.sin_cos();
    (f * (p * c - q * s), f * (p * s + q * c))
}

fn j_nonneg<T: Real>(nu: T, x: T) -> T {
    if x <= T::lit(12.0).max(T::lit(2.0) * nu) {
        j_series(nu, x)
    } else {
        hankel(nu, x).0
    }
}

/// Bessel function of the first kind `J_ν(x)` for real `ν` and `x > 0`.
///
/// Negative orders use `J_{-n} = (-1)^n J_n` for integers and the
/// reflection `J_{-ν} = cos(νπ) J_ν - sin(νπ) Y_ν` otherwise. Returns NaN
/// for `x <= 0`.
pub fn bessel_j<T: Real>(nu: T, x: T) -> T {
    if !(x > T::zero()) || !nu.is_finite() {
        return T::nan();
    }
    if nu >= T::zero() {
        return j_nonneg(nu, x);
    }
    let a = -nu;
    if let Some(n) = integer_order(a) {
        let j = j_nonneg(a, x);
        return if n % 2 == 0 { j } else { -j };
    }
    cos_pi(a) * j_nonneg(a, x) - sin_pi(a) * y_nonneg(a, x)
}

/// Bessel function of the second kind `Y_ν(x)` for real `ν` and `x > 0`.
///
/// Negative orders use `Y_{-ν} = sin(νπ) J_ν + cos(νπ) Y_ν`. Returns NaN
/// for `x <= 0`.
pub fn bessel_y<T: Real>(nu: T, x: T) -> T {
    if !(x > T::zero()) || !nu.is_finite() {
        return T::nan();
    }
    if nu >= T::zero() {
        return y_nonneg(nu, x);
    }
    let a = -nu;
    sin_pi(a) * j_nonneg(a, x) + cos_pi(a) * y_nonneg(a, x)
}

// Taylor coefficients of 1/Γ(z) about 0 (c_1 = 1 first).
const RGAMMA_TAYLOR: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary functions for |μ| <= 1/2:
/// gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ), gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2.
fn temme_gammas<T: Real>(mu: T) -> (T, T) {
    let (mut g1, mut g2) = (T::zero(), T::zero());
    let mut pow = T::one();
    for (j, c) in RGAMMA_TAYLOR.iter().enumerate() {
        let c = T::lit(*c);
        if j % 2 == 0 {
            g2 = g2 + c * pow;
        } else {
            g1 = g1 - c * pow;
            pow = pow * mu * mu;
        }
    }
    (g1, g2)
}

/// Y_ν(x) for ν >= 0 by the Temme / Steed method.
fn y_nonneg<T: Real>(nu: T, x: T) -> T {
    let eps = T::lit(T::EPS);
    let fpmin = T::lit(1e-30);
    let two = T::lit(2.0);
    let pi = T::PI();
    let small = x < two;
    let nl = if small {
        (nu + T::lit(0.5)).floor().to_usize().unwrap_or(0)
    } else {
        (nu - x + T::lit(1.5))
            .floor()
            .max(T::zero())
            .to_usize()
            .unwrap_or(0)
    };
    let xmu = nu - T::from_index(nl);
    let xmu2 = xmu * xmu;
    let xi = T::one() / x;
    let xi2 = two * xi;
    let w = xi2 / pi;

    // CF1: f = J'_ν / J_ν, needed only at order μ after downward recurrence
    let mut isign = T::one();
    let mut h = (nu * xi).max(fpmin);
    let mut b = xi2 * nu;
    let mut d = T::zero();
    let mut c = h;
    for _ in 0..100_000 {
        b = b + xi2;
        d = b - d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = b - T::one() / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = T::one() / d;
        let del = c * d;
        h = del * h;
        if d < T::zero() {
            isign = -isign;
        }
        if (del - T::one()).abs() <= eps {
            break;
        }
    }
    let mut rjl = isign * fpmin;
    let mut rjpl = h * rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact = fact - xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == T::zero() {
        rjl = eps;
    }
    let f = rjpl / rjl;

    let (mut rymu, mut ry1);
    if small {
        let x2 = x / two;
        let pimu = pi * xmu;
        let fact = if pimu.abs() < eps {
            T::one()
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < eps {
            T::one()
        } else {
            e.sinh() / e
        };
        let (gam1, gam2) = temme_gammas(xmu);
        let gampl = gam2 - xmu * gam1;
        let gammi = gam2 + xmu * gam1;
        let mut ff = two / pi * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * pi);
        let mut q = T::one() / (ee * pi * gammi);
        let pimu2 = pimu / two;
        let fact3 = if pimu2.abs() < eps {
            T::one()
        } else {
            pimu2.sin() / pimu2
        };
        let r = pi * pimu2 * fact3 * fact3;
        let mut cc = T::one();
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut i = T::zero();
        loop {
            i = i + T::one();
            ff = (i * ff + p + q) / (i * i - xmu2);
            cc = cc * dd / i;
            p = p / (i - xmu);
            q = q / (i + xmu);
            let del = cc * (ff + r * q);
            sum = sum + del;
            sum1 = sum1 + cc * p - i * del;
            if del.abs() < (T::one() + sum.abs()) * eps || i > T::lit(10_000.0) {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
    } else {
        // CF2 (Steed): p + iq = (J'_μ + iY'_μ)/(J_μ + iY_μ)
        let mut a = T::lit(0.25) - xmu2;
        let mut p = -xi / two;
        let mut q = T::one();
        let br = two * x;
        let mut bi = two;
        let fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 1..100_000usize {
            a = a + T::from_index(2 * i);
            bi = bi + two;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < fpmin {
                dr = fpmin;
            }
            let fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < fpmin {
                cr = fpmin;
            }
            let den = dr * dr + di * di;
            dr = dr / den;
            di = -di / den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            let temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - T::one()).abs() + dli.abs() <= eps {
                break;
            }
        }
        let gam = (p - f) / q;
        let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
        if rjl < T::zero() {
            rjmu = -rjmu;
        }
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    for i in 1..=nl {
        let next = (xmu + T::from_index(i)) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = next;
    }
    rymu
}

/// Positive zeros of `J_ν` or `Y_ν` below `upto`, found by scanning for
/// sign changes on a fine grid and bisecting.
pub fn bessel_zeros<T: Real>(kind: crate::expr::BesselKind, nu: T, upto: T) -> Vec<T> {
    let f = |x: T| match kind {
        crate::expr::BesselKind::J => bessel_j(nu, x),
        crate::expr::BesselKind::Y => bessel_y(nu, x),
    };
    let step = T::lit(0.05);
    let mut zeros = Vec::new();
    let mut lo = T::lit(1e-3);
    let mut flo = f(lo);
    while lo < upto {
        let hi = (lo + step).min(upto);
        let fhi = f(hi);
        if fhi == T::zero() {
            zeros.push(hi);
        } else if flo * fhi < T::zero() {
            let (mut a, mut b, mut fa) = (lo, hi, flo);
            for _ in 0..200 {
                let m = (a + b) / T::lit(2.0);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m);
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < T::zero() {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            zeros.push((a + b) / T::lit(2.0));
        }
        lo = hi;
        flo = fhi;
    }
    zeros
}

/// Parameters of the generalized Bessel equation
/// `x² y'' + (2p̄+1) x y' + (ᾱ² x^(2r̄) + β̄²) y = 0`,
/// solved by `x^(-p̄) Z_{q̄/r̄}(ᾱ x^r̄ / r̄)` with `q̄ = √(p̄² - β̄²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BowmanParams<T> {
    pub p_bar: T,
    pub alpha_bar: T,
    pub beta_bar_sq: T,
    pub r_bar: T,
}

impl<T: Real> BowmanParams<T> {
    /// `q̄`, or `None` when it would be imaginary.
    pub fn q_bar(&self) -> Option<T> {
        let d = self.p_bar * self.p_bar - self.beta_bar_sq;
        (d >= T::zero()).then(|| d.sqrt())
    }

    pub fn order(&self) -> Option<T> {
        self.q_bar().map(|q| q / self.r_bar)
    }

    /// `x^(-p̄) [c1 J_{q̄/r̄ + shift}(s) + c2 Y_{q̄/r̄ + shift}(s)]`, `s = ᾱ x^r̄ / r̄`.
    /// `order_shift` exists for negative controls.
    pub fn solution(&self, c1: T, c2: T, order_shift: T, x: T) -> Result<T> {
        let nu = self
            .order()
            .ok_or_else(|| Error::param("complex Bessel order (p̄² < β̄²)"))?
            + order_shift;
        let s = self.alpha_bar * x.powf(self.r_bar) / self.r_bar;
        let mut z = T::zero();
        if c1 != T::zero() {
            z = z + c1 * bessel_j(nu, s);
        }
        if c2 != T::zero() {
            z = z + c2 * bessel_y(nu, s);
        }
        Ok(x.powf(-self.p_bar) * z)
    }
}

/// Residual of the generalized Bessel equation at the candidate solution
/// [`BowmanParams::solution`], with derivatives from five-point differences.
pub fn bessel_ode_residual<T: Real>(params: &BowmanParams<T>, c1: T, c2: T, x: T) -> Result<T> {
    candidate_residual(params, x, |t| params.solution(c1, c2, T::zero(), t))
}

/// Same residual for an arbitrary candidate function.
pub fn candidate_residual<T: Real>(
    params: &BowmanParams<T>,
    x: T,
    y: impl Fn(T) -> Result<T>,
) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::param("Bessel equation residual needs x > 0"));
    }
    let h = (T::lit(1e-3) * x.abs().max(T::one())).min(x / T::lit(4.0));
    let ys = [y(x - h - h)?, y(x - h)?, y(x)?, y(x + h)?, y(x + h + h)?];
    let twelve = T::lit(12.0);
    let d1 = (ys[0] - T::lit(8.0) * ys[1] + T::lit(8.0) * ys[3] - ys[4]) / (twelve * h);
    let d2 = (-ys[0] + T::lit(16.0) * ys[1] - T::lit(30.0) * ys[2] + T::lit(16.0) * ys[3] - ys[4])
        / (twelve * h * h);
    let p = params;
    let a2 = p.alpha_bar * p.alpha_bar;
    Ok(x * x * d2
        + (T::lit(2.0) * p.p_bar + T::one()) * x * d1
        + (a2 * x.powf(T::lit(2.0) * p.r_bar) + p.beta_bar_sq) * ys[2])
}
