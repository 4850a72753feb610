//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};
use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One GK15 panel: `(kronrod, |kronrod - gauss|)`.
pub fn gk15<T: Real>(f: &impl Fn(T) -> Result<T>, a: T, b: T) -> Result<(T, T)> {
    let c = (a + b) / T::lit(2.0);
    let h = (b - a) / T::lit(2.0);
    let fc = f(c)?;
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let s = f(c - dx)? + f(c + dx)?;
        k = k + s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::lit(WG[i / 2]);
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Integral with its error estimate and the worst accepted panel.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
}

/// Adaptive bisection until every accepted panel has error estimate
/// `<= tol`. Fails if a panel cannot be split further, naming the worst one.
pub fn integrate<T: Real>(f: impl Fn(T) -> Result<T>, a: T, b: T, tol: T) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
        });
    }
    if a > b {
        let q = integrate(f, b, a, tol)?;
        return Ok(Quadrature {
            value: -q.value,
            error: q.error,
        });
    }
    let mut stack = vec![(a, b, 0u32)];
    let mut value = T::zero();
    let mut error = T::zero();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi)?;
        if !v.is_finite() {
            return Err(Error::numerical(format!(
                "quadrature produced a non-finite value on [{lo}, {hi}]"
            )));
        }
        let mid = (lo + hi) / T::lit(2.0);
        let splittable = depth < 60 && mid > lo && mid < hi;
        if e <= tol {
            value = value + v;
            error = error + e;
        } else if splittable {
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        } else {
            return Err(Error::numerical(format!(
                "quadrature did not converge: worst subinterval [{lo:e}, {hi:e}] has error estimate {e:e} > {tol:e}"
            )));
        }
    }
    Ok(Quadrature { value, error })
}
