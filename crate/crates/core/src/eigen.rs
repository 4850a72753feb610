//! Finite-difference discretizations and Sturm-sequence bisection.

use crate::error::{Error, Result};
use crate::liouville::{build_map, TransformMap, DEFAULT_QUAD_TOL};
use crate::slp::{CanonicalSlp, Problem, SchrodingerSlp, Spectrum, Violation};
use crate::Real;

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiag<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::param(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut radius = T::zero();
            if i > 0 {
                radius = radius + self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius = radius + self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> T {
        let e2 = self.off.iter().fold(T::one(), |m, &e| m.max(e * e));
        T::min_positive_value() * e2
    }

    /// Number of eigenvalues strictly below `sigma`: the count of negative
    /// pivots of `T - σI = L D Lᵀ`, tiny pivots pushed to `-pivmin`.
    pub fn sturm_count(&self, sigma: T) -> usize {
        self.count_with(sigma, self.pivmin())
    }

    fn count_with(&self, sigma: T, pivmin: T) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - sigma;
        for i in 0.. {
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < T::zero() {
                count += 1;
            }
            if i + 1 == self.len() {
                break;
            }
            let e = self.off[i];
            d = (self.diag[i + 1] - sigma) - e * e / d;
        }
        count
    }

    /// The `count` smallest eigenvalues, each bracketed to width `<= tol`.
    pub fn eig_bisect(&self, count: usize, tol: T) -> Result<Vec<T>> {
        eig_bisect(self, count, tol)
    }
}

/// Bisection iteration cap; `2⁻²⁰⁰` of any finite bracket is below `tol`.
pub const MAX_BISECTIONS: usize = 200;

pub const DEFAULT_BISECT_TOL: f64 = 1e-10;

/// The `count` smallest eigenvalues of `m`, ascending, each the midpoint of a
/// bracket of width `<= tol` (or of two adjacent floats).
pub fn eig_bisect<T: Real>(m: &SymTridiag<T>, count: usize, tol: T) -> Result<Vec<T>> {
    if count == 0 || count > m.len() {
        return Err(Error::param(format!(
            "count must be in 1..={}, got {count}",
            m.len()
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::param("bisection tolerance must be positive"));
    }
    if m.diag.iter().chain(&m.off).any(|v| !v.is_finite()) {
        return Err(Error::numerical("matrix has non-finite entries"));
    }
    let pivmin = m.pivmin();
    let (g_lo, g_hi) = m.gershgorin();
    let pad = T::lit(2.0 * T::EPS) * g_lo.abs().max(g_hi.abs()) + pivmin;
    let (g_lo, g_hi) = (g_lo - pad, g_hi + pad);

    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        // eigenvalue j (0-based) is the smallest σ with count(σ) > j
        let mut lo = out.last().copied().unwrap_or(g_lo).max(g_lo);
        if m.count_with(lo, pivmin) > j {
            lo = g_lo;
        }
        let mut hi = g_hi;
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            let mid = lo + (hi - lo) / T::lit(2.0);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                converged = true;
                break;
            }
            if m.count_with(mid, pivmin) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::numerical(format!(
                "bisection for eigenvalue {} stopped after {MAX_BISECTIONS} steps with bracket [{lo:e}, {hi:e}]",
                j + 1
            )));
        }
        out.push(lo + (hi - lo) / T::lit(2.0));
    }
    Ok(out)
}

fn eval_error(e: Error, what: &str, at: f64) -> Error {
    match e {
        Error::Expr(e) => Error::from_eval(e, &format!("{what} at {at}")),
        other => other,
    }
}

fn require_dirichlet(left: bool, right: bool) -> Result<()> {
    if left && right {
        Ok(())
    } else {
        Err(Error::param(
            "only Dirichlet boundary conditions are supported by the discretization",
        ))
    }
}

/// Three-point scheme on `n` uniform interior points of `[α, β]`.
pub fn discretize_schrodinger<T: Real>(
    problem: &SchrodingerSlp<T>,
    n: usize,
) -> Result<SymTridiag<T>> {
    if n < 3 {
        return Err(Error::param(format!(
            "grid size must be at least 3, got {n}"
        )));
    }
    require_dirichlet(problem.left.is_dirichlet(), problem.right.is_dirichlet())?;
    let h = (problem.beta - problem.alpha) / T::from_index(n + 1);
    let inv_h2 = T::one() / (h * h);
    let mut diag = Vec::with_capacity(n);
    for j in 1..=n {
        let t = problem.alpha + h * T::from_index(j);
        let v = problem
            .invariant
            .eval(t)
            .map_err(|e| eval_error(e, "potential", t.as_f64()))?;
        diag.push(T::lit(2.0) * inv_h2 + v);
    }
    SymTridiag::new(diag, vec![-inv_h2; n - 1])
}

/// Conservative scheme on `n` uniform interior points of `[a, b]`:
/// `A_jj = (p_{j-½} + p_{j+½})/h² + q_j`, `A_j,j+1 = -p_{j+½}/h²`, reduced
/// to `D^(-1/2) A D^(-1/2)` with `D = diag(r_j)`.
pub fn discretize_canonical<T: Real>(problem: &CanonicalSlp<T>, n: usize) -> Result<SymTridiag<T>> {
    if n < 3 {
        return Err(Error::param(format!(
            "grid size must be at least 3, got {n}"
        )));
    }
    require_dirichlet(problem.left.is_dirichlet(), problem.right.is_dirichlet())?;
    let h = (problem.b - problem.a) / T::from_index(n + 1);
    let inv_h2 = T::one() / (h * h);
    let half = T::lit(0.5);
    let mut flux = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = problem.a + h * (T::from_index(j) + half);
        flux.push(coeff(&problem.p, "p", x, true)? * inv_h2);
    }
    let mut diag = Vec::with_capacity(n);
    let mut scale = Vec::with_capacity(n);
    for j in 1..=n {
        let x = problem.a + h * T::from_index(j);
        let q = coeff(&problem.q, "q", x, false)?;
        let r = coeff(&problem.r, "r", x, true)?;
        diag.push((flux[j - 1] + flux[j] + q) / r);
        scale.push(r.sqrt());
    }
    let off = (0..n - 1)
        .map(|j| -flux[j + 1] / (scale[j] * scale[j + 1]))
        .collect();
    SymTridiag::new(diag, off)
}

fn coeff<T: Real>(e: &crate::expr::Expr, name: &'static str, x: T, positive: bool) -> Result<T> {
    let v = e
        .eval(x)
        .map_err(|err| Error::from_eval(err, &format!("{name} at {x}")))?;
    if positive && !(v > T::zero()) {
        return Err(Error::Validation(vec![Violation::NotPositive {
            coeff: name,
            at: x.as_f64(),
            value: v.as_f64(),
        }]));
    }
    Ok(v)
}

/// Conservative finite-volume scheme on an arbitrary increasing mesh
/// `a = x_0 < … < x_{n+1} = b`, symmetrized by the diagonal weight
/// `r(x_j) (h_{j-1} + h_j) / 2`. On a uniform mesh it agrees with
/// [`discretize_canonical`] up to rounding.
pub fn discretize_nonuniform<T: Real>(
    problem: &CanonicalSlp<T>,
    mesh: &[T],
) -> Result<SymTridiag<T>> {
    let n = mesh.len().saturating_sub(2);
    if n < 3 {
        return Err(Error::param(format!(
            "grid size must be at least 3, got {n}"
        )));
    }
    require_dirichlet(problem.left.is_dirichlet(), problem.right.is_dirichlet())?;
    if !mesh.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::numerical("mesh is not strictly increasing"));
    }
    let half = T::lit(0.5);
    // p at the n+1 cell midpoints, divided by the cell width
    let mut flux = Vec::with_capacity(n + 1);
    for w in mesh.windows(2) {
        let pm = coeff(&problem.p, "p", (w[0] + w[1]) * half, true)?;
        flux.push(pm / (w[1] - w[0]));
    }
    let mut diag = Vec::with_capacity(n);
    let mut scale = Vec::with_capacity(n);
    for j in 1..=n {
        let x = mesh[j];
        let vol = (mesh[j + 1] - mesh[j - 1]) * half;
        let q = coeff(&problem.q, "q", x, false)?;
        let r = coeff(&problem.r, "r", x, true)?;
        let weight = r * vol;
        diag.push((flux[j - 1] + flux[j] + q * vol) / weight);
        scale.push(weight.sqrt());
    }
    let off = (0..n - 1)
        .map(|j| -flux[j + 1] / (scale[j] * scale[j + 1]))
        .collect();
    SymTridiag::new(diag, off)
}

/// Grid used for canonical problems.
#[derive(Clone, Debug, Default)]
pub enum Mesh<T> {
    /// Uniform in `x`.
    Uniform,
    /// Uniform in the Liouville variable `t`, from a numerically built map.
    #[default]
    Liouville,
    /// Uniform in `t` under the supplied map.
    Map(TransformMap<T>),
}

#[derive(Clone, Debug)]
pub struct SolveOptions<T> {
    pub n: usize,
    pub count: usize,
    pub richardson: bool,
    pub tol: T,
    pub quad_tol: T,
    pub mesh: Mesh<T>,
}

impl<T: Real> SolveOptions<T> {
    pub fn new(n: usize, count: usize, richardson: bool) -> Self {
        SolveOptions {
            n,
            count,
            richardson,
            tol: T::lit(DEFAULT_BISECT_TOL),
            quad_tol: T::lit(DEFAULT_QUAD_TOL),
            mesh: Mesh::Liouville,
        }
    }

    pub fn with_mesh(mut self, mesh: Mesh<T>) -> Self {
        self.mesh = mesh;
        self
    }
}

fn mesh_from_map<T: Real>(map: &TransformMap<T>, n: usize) -> Result<Vec<T>> {
    let (alpha, beta) = map.domain_t();
    crate::slp::sample_points(alpha, beta, n + 2)
        .map(|t| map.x_of_t(t))
        .collect()
}

fn level<T: Real>(
    problem: &Problem<T>,
    map: Option<&TransformMap<T>>,
    n: usize,
) -> Result<SymTridiag<T>> {
    match (problem, map) {
        (Problem::Schrodinger(s), _) => discretize_schrodinger(s, n),
        (Problem::Canonical(c), None) => discretize_canonical(c, n),
        (Problem::Canonical(c), Some(map)) => discretize_nonuniform(c, &mesh_from_map(map, n)?),
    }
}

/// Leading eigenvalues, optionally Richardson-extrapolated from `n` and
/// `2n + 1` interior points (exactly halving the step).
pub fn solve_spectrum<T: Real>(
    problem: &Problem<T>,
    opts: &SolveOptions<T>,
) -> Result<Spectrum<T>> {
    if opts.count == 0 {
        return Err(Error::param("count must be at least 1"));
    }
    if opts.count > opts.n {
        return Err(Error::param(format!(
            "count {} exceeds grid size {}",
            opts.count, opts.n
        )));
    }
    let built;
    let map = match (problem, &opts.mesh) {
        (Problem::Canonical(c), Mesh::Liouville) => {
            c.ensure_valid()?;
            built = build_map(c, opts.quad_tol)?;
            Some(&built)
        }
        (Problem::Canonical(_), Mesh::Map(m)) => Some(m),
        _ => None,
    };
    let coarse = eig_bisect(&level(problem, map, opts.n)?, opts.count, opts.tol)?;
    let (eigenvalues, error_estimates) = if opts.richardson {
        let fine = eig_bisect(&level(problem, map, 2 * opts.n + 1)?, opts.count, opts.tol)?;
        let three = T::lit(3.0);
        coarse
            .iter()
            .zip(&fine)
            .map(|(&c, &f)| ((T::lit(4.0) * f - c) / three, (f - c).abs() / three))
            .unzip()
    } else {
        let nan = vec![T::nan(); coarse.len()];
        (coarse, nan)
    };
    if !eigenvalues.windows(2).all(|w| w[1] > w[0]) || eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(format!(
            "computed eigenvalues are not finite and strictly increasing: {eigenvalues:?}"
        )));
    }
    Ok(Spectrum {
        eigenvalues,
        grid_size: opts.n,
        extrapolated: opts.richardson,
        error_estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiag<f64> {
        let s = SchrodingerSlp::parse("0", 0.0, PI).unwrap();
        discretize_schrodinger(&s, n).unwrap()
    }

    #[test]
    fn discrete_laplacian_closed_form() {
        let m = laplacian(99);
        let h = PI / 100.0;
        let ev = m.eig_bisect(3, 1e-12).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let exact = (2.0 - 2.0 * ((j + 1) as f64 * h).cos()) / (h * h);
            assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
        }
        assert!((ev[0] - 0.99991775).abs() < 1e-7);
        assert_eq!(m.sturm_count(0.5), 0);
        assert_eq!(m.sturm_count(4.5), 2);
    }

    #[test]
    fn duplicate_decoupled() {
        let m = SymTridiag::new(vec![2.0f64, 2.0], vec![0.0]).unwrap();
        let ev = m.eig_bisect(2, 1e-12).unwrap();
        assert!((ev[0] - 2.0).abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shifts_and_scalings() {
        let base = laplacian(50).eig_bisect(3, 1e-12).unwrap();
        let s5 = SchrodingerSlp::parse("5", 0.0, PI).unwrap();
        let shifted = discretize_schrodinger(&s5, 50)
            .unwrap()
            .eig_bisect(3, 1e-12)
            .unwrap();
        for (a, b) in base.iter().zip(&shifted) {
            assert!((b - a - 5.0).abs() < 1e-10);
        }
        let c1 = CanonicalSlp::parse("1", "0", "1", 0.0, PI).unwrap();
        assert_eq!(discretize_canonical(&c1, 50).unwrap(), laplacian(50));
        let c4 = CanonicalSlp::parse("1", "0", "4", 0.0, PI).unwrap();
        let quarter = discretize_canonical(&c4, 50)
            .unwrap()
            .eig_bisect(3, 1e-12)
            .unwrap();
        for (a, b) in base.iter().zip(&quarter) {
            assert!((b - a / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn richardson_spectrum() {
        let p = Problem::Schrodinger(SchrodingerSlp::parse("0", 0.0, PI).unwrap());
        let s = solve_spectrum(&p, &SolveOptions::new(200, 3, true)).unwrap();
        for (v, e) in s.eigenvalues.iter().zip([1.0, 4.0, 9.0]) {
            assert!((v - e).abs() < 1e-6, "{v}");
        }
        let p = Problem::Schrodinger(SchrodingerSlp::parse("5", 0.0, PI).unwrap());
        let s = solve_spectrum(&p, &SolveOptions::new(200, 3, true)).unwrap();
        for (v, e) in s.eigenvalues.iter().zip([6.0, 9.0, 14.0]) {
            assert!((v - e).abs() < 1e-6, "{v}");
        }
        let s = solve_spectrum(&p, &SolveOptions::new(200, 3, false)).unwrap();
        assert!(s.error_estimates.iter().all(|e| e.is_nan()));
    }

    #[test]
    fn robin_is_rejected() {
        let mut s = SchrodingerSlp::parse("0", 0.0, PI).unwrap();
        s.left = crate::slp::BoundaryCoeffs::new(1.0, 1.0);
        assert!(matches!(
            discretize_schrodinger(&s, 10),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn singular_potential_is_numerical() {
        let s = SchrodingerSlp::parse("1/(t - 1)", 0.0, 2.0).unwrap();
        // t = 1 is the midpoint grid node for odd n
        assert!(matches!(
            discretize_schrodinger(&s, 9),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn canonical_meshes_agree() {
        let c = CanonicalSlp::<f64>::parse("1 + x", "x", "2 + x^2", 0.0, 1.0).unwrap();
        let p = Problem::Canonical(c);
        let u = solve_spectrum(
            &p,
            &SolveOptions::new(400, 3, true).with_mesh(Mesh::Uniform),
        )
        .unwrap();
        let l = solve_spectrum(&p, &SolveOptions::new(400, 3, true)).unwrap();
        for (a, b) in u.eigenvalues.iter().zip(&l.eigenvalues) {
            assert!((a - b).abs() < 1e-7 * a.abs(), "{a} vs {b}");
        }
    }
}
