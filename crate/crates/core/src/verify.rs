//! Checks that a constructed canonical problem really is the Paine problem
//! in disguise: its invariant matches `k/(t+m)²` and both forms share a
//! spectrum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::eigen::{solve_spectrum, Mesh, SolveOptions};
use crate::error::{Error, Result};
use crate::inverse::{CaseLabel, InverseParams, InverseResult};
use crate::liouville::{build_map, InvariantForm, TransformMap, DEFAULT_QUAD_TOL};
use crate::slp::{CanonicalSlp, Problem, SchrodingerSlp, Spectrum};
use crate::Real;

/// Exact constructions must reproduce the invariant to this.
pub const ROUNDTRIP_TOL: f64 = 1e-8;

/// Spectral gaps may be this many times the summed Richardson estimates.
pub const GAP_BUDGET_FACTOR: f64 = 5.0;

pub const DEFAULT_SAMPLES: usize = 101;

/// `samples` interior points of `(0, π)`.
fn interior<T: Real>(samples: usize) -> impl Iterator<Item = T> {
    let d = T::from_index(samples + 1);
    (1..=samples).map(move |j| T::PI() * T::from_index(j) / d)
}

fn sup_residual<T: Real>(
    result: &InverseResult<T>,
    map: &TransformMap<T>,
    samples: usize,
) -> Result<T> {
    let form = InvariantForm::new(&result.canonical);
    let mut worst = T::zero();
    for t in interior::<T>(samples) {
        let x = map.x_of_t(t)?;
        let i = form.at(x).map_err(|e| Error::from_eval(e, "invariant"))?;
        worst = worst.max((i - result.spec.target(t)).abs());
    }
    Ok(worst)
}

/// Sup over `samples` interior points of `|I(x(t)) - k/(t+m)²|`, with `x(t)`
/// from a numerically built map for exact results and from the closed-form
/// map otherwise.
pub fn roundtrip_invariant<T: Real>(result: &InverseResult<T>, samples: usize) -> Result<T> {
    if samples < 11 {
        return Err(Error::param(format!(
            "need at least 11 samples, got {samples}"
        )));
    }
    if result.exact {
        let map = build_map(&result.canonical, T::lit(DEFAULT_QUAD_TOL))?;
        sup_residual(result, &map, samples)
    } else {
        sup_residual(result, &result.map, samples)
    }
}

/// `(t, |I(x(t)) - k/(t+m)²|)` on `samples` points of `[0, π]`, endpoints
/// included, through the closed-form map. Points where the invariant cannot
/// be evaluated get a NaN residual.
pub fn asymptotic_profile<T: Real>(result: &InverseResult<T>, samples: usize) -> Vec<(T, T)> {
    let form = InvariantForm::new(&result.canonical);
    crate::slp::sample_points(T::zero(), T::PI(), samples)
        .map(|t| {
            let r = result
                .map
                .x_of_t(t)
                .ok()
                .and_then(|x| form.at(x).ok())
                .map(|i| (i - result.spec.target(t)).abs())
                .unwrap_or_else(T::nan);
            (t, r)
        })
        .collect()
}

/// Spectra of both forms and their gaps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralComparison {
    pub canonical: Spectrum<f64>,
    pub schrodinger: Spectrum<f64>,
    pub gaps: Vec<f64>,
    /// `5 (e_c + e_s)` per eigenvalue.
    pub budgets: Vec<f64>,
}

impl SpectralComparison {
    pub fn within_budget(&self) -> bool {
        self.gaps.iter().zip(&self.budgets).all(|(g, b)| g <= b)
    }
}

fn to_f64<T: Real>(s: Spectrum<T>) -> Spectrum<f64> {
    Spectrum {
        eigenvalues: s.eigenvalues.into_iter().map(Real::as_f64).collect(),
        grid_size: s.grid_size,
        extrapolated: s.extrapolated,
        error_estimates: s.error_estimates.into_iter().map(Real::as_f64).collect(),
    }
}

/// Solves both forms with Richardson extrapolation and compares.
pub fn compare_forms<T: Real>(
    canonical: &CanonicalSlp<T>,
    mesh: Mesh<T>,
    schrodinger: &SchrodingerSlp<T>,
    count: usize,
    n: usize,
) -> Result<SpectralComparison> {
    let opts = SolveOptions::new(n, count, true);
    let c = solve_spectrum(
        &Problem::Canonical(canonical.clone()),
        &opts.clone().with_mesh(mesh),
    )?;
    let s = solve_spectrum(&Problem::Schrodinger(schrodinger.clone()), &opts)?;
    let (c, s) = (to_f64(c), to_f64(s));
    let gaps = c
        .eigenvalues
        .iter()
        .zip(&s.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let budgets = c
        .error_estimates
        .iter()
        .zip(&s.error_estimates)
        .map(|(a, b)| GAP_BUDGET_FACTOR * (a + b))
        .collect();
    Ok(SpectralComparison {
        canonical: c,
        schrodinger: s,
        gaps,
        budgets,
    })
}

/// Inputs echoed into a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportParameters {
    #[serde(flatten)]
    pub inverse: InverseParams,
    pub n: usize,
    pub count: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case_label: CaseLabel,
    pub exact: bool,
    pub parameters: ReportParameters,
    /// NaN when the invariant could not be evaluated.
    pub roundtrip_residual: f64,
    /// `|β - π|` of the numerically built map; exact cases only.
    pub endpoint_error: Option<f64>,
    pub spectral_gaps: Vec<f64>,
    pub gap_budgets: Vec<f64>,
    pub canonical: Option<Spectrum<f64>>,
    pub schrodinger: Option<Spectrum<f64>>,
    pub trust_warnings: Vec<String>,
    pub passed: bool,
}

/// Full check of one construction. Exact results pass when the round trip
/// is within [`ROUNDTRIP_TOL`] and every gap within its budget; asymptotic
/// results always pass once the report exists, with problems recorded as
/// warnings.
pub fn spectral_match<T: Real>(
    result: &InverseResult<T>,
    count: usize,
    n: usize,
    samples: usize,
) -> Result<VerificationReport> {
    if count == 0 || count > 10 {
        return Err(Error::param(format!(
            "count must be in 1..=10, got {count}"
        )));
    }
    if n < 200 {
        return Err(Error::param(format!(
            "verification needs n >= 200, got {n}"
        )));
    }
    let schrodinger = result.spec.schrodinger();
    let parameters = ReportParameters {
        inverse: result.params.clone(),
        n,
        count,
        samples,
    };
    let mut warnings = result.validity.warnings.clone();
    if result.exact {
        let map = build_map(&result.canonical, T::lit(DEFAULT_QUAD_TOL))?;
        let endpoint_error = (map.domain_t().1.as_f64() - PI).abs();
        let residual = sup_residual(result, &map, samples)?.as_f64();
        let cmp = compare_forms(
            &result.canonical,
            Mesh::Map(result.map.clone()),
            &schrodinger,
            count,
            n,
        )?;
        let passed =
            residual <= ROUNDTRIP_TOL && endpoint_error <= ROUNDTRIP_TOL && cmp.within_budget();
        return Ok(VerificationReport {
            case_label: result.label,
            exact: true,
            parameters,
            roundtrip_residual: residual,
            endpoint_error: Some(endpoint_error),
            spectral_gaps: cmp.gaps,
            gap_budgets: cmp.budgets,
            canonical: Some(cmp.canonical),
            schrodinger: Some(cmp.schrodinger),
            trust_warnings: warnings,
            passed,
        });
    }

    let residual = match roundtrip_invariant(result, samples) {
        Ok(r) => r.as_f64(),
        Err(e) => {
            warnings.push(format!("round trip not evaluable: {e}"));
            f64::NAN
        }
    };
    let mut cmp = None;
    for mesh in [Mesh::Map(result.map.clone()), Mesh::Uniform] {
        match compare_forms(&result.canonical, mesh, &schrodinger, count, n) {
            Ok(c) => {
                cmp = Some(c);
                break;
            }
            Err(e) => warnings.push(format!("canonical spectrum: {e}")),
        }
    }
    let (gaps, budgets, canonical, schro) = match cmp {
        Some(c) => (c.gaps, c.budgets, Some(c.canonical), Some(c.schrodinger)),
        None => (Vec::new(), Vec::new(), None, None),
    };
    Ok(VerificationReport {
        case_label: result.label,
        exact: false,
        parameters,
        roundtrip_residual: residual,
        endpoint_error: None,
        spectral_gaps: gaps,
        gap_budgets: budgets,
        canonical,
        schrodinger: schro,
        trust_warnings: warnings,
        passed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::build;

    #[test]
    fn identity_forms_agree() {
        let c = CanonicalSlp::parse("1", "0", "1", 0.0, PI).unwrap();
        let s = SchrodingerSlp::parse("0", 0.0, PI).unwrap();
        let cmp = compare_forms(&c, Mesh::Uniform, &s, 3, 200).unwrap();
        assert!(cmp.gaps.iter().all(|g| *g <= 1e-9), "{:?}", cmp.gaps);
    }

    #[test]
    fn case4_round_trip() {
        let r = build::<f64>(CaseLabel::Case4, &InverseParams::default()).unwrap();
        let res = roundtrip_invariant(&r, 101).unwrap();
        assert!(res <= ROUNDTRIP_TOL, "{res}");
        assert!(roundtrip_invariant(&r, 5).is_err());
    }
}
