//! `slp`: solve, transform, invert and verify Sturm–Liouville problems.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit status 0 on success, 2
//! for bad input, 3 when a numerical method fails.

mod json;
mod problem;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liouville_core::eigen::{solve_spectrum, Mesh, SolveOptions};
use liouville_core::inverse::{self, Branch, CaseLabel, InverseParams, Validity, Variant};
use liouville_core::liouville::{forward_transform, reduce_constant_coeff, DEFAULT_QUAD_TOL};
use liouville_core::slp::{BoundaryCoeffs, Potential, Problem, Spectrum};
use liouville_core::verify::{spectral_match, DEFAULT_SAMPLES};
use liouville_core::Error as CoreError;
use serde::Serialize;

use problem::ProblemFile;

#[derive(Parser, Debug)]
#[command(
    name = "slp",
    version,
    about = "Liouville transforms and spectra of Sturm-Liouville problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Leading eigenvalues of a problem file.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = MeshArg::Liouville)]
        mesh: MeshArg,
        #[arg(long = "quad-tol", default_value_t = DEFAULT_QUAD_TOL)]
        quad_tol: f64,
    },
    /// Liouville normal form of a canonical problem file.
    Transform {
        file: PathBuf,
        #[arg(long = "quad-tol", default_value_t = DEFAULT_QUAD_TOL)]
        quad_tol: f64,
        /// Number of tabulation points on [alpha, beta], endpoints included.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Also write the (t, x, I) table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Canonical problem realizing I(t) = k/(t+m)^2 on (0, pi).
    Invert {
        /// case1, case2 (auto), case2-A1, case2-A2, case2-B, case2-C1, case2-C2,
        /// case3-J, case3-Y, case4, case4-general
        case: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Construct a case and check it against the Paine problem.
    Verify {
        /// Same names as for invert
        case: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
struct Grid {
    /// Interior grid points of the coarse level.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Extrapolate from n and 2n+1 points (`--richardson false` to disable).
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    richardson: bool,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Invariant strength [default: 1]
    #[arg(long)]
    k: Option<f64>,
    /// Invariant shift [default: 0.1]
    #[arg(long)]
    m: Option<f64>,
    /// Constant q for cases 2 and 3 [default: 1]
    #[arg(long)]
    q0: Option<f64>,
    /// Constant r for cases 1 and 3 [default: 1]
    #[arg(long)]
    r0: Option<f64>,
    /// Weight scale for case 4 [default: 2]
    #[arg(long = "C1")]
    c1: Option<f64>,
    /// Shift of x [default: 0; case 4 picks the one giving a = 0]
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Indicial root: plus or minus [default: plus]
    #[arg(long)]
    branch: Option<String>,
    /// auto, A1, A2, B, C1, C2, power or exponential [default: auto]
    #[arg(long)]
    variant: Option<String>,
    /// Weight power for case4-general, in (2, 3) [default: 2.5]
    #[arg(long)]
    nr: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeshArg {
    Liouville,
    Uniform,
}

impl ParamArgs {
    fn resolve(&self) -> Result<InverseParams, CliError> {
        let d = InverseParams::default();
        Ok(InverseParams {
            k: self.k.unwrap_or(d.k),
            m: self.m.unwrap_or(d.m),
            q0: self.q0.unwrap_or(d.q0),
            r0: self.r0.unwrap_or(d.r0),
            c1: self.c1.unwrap_or(d.c1),
            x0: self.x0,
            branch: match &self.branch {
                Some(b) => b.parse::<Branch>()?,
                None => d.branch,
            },
            variant: match &self.variant {
                Some(v) => v.parse::<Variant>()?,
                None => d.variant,
            },
            n_r: self.nr.unwrap_or(d.n_r),
        })
    }
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    /// Core error, with the coefficient it concerns if known.
    Core(CoreError, Option<String>),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e, _) if e.is_input() => 2,
            CliError::Core(..) => 3,
        }
    }

    fn report(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            CliError::Input(msg) => json!({"kind": "input", "message": msg}),
            CliError::Core(e, coeff) => {
                let kind = match e {
                    CoreError::Expr(_) => "expression",
                    CoreError::Parameter(_) => "parameter",
                    CoreError::Validation(_) => "validation",
                    CoreError::Numerical(_) => "numerical",
                };
                let mut v = json!({"kind": kind, "message": e.to_string()});
                if let CoreError::Expr(x) = e {
                    if let Some(off) = x.offset() {
                        v["offset"] = json!(off);
                    }
                }
                if let CoreError::Validation(list) = e {
                    v["violations"] = serde_json::to_value(list).unwrap_or_default();
                }
                if let Some(c) = coeff {
                    v["coefficient"] = json!(c);
                }
                v
            }
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e, None)
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    form: &'static str,
    interval: [f64; 2],
    bc: problem::Bc,
    mesh: Option<&'static str>,
    #[serde(flatten)]
    spectrum: Spectrum<f64>,
    metadata: &'a serde_json::Value,
}

#[derive(Serialize)]
struct Boundary {
    left: BoundaryCoeffs<f64>,
    right: BoundaryCoeffs<f64>,
}

#[derive(Serialize)]
struct Table {
    t: Vec<f64>,
    x: Vec<f64>,
    invariant: Vec<f64>,
}

#[derive(Serialize)]
struct TransformOutput<'a> {
    interval_x: [f64; 2],
    interval_t: [f64; 2],
    boundary: Boundary,
    w: String,
    /// `Q(t)` in closed form when `p` and `r` are constant.
    reduced_invariant: Option<String>,
    table: Table,
    metadata: &'a serde_json::Value,
}

#[derive(Serialize)]
struct Coefficients {
    p: String,
    q: String,
    r: String,
}

#[derive(Serialize)]
struct MapOutput {
    t_of_x: String,
    x_of_t: String,
    w: String,
}

#[derive(Serialize)]
struct InvertOutput {
    case_label: CaseLabel,
    exact: bool,
    parameters: InverseParams,
    coefficients: Coefficients,
    interval: [f64; 2],
    map: MapOutput,
    constants: BTreeMap<&'static str, f64>,
    validity: Validity,
}

fn load(path: &std::path::Path) -> Result<(ProblemFile, Problem<f64>), CliError> {
    let file = ProblemFile::load(path)?;
    let problem = file.problem()?;
    let violations = problem.validate();
    if !violations.is_empty() {
        return Err(CoreError::Validation(violations).into());
    }
    Ok((file, problem))
}

fn cmd_solve(
    file: &std::path::Path,
    grid: &Grid,
    mesh: MeshArg,
    quad_tol: f64,
) -> Result<String, CliError> {
    let (pf, problem) = load(file)?;
    let mut opts = SolveOptions::new(grid.n, grid.count, grid.richardson);
    opts.quad_tol = quad_tol;
    opts.mesh = match mesh {
        MeshArg::Liouville => Mesh::Liouville,
        MeshArg::Uniform => Mesh::Uniform,
    };
    let spectrum = solve_spectrum(&problem, &opts)?;
    let (form, mesh_name) = match problem {
        Problem::Canonical(_) => (
            "canonical",
            Some(match mesh {
                MeshArg::Liouville => "liouville",
                MeshArg::Uniform => "uniform",
            }),
        ),
        Problem::Schrodinger(_) => ("schrodinger", None),
    };
    Ok(json::to_string(&SolveOutput {
        form,
        interval: pf.interval,
        bc: pf.bc,
        mesh: mesh_name,
        spectrum,
        metadata: &pf.metadata,
    }))
}

fn cmd_transform(
    file: &std::path::Path,
    quad_tol: f64,
    samples: usize,
    csv_path: Option<&std::path::Path>,
) -> Result<String, CliError> {
    let (pf, problem) = load(file)?;
    let Problem::Canonical(canonical) = problem else {
        return Err(CliError::input("transform needs a canonical problem file"));
    };
    if samples < 2 {
        return Err(CliError::input("samples must be at least 2"));
    }
    let (schrodinger, map) = forward_transform(&canonical, quad_tol)?;
    let reduced = if canonical.p.is_constant() && canonical.r.is_constant() {
        reduce_constant_coeff(&canonical)
            .ok()
            .and_then(|s| s.invariant.as_expr().map(|e| e.to_string()))
    } else {
        None
    };
    let Potential::Transformed(inv) = &schrodinger.invariant else {
        unreachable!("forward_transform yields a transformed potential")
    };
    let (alpha, beta) = map.domain_t();
    let mut table = Table {
        t: Vec::with_capacity(samples),
        x: Vec::with_capacity(samples),
        invariant: Vec::with_capacity(samples),
    };
    for t in liouville_core::slp::sample_points(alpha, beta, samples) {
        let x = map.x_of_t(t)?;
        let i = inv.at_x(x).map_err(|e| match e {
            CoreError::Expr(e) => CoreError::from_eval(e, "invariant"),
            other => other,
        })?;
        table.t.push(t);
        table.x.push(x);
        table.invariant.push(i);
    }
    if let Some(path) = csv_path {
        write_csv(path, &table)?;
    }
    Ok(json::to_string(&TransformOutput {
        interval_x: [canonical.a, canonical.b],
        interval_t: [alpha, beta],
        boundary: Boundary {
            left: schrodinger.left,
            right: schrodinger.right,
        },
        w: map.w().to_string(),
        reduced_invariant: reduced,
        table,
        metadata: &pf.metadata,
    }))
}

fn write_csv(path: &std::path::Path, table: &Table) -> Result<(), CliError> {
    let fail = |e: csv::Error| CliError::input(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    w.write_record(["t", "x", "invariant"]).map_err(fail)?;
    for j in 0..table.t.len() {
        w.write_record([
            json::sig17(table.t[j]),
            json::sig17(table.x[j]),
            json::sig17(table.invariant[j]),
        ])
        .map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn build(case: &str, params: &ParamArgs) -> Result<inverse::InverseResult<f64>, CliError> {
    let params = params.resolve()?;
    if case.eq_ignore_ascii_case("case2") {
        return Ok(inverse::build_case2(&params)?);
    }
    let label = case.parse::<CaseLabel>()?;
    Ok(inverse::build(label, &params)?)
}

fn cmd_invert(case: &str, params: &ParamArgs) -> Result<String, CliError> {
    let r = build(case, params)?;
    let (t_of_x, x_of_t) = r
        .map
        .expressions()
        .expect("constructed maps are closed-form");
    Ok(json::to_string(&InvertOutput {
        case_label: r.label,
        exact: r.exact,
        parameters: r.params.clone(),
        coefficients: Coefficients {
            p: r.canonical.p.to_string(),
            q: r.canonical.q.to_string(),
            r: r.canonical.r.to_string(),
        },
        interval: [r.canonical.a, r.canonical.b],
        map: MapOutput {
            t_of_x: t_of_x.to_string(),
            x_of_t: x_of_t.to_string(),
            w: r.map.w().to_string(),
        },
        constants: r.extras.clone(),
        validity: r.validity.clone(),
    }))
}

fn cmd_verify(
    case: &str,
    params: &ParamArgs,
    grid: &Grid,
    samples: usize,
) -> Result<(String, bool), CliError> {
    if !grid.richardson {
        return Err(CliError::input(
            "verify always extrapolates; drop --richardson false",
        ));
    }
    let r = build(case, params)?;
    let report = spectral_match(&r, grid.count, grid.n, samples)?;
    Ok((json::to_string(&report), report.passed))
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match &cli.command {
        Command::Solve {
            file,
            grid,
            mesh,
            quad_tol,
        } => cmd_solve(file, grid, *mesh, *quad_tol).map(|s| (s, 0)),
        Command::Transform {
            file,
            quad_tol,
            samples,
            csv,
        } => cmd_transform(file, *quad_tol, *samples, csv.as_deref()).map(|s| (s, 0)),
        Command::Invert { case, params } => cmd_invert(case, params).map(|s| (s, 0)),
        Command::Verify {
            case,
            params,
            grid,
            samples,
        } => {
            let (s, passed) = cmd_verify(case, params, grid, *samples)?;
            if !passed {
                eprintln!("slp: verification failed");
            }
            Ok((s, if passed { 0 } else { 3 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            let v = serde_json::json!({ "error": e.report() });
            eprintln!("{v}");
            ExitCode::from(e.exit_code())
        }
    }
}
