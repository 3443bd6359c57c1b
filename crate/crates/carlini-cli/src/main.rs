//! Batch front end: every subcommand evaluates one family of quantities and
//! emits a deterministic table (text, CSV or JSON). No state, no timestamps;
//! identical flags produce byte-identical output.
//!
//! Exit codes: 0 success, 1 usage/domain error, 2 numeric failure
//! (including solver non-convergence).

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use output::{Cell, Format, OutputSpec, Report};

use carlini::asymptotics::{
    carlini_laplace_constant, carlini_radius_threshold, corrected_convergence_margin,
};
use carlini::fourier::{CoefficientTable, Family, Source};
use carlini::histmath::{xx_complex_roots, xx_newton, xx_principal_pair, RealBranch};
use carlini::kepler::{
    eccentric_to_true, radius, solve_kepler_fixed_point, solve_kepler_newton, Orbit, SolveReport,
};
use carlini::perturb::{order_scaling_report, PerturbProblem};
use carlini::wkb::{p_sweep, WkbProblem};
use carlini::Error;

#[derive(Parser)]
#[command(
    name = "carlini",
    version,
    about = "Kepler-equation series, their large-index asymptotics, and related classical computations",
    after_help = "Exit codes: 0 = success, 1 = usage or domain error, 2 = numeric failure.\n\
        Output is deterministic: identical flags give byte-identical bytes."
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Write to a file instead of standard output
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Digits after the decimal point (1..=17)
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Newton,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "snake_case")]
enum FamilyArg {
    EccentricSine,
    RadiusCosine,
    TrueAnomalySine,
    RadiusMeanCosine,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::EccentricSine => Family::EccentricSine,
            FamilyArg::RadiusCosine => Family::RadiusCosine,
            FamilyArg::TrueAnomalySine => Family::TrueAnomalySine,
            FamilyArg::RadiusMeanCosine => Family::RadiusMeanCosine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Bessel,
    Quadrature,
}

#[derive(Subcommand)]
enum Command {
    /// Solve Kepler's equation: eccentric/true anomaly and radius for (c, u)
    #[command(allow_negative_numbers = true)]
    Solve {
        /// Eccentricity in [0, 1)
        #[arg(long)]
        c: f64,
        /// Mean anomaly in radians
        #[arg(long)]
        u: f64,
        /// Semi-major axis
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value = "newton")]
        method: MethodArg,
        /// Residual tolerance
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Iteration cap for the fixed-point method
        #[arg(long, default_value_t = 100_000)]
        max_iter: u32,
    },
    /// Series coefficients (CSV columns: family, c, index, value, source)
    #[command(allow_negative_numbers = true)]
    Coeffs {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        c: f64,
        /// Largest index to tabulate
        #[arg(long)]
        pmax: u32,
        /// bessel = closed form (A/B families only); quadrature = projection
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
    },
    /// Limit constants and the corrected convergence margin curve
    Limits {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Singular-perturbation sweep: series vs ODE vs assembled approximation
    Wkb {
        /// Large parameter (first row; row i uses i·p)
        #[arg(long)]
        p: f64,
        #[arg(long)]
        sigma: f64,
        /// Evaluation point (also the interval end for the ODE route)
        #[arg(long)]
        xmax: f64,
        /// Number of sweep rows
        #[arg(long, default_value_t = 1)]
        sweep: usize,
    },
    /// Regular-perturbation cascade error against the nonlinear oracle
    #[command(allow_negative_numbers = true)]
    Perturb {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        y0: f64,
        /// Cascade truncation order (0..=3)
        #[arg(long = "N")]
        order: usize,
        /// Measure at alpha, alpha/2, alpha/4 instead of alpha alone
        #[arg(long)]
        scaling: bool,
    },
    /// The exponential equation x^x = y: real roots or complex branches
    #[command(allow_negative_numbers = true)]
    Xx {
        /// Real y for the real branches
        #[arg(long, conflicts_with = "z")]
        y: Option<f64>,
        /// z = ln y (< 0) for the complex branches
        #[arg(long)]
        z: Option<f64>,
        /// Number of conjugate pairs k = 1..=branches
        #[arg(long, default_value_t = 3)]
        branches: u32,
        /// Also list the principal (branch 0) pair when it is nonreal
        #[arg(long)]
        principal: bool,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_)
        | Error::OutOfRadius { .. }
        | Error::IncompleteTable { .. }
        | Error::Overflow
        | Error::NoRealRoot => 1,
        Error::Bracketing { .. }
        | Error::Convergence { .. }
        | Error::NumericFailure(_)
        | Error::DegenerateFit
        | Error::Divergence { .. } => 2,
    }
}

fn run(cli: &Cli) -> Result<Report, (i32, String)> {
    let lib = |e: Error| (exit_code(&e), e.to_string());
    match &cli.command {
        Command::Solve {
            c,
            u,
            a,
            method,
            tol,
            max_iter,
        } => {
            let orbit = Orbit::new(*c, *a).map_err(lib)?;
            let report: SolveReport = match method {
                MethodArg::Newton => solve_kepler_newton(&orbit, *u, *tol).map_err(lib)?,
                MethodArg::Fixed => {
                    solve_kepler_fixed_point(&orbit, *u, *tol, *max_iter).map_err(lib)?
                }
            };
            if !report.converged(*tol) {
                return Err((
                    2,
                    format!(
                        "did not converge within {max_iter} iterations (residual {})",
                        report.residual
                    ),
                ));
            }
            let mut out = Report::new(vec![
                "c",
                "u",
                "method",
                "theta",
                "true_anomaly",
                "radius",
                "iterations",
                "residual",
            ]);
            out.push(vec![
                Cell::Num(*c),
                Cell::Num(*u),
                Cell::Text(
                    match method {
                        MethodArg::Newton => "newton",
                        MethodArg::Fixed => "fixed_point",
                    }
                    .to_string(),
                ),
                Cell::Num(report.theta),
                Cell::Num(eccentric_to_true(&orbit, report.theta)),
                Cell::Num(radius(&orbit, report.theta)),
                Cell::Int(i64::from(report.iterations)),
                Cell::Num(report.residual),
            ]);
            Ok(out)
        }
        Command::Coeffs {
            family,
            c,
            pmax,
            source,
        } => {
            let family: Family = (*family).into();
            let source = match source {
                Some(SourceArg::Bessel) => Source::BesselClosedForm,
                Some(SourceArg::Quadrature) => Source::FourierQuadrature,
                None => {
                    if family.has_closed_form() {
                        Source::BesselClosedForm
                    } else {
                        Source::FourierQuadrature
                    }
                }
            };
            let table = CoefficientTable::build(family, *c, *pmax, source).map_err(lib)?;
            let mut out = Report::new(vec!["family", "c", "index", "value", "source"]);
            for (index, value) in table.entries() {
                out.push(vec![
                    Cell::Text(family.name().to_string()),
                    Cell::Num(*c),
                    Cell::Int(i64::from(index)),
                    Cell::Num(value),
                    Cell::Text(source.name().to_string()),
                ]);
            }
            Ok(out)
        }
        Command::Limits { tol } => {
            let constant = carlini_laplace_constant(*tol).map_err(lib)?;
            let threshold = carlini_radius_threshold(*tol).map_err(lib)?;
            let mut out = Report::new(vec!["quantity", "c", "value"]);
            out.push(vec![
                Cell::from("carlini_laplace_constant"),
                Cell::Empty,
                Cell::Num(constant),
            ]);
            out.push(vec![
                Cell::from("carlini_radius_threshold"),
                Cell::Empty,
                Cell::Num(threshold),
            ]);
            let mut cs: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
            cs.push(0.99);
            for c in cs {
                out.push(vec![
                    Cell::from("corrected_margin"),
                    Cell::Num(c),
                    Cell::Num(corrected_convergence_margin(c).map_err(lib)?),
                ]);
            }
            Ok(out)
        }
        Command::Wkb {
            p,
            sigma,
            xmax,
            sweep,
        } => {
            if *sweep < 1 {
                return Err((1, "sweep must be ≥ 1".to_string()));
            }
            let problem = WkbProblem::new(*p, *sigma, *xmax).map_err(lib)?;
            let rows = p_sweep(&problem, *sweep).map_err(lib)?;
            let mut out = Report::new(vec!["p", "x", "series", "ode", "wkb", "rel_error"]);
            for row in rows {
                out.push(vec![
                    Cell::Num(row.p),
                    Cell::Num(row.x),
                    Cell::Num(row.series.value()),
                    Cell::Num(row.ode.value()),
                    Cell::Num(row.wkb.value()),
                    Cell::Num(row.rel_error),
                ]);
            }
            Ok(out)
        }
        Command::Perturb {
            alpha,
            b,
            y0,
            order,
            scaling,
        } => {
            let problem = PerturbProblem::new(*alpha, *b, *y0, *order, 2.0 * std::f64::consts::PI)
                .map_err(lib)?;
            let alphas = if *scaling {
                vec![*alpha, *alpha / 2.0, *alpha / 4.0]
            } else {
                // the scaling report wants ≥ 3 α values; measure at the
                // requested α and report that row alone
                vec![*alpha, *alpha / 2.0, *alpha / 4.0]
            };
            let report = order_scaling_report(&problem, &alphas).map_err(lib)?;
            let mut out = Report::new(vec!["alpha", "N", "sup_error"]);
            let keep = if *scaling { report.rows.len() } else { 1 };
            for row in report.rows.iter().take(keep) {
                out.push(vec![
                    Cell::Num(row.alpha),
                    Cell::Int(row.order as i64),
                    Cell::Num(row.sup_error),
                ]);
            }
            Ok(out)
        }
        Command::Xx {
            y,
            z,
            branches,
            principal,
        } => match (y, z) {
            (Some(y), None) => {
                let mut out = Report::new(vec!["branch", "y", "x", "residual"]);
                let upper = xx_newton(*y, RealBranch::Upper).map_err(lib)?;
                out.push(vec![
                    Cell::from("upper"),
                    Cell::Num(*y),
                    Cell::Num(upper),
                    Cell::Num((upper * upper.ln() - y.ln()).abs()),
                ]);
                if *y < 1.0 {
                    let lower = xx_newton(*y, RealBranch::Lower).map_err(lib)?;
                    out.push(vec![
                        Cell::from("lower"),
                        Cell::Num(*y),
                        Cell::Num(lower),
                        Cell::Num((lower * lower.ln() - y.ln()).abs()),
                    ]);
                }
                Ok(out)
            }
            (None, Some(z)) => {
                let mut out = Report::new(vec!["k", "alpha", "re", "im", "residual"]);
                let mut push = |root: &carlini::histmath::BranchRoot| {
                    out.push(vec![
                        Cell::Int(i64::from(root.branch_index)),
                        Cell::Num(root.alpha),
                        Cell::Num(root.x.re),
                        Cell::Num(root.x.im),
                        Cell::Num(root.residual),
                    ]);
                };
                if *principal {
                    for root in xx_principal_pair(*z).map_err(lib)?.iter() {
                        push(root);
                    }
                }
                for root in xx_complex_roots(*z, *branches).map_err(lib)?.iter() {
                    push(root);
                }
                Ok(out)
            }
            _ => Err((1, "pass exactly one of --y or --z".to_string())),
        },
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; everything else is usage
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let spec = OutputSpec {
        format: cli.format,
        path: cli.output.clone(),
        precision: cli.precision,
    };
    if let Err(msg) = spec.validate() {
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = report.write(&spec) {
                eprintln!("error: {e}");
                std::process::exit(2);
            }
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(code);
        }
    }
}
