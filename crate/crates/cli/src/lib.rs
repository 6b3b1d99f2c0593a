//! Command-line front end: subcommands for Zak evaluation, matrix dumps,
//! fundamental-cell scans, certificates, the density sweep, and the
//! embedded self-test, with CSV/JSON/SVG output.
//!
//! # Exit codes
//!
//! | code | meaning                                                        |
//! |------|----------------------------------------------------------------|
//! | 0    | success (scan: FrameLikely; certify: certificate passed)       |
//! | 1    | internal failure (iteration limit, self-test failure, bug)     |
//! | 2    | bad flags or inputs, including parity preconditions            |
//! | 3    | window decay too weak for the requested series tolerance       |
//! | 4    | parameters outside the operation's domain (e.g. density ≥ 1)   |
//! | 10   | scan: NotFrame; certify: certificate failed                    |
//! | 11   | scan: Inconclusive                                             |

pub mod output;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use gaborscan_core::{
    build_a, build_p, build_q, certify_three_fifths, odd_window_deficiency, scan, selftest, sweep,
    symmetry_check, Error, GridSpec, LatticeParams, ReducedFraction, Result, Verdict, WindowSpec,
    XMaxMode, ZakPoint,
};

/// Analyze whether rational-density Gabor systems form frames.
#[derive(Parser, Debug)]
#[command(name = "gaborscan", version, about)]
pub struct Cli {
    /// Series truncation tolerance used by every transform evaluation.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Worker threads for grid scans (default: all cores). Results are
    /// byte-identical for any thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Reserved and unused — every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Synthesis table Q(x, ω), p×q.
    #[value(name = "Q", alias = "q")]
    Q,
    /// Zak-domain frame operator A(x, ω), p×p.
    #[value(name = "A", alias = "a")]
    A,
    /// Rational Gramian P(x, ω), p×q.
    #[value(name = "P", alias = "p")]
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertifyKind {
    /// Rank collapse of the synthesis table for an odd window at density
    /// (n−1)/n — proves the system is not a frame.
    OddDeficiency,
    /// Interval-certified diagonal dominance for the first Hermite window
    /// at density 3/5 — proves the system is a frame.
    ThreeFifths,
    /// Entrywise reflection relations of an odd window at density p/(p+1).
    Symmetry,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the Zak transform of a window at one point.
    Zak {
        /// Window token: gauss, hermite1, exp2, sech, or custom:<csv-path>.
        #[arg(long)]
        window: String,
        /// Time step α > 0.
        #[arg(long)]
        alpha: f64,
        /// Evaluation point, time coordinate.
        #[arg(long)]
        x: f64,
        /// Evaluation point, frequency coordinate.
        #[arg(long)]
        omega: f64,
    },
    /// Dump one Zak-domain matrix as JSON.
    Matrix {
        #[arg(long)]
        window: String,
        #[arg(long)]
        alpha: f64,
        /// Density numerator (reduced automatically).
        #[arg(long)]
        p: usize,
        /// Density denominator (reduced automatically).
        #[arg(long)]
        q: usize,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        omega: f64,
        /// Which matrix to build.
        #[arg(long)]
        which: Which,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan σ_min of the Gramian over the fundamental cell and classify.
    Scan {
        #[arg(long)]
        window: String,
        #[arg(long)]
        alpha: f64,
        /// Density numerator; α·β = p/q must stay below 1.
        #[arg(long)]
        p: usize,
        /// Density denominator.
        #[arg(long)]
        q: usize,
        /// Grid resolution as NXxNW.
        #[arg(long, default_value = "64x64")]
        grid: String,
        /// Scan only half the cell width (windows with declared parity).
        #[arg(long)]
        half_domain: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a certificate and print it as JSON.
    Certify {
        #[arg(long)]
        kind: CertifyKind,
        /// Window token (odd-deficiency and symmetry kinds).
        #[arg(long)]
        window: Option<String>,
        /// Time step α (odd-deficiency, three-fifths).
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Density parameter n for the (n−1)/n family (odd-deficiency).
        #[arg(long)]
        n: Option<usize>,
        /// Density numerator (symmetry kind; q must equal p + 1).
        #[arg(long)]
        p: Option<usize>,
        /// Density denominator (symmetry kind).
        #[arg(long)]
        q: Option<usize>,
        /// x-cells per certified interval (three-fifths).
        #[arg(long, default_value_t = 64)]
        grid_x: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep densities (n−j)/n for the first Hermite window and record the
    /// minimal Gramian eigenvalue of each.
    Sweep {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Grid resolution as NXxNW (x spans half the cell).
        #[arg(long, default_value = "32x32")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the embedded invariant suite; nonzero exit on any failure.
    Selftest,
}

/// Parses argv, runs the requested command, and returns the process exit
/// code. Flag-syntax errors never reach this function — clap exits with
/// code 2 and a usage message on its own.
pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = gaborscan_core::configure_threads(threads) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::ParityRequired { .. } => 2,
        Error::TailNotSummable { .. } => 3,
        Error::Domain(_) => 4,
        Error::ConvergenceFailure { .. } | Error::NotHermitian { .. } => 1,
    }
}

fn parse_grid(text: &str, x_max_mode: XMaxMode) -> Result<GridSpec> {
    let lower = text.to_ascii_lowercase();
    let (nx, nw) = lower
        .split_once('x')
        .ok_or_else(|| Error::InvalidInput(format!("grid must look like 64x64, got {text:?}")))?;
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad grid dimension {s:?} in {text:?}")))
    };
    Ok(GridSpec {
        nx: parse(nx)?,
        nw: parse(nw)?,
        x_max_mode,
    })
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Zak {
            window,
            alpha,
            x,
            omega,
        } => {
            let spec = WindowSpec::parse_token(window)?;
            let z = gaborscan_core::zak(
                &spec,
                *alpha,
                ZakPoint {
                    x: *x,
                    omega: *omega,
                },
                cli.tol,
            )?;
            println!("{} {}", output::fmt_f64(z.re), output::fmt_f64(z.im));
            Ok(0)
        }
        Command::Matrix {
            window,
            alpha,
            p,
            q,
            x,
            omega,
            which,
            out,
        } => {
            let spec = WindowSpec::parse_token(window)?;
            let frac = ReducedFraction::reduce(*p, *q)?;
            let params = LatticeParams::from_alpha_frac(*alpha, frac)?;
            let point = ZakPoint {
                x: *x,
                omega: *omega,
            };
            let (name, matrix) = match which {
                Which::Q => ("Q", build_q(&spec, &params, point, cli.tol)?),
                Which::A => ("A", build_a(&spec, &params, point, cli.tol)?),
                Which::P => ("P", build_p(&spec, &params, point, cli.tol)?),
            };
            write_output(out, &output::matrix_to_json(name, &params, point, &matrix))?;
            Ok(0)
        }
        Command::Scan {
            window,
            alpha,
            p,
            q,
            grid,
            half_domain,
            out,
            format,
        } => {
            let spec = WindowSpec::parse_token(window)?;
            let frac = ReducedFraction::reduce(*p, *q)?;
            if frac.p >= frac.q {
                return Err(Error::Domain(format!(
                    "density {}/{} is not below 1; nothing to scan",
                    frac.p, frac.q
                )));
            }
            let mode = if *half_domain {
                XMaxMode::HalfDomain
            } else {
                XMaxMode::FullDomain
            };
            let grid = parse_grid(grid, mode)?;
            let params = LatticeParams::from_alpha_frac(*alpha, frac)?;
            eprintln!(
                "scan: window={window}, alpha={alpha}, density={}/{}, grid={}x{}",
                frac.p, frac.q, grid.nx, grid.nw
            );
            let result = scan(&spec, &params, &grid, cli.tol)?;
            eprintln!(
                "scan: verdict={}, global_min={}, argmin=({}, {})",
                output::verdict_name(result.verdict),
                output::fmt_f64(result.global_min),
                output::fmt_f64(result.argmin.x),
                output::fmt_f64(result.argmin.omega)
            );
            let rendered = match format {
                Format::Csv => output::scan_to_csv(&result),
                Format::Json => output::scan_to_json(&result),
                Format::Svg => output::scan_to_svg(&result),
            };
            write_output(out, &rendered)?;
            Ok(match result.verdict {
                Verdict::FrameLikely => 0,
                Verdict::NotFrame => 10,
                Verdict::Inconclusive => 11,
            })
        }
        Command::Certify {
            kind,
            window,
            alpha,
            n,
            p,
            q,
            grid_x,
            out,
        } => {
            let cert = match kind {
                CertifyKind::OddDeficiency => {
                    let token = window.clone().ok_or_else(|| {
                        Error::InvalidInput("odd-deficiency needs --window".to_string())
                    })?;
                    let n = n.ok_or_else(|| {
                        Error::InvalidInput("odd-deficiency needs --n".to_string())
                    })?;
                    let spec = WindowSpec::parse_token(&token)?;
                    odd_window_deficiency(&spec, n, *alpha, cli.tol)?
                }
                CertifyKind::ThreeFifths => certify_three_fifths(*alpha, *grid_x, cli.tol)?,
                CertifyKind::Symmetry => {
                    let token = window.clone().ok_or_else(|| {
                        Error::InvalidInput("symmetry needs --window".to_string())
                    })?;
                    let (p, q) = match (p, q) {
                        (Some(p), Some(q)) => (*p, *q),
                        _ => {
                            return Err(Error::InvalidInput(
                                "symmetry needs --p and --q".to_string(),
                            ))
                        }
                    };
                    let spec = WindowSpec::parse_token(&token)?;
                    symmetry_check(&spec, ReducedFraction::new(p, q)?, cli.tol)?
                }
            };
            eprintln!(
                "certify: kind={}, pass={}",
                output::certificate_kind_name(cert.kind),
                cert.pass
            );
            write_output(out, &output::certificate_to_json(&cert))?;
            Ok(if cert.pass { 0 } else { 10 })
        }
        Command::Sweep {
            n_min,
            n_max,
            alpha,
            grid,
            out,
            format,
        } => {
            let grid = parse_grid(grid, XMaxMode::HalfDomain)?;
            eprintln!(
                "sweep: n={n_min}..{n_max}, alpha={alpha}, grid={}x{}",
                grid.nx, grid.nw
            );
            let records = sweep(*n_min, *n_max, *alpha, &grid, cli.tol)?;
            eprintln!("sweep: {} records", records.len());
            let rendered = match format {
                Format::Csv => output::sweep_to_csv(&records),
                Format::Json => output::sweep_to_json(&records),
                Format::Svg => output::sweep_to_svg(&records),
            };
            write_output(out, &rendered)?;
            Ok(0)
        }
        Command::Selftest => {
            let outcomes = selftest::run_all(cli.tol);
            let mut failures = 0;
            for o in &outcomes {
                let status = if o.pass { "ok  " } else { "FAIL" };
                println!("{status} {} — {}", o.name, o.detail);
                if !o.pass {
                    failures += 1;
                }
            }
            println!("{} checks, {} failed", outcomes.len(), failures);
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}
