//! Embedded invariant suite: a dozen fast, fully deterministic checks of
//! the numerical core, runnable from the command line on any install to
//! confirm the build computes what the test suite pinned. Every check uses
//! fixed evaluation points — no randomness — so two runs always agree.

use num_complex::Complex64;

use crate::analysis::{certify_three_fifths, odd_window_deficiency, scan, GridSpec, XMaxMode};
use crate::error::Result;
use crate::gramian::{build_a, build_p, build_q, LatticeParams, ReducedFraction};
use crate::numerics::{
    min_eig_hermitian, rank_with_tol, singular_values, taussky_check, ComplexMatrix, TausskyMode,
    DEFAULT_RANK_REL_TOL,
};
use crate::windows::WindowSpec;
use crate::zak::{truncation_bound, vector_zak, zak, ZakPoint};

/// Result of one invariant check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    /// Stable check identifier.
    pub name: &'static str,
    /// Whether the invariant held.
    pub pass: bool,
    /// Measured quantity and the limit it was held against, or the error
    /// that interrupted the check.
    pub detail: String,
}

/// True when every outcome passed.
pub fn all_pass(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| c.pass)
}

fn outcome(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    match body() {
        Ok((pass, detail)) => CheckOutcome { name, pass, detail },
        Err(e) => CheckOutcome {
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn bounded(measured: f64, limit: f64) -> (bool, String) {
    (
        measured <= limit,
        format!("measured {measured:.3e}, limit {limit:.3e}"),
    )
}

/// Runs the whole suite at the given series tolerance.
pub fn run_all(tol: f64) -> Vec<CheckOutcome> {
    let gauss = WindowSpec::gaussian();
    let herm = WindowSpec::hermite1();
    let three_fifths = ReducedFraction::new(3, 5).expect("static fraction");
    let params_35 = LatticeParams::from_alpha_frac(1.0, three_fifths).expect("static lattice");
    let probe = ZakPoint {
        x: 0.07,
        omega: 0.13,
    };

    vec![
        outcome("zak_quasiperiodicity", || {
            let alpha = 1.0;
            let at = ZakPoint { x: 0.3, omega: 0.7 };
            let shifted = ZakPoint {
                x: at.x + alpha,
                omega: at.omega,
            };
            let z0 = zak(&gauss, alpha, at, tol)?;
            let z1 = zak(&gauss, alpha, shifted, tol)?;
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * alpha * at.omega);
            Ok(bounded((z1 - phase * z0).norm(), 10.0 * tol))
        }),
        outcome("zak_cell_center_zero", || {
            let z = zak(&gauss, 1.0, ZakPoint { x: 0.5, omega: 0.5 }, tol)?;
            Ok(bounded(z.norm(), 1e-10))
        }),
        outcome("vector_zak_components", || {
            let alpha = 1.0;
            let p = 3;
            let v = vector_zak(
                &gauss,
                alpha,
                p,
                ZakPoint {
                    x: 0.11,
                    omega: 0.23,
                },
                tol,
            )?;
            let mut worst = 0.0f64;
            for (r, comp) in v.iter().enumerate() {
                let direct = zak(
                    &gauss,
                    alpha,
                    ZakPoint {
                        x: 0.11 + alpha * r as f64 / p as f64,
                        omega: 0.23,
                    },
                    tol,
                )?;
                worst = worst.max((comp - direct).norm());
            }
            Ok(bounded(worst, 1e-14))
        }),
        outcome("truncation_tail_dominated", || {
            let (alpha, x, half_width) = (1.5, 0.7, 2usize);
            let bound = truncation_bound(&gauss, alpha, x, half_width);
            let mut brute = 0.0;
            for n in (half_width as i64 + 1)..=40 {
                brute += gauss.eval(x - alpha * n as f64).abs();
                brute += gauss.eval(x + alpha * n as f64).abs();
            }
            let nontrivial = brute > 0.0 && bound.is_finite();
            Ok((
                nontrivial && brute <= bound,
                format!("tail {brute:.3e} within bound {bound:.3e}"),
            ))
        }),
        outcome("frame_operator_identity", || {
            let a = build_a(&gauss, &params_35, probe, tol)?;
            let q = build_q(&gauss, &params_35, probe, tol)?;
            let mut product = q.times_conj_transpose();
            for v in product.data_mut() {
                *v *= params_35.alpha;
            }
            Ok(bounded(a.max_abs_diff(&product), 1e-10))
        }),
        outcome("gramian_rank_agreement", || {
            let p = build_p(&gauss, &params_35, probe, tol)?;
            let q = build_q(&gauss, &params_35, probe, tol)?;
            let rp = rank_with_tol(&p, DEFAULT_RANK_REL_TOL)?;
            let rq = rank_with_tol(&q, DEFAULT_RANK_REL_TOL)?;
            Ok((
                rp.rank == rq.rank,
                format!("rank(P) = {}, rank(Q) = {}", rp.rank, rq.rank),
            ))
        }),
        outcome("singular_value_eig_agreement", || {
            let p = build_p(&gauss, &params_35, probe, tol)?;
            let sigma_min = *singular_values(&p)?.last().expect("nonempty spectrum");
            let lambda_min = min_eig_hermitian(&p.times_conj_transpose())?;
            let rel = (sigma_min * sigma_min - lambda_min).abs() / lambda_min.max(1e-300);
            Ok(bounded(rel, 1e-8))
        }),
        outcome("hermitian_eig_pin", || {
            let m = ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
                (0, 0) | (1, 1) => Complex64::new(2.0, 0.0),
                (0, 1) => Complex64::new(0.0, 1.0),
                _ => Complex64::new(0.0, -1.0),
            });
            Ok(bounded((min_eig_hermitian(&m)? - 1.0).abs(), 1e-12))
        }),
        outcome("dominance_margin_pin", || {
            let m = ComplexMatrix::from_fn(2, 2, |r, c| {
                Complex64::new(if r == c { 3.0 } else { 1.0 }, 0.0)
            });
            let report = taussky_check(&m, TausskyMode::RowDominance);
            Ok(bounded((report.margin - 2.0).abs(), 1e-12))
        }),
        outcome("odd_window_collapse", || {
            let cert = odd_window_deficiency(&herm, 3, 1.0, tol)?;
            Ok((
                pass_with_ratio(&cert),
                format!("ratio {:.3e}", cert.details["deficiency_ratio"]),
            ))
        }),
        outcome("three_fifths_certificate", || {
            let cert = certify_three_fifths(1.0, 8, tol)?;
            let margin = cert.details["interval1_certified_margin"]
                .min(cert.details["interval2_certified_margin"]);
            Ok((cert.pass, format!("worst certified margin {margin:.3e}")))
        }),
        outcome("scan_monotone_refinement", || {
            let frac = ReducedFraction::new(1, 2)?;
            let params = LatticeParams::from_alpha_frac(1.0, frac)?;
            let coarse = scan(
                &gauss,
                &params,
                &GridSpec {
                    nx: 4,
                    nw: 4,
                    x_max_mode: XMaxMode::FullDomain,
                },
                tol,
            )?;
            let fine = scan(
                &gauss,
                &params,
                &GridSpec {
                    nx: 8,
                    nw: 8,
                    x_max_mode: XMaxMode::FullDomain,
                },
                tol,
            )?;
            Ok((
                fine.global_min <= coarse.global_min + 2.0 * tol,
                format!(
                    "coarse {:.6e}, fine {:.6e}",
                    coarse.global_min, fine.global_min
                ),
            ))
        }),
    ]
}

fn pass_with_ratio(cert: &crate::analysis::Certificate) -> bool {
    cert.pass && cert.details["deficiency_ratio"] < 1e-10
}
