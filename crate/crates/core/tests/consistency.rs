//! Structural consistency across the transform, matrix, and analysis
//! layers: the algebraic identities that tie the three Zak-domain matrices
//! together, the energy identity of the vector transform, agreement between
//! the two spectral routes, invariance of scans under the Fourier swap of
//! lattice steps, and the collapse/plateau dichotomy across the density
//! family (n−j)/n.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gaborscan_core::{
    build_a, build_p, build_q, certify_three_fifths, fourier_dual_consistency, index_maps,
    min_eig_hermitian, odd_window_deficiency, rank_with_tol, scan, singular_values, sweep,
    vector_energy_constant, vector_zak, ComplexMatrix, GridSpec, LatticeParams, ReducedFraction,
    Verdict, WindowSpec, XMaxMode, ZakPoint, DEFAULT_RANK_REL_TOL, DEFAULT_TOL,
};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn fractions() -> Vec<ReducedFraction> {
    [
        (1, 2),
        (2, 3),
        (3, 5),
        (4, 7),
        (5, 8),
        (1, 4),
        (3, 4),
        (5, 6),
    ]
    .into_iter()
    .map(|(p, q)| ReducedFraction::new(p, q).unwrap())
    .collect()
}

fn unit_phase(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TWO_PI * turns)
}

/// Rebuilds the synthesis table from the Gramian by the diagonal-permutation
/// factorization: D1 · (rows of P permuted by the index map m) · D2 · W,
/// where D1 carries the quasi-period phases e^(2πi·α·ω·(s − m_s·q)/p), D2
/// the *negative*-exponent column phases e^(−2πi·α·ω·τ), and W the
/// character matrix e^(2πi·τ·j·p/q).
fn synthesis_from_gramian(
    spec: &WindowSpec,
    params: &LatticeParams,
    point: ZakPoint,
) -> ComplexMatrix {
    let (p, q) = (params.frac.p, params.frac.q);
    let maps = index_maps(params.frac);
    let gram = build_p(spec, params, point, DEFAULT_TOL).unwrap();
    let permuted = ComplexMatrix::from_fn(p, q, |s, t| gram.at(maps.m[s], t));
    let d1 = ComplexMatrix::from_fn(p, p, |r, c| {
        if r == c {
            unit_phase(
                params.alpha * point.omega * (r as f64 - maps.m[r] as f64 * q as f64) / p as f64,
            )
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let d2 = ComplexMatrix::from_fn(q, q, |r, c| {
        if r == c {
            unit_phase(-params.alpha * point.omega * r as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let w = ComplexMatrix::from_fn(q, q, |tau, j| unit_phase((tau * j * p) as f64 / q as f64));
    d1.matmul(&permuted).matmul(&d2).matmul(&w)
}

#[test]
fn gramian_factorization_reproduces_synthesis_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let windows = [
        WindowSpec::hermite1(),
        WindowSpec::gaussian(),
        WindowSpec::two_sided_exponential(),
        WindowSpec::hyperbolic_secant(),
    ];
    let mut worst = 0.0f64;
    for frac in fractions() {
        for spec in &windows {
            let alpha = 0.6 + rng.gen::<f64>();
            let params = LatticeParams::from_alpha_frac(alpha, frac).unwrap();
            let point = ZakPoint {
                x: rng.gen::<f64>() * alpha / frac.p as f64,
                omega: rng.gen::<f64>() / alpha,
            };
            let direct = build_q(spec, &params, point, DEFAULT_TOL).unwrap();
            let chained = synthesis_from_gramian(spec, &params, point);
            worst = worst.max(direct.max_abs_diff(&chained));
        }
    }
    assert!(
        worst < 1e-10,
        "worst entrywise factorization residual {worst:.3e}"
    );
}

#[test]
fn frame_operator_equals_scaled_synthesis_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let gauss = WindowSpec::gaussian();
    for (p, q) in [(1, 2), (2, 3), (3, 5), (5, 8)] {
        let frac = ReducedFraction::new(p, q).unwrap();
        let alpha = 0.6 + rng.gen::<f64>();
        let params = LatticeParams::from_alpha_frac(alpha, frac).unwrap();
        let point = ZakPoint {
            x: rng.gen::<f64>() * alpha / p as f64,
            omega: rng.gen::<f64>() / alpha,
        };
        let a = build_a(&gauss, &params, point, DEFAULT_TOL).unwrap();
        let qm = build_q(&gauss, &params, point, DEFAULT_TOL).unwrap();
        let mut product = qm.times_conj_transpose();
        for v in product.data_mut() {
            *v *= alpha;
        }
        assert!(
            a.max_abs_diff(&product) < 1e-10,
            "operator identity fails at {p}/{q}: {:.3e}",
            a.max_abs_diff(&product)
        );
        let min_eig = min_eig_hermitian(&a).unwrap();
        assert!(
            min_eig >= -1e-10,
            "frame operator not PSD at {p}/{q}: {min_eig:.3e}"
        );
    }
}

#[test]
fn gramian_and_synthesis_table_share_rank_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let windows = [WindowSpec::gaussian(), WindowSpec::hermite1()];
    let mut checked = 0usize;
    for frac in fractions() {
        for spec in &windows {
            for _ in 0..13 {
                let alpha = 0.6 + rng.gen::<f64>();
                let params = LatticeParams::from_alpha_frac(alpha, frac).unwrap();
                let point = ZakPoint {
                    x: rng.gen::<f64>() * alpha / frac.p as f64,
                    omega: rng.gen::<f64>() / alpha,
                };
                let gram = build_p(spec, &params, point, DEFAULT_TOL).unwrap();
                let synth = build_q(spec, &params, point, DEFAULT_TOL).unwrap();
                let rank_gram = rank_with_tol(&gram, DEFAULT_RANK_REL_TOL).unwrap().rank;
                let rank_synth = rank_with_tol(&synth, DEFAULT_RANK_REL_TOL).unwrap().rank;
                assert_eq!(
                    rank_gram,
                    rank_synth,
                    "rank mismatch at {}/{} for {}",
                    frac.p,
                    frac.q,
                    spec.label()
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 208);
}

#[test]
fn smallest_singular_value_squares_to_smallest_product_eigenvalue() {
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    let gauss = WindowSpec::gaussian();
    for frac in fractions() {
        let alpha = 0.6 + rng.gen::<f64>();
        let params = LatticeParams::from_alpha_frac(alpha, frac).unwrap();
        let point = ZakPoint {
            x: rng.gen::<f64>() * alpha / frac.p as f64,
            omega: rng.gen::<f64>() / alpha,
        };
        let gram = build_p(&gauss, &params, point, DEFAULT_TOL).unwrap();
        let sigma_min = *singular_values(&gram).unwrap().last().unwrap();
        let lambda_min = min_eig_hermitian(&gram.times_conj_transpose()).unwrap();
        let rel = (sigma_min * sigma_min - lambda_min).abs() / lambda_min.abs().max(1e-300);
        assert!(
            rel < 1e-8,
            "spectral routes disagree at {}/{}: sigma^2 = {:.6e}, lambda = {:.6e}",
            frac.p,
            frac.q,
            sigma_min * sigma_min,
            lambda_min
        );
    }
}

#[test]
fn vector_transform_cell_mass_matches_energy_constant() {
    // Midpoint quadrature of the squared vector transform over the cell
    // [0, α/p) × [0, 1/α) must reproduce (1/α)·‖g‖²; the quadrature is the
    // only error source at this resolution.
    let gauss_norm_sq = std::f64::consts::FRAC_1_SQRT_2; // ∫ e^(−2πt²) dt = 1/√2
    let herm_norm_sq = 0.056_269_769_759_819_13; // ∫ t²e^(−2πt²) dt
    let cases = [
        (WindowSpec::gaussian(), gauss_norm_sq),
        (WindowSpec::hermite1(), herm_norm_sq),
    ];
    let n = 128usize;
    for (spec, norm_sq) in &cases {
        for (alpha, p) in [(1.0, 1usize), (1.0, 2), (0.8, 3)] {
            let x_span = alpha / p as f64;
            let omega_span = 1.0 / alpha;
            let mut total = 0.0;
            for i in 0..n {
                let x = (i as f64 + 0.5) * x_span / n as f64;
                for j in 0..n {
                    let omega = (j as f64 + 0.5) * omega_span / n as f64;
                    let v = vector_zak(spec, alpha, p, ZakPoint { x, omega }, DEFAULT_TOL).unwrap();
                    total += v.iter().map(|z| z.norm_sqr()).sum::<f64>();
                }
            }
            total *= (x_span / n as f64) * (omega_span / n as f64);
            let expected = vector_energy_constant(alpha) * norm_sq;
            let rel = (total - expected).abs() / expected;
            assert!(
                rel < 1e-3,
                "cell mass off by {rel:.3e} for {} at alpha = {alpha}, p = {p}",
                spec.label()
            );
        }
    }
}

#[test]
fn refinement_never_raises_the_scan_minimum() {
    let frac = ReducedFraction::new(3, 5).unwrap();
    for spec in [WindowSpec::gaussian(), WindowSpec::hermite1()] {
        let params = LatticeParams::from_alpha_frac(1.0, frac).unwrap();
        let coarse = scan(
            &spec,
            &params,
            &GridSpec {
                nx: 16,
                nw: 16,
                x_max_mode: XMaxMode::FullDomain,
            },
            DEFAULT_TOL,
        )
        .unwrap();
        let fine = scan(
            &spec,
            &params,
            &GridSpec {
                nx: 32,
                nw: 32,
                x_max_mode: XMaxMode::FullDomain,
            },
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(
            fine.global_min <= coarse.global_min + 2.0 * DEFAULT_TOL,
            "{}: fine minimum {:.6e} above coarse {:.6e}",
            spec.label(),
            fine.global_min,
            coarse.global_min
        );
        assert_eq!(coarse.verdict, Verdict::FrameLikely);
        assert_eq!(fine.verdict, Verdict::FrameLikely);
    }
}

#[test]
fn scan_pins_the_structural_zero_at_the_origin() {
    let herm = WindowSpec::hermite1();
    let params = LatticeParams::from_alpha_frac(1.0, ReducedFraction::new(1, 2).unwrap()).unwrap();
    let result = scan(
        &herm,
        &params,
        &GridSpec {
            nx: 32,
            nw: 32,
            x_max_mode: XMaxMode::FullDomain,
        },
        DEFAULT_TOL,
    )
    .unwrap();
    assert_eq!(result.verdict, Verdict::NotFrame);
    assert_eq!(result.argmin, ZakPoint { x: 0.0, omega: 0.0 });
    assert!(result.global_min < 1e-12 * result.sigma_min_field.iter().cloned().fold(0.0, f64::max));
}

#[test]
fn odd_window_collapses_at_every_consecutive_density() {
    let herm = WindowSpec::hermite1();
    for alpha in [0.8, 1.0, 1.3] {
        for n in 2..=8 {
            let cert = odd_window_deficiency(&herm, n, alpha, DEFAULT_TOL).unwrap();
            assert!(
                cert.pass,
                "no collapse at n = {n}, alpha = {alpha}: {:?}",
                cert.details
            );
            assert!(
                cert.details["deficiency_ratio"] < 1e-10,
                "ratio {:.3e} at n = {n}, alpha = {alpha}",
                cert.details["deficiency_ratio"]
            );
        }
    }
}

#[test]
fn sweep_separates_collapses_from_plateaus() {
    let records = sweep(
        5,
        9,
        1.0,
        &GridSpec {
            nx: 32,
            nw: 32,
            x_max_mode: XMaxMode::HalfDomain,
        },
        DEFAULT_TOL,
    )
    .unwrap();
    assert_eq!(records.len(), 4 + 5 + 6 + 7 + 8);
    for r in &records {
        assert!(r.min_eig >= -1e-10);
        if r.reduced.q == r.reduced.p + 1 {
            assert!(
                r.min_eig < 1e-8,
                "density {}/{} (n = {}, j = {}) should collapse, got {:.3e}",
                r.reduced.p,
                r.reduced.q,
                r.n,
                r.j,
                r.min_eig
            );
        } else {
            assert!(
                r.min_eig > 1e-4,
                "density {}/{} (n = {}, j = {}) should plateau, got {:.3e}",
                r.reduced.p,
                r.reduced.q,
                r.n,
                r.j,
                r.min_eig
            );
        }
    }
}

#[test]
fn certificate_holds_across_the_admissible_step_range() {
    for alpha in [(0.6f64).sqrt(), 0.9, 1.0, 1.5, 2.0] {
        let cert = certify_three_fifths(alpha, 64, DEFAULT_TOL).unwrap();
        assert!(
            cert.pass,
            "certificate failed at alpha = {alpha}: {:?}",
            cert.details
        );
        assert!(cert.details["interval1_certified_margin"] > 0.0);
        assert!(cert.details["interval2_certified_margin"] > 0.0);
        let pairwise = cert.details["interval1_pairwise_mode"] > 0.5;
        assert_eq!(
            pairwise,
            alpha < 1.0,
            "dominance mode mismatch at alpha = {alpha}"
        );
        if alpha >= 1.0 {
            assert!(cert.details["explicit_row_bound"] > 0.0);
        }
    }
}

#[test]
fn certified_steps_also_scan_as_frames() {
    let herm = WindowSpec::hermite1();
    let frac = ReducedFraction::new(3, 5).unwrap();
    for alpha in [(0.6f64).sqrt(), 1.0] {
        let cert = certify_three_fifths(alpha, 32, DEFAULT_TOL).unwrap();
        assert!(cert.pass);
        let params = LatticeParams::from_alpha_frac(alpha, frac).unwrap();
        let result = scan(
            &herm,
            &params,
            &GridSpec {
                nx: 32,
                nw: 32,
                x_max_mode: XMaxMode::FullDomain,
            },
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(
            result.verdict,
            Verdict::FrameLikely,
            "scan disagrees with certificate at alpha = {alpha}: min {:.6e}",
            result.global_min
        );
    }
}

#[test]
fn scan_minimum_survives_the_fourier_swap_of_lattice_steps() {
    let grid = GridSpec {
        nx: 64,
        nw: 64,
        x_max_mode: XMaxMode::FullDomain,
    };
    let herm = WindowSpec::hermite1();
    let diff = fourier_dual_consistency(&herm, 1.0, 0.6, &grid, DEFAULT_TOL).unwrap();
    assert!(
        diff < 1e-6,
        "first Hermite window: swap moved the minimum by {diff:.3e}"
    );

    let gauss = WindowSpec::gaussian();
    let small = GridSpec {
        nx: 32,
        nw: 32,
        x_max_mode: XMaxMode::FullDomain,
    };
    let diff = fourier_dual_consistency(&gauss, 1.0, 0.6, &small, DEFAULT_TOL).unwrap();
    assert!(
        diff < 1e-6,
        "gaussian window: swap moved the minimum by {diff:.3e}"
    );
}
