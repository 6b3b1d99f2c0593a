//! Numerical analysis of Gabor systems at rational time-frequency density.
//!
//! A Gabor system is the family of functions obtained from one window g by
//! shifting it along αℤ in time and βℤ in frequency. When the density
//! α·β = p/q is rational, the Zak transform turns the frame question into
//! finite linear algebra: the system is a frame exactly when a p×q matrix
//! field P(x, ω) — the rational Gramian — keeps full row rank at every
//! point of a fundamental cell. This crate builds those matrices from
//! certified truncated series, scans their smallest singular value over the
//! cell, and, for the landmark cases, replaces the scan with a proof:
//!
//! * [`analysis::scan`] maps σ_min over the cell and classifies the system
//!   (not a frame / likely a frame / inconclusive);
//! * [`analysis::odd_window_deficiency`] detects the structural rank
//!   collapse that makes *every* odd window fail at densities (n−1)/n;
//! * [`analysis::certify_three_fifths`] proves the first Hermite window
//!   generates a frame at density 3/5 for time steps ≥ √(3/5), via
//!   interval-certified diagonal dominance;
//! * [`analysis::sweep`] traces the minimal Gramian eigenvalue across the
//!   density family (n−j)/n, exposing the dichotomy between collapse at
//!   consecutive-integer densities and plateaus elsewhere.
//!
//! Module layout: [`windows`] defines the window functions and their decay
//! envelopes; [`zak`] evaluates Zak transforms with certified truncation;
//! [`gramian`] assembles the Zak-domain matrices; [`numerics`] supplies the
//! dense complex linear algebra (Jacobi SVD, Hermitian eigenvalues,
//! dominance margins); [`analysis`] exposes the drivers above; [`selftest`]
//! is an embedded deterministic invariant suite.
//!
//! The library never panics on user input — every fallible entry point
//! returns [`error::Result`] — and all computations are deterministic,
//! including under the thread pool configured by [`configure_threads`].

// Negated float comparisons (`!(x > 0.0)` and friends) are deliberate
// throughout: validation must send NaN down the rejection branch, which the
// un-negated `<=` form would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod gramian;
pub mod numerics;
pub mod selftest;
pub mod windows;
pub mod zak;

pub use analysis::{
    certify_three_fifths, fourier_dual_consistency, fundamental_domain, odd_window_deficiency,
    scan, sweep, Certificate, CertificateKind, FundamentalDomain, GridSpec, ScanResult,
    SweepRecord, Verdict, XMaxMode, FRAMELIKELY_REL_THRESHOLD, NOTFRAME_REL_THRESHOLD,
};
pub use error::{Error, Result};
pub use gramian::{
    build_a, build_p, build_q, index_maps, symmetry_check, IndexMaps, LatticeParams,
    ReducedFraction,
};
pub use numerics::{
    min_eig_hermitian, rank_with_tol, singular_values, taussky_check, ComplexMatrix, RankReport,
    TausskyMode, TausskyReport, DEFAULT_RANK_REL_TOL,
};
pub use windows::{DecayForm, Envelope, Parity, WindowKind, WindowSpec};
pub use zak::{
    plan_truncation, truncation_bound, vector_energy_constant, vector_zak, zak, TruncationPlan,
    ZakPoint, DEFAULT_TOL,
};

/// Installs a global rayon thread pool of the requested size. Call at most
/// once, before any parallel work; returns an error if a pool already
/// exists. Results do not depend on the thread count — parallel loops
/// reduce in a fixed order — so this only tunes speed.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(Error::InvalidInput(
            "thread count must be positive".to_string(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("thread pool setup failed: {e}")))
}
