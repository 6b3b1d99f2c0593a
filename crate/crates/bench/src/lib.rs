//! Shared fixtures for the benchmark targets: a representative window,
//! lattice, and evaluation point so every bench measures the same
//! configuration.

use gaborscan_core::{LatticeParams, ReducedFraction, WindowSpec, ZakPoint};

/// Odd window on the 3/5 lattice at unit time step — the configuration the
/// certificates and sweeps revolve around.
pub fn three_fifths_fixture() -> (WindowSpec, LatticeParams, ZakPoint) {
    let frac = ReducedFraction::new(3, 5).expect("3/5 reduces");
    let params = LatticeParams::from_alpha_frac(1.0, frac).expect("valid lattice");
    (
        WindowSpec::hermite1(),
        params,
        ZakPoint {
            x: 0.07,
            omega: 0.31,
        },
    )
}
