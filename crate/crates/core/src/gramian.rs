//! Zak-domain matrices of a Gabor system at rational density.
//!
//! For a window g, time step α, and frequency step β with α·β = p/q in
//! lowest terms, the system's frame property is decided pointwise on the
//! fundamental cell [0, α/p) × [0, 1/α) by three matrices:
//!
//! * **Q** (p×q) — entry (r, j) = Z_α g(x + α·r/p, ω − β·j)·e^(2πi·j·r/q),
//!   the synthesis table of Zak values across the p cell offsets and q
//!   modulation shifts;
//! * **A** (p×p) — the frame operator in the Zak domain,
//!   entry (r, s) = α·Σ_j conj(Z_s,j)·Z_r,j·e^(2πi·j(r−s)/q) with
//!   Z_r,j = Z_α g(x + α·r/p, ω − β·j); Hermitian positive semidefinite and
//!   equal to α·Q·Q†;
//! * **P** (p×q) — the rational Gramian,
//!   entry (s, t) = Z_{αq} g(x + (α/p)(t·p + s·q), ω). Note the Zak step is
//!   α·q, not α.
//!
//! Q and P have the same rank everywhere: Q factors as D₁·P̃·D₂·W, where P̃
//! is P with rows permuted by the modular index map m, D₁ and D₂ are
//! diagonal unimodular, and W is an invertible character table (see
//! [`index_maps`] and the factorization test in this crate's integration
//! suite). The system is a frame exactly when that common rank is p at every
//! cell point, which is what the scan driver in [`crate::analysis`] probes.
//!
//! Derivation note for the factorization's ω-phases: splitting the Zak sum
//! index n = q·m + ν in the Q entry and collecting terms produces
//! e^(2πi·α·ω·(s − m_s·q)/p) on rows and e^(−2πi·α·ω·τ) on the τ-th column
//! of the inner table — the column phase has a *negative* exponent, which
//! the chain test pins to 1e-10.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::windows::{Parity, WindowSpec};
use crate::zak::{zak, ZakPoint};

/// A rational density p/q in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedFraction {
    /// Numerator, positive.
    pub p: usize,
    /// Denominator, positive.
    pub q: usize,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ReducedFraction {
    /// Wraps p/q, requiring positivity and coprimality.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidInput(format!(
                "fraction {p}/{q} must be positive"
            )));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidInput(format!(
                "fraction {p}/{q} is not in lowest terms"
            )));
        }
        Ok(ReducedFraction { p, q })
    }

    /// Reduces num/den to lowest terms.
    pub fn reduce(num: usize, den: usize) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidInput(format!(
                "fraction {num}/{den} must be positive"
            )));
        }
        let g = gcd(num, den);
        Ok(ReducedFraction {
            p: num / g,
            q: den / g,
        })
    }

    /// Best rational approximation of `value` with denominator at most
    /// `max_den`, required to match within `tol`. Continued-fraction walk.
    pub fn approximate(value: f64, max_den: usize, tol: f64) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidInput(format!("cannot rationalize {value}")));
        }
        let (mut h0, mut h1) = (0usize, 1usize); // numerators
        let (mut k0, mut k1) = (1usize, 0usize); // denominators
        let mut x = value;
        for _ in 0..64 {
            let a = x.floor();
            let ai = a as usize;
            let h2 = ai.saturating_mul(h1).saturating_add(h0);
            let k2 = ai.saturating_mul(k1).saturating_add(k0);
            if k2 > max_den {
                break;
            }
            (h0, h1) = (h1, h2);
            (k0, k1) = (k1, k2);
            let frac = x - a;
            if frac < 1e-15 {
                break;
            }
            x = 1.0 / frac;
        }
        if k1 == 0 || h1 == 0 {
            return Err(Error::InvalidInput(format!(
                "no rational approximation of {value} with denominator <= {max_den}"
            )));
        }
        let approx = h1 as f64 / k1 as f64;
        if (approx - value).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "{value} is not within {tol:e} of a rational with denominator <= {max_den}"
            )));
        }
        ReducedFraction::new(h1 / gcd(h1, k1), k1 / gcd(h1, k1))
    }

    /// The density as a float, p/q.
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Lattice steps (α, β) together with their density α·β = p/q. The fraction
/// is carried explicitly because every matrix shape derives from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    /// Time step, positive.
    pub alpha: f64,
    /// Frequency step, positive.
    pub beta: f64,
    /// α·β in lowest terms.
    pub frac: ReducedFraction,
}

impl LatticeParams {
    /// Validates that α·β matches p/q to 1e-12.
    pub fn new(alpha: f64, beta: f64, frac: ReducedFraction) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lattice steps must be positive, got alpha = {alpha}, beta = {beta}"
            )));
        }
        let density = alpha * beta;
        if (density - frac.value()).abs() >= 1e-12 {
            return Err(Error::InvalidInput(format!(
                "alpha*beta = {density} does not match {}/{}",
                frac.p, frac.q
            )));
        }
        Ok(LatticeParams { alpha, beta, frac })
    }

    /// Derives β = p/(q·α) from the time step and the density.
    pub fn from_alpha_frac(alpha: f64, frac: ReducedFraction) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidInput(format!(
                "time step must be positive, got {alpha}"
            )));
        }
        let beta = frac.p as f64 / (frac.q as f64 * alpha);
        Ok(LatticeParams { alpha, beta, frac })
    }
}

/// The two modular index permutations tied to a reduced fraction:
/// k_t·p ≡ t (mod q) and m_s·q ≡ s (mod p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMaps {
    /// k_t for t = 0..q−1; a permutation of 0..q−1.
    pub k: Vec<usize>,
    /// m_s for s = 0..p−1; a permutation of 0..p−1.
    pub m: Vec<usize>,
}

/// Modular inverse of a mod n for coprime a, n (n >= 1), via the extended
/// Euclid recursion. For n = 1 the inverse is 0.
fn mod_inverse(a: usize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (n as i64, (a % n) as i64);
    while new_r != 0 {
        let quotient = r / new_r;
        (t, new_t) = (new_t, t - quotient * new_t);
        (r, new_r) = (new_r, r - quotient * new_r);
    }
    debug_assert_eq!(r, 1, "inputs must be coprime");
    ((t % n as i64 + n as i64) % n as i64) as usize
}

/// Solves the two congruences; coprimality makes the solutions unique and
/// both maps permutations.
pub fn index_maps(frac: ReducedFraction) -> IndexMaps {
    let (p, q) = (frac.p, frac.q);
    let p_inv = mod_inverse(p, q);
    let q_inv = mod_inverse(q, p);
    IndexMaps {
        k: (0..q).map(|t| t * p_inv % q).collect(),
        m: (0..p).map(|s| s * q_inv % p).collect(),
    }
}

fn unit_phase(turns: f64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * turns;
    Complex64::new(angle.cos(), angle.sin())
}

/// Builds the p×q synthesis table Q(x, ω):
/// entry (r, j) = Z_α g(x + α·r/p, ω − β·j)·e^(2πi·j·r/q).
///
/// The point is expected in the fundamental cell [0, α/p) × [0, 1/α);
/// arguments outside it produce the same formula evaluated there.
pub fn build_q(
    spec: &WindowSpec,
    params: &LatticeParams,
    point: ZakPoint,
    tol: f64,
) -> Result<ComplexMatrix> {
    let (p, q) = (params.frac.p, params.frac.q);
    let mut m = ComplexMatrix::zeros(p, q);
    for r in 0..p {
        let x = point.x + params.alpha * r as f64 / p as f64;
        for j in 0..q {
            let omega = point.omega - params.beta * j as f64;
            let z = zak(spec, params.alpha, ZakPoint { x, omega }, tol)?;
            m.set(r, j, z * unit_phase((j * r) as f64 / q as f64));
        }
    }
    Ok(m)
}

/// Builds the p×p Zak-domain frame operator A(x, ω) from its defining sum
/// (not from Q — the identity A = α·Q·Q† is verified by tests instead):
/// entry (r, s) = α·Σ_j conj(Z_s,j)·Z_r,j·e^(2πi·j(r−s)/q).
pub fn build_a(
    spec: &WindowSpec,
    params: &LatticeParams,
    point: ZakPoint,
    tol: f64,
) -> Result<ComplexMatrix> {
    let (p, q) = (params.frac.p, params.frac.q);
    // Raw Zak table Z_r,j without the character phase.
    let mut z = ComplexMatrix::zeros(p, q);
    for r in 0..p {
        let x = point.x + params.alpha * r as f64 / p as f64;
        for j in 0..q {
            let omega = point.omega - params.beta * j as f64;
            z.set(r, j, zak(spec, params.alpha, ZakPoint { x, omega }, tol)?);
        }
    }
    let mut a = ComplexMatrix::zeros(p, p);
    for r in 0..p {
        for s in 0..p {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..q {
                let turns = (j as f64) * (r as f64 - s as f64) / q as f64;
                acc += z.at(s, j).conj() * z.at(r, j) * unit_phase(turns);
            }
            a.set(r, s, acc * params.alpha);
        }
    }
    Ok(a)
}

/// Builds the p×q rational Gramian P(x, ω):
/// entry (s, t) = Z_{αq} g(x + (α/p)(t·p + s·q), ω) — Zak step α·q.
pub fn build_p(
    spec: &WindowSpec,
    params: &LatticeParams,
    point: ZakPoint,
    tol: f64,
) -> Result<ComplexMatrix> {
    let (p, q) = (params.frac.p, params.frac.q);
    let step = params.alpha * q as f64;
    let mut m = ComplexMatrix::zeros(p, q);
    for s in 0..p {
        for t in 0..q {
            let x = point.x + params.alpha / p as f64 * (t * p + s * q) as f64;
            let z = zak(
                spec,
                step,
                ZakPoint {
                    x,
                    omega: point.omega,
                },
                tol,
            )?;
            m.set(s, t, z);
        }
    }
    Ok(m)
}

/// Verifies the entrywise sign relations that an odd window forces on
/// Q(0, 0) at unit time step and density p/(p+1).
///
/// With X_s^j the (s, j) entry of Q(0, 0), oddness gives the reflection
/// identity X_s^j = −X_{(p−s) mod p}^{(q−j) mod q}, whose fixed points pin
/// individual entries to zero: the (0, 0) entry always, and for even q the
/// whole reflection-symmetric pairing of column q/2 and of column 0. The
/// check evaluates every relation and reports the worst violation; it
/// passes when that violation stays below 10× the series tolerance.
///
/// These relations are what make the deficiency of Q(0, 0) structural
/// rather than numerical: they force a nontrivial left null vector, so the
/// system at density p/(p+1) cannot be a frame.
pub fn symmetry_check(
    spec: &WindowSpec,
    frac: ReducedFraction,
    tol: f64,
) -> Result<crate::analysis::Certificate> {
    if spec.parity() != Some(Parity::Odd) {
        return Err(Error::ParityRequired {
            window: spec.label().to_string(),
            needed: "odd",
        });
    }
    if frac.q != frac.p + 1 {
        return Err(Error::Domain(format!(
            "symmetry relations hold at densities p/(p+1); got {}/{}",
            frac.p, frac.q
        )));
    }
    let params = LatticeParams::from_alpha_frac(1.0, frac)?;
    let qmat = build_q(spec, &params, ZakPoint { x: 0.0, omega: 0.0 }, tol)?;
    let (p, q) = (frac.p, frac.q);
    let entry = |s: usize, j: usize| qmat.at(s, j);

    let mut worst = 0.0f64;
    let mut relations = 0usize;
    // Reflection identity over the full table.
    for s in 0..p {
        for j in 0..q {
            let mirror = entry((p - s) % p, (q - j) % q);
            worst = worst.max((entry(s, j) + mirror).norm());
            relations += 1;
        }
    }
    // Forced zeros and forced column pairings.
    worst = worst.max(entry(0, 0).norm());
    relations += 1;
    for s in 0..p {
        worst = worst.max((entry(s, 0) + entry((p - s) % p, 0)).norm());
        relations += 1;
    }
    if q % 2 == 0 {
        let half = q / 2;
        worst = worst.max(entry(0, half).norm());
        relations += 1;
        for s in 0..p {
            worst = worst.max((entry(s, half) + entry((p - s) % p, half)).norm());
            relations += 1;
        }
    }

    let threshold = 10.0 * tol;
    let mut details = std::collections::BTreeMap::new();
    details.insert("max_violation".to_string(), worst);
    details.insert("threshold".to_string(), threshold);
    details.insert("relations_checked".to_string(), relations as f64);
    Ok(crate::analysis::Certificate {
        kind: crate::analysis::CertificateKind::SymmetryRelations,
        pass: worst < threshold,
        details,
        x_intervals: Vec::new(),
    })
}
