//! Small dense complex linear algebra: singular values, Hermitian
//! eigenvalues, rank with tolerance, determinants, and diagonal-dominance
//! nonsingularity tests.
//!
//! Every matrix in this crate is tiny (tens of rows at most), so the kernels
//! favor accuracy and determinism over asymptotics: one-sided Jacobi for
//! singular values and cyclic two-sided Jacobi for Hermitian eigenvalues,
//! both of which converge to near machine precision on these sizes in a
//! handful of sweeps and perform identical operations regardless of thread
//! count. Iteration budgets turn pathological inputs into errors instead of
//! hangs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative rank tolerance: singular values below this fraction of
/// the largest one count as zero.
pub const DEFAULT_RANK_REL_TOL: f64 = 1e-8;

/// Sweep budget for the iterative kernels.
const MAX_SWEEPS: usize = 10_000;

/// Convergence threshold for Jacobi iterations, relative to column norms
/// (SVD) or the initial magnitude scale (eigenvalues).
const JACOBI_EPS: f64 = 1e-14;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape. Both dimensions must be positive.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Builds a matrix entrywise from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    /// Identity matrix of order n.
    pub fn identity(n: usize) -> Self {
        ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at (row, col).
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    /// Overwrites the entry at (row, col).
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Mutable row-major entry slice.
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Conjugate transpose.
    pub fn conj_transpose(&self) -> Self {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    /// Matrix product self·rhs.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        ComplexMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..self.cols {
                acc += self.at(r, k) * rhs.at(k, c);
            }
            acc
        })
    }

    /// The Hermitian product self·self†.
    pub fn times_conj_transpose(&self) -> Self {
        ComplexMatrix::from_fn(self.rows, self.rows, |r, c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..self.cols {
                acc += self.at(r, k) * self.at(c, k).conj();
            }
            acc
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation |a_rc − conj(a_cr)| from Hermitian symmetry.
    /// Only meaningful for square matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        assert_eq!(
            self.rows, self.cols,
            "Hermitian deviation needs a square matrix"
        );
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                worst = worst.max((self.at(r, c) - self.at(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of self − other.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shapes must agree"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Rank decision together with the evidence it was made from.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    /// Number of singular values above the threshold.
    pub rank: usize,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// Absolute threshold that separated "zero" from "nonzero".
    pub threshold_used: f64,
}

/// Which of the two diagonal-dominance conditions [`taussky_check`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TausskyMode {
    /// Every diagonal modulus strictly exceeds its off-diagonal row sum.
    RowDominance,
    /// For every pair i ≠ j, |a_ii|·|a_jj| strictly exceeds R_i·R_j, where
    /// R_i is the off-diagonal row sum — weaker per-row, still sufficient.
    PairwiseProduct,
}

/// Outcome of a diagonal-dominance test. A pass certifies det ≠ 0; a fail
/// certifies nothing (the test is sufficient, not necessary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TausskyReport {
    /// Condition that was tested.
    pub mode: TausskyMode,
    /// Whether the condition holds strictly.
    pub pass: bool,
    /// Minimal slack across rows (or pairs); negative when failing.
    pub margin: f64,
}

/// Jacobi rotation tangent from the standard stable parameterization.
/// τ = 0 maps to a 45° rotation, which is what an equal-diagonal pair needs.
fn jacobi_tangent(tau: f64) -> f64 {
    if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    }
}

/// All min(rows, cols) singular values of M, descending, each accurate to
/// about 1e-12·σ_max relative.
///
/// One-sided Jacobi: orthogonalize column pairs of M (or of M† when that is
/// the taller orientation — the nonzero spectrum is the same) by unitary
/// right multiplications until every pair's inner product is negligible
/// against the column norms; the singular values are then the column norms.
// The rotation loops index two columns in lockstep; iterator forms would
// need split borrows that obscure the update.
#[allow(clippy::needless_range_loop)]
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    // Work on the orientation with rows >= cols so the pair loop is short.
    let work = if m.rows >= m.cols {
        m.clone()
    } else {
        m.conj_transpose()
    };
    let (rows, cols) = (work.rows, work.cols);
    // Column-major copy for cache-friendly column ops.
    let mut col: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| work.at(r, c)).collect())
        .collect();
    let mut sweeps = 0;
    loop {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for i in 0..cols.saturating_sub(1) {
            for j in (i + 1)..cols {
                let mut a = 0.0;
                let mut b = 0.0;
                let mut g = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    a += col[i][k].norm_sqr();
                    b += col[j][k].norm_sqr();
                    g += col[i][k].conj() * col[j][k];
                }
                if a == 0.0 || b == 0.0 || g.norm() <= JACOBI_EPS * (a * b).sqrt() {
                    continue;
                }
                // Rotate column j by a unit phase so the pair's inner
                // product becomes real, then apply the real rotation that
                // orthogonalizes the pair.
                let phase = Complex64::from_polar(1.0, -g.arg());
                let gn = g.norm();
                let t = jacobi_tangent((b - a) / (2.0 * gn));
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for k in 0..rows {
                    let ui = col[i][k];
                    let uj = col[j][k] * phase;
                    col[i][k] = cs * ui - sn * uj;
                    col[j][k] = sn * ui + cs * uj;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = col
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).expect("singular values are finite"));
    Ok(sigma)
}

/// Counts singular values above rel_tol·σ_max (or above rel_tol itself when
/// σ_max = 0) and reports the evidence.
pub fn rank_with_tol(m: &ComplexMatrix, rel_tol: f64) -> Result<RankReport> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidInput(format!(
            "relative rank tolerance must lie in (0, 1), got {rel_tol}"
        )));
    }
    let singular_values = singular_values(m)?;
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let threshold_used = if sigma_max > 0.0 {
        rel_tol * sigma_max
    } else {
        rel_tol
    };
    let rank = singular_values
        .iter()
        .filter(|&&s| s > threshold_used)
        .count();
    Ok(RankReport {
        rank,
        singular_values,
        threshold_used,
    })
}

/// Smallest eigenvalue of a Hermitian matrix, within about 1e-10·‖M‖.
///
/// The input must be Hermitian to 1e-10 entrywise (relative to
/// max(1, largest modulus)); it is symmetrized exactly before the cyclic
/// two-sided Jacobi iteration so rounding in the caller's assembly cannot
/// leak into the spectrum.
pub fn min_eig_hermitian(m: &ComplexMatrix) -> Result<f64> {
    if m.rows != m.cols {
        return Err(Error::InvalidInput(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > 1e-10 * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    // Exact symmetrization: a ← (a + a†)/2.
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (m.at(r, c) + m.at(c, r).conj()) * 0.5);
    for d in 0..n {
        let v = a.at(d, d);
        a.set(d, d, Complex64::new(v.re, 0.0));
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let thresh = JACOBI_EPS * scale;
    let mut sweeps = 0;
    loop {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let g = a.at(i, j);
                let gn = g.norm();
                if gn <= thresh {
                    continue;
                }
                // Phase-align entry (i,j) to a real value, then rotate the
                // (i,j) plane to annihilate it: A ← J† A J.
                let phase = Complex64::from_polar(1.0, -g.arg());
                let alpha = a.at(i, i).re;
                let beta = a.at(j, j).re;
                let t = jacobi_tangent((beta - alpha) / (2.0 * gn));
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                // Column update (right multiplication by J).
                for k in 0..n {
                    let x = a.at(k, i);
                    let y = a.at(k, j) * phase;
                    a.set(k, i, cs * x - sn * y);
                    a.set(k, j, sn * x + cs * y);
                }
                // Row update (left multiplication by J†).
                for k in 0..n {
                    let x = a.at(i, k);
                    let y = a.at(j, k) * phase.conj();
                    a.set(i, k, cs * x - sn * y);
                    a.set(j, k, sn * x + cs * y);
                }
                // The pivot is zero in exact arithmetic and the diagonal is
                // real; pin both to kill rounding drift.
                a.set(i, j, Complex64::new(0.0, 0.0));
                a.set(j, i, Complex64::new(0.0, 0.0));
                let dii = a.at(i, i);
                a.set(i, i, Complex64::new(dii.re, 0.0));
                let djj = a.at(j, j);
                a.set(j, j, Complex64::new(djj.re, 0.0));
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    let min = (0..n).map(|d| a.at(d, d).re).fold(f64::INFINITY, f64::min);
    Ok(min)
}

/// Determinant via partially pivoted elimination. Used for cross-checks.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    if m.rows != m.cols {
        return Err(Error::InvalidInput(format!(
            "determinant needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (pivot_row, pivot_norm) = (k..n)
            .map(|r| (r, a.at(r, k).norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite entries"))
            .expect("nonempty pivot range");
        if pivot_norm == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot_row != k {
            for c in 0..n {
                let tmp = a.at(k, c);
                a.set(k, c, a.at(pivot_row, c));
                a.set(pivot_row, c, tmp);
            }
            det = -det;
        }
        let pivot = a.at(k, k);
        det *= pivot;
        for r in (k + 1)..n {
            let factor = a.at(r, k) / pivot;
            for c in k..n {
                let v = a.at(r, c) - factor * a.at(k, c);
                a.set(r, c, v);
            }
        }
    }
    Ok(det)
}

/// Tests one of the two strict diagonal-dominance conditions; a pass
/// certifies that the matrix is nonsingular.
pub fn taussky_check(m: &ComplexMatrix, mode: TausskyMode) -> TausskyReport {
    assert_eq!(m.rows, m.cols, "dominance test needs a square matrix");
    let n = m.rows;
    let diag: Vec<f64> = (0..n).map(|i| m.at(i, i).norm()).collect();
    let offsum: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&k| k != i).map(|k| m.at(i, k).norm()).sum())
        .collect();
    let margin = match mode {
        TausskyMode::RowDominance => (0..n)
            .map(|i| diag[i] - offsum[i])
            .fold(f64::INFINITY, f64::min),
        TausskyMode::PairwiseProduct => {
            if n == 1 {
                diag[0]
            } else {
                let mut worst = f64::INFINITY;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            worst = worst.min(diag[i] * diag[j] - offsum[i] * offsum[j]);
                        }
                    }
                }
                worst
            }
        }
    };
    // A 1x1 matrix row-dominates trivially when its single entry is nonzero.
    let margin = if n == 1 && mode == TausskyMode::RowDominance {
        diag[0]
    } else {
        margin
    };
    TausskyReport {
        mode,
        pass: margin > 0.0,
        margin,
    }
}
