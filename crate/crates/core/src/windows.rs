//! Window functions with declared symmetry and certified decay envelopes.
//!
//! A window is a real-valued function g on the line together with two pieces
//! of metadata the rest of the crate relies on:
//!
//! * a **parity** declaration (odd, even, or none), which licenses symmetry
//!   shortcuts such as half-domain scans, and
//! * a **decay envelope** — constants (C, a) and a shape such that
//!   |g(t)| <= C·e^(-a·t²) (Gaussian shape) or |g(t)| <= C·e^(-a·|t|)
//!   (exponential shape) for every t. Envelopes are what make series
//!   truncation *certified* instead of heuristic: every tail bound in this
//!   crate is derived from them in closed form.
//!
//! Four built-in windows are provided. User-supplied windows are loaded from
//! CSV sample files and must declare their own envelope; the library
//! deliberately refuses to infer one, since an inferred bound proves nothing.

use crate::error::{Error, Result};

/// Declared symmetry of a window about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// g(-t) = g(t).
    Even,
    /// g(-t) = -g(t).
    Odd,
}

/// Shape of a decay envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayForm {
    /// |g(t)| <= C·e^(-a·t²).
    GaussianDecay,
    /// |g(t)| <= C·e^(-a·|t|).
    ExponentialDecay,
}

/// A certified pointwise bound on |g|: amplitude C > 0, rate a > 0, and the
/// shape selecting between the two decay laws in [`DecayForm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    /// Which decay law the bound follows.
    pub form: DecayForm,
    /// Amplitude C of the bound.
    pub amplitude: f64,
    /// Rate a of the bound.
    pub rate: f64,
}

impl Envelope {
    /// Evaluates the envelope at |t|.
    pub fn bound(&self, t: f64) -> f64 {
        let t = t.abs();
        match self.form {
            DecayForm::GaussianDecay => self.amplitude * (-self.rate * t * t).exp(),
            DecayForm::ExponentialDecay => self.amplitude * (-self.rate * t).exp(),
        }
    }
}

/// Which closed form (or sample table) backs a [`WindowSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// g(t) = e^(-π·t²).
    Gaussian,
    /// g(t) = t·e^(-π·t²), the first Hermite window.
    Hermite1,
    /// g(t) = e^(-|t|).
    TwoSidedExponential,
    /// g(t) = 1/(e^t + e^(-t)).
    HyperbolicSecant,
    /// Piecewise-linear interpolant of user-supplied samples.
    Custom,
}

/// Sample table backing a custom window.
#[derive(Debug, Clone, PartialEq)]
struct SampleTable {
    /// Strictly increasing sample abscissae.
    ts: Vec<f64>,
    /// Window values at the abscissae.
    values: Vec<f64>,
}

/// A window function: evaluator, declared parity, and decay envelope.
///
/// Values are immutable after construction and every method is pure, so a
/// `WindowSpec` can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    kind: WindowKind,
    parity: Option<Parity>,
    envelope: Envelope,
    samples: Option<SampleTable>,
    label: String,
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
///
/// Returns the largest probed value. 160 shrink steps reduce the bracket by
/// a factor ~0.618^160 ≈ 1e-34, far below f64 resolution, so the result is
/// the true maximum up to floating rounding.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..160 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

impl WindowSpec {
    /// The Gaussian window g(t) = e^(-π·t²). Even; its envelope is itself.
    pub fn gaussian() -> Self {
        WindowSpec {
            kind: WindowKind::Gaussian,
            parity: Some(Parity::Even),
            envelope: Envelope {
                form: DecayForm::GaussianDecay,
                amplitude: 1.0,
                rate: std::f64::consts::PI,
            },
            samples: None,
            label: "gauss".to_string(),
        }
    }

    /// The first Hermite window g(t) = t·e^(-π·t²). Odd.
    ///
    /// The envelope uses half the Gaussian rate, a = π/2, so that the
    /// leftover factor |t|·e^(-π t²/2) is bounded; its supremum C is found
    /// at construction by a golden-section search (the maximizer sits at
    /// t = 1/sqrt(π), well inside the bracket [0, 4]) and inflated by one
    /// part in 1e12 so the stored amplitude is a true upper bound despite
    /// floating rounding.
    pub fn hermite1() -> Self {
        let rate = std::f64::consts::PI / 2.0;
        let sup = golden_section_max(|t| t * (-rate * t * t).exp(), 0.0, 4.0);
        WindowSpec {
            kind: WindowKind::Hermite1,
            parity: Some(Parity::Odd),
            envelope: Envelope {
                form: DecayForm::GaussianDecay,
                amplitude: sup * (1.0 + 1e-12),
                rate,
            },
            samples: None,
            label: "hermite1".to_string(),
        }
    }

    /// The two-sided exponential window g(t) = e^(-|t|). Even; its envelope
    /// is itself.
    pub fn two_sided_exponential() -> Self {
        WindowSpec {
            kind: WindowKind::TwoSidedExponential,
            parity: Some(Parity::Even),
            envelope: Envelope {
                form: DecayForm::ExponentialDecay,
                amplitude: 1.0,
                rate: 1.0,
            },
            samples: None,
            label: "exp2".to_string(),
        }
    }

    /// The hyperbolic-secant window g(t) = 1/(e^t + e^(-t)). Even.
    ///
    /// Since e^t + e^(-t) >= e^|t|, the exponential envelope with C = 1,
    /// a = 1 dominates it everywhere.
    pub fn hyperbolic_secant() -> Self {
        WindowSpec {
            kind: WindowKind::HyperbolicSecant,
            parity: Some(Parity::Even),
            envelope: Envelope {
                form: DecayForm::ExponentialDecay,
                amplitude: 1.0,
                rate: 1.0,
            },
            samples: None,
            label: "sech".to_string(),
        }
    }

    /// Builds a custom window from samples and a caller-supplied envelope.
    ///
    /// Requirements: at least two samples, strictly increasing abscissae,
    /// finite values, positive envelope constants, and every sample must
    /// respect the envelope (|value| <= bound·(1 + 1e-9)). Inside the sample
    /// range the window is the piecewise-linear interpolant; outside it the
    /// evaluator falls back to the envelope magnitude (the sign there is
    /// unknown, so supply a range wide enough that the tail mass is below
    /// your working tolerance). Custom windows carry no parity declaration.
    pub fn custom(
        ts: Vec<f64>,
        values: Vec<f64>,
        envelope: Envelope,
        label: String,
    ) -> Result<Self> {
        if ts.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "custom window: {} abscissae but {} values",
                ts.len(),
                values.len()
            )));
        }
        if ts.len() < 2 {
            return Err(Error::InvalidInput(
                "custom window needs at least two samples".to_string(),
            ));
        }
        if !(envelope.amplitude > 0.0) || !(envelope.rate > 0.0) {
            return Err(Error::InvalidInput(
                "custom window envelope needs amplitude > 0 and rate > 0".to_string(),
            ));
        }
        for pair in ts.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidInput(
                    "custom window abscissae must be strictly increasing".to_string(),
                ));
            }
        }
        for (&t, &v) in ts.iter().zip(&values) {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::InvalidInput(
                    "custom window samples must be finite".to_string(),
                ));
            }
            if v.abs() > envelope.bound(t) * (1.0 + 1e-9) {
                return Err(Error::InvalidInput(format!(
                    "custom window sample ({t}, {v}) violates its declared envelope"
                )));
            }
        }
        Ok(WindowSpec {
            kind: WindowKind::Custom,
            parity: None,
            envelope,
            samples: Some(SampleTable { ts, values }),
            label,
        })
    }

    /// Loads a custom window from a CSV file.
    ///
    /// The file holds one `t,value` pair per line plus exactly one header
    /// comment `# envelope,<form>,<C>,<a>` where `<form>` is `gauss` or
    /// `exp`. Blank lines and other `#` comments are ignored.
    pub fn custom_from_csv(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read '{path}': {e}")))?;
        let mut envelope = None;
        let mut ts = Vec::new();
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let fields: Vec<&str> = comment.split(',').map(str::trim).collect();
                if fields.first() == Some(&"envelope") {
                    if fields.len() != 4 {
                        return Err(Error::InvalidInput(format!(
                            "{path}:{}: envelope header needs form,C,a",
                            lineno + 1
                        )));
                    }
                    let form = match fields[1] {
                        "gauss" | "gaussian" => DecayForm::GaussianDecay,
                        "exp" | "exponential" => DecayForm::ExponentialDecay,
                        other => {
                            return Err(Error::InvalidInput(format!(
                                "{path}:{}: unknown envelope form '{other}'",
                                lineno + 1
                            )))
                        }
                    };
                    let amplitude = parse_float(fields[2], path, lineno)?;
                    let rate = parse_float(fields[3], path, lineno)?;
                    if envelope
                        .replace(Envelope {
                            form,
                            amplitude,
                            rate,
                        })
                        .is_some()
                    {
                        return Err(Error::InvalidInput(format!(
                            "{path}: more than one envelope header"
                        )));
                    }
                }
                continue;
            }
            let mut parts = line.split(',');
            let (Some(t), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::InvalidInput(format!(
                    "{path}:{}: expected 't,value'",
                    lineno + 1
                )));
            };
            ts.push(parse_float(t, path, lineno)?);
            values.push(parse_float(v, path, lineno)?);
        }
        let Some(envelope) = envelope else {
            return Err(Error::InvalidInput(format!(
                "{path}: missing '# envelope,<form>,<C>,<a>' header"
            )));
        };
        WindowSpec::custom(ts, values, envelope, format!("custom:{path}"))
    }

    /// Parses a CLI window token: `gauss`, `hermite1`, `exp2`, `sech`, or
    /// `custom:<path>`.
    pub fn parse_token(token: &str) -> Result<Self> {
        match token {
            "gauss" => Ok(WindowSpec::gaussian()),
            "hermite1" => Ok(WindowSpec::hermite1()),
            "exp2" => Ok(WindowSpec::two_sided_exponential()),
            "sech" => Ok(WindowSpec::hyperbolic_secant()),
            other => match other.strip_prefix("custom:") {
                Some(path) => WindowSpec::custom_from_csv(path),
                None => Err(Error::InvalidInput(format!(
                    "unknown window '{other}' (expected gauss, hermite1, exp2, sech, or custom:<path>)"
                ))),
            },
        }
    }

    /// Evaluates the window at t.
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            WindowKind::Gaussian => (-std::f64::consts::PI * t * t).exp(),
            WindowKind::Hermite1 => t * (-std::f64::consts::PI * t * t).exp(),
            WindowKind::TwoSidedExponential => (-t.abs()).exp(),
            WindowKind::HyperbolicSecant => 1.0 / (t.exp() + (-t).exp()),
            WindowKind::Custom => self.eval_samples(t),
        }
    }

    /// Piecewise-linear evaluation inside the sample range, envelope
    /// magnitude outside it.
    fn eval_samples(&self, t: f64) -> f64 {
        let table = self.samples.as_ref().expect("custom window has samples");
        let ts = &table.ts;
        if t < ts[0] || t > ts[ts.len() - 1] {
            return self.envelope.bound(t);
        }
        // partition_point returns the first index with ts[i] > t, so the
        // enclosing segment is [idx-1, idx].
        let idx = ts.partition_point(|&s| s <= t).min(ts.len() - 1).max(1);
        let (t0, t1) = (ts[idx - 1], ts[idx]);
        let (v0, v1) = (table.values[idx - 1], table.values[idx]);
        let w = (t - t0) / (t1 - t0);
        v0 + w * (v1 - v0)
    }

    /// The window's decay envelope.
    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    /// The declared symmetry, if any.
    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    /// Which closed form (or sample table) backs this window.
    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    /// Short human-readable label (the CLI token that produces this window).
    pub fn label(&self) -> &str {
        &self.label
    }
}

fn parse_float(s: &str, path: &str, lineno: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("{path}:{}: bad number '{s}'", lineno + 1)))
}

/// Evaluates a window at t. Free-function form of [`WindowSpec::eval`].
pub fn eval_window(spec: &WindowSpec, t: f64) -> f64 {
    spec.eval(t)
}

/// Evaluates a window's envelope at |t|; guaranteed >= |g(t)|.
pub fn envelope_bound(spec: &WindowSpec, t: f64) -> f64 {
    spec.envelope.bound(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// e^(-π), independently computed to 20 digits.
    const EXP_NEG_PI: f64 = 0.043_213_918_263_772_25;
    /// sup of |t|·e^(-π t²/2) = e^(-1/2)/sqrt(π), independently computed.
    const HERMITE1_ENVELOPE_SUP: f64 = 0.342_198_280_312_216_53;

    #[test]
    fn builtin_point_values() {
        let h1 = WindowSpec::hermite1();
        assert_eq!(h1.eval(0.0), 0.0);
        assert!((h1.eval(1.0) - EXP_NEG_PI).abs() < 1e-16);
        let g = WindowSpec::gaussian();
        assert_eq!(g.eval(0.0), 1.0);
        let e2 = WindowSpec::two_sided_exponential();
        assert!((e2.eval(3.0) - 0.049_787_068_367_863_94).abs() < 1e-16);
        let sech = WindowSpec::hyperbolic_secant();
        assert!((sech.eval(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn hermite1_envelope_amplitude_matches_closed_form() {
        let h1 = WindowSpec::hermite1();
        let c = h1.envelope().amplitude;
        // The search result sits within 1e-12 relative of the closed-form
        // supremum and never below it (the safety inflation guarantees >=).
        assert!(c >= HERMITE1_ENVELOPE_SUP);
        assert!((c - HERMITE1_ENVELOPE_SUP).abs() < 1e-11 * HERMITE1_ENVELOPE_SUP);
    }

    #[test]
    fn envelope_soundness_on_dense_samples() {
        let specs = [
            WindowSpec::gaussian(),
            WindowSpec::hermite1(),
            WindowSpec::two_sided_exponential(),
            WindowSpec::hyperbolic_secant(),
        ];
        for spec in &specs {
            for i in 0..10_000 {
                let t = -10.0 + 20.0 * (i as f64) / 9_999.0;
                assert!(
                    envelope_bound(spec, t) >= spec.eval(t).abs(),
                    "{} envelope fails at t = {t}",
                    spec.label()
                );
            }
        }
    }

    #[test]
    fn declared_parity_holds_at_random_points() {
        // Deterministic low-discrepancy points in [-5, 5].
        let points: Vec<f64> = (0..1000)
            .map(|i| -5.0 + 10.0 * (((i as f64) * 0.754_877_666_246_693) % 1.0))
            .collect();
        for spec in [WindowSpec::gaussian(), WindowSpec::two_sided_exponential()] {
            for &t in &points {
                assert_eq!(
                    spec.eval(-t),
                    spec.eval(t),
                    "{} not even at {t}",
                    spec.label()
                );
            }
        }
        let h1 = WindowSpec::hermite1();
        for &t in &points {
            assert_eq!(h1.eval(-t) + h1.eval(t), 0.0, "hermite1 not odd at {t}");
        }
        let sech = WindowSpec::hyperbolic_secant();
        for &t in &points {
            // e^t + e^(-t) is evaluated in a symmetric form, so evenness is
            // exact in floating point.
            assert_eq!(sech.eval(-t), sech.eval(t), "sech not even at {t}");
        }
    }

    #[test]
    fn exponential_window_meets_envelope_with_equality() {
        let e2 = WindowSpec::two_sided_exponential();
        assert_eq!(envelope_bound(&e2, 3.0), e2.eval(3.0));
    }

    #[test]
    fn hermite1_envelope_dominates_at_two() {
        // With amplitude C and rate π/2, the bound at t = 2 must dominate
        // |h1(2)| = 2 e^(-4π) = 6.9746847124179910e-6 (independently
        // computed).
        let h1 = WindowSpec::hermite1();
        assert!(envelope_bound(&h1, 2.0) >= 6.974_684_712_417_991e-6);
    }

    #[test]
    fn token_parsing_roundtrip() {
        assert_eq!(
            WindowSpec::parse_token("gauss").unwrap().kind(),
            WindowKind::Gaussian
        );
        assert_eq!(
            WindowSpec::parse_token("hermite1").unwrap().kind(),
            WindowKind::Hermite1
        );
        assert_eq!(
            WindowSpec::parse_token("exp2").unwrap().kind(),
            WindowKind::TwoSidedExponential
        );
        assert_eq!(
            WindowSpec::parse_token("sech").unwrap().kind(),
            WindowKind::HyperbolicSecant
        );
        assert!(WindowSpec::parse_token("nosuch").is_err());
    }

    #[test]
    fn custom_window_from_samples() {
        let env = Envelope {
            form: DecayForm::ExponentialDecay,
            amplitude: 2.0,
            rate: 0.5,
        };
        let spec = WindowSpec::custom(
            vec![-1.0, 0.0, 1.0],
            vec![0.5, 1.0, 0.5],
            env,
            "custom:test".to_string(),
        )
        .unwrap();
        assert_eq!(spec.eval(0.0), 1.0);
        assert_eq!(spec.eval(0.5), 0.75); // linear interpolation
        assert_eq!(spec.eval(2.0), env.bound(2.0)); // envelope fallback
        assert_eq!(spec.parity(), None);
    }

    #[test]
    fn custom_window_rejects_bad_input() {
        let env = Envelope {
            form: DecayForm::GaussianDecay,
            amplitude: 1.0,
            rate: 1.0,
        };
        // Sample above the envelope.
        assert!(
            WindowSpec::custom(vec![0.0, 1.0], vec![2.0, 0.1], env, "bad".to_string()).is_err()
        );
        // Non-increasing abscissae.
        assert!(
            WindowSpec::custom(vec![1.0, 1.0], vec![0.1, 0.1], env, "bad".to_string()).is_err()
        );
        // Too few samples.
        assert!(WindowSpec::custom(vec![0.0], vec![0.5], env, "bad".to_string()).is_err());
    }
}
