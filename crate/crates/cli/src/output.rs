//! Serialization of analysis results: CSV with a comment trailer (and the
//! inverse parser — emit/parse round-trips bit-exactly), canonical JSON,
//! and self-contained SVG plots with no plotting dependency.
//!
//! Floats are printed with `{:E}` — Rust's shortest representation that
//! parses back to the identical bits — so CSV round-trips are exact and
//! output never depends on locale (always `.` decimals, LF line endings).

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use gaborscan_core::{
    Certificate, CertificateKind, ComplexMatrix, Error, GridSpec, LatticeParams, Result,
    ScanResult, SweepRecord, Verdict, XMaxMode, ZakPoint,
};

/// Shortest round-trip scientific notation (e.g. `1.086434811213308E0`).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:E}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("expected a float, got {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("expected an integer, got {s:?}")))
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::FrameLikely => "FrameLikely",
        Verdict::NotFrame => "NotFrame",
        Verdict::Inconclusive => "Inconclusive",
    }
}

fn verdict_from_name(s: &str) -> Result<Verdict> {
    match s {
        "FrameLikely" => Ok(Verdict::FrameLikely),
        "NotFrame" => Ok(Verdict::NotFrame),
        "Inconclusive" => Ok(Verdict::Inconclusive),
        _ => Err(Error::InvalidInput(format!("unknown verdict {s:?}"))),
    }
}

fn mode_name(m: XMaxMode) -> &'static str {
    match m {
        XMaxMode::FullDomain => "full",
        XMaxMode::HalfDomain => "half",
    }
}

fn mode_from_name(s: &str) -> Result<XMaxMode> {
    match s {
        "full" => Ok(XMaxMode::FullDomain),
        "half" => Ok(XMaxMode::HalfDomain),
        _ => Err(Error::InvalidInput(format!("unknown x_max_mode {s:?}"))),
    }
}

pub fn certificate_kind_name(k: CertificateKind) -> &'static str {
    match k {
        CertificateKind::OddWindowDeficiency => "odd-deficiency",
        CertificateKind::ThreeFifthsTaussky => "three-fifths",
        CertificateKind::SymmetryRelations => "symmetry",
    }
}

fn x_span_of(result: &ScanResult) -> f64 {
    let full = result.params.alpha / result.params.frac.p as f64;
    match result.grid.x_max_mode {
        XMaxMode::FullDomain => full,
        XMaxMode::HalfDomain => full / 2.0,
    }
}

// --- scan CSV ---------------------------------------------------------------

/// Rows `x,omega,sigma_min` in row-major grid order, then a comment trailer
/// carrying everything needed to reconstruct the [`ScanResult`].
pub fn scan_to_csv(result: &ScanResult) -> String {
    let x_span = x_span_of(result);
    let omega_span = 1.0 / result.params.alpha;
    let (nx, nw) = (result.grid.nx, result.grid.nw);
    let mut out = String::from("x,omega,sigma_min\n");
    for i in 0..nx {
        let x = x_span * i as f64 / nx as f64;
        for j in 0..nw {
            let omega = omega_span * j as f64 / nw as f64;
            let v = result.sigma_min_field[i * nw + j];
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(x),
                fmt_f64(omega),
                fmt_f64(v)
            ));
        }
    }
    out.push_str(&format!("# alpha = {}\n", fmt_f64(result.params.alpha)));
    out.push_str(&format!("# beta = {}\n", fmt_f64(result.params.beta)));
    out.push_str(&format!("# p = {}\n", result.params.frac.p));
    out.push_str(&format!("# q = {}\n", result.params.frac.q));
    out.push_str(&format!("# nx = {nx}\n"));
    out.push_str(&format!("# nw = {nw}\n"));
    out.push_str(&format!(
        "# x_max_mode = {}\n",
        mode_name(result.grid.x_max_mode)
    ));
    out.push_str(&format!("# global_min = {}\n", fmt_f64(result.global_min)));
    out.push_str(&format!("# argmin_x = {}\n", fmt_f64(result.argmin.x)));
    out.push_str(&format!(
        "# argmin_omega = {}\n",
        fmt_f64(result.argmin.omega)
    ));
    out.push_str(&format!("# verdict = {}\n", verdict_name(result.verdict)));
    out
}

/// Inverse of [`scan_to_csv`]; the reconstruction equals the original
/// result field-for-field.
pub fn scan_from_csv(text: &str) -> Result<ScanResult> {
    let mut field = Vec::new();
    let mut trailer: BTreeMap<String, String> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            if line != "x,omega,sigma_min" {
                return Err(Error::InvalidInput(format!(
                    "unexpected scan header {line:?}"
                )));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("malformed trailer line {line:?}")))?;
            trailer.insert(key.trim().to_string(), value.trim().to_string());
            continue;
        }
        let mut cols = line.split(',');
        let (_x, _omega, sigma) = (cols.next(), cols.next(), cols.next());
        let sigma = sigma
            .ok_or_else(|| Error::InvalidInput(format!("scan row needs 3 columns: {line:?}")))?;
        if cols.next().is_some() {
            return Err(Error::InvalidInput(format!(
                "scan row has extra columns: {line:?}"
            )));
        }
        field.push(parse_f64(sigma)?);
    }
    let get = |key: &str| -> Result<&String> {
        trailer
            .get(key)
            .ok_or_else(|| Error::InvalidInput(format!("scan trailer missing key {key:?}")))
    };
    let alpha = parse_f64(get("alpha")?)?;
    let beta = parse_f64(get("beta")?)?;
    let p = parse_usize(get("p")?)?;
    let q = parse_usize(get("q")?)?;
    let nx = parse_usize(get("nx")?)?;
    let nw = parse_usize(get("nw")?)?;
    if field.len() != nx * nw {
        return Err(Error::InvalidInput(format!(
            "scan CSV carries {} rows but the trailer says {nx}x{nw}",
            field.len()
        )));
    }
    let frac = gaborscan_core::ReducedFraction::new(p, q)?;
    Ok(ScanResult {
        params: LatticeParams::new(alpha, beta, frac)?,
        grid: GridSpec {
            nx,
            nw,
            x_max_mode: mode_from_name(get("x_max_mode")?)?,
        },
        sigma_min_field: field,
        global_min: parse_f64(get("global_min")?)?,
        argmin: ZakPoint {
            x: parse_f64(get("argmin_x")?)?,
            omega: parse_f64(get("argmin_omega")?)?,
        },
        verdict: verdict_from_name(get("verdict")?)?,
    })
}

// --- sweep CSV ---------------------------------------------------------------

/// Rows `n,j,ab,p,q,min_eig`, one per sweep record.
pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("n,j,ab,p,q,min_eig\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.j,
            fmt_f64(r.ab),
            r.reduced.p,
            r.reduced.q,
            fmt_f64(r.min_eig)
        ));
    }
    out
}

/// Inverse of [`sweep_to_csv`].
pub fn sweep_from_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if idx == 0 {
            if line != "n,j,ab,p,q,min_eig" {
                return Err(Error::InvalidInput(format!(
                    "unexpected sweep header {line:?}"
                )));
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(Error::InvalidInput(format!(
                "sweep row needs 6 columns: {line:?}"
            )));
        }
        records.push(SweepRecord {
            n: parse_usize(cols[0])?,
            j: parse_usize(cols[1])?,
            ab: parse_f64(cols[2])?,
            reduced: gaborscan_core::ReducedFraction::new(
                parse_usize(cols[3])?,
                parse_usize(cols[4])?,
            )?,
            min_eig: parse_f64(cols[5])?,
        });
    }
    Ok(records)
}

// --- JSON ---------------------------------------------------------------------

fn json_f64(v: f64) -> Value {
    // serde_json numbers cannot hold non-finite values; fall back to the
    // string spelling rather than dropping information.
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| json!(fmt_f64(v)))
}

/// Canonical JSON encoding of a scan result.
pub fn scan_to_json(result: &ScanResult) -> String {
    let value = json!({
        "alpha": json_f64(result.params.alpha),
        "beta": json_f64(result.params.beta),
        "p": result.params.frac.p,
        "q": result.params.frac.q,
        "nx": result.grid.nx,
        "nw": result.grid.nw,
        "x_max_mode": mode_name(result.grid.x_max_mode),
        "sigma_min_field": result.sigma_min_field.iter().map(|&v| json_f64(v)).collect::<Vec<_>>(),
        "global_min": json_f64(result.global_min),
        "argmin": { "x": json_f64(result.argmin.x), "omega": json_f64(result.argmin.omega) },
        "verdict": verdict_name(result.verdict),
    });
    serde_json::to_string_pretty(&value).expect("static JSON shape")
}

/// Canonical JSON encoding of sweep records.
pub fn sweep_to_json(records: &[SweepRecord]) -> String {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "j": r.j,
                "ab": json_f64(r.ab),
                "p": r.reduced.p,
                "q": r.reduced.q,
                "min_eig": json_f64(r.min_eig),
            })
        })
        .collect();
    serde_json::to_string_pretty(&Value::Array(rows)).expect("static JSON shape")
}

/// JSON encoding of a certificate, including every named margin.
pub fn certificate_to_json(cert: &Certificate) -> String {
    let mut details = Map::new();
    for (k, v) in &cert.details {
        details.insert(k.clone(), json_f64(*v));
    }
    let intervals: Vec<Value> = cert
        .x_intervals
        .iter()
        .map(|&(lo, hi)| Value::Array(vec![json_f64(lo), json_f64(hi)]))
        .collect();
    let value = json!({
        "kind": certificate_kind_name(cert.kind),
        "pass": cert.pass,
        "details": Value::Object(details),
        "x_intervals": intervals,
    });
    serde_json::to_string_pretty(&value).expect("static JSON shape")
}

/// JSON dump of a Zak-domain matrix: row-major entries as [re, im] pairs.
pub fn matrix_to_json(
    which: &str,
    params: &LatticeParams,
    point: ZakPoint,
    m: &ComplexMatrix,
) -> String {
    let entries: Vec<Value> = m
        .data()
        .iter()
        .map(|z| Value::Array(vec![json_f64(z.re), json_f64(z.im)]))
        .collect();
    let value = json!({
        "which": which,
        "alpha": json_f64(params.alpha),
        "beta": json_f64(params.beta),
        "p": params.frac.p,
        "q": params.frac.q,
        "x": json_f64(point.x),
        "omega": json_f64(point.omega),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&value).expect("static JSON shape")
}

// --- SVG ----------------------------------------------------------------------

const PLOT_W: f64 = 560.0;
const PLOT_H: f64 = 400.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_B: f64 = 55.0;

fn svg_open(title: &str) -> String {
    let w = MARGIN_L + PLOT_W + MARGIN_R;
    let h = MARGIN_T + PLOT_H + MARGIN_B;
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{tx}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">{title}</text>\n",
        tx = MARGIN_L + PLOT_W / 2.0
    )
}

/// Three-stop color ramp (dark violet → teal → yellow) on t in [0, 1].
fn ramp(t: f64) -> String {
    let stops = [
        (68.0, 1.0, 84.0),
        (33.0, 145.0, 140.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0);
    let (a, b, s) = if t < 0.5 {
        (stops[0], stops[1], t * 2.0)
    } else {
        (stops[1], stops[2], t * 2.0 - 1.0)
    };
    let mix = |x: f64, y: f64| (x + (y - x) * s).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

/// Heatmap of the scan field: x along the horizontal axis, ω vertical,
/// color = log10 of the normalized field value over 12 decades.
pub fn scan_to_svg(result: &ScanResult) -> String {
    let (nx, nw) = (result.grid.nx, result.grid.nw);
    let field_max = result
        .sigma_min_field
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut svg = svg_open(&format!(
        "sigma_min over the fundamental cell (alpha={}, density {}/{}, verdict {})",
        fmt_f64(result.params.alpha),
        result.params.frac.p,
        result.params.frac.q,
        verdict_name(result.verdict)
    ));
    let cell_w = PLOT_W / nx as f64;
    let cell_h = PLOT_H / nw as f64;
    for i in 0..nx {
        for j in 0..nw {
            let v = result.sigma_min_field[i * nw + j].max(1e-300);
            let t = 1.0 + (v / field_max).log10() / 12.0; // 1 at max, 0 twelve decades down
            let x = MARGIN_L + i as f64 * cell_w;
            let y = MARGIN_T + PLOT_H - (j + 1) as f64 * cell_h;
            svg.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" \
                 fill=\"{c}\"/>\n",
                w = cell_w + 0.05,
                h = cell_h + 0.05,
                c = ramp(t)
            ));
        }
    }
    svg.push_str(&axis_labels("x", "omega"));
    svg.push_str("</svg>\n");
    svg
}

/// Log-scale scatter of sweep records: min_eig against the density αβ. The
/// collapse rows (reduced q − p = 1) sit on the plot floor; every point
/// carries its indices as data attributes so the geometry is checkable.
pub fn sweep_to_svg(records: &[SweepRecord]) -> String {
    let mut svg = svg_open("Minimal Gramian eigenvalue across densities (n-j)/n");
    let (ab_lo, ab_hi) = records
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.ab), hi.max(r.ab))
        });
    let ab_span = (ab_hi - ab_lo).max(1e-9);
    let log_floor = -20.0f64;
    let log_ceil = records
        .iter()
        .map(|r| r.min_eig.max(1e-300).log10())
        .fold(f64::NEG_INFINITY, f64::max)
        .max(log_floor + 1.0)
        .ceil();
    let x_of = |ab: f64| MARGIN_L + (ab - ab_lo) / ab_span * PLOT_W;
    let y_of = |v: f64| {
        let l = v.max(1e-300).log10().clamp(log_floor, log_ceil);
        MARGIN_T + PLOT_H * (log_ceil - l) / (log_ceil - log_floor)
    };
    // Decade gridlines with tick labels.
    let mut decade = log_floor as i64;
    while (decade as f64) <= log_ceil {
        let y = y_of(10f64.powi(decade as i32));
        svg.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y:.2}\" x2=\"{x2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n\
             <text x=\"{tx}\" y=\"{ty:.2}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"end\">1e{decade}</text>\n",
            x1 = MARGIN_L,
            x2 = MARGIN_L + PLOT_W,
            tx = MARGIN_L - 6.0,
            ty = y + 3.0
        ));
        decade += 4;
    }
    for r in records {
        let collapse = r.reduced.q == r.reduced.p + 1;
        svg.push_str(&format!(
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3\" fill=\"{fill}\" \
             data-n=\"{n}\" data-j=\"{j}\" data-p=\"{p}\" data-q=\"{q}\" \
             data-min-eig=\"{me}\"/>\n",
            cx = x_of(r.ab),
            cy = y_of(r.min_eig),
            fill = if collapse { "#d62728" } else { "#1f77b4" },
            n = r.n,
            j = r.j,
            p = r.reduced.p,
            q = r.reduced.q,
            me = fmt_f64(r.min_eig)
        ));
    }
    svg.push_str(&axis_labels("alpha*beta", "min eigenvalue (log scale)"));
    svg.push_str("</svg>\n");
    svg
}

fn axis_labels(x_label: &str, y_label: &str) -> String {
    format!(
        "<rect x=\"{px}\" y=\"{py}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n\
         <text x=\"{xlx}\" y=\"{xly}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{x_label}</text>\n\
         <text x=\"{ylx}\" y=\"{yly}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 {ylx} {yly})\">{y_label}</text>\n",
        px = MARGIN_L,
        py = MARGIN_T,
        pw = PLOT_W,
        ph = PLOT_H,
        xlx = MARGIN_L + PLOT_W / 2.0,
        xly = MARGIN_T + PLOT_H + 35.0,
        ylx = 20.0,
        yly = MARGIN_T + PLOT_H / 2.0,
    )
}

// --- minimal XML well-formedness check -----------------------------------------

/// Checks tag balance, quote-aware attribute scanning, and single-root
/// structure — enough to catch any malformed emission from this module.
pub fn xml_well_formed(text: &str) -> bool {
    let bytes = text.as_bytes();
    let mut i = 0usize;
    let mut stack: Vec<String> = Vec::new();
    let mut roots = 0usize;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            if bytes[i] == b'>' {
                return false;
            }
            i += 1;
            continue;
        }
        let rest = &text[i..];
        if let Some(tail) = rest.strip_prefix("<?") {
            match tail.find("?>") {
                Some(k) => i += 2 + k + 2,
                None => return false,
            }
        } else if let Some(tail) = rest.strip_prefix("<!--") {
            match tail.find("-->") {
                Some(k) => i += 4 + k + 3,
                None => return false,
            }
        } else if let Some(tail) = rest.strip_prefix("</") {
            let close = match tail.find('>') {
                Some(k) => k,
                None => return false,
            };
            let name = tail[..close].trim();
            match stack.pop() {
                Some(open) if open == name => {}
                _ => return false,
            }
            i += 2 + close + 1;
        } else {
            let mut j = i + 1;
            let mut quote: Option<u8> = None;
            let mut end = None;
            while j < bytes.len() {
                match (quote, bytes[j]) {
                    (Some(q), c) if c == q => quote = None,
                    (Some(_), _) => {}
                    (None, b'"') | (None, b'\'') => quote = Some(bytes[j]),
                    (None, b'>') => {
                        end = Some(j);
                        break;
                    }
                    (None, b'<') => return false,
                    (None, _) => {}
                }
                j += 1;
            }
            let end = match end {
                Some(e) => e,
                None => return false,
            };
            let inner = &text[i + 1..end];
            let self_closing = inner.ends_with('/');
            let name: String = inner
                .trim_start()
                .chars()
                .take_while(|c| !c.is_whitespace() && *c != '/' && *c != '>')
                .collect();
            if name.is_empty() {
                return false;
            }
            if stack.is_empty() {
                roots += 1;
                if roots > 1 {
                    return false;
                }
            }
            if !self_closing {
                stack.push(name);
            }
            i = end + 1;
        }
    }
    stack.is_empty() && roots == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_and_matches_plain_zero() {
        assert_eq!(fmt_f64(0.0), "0E0");
        for v in [1.0864348112133082, -3.25e-17, 0.6, 1e308, 5e-324] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s} did not round-trip");
        }
    }

    #[test]
    fn xml_checker_accepts_and_rejects() {
        assert!(xml_well_formed(
            "<?xml version=\"1.0\"?>\n<a><b x=\"1\"/><c>t</c></a>"
        ));
        assert!(!xml_well_formed("<a><b></a></b>"));
        assert!(!xml_well_formed("<a>"));
        assert!(!xml_well_formed("<a/><b/>"));
        assert!(!xml_well_formed("<a attr=\"unclosed></a>"));
        assert!(xml_well_formed("<a attr=\"5 &gt; 3\"><!-- note --></a>"));
    }
}
