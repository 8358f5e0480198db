//! One-port Touchstone (`.s1p`) writer and reader.
//!
//! The writer emits version-1 files in a single canonical form: optional
//! `!` comment lines, one option line `# GHz S RI R <z>`, then one
//! `<f_GHz> <re> <im>` row per frequency with LF line endings. Frequencies
//! carry nine decimals of a GHz and the real/imaginary parts nine
//! significant digits, so a read–write cycle of our own output is
//! byte-identical and any parse stays within 5e-9 of the original values.
//!
//! The reader is more tolerant than the writer: it accepts any of the Hz,
//! kHz, MHz, GHz frequency units, any reference resistance, arbitrary
//! comment placement, and inline `!` comments after data. Magnitude-angle
//! and dB formats are rejected rather than silently converted.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::network::FrequencySweep;

/// A parsed `.s1p` file: leading/interleaved full-line comments (in file
/// order, `!` stripped) plus the reflection sweep itself.
#[derive(Debug, Clone)]
pub struct TouchstoneFile {
    pub comments: Vec<String>,
    pub sweep: FrequencySweep,
}

/// Render a sweep in the canonical writer form described in the module docs.
///
/// Comment strings must be single-line; each becomes one `!` line above the
/// option line.
pub fn render_touchstone(sweep: &FrequencySweep, comments: &[String]) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        if c.contains('\n') || c.contains('\r') {
            return Err(Error::Validation(format!(
                "touchstone comments must be single-line, got {c:?}"
            )));
        }
        if c.is_empty() {
            out.push('!');
        } else {
            out.push_str("! ");
            out.push_str(c);
        }
        out.push('\n');
    }
    out.push_str(&format!("# GHz S RI R {}\n", sweep.reference_impedance));
    for (f, s) in sweep.frequencies.iter().zip(&sweep.s11) {
        out.push_str(&format!(
            "{:.9} {:.8e} {:.8e}\n",
            f / 1.0e9,
            s.re,
            s.im
        ));
    }
    Ok(out)
}

/// Parse `.s1p` text into comments plus a validated [`FrequencySweep`].
pub fn parse_touchstone(text: &str) -> Result<TouchstoneFile> {
    let mut comments = Vec::new();
    let mut option: Option<(f64, f64)> = None; // (frequency scale, reference)
    let mut frequencies = Vec::new();
    let mut s11 = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(body) = raw.strip_prefix('!') {
            comments.push(body.strip_prefix(' ').unwrap_or(body).to_string());
            continue;
        }
        // Inline comments after data are tolerated and dropped.
        let line = raw.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if option.is_some() {
                return Err(Error::Parse(format!(
                    "touchstone line {lineno}: duplicate option line"
                )));
            }
            if !frequencies.is_empty() {
                return Err(Error::Parse(format!(
                    "touchstone line {lineno}: option line after data"
                )));
            }
            option = Some(parse_option_line(rest, lineno)?);
            continue;
        }
        let (scale, _) = option.ok_or_else(|| {
            Error::Parse(format!(
                "touchstone line {lineno}: data before the option line"
            ))
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "touchstone line {lineno}: expected 3 columns, got {}",
                fields.len()
            )));
        }
        let mut values = [0.0f64; 3];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| {
                Error::Parse(format!(
                    "touchstone line {lineno}: {field:?} is not a number"
                ))
            })?;
        }
        frequencies.push(values[0] * scale);
        s11.push(Complex64::new(values[1], values[2]));
    }
    let (_, reference) = option.ok_or_else(|| {
        Error::Parse("touchstone input has no option line".to_string())
    })?;
    if frequencies.is_empty() {
        return Err(Error::Parse("touchstone input has no data rows".to_string()));
    }
    let sweep = FrequencySweep::new(frequencies, s11, reference)?;
    Ok(TouchstoneFile { comments, sweep })
}

fn parse_option_line(rest: &str, lineno: usize) -> Result<(f64, f64)> {
    let mut scale = 1.0e9;
    let mut reference = 50.0;
    let mut format_seen: Option<String> = None;
    let mut tokens = rest.split_whitespace();
    while let Some(token) = tokens.next() {
        match token.to_ascii_uppercase().as_str() {
            "HZ" => scale = 1.0,
            "KHZ" => scale = 1.0e3,
            "MHZ" => scale = 1.0e6,
            "GHZ" => scale = 1.0e9,
            "S" => {}
            "Y" | "Z" | "H" | "G" => {
                return Err(Error::Parse(format!(
                    "touchstone line {lineno}: only S-parameters are supported, got {token}"
                )));
            }
            "RI" | "MA" | "DB" => format_seen = Some(token.to_ascii_uppercase()),
            "R" => {
                let value = tokens.next().ok_or_else(|| {
                    Error::Parse(format!(
                        "touchstone line {lineno}: R without a resistance"
                    ))
                })?;
                reference = value.parse().map_err(|_| {
                    Error::Parse(format!(
                        "touchstone line {lineno}: bad reference resistance {value:?}"
                    ))
                })?;
            }
            other => {
                return Err(Error::Parse(format!(
                    "touchstone line {lineno}: unrecognized option token {other:?}"
                )));
            }
        }
    }
    match format_seen.as_deref() {
        Some("RI") => Ok((scale, reference)),
        Some(other) => Err(Error::Parse(format!(
            "touchstone line {lineno}: only the RI format is supported, got {other}"
        ))),
        // The historical default format is MA, which we do not convert.
        None => Err(Error::Parse(format!(
            "touchstone line {lineno}: option line does not declare the RI format"
        ))),
    }
}

/// Write a sweep to disk atomically in the canonical form.
pub fn write_touchstone(path: &std::path::Path, sweep: &FrequencySweep, comments: &[String]) -> Result<()> {
    let text = render_touchstone(sweep, comments)?;
    write_atomic(path, text.as_bytes())
}

/// Read and parse an `.s1p` file.
pub fn read_touchstone(path: &std::path::Path) -> Result<TouchstoneFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_touchstone(&text)
}
