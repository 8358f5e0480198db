//! Minimal deterministic SVG line plots for sweep and pattern artifacts.
//!
//! The renderer is intentionally small: fixed canvas, 1-2-5 tick selection,
//! one polyline per series, and fixed-precision coordinate formatting so
//! identical inputs always produce byte-identical documents.

use crate::error::{Error, Result};
use crate::fsutil::write_atomic;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// One plotted line.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A titled x/y line plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Plot {
        Plot {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
        }
    }

    /// Append a series (builder style).
    pub fn with_series(mut self, label: &str, points: Vec<(f64, f64)>) -> Plot {
        self.series.push(Series {
            label: label.to_string(),
            points,
        });
        self
    }

    fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::InvalidInput("a plot needs at least one series".to_string()));
        }
        for s in &self.series {
            if s.points.len() < 2 {
                return Err(Error::InvalidInput(format!(
                    "series {:?} has {} points; a line needs at least 2",
                    s.label,
                    s.points.len()
                )));
            }
            for (x, y) in &s.points {
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "series {:?} contains a non-finite point ({x}, {y})",
                        s.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Render the plot as a standalone SVG 1.1 document.
    pub fn render_svg(&self) -> Result<String> {
        self.validate()?;
        let (x_min, x_max) = padded_range(self.series.iter().flat_map(|s| {
            s.points.iter().map(|p| p.0)
        }));
        let (y_min, y_max) = padded_range(self.series.iter().flat_map(|s| {
            s.points.iter().map(|p| p.1)
        }));
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_px = |x: f64, y: f64| {
            (
                MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
                MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h,
            )
        };

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("<rect x=\"0\" y=\"0\" width=\"900\" height=\"540\" fill=\"#ffffff\"/>\n");
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
             text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // Grid and ticks.
        for (value, label) in ticks(x_min, x_max) {
            let (px, _) = to_px(value, y_min);
            out.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                MARGIN_TOP + plot_h
            ));
            out.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"middle\">{label}</text>\n",
                MARGIN_TOP + plot_h + 18.0
            ));
        }
        for (value, label) in ticks(y_min, y_max) {
            let (_, py) = to_px(x_min, value);
            out.push_str(&format!(
                "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                MARGIN_LEFT + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"end\">{label}</text>\n",
                MARGIN_LEFT - 8.0,
                py + 4.0
            ));
        }
        out.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{plot_w:.2}\" \
             height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n"
        ));

        for (idx, s) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let coords: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = to_px(x, y);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                 points=\"{}\"/>\n",
                coords.join(" ")
            ));
        }

        if self.series.len() > 1 {
            for (idx, s) in self.series.iter().enumerate() {
                let color = PALETTE[idx % PALETTE.len()];
                let y = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
                let x = WIDTH - MARGIN_RIGHT - 150.0;
                out.push_str(&format!(
                    "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" \
                     fill=\"{color}\"/>\n",
                    y - 10.0
                ));
                out.push_str(&format!(
                    "<text x=\"{:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" \
                     font-size=\"12\">{}</text>\n",
                    x + 18.0,
                    escape(&s.label)
                ));
            }
        }

        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
             text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        ));
        out.push_str("</svg>\n");
        Ok(out)
    }
}

/// Render and write atomically.
pub fn write_svg(path: &std::path::Path, plot: &Plot) -> Result<()> {
    let text = plot.render_svg()?;
    write_atomic(path, text.as_bytes())
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.04;
    (lo - pad, hi + pad)
}

/// 1-2-5 tick positions with printable labels.
fn ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let range = hi - lo;
    let raw = range / 6.0;
    let magnitude = 10.0f64.powf(raw.log10().floor());
    let mut step = 10.0 * magnitude;
    for m in [1.0, 2.0, 5.0] {
        if range / (m * magnitude) <= 8.0 {
            step = m * magnitude;
            break;
        }
    }
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    let k0 = (lo / step).ceil() as i64;
    let k1 = (hi / step).floor() as i64;
    (k0..=k1)
        .map(|k| {
            let mut v = k as f64 * step;
            if v.abs() < step * 1e-9 {
                v = 0.0;
            }
            (v, format!("{v:.decimals$}"))
        })
        .collect()
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}
