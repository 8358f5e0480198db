//! One-port and two-port circuit models of the series-fed array.
//!
//! The array is a ladder: N identical shunt RLC resonators (the patches)
//! separated by N−1 high-impedance microstrip interconnects, open-circuited
//! beyond the last patch, optionally preceded by a quarter-wave matching
//! transformer at the feed. Everything is composed from ABCD matrices, so
//! reciprocity (det = 1) holds by construction and is asserted in tests.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, SYSTEM_IMPEDANCE};
use crate::media::{magnitude_db, reflection_coefficient};
use crate::microstrip::{guided_wavelength, synthesize_width, MicrostripLine};
use crate::patch::PatchDesign;

/// Relative |S11| level defining the impedance bandwidth, decibels.
pub const BAND_THRESHOLD_DB: f64 = -10.0;

fn check_frequency(frequency: f64) -> Result<f64> {
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "frequency must be positive and finite, got {frequency}"
        )));
    }
    Ok(frequency)
}

/// Chain (ABCD) matrix of a reciprocal two-port. Port 1 faces the feed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortAbcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// What hangs on port 2 when asking for an input impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// A lumped complex load, ohms.
    Load(Complex64),
    /// An ideal open circuit (the far end of a series-fed run).
    Open,
}

impl TwoPortAbcd {
    /// The do-nothing two-port.
    pub fn identity() -> TwoPortAbcd {
        TwoPortAbcd {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Lossless line of characteristic impedance `z0` and electrical length
    /// `theta` radians: A = D = cosθ, B = jZ0·sinθ, C = j·sinθ/Z0.
    pub fn line(z0: f64, theta: f64) -> Result<TwoPortAbcd> {
        if !z0.is_finite() || z0 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "characteristic impedance must be positive and finite, got {z0}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "electrical length must be finite, got {theta}"
            )));
        }
        let (sin, cos) = theta.sin_cos();
        Ok(TwoPortAbcd {
            a: Complex64::new(cos, 0.0),
            b: Complex64::new(0.0, z0 * sin),
            c: Complex64::new(0.0, sin / z0),
            d: Complex64::new(cos, 0.0),
        })
    }

    /// Shunt admittance across the line: A = D = 1, B = 0, C = Y.
    pub fn shunt_admittance(y: Complex64) -> TwoPortAbcd {
        TwoPortAbcd {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: y,
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Cascade with `next` on the port-2 side: result = self · next.
    pub fn cascade(&self, next: &TwoPortAbcd) -> TwoPortAbcd {
        TwoPortAbcd {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    /// AD − BC; exactly 1 for any cascade of reciprocal sections.
    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Impedance looking into port 1 with `termination` on port 2.
    ///
    /// Zin = (A·ZL + B)/(C·ZL + D), degenerating to A/C for an open circuit.
    pub fn input_impedance(&self, termination: Termination) -> Result<Complex64> {
        let (num, den) = match termination {
            Termination::Load(zl) => (self.a * zl + self.b, self.c * zl + self.d),
            Termination::Open => (self.a, self.c),
        };
        if den.norm() < 1e-30 {
            return Err(Error::Numerical(
                "input impedance singular (denominator vanished); the network presents \
                 an ideal open at this frequency"
                    .to_string(),
            ));
        }
        let z = num / den;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Numerical(format!("input impedance non-finite: {z}")));
        }
        Ok(z)
    }
}

/// Parallel RLC resonator summarizing one patch at its feed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlcLoad {
    /// Resonant frequency, hertz.
    pub resonant_frequency: f64,
    /// Resistance at resonance, ohms.
    pub resistance: f64,
    /// Loaded quality factor.
    pub q_total: f64,
}

impl RlcLoad {
    pub fn validate(&self) -> Result<()> {
        for (value, name) in [
            (self.resonant_frequency, "resonant frequency"),
            (self.resistance, "resistance"),
            (self.q_total, "quality factor"),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Validation(format!(
                    "RLC load {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Z(f) = R / (1 + jQ·(f/f0 − f0/f)). Equals R exactly at resonance.
    pub fn impedance(&self, frequency: f64) -> Result<Complex64> {
        let f = check_frequency(frequency)?;
        let detune = f / self.resonant_frequency - self.resonant_frequency / f;
        Ok(Complex64::new(self.resistance, 0.0) / Complex64::new(1.0, self.q_total * detune))
    }

    /// Y(f) = 1/Z(f), always finite for a positive-R resonator.
    pub fn admittance(&self, frequency: f64) -> Result<Complex64> {
        let f = check_frequency(frequency)?;
        let detune = f / self.resonant_frequency - self.resonant_frequency / f;
        Ok(Complex64::new(1.0, self.q_total * detune) / self.resistance)
    }
}

/// The full feed-line model of a series-fed array.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderModel {
    patches: Vec<RlcLoad>,
    interconnects: Vec<MicrostripLine>,
    transformer: Option<MicrostripLine>,
    reference_impedance: f64,
}

impl LadderModel {
    /// Assemble a ladder from explicit parts: N patches and N−1 interconnects,
    /// feed-first, open beyond the last patch.
    pub fn from_parts(
        patches: Vec<RlcLoad>,
        interconnects: Vec<MicrostripLine>,
        reference_impedance: f64,
    ) -> Result<LadderModel> {
        if patches.is_empty() {
            return Err(Error::InvalidInput(
                "a ladder needs at least one patch".to_string(),
            ));
        }
        if interconnects.len() + 1 != patches.len() {
            return Err(Error::InvalidInput(format!(
                "{} patches need exactly {} interconnects, got {}",
                patches.len(),
                patches.len() - 1,
                interconnects.len()
            )));
        }
        for p in &patches {
            p.validate()?;
        }
        if !reference_impedance.is_finite() || reference_impedance <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be positive, got {reference_impedance}"
            )));
        }
        Ok(LadderModel {
            patches,
            interconnects,
            transformer: None,
            reference_impedance,
        })
    }

    /// Build the ladder for a validated array geometry: every patch is the
    /// analyzed (W, L) element, every interconnect the geometry's feed line,
    /// referenced to the 50 Ω system impedance.
    pub fn build_series_fed_array(geometry: &ArrayGeometry) -> Result<LadderModel> {
        geometry.validate()?;
        let substrate = geometry.substrate();
        let design = PatchDesign::analyze(
            geometry.patch_width_m(),
            geometry.patch_length_m(),
            &substrate,
        )?;
        let n = geometry.element_count as usize;
        let interconnect =
            MicrostripLine::new(geometry.feed_width_m(), geometry.feed_length_m(), &substrate)?;
        LadderModel::from_parts(
            vec![design.rlc_load(); n],
            vec![interconnect; n - 1],
            SYSTEM_IMPEDANCE,
        )
    }

    /// Insert (or replace) the matching section between feed and first patch.
    pub fn with_transformer(mut self, transformer: MicrostripLine) -> LadderModel {
        self.transformer = Some(transformer);
        self
    }

    pub fn reference_impedance(&self) -> f64 {
        self.reference_impedance
    }

    pub fn element_count(&self) -> usize {
        self.patches.len()
    }

    pub fn transformer(&self) -> Option<&MicrostripLine> {
        self.transformer.as_ref()
    }

    /// Chain matrix of the whole ladder at `frequency`, feed side first.
    pub fn abcd(&self, frequency: f64) -> Result<TwoPortAbcd> {
        let f = check_frequency(frequency)?;
        let mut m = TwoPortAbcd::identity();
        if let Some(t) = &self.transformer {
            m = m.cascade(&TwoPortAbcd::line(t.z0, t.electrical_length(f))?);
        }
        for (i, patch) in self.patches.iter().enumerate() {
            m = m.cascade(&TwoPortAbcd::shunt_admittance(patch.admittance(f)?));
            if let Some(line) = self.interconnects.get(i) {
                m = m.cascade(&TwoPortAbcd::line(line.z0, line.electrical_length(f))?);
            }
        }
        Ok(m)
    }

    /// Impedance seen by the feed at `frequency` (far end open).
    pub fn input_impedance(&self, frequency: f64) -> Result<Complex64> {
        self.abcd(frequency)?.input_impedance(Termination::Open)
    }

    /// Complex node voltage at each patch for unit voltage at the open far
    /// end, ordered feed-first. This is the excitation taper the feed line
    /// imposes on the radiating elements.
    pub fn node_voltages(&self, frequency: f64) -> Result<Vec<Complex64>> {
        let f = check_frequency(frequency)?;
        let mut v = Complex64::new(1.0, 0.0);
        let mut i = Complex64::new(0.0, 0.0);
        let mut voltages = Vec::with_capacity(self.patches.len());
        // Walk the ladder from the open end toward the feed, applying each
        // section's chain matrix to the (V, I) state. A shunt leaves V alone,
        // so the recorded value is the voltage at that patch's node.
        for (idx, patch) in self.patches.iter().enumerate().rev() {
            voltages.push(v);
            i += patch.admittance(f)? * v;
            if idx > 0 {
                let line = &self.interconnects[idx - 1];
                let m = TwoPortAbcd::line(line.z0, line.electrical_length(f))?;
                let v_next = m.a * v + m.b * i;
                let i_next = m.c * v + m.d * i;
                v = v_next;
                i = i_next;
            }
        }
        voltages.reverse();
        Ok(voltages)
    }
}

/// Quarter-wave transformer that matches `zin` to `z_ref` at `f0`.
///
/// The line impedance is √(Re(Zin)·Zref); its physical width is synthesized
/// on the substrate and its length is a quarter of the guided wavelength at
/// `f0`. The reactive part of `zin` is left to the transformer's off-centre
/// behaviour — standard practice for a resonant load.
pub fn synthesize_match(
    zin: Complex64,
    z_ref: f64,
    f0: f64,
    substrate: &crate::media::Substrate,
) -> Result<MicrostripLine> {
    check_frequency(f0)?;
    if !zin.re.is_finite() || !zin.im.is_finite() || zin.re <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "cannot match an input impedance with non-positive real part: {zin}"
        )));
    }
    if !z_ref.is_finite() || z_ref <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    let z0_target = (zin.re * z_ref).sqrt();
    let width = synthesize_width(z0_target, substrate)?;
    let length = guided_wavelength(width, f0, substrate)? / 4.0;
    MicrostripLine::new(width, length, substrate)
}

/// An S11-versus-frequency record with its derived scalar metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweep {
    /// Sample frequencies, hertz, strictly increasing.
    pub frequencies: Vec<f64>,
    /// Complex S11 at each sample, referenced to `reference_impedance`.
    pub s11: Vec<Complex64>,
    /// Reference impedance, ohms.
    pub reference_impedance: f64,
    /// 20·log10|S11| at each sample, floored at −200 dB.
    pub s11_db: Vec<f64>,
    /// Deepest |S11| over the sweep, decibels.
    pub min_s11_db: f64,
    /// Frequency of the deepest sample, hertz.
    pub frequency_at_min: f64,
    /// −10 dB band edges by linear interpolation, clamped to the sweep limits
    /// when the band touches them; `None` if the dip never reaches −10 dB.
    pub band_edges: Option<(f64, f64)>,
}

impl FrequencySweep {
    /// Validate the arrays and derive the metrics.
    ///
    /// Requirements: equal lengths ≥ 2, strictly increasing frequencies, all
    /// S11 finite and passive (|S11| ≤ 1 + 1e-9).
    pub fn new(
        frequencies: Vec<f64>,
        s11: Vec<Complex64>,
        reference_impedance: f64,
    ) -> Result<FrequencySweep> {
        if frequencies.len() != s11.len() {
            return Err(Error::InvalidInput(format!(
                "{} frequencies but {} S11 samples",
                frequencies.len(),
                s11.len()
            )));
        }
        if frequencies.len() < 2 {
            return Err(Error::InvalidInput(
                "a sweep needs at least two samples".to_string(),
            ));
        }
        if !reference_impedance.is_finite() || reference_impedance <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be positive, got {reference_impedance}"
            )));
        }
        for pair in frequencies.windows(2) {
            if !(pair[0].is_finite() && pair[1].is_finite() && pair[0] < pair[1]) {
                return Err(Error::InvalidInput(format!(
                    "frequencies must be finite and strictly increasing; saw {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if frequencies[0] <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "frequencies must be positive; sweep starts at {}",
                frequencies[0]
            )));
        }
        let mut s11_db = Vec::with_capacity(s11.len());
        for (k, s) in s11.iter().enumerate() {
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(Error::Numerical(format!(
                    "S11 non-finite at {} Hz",
                    frequencies[k]
                )));
            }
            let mag = s.norm();
            if mag > 1.0 + 1e-9 {
                return Err(Error::Validation(format!(
                    "|S11| = {mag} exceeds unity at {} Hz; sweep is not passive",
                    frequencies[k]
                )));
            }
            s11_db.push(magnitude_db(mag)?);
        }

        let mut min_idx = 0;
        for (k, db) in s11_db.iter().enumerate() {
            if *db < s11_db[min_idx] {
                min_idx = k;
            }
        }
        let band_edges = band_edges_10db(&frequencies, &s11_db, min_idx);
        Ok(FrequencySweep {
            min_s11_db: s11_db[min_idx],
            frequency_at_min: frequencies[min_idx],
            band_edges,
            frequencies,
            s11,
            reference_impedance,
            s11_db,
        })
    }

    /// Impedance bandwidth in hertz, if the dip reaches −10 dB.
    pub fn bandwidth(&self) -> Option<f64> {
        self.band_edges.map(|(lo, hi)| hi - lo)
    }
}

/// Locate the contiguous −10 dB interval around the minimum.
fn band_edges_10db(frequencies: &[f64], s11_db: &[f64], min_idx: usize) -> Option<(f64, f64)> {
    if s11_db[min_idx] > BAND_THRESHOLD_DB {
        return None;
    }
    let mut lo = min_idx;
    while lo > 0 && s11_db[lo - 1] <= BAND_THRESHOLD_DB {
        lo -= 1;
    }
    let mut hi = min_idx;
    while hi + 1 < s11_db.len() && s11_db[hi + 1] <= BAND_THRESHOLD_DB {
        hi += 1;
    }
    let f_lo = if lo == 0 {
        frequencies[0]
    } else {
        interpolate_crossing(
            frequencies[lo - 1],
            frequencies[lo],
            s11_db[lo - 1],
            s11_db[lo],
        )
    };
    let f_hi = if hi + 1 == s11_db.len() {
        frequencies[s11_db.len() - 1]
    } else {
        interpolate_crossing(
            frequencies[hi],
            frequencies[hi + 1],
            s11_db[hi],
            s11_db[hi + 1],
        )
    };
    Some((f_lo, f_hi))
}

fn interpolate_crossing(f_a: f64, f_b: f64, db_a: f64, db_b: f64) -> f64 {
    f_a + (f_b - f_a) * (BAND_THRESHOLD_DB - db_a) / (db_b - db_a)
}

/// Sweep the ladder's S11 over a closed uniform frequency grid.
///
/// Points are computed independently (and in parallel); any per-point failure
/// aborts the sweep and names the offending frequency.
pub fn s11_sweep(
    model: &LadderModel,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
) -> Result<FrequencySweep> {
    check_frequency(f_start)?;
    if !f_stop.is_finite() || f_stop <= f_start {
        return Err(Error::InvalidInput(format!(
            "sweep stop {f_stop} Hz must exceed start {f_start} Hz"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidInput(format!(
            "a sweep needs at least 2 points, got {n_points}"
        )));
    }
    let step = (f_stop - f_start) / (n_points - 1) as f64;
    let frequencies: Vec<f64> = (0..n_points)
        .map(|i| {
            if i + 1 == n_points {
                f_stop
            } else {
                f_start + step * i as f64
            }
        })
        .collect();
    let s11 = frequencies
        .par_iter()
        .map(|&f| {
            let zin = model
                .input_impedance(f)
                .map_err(|e| Error::Numerical(format!("at {f} Hz: {e}")))?;
            reflection_coefficient(zin, model.reference_impedance)
                .map_err(|e| Error::Numerical(format!("at {f} Hz: {e}")))
        })
        .collect::<Result<Vec<Complex64>>>()?;
    FrequencySweep::new(frequencies, s11, model.reference_impedance)
}
