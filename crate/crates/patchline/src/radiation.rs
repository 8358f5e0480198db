//! Far-field model: element pattern, array factor, pattern multiplication,
//! directivity, and principal-plane beam metrics.
//!
//! Coordinates: the array axis is x, the patch normal is z. The E-plane is
//! the x–z plane (φ = 0/180°), the H-plane is y–z (φ = 90/270°). The element
//! is the classic two-slot radiator: a slot-pair cosine along the resonant
//! length, an aperture sinc across the radiating width, and the slot
//! obliquity factor (1 − sin²θ·sin²φ); intensity is identically zero below
//! the ground plane (θ > 90°).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::media::C0;

const HALF_POWER_DB: f64 = 3.010_299_956_639_812; // 10·log10(2)

/// Relative intensities below 1e-20 (amplitude 1e-10) floor at −200 dB.
const INTENSITY_FLOOR: f64 = 1e-20;

fn check_frequency(frequency: f64) -> Result<f64> {
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "frequency must be positive and finite, got {frequency}"
        )));
    }
    Ok(frequency)
}

/// Complex drive of a uniformly spaced linear array.
///
/// Amplitudes are normalized so the strongest element has |a| = 1; an
/// optional progressive phase step β is applied on top, so element n is
/// driven with aₙ·e^{jnβ}.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSet {
    amplitudes: Vec<Complex64>,
    spacing: f64,
    phase_step: f64,
}

impl ExcitationSet {
    /// Equal in-phase drive of `n` elements.
    pub fn uniform(n: usize, spacing: f64) -> Result<ExcitationSet> {
        Self::build(vec![Complex64::new(1.0, 0.0); n], spacing, 0.0)
    }

    /// Equal-amplitude drive with a progressive phase step β (radians per
    /// element), the classic beam-steering excitation.
    pub fn progressive(n: usize, spacing: f64, phase_step: f64) -> Result<ExcitationSet> {
        Self::build(vec![Complex64::new(1.0, 0.0); n], spacing, phase_step)
    }

    /// Arbitrary complex drives (for example ladder node voltages), rescaled
    /// so the strongest element has unit magnitude.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, spacing: f64) -> Result<ExcitationSet> {
        Self::build(amplitudes, spacing, 0.0)
    }

    fn build(
        mut amplitudes: Vec<Complex64>,
        spacing: f64,
        phase_step: f64,
    ) -> Result<ExcitationSet> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput(
                "an excitation needs at least one element".to_string(),
            ));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "element spacing must be positive and finite, got {spacing}"
            )));
        }
        if !phase_step.is_finite() {
            return Err(Error::InvalidInput(format!(
                "phase step must be finite, got {phase_step}"
            )));
        }
        let mut peak = 0.0f64;
        for a in &amplitudes {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite amplitude {a}")));
            }
            peak = peak.max(a.norm());
        }
        if peak <= 0.0 {
            return Err(Error::InvalidInput(
                "all excitation amplitudes are zero".to_string(),
            ));
        }
        for a in &mut amplitudes {
            *a /= peak;
        }
        Ok(ExcitationSet {
            amplitudes,
            spacing,
            phase_step,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn phase_step(&self) -> f64 {
        self.phase_step
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Array factor AF(θ, φ) = Σₙ aₙ·e^{jn(k₀·d·sinθ·cosφ + β)}.
///
/// Evaluated with a running phasor (one complex multiply per element).
pub fn array_factor(
    excitation: &ExcitationSet,
    frequency: f64,
    theta: f64,
    phi: f64,
) -> Result<Complex64> {
    let f = check_frequency(frequency)?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "angles must be finite, got theta = {theta}, phi = {phi}"
        )));
    }
    let k0 = 2.0 * std::f64::consts::PI * f / C0;
    let psi = k0 * excitation.spacing * theta.sin() * phi.cos() + excitation.phase_step;
    Ok(phasor_sum(&excitation.amplitudes, psi))
}

fn phasor_sum(amplitudes: &[Complex64], psi: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, psi);
    let mut w = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in amplitudes {
        acc += a * w;
        w *= rot;
    }
    acc
}

/// Radiation intensity of the two-slot element (normalized to 1 at
/// broadside), zero below the ground plane.
pub fn element_pattern(
    theta: f64,
    phi: f64,
    width: f64,
    effective_length: f64,
    frequency: f64,
) -> Result<f64> {
    let f = check_frequency(frequency)?;
    for (value, name) in [(width, "width"), (effective_length, "effective length")] {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "element {name} must be positive and finite, got {value}"
            )));
        }
    }
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "angles must be finite, got theta = {theta}, phi = {phi}"
        )));
    }
    let k0 = 2.0 * std::f64::consts::PI * f / C0;
    Ok(two_slot_intensity(theta, phi, k0, width, effective_length))
}

fn two_slot_intensity(theta: f64, phi: f64, k0: f64, width: f64, effective_length: f64) -> f64 {
    if theta > std::f64::consts::FRAC_PI_2 {
        return 0.0;
    }
    let st = theta.sin();
    let sp = phi.sin();
    let x = 0.5 * k0 * width * st * sp;
    let sinc = if x.abs() < 1e-12 { 1.0 } else { x.sin() / x };
    let field = (0.5 * k0 * effective_length * st * phi.cos()).cos() * sinc;
    field * field * (1.0 - (st * sp) * (st * sp))
}

/// Element model used when sampling a total pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementModel {
    /// The two-slot patch element.
    TwoSlot {
        /// Radiating width W, metres.
        width: f64,
        /// Effective resonant length L + 2ΔL, metres.
        effective_length: f64,
    },
    /// Unit intensity over the upper hemisphere, zero below; isolates the
    /// array factor.
    Isotropic,
}

/// Closed uniform angular grid: θ over [0, π], φ over [0, 2π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid {
    /// Number of θ samples (≥ 181, i.e. at most 1° steps).
    pub n_theta: usize,
    /// Number of φ samples (≥ 361, i.e. at most 1° steps).
    pub n_phi: usize,
}

impl Default for AngularGrid {
    /// 0.5° in θ, 1° in φ.
    fn default() -> AngularGrid {
        AngularGrid {
            n_theta: 361,
            n_phi: 361,
        }
    }
}

impl AngularGrid {
    fn validate(&self) -> Result<()> {
        if self.n_theta < 181 || self.n_phi < 361 {
            return Err(Error::InvalidInput(format!(
                "angular grid {}x{} is coarser than the 181x361 minimum",
                self.n_theta, self.n_phi
            )));
        }
        Ok(())
    }

    fn theta_values(&self) -> Vec<f64> {
        let step = std::f64::consts::PI / (self.n_theta - 1) as f64;
        (0..self.n_theta).map(|i| i as f64 * step).collect()
    }

    fn phi_values(&self) -> Vec<f64> {
        let step = 2.0 * std::f64::consts::PI / (self.n_phi - 1) as f64;
        (0..self.n_phi).map(|j| j as f64 * step).collect()
    }
}

/// A radiation intensity sampled on a full-sphere grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationPattern {
    frequency: f64,
    theta: Vec<f64>,
    phi: Vec<f64>,
    /// θ-major storage: `intensity[i * n_phi + j]` is U(θᵢ, φⱼ).
    intensity: Vec<f64>,
}

impl RadiationPattern {
    /// Wrap pre-computed samples. The grids must be strictly increasing,
    /// cover [0, π] × [0, 2π], meet the 181×361 minimum density, and every
    /// intensity must be finite and non-negative.
    pub fn from_samples(
        frequency: f64,
        theta: Vec<f64>,
        phi: Vec<f64>,
        intensity: Vec<f64>,
    ) -> Result<RadiationPattern> {
        check_frequency(frequency)?;
        if theta.len() < 181 || phi.len() < 361 {
            return Err(Error::InvalidInput(format!(
                "pattern grid {}x{} is coarser than the 181x361 minimum",
                theta.len(),
                phi.len()
            )));
        }
        for (axis, name, span) in [
            (&theta, "theta", std::f64::consts::PI),
            (&phi, "phi", 2.0 * std::f64::consts::PI),
        ] {
            if (axis[0]).abs() > 1e-9 || (axis[axis.len() - 1] - span).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "{name} grid must cover [0, {span:.6}] exactly"
                )));
            }
            for pair in axis.windows(2) {
                if pair[1] <= pair[0] {
                    return Err(Error::InvalidInput(format!(
                        "{name} grid must be strictly increasing"
                    )));
                }
            }
        }
        if intensity.len() != theta.len() * phi.len() {
            return Err(Error::InvalidInput(format!(
                "{} intensity samples for a {}x{} grid",
                intensity.len(),
                theta.len(),
                phi.len()
            )));
        }
        for u in &intensity {
            if !u.is_finite() || *u < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "intensities must be finite and non-negative, saw {u}"
                )));
            }
        }
        Ok(RadiationPattern {
            frequency,
            theta,
            phi,
            intensity,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn intensity_at(&self, theta_idx: usize, phi_idx: usize) -> f64 {
        self.intensity[theta_idx * self.phi.len() + phi_idx]
    }

    pub fn peak_intensity(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// Extract a principal-plane cut over polar angle −90°…+90°. Negative
    /// angles map to the φ+180° meridian.
    pub fn principal_cut(&self, plane: PrincipalPlane) -> Result<PatternCut> {
        let (phi_fwd, phi_back) = match plane {
            PrincipalPlane::EPlane => (0.0, std::f64::consts::PI),
            PrincipalPlane::HPlane => {
                (std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI)
            }
        };
        let j_fwd = self.phi_index(phi_fwd, plane)?;
        let j_back = self.phi_index(phi_back, plane)?;
        let horizon = std::f64::consts::FRAC_PI_2 + 1e-12;
        let i_max = self
            .theta
            .iter()
            .rposition(|&t| t <= horizon)
            .expect("theta grid starts at 0");
        let mut angles_deg = Vec::with_capacity(2 * i_max + 1);
        let mut intensity = Vec::with_capacity(2 * i_max + 1);
        for i in (1..=i_max).rev() {
            angles_deg.push(-self.theta[i].to_degrees());
            intensity.push(self.intensity_at(i, j_back));
        }
        for i in 0..=i_max {
            angles_deg.push(self.theta[i].to_degrees());
            intensity.push(self.intensity_at(i, j_fwd));
        }
        let peak = intensity.iter().copied().fold(0.0, f64::max);
        if peak <= 0.0 {
            return Err(Error::MetricUndefined(format!(
                "the {plane:?} cut carries no power"
            )));
        }
        let levels_db = intensity
            .iter()
            .map(|u| {
                let ratio = u / peak;
                if ratio < INTENSITY_FLOOR {
                    -200.0
                } else {
                    10.0 * ratio.log10()
                }
            })
            .collect();
        Ok(PatternCut {
            angles_deg,
            intensity,
            levels_db,
        })
    }

    fn phi_index(&self, target: f64, plane: PrincipalPlane) -> Result<usize> {
        self.phi
            .iter()
            .position(|&p| (p - target).abs() < 1e-9)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "pattern grid does not sample the {plane:?} meridian at phi = {target:.6} rad"
                ))
            })
    }
}

/// One of the two planes containing the patch normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipalPlane {
    /// x–z plane (contains the array axis).
    EPlane,
    /// y–z plane.
    HPlane,
}

/// A one-dimensional pattern cut, normalized to its own peak.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    /// Polar angle, degrees, −90…+90.
    pub angles_deg: Vec<f64>,
    /// Linear intensity samples.
    pub intensity: Vec<f64>,
    /// 10·log10(U/U_peak), floored at −200 dB.
    pub levels_db: Vec<f64>,
}

/// Pattern-multiplication total intensity U = |AF|²·U_element on a grid.
pub fn total_pattern(
    element: &ElementModel,
    excitation: &ExcitationSet,
    frequency: f64,
    grid: &AngularGrid,
) -> Result<RadiationPattern> {
    let f = check_frequency(frequency)?;
    grid.validate()?;
    if let ElementModel::TwoSlot {
        width,
        effective_length,
    } = element
    {
        for (value, name) in [(*width, "width"), (*effective_length, "effective length")] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "element {name} must be positive and finite, got {value}"
                )));
            }
        }
    }
    let theta = grid.theta_values();
    let phi = grid.phi_values();
    let k0 = 2.0 * std::f64::consts::PI * f / C0;
    let rows: Vec<Vec<f64>> = theta
        .par_iter()
        .map(|&t| {
            phi.iter()
                .map(|&p| {
                    let elem = match element {
                        ElementModel::TwoSlot {
                            width,
                            effective_length,
                        } => two_slot_intensity(t, p, k0, *width, *effective_length),
                        ElementModel::Isotropic => {
                            if t > std::f64::consts::FRAC_PI_2 {
                                0.0
                            } else {
                                1.0
                            }
                        }
                    };
                    if elem == 0.0 {
                        return 0.0;
                    }
                    let psi = k0 * excitation.spacing * t.sin() * p.cos()
                        + excitation.phase_step;
                    phasor_sum(&excitation.amplitudes, psi).norm_sqr() * elem
                })
                .collect()
        })
        .collect();
    let intensity: Vec<f64> = rows.into_iter().flatten().collect();
    RadiationPattern::from_samples(f, theta, phi, intensity)
}

/// Directivity D = 4π·U_max / ∬ U sinθ dθ dφ by trapezoid quadrature on the
/// pattern's own grid.
pub fn directivity(pattern: &RadiationPattern) -> Result<f64> {
    let peak = pattern.peak_intensity();
    if peak <= 0.0 {
        return Err(Error::MetricUndefined(
            "directivity of an all-zero pattern".to_string(),
        ));
    }
    let phi = pattern.phi();
    let theta = pattern.theta();
    let ring: Vec<f64> = (0..theta.len())
        .map(|i| {
            let row: Vec<f64> = (0..phi.len()).map(|j| pattern.intensity_at(i, j)).collect();
            trapezoid(phi, &row) * theta[i].sin()
        })
        .collect();
    let total = trapezoid(theta, &ring);
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Numerical(format!(
            "radiated power integral evaluated to {total}"
        )));
    }
    Ok(4.0 * std::f64::consts::PI * peak / total)
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 1..x.len() {
        acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    }
    acc
}

/// Realized gain in dBi from a directivity and a radiation efficiency.
pub fn gain_dbi(directivity: f64, efficiency: f64) -> Result<f64> {
    if !directivity.is_finite() || directivity <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "directivity must be positive and finite, got {directivity}"
        )));
    }
    if !efficiency.is_finite() || efficiency <= 0.0 || efficiency > 1.0 {
        return Err(Error::InvalidInput(format!(
            "efficiency must lie in (0, 1], got {efficiency}"
        )));
    }
    Ok(10.0 * (efficiency * directivity).log10())
}

/// Scalar descriptors of a principal-plane cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMetrics {
    /// Peak direction, degrees, refined by a 3-point parabolic fit.
    pub peak_angle_deg: f64,
    /// Half-power beamwidth, degrees.
    pub hpbw_deg: f64,
    /// Highest local maximum outside the main lobe, dB relative to the peak;
    /// `None` when the cut has no sidelobe at all.
    pub sidelobe_level_db: Option<f64>,
}

/// Measure HPBW, sidelobe level, and refined peak direction on a principal
/// cut. The cut must contain the pattern's global peak, and the level must
/// fall 3 dB below the peak on both sides, otherwise the metric is undefined.
pub fn beam_metrics(pattern: &RadiationPattern, plane: PrincipalPlane) -> Result<BeamMetrics> {
    let cut = pattern.principal_cut(plane)?;
    let u = &cut.intensity;
    let db = &cut.levels_db;
    let angles = &cut.angles_deg;

    let mut peak_idx = 0;
    for (k, v) in u.iter().enumerate() {
        if *v > u[peak_idx] {
            peak_idx = k;
        }
    }
    if u[peak_idx] < pattern.peak_intensity() * (1.0 - 1e-9) {
        return Err(Error::MetricUndefined(format!(
            "the {plane:?} cut does not contain the pattern peak \
             ({} in cut vs {} global)",
            u[peak_idx],
            pattern.peak_intensity()
        )));
    }

    // Parabolic refinement of the peak direction on linear intensity.
    let peak_angle_deg = if peak_idx > 0 && peak_idx + 1 < u.len() {
        let (y1, y2, y3) = (u[peak_idx - 1], u[peak_idx], u[peak_idx + 1]);
        let denom = y1 - 2.0 * y2 + y3;
        if denom.abs() > 0.0 {
            let offset = (0.5 * (y1 - y3) / denom).clamp(-1.0, 1.0);
            angles[peak_idx] + offset * (angles[peak_idx + 1] - angles[peak_idx])
        } else {
            angles[peak_idx]
        }
    } else {
        angles[peak_idx]
    };

    let level = db[peak_idx] - HALF_POWER_DB;
    let mut i = peak_idx;
    while i > 0 && db[i] >= level {
        i -= 1;
    }
    if db[i] >= level {
        return Err(Error::MetricUndefined(format!(
            "the {plane:?} cut never drops 3 dB below the peak on the falling side"
        )));
    }
    let left = angles[i] + (angles[i + 1] - angles[i]) * (level - db[i]) / (db[i + 1] - db[i]);
    let mut i = peak_idx;
    while i + 1 < db.len() && db[i] >= level {
        i += 1;
    }
    if db[i] >= level {
        return Err(Error::MetricUndefined(format!(
            "the {plane:?} cut never drops 3 dB below the peak on the rising side"
        )));
    }
    let right = angles[i] - (angles[i] - angles[i - 1]) * (level - db[i]) / (db[i - 1] - db[i]);
    let hpbw_deg = right - left;

    // Main lobe extends to the first local minimum on each side; the
    // sidelobe level is the strongest local maximum beyond.
    let mut lobe_hi = peak_idx;
    while lobe_hi + 1 < u.len() && u[lobe_hi + 1] <= u[lobe_hi] {
        lobe_hi += 1;
    }
    let mut lobe_lo = peak_idx;
    while lobe_lo > 0 && u[lobe_lo - 1] <= u[lobe_lo] {
        lobe_lo -= 1;
    }
    let mut sidelobe_level_db: Option<f64> = None;
    for j in 1..u.len() - 1 {
        if j >= lobe_lo && j <= lobe_hi {
            continue;
        }
        if u[j] >= u[j - 1] && u[j] >= u[j + 1] {
            let rel = db[j] - db[peak_idx];
            sidelobe_level_db = Some(sidelobe_level_db.map_or(rel, |best: f64| best.max(rel)));
        }
    }

    Ok(BeamMetrics {
        peak_angle_deg,
        hpbw_deg,
        sidelobe_level_db,
    })
}
