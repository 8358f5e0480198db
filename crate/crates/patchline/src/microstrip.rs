//! Quasi-static microstrip line model: effective permittivity, characteristic
//! impedance, width synthesis, and guided wavelength.
//!
//! The closed forms are the Hammerstad fits. They split at w/h = 1; the two
//! branches disagree by at most 0.489 ohms at the seam (worst case at εr = 1),
//! which is well inside the accuracy of the fit itself.

use crate::error::{Error, Result};
use crate::media::{wavelength, Substrate, C0};
use crate::numerics::bisect_on_value;

/// Lowest characteristic impedance `synthesize_width` will target, ohms.
pub const MIN_SYNTH_IMPEDANCE: f64 = 10.0;
/// Highest characteristic impedance `synthesize_width` will target, ohms.
pub const MAX_SYNTH_IMPEDANCE: f64 = 250.0;

fn check_width(width: f64) -> Result<()> {
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "line width must be positive and finite, got {width}"
        )));
    }
    Ok(())
}

/// Effective (quasi-static) permittivity of a microstrip of the given width.
///
/// Monotone in width, bounded by `(εr + 1)/2` from below and `εr` from above.
pub fn eps_eff(width: f64, substrate: &Substrate) -> Result<f64> {
    check_width(width)?;
    substrate.validate()?;
    let er = substrate.rel_permittivity;
    let u = width / substrate.height;
    let mut ee = 0.5 * (er + 1.0) + 0.5 * (er - 1.0) / (1.0 + 12.0 / u).sqrt();
    if u <= 1.0 {
        ee += 0.5 * (er - 1.0) * 0.04 * (1.0 - u) * (1.0 - u);
    }
    Ok(ee)
}

/// Characteristic impedance of a microstrip of the given width, ohms.
pub fn z0_microstrip(width: f64, substrate: &Substrate) -> Result<f64> {
    check_width(width)?;
    substrate.validate()?;
    let ee = eps_eff(width, substrate)?;
    let u = width / substrate.height;
    let z0 = if u <= 1.0 {
        60.0 / ee.sqrt() * (8.0 / u + 0.25 * u).ln()
    } else {
        // The fit is normalized to 120π, the constant its coefficients were
        // tuned against (not the exact free-space impedance).
        120.0 * std::f64::consts::PI
            / (ee.sqrt() * (u + 1.393 + 0.667 * (u + 1.444).ln()))
    };
    Ok(z0)
}

/// Width that realizes a target characteristic impedance on this substrate.
///
/// Bisects `z0_microstrip` over w/h in [1e-3, 1e3] and stops once the target
/// is matched within 0.01 ohm. Targets outside [10, 250] ohms are rejected —
/// they sit outside the fit's sensible range on practical laminates.
pub fn synthesize_width(z0_target: f64, substrate: &Substrate) -> Result<f64> {
    substrate.validate()?;
    if !z0_target.is_finite()
        || !(MIN_SYNTH_IMPEDANCE..=MAX_SYNTH_IMPEDANCE).contains(&z0_target)
    {
        return Err(Error::OutOfRange(format!(
            "target impedance {z0_target} ohms outside the supported \
             [{MIN_SYNTH_IMPEDANCE}, {MAX_SYNTH_IMPEDANCE}] ohm range"
        )));
    }
    let h = substrate.height;
    // z0 is strictly decreasing in width, so a value bracket is a root bracket.
    bisect_on_value(
        |w| z0_microstrip(w, substrate).expect("width stays inside the bracket"),
        1.0e-3 * h,
        1.0e3 * h,
        z0_target,
        0.01,
        200,
    )
}

/// Guided wavelength λg = λ0/√εeff of the line at `frequency`, metres.
pub fn guided_wavelength(width: f64, frequency: f64, substrate: &Substrate) -> Result<f64> {
    let lambda0 = wavelength(frequency)?;
    let ee = eps_eff(width, substrate)?;
    Ok(lambda0 / ee.sqrt())
}

/// A physical microstrip segment with its derived electrical description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrostripLine {
    /// Trace width, metres.
    pub width: f64,
    /// Physical length, metres (zero-length segments are legal).
    pub length: f64,
    /// Characteristic impedance, ohms.
    pub z0: f64,
    /// Effective permittivity governing the phase velocity.
    pub eps_eff: f64,
}

impl MicrostripLine {
    /// Build a segment from its physical dimensions on a substrate.
    pub fn new(width: f64, length: f64, substrate: &Substrate) -> Result<MicrostripLine> {
        if !length.is_finite() || length < 0.0 {
            return Err(Error::InvalidInput(format!(
                "line length must be non-negative and finite, got {length}"
            )));
        }
        Ok(MicrostripLine {
            width,
            length,
            z0: z0_microstrip(width, substrate)?,
            eps_eff: eps_eff(width, substrate)?,
        })
    }

    /// Electrical length βl = 2πf√εeff·l/c0 at `frequency`, radians.
    pub fn electrical_length(&self, frequency: f64) -> f64 {
        2.0 * std::f64::consts::PI * frequency * self.eps_eff.sqrt() * self.length / C0
    }
}
