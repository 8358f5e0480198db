//! Physical constants, free-space quantities, and the substrate description.
//!
//! Everything internal to the crate works in SI base units (metres, hertz,
//! ohms, siemens). Millimetres and gigahertz appear only at the user-facing
//! boundaries (CLI, geometry files, report text).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const C0: f64 = 299_792_458.0;

/// Vacuum permeability, H/m.
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);

/// Free-space wave impedance, ohms.
pub const ETA0: f64 = MU0 * C0;

/// Conductivity of annealed copper, S/m.
pub const COPPER_CONDUCTIVITY: f64 = 5.8e7;

/// Magnitudes below this floor are reported as [`DB_FLOOR`] decibels.
pub const DB_FLOOR_MAGNITUDE: f64 = 1.0e-10;

/// Decibel value reported for magnitudes below [`DB_FLOOR_MAGNITUDE`].
pub const DB_FLOOR: f64 = -200.0;

/// Free-space wavelength at `frequency` hertz, in metres.
pub fn wavelength(frequency: f64) -> Result<f64> {
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "frequency must be positive and finite, got {frequency}"
        )));
    }
    Ok(C0 / frequency)
}

/// Skin depth in a conductor of the given conductivity at `frequency`, metres.
pub fn skin_depth(frequency: f64, conductivity: f64) -> Result<f64> {
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "frequency must be positive and finite, got {frequency}"
        )));
    }
    if !conductivity.is_finite() || conductivity <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "conductivity must be positive and finite, got {conductivity}"
        )));
    }
    Ok(1.0 / (std::f64::consts::PI * frequency * MU0 * conductivity).sqrt())
}

/// Voltage reflection coefficient of impedance `z` against a real reference.
///
/// Γ = (Z − Z₀) / (Z + Z₀). For any Z with non-negative real part, |Γ| ≤ 1.
/// The map is an involution with Z = Z₀(1 + Γ)/(1 − Γ).
pub fn reflection_coefficient(z: Complex64, z_ref: f64) -> Result<Complex64> {
    if !z_ref.is_finite() || z_ref <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "reference impedance must be positive and finite, got {z_ref}"
        )));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Numerical(format!("non-finite impedance {z}")));
    }
    let denom = z + Complex64::new(z_ref, 0.0);
    if denom.norm() < 1.0e-30 {
        return Err(Error::Numerical(format!(
            "reflection coefficient singular: Z = {z} cancels the {z_ref} ohm reference"
        )));
    }
    Ok((z - Complex64::new(z_ref, 0.0)) / denom)
}

/// Magnitude in decibels, `20·log10(x)`, with a hard floor.
///
/// Magnitudes below 1e-10 return exactly −200 dB so that downstream plots and
/// tables never see −inf. Negative or non-finite input is an error, never a
/// silent NaN.
pub fn magnitude_db(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput(format!(
            "magnitude must be a finite non-negative number, got {x}"
        )));
    }
    if x < DB_FLOOR_MAGNITUDE {
        return Ok(DB_FLOOR);
    }
    Ok(20.0 * x.log10())
}

/// A grounded dielectric laminate with its conductor properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substrate {
    /// Relative permittivity εr (≥ 1).
    pub rel_permittivity: f64,
    /// Dielectric loss tangent (≥ 0).
    pub loss_tangent: f64,
    /// Dielectric height h in metres (> 0).
    pub height: f64,
    /// Conductor thickness t in metres (≥ 0).
    pub conductor_thickness: f64,
    /// Conductor conductivity σ in S/m (> 0).
    pub conductivity: f64,
}

impl Substrate {
    /// 1.574 mm RO3003 ceramic-filled PTFE laminate with 0.5 mm copper,
    /// the stack-up of the bundled reference design.
    pub fn ro3003() -> Substrate {
        Substrate {
            rel_permittivity: 3.0,
            loss_tangent: 0.0009,
            height: 1.574e-3,
            conductor_thickness: 0.5e-3,
            conductivity: COPPER_CONDUCTIVITY,
        }
    }

    /// Custom laminate with copper conductors of the reference thickness.
    pub fn new(rel_permittivity: f64, loss_tangent: f64, height: f64) -> Substrate {
        Substrate {
            rel_permittivity,
            loss_tangent,
            height,
            conductor_thickness: 0.5e-3,
            conductivity: COPPER_CONDUCTIVITY,
        }
    }

    /// Check every field against its physical bounds.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, name: &str, value: f64, bound: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "substrate {name} must be {bound}, got {value}"
                )))
            }
        };
        check(
            self.rel_permittivity.is_finite() && self.rel_permittivity >= 1.0,
            "relative permittivity",
            self.rel_permittivity,
            ">= 1",
        )?;
        check(
            self.loss_tangent.is_finite() && self.loss_tangent >= 0.0,
            "loss tangent",
            self.loss_tangent,
            ">= 0",
        )?;
        check(
            self.height.is_finite() && self.height > 0.0,
            "height",
            self.height,
            "> 0",
        )?;
        check(
            self.conductor_thickness.is_finite() && self.conductor_thickness >= 0.0,
            "conductor thickness",
            self.conductor_thickness,
            ">= 0",
        )?;
        check(
            self.conductivity.is_finite() && self.conductivity > 0.0,
            "conductivity",
            self.conductivity,
            "> 0",
        )?;
        Ok(())
    }
}
