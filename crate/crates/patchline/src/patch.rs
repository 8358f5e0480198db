//! Rectangular patch synthesis and analysis.
//!
//! Dimensions come from the transmission-line model (optimum-width rule plus
//! the Hammerstad fringing extension); the radiation side comes from the
//! two-slot cavity model, with slot conductances evaluated by adaptive
//! quadrature. A [`PatchDesign`] bundles everything one element contributes
//! to the array model: dimensions, resonance, edge resistance, and Q budget.

use crate::error::{Error, Result};
use crate::media::{skin_depth, Substrate, C0, EPS0};
use crate::microstrip::eps_eff;
use crate::network::RlcLoad;
use crate::numerics::{adaptive_simpson, bessel_j0};

/// Relative tolerance used for the slot-conductance quadrature.
pub const CONDUCTANCE_REL_TOL: f64 = 1e-8;

fn check_positive(value: f64, name: &str) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

/// Radiating width of a patch resonant at `f0`: W = (c0/2f0)·√(2/(εr+1)).
pub fn patch_width(f0: f64, substrate: &Substrate) -> Result<f64> {
    check_positive(f0, "design frequency")?;
    substrate.validate()?;
    Ok(C0 / (2.0 * f0) * (2.0 / (substrate.rel_permittivity + 1.0)).sqrt())
}

/// Fringing-field length extension ΔL of an open patch edge of width `width`.
pub fn length_extension(width: f64, substrate: &Substrate) -> Result<f64> {
    let ee = eps_eff(width, substrate)?;
    let u = width / substrate.height;
    Ok(0.412 * substrate.height * (ee + 0.3) * (u + 0.264) / ((ee - 0.258) * (u + 0.8)))
}

/// Resonant length of a patch designed for `f0`: L = c0/(2f0√εeff) − 2ΔL.
///
/// The width is the optimum width for `f0`; the fringing extension must stay
/// below a quarter of the half-wave length or the design is rejected as
/// infeasible (electrically enormous substrate).
pub fn patch_length(f0: f64, substrate: &Substrate) -> Result<f64> {
    let width = patch_width(f0, substrate)?;
    let ee = eps_eff(width, substrate)?;
    let dl = length_extension(width, substrate)?;
    let half_wave = C0 / (2.0 * f0 * ee.sqrt());
    if dl >= 0.25 * half_wave {
        return Err(Error::Infeasible(format!(
            "fringing extension {dl} m exceeds a quarter of the half-wave length \
             {half_wave} m; the substrate is too thick for a patch at this frequency"
        )));
    }
    Ok(half_wave - 2.0 * dl)
}

/// Resonant frequency of a patch with the given physical length and width.
///
/// Inverse of [`patch_length`]: f0 = c0 / (2·(L + 2ΔL)·√εeff), where εeff and
/// ΔL are evaluated for the radiating width, so the expression is closed-form.
pub fn resonant_frequency(length: f64, width: f64, substrate: &Substrate) -> Result<f64> {
    check_positive(length, "patch length")?;
    let ee = eps_eff(width, substrate)?;
    let dl = length_extension(width, substrate)?;
    Ok(C0 / (2.0 * (length + 2.0 * dl) * ee.sqrt()))
}

/// Self and mutual conductances (G1, G12) of the two radiating slots, siemens.
///
/// G1  = I1 / (120π²),  I1  = ∫₀^π [sin(k0·W/2·cosθ)/cosθ]²·sin³θ dθ
/// G12 = I12 / (120π²), I12 adds the factor J0(k0·L·sinθ) to the integrand.
///
/// The integrand's removable point at cosθ = 0 is evaluated by its limit.
/// Always G1 > 0 and |G12| ≤ G1.
pub fn slot_conductances(width: f64, length: f64, f0: f64) -> Result<(f64, f64)> {
    check_positive(width, "patch width")?;
    check_positive(length, "patch length")?;
    check_positive(f0, "frequency")?;
    let k0 = 2.0 * std::f64::consts::PI * f0 / C0;
    let x = k0 * width / 2.0;
    let kl = k0 * length;
    let slot = move |theta: f64| {
        let c = theta.cos();
        let f = if c.abs() < 1e-9 { x } else { (x * c).sin() / c };
        f * f * theta.sin().powi(3)
    };
    let i1 = adaptive_simpson(slot, 0.0, std::f64::consts::PI, CONDUCTANCE_REL_TOL)?;
    let i12 = adaptive_simpson(
        move |theta: f64| slot(theta) * bessel_j0(kl * theta.sin()),
        0.0,
        std::f64::consts::PI,
        CONDUCTANCE_REL_TOL,
    )?;
    let scale = 1.0 / (120.0 * std::f64::consts::PI * std::f64::consts::PI);
    Ok((i1 * scale, i12 * scale))
}

/// Edge input resistance of the two-slot patch, Rin = 1/(2·(G1 + G12)).
pub fn input_resistance(g1: f64, g12: f64) -> Result<f64> {
    if !g1.is_finite() || g1 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "slot conductance G1 must be positive, got {g1}"
        )));
    }
    let total = g1 + g12;
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::Numerical(format!(
            "total slot conductance {total} S is not positive; cannot form an input resistance"
        )));
    }
    Ok(1.0 / (2.0 * total))
}

/// The loss budget of a resonant patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityFactors {
    /// Radiation Q. Dominates on thick low-loss laminates.
    pub q_radiation: f64,
    /// Conductor Q, h/δs with δs the skin depth at resonance.
    pub q_conductor: f64,
    /// Dielectric Q, 1/tanδ (infinite for a lossless dielectric).
    pub q_dielectric: f64,
    /// Parallel combination of the three mechanisms.
    pub q_total: f64,
    /// Radiation efficiency, Q_total/Q_radiation, in (0, 1].
    pub efficiency: f64,
}

/// Q budget of a patch resonant at `f0` with total slot conductance `g_total`.
///
/// Q_rad = ω·ε0·εr·L·W / (4·h·G_total); Q_cond = h/δs; Q_diel = 1/tanδ;
/// 1/Q_total is the sum of the reciprocals. A lossless dielectric yields an
/// infinite Q_diel, which drops cleanly out of the sum.
pub fn quality_factors(
    width: f64,
    length: f64,
    substrate: &Substrate,
    f0: f64,
    g_total: f64,
) -> Result<QualityFactors> {
    check_positive(width, "patch width")?;
    check_positive(length, "patch length")?;
    check_positive(f0, "frequency")?;
    substrate.validate()?;
    if !g_total.is_finite() || g_total <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "total slot conductance must be positive, got {g_total}"
        )));
    }
    let omega = 2.0 * std::f64::consts::PI * f0;
    let q_radiation = omega * EPS0 * substrate.rel_permittivity * length * width
        / (4.0 * substrate.height * g_total);
    let q_conductor = substrate.height / skin_depth(f0, substrate.conductivity)?;
    let q_dielectric = if substrate.loss_tangent == 0.0 {
        f64::INFINITY
    } else {
        1.0 / substrate.loss_tangent
    };
    let q_total = 1.0 / (1.0 / q_radiation + 1.0 / q_conductor + 1.0 / q_dielectric);
    let efficiency = q_total / q_radiation;
    Ok(QualityFactors {
        q_radiation,
        q_conductor,
        q_dielectric,
        q_total,
        efficiency,
    })
}

/// A fully characterized rectangular patch element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchDesign {
    /// Radiating width W, metres.
    pub width: f64,
    /// Resonant length L, metres.
    pub length: f64,
    /// Effective permittivity of the patch-width line.
    pub eps_eff: f64,
    /// Fringing extension ΔL, metres.
    pub delta_l: f64,
    /// Resonant frequency, hertz.
    pub resonant_frequency: f64,
    /// Slot self-conductance G1, siemens.
    pub g_slot: f64,
    /// Slot mutual conductance G12, siemens.
    pub g_mutual: f64,
    /// Edge input resistance at resonance, ohms.
    pub input_resistance: f64,
    /// Loss budget at resonance.
    pub quality: QualityFactors,
}

impl PatchDesign {
    /// Synthesize a patch for a target frequency on a substrate.
    pub fn synthesize(f0: f64, substrate: &Substrate) -> Result<PatchDesign> {
        let width = patch_width(f0, substrate)?;
        let length = patch_length(f0, substrate)?;
        Self::assemble(width, length, f0, substrate)
    }

    /// Characterize a patch from its physical dimensions.
    ///
    /// The resonance is derived from the dimensions, and every resonance-
    /// dependent quantity (slot conductances, Rin, Q budget) is evaluated at
    /// that derived frequency.
    pub fn analyze(width: f64, length: f64, substrate: &Substrate) -> Result<PatchDesign> {
        let f0 = resonant_frequency(length, width, substrate)?;
        Self::assemble(width, length, f0, substrate)
    }

    fn assemble(width: f64, length: f64, f0: f64, substrate: &Substrate) -> Result<PatchDesign> {
        let (g_slot, g_mutual) = slot_conductances(width, length, f0)?;
        let rin = input_resistance(g_slot, g_mutual)?;
        let quality = quality_factors(width, length, substrate, f0, g_slot + g_mutual)?;
        Ok(PatchDesign {
            width,
            length,
            eps_eff: eps_eff(width, substrate)?,
            delta_l: length_extension(width, substrate)?,
            resonant_frequency: f0,
            g_slot,
            g_mutual,
            input_resistance: rin,
            quality,
        })
    }

    /// Shunt resonator equivalent seen by the feed network.
    pub fn rlc_load(&self) -> RlcLoad {
        RlcLoad {
            resonant_frequency: self.resonant_frequency,
            resistance: self.input_resistance,
            q_total: self.quality.q_total,
        }
    }

    /// Effective radiating length L + 2ΔL used by the element pattern.
    pub fn effective_length(&self) -> f64 {
        self.length + 2.0 * self.delta_l
    }
}
