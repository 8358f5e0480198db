//! The on-disk array description: a strict, flat JSON schema in millimetres
//! and gigahertz, plus its physical validity rules.
//!
//! The schema is deliberately rigid: unknown keys are rejected, every field
//! is mandatory, and parse failures carry serde_json's line/column context.
//! A bundled `paper.json` at the repository root holds the published
//! reference design this toolkit reproduces; [`ArrayGeometry::reference_design`]
//! is the same data as a compile-time constant.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::Substrate;

/// System reference impedance for feeds and S-parameters, ohms.
pub const SYSTEM_IMPEDANCE: f64 = 50.0;

/// Complete physical description of a series-fed linear patch array.
///
/// Lengths in millimetres, frequency in gigahertz; the `*_m()` accessors
/// convert to SI for the physics layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayGeometry {
    /// Resonant length of each patch (direction of the feed run), mm.
    pub patch_length_mm: f64,
    /// Radiating width of each patch, mm.
    pub patch_width_mm: f64,
    /// Ground plane extent along the feed run, mm.
    pub ground_length_mm: f64,
    /// Ground plane extent across the feed run, mm.
    pub ground_width_mm: f64,
    /// Conductor thickness, mm.
    pub ground_thickness_mm: f64,
    /// Length of each inter-patch feed line, mm.
    pub feed_length_mm: f64,
    /// Width of each inter-patch feed line, mm.
    pub feed_width_mm: f64,
    /// Substrate height, mm.
    pub substrate_height_mm: f64,
    /// Substrate relative permittivity.
    pub rel_permittivity: f64,
    /// Substrate loss tangent.
    pub loss_tangent: f64,
    /// Number of patches in the series-fed run.
    pub element_count: u32,
    /// Frequency the array was designed for, GHz.
    pub design_frequency_ghz: f64,
}

impl ArrayGeometry {
    /// The published six-element 18 GHz reference design on 1.574 mm RO3003.
    pub fn reference_design() -> ArrayGeometry {
        ArrayGeometry {
            patch_length_mm: 3.85,
            patch_width_mm: 5.89,
            ground_length_mm: 29.50,
            ground_width_mm: 7.0,
            ground_thickness_mm: 0.5,
            feed_length_mm: 1.0,
            feed_width_mm: 0.20,
            substrate_height_mm: 1.574,
            rel_permittivity: 3.0,
            loss_tangent: 0.0009,
            element_count: 6,
            design_frequency_ghz: 18.0,
        }
    }

    /// Check all fields against physical bounds and the layout constraints.
    pub fn validate(&self) -> Result<()> {
        let positive = |value: f64, name: &str| -> Result<()> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "{name} must be positive, got {value}"
                )))
            }
        };
        positive(self.patch_length_mm, "patch_length_mm")?;
        positive(self.patch_width_mm, "patch_width_mm")?;
        positive(self.ground_length_mm, "ground_length_mm")?;
        positive(self.ground_width_mm, "ground_width_mm")?;
        positive(self.feed_width_mm, "feed_width_mm")?;
        positive(self.substrate_height_mm, "substrate_height_mm")?;
        positive(self.design_frequency_ghz, "design_frequency_ghz")?;
        if !self.ground_thickness_mm.is_finite() || self.ground_thickness_mm < 0.0 {
            return Err(Error::Validation(format!(
                "ground_thickness_mm must be non-negative, got {}",
                self.ground_thickness_mm
            )));
        }
        if !self.feed_length_mm.is_finite() || self.feed_length_mm < 0.0 {
            return Err(Error::Validation(format!(
                "feed_length_mm must be non-negative, got {}",
                self.feed_length_mm
            )));
        }
        if !self.rel_permittivity.is_finite() || self.rel_permittivity < 1.0 {
            return Err(Error::Validation(format!(
                "rel_permittivity must be at least 1, got {}",
                self.rel_permittivity
            )));
        }
        if !self.loss_tangent.is_finite() || self.loss_tangent < 0.0 {
            return Err(Error::Validation(format!(
                "loss_tangent must be non-negative, got {}",
                self.loss_tangent
            )));
        }
        if self.element_count < 1 {
            return Err(Error::Validation(
                "element_count must be at least 1".to_string(),
            ));
        }
        let n = self.element_count as f64;
        let span = n * self.patch_length_mm + (n - 1.0) * self.feed_length_mm;
        if span > self.ground_length_mm + 1e-9 {
            return Err(Error::Validation(format!(
                "array span {span:.4} mm (patches plus interconnects) exceeds \
                 ground_length_mm = {} mm",
                self.ground_length_mm
            )));
        }
        if self.patch_width_mm > self.ground_width_mm + 1e-9 {
            return Err(Error::Validation(format!(
                "patch_width_mm = {} mm exceeds ground_width_mm = {} mm",
                self.patch_width_mm, self.ground_width_mm
            )));
        }
        Ok(())
    }

    /// Substrate stack-up implied by this geometry (copper conductors).
    pub fn substrate(&self) -> Substrate {
        Substrate {
            rel_permittivity: self.rel_permittivity,
            loss_tangent: self.loss_tangent,
            height: self.substrate_height_mm * 1e-3,
            conductor_thickness: self.ground_thickness_mm * 1e-3,
            conductivity: crate::media::COPPER_CONDUCTIVITY,
        }
    }

    pub fn patch_length_m(&self) -> f64 {
        self.patch_length_mm * 1e-3
    }

    pub fn patch_width_m(&self) -> f64 {
        self.patch_width_mm * 1e-3
    }

    pub fn feed_length_m(&self) -> f64 {
        self.feed_length_mm * 1e-3
    }

    pub fn feed_width_m(&self) -> f64 {
        self.feed_width_mm * 1e-3
    }

    pub fn design_frequency_hz(&self) -> f64 {
        self.design_frequency_ghz * 1e9
    }

    /// Centre-to-centre element spacing along the feed run, metres.
    pub fn element_spacing_m(&self) -> f64 {
        (self.patch_length_mm + self.feed_length_mm) * 1e-3
    }

    /// Parse a geometry from JSON text. Strict: unknown keys, missing fields,
    /// and syntax problems are all reported with serde_json's position info.
    pub fn from_json(text: &str) -> Result<ArrayGeometry> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("geometry: {e}")))
    }

    /// Serialize to pretty-printed JSON with a trailing newline. Field order
    /// is fixed by the struct, so output is byte-deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("geometry serializes");
        s.push('\n');
        s
    }

    /// FNV-1a 64-bit hash of the canonical (compact) JSON form, as 16 hex
    /// digits. Stamped into generated artifacts so a result file can be tied
    /// back to the geometry that produced it.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("geometry serializes");
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in canonical.as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

/// Read and validate a geometry file.
pub fn load_geometry(path: &Path) -> Result<ArrayGeometry> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let geometry = ArrayGeometry::from_json(&text)?;
    geometry.validate()?;
    Ok(geometry)
}

/// Validate and atomically write a geometry file.
pub fn save_geometry(geometry: &ArrayGeometry, path: &Path) -> Result<()> {
    geometry.validate()?;
    crate::fsutil::write_atomic(path, geometry.to_json().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_design_is_valid_and_matches_known_dimensions() {
        let g = ArrayGeometry::reference_design();
        g.validate().unwrap();
        assert_eq!(g.patch_length_mm, 3.85);
        assert_eq!(g.patch_width_mm, 5.89);
        assert_eq!(g.ground_length_mm, 29.50);
        assert_eq!(g.ground_width_mm, 7.0);
        assert_eq!(g.element_count, 6);
        assert_eq!(g.element_spacing_m(), 4.85e-3);
        let s = g.substrate();
        assert_eq!(s.rel_permittivity, 3.0);
        assert_eq!(s.height, 1.574e-3);
    }

    #[test]
    fn bundled_reference_file_matches_the_preset() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../paper.json");
        let g = load_geometry(Path::new(path)).unwrap();
        assert_eq!(g, ArrayGeometry::reference_design());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let g = ArrayGeometry::reference_design();
        let back = ArrayGeometry::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);

        // Awkward float values survive the round trip bit-for-bit too.
        let mut h = g;
        h.patch_length_mm = 3.849_843_216_663_9;
        h.design_frequency_ghz = 17.999_173_382_683_434;
        let back = ArrayGeometry::from_json(&h.to_json()).unwrap();
        assert!(back == h, "float fields drifted through JSON");
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let g = ArrayGeometry::reference_design();
        assert_eq!(g.to_json(), g.to_json());
        assert_eq!(g.fingerprint(), g.fingerprint());
        assert_eq!(g.fingerprint().len(), 16);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut json = ArrayGeometry::reference_design().to_json();
        json = json.replacen('{', "{\n  \"mystery_field_mm\": 1.0,", 1);
        let err = ArrayGeometry::from_json(&json).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("unknown field") && msg.contains("mystery_field_mm"),
            "message: {msg}"
        );
    }

    #[test]
    fn missing_fields_are_named() {
        let json = r#"{ "patch_length_mm": 3.85 }"#;
        let err = ArrayGeometry::from_json(json).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing field"), "message: {msg}");
        assert!(msg.contains("patch_width_mm"), "message: {msg}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ArrayGeometry::from_json("{ \"patch_length_mm\": 3.85,\n oops\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "message: {msg}");
    }

    #[test]
    fn layout_constraints_are_enforced() {
        // Patches plus interconnects must fit on the ground plane.
        let mut g = ArrayGeometry::reference_design();
        g.ground_length_mm = 28.0; // span is 28.1 mm
        let err = g.validate().unwrap_err();
        assert!(err.to_string().contains("span"), "got {err}");

        let mut g = ArrayGeometry::reference_design();
        g.patch_width_mm = 7.5;
        let err = g.validate().unwrap_err();
        assert!(err.to_string().contains("ground_width_mm"), "got {err}");
    }

    #[test]
    fn field_bounds_are_enforced() {
        let mut g = ArrayGeometry::reference_design();
        g.patch_length_mm = 0.0;
        assert!(g.validate().is_err());

        let mut g = ArrayGeometry::reference_design();
        g.rel_permittivity = 0.5;
        assert!(g.validate().is_err());

        let mut g = ArrayGeometry::reference_design();
        g.loss_tangent = -1e-4;
        assert!(g.validate().is_err());

        let mut g = ArrayGeometry::reference_design();
        g.element_count = 0;
        assert!(g.validate().is_err());

        let mut g = ArrayGeometry::reference_design();
        g.design_frequency_ghz = f64::NAN;
        assert!(g.validate().is_err());

        // Zero-length interconnects are legal (patches touching edge to edge).
        let mut g = ArrayGeometry::reference_design();
        g.feed_length_mm = 0.0;
        g.validate().unwrap();
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = ArrayGeometry::reference_design();
        let mut b = a;
        b.patch_length_mm += 1e-9;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn save_and_load_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("geom.json");
        let g = ArrayGeometry::reference_design();
        save_geometry(&g, &path).unwrap();
        let back = load_geometry(&path).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn load_of_missing_file_is_an_io_error() {
        let err = load_geometry(Path::new("/no/such/file.json")).unwrap_err();
        assert_eq!(err.exit_code(), 4, "got {err:?}");
    }
}
