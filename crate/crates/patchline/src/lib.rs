//! Design and analysis toolkit for rectangular microstrip patch antennas and
//! series-fed linear arrays.
//!
//! The crate covers the classic desk-calculation pipeline end to end:
//!
//! * **Patch synthesis** ([`patch`]): transmission-line width/length design,
//!   fringing extension, resonance, two-slot conductances, edge resistance,
//!   and the radiation/conductor/dielectric Q budget.
//! * **Microstrip lines** ([`microstrip`]): effective permittivity,
//!   characteristic impedance, width synthesis, and guided wavelength.
//! * **Feed network** ([`network`]): ABCD cascades of shunt patch resonators
//!   and interconnect lines, quarter-wave matching, and S11 sweeps.
//! * **Far field** ([`radiation`]): element pattern, array factor, pattern
//!   multiplication, directivity, and principal-plane beam metrics.
//! * **Artifacts** ([`geometry`], [`touchstone`], [`svg`], [`report`],
//!   [`cli`]): strict JSON geometry files, one-port Touchstone export,
//!   deterministic SVG plots, and the printable comparison report, all
//!   orchestrated by the `patchline` binary.
//!
//! The built-in reference configuration is a six-element 18 GHz series-fed
//! array on a 1.574 mm εr = 3 laminate; its geometry ships as `paper.json`
//! at the workspace root and every module pins its numbers in tests.

pub mod cli;
pub mod error;
pub mod fsutil;
pub mod geometry;
pub mod media;
pub mod microstrip;
pub mod network;
pub mod numerics;
pub mod patch;
pub mod radiation;
pub mod report;
pub mod svg;
pub mod touchstone;

pub use error::{Error, Result};
