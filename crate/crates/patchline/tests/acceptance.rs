//! End-to-end acceptance suite: one test per shipping criterion, each
//! printing a single `ACCEPTANCE n (...): pass` line (visible with
//! `cargo test -- --nocapture`). The expected numbers come from oracles
//! evaluated independently of the library code paths.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use patchline::geometry::ArrayGeometry;
use patchline::media::{Substrate, C0};
use patchline::microstrip::MicrostripLine;
use patchline::network::{s11_sweep, synthesize_match, LadderModel, RlcLoad, TwoPortAbcd};
use patchline::patch::{length_extension, resonant_frequency};
use patchline::radiation::{
    array_factor, directivity, total_pattern, AngularGrid, ElementModel, ExcitationSet,
    RadiationPattern,
};
use patchline::report::comparison_report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patchline"))
}

fn bundled_geometry_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../paper.json")
}

/// First token on a labelled stdout line that parses as a number.
fn value_after(stdout: &str, label: &str) -> f64 {
    for line in stdout.lines() {
        if line.starts_with(label) {
            for token in line.split_whitespace() {
                if let Ok(v) = token.parse::<f64>() {
                    return v;
                }
            }
        }
    }
    panic!("no numeric value on a {label:?} line in:\n{stdout}");
}

fn matched_reference_model() -> LadderModel {
    let geometry = ArrayGeometry::reference_design();
    let ladder = LadderModel::build_series_fed_array(&geometry).unwrap();
    let f0 = geometry.design_frequency_hz();
    let zin = ladder.input_impedance(f0).unwrap();
    let transformer =
        synthesize_match(zin, ladder.reference_impedance(), f0, &geometry.substrate()).unwrap();
    ladder.with_transformer(transformer)
}

#[test]
fn criterion_1_design_reproduces_reference_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("design.json");
    let start = Instant::now();
    let run = bin()
        .args(["design", "--f0-ghz", "18", "--er", "3", "--h-mm", "1.574"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(run.status.success(), "design failed: {run:?}");
    let stdout = String::from_utf8(run.stdout).unwrap();
    let width = value_after(&stdout, "patch width");
    let length = value_after(&stdout, "patch length");
    assert!(
        (width - 5.89).abs() <= 0.02,
        "synthesized width {width} mm is off the 5.89 mm reference"
    );
    assert!(
        (length - 3.85).abs() <= 0.02,
        "synthesized length {length} mm is off the 3.85 mm reference"
    );
    assert!(out.is_file(), "geometry file not written");
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "design took {elapsed:?}, budget is 1 s"
    );
    println!(
        "ACCEPTANCE 1 (design dimensions): pass — W = {width:.3} mm, L = {length:.3} mm \
         in {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_2_inverse_resonance_consistency() {
    let f = resonant_frequency(3.85e-3, 5.89e-3, &Substrate::ro3003()).unwrap();
    let deviation = (f - 18.0e9).abs() / 18.0e9;
    assert!(
        deviation <= 0.005,
        "resonance {f} Hz deviates {:.3}% from 18 GHz",
        deviation * 100.0
    );
    println!(
        "ACCEPTANCE 2 (inverse resonance): pass — f0 = {:.6} GHz ({:+.4}%)",
        f / 1.0e9,
        (f / 18.0e9 - 1.0) * 100.0
    );
}

#[test]
fn criterion_3_intermediate_oracle_pins() {
    let substrate = Substrate::ro3003();
    let (er, h, w): (f64, f64, f64) = (3.0, 1.574e-3, 5.89e-3);

    // Direct-evaluation oracle for the effective permittivity, written from
    // the closed form rather than through the library helpers.
    let oracle_ee = 0.5 * (er + 1.0) + 0.5 * (er - 1.0) / (1.0 + 12.0 * h / w).sqrt();
    let ee = patchline::microstrip::eps_eff(w, &substrate).unwrap();
    assert!((ee - 2.488).abs() <= 0.002, "eps_eff = {ee}");
    assert!(
        (ee - oracle_ee).abs() <= 1e-12,
        "library eps_eff {ee} vs direct evaluation {oracle_ee}"
    );

    // Direct-evaluation oracle for the fringing extension.
    let ratio = w / h;
    let oracle_dl =
        0.412 * h * (oracle_ee + 0.3) * (ratio + 0.264) / ((oracle_ee - 0.258) * (ratio + 0.8));
    let dl = length_extension(w, &substrate).unwrap();
    assert!((dl - 0.715e-3).abs() <= 0.002e-3, "delta L = {dl}");
    assert!(
        (dl - oracle_dl).abs() <= 1e-15,
        "library delta L {dl} vs direct evaluation {oracle_dl}"
    );
    println!(
        "ACCEPTANCE 3 (intermediate pins): pass — eps_eff = {ee:.6}, dL = {:.6} mm",
        dl * 1.0e3
    );
}

#[test]
fn criterion_4_matched_network_behavior() {
    let geometry = ArrayGeometry::reference_design();
    let unmatched = LadderModel::build_series_fed_array(&geometry).unwrap();
    let sweep_unmatched = s11_sweep(&unmatched, 16.0e9, 20.0e9, 2001).unwrap();
    let sweep_matched = s11_sweep(&matched_reference_model(), 16.0e9, 20.0e9, 2001).unwrap();

    assert!(
        sweep_matched.min_s11_db <= -16.0,
        "matched minimum {} dB misses the -16 dB target",
        sweep_matched.min_s11_db
    );
    let deepening = sweep_unmatched.min_s11_db - sweep_matched.min_s11_db;
    assert!(
        deepening >= 10.0,
        "matching deepened the dip by only {deepening} dB"
    );
    assert!(
        (sweep_matched.frequency_at_min - 18.0e9).abs() <= 1.5e9,
        "matched dip sits at {} Hz, not near 18 GHz",
        sweep_matched.frequency_at_min
    );
    // Bandwidth is a documented comparison, not a gate: the quoted values
    // are 700 MHz and 1 GHz.
    let bw_mhz = sweep_matched
        .bandwidth()
        .expect("matched sweep crosses -10 dB")
        / 1.0e6;
    println!(
        "ACCEPTANCE 4 (matched network): pass — min S11 {:.2} dB at {:.3} GHz \
         (deepened {deepening:.2} dB); -10 dB bandwidth {bw_mhz:.0} MHz vs quoted 700/1000",
        sweep_matched.min_s11_db,
        sweep_matched.frequency_at_min / 1.0e9
    );
}

#[test]
fn criterion_5_quadrature_accuracy() {
    let grid = AngularGrid::default();
    let theta: Vec<f64> = (0..grid.n_theta)
        .map(|i| i as f64 * std::f64::consts::PI / (grid.n_theta - 1) as f64)
        .collect();
    let phi: Vec<f64> = (0..grid.n_phi)
        .map(|j| j as f64 * 2.0 * std::f64::consts::PI / (grid.n_phi - 1) as f64)
        .collect();
    let sample = |f: &dyn Fn(f64) -> f64| -> RadiationPattern {
        let mut u = Vec::with_capacity(theta.len() * phi.len());
        for &t in &theta {
            for _ in &phi {
                u.push(f(t));
            }
        }
        RadiationPattern::from_samples(1.0e9, theta.clone(), phi.clone(), u).unwrap()
    };

    let d_iso = 10.0 * directivity(&sample(&|_| 1.0)).unwrap().log10();
    assert!(d_iso.abs() <= 0.01, "isotropic D = {d_iso} dBi");

    let d_donut = 10.0
        * directivity(&sample(&|t| t.sin() * t.sin()))
            .unwrap()
            .log10();
    assert!((d_donut - 1.76).abs() <= 0.02, "ideal dipole D = {d_donut} dBi");

    let d_halfwave = 10.0
        * directivity(&sample(&|t| {
            let s = t.sin();
            if s < 1e-9 {
                0.0
            } else {
                let c = (std::f64::consts::FRAC_PI_2 * t.cos()).cos() / s;
                c * c
            }
        }))
        .unwrap()
        .log10();
    assert!(
        (d_halfwave - 2.15).abs() <= 0.03,
        "half-wave dipole D = {d_halfwave} dBi"
    );

    // Grid-doubling stability of the reference-array directivity.
    let geometry = ArrayGeometry::reference_design();
    let design = patchline::patch::PatchDesign::analyze(
        geometry.patch_width_m(),
        geometry.patch_length_m(),
        &geometry.substrate(),
    )
    .unwrap();
    let element = ElementModel::TwoSlot {
        width: design.width,
        effective_length: design.effective_length(),
    };
    let excitation = ExcitationSet::uniform(6, geometry.element_spacing_m()).unwrap();
    let f0 = geometry.design_frequency_hz();
    let coarse = 10.0
        * directivity(&total_pattern(&element, &excitation, f0, &grid).unwrap())
            .unwrap()
            .log10();
    let fine_grid = AngularGrid {
        n_theta: 2 * grid.n_theta - 1,
        n_phi: 2 * grid.n_phi - 1,
    };
    let fine = 10.0
        * directivity(&total_pattern(&element, &excitation, f0, &fine_grid).unwrap())
            .unwrap()
            .log10();
    assert!(
        (fine - coarse).abs() < 0.01,
        "directivity moved {} dB on grid doubling",
        fine - coarse
    );
    println!(
        "ACCEPTANCE 5 (quadrature): pass — iso {d_iso:+.4} dBi, dipole {d_donut:.3} dBi, \
         half-wave {d_halfwave:.3} dBi, grid-doubling shift {:.5} dB",
        fine - coarse
    );
}

#[test]
fn criterion_6_array_factor_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0a11);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8usize);
        let amplitudes: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max) == 0.0 {
            continue;
        }
        let spacing = rng.gen_range(1.0e-3..30.0e-3);
        let beta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let frequency = rng.gen_range(1.0e9..30.0e9);
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);

        // Alternate between the two public drive shapes: arbitrary complex
        // amplitudes (zero phase step) and progressive phasing (unit drive).
        let excitation = if rng.gen_bool(0.5) {
            ExcitationSet::from_amplitudes(amplitudes, spacing).unwrap()
        } else {
            ExcitationSet::progressive(n, spacing, beta).unwrap()
        };
        let got = array_factor(&excitation, frequency, theta, phi).unwrap();

        // Brute-force per-term oracle.
        let k0 = 2.0 * std::f64::consts::PI * frequency / C0;
        let psi = k0 * excitation.spacing() * theta.sin() * phi.cos() + excitation.phase_step();
        let mut want = Complex64::new(0.0, 0.0);
        for (idx, a) in excitation.amplitudes().iter().enumerate() {
            want += a * Complex64::from_polar(1.0, idx as f64 * psi);
        }
        worst = worst.max((got - want).norm());
    }
    assert!(worst <= 1e-12, "worst array-factor deviation {worst}");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "10^4 comparisons took {elapsed:?}"
    );
    println!(
        "ACCEPTANCE 6 (array-factor oracle): pass — worst |delta| = {worst:.3e} over 10^4 \
         configurations in {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_7_gain_report_structure() {
    let report = comparison_report(&ArrayGeometry::reference_design()).unwrap();
    let s = &report.summary;
    assert!(
        s.array_gain_dbi > s.patch_gain_dbi,
        "array gain {} dBi does not exceed the single-patch gain {} dBi",
        s.array_gain_dbi,
        s.patch_gain_dbi
    );
    assert!(
        s.hpbw_e_deg < s.hpbw_h_deg,
        "fan-beam inequality violated: array-axis {} deg vs transverse {} deg",
        s.hpbw_e_deg,
        s.hpbw_h_deg
    );

    let run = bin()
        .arg("report")
        .arg(bundled_geometry_path())
        .output()
        .unwrap();
    assert!(run.status.success(), "report failed: {run:?}");
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("7.51"), "7.51 dBi row missing:\n{stdout}");
    assert!(stdout.contains("7.91"), "7.91 dBi row missing:\n{stdout}");
    println!(
        "ACCEPTANCE 7 (gain report): pass — array {:.3} dBi > patch {:.3} dBi, \
         HPBW {:.2}/{:.2} deg, both quoted gains printed",
        s.array_gain_dbi, s.patch_gain_dbi, s.hpbw_e_deg, s.hpbw_h_deg
    );
}

#[test]
fn criterion_8_passivity_and_reciprocity() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0acc);
    let substrate = Substrate::ro3003();

    // Passivity: 1000 random passive ladders, every sweep sample inside the
    // unit circle.
    for case in 0..1000 {
        let n = rng.gen_range(1..=4usize);
        let patches: Vec<RlcLoad> = (0..n)
            .map(|_| RlcLoad {
                resonant_frequency: rng.gen_range(10.0e9..25.0e9),
                resistance: rng.gen_range(50.0..400.0),
                q_total: rng.gen_range(2.0..50.0),
            })
            .collect();
        let interconnects: Vec<MicrostripLine> = (0..n - 1)
            .map(|_| {
                MicrostripLine::new(
                    rng.gen_range(0.1e-3..3.0e-3),
                    rng.gen_range(0.5e-3..3.0e-3),
                    &substrate,
                )
                .unwrap()
            })
            .collect();
        let ladder = LadderModel::from_parts(patches, interconnects, 50.0).unwrap();
        let sweep = s11_sweep(&ladder, 16.0e9, 20.0e9, 21).unwrap();
        for (f, s) in sweep.frequencies.iter().zip(&sweep.s11) {
            assert!(
                s.norm() <= 1.0 + 1e-9,
                "case {case}: |S11| = {} at {f} Hz",
                s.norm()
            );
        }
    }

    // Reciprocity: 1000 random ABCD cascades keep a unit determinant.
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut m = TwoPortAbcd::identity();
        for _ in 0..rng.gen_range(1..=4) {
            if rng.gen_bool(0.5) {
                let z0 = rng.gen_range(20.0..120.0);
                let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                m = m.cascade(&TwoPortAbcd::line(z0, theta).unwrap());
            } else {
                let y = Complex64::new(rng.gen_range(0.0..0.02), rng.gen_range(-0.02..0.02));
                m = m.cascade(&TwoPortAbcd::shunt_admittance(y));
            }
        }
        worst = worst.max((m.determinant() - 1.0).norm());
    }
    assert!(worst <= 1e-9, "worst determinant deviation {worst}");
    println!(
        "ACCEPTANCE 8 (passivity/reciprocity): pass — 1000 passive sweeps, \
         worst |det - 1| = {worst:.3e}"
    );
}

#[test]
fn criterion_9_io_round_trips() {
    // Touchstone: write → parse within 5e-9 relative.
    let sweep = s11_sweep(&matched_reference_model(), 16.0e9, 20.0e9, 201).unwrap();
    let text = patchline::touchstone::render_touchstone(&sweep, &[]).unwrap();
    let back = patchline::touchstone::parse_touchstone(&text).unwrap().sweep;
    for (a, b) in sweep.frequencies.iter().zip(&back.frequencies) {
        assert!((a - b).abs() <= 5e-9 * a, "frequency {a} re-read as {b}");
    }
    for (a, b) in sweep.s11.iter().zip(&back.s11) {
        assert!(
            (a - b).norm() <= 5e-9 * a.norm().max(1.0),
            "S11 {a} re-read as {b}"
        );
    }

    // Geometry: write → load exact.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("geometry.json");
    let geometry = ArrayGeometry::reference_design();
    patchline::geometry::save_geometry(&geometry, &path).unwrap();
    let loaded = patchline::geometry::load_geometry(&path).unwrap();
    assert_eq!(loaded, geometry, "geometry round trip is not exact");

    // SVG: byte-deterministic rendering.
    let points: Vec<(f64, f64)> = sweep
        .frequencies
        .iter()
        .zip(&sweep.s11_db)
        .map(|(f, db)| (f / 1.0e9, *db))
        .collect();
    let plot = || {
        patchline::svg::Plot::new("Reflection response", "Frequency (GHz)", "|S11| (dB)")
            .with_series("S11", points.clone())
    };
    let first = plot().render_svg().unwrap();
    let second = plot().render_svg().unwrap();
    assert_eq!(first, second, "SVG rendering is not deterministic");

    // Full report pipeline inside the time budget.
    let start = Instant::now();
    let run = bin()
        .arg("report")
        .arg(bundled_geometry_path())
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(run.status.success(), "report failed: {run:?}");
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "report pipeline took {elapsed:?}, budget is 10 s"
    );
    println!(
        "ACCEPTANCE 9 (io round trips): pass — touchstone/geometry/svg round trips hold, \
         report ran in {:.2} s",
        elapsed.as_secs_f64()
    );
}
