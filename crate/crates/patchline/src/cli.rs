//! Command-line interface: `design`, `analyze`, `pattern`, and `report`
//! subcommands orchestrating the synthesis → ladder → sweep → far-field
//! pipeline and writing the plot/touchstone artifacts.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::geometry::{load_geometry, save_geometry, ArrayGeometry};
use crate::media::Substrate;
use crate::network::{s11_sweep, synthesize_match, FrequencySweep, LadderModel};
use crate::patch::PatchDesign;
use crate::radiation::{
    beam_metrics, directivity, gain_dbi, total_pattern, AngularGrid, ElementModel,
    ExcitationSet, PatternCut, PrincipalPlane, RadiationPattern,
};
use crate::report::comparison_report;
use crate::svg::{write_svg, Plot};
use crate::touchstone::write_touchstone;

/// Ground-plane margin beyond the radiating structure on every side, mm.
const GROUND_MARGIN_MM: f64 = 0.7;
/// Interconnect dimensions of the series feed, mm.
const FEED_LENGTH_MM: f64 = 1.0;
const FEED_WIDTH_MM: f64 = 0.2;
/// Ground/backing thickness written into designed geometries, mm.
const GROUND_THICKNESS_MM: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(
    name = "patchline",
    version,
    about = "Design and analysis toolkit for series-fed microstrip patch arrays"
)]
pub struct Cli {
    /// Cap the number of worker threads for sweeps and pattern sampling.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a patch for a target frequency and write a geometry file.
    Design(DesignArgs),
    /// Sweep the ladder's reflection response and plot it.
    Analyze(AnalyzeArgs),
    /// Sample the far-field pattern and export principal-plane cuts.
    Pattern(PatternArgs),
    /// Run the full pipeline and print the comparison report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Design frequency, GHz.
    #[arg(long = "f0-ghz", value_name = "F")]
    pub f0_ghz: f64,

    /// Substrate relative permittivity.
    #[arg(long, value_name = "E")]
    pub er: f64,

    /// Substrate height, mm.
    #[arg(long = "h-mm", value_name = "H")]
    pub h_mm: f64,

    /// Substrate loss tangent.
    #[arg(long, value_name = "T", default_value_t = 0.0009)]
    pub tand: f64,

    /// Number of series-fed elements in the written geometry.
    #[arg(long, value_name = "N", default_value_t = 6)]
    pub elements: u32,

    /// Output geometry file.
    #[arg(long, value_name = "FILE", default_value = "design.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Geometry file (JSON).
    pub geometry: PathBuf,

    /// Sweep start, GHz.
    #[arg(long = "fstart-ghz", value_name = "A", default_value_t = 16.0)]
    pub fstart_ghz: f64,

    /// Sweep stop, GHz.
    #[arg(long = "fstop-ghz", value_name = "B", default_value_t = 20.0)]
    pub fstop_ghz: f64,

    /// Number of sweep points.
    #[arg(long, value_name = "N", default_value_t = 2001)]
    pub points: usize,

    /// Insert the quarter-wave matching transformer before sweeping.
    #[arg(long = "match")]
    pub match_: bool,

    /// Output directory for array.s1p and s11.svg.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Geometry file (JSON).
    pub geometry: PathBuf,

    /// Export a single principal cut (default: both).
    #[arg(long, value_enum, value_name = "PLANE")]
    pub cut: Option<CutArg>,

    /// Element drive: equal amplitudes or the ladder's node voltages.
    #[arg(long, value_enum, value_name = "KIND", default_value_t = ExcitationArg::Uniform)]
    pub excitation: ExcitationArg,

    /// Output directory for cut tables and plots.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Geometry file (JSON).
    pub geometry: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutArg {
    E,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExcitationArg {
    Uniform,
    Ladder,
}

/// Synthesize a patch and wrap it in a full array geometry, with patch and
/// ground dimensions rounded to the 0.01 mm fabrication grid.
pub fn design_geometry(
    f0_ghz: f64,
    er: f64,
    h_mm: f64,
    tand: f64,
    elements: u32,
) -> Result<(PatchDesign, ArrayGeometry)> {
    if !f0_ghz.is_finite() || f0_ghz <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "design frequency must be positive, got {f0_ghz} GHz"
        )));
    }
    let substrate = Substrate::new(er, tand, h_mm * 1.0e-3);
    substrate.validate()?;
    let design = PatchDesign::synthesize(f0_ghz * 1.0e9, &substrate)?;
    let length_mm = round_grid(design.length * 1.0e3);
    let width_mm = round_grid(design.width * 1.0e3);
    let n = elements as f64;
    let geometry = ArrayGeometry {
        patch_length_mm: length_mm,
        patch_width_mm: width_mm,
        ground_length_mm: round_grid(
            n * length_mm + (n - 1.0) * FEED_LENGTH_MM + 2.0 * GROUND_MARGIN_MM,
        ),
        ground_width_mm: round_grid(width_mm + 2.0 * GROUND_MARGIN_MM),
        ground_thickness_mm: GROUND_THICKNESS_MM,
        feed_length_mm: FEED_LENGTH_MM,
        feed_width_mm: FEED_WIDTH_MM,
        substrate_height_mm: h_mm,
        rel_permittivity: er,
        loss_tangent: tand,
        element_count: elements,
        design_frequency_ghz: f0_ghz,
    };
    geometry.validate()?;
    Ok((design, geometry))
}

fn round_grid(value_mm: f64) -> f64 {
    (value_mm * 100.0).round() / 100.0
}

/// Execute a parsed invocation. Errors bubble up for the binary to print and
/// convert into an exit code.
pub fn run_cli(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidInput(
                "--threads must be at least 1".to_string(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Design(args) => cmd_design(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Pattern(args) => cmd_pattern(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn cmd_design(args: &DesignArgs) -> Result<()> {
    let (design, geometry) = design_geometry(
        args.f0_ghz,
        args.er,
        args.h_mm,
        args.tand,
        args.elements,
    )?;
    save_geometry(&geometry, &args.out)?;
    println!("{:<24}{:.3} GHz", "design frequency", args.f0_ghz);
    println!(
        "{:<24}er {:.3}, tan d {:.5}, h {:.3} mm",
        "substrate", args.er, args.tand, args.h_mm
    );
    println!("{:<24}{:.3} mm", "patch width W", design.width * 1.0e3);
    println!("{:<24}{:.3} mm", "patch length L", design.length * 1.0e3);
    println!("{:<24}{:.4}", "effective permittivity", design.eps_eff);
    println!("{:<24}{:.3} mm", "fringing extension", design.delta_l * 1.0e3);
    println!(
        "{:<24}{:.3} GHz",
        "resonance from dims",
        design.resonant_frequency / 1.0e9
    );
    println!("{:<24}{:.1} ohm", "edge resistance", design.input_resistance);
    println!(
        "{:<24}{:.1} %",
        "radiation efficiency",
        design.quality.efficiency * 100.0
    );
    println!("{:<24}{}", "geometry written to", args.out.display());
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let geometry = load_geometry(&args.geometry)?;
    let f_design = geometry.design_frequency_hz();
    let ladder = LadderModel::build_series_fed_array(&geometry)?;
    let model = if args.match_ {
        let zin = ladder.input_impedance(f_design)?;
        let transformer =
            synthesize_match(zin, ladder.reference_impedance(), f_design, &geometry.substrate())?;
        ladder.with_transformer(transformer)
    } else {
        ladder
    };
    let sweep = s11_sweep(
        &model,
        args.fstart_ghz * 1.0e9,
        args.fstop_ghz * 1.0e9,
        args.points,
    )?;

    ensure_dir(&args.out)?;
    let s1p = args.out.join("array.s1p");
    write_touchstone(
        &s1p,
        &sweep,
        &[
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            format!("geometry {}", geometry.fingerprint()),
            format!("matched {}", if args.match_ { "yes" } else { "no" }),
        ],
    )?;
    let svg_path = args.out.join("s11.svg");
    write_svg(&svg_path, &sweep_plot(&sweep))?;

    println!("{:<24}{}", "elements", geometry.element_count);
    println!("{:<24}{}", "matched", if args.match_ { "yes" } else { "no" });
    println!(
        "{:<24}{:.3}-{:.3} GHz, {} points",
        "sweep", args.fstart_ghz, args.fstop_ghz, args.points
    );
    println!(
        "{:<24}{:.3} dB at {:.3} GHz",
        "min S11",
        sweep.min_s11_db,
        sweep.frequency_at_min / 1.0e9
    );
    match sweep.band_edges {
        Some((lo, hi)) => println!(
            "{:<24}{:.3}-{:.3} GHz ({:.1} MHz)",
            "-10 dB band",
            lo / 1.0e9,
            hi / 1.0e9,
            (hi - lo) / 1.0e6
        ),
        None => println!("{:<24}none", "-10 dB band"),
    }
    println!("{:<24}{}", "wrote", s1p.display());
    println!("{:<24}{}", "wrote", svg_path.display());
    Ok(())
}

fn sweep_plot(sweep: &FrequencySweep) -> Plot {
    let points: Vec<(f64, f64)> = sweep
        .frequencies
        .iter()
        .zip(&sweep.s11_db)
        .map(|(f, db)| (f / 1.0e9, *db))
        .collect();
    Plot::new("Reflection response", "Frequency (GHz)", "|S11| (dB)")
        .with_series("S11", points)
}

fn cmd_pattern(args: &PatternArgs) -> Result<()> {
    let geometry = load_geometry(&args.geometry)?;
    let substrate = geometry.substrate();
    let f_design = geometry.design_frequency_hz();
    let design = PatchDesign::analyze(
        geometry.patch_width_m(),
        geometry.patch_length_m(),
        &substrate,
    )?;
    let spacing = geometry.element_spacing_m();
    let excitation = match args.excitation {
        ExcitationArg::Uniform => {
            ExcitationSet::uniform(geometry.element_count as usize, spacing)?
        }
        ExcitationArg::Ladder => {
            let ladder = LadderModel::build_series_fed_array(&geometry)?;
            ExcitationSet::from_amplitudes(ladder.node_voltages(f_design)?, spacing)?
        }
    };
    let element = ElementModel::TwoSlot {
        width: design.width,
        effective_length: design.effective_length(),
    };
    let pattern = total_pattern(&element, &excitation, f_design, &AngularGrid::default())?;
    let d = directivity(&pattern)?;
    let gain = gain_dbi(d, design.quality.efficiency)?;

    println!(
        "{:<24}{}",
        "excitation",
        match args.excitation {
            ExcitationArg::Uniform => "uniform",
            ExcitationArg::Ladder => "ladder",
        }
    );
    println!("{:<24}{:.3} dBi", "directivity", 10.0 * d.log10());
    println!("{:<24}{:.3} dBi", "gain", gain);

    ensure_dir(&args.out)?;
    let planes: &[(PrincipalPlane, &str)] = match args.cut {
        Some(CutArg::E) => &[(PrincipalPlane::EPlane, "e")],
        Some(CutArg::H) => &[(PrincipalPlane::HPlane, "h")],
        None => &[(PrincipalPlane::EPlane, "e"), (PrincipalPlane::HPlane, "h")],
    };
    for &(plane, tag) in planes {
        export_cut(&pattern, plane, tag, &args.out)?;
    }
    Ok(())
}

fn export_cut(
    pattern: &RadiationPattern,
    plane: PrincipalPlane,
    tag: &str,
    out: &Path,
) -> Result<()> {
    let label = match plane {
        PrincipalPlane::EPlane => "E-plane",
        PrincipalPlane::HPlane => "H-plane",
    };
    let cut = pattern.principal_cut(plane)?;
    let metrics = beam_metrics(pattern, plane)?;
    println!("{:<24}{:.3} deg", format!("{label} HPBW"), metrics.hpbw_deg);
    match metrics.sidelobe_level_db {
        Some(sll) => println!("{:<24}{:.3} dB", format!("{label} SLL"), sll),
        None => println!("{:<24}none", format!("{label} SLL")),
    }
    println!(
        "{:<24}{:.3} deg",
        format!("{label} peak"),
        metrics.peak_angle_deg
    );

    let table_path = out.join(format!("pattern_{tag}.txt"));
    crate::fsutil::write_atomic(&table_path, cut_table(&cut).as_bytes())?;
    let svg_path = out.join(format!("pattern_{tag}.svg"));
    let points: Vec<(f64, f64)> = cut
        .angles_deg
        .iter()
        .zip(&cut.levels_db)
        .map(|(a, db)| (*a, *db))
        .collect();
    let plot = Plot::new(
        &format!("{label} cut"),
        "Angle (deg)",
        "Level (dB)",
    )
    .with_series(label, points);
    write_svg(&svg_path, &plot)?;
    println!("{:<24}{}", "wrote", table_path.display());
    println!("{:<24}{}", "wrote", svg_path.display());
    Ok(())
}

/// `angle_deg<TAB>level_db` rows, one per cut sample.
fn cut_table(cut: &PatternCut) -> String {
    let mut out = String::new();
    for (angle, level) in cut.angles_deg.iter().zip(&cut.levels_db) {
        out.push_str(&format!("{angle:.4}\t{level:.6}\n"));
    }
    out
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let geometry = load_geometry(&args.geometry)?;
    let report = comparison_report(&geometry)?;
    print!("{report}");
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", dir.display()),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_debug_asserts_hold() {
        Cli::command().debug_assert();
    }

    #[test]
    fn designed_geometry_reproduces_the_reference_dimensions() {
        let (design, geometry) = design_geometry(18.0, 3.0, 1.574, 0.0009, 6).unwrap();
        assert!((geometry.patch_width_mm - 5.89).abs() < 1e-12);
        assert!((geometry.patch_length_mm - 3.85).abs() < 1e-12);
        assert!((geometry.ground_length_mm - 29.5).abs() < 1e-12);
        assert!((geometry.ground_width_mm - 7.29).abs() < 1e-12);
        assert_eq!(geometry.element_count, 6);
        assert!((design.width * 1.0e3 - 5.8885).abs() < 0.01);
        geometry.validate().unwrap();
    }

    #[test]
    fn designed_geometry_rejects_nonsense() {
        assert!(design_geometry(0.0, 3.0, 1.574, 0.0009, 6).is_err());
        assert!(design_geometry(18.0, 0.5, 1.574, 0.0009, 6).is_err());
        assert!(design_geometry(18.0, 3.0, -1.0, 0.0009, 6).is_err());
    }

    #[test]
    fn cut_tables_are_tab_separated() {
        let cut = PatternCut {
            angles_deg: vec![-1.0, 0.0, 1.0],
            intensity: vec![0.5, 1.0, 0.5],
            levels_db: vec![-3.0103, 0.0, -3.0103],
        };
        let table = cut_table(&cut);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0.0000\t0.000000");
        assert!(lines[0].contains('\t'));
    }

    #[test]
    fn parses_the_documented_flags() {
        let cli = Cli::try_parse_from([
            "patchline", "analyze", "paper.json", "--fstart-ghz", "17", "--fstop-ghz", "19",
            "--points", "101", "--match", "--out", "work",
        ])
        .unwrap();
        match cli.command {
            Command::Analyze(a) => {
                assert_eq!(a.points, 101);
                assert!(a.match_);
                assert_eq!(a.out, PathBuf::from("work"));
            }
            other => panic!("wrong subcommand: {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "patchline", "pattern", "paper.json", "--cut", "h", "--excitation", "ladder",
        ])
        .unwrap();
        match cli.command {
            Command::Pattern(p) => {
                assert_eq!(p.cut, Some(CutArg::H));
                assert_eq!(p.excitation, ExcitationArg::Ladder);
            }
            other => panic!("wrong subcommand: {other:?}"),
        }

        let cli = Cli::try_parse_from(["patchline", "report", "paper.json", "--threads", "2"])
            .unwrap();
        assert_eq!(cli.threads, Some(2));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert!(Cli::try_parse_from(["patchline", "frobnicate"]).is_err());
        assert!(Cli::try_parse_from(["patchline", "design"]).is_err());
    }
}
