//! Batch front-end: `distances`, `shadow`, `fading` and `heatmap`.
//!
//! Exit codes: 0 success, 1 data or model error, 2 usage error. Outputs are
//! rendered in memory first and then each file is written to a temporary
//! sibling and renamed, so a failed run leaves no half-written files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::geoheat::{export_heatmap, HeatmapFormat, HeatmapLayer};
use crate::measurements::{parse_measurement_csv, ValueKind};
use crate::pathloss::{estimate_distances, write_distance_csv, LinkBudget, UmiNlosModel};
use crate::shadowing::{fit_shadowing, DEFAULT_BIN_WIDTH_DB, RECOMMENDED_SAMPLES};
use crate::smallscale::{
    detect_slots, envelope, envelope_csv, estimate_rayleigh_scale, parse_iq_dat, pdf_comparison_csv,
    simulate_envelope, write_iq_dat, MultipathConfig, DEFAULT_MAX_DELAY_S, DEFAULT_NULL_THRESHOLD,
};

#[derive(Debug, Parser)]
#[command(name = "propkit", version, about = "Pathloss, shadowing and fading analysis over measurement files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pathloss and transmitter distance per RSRP sample.
    Distances(DistancesArgs),
    /// Fit a Gaussian shadow-fading model to RSRP samples.
    Shadow(ShadowArgs),
    /// Rayleigh envelope fit of an IQ capture or a simulated channel.
    Fading(FadingArgs),
    /// Export a measurement CSV as a heatmap layer.
    Heatmap(HeatmapArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Geojson,
}

impl From<FormatArg> for HeatmapFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => HeatmapFormat::Csv,
            FormatArg::Geojson => HeatmapFormat::GeoJson,
        }
    }
}

fn heatmap_file_name(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Csv => "heatmap.csv",
        FormatArg::Geojson => "heatmap.geojson",
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Rsrp,
    DownlinkSpeed,
    UplinkSpeed,
}

impl From<KindArg> for ValueKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rsrp => ValueKind::Rsrp,
            KindArg::DownlinkSpeed => ValueKind::DownlinkSpeed,
            KindArg::UplinkSpeed => ValueKind::UplinkSpeed,
        }
    }
}

#[derive(Debug, Args)]
pub struct DistancesArgs {
    /// `lon,lat,val` CSV of RSRP samples.
    pub input: PathBuf,
    /// Effective transmit power.
    #[arg(long)]
    pub pt_dbm: f64,
    /// Carrier frequency.
    #[arg(long)]
    pub fc_ghz: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "geojson")]
    pub heatmap_format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    /// One dBm value per line, or a `lon,lat,val` CSV.
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH_DB)]
    pub bin_width_db: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "simulate"])))]
pub struct FadingArgs {
    /// Interleaved little-endian f32 I/Q capture.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Synthesize a multipath channel instead of reading a capture.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long)]
    pub sample_rate_hz: f64,
    /// Simulated duration in seconds.
    #[arg(long, required_if_eq("simulate", "true"))]
    pub duration: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub paths: usize,
    #[arg(long, default_value_t = 14.0)]
    pub velocity_mps: f64,
    #[arg(long, default_value_t = 938.8e6)]
    pub fc_hz: f64,
    /// Total envelope power of the simulated channel.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DELAY_S)]
    pub max_delay_s: f64,
    /// Seed for all randomness; derived from the clock and printed when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also estimate the burst slot duration from envelope nulls.
    #[arg(long)]
    pub detect_slots: bool,
    #[arg(long, default_value_t = DEFAULT_NULL_THRESHOLD)]
    pub threshold_fraction: f64,
    /// Histogram bins for the PDF comparison table.
    #[arg(long, default_value_t = 50)]
    pub pdf_bins: usize,
    /// Also write the simulated capture as `fading_capture.dat`.
    #[arg(long)]
    pub save_dat: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "rsrp")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "geojson")]
    pub format: FormatArg,
    #[arg(long)]
    pub output: PathBuf,
}

struct Output {
    path: PathBuf,
    bytes: Vec<u8>,
}

impl Output {
    fn new(dir: &Path, name: &str, bytes: impl Into<Vec<u8>>) -> Self {
        Self { path: dir.join(name), bytes: bytes.into() }
    }
}

fn commit(outputs: Vec<Output>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(outputs.len());
    for out in outputs {
        let dir = match out.path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(&out.bytes)?;
        tmp.flush()?;
        tmp.persist(&out.path).map_err(|e| Error::Io(e.error))?;
        written.push(out.path);
    }
    Ok(written)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Runs one subcommand. Diagnostics go to `diag`; data goes to files.
pub fn run(cli: Cli, diag: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let outputs = match cli.command {
        Command::Distances(a) => distances(a, diag)?,
        Command::Shadow(a) => shadow(a, diag)?,
        Command::Fading(a) => fading(a, diag)?,
        Command::Heatmap(a) => heatmap(a)?,
    };
    commit(outputs)
}

fn distances(a: DistancesArgs, diag: &mut dyn Write) -> Result<Vec<Output>> {
    let lb = LinkBudget::new(a.pt_dbm)?;
    let model = UmiNlosModel::new(a.fc_ghz)?;
    let samples = parse_measurement_csv(read_text(&a.input)?.as_bytes(), ValueKind::Rsrp)?;
    let rows = estimate_distances(&samples, &lb, &model)?;

    let mut outputs = vec![Output::new(&a.out_dir, "distances.csv", write_distance_csv(&rows))];
    if samples.is_empty() {
        let _ = writeln!(diag, "warning: no samples, heatmap skipped");
    } else {
        let layer = HeatmapLayer::from_samples(&samples)?;
        outputs.push(Output::new(
            &a.out_dir,
            heatmap_file_name(a.heatmap_format),
            export_heatmap(&layer, a.heatmap_format.into()),
        ));
    }
    Ok(outputs)
}

/// Reads shadow-fading input: a `lon,lat,val` CSV when the first non-blank
/// line has a comma, otherwise one value per line.
fn read_dbm_values(text: &str) -> Result<Vec<f64>> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.contains(',') {
        return Ok(parse_measurement_csv(text.as_bytes(), ValueKind::Rsrp)?
            .into_iter()
            .map(|s| s.val)
            .collect());
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|_| Error::Row {
                row: i as u64 + 1,
                message: format!("`{}` is not a number", l.trim()),
            })
        })
        .collect()
}

fn shadow(a: ShadowArgs, diag: &mut dyn Write) -> Result<Vec<Output>> {
    let values = read_dbm_values(&read_text(&a.input)?)?;
    let report = fit_shadowing(&values, a.bin_width_db)?;
    if report.undersampled() {
        let _ = writeln!(
            diag,
            "warning: {} samples, fewer than the recommended {RECOMMENDED_SAMPLES}",
            report.fit.n
        );
    }
    Ok(vec![
        Output::new(&a.out_dir, "shadow_report.txt", report.to_report_text()),
        Output::new(&a.out_dir, "shadow_series.csv", report.to_series_csv()),
    ])
}

fn derive_seed() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64)
}

fn fading(a: FadingArgs, diag: &mut dyn Write) -> Result<Vec<Output>> {
    let mut report = String::new();
    let mut outputs = Vec::new();

    let stream = if a.simulate {
        let seed = a.seed.unwrap_or_else(|| {
            let s = derive_seed();
            let _ = writeln!(diag, "seed: {s}");
            s
        });
        let cfg = MultipathConfig {
            n_paths: a.paths,
            velocity_mps: a.velocity_mps,
            fc_hz: a.fc_hz,
            omega: a.omega,
            max_delay_s: a.max_delay_s,
            seed,
        };
        let duration = a.duration.expect("clap requires --duration with --simulate");
        let stream = simulate_envelope(&cfg, duration, a.sample_rate_hz)?;
        report.push_str("source=simulated\n");
        report.push_str(&format!(
            "seed={seed}\npaths={}\nvelocity_mps={}\nfc_hz={}\nmax_doppler_hz={}\nomega_configured={}\n",
            cfg.n_paths,
            cfg.velocity_mps,
            cfg.fc_hz,
            cfg.max_doppler_hz(),
            cfg.omega
        ));
        if a.save_dat {
            outputs.push(Output::new(&a.out_dir, "fading_capture.dat", write_iq_dat(&stream)));
        }
        stream
    } else {
        let path = a.input.as_ref().expect("clap requires --input or --simulate");
        let bytes = fs::read(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        let stream = parse_iq_dat(&bytes, a.sample_rate_hz)?;
        report.push_str(&format!("source={}\n", path.display()));
        stream
    };
    report.push_str(&format!("sample_rate_hz={}\n", stream.sample_rate_hz()));

    let env = envelope(&stream);
    let fit = estimate_rayleigh_scale(&env)?;
    report.push_str(&fit.to_report_text());

    if a.detect_slots {
        let slots = detect_slots(&env, stream.sample_rate_hz(), a.threshold_fraction)?;
        outputs.push(Output::new(&a.out_dir, "fading_slots.txt", slots.to_report_text()));
    }
    outputs.push(Output::new(&a.out_dir, "fading_envelope.csv", envelope_csv(&env, stream.sample_rate_hz())));
    outputs.push(Output::new(&a.out_dir, "fading_pdf.csv", pdf_comparison_csv(&env, &fit, a.pdf_bins)?));
    outputs.push(Output::new(&a.out_dir, "fading_report.txt", report));
    Ok(outputs)
}

fn heatmap(a: HeatmapArgs) -> Result<Vec<Output>> {
    let samples = parse_measurement_csv(read_text(&a.input)?.as_bytes(), a.kind.into())?;
    let layer = HeatmapLayer::from_samples(&samples)?;
    Ok(vec![Output { path: a.output, bytes: export_heatmap(&layer, a.format.into()) }])
}
