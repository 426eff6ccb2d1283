//! `specprint` command-line front end.
//!
//! Exit codes: 0 on success, 1 on data or runtime errors, 2 on usage
//! errors. Standard output carries one JSON status line
//! `{"ok":bool,"outputs":[...]}`; diagnostics go to standard error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::fingerprint::compare;
use crate::ingest::{build_manifest, load_gray, DatasetManifest, SetLabel, DEFAULT_ANALYSIS_SIZE};
use crate::metrics::{aggregate_all, write_csv};
use crate::pipeline::{
    field_maps, fingerprint, manifest_set_maps, pair_metrics, AnalysisConfig, ConfigRecord,
    SetMaps, Source, DEFAULT_CROP,
};
use crate::render::{heatmap_png, write_matrix, write_report, write_text, Report};
use crate::residual::DenoiserSpec;
use crate::spectral::{central_crop, log_normalize};

#[derive(Debug, Parser)]
#[command(
    name = "specprint",
    version,
    about = "Noise-residual spectral forensics for image sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan real and generated directories into a manifest.
    Ingest(IngestArgs),
    /// Pairwise fidelity metrics for stem-matched pairs.
    Metrics(MetricsArgs),
    /// Averaged power and phase spectra per set.
    Spectrum(SpectrumArgs),
    /// Averaged autocorrelation per set, cropped around zero lag.
    Autocorr(SpectrumArgs),
    /// Fingerprint statistics for both sets and their comparison.
    Fingerprint(FingerprintArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_name = "DIR")]
    pub real: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub fake: PathBuf,
    #[arg(long, value_name = "TAG")]
    pub generator: String,
    #[arg(long, value_name = "LEVEL", value_parser = parse_noise)]
    pub noise: Option<f64>,
    #[arg(long, value_name = "PIXELS", default_value_t = DEFAULT_ANALYSIS_SIZE, value_parser = parse_size)]
    pub size: usize,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Analysis resolution; defaults to the manifest's.
    #[arg(long, value_name = "PIXELS", value_parser = parse_size)]
    pub size: Option<usize>,
    /// identity | gaussian:<sigma> | median:<radius>
    #[arg(long, value_name = "SPEC", default_value = "gaussian:1", value_parser = parse_denoiser)]
    pub denoiser: DenoiserSpec,
    /// Odd side of the autocorrelation crop.
    #[arg(long, value_name = "SIDE", default_value_t = DEFAULT_CROP, value_parser = parse_crop)]
    pub crop: usize,
    #[arg(long, value_name = "N", env = "SPECPRINT_THREADS", value_parser = parse_threads)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = SourceArg::Residual)]
    pub source: SourceArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Residual,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Real,
    Fake,
    Both,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(
        long,
        value_name = "PATH",
        required_unless_present = "single",
        conflicts_with = "single"
    )]
    pub manifest: Option<PathBuf>,
    /// Analyse one image file instead of a manifest set.
    #[arg(long, value_name = "PATH")]
    pub single: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SetArg::Both)]
    pub set: SetArg,
    #[arg(long, value_name = "PATH")]
    pub out_prefix: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct FingerprintArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

fn parse_noise(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if [0.0, 0.25, 0.5, 0.75].contains(&v) => Ok(v),
        _ => Err("noise level must be one of 0.0, 0.25, 0.5, 0.75".into()),
    }
}

fn parse_size(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 2 => Ok(v),
        _ => Err("size must be an integer >= 2".into()),
    }
}

fn parse_crop(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v % 2 == 1 => Ok(v),
        _ => Err("crop must be an odd positive integer".into()),
    }
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err("threads must be an integer >= 1".into()),
    }
}

fn parse_denoiser(s: &str) -> Result<DenoiserSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome = Result<Vec<PathBuf>, Failure>;

#[derive(Serialize)]
struct Status<'a> {
    ok: bool,
    outputs: Vec<&'a str>,
}

fn print_status(ok: bool, outputs: &[PathBuf]) {
    let outputs: Vec<String> = outputs.iter().map(|p| p.display().to_string()).collect();
    let status = Status {
        ok,
        outputs: outputs.iter().map(String::as_str).collect(),
    };
    println!(
        "{}",
        serde_json::to_string(&status).expect("status serializes")
    );
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code != 0 {
                print_status(false, &[]);
            }
            return code;
        }
    };
    let threads = match &cli.command {
        Command::Ingest(_) => None,
        Command::Metrics(a) => a.run.threads,
        Command::Spectrum(a) | Command::Autocorr(a) => a.run.threads,
        Command::Fingerprint(a) => a.run.threads,
    };
    let threads =
        threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("specprint: cannot start worker pool: {e}");
            print_status(false, &[]);
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(outputs) => {
            print_status(true, &outputs);
            0
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("specprint: usage: {msg}");
            print_status(false, &[]);
            2
        }
        Err(Failure::Run(e)) => {
            eprintln!("specprint: {e}");
            print_status(false, &[]);
            1
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Autocorr(a) => cmd_autocorr(a),
        Command::Fingerprint(a) => cmd_fingerprint(a),
    }
}

/// Builds the analysis settings. The crop side is only checked against the
/// analysis size for commands that crop.
fn analysis_config(
    run: &RunArgs,
    manifest_size: Option<usize>,
    crops: bool,
) -> Result<AnalysisConfig, Failure> {
    let config = AnalysisConfig {
        analysis_size: run.size.or(manifest_size).unwrap_or(DEFAULT_ANALYSIS_SIZE),
        denoiser: run.denoiser,
        crop: run.crop,
        source: match run.source {
            SourceArg::Residual => Source::Residual,
            SourceArg::Raw => Source::Raw,
        },
    };
    if crops {
        config
            .validate()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(config)
}

fn cmd_ingest(a: IngestArgs) -> Outcome {
    let manifest = build_manifest(&a.real, &a.fake, &a.generator, a.noise, a.size)?;
    manifest.save(&a.out)?;
    Ok(vec![a.out])
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct AggregateFile<'a> {
    pairs: usize,
    aggregates: &'a [crate::metrics::AggregateStats],
}

fn cmd_metrics(a: MetricsArgs) -> Outcome {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let config = analysis_config(&a.run, Some(manifest.analysis_size), false)?;
    let records = pair_metrics(&manifest, config.analysis_size)?;
    let mut csv = Vec::new();
    write_csv(&records, &mut csv).map_err(|e| Error::io(&a.out, e))?;
    write_text(&a.out, &String::from_utf8(csv).expect("csv is utf-8"))?;

    let aggregates = aggregate_all(&records)?;
    let agg_path = sibling(&a.out, ".agg.json");
    let mut text = serde_json::to_string_pretty(&AggregateFile {
        pairs: records.len(),
        aggregates: &aggregates,
    })
    .map_err(Error::from)?;
    text.push('\n');
    write_text(&agg_path, &text)?;
    Ok(vec![a.out, agg_path])
}

/// Analysis settings plus `(file tag, maps)` for each selected set.
type Selection = (AnalysisConfig, Vec<(&'static str, SetMaps)>);

/// The sets a spectrum/autocorr invocation covers.
fn selected_maps(a: &SpectrumArgs, crops: bool) -> Result<Selection, Failure> {
    if let Some(single) = &a.single {
        let config = analysis_config(&a.run, None, crops)?;
        let img = load_gray(single, config.analysis_size)?;
        let field = config.field(&img)?;
        let maps = field_maps(std::slice::from_ref(&field))?;
        return Ok((config, vec![("single", maps)]));
    }
    let manifest_path = a
        .manifest
        .as_ref()
        .expect("clap enforces --manifest or --single");
    let manifest = DatasetManifest::load(manifest_path)?;
    let config = analysis_config(&a.run, Some(manifest.analysis_size), crops)?;
    let sets: &[(&'static str, SetLabel)] = match a.set {
        SetArg::Real => &[("real", SetLabel::Real)],
        SetArg::Fake => &[("fake", SetLabel::Generated)],
        SetArg::Both => &[("real", SetLabel::Real), ("fake", SetLabel::Generated)],
    };
    let mut out = Vec::with_capacity(sets.len());
    for &(tag, label) in sets {
        out.push((tag, manifest_set_maps(&manifest, label, &config)?));
    }
    Ok((config, out))
}

fn cmd_spectrum(a: SpectrumArgs) -> Outcome {
    let (_, sets) = selected_maps(&a, false)?;
    let mut outputs = Vec::new();
    for (tag, maps) in &sets {
        let base = sibling(&a.out_prefix, &format!(".{tag}"));
        let power_mat = sibling(&base, ".power.mat");
        let power_png = sibling(&base, ".power.png");
        let phase_mat = sibling(&base, ".phase.mat");
        let phase_png = sibling(&base, ".phase.png");
        write_matrix(&maps.power, &power_mat)?;
        heatmap_png(&log_normalize(&maps.power), &power_png)?;
        write_matrix(&maps.phase, &phase_mat)?;
        heatmap_png(&maps.phase, &phase_png)?;
        outputs.extend([power_mat, power_png, phase_mat, phase_png]);
    }
    Ok(outputs)
}

fn cmd_autocorr(a: SpectrumArgs) -> Outcome {
    let (config, sets) = selected_maps(&a, true)?;
    let mut outputs = Vec::new();
    for (tag, maps) in &sets {
        let crop = central_crop(&maps.autocorr, config.crop)?;
        let base = sibling(&a.out_prefix, &format!(".{tag}"));
        let mat = sibling(&base, ".autocorr.mat");
        let png = sibling(&base, ".autocorr.png");
        write_matrix(&crop, &mat)?;
        heatmap_png(&crop, &png)?;
        outputs.extend([mat, png]);
    }
    Ok(outputs)
}

fn cmd_fingerprint(a: FingerprintArgs) -> Outcome {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let config = analysis_config(&a.run, Some(manifest.analysis_size), false)?;
    let real = fingerprint(
        &manifest_set_maps(&manifest, SetLabel::Real, &config)?,
        SetLabel::Real.as_str(),
    )?;
    let generated = fingerprint(
        &manifest_set_maps(&manifest, SetLabel::Generated, &config)?,
        SetLabel::Generated.as_str(),
    )?;
    let comparison = compare(&real, &generated)?;

    let records = match pair_metrics(&manifest, config.analysis_size) {
        Ok(r) => r,
        Err(Error::NoPairs) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let aggregates = if records.is_empty() {
        Vec::new()
    } else {
        aggregate_all(&records)?
    };
    let report = Report {
        manifest: &manifest,
        metrics: &records,
        aggregates: &aggregates,
        fingerprints: &[real.summary, generated.summary],
        comparisons: &[comparison],
        config: &ConfigRecord::from(&config),
    };
    write_report(&report, &a.out)?;
    Ok(vec![a.out])
}
