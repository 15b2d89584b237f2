//! Command implementations behind the `albedo-bench` binary.
//!
//! Exit codes: 0 success, 2 validation failure (including non-comparable
//! reports), 3 prediction I/O failure, 4 configuration error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::dataset::{load_manifest, Measurement, PredictionSet};
use crate::error::{Error, Result};
use crate::imagecore::{adobe_linear_to_srgb_linear, read_linear_image, read_mask, write_exr, write_mask_png, write_png16, Transfer};
use crate::measure::{measure_region_albedo, GrayCardCapture, DEFAULT_PROXY_ALBEDO};
use crate::metrics::{ImageContext, MetricKind, MetricVector, ScaleTarget};
use crate::perceptual::{resolve_backend, BackendSpec};
use crate::ranking::Leaderboard;
use crate::report::{check_comparable, evaluate_sets, scatter_svg, BackendInfo, MetricTable, Report};
use crate::synthkit::{corrupt_prediction, generate_corpus, write_dataset, write_prediction_set, Corruption};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PREDICTION_IO: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "albedo-bench", version, about = "Evaluate intrinsic image decompositions against measured albedo")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and fully validate a manifest.
    Validate {
        manifest: PathBuf,
    },
    /// Measure a region albedo from a gray-card capture pair.
    Measure(MeasureArgs),
    /// Write blurred ground-truth shading and its metric mask per image.
    DeriveShading(DeriveShadingArgs),
    /// Score one or more prediction sets.
    Evaluate(EvaluateArgs),
    /// Rank algorithms by relative improvement.
    Rank(RankArgs),
    /// Generate a synthetic dataset and optional corrupted prediction sets.
    Synth(SynthArgs),
    /// Export CSV tables and scatter plots from reports.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Capture with the gray card in place.
    #[arg(long)]
    pub with_card: PathBuf,
    /// Capture of the bare surface.
    #[arg(long)]
    pub without_card: PathBuf,
    /// Mask of the card footprint (nonzero = card).
    #[arg(long)]
    pub mask: PathBuf,
    #[arg(long, default_value = "linear")]
    pub transfer: Transfer,
    /// Captures are linear Adobe RGB and are converted to linear sRGB first.
    #[arg(long)]
    pub adobe_rgb: bool,
    /// Reflectance of the card.
    #[arg(long, default_value_t = DEFAULT_PROXY_ALBEDO)]
    pub gray: f64,
    #[arg(long, default_value = "region")]
    pub id: String,
    /// Append the measurement to this manifest's scene (requires --scene).
    #[arg(long, requires = "scene")]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub scene: Option<String>,
}

#[derive(Debug, Args)]
pub struct DeriveShadingArgs {
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write 16-bit sRGB PNG previews.
    #[arg(long)]
    pub png: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub manifest: PathBuf,
    /// Prediction directories, each with an index.json.
    #[arg(required = true)]
    pub predictions: Vec<PathBuf>,
    /// Report path for a single prediction set, or a directory for several.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a per-image CSV next to each report.
    #[arg(long)]
    pub csv: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Evaluation reports over the same manifest.
    pub reports: Vec<PathBuf>,
    /// Metric table ({"rows": [...]}) to rank instead of, or alongside, reports.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Rank exactly these algorithms.
    #[arg(long, value_delimiter = ',')]
    pub include: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', default_value = "whdr,intensity,chromaticity,texture")]
    pub metrics: Vec<MetricKind>,
    /// Write the leaderboard as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write a scatter plot of `--plot`.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value = "whdr:intensity")]
    pub plot: String,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub scenes: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 384)]
    pub height: usize,
    #[arg(long, default_value_t = 6)]
    pub regions: usize,
    /// Corrupted prediction sets to emit, e.g. `tint=0.1,blur=2`. A ground
    /// truth set is always written.
    #[arg(long, value_delimiter = ',')]
    pub corrupt: Vec<Corruption>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub reports: Vec<PathBuf>,
    /// Per-image CSV of all reports.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value = "whdr:intensity")]
    pub plot: String,
}

/// Evaluation settings; unset flags keep the `--config` file's or the
/// built-in defaults.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// JSON file with RunConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Judgement ratio threshold [default: 0.1].
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Shading blur sigma in pixels [default: 8].
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Texture upsampling factor [default: 2].
    #[arg(long)]
    pub upsample: Option<usize>,
    /// Minimum texture rectangle side [default: 32].
    #[arg(long)]
    pub min_rect_side: Option<usize>,
    /// 8-bit saturation level [default: 250].
    #[arg(long)]
    pub saturation: Option<u8>,
    /// `builtin` or `external:<host:port>` [default: builtin].
    #[arg(long)]
    pub texture_backend: Option<BackendSpec>,
    /// Feed linear instead of sRGB-encoded crops to the texture backend.
    #[arg(long)]
    pub texture_linear: bool,
    /// `gt` or `pred` [default: gt].
    #[arg(long)]
    pub intensity_scale_target: Option<ScaleTargetArg>,
    /// `gt` or `pred` [default: pred].
    #[arg(long)]
    pub shading_scale_target: Option<ScaleTargetArg>,
    /// Worker threads, 0 = all cores [default: 0].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Metrics to compute [default: all].
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<MetricKind>>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ScaleTargetArg {
    Gt,
    Pred,
}

impl From<ScaleTargetArg> for ScaleTarget {
    fn from(s: ScaleTargetArg) -> Self {
        match s {
            ScaleTargetArg::Gt => ScaleTarget::Gt,
            ScaleTargetArg::Pred => ScaleTarget::Pred,
        }
    }
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.delta {
            c.delta = v;
        }
        if let Some(v) = self.sigma {
            c.sigma = v;
        }
        if let Some(v) = self.upsample {
            c.upsample = v;
        }
        if let Some(v) = self.min_rect_side {
            c.min_rect_side = v;
        }
        if let Some(v) = self.saturation {
            c.saturation_threshold = v;
        }
        if let Some(v) = &self.texture_backend {
            c.texture_backend = v.clone();
        }
        if self.texture_linear {
            c.texture_encode_srgb = false;
        }
        if let Some(v) = self.intensity_scale_target {
            c.intensity_scale_target = v.into();
        }
        if let Some(v) = self.shading_scale_target {
            c.shading_scale_target = v.into();
        }
        if let Some(v) = self.workers {
            c.workers = v;
        }
        if let Some(v) = &self.metrics {
            c.metrics = v.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: Error,
}

trait Stage<T> {
    fn stage(self, code: i32) -> std::result::Result<T, Failure>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, code: i32) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure { code, error })
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let r = match cli.command {
        Command::Validate { manifest } => cmd_validate(&manifest),
        Command::Measure(a) => cmd_measure(&a),
        Command::DeriveShading(a) => cmd_derive_shading(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Rank(a) => cmd_rank(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match r {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.error);
            f.code
        }
    }
}

fn cmd_validate(path: &Path) -> CmdResult {
    let m = load_manifest(path).stage(EXIT_VALIDATION)?;
    let measurements: usize = m.scenes.iter().map(|s| s.measurements.len()).sum();
    println!(
        "ok: {} scenes, {} measurements, {} images (sha256 {})",
        m.scenes.len(),
        measurements,
        m.image_count(),
        m.content_hash
    );
    Ok(())
}

fn cmd_measure(a: &MeasureArgs) -> CmdResult {
    let load = |p: &Path| -> Result<_> {
        let img = read_linear_image(p, a.transfer)?;
        Ok(if a.adobe_rgb {
            let conv = adobe_linear_to_srgb_linear(&img);
            if conv.clipped > 0 {
                eprintln!("warning: {} out-of-gamut channel values clipped in {}", conv.clipped, p.display());
            }
            conv.image
        } else {
            img
        })
    };
    let cap = GrayCardCapture {
        image_with_proxy: load(&a.with_card).stage(EXIT_VALIDATION)?,
        image_without_proxy: load(&a.without_card).stage(EXIT_VALIDATION)?,
        proxy_mask: read_mask(&a.mask).stage(EXIT_VALIDATION)?,
        proxy_albedo: a.gray,
    };
    let r = measure_region_albedo(&cap).stage(EXIT_VALIDATION)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let record = Measurement {
        measurement_id: a.id.clone(),
        albedo: r.albedo,
    };
    println!("{}", serde_json::to_string(&record).expect("measurement serializes"));
    if let (Some(path), Some(scene_id)) = (&a.manifest, &a.scene) {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e)).stage(EXIT_VALIDATION)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut m = crate::dataset::Manifest::from_json(&text, base, path).stage(EXIT_VALIDATION)?;
        let scene = m
            .scenes
            .iter_mut()
            .find(|s| &s.scene_id == scene_id)
            .ok_or_else(|| Error::Validation(vec![format!("no scene '{scene_id}' in {}", path.display())]))
            .stage(EXIT_VALIDATION)?;
        if scene.measurements.iter().any(|x| x.measurement_id == record.measurement_id) {
            return Err(Error::Validation(vec![format!(
                "scene '{scene_id}' already has measurement '{}'",
                record.measurement_id
            )]))
            .stage(EXIT_VALIDATION);
        }
        scene.measurements.push(record);
        m.save(path).stage(EXIT_VALIDATION)?;
    }
    Ok(())
}

fn cmd_derive_shading(a: &DeriveShadingArgs) -> CmdResult {
    let config = a.config.resolve().stage(EXIT_CONFIG)?;
    let m = load_manifest(&a.manifest).stage(EXIT_VALIDATION)?;
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e)).stage(EXIT_CONFIG)?;
    let mut written = 0;
    for (scene, record) in m.images() {
        let ctx = ImageContext::load(&m, scene, record, &config).stage(EXIT_VALIDATION)?;
        let Some(gt) = ctx.shading_gt else {
            eprintln!("warning: image '{}' has no measured regions; skipped", record.image_id);
            continue;
        };
        let id = &record.image_id;
        write_exr(&a.out.join(format!("{id}_shading.exr")), &gt.shading).stage(EXIT_CONFIG)?;
        write_mask_png(&a.out.join(format!("{id}_shading_mask.png")), &gt.mask).stage(EXIT_CONFIG)?;
        if a.png {
            write_png16(&a.out.join(format!("{id}_shading.png")), &gt.shading, Transfer::Srgb).stage(EXIT_CONFIG)?;
        }
        written += 1;
    }
    println!("wrote shading for {written} images to {}", a.out.display());
    Ok(())
}

fn cmd_evaluate(a: &EvaluateArgs) -> CmdResult {
    let config = a.config.resolve().stage(EXIT_CONFIG)?;
    let manifest = load_manifest(&a.manifest).stage(EXIT_VALIDATION)?;
    let sets = a
        .predictions
        .iter()
        .map(|p| PredictionSet::load(p))
        .collect::<Result<Vec<_>>>()
        .stage(EXIT_PREDICTION_IO)?;
    let resolved = resolve_backend(&config.texture_backend);
    if let Some(w) = &resolved.warning {
        eprintln!("warning: {w}");
    }
    let reports = evaluate_sets(
        &manifest,
        &sets,
        &config,
        BackendInfo {
            backend: resolved.backend.as_ref(),
            fallback_warning: resolved.warning.clone(),
        },
    )
    .stage(EXIT_CONFIG)?;

    let paths: Vec<PathBuf> = if reports.len() == 1 {
        vec![a.out.clone()]
    } else {
        std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e)).stage(EXIT_CONFIG)?;
        let mut names: Vec<String> = reports.iter().map(|r| sanitize(&r.algorithm)).collect();
        for i in 0..names.len() {
            if names[..i].contains(&names[i]) {
                names[i] = format!("{}_{i}", names[i]);
            }
        }
        names.iter().map(|n| a.out.join(format!("{n}.json"))).collect()
    };
    for (r, p) in reports.iter().zip(&paths) {
        r.save(p).stage(EXIT_CONFIG)?;
        if a.csv {
            let csv = p.with_extension("csv");
            std::fs::write(&csv, r.to_csv()).map_err(|e| Error::io(&csv, e)).stage(EXIT_CONFIG)?;
        }
        for w in &r.warnings {
            eprintln!("warning [{}]: {w}", r.algorithm);
        }
        print_aggregate(&r.aggregate, r.images.len());
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_+.".contains(c) { c } else { '_' })
        .collect()
}

fn print_aggregate(v: &MetricVector, n: usize) {
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.6}"));
    println!(
        "{}: {n} images  whdr {}  intensity {}  chromaticity {}  texture {}  shading {}",
        v.algorithm,
        fmt(v.whdr),
        fmt(v.intensity),
        fmt(v.chromaticity),
        fmt(v.texture),
        fmt(v.shading)
    );
}

fn parse_plot(spec: &str) -> Result<(MetricKind, MetricKind)> {
    let (x, y) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("plot must look like x:y, got '{spec}'")))?;
    Ok((x.parse()?, y.parse()?))
}

fn cmd_rank(a: &RankArgs) -> CmdResult {
    let plot = parse_plot(&a.plot).stage(EXIT_CONFIG)?;
    let reports = a
        .reports
        .iter()
        .map(|p| Report::load(p))
        .collect::<Result<Vec<_>>>()
        .stage(EXIT_VALIDATION)?;
    check_comparable(&reports).stage(EXIT_VALIDATION)?;
    let mut vectors: Vec<MetricVector> = reports.into_iter().map(|r| r.aggregate).collect();
    if let Some(t) = &a.table {
        vectors.extend(MetricTable::load(t).stage(EXIT_VALIDATION)?.rows);
    }
    let lb = Leaderboard::build(&vectors, &a.metrics, a.include.as_deref()).stage(EXIT_VALIDATION)?;
    print!("{}", lb.to_text());
    if let Some(p) = &a.json {
        let mut s = serde_json::to_string_pretty(&lb).expect("leaderboard serializes");
        s.push('\n');
        std::fs::write(p, s).map_err(|e| Error::io(p, e)).stage(EXIT_CONFIG)?;
    }
    if let Some(p) = &a.svg {
        let ranked: Vec<MetricVector> = lb.entries.iter().map(|e| e.scores.clone()).collect();
        let svg = scatter_svg(&ranked, plot.0, plot.1).stage(EXIT_CONFIG)?;
        std::fs::write(p, svg).map_err(|e| Error::io(p, e)).stage(EXIT_CONFIG)?;
    }
    Ok(())
}

fn cmd_synth(a: &SynthArgs) -> CmdResult {
    let scenes = generate_corpus(a.scenes, a.seed, a.width, a.height, a.regions).stage(EXIT_CONFIG)?;
    let manifest = write_dataset(&scenes, &a.out).stage(EXIT_CONFIG)?;
    let pred_root = a.out.join("predictions");
    let gt: Vec<_> = scenes.iter().map(|s| s.ground_truth()).collect();
    write_prediction_set(&pred_root.join("gt"), "ground-truth", &gt).stage(EXIT_CONFIG)?;
    for c in &a.corrupt {
        let preds = scenes
            .iter()
            .map(|s| corrupt_prediction(s, c.kind, c.magnitude))
            .collect::<Result<Vec<_>>>()
            .stage(EXIT_CONFIG)?;
        let name = format!("{}_{}", c.kind.name(), c.magnitude);
        write_prediction_set(&pred_root.join(&name), &c.to_string(), &preds).stage(EXIT_CONFIG)?;
    }
    println!(
        "wrote {} scenes and {} prediction sets to {}",
        manifest.scenes.len(),
        1 + a.corrupt.len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_report(a: &ReportArgs) -> CmdResult {
    let plot = parse_plot(&a.plot).stage(EXIT_CONFIG)?;
    let reports = a
        .reports
        .iter()
        .map(|p| Report::load(p))
        .collect::<Result<Vec<_>>>()
        .stage(EXIT_VALIDATION)?;
    for r in &reports {
        print_aggregate(&r.aggregate, r.images.len());
    }
    if let Some(p) = &a.csv {
        let mut csv = String::new();
        for (i, r) in reports.iter().enumerate() {
            let body = r.to_csv();
            csv.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |(_, rest)| rest) });
        }
        std::fs::write(p, csv).map_err(|e| Error::io(p, e)).stage(EXIT_CONFIG)?;
    }
    if let Some(p) = &a.svg {
        let vectors: Vec<MetricVector> = reports.iter().map(|r| r.aggregate.clone()).collect();
        let svg = scatter_svg(&vectors, plot.0, plot.1).stage(EXIT_CONFIG)?;
        std::fs::write(p, svg).map_err(|e| Error::io(p, e)).stage(EXIT_CONFIG)?;
    }
    Ok(())
}
