//! Synthetic Lambertian scenes `I = A·S` with exact ground truth.
//!
//! A scene is a guillotine partition of the frame. Most cells have a flat
//! albedo and carry one measured region, inset from the cell border so
//! unannotated pixels remain between regions. The remaining cells are
//! textured, unmeasured, and carry a constant-shading polygon; the shading
//! field is made exactly flat around those polygons.
//!
//! Albedo and shading values are representable in `f32`, so they survive an
//! EXR round trip unchanged. The rendered image is exact in memory and
//! rounded once when written.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::dataset::{
    resolve_region_masks, ImageRecord, Judgement, JudgementPair, Manifest, MaskSource, Measurement,
    PredictionEntry, PredictionIndex, PredictionSet, RegionAnnotation, Scene, MANIFEST_VERSION,
};
use crate::error::{Error, Result};
use crate::imagecore::{gaussian_blur, gray_value, rasterize_polygons, write_exr, LinearImage, PixelMask, Polygon, Transfer};
use crate::measure::{GrayCardCapture, DEFAULT_PROXY_ALBEDO};
use crate::metrics::{convert_judgement, AlgorithmPrediction, ImageContext};

const MIN_SIDE: usize = 32;
const ALBEDO_RANGE: (f64, f64) = (0.05, 0.9);
const SHADING_RANGE: (f64, f64) = (0.2, 1.4);
/// Judgement pairs whose ratio lies this close to `1 + δ` are not emitted.
const LABEL_MARGIN: f64 = 1e-3;
const JUDGEMENT_DELTA: f64 = 0.1;
/// Width of the smoothstep band around flat-shading zones.
const FLAT_BLEND: f64 = 12.0;
/// Flat-shading zones extend this far beyond their polygon's bounding box.
const FLAT_PAD: f64 = 3.0;

fn f32_exact(v: f64) -> f64 {
    v as f32 as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRegion {
    pub measurement_id: String,
    pub albedo: [f64; 3],
    pub polygon: Polygon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub seed: u64,
    pub scene_id: String,
    pub albedo: LinearImage,
    pub shading: LinearImage,
    pub image: LinearImage,
    pub regions: Vec<SyntheticRegion>,
    pub judgements: Vec<JudgementPair>,
    pub constant_shading_polygons: Vec<Polygon>,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x0: usize,
    y0: usize,
    w: usize,
    h: usize,
}

impl Cell {
    fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x0 + self.w && y >= self.y0 && y < self.y0 + self.h
    }
}

fn partition(rng: &mut ChaCha8Rng, width: usize, height: usize, n: usize) -> Result<Vec<Cell>> {
    let mut cells = vec![Cell {
        x0: 0,
        y0: 0,
        w: width,
        h: height,
    }];
    while cells.len() < n {
        let (i, _) = cells
            .iter()
            .enumerate()
            .max_by_key(|(i, c)| (c.w * c.h, usize::MAX - i))
            .expect("at least one cell");
        let c = cells[i];
        let f = rng.gen_range(0.35..0.65);
        let (a, b) = if c.w >= c.h {
            let cut = ((c.w as f64 * f).round() as usize).clamp(1, c.w - 1);
            (Cell { w: cut, ..c }, Cell { x0: c.x0 + cut, w: c.w - cut, ..c })
        } else {
            let cut = ((c.h as f64 * f).round() as usize).clamp(1, c.h - 1);
            (Cell { h: cut, ..c }, Cell { y0: c.y0 + cut, h: c.h - cut, ..c })
        };
        if a.w.min(a.h).min(b.w).min(b.h) < 8 {
            return Err(Error::Parameter(format!(
                "{width}x{height} is too small for {n} cells"
            )));
        }
        cells[i] = a;
        cells.push(b);
    }
    Ok(cells)
}

/// Cell rectangle inset by `inset`, with one corner cut off at random.
fn region_polygon(rng: &mut ChaCha8Rng, c: &Cell, inset: f64) -> Polygon {
    let (x0, y0) = (c.x0 as f64 + inset, c.y0 as f64 + inset);
    let (x1, y1) = ((c.x0 + c.w) as f64 - inset, (c.y0 + c.h) as f64 - inset);
    if !rng.gen_bool(0.5) {
        return Polygon::rect(x0, y0, x1, y1);
    }
    let cx = ((x1 - x0) * rng.gen_range(0.1..0.3)).floor();
    let cy = ((y1 - y0) * rng.gen_range(0.1..0.3)).floor();
    Polygon::new(vec![[x0 + cx, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0 + cy]]).expect("five finite vertices")
}

fn random_albedo(rng: &mut ChaCha8Rng) -> [f64; 3] {
    std::array::from_fn(|_| f32_exact(rng.gen_range(ALBEDO_RANGE.0..ALBEDO_RANGE.1)))
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

struct Bump {
    cx: f64,
    cy: f64,
    s: f64,
    amp: f64,
}

fn shading_field(
    rng: &mut ChaCha8Rng,
    width: usize,
    height: usize,
    flat_zones: &[[f64; 4]],
) -> Result<LinearImage> {
    let (w, h) = (width as f64, height as f64);
    let ramp = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let bumps: Vec<Bump> = (0..rng.gen_range(1..=4))
        .map(|_| Bump {
            cx: rng.gen_range(0.0..w),
            cy: rng.gen_range(0.0..h),
            s: rng.gen_range(0.2..0.5) * w.max(h),
            amp: rng.gen_range(-1.0..1.5),
        })
        .collect();
    let raw = |x: f64, y: f64| {
        let mut v = ramp[0] * x / w + ramp[1] * y / h;
        for b in &bumps {
            v += b.amp * (-((x - b.cx).powi(2) + (y - b.cy).powi(2)) / (2.0 * b.s * b.s)).exp();
        }
        v
    };
    let mut field: Vec<f64> = (0..width * height)
        .map(|i| raw((i % width) as f64 + 0.5, (i / width) as f64 + 0.5))
        .collect();
    let (lo, hi) = field.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    let span = (hi - lo).max(1e-9);
    field
        .iter_mut()
        .for_each(|v| *v = SHADING_RANGE.0 + (SHADING_RANGE.1 - SHADING_RANGE.0) * (*v - lo) / span);

    // Each pixel blends toward its nearest zone's level over FLAT_BLEND
    // pixels, so pixels inside a zone get exactly that level.
    let levels: Vec<f64> = flat_zones
        .iter()
        .map(|[zx0, zy0, zx1, zy1]| {
            let cx = (((zx0 + zx1) / 2.0) as usize).min(width - 1);
            let cy = (((zy0 + zy1) / 2.0) as usize).min(height - 1);
            field[cy * width + cx]
        })
        .collect();
    for (i, v) in field.iter_mut().enumerate() {
        let (px, py) = ((i % width) as f64 + 0.5, (i / width) as f64 + 0.5);
        let nearest = flat_zones
            .iter()
            .zip(&levels)
            .map(|([zx0, zy0, zx1, zy1], level)| {
                let dx = (zx0 - px).max(px - zx1).max(0.0);
                let dy = (zy0 - py).max(py - zy1).max(0.0);
                ((dx * dx + dy * dy).sqrt(), *level)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((d, level)) = nearest {
            let t = 1.0 - smoothstep(d / FLAT_BLEND);
            *v = *v * (1.0 - t) + level * t;
        }
    }

    let tint: [f64; 3] = if rng.gen_bool(0.5) {
        std::array::from_fn(|_| rng.gen_range(0.85..1.0))
    } else {
        [1.0; 3]
    };
    let data = field.iter().flat_map(|s| tint.map(|t| f32_exact(s * t))).collect();
    LinearImage::new(width, height, data)
}

fn textured_albedo(rng: &mut ChaCha8Rng, c: &Cell) -> impl Fn(usize, usize) -> [f64; 3] {
    let base = random_albedo(rng).map(|v| v.clamp(0.15, 0.7));
    let freq = [rng.gen_range(0.3..0.9), rng.gen_range(0.3..0.9)];
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let block = rng.gen_range(2..5usize);
    let seed: u64 = rng.gen();
    let (x0, y0) = (c.x0, c.y0);
    move |x, y| {
        let (lx, ly) = (x - x0, y - y0);
        let mut hash = ChaCha8Rng::seed_from_u64(seed ^ (((lx / block) as u64) << 32 | (ly / block) as u64));
        let noise: f64 = hash.gen_range(-0.25..0.25);
        let wave = 0.2 * (freq[0] * lx as f64 + freq[1] * ly as f64 + phase).sin();
        let p = 1.0 + wave + noise;
        base.map(|b| f32_exact((b * p).clamp(ALBEDO_RANGE.0, ALBEDO_RANGE.1)))
    }
}

fn pixel_center(x: usize, y: usize, width: usize, height: usize) -> [f64; 2] {
    [(x as f64 + 0.5) / width as f64, (y as f64 + 0.5) / height as f64]
}

fn near_threshold(g1: f64, g2: f64) -> bool {
    let t = 1.0 + JUDGEMENT_DELTA;
    (g2 / g1 - t).abs() < LABEL_MARGIN || (g1 / g2 - t).abs() < LABEL_MARGIN
}

/// Builds a scene deterministically from `seed`.
pub fn generate_scene(seed: u64, width: usize, height: usize, n_regions: usize) -> Result<SyntheticScene> {
    if n_regions == 0 {
        return Err(Error::Parameter("n_regions must be >= 1".into()));
    }
    if width < MIN_SIDE || height < MIN_SIDE {
        return Err(Error::Parameter(format!(
            "scene must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_textured = rng.gen_range(1..=2usize);
    let mut cells = partition(&mut rng, width, height, n_regions + n_textured)?;
    // Largest cells become textured so their rectangles survive the side limit.
    cells.sort_by_key(|c| std::cmp::Reverse(c.w * c.h));
    let (textured_cells, flat_cells) = cells.split_at(n_textured);

    let mut regions = Vec::with_capacity(n_regions);
    for (i, c) in flat_cells.iter().enumerate() {
        let inset = (c.w.min(c.h) as f64 / 8.0).floor().clamp(1.0, 3.0);
        regions.push(SyntheticRegion {
            measurement_id: format!("m{i:02}"),
            albedo: random_albedo(&mut rng),
            polygon: region_polygon(&mut rng, c, inset),
        });
    }

    let mut constant_shading_polygons = Vec::new();
    let mut flat_zones = Vec::new();
    let mut textures = Vec::new();
    for c in textured_cells {
        let inset = (c.w.min(c.h) as f64 / 8.0).floor().clamp(1.0, 4.0);
        let (x0, y0) = (c.x0 as f64 + inset, c.y0 as f64 + inset);
        let (x1, y1) = ((c.x0 + c.w) as f64 - inset, (c.y0 + c.h) as f64 - inset);
        constant_shading_polygons.push(Polygon::rect(x0, y0, x1, y1));
        flat_zones.push([x0 - FLAT_PAD, y0 - FLAT_PAD, x1 + FLAT_PAD, y1 + FLAT_PAD]);
        textures.push((*c, textured_albedo(&mut rng, c)));
    }

    let albedo = LinearImage::from_fn(width, height, |x, y| {
        if let Some(i) = flat_cells.iter().position(|c| c.contains(x, y)) {
            return regions[i].albedo;
        }
        let (_, tex) = textures.iter().find(|(c, _)| c.contains(x, y)).expect("cells tile the frame");
        tex(x, y)
    })?;
    let shading = shading_field(&mut rng, width, height, &flat_zones)?;
    let image = LinearImage::new(
        width,
        height,
        albedo.data().iter().zip(shading.data()).map(|(a, s)| a * s).collect(),
    )?;

    let masks = regions
        .iter()
        .map(|r| rasterize_polygons(std::slice::from_ref(&r.polygon), width, height))
        .collect::<Result<Vec<PixelMask>>>()?;
    let pixels: Vec<Vec<usize>> = masks.iter().map(|m| m.indices().collect()).collect();
    let target = (6 * n_regions * n_regions).clamp(8, 60);
    let mut judgements = Vec::with_capacity(target);
    let mut attempts = 0;
    while judgements.len() < target && attempts < target * 20 {
        attempts += 1;
        let (a, b) = (rng.gen_range(0..n_regions), rng.gen_range(0..n_regions));
        let pa = pixels[a][rng.gen_range(0..pixels[a].len())];
        let pb = pixels[b][rng.gen_range(0..pixels[b].len())];
        let (g1, g2) = (gray_value(regions[a].albedo), gray_value(regions[b].albedo));
        if near_threshold(g1, g2) {
            continue;
        }
        judgements.push(JudgementPair {
            p1: pixel_center(pa % width, pa / width, width, height),
            p2: pixel_center(pb % width, pb / width, width, height),
            label: convert_judgement(g1, g2, JUDGEMENT_DELTA),
            weight: rng.gen_range(0.5..1.5),
        });
    }

    Ok(SyntheticScene {
        seed,
        scene_id: format!("synth_{seed:016x}"),
        albedo,
        shading,
        image,
        regions,
        judgements,
        constant_shading_polygons,
    })
}

/// `n` scenes with seeds derived from `seed`, generated in parallel.
pub fn generate_corpus(n: usize, seed: u64, width: usize, height: usize, n_regions: usize) -> Result<Vec<SyntheticScene>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| generate_scene(seed.wrapping_mul(1_000_003).wrapping_add(i), width, height, n_regions))
        .collect()
}

impl SyntheticScene {
    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn measurements(&self) -> Vec<Measurement> {
        self.regions
            .iter()
            .map(|r| Measurement {
                measurement_id: r.measurement_id.clone(),
                albedo: r.albedo,
            })
            .collect()
    }

    /// Manifest record, with the image stored at `file`.
    pub fn image_record(&self, file: &Path) -> ImageRecord {
        ImageRecord {
            image_id: self.scene_id.clone(),
            file: file.to_path_buf(),
            transfer: Transfer::Linear,
            regions: self
                .regions
                .iter()
                .map(|r| RegionAnnotation {
                    measurement_id: r.measurement_id.clone(),
                    source: MaskSource::Polygons {
                        polygons: vec![r.polygon.clone()],
                    },
                })
                .collect(),
            judgements: self.judgements.clone(),
            constant_shading_polygons: self.constant_shading_polygons.clone(),
            specular_polygons: vec![],
        }
    }

    /// Evaluation context built in memory, without touching the disk.
    pub fn context(&self, config: &RunConfig) -> Result<ImageContext> {
        let record = self.image_record(Path::new(""));
        let regions = resolve_region_masks(&record, &self.measurements(), Path::new(""), self.width(), self.height())?;
        ImageContext::new(
            self.scene_id.clone(),
            self.image.clone(),
            regions,
            self.judgements.clone(),
            self.constant_shading_polygons.clone(),
            &[],
            config,
        )
    }

    /// The ground truth as a prediction.
    pub fn ground_truth(&self) -> AlgorithmPrediction {
        AlgorithmPrediction {
            image_id: self.scene_id.clone(),
            albedo: self.albedo.clone(),
            shading: Some(self.shading.clone()),
        }
    }

    /// Capture pair with an 18% card laid on region `region`: the card covers
    /// a centered square of the region's polygon and is rendered under the
    /// same shading.
    pub fn gray_card_capture(&self, region: usize) -> Result<GrayCardCapture> {
        let r = self
            .regions
            .get(region)
            .ok_or_else(|| Error::Parameter(format!("scene has no region {region}")))?;
        let (w, h) = (self.width(), self.height());
        let v = r.polygon.vertices();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for [x, y] in v {
            x0 = x0.min(*x);
            y0 = y0.min(*y);
            x1 = x1.max(*x);
            y1 = y1.max(*y);
        }
        let side = ((x1 - x0).min(y1 - y0) / 3.0).max(1.0);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let card = Polygon::rect(cx - side / 2.0, cy - side / 2.0, cx + side / 2.0, cy + side / 2.0);
        let region_mask = rasterize_polygons(std::slice::from_ref(&r.polygon), w, h)?;
        let proxy_mask = rasterize_polygons(&[card], w, h)?.and(&region_mask)?;
        if proxy_mask.is_empty() {
            return Err(Error::DegenerateInput(format!("region {region} too small for a card")));
        }
        let mut with = self.image.data().to_vec();
        let s = self.shading.data();
        for i in proxy_mask.indices() {
            for c in 0..3 {
                with[i * 3 + c] = DEFAULT_PROXY_ALBEDO * s[i * 3 + c];
            }
        }
        Ok(GrayCardCapture {
            image_with_proxy: LinearImage::new(w, h, with)?,
            image_without_proxy: self.image.clone(),
            proxy_mask,
            proxy_albedo: DEFAULT_PROXY_ALBEDO,
        })
    }
}

/// A prediction corruption with a known qualitative effect on the metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionKind {
    /// Albedo × (1 + m), shading ÷ (1 + m).
    Scale,
    /// Blue channel × (1 + m), then each pixel rescaled to its original gray.
    Tint,
    /// Gray pulled toward the image mean by a fraction m ∈ [0, 1].
    Contrast,
    /// Gaussian blur of width m pixels.
    Blur,
}

impl CorruptionKind {
    pub const ALL: [CorruptionKind; 4] = [
        CorruptionKind::Scale,
        CorruptionKind::Tint,
        CorruptionKind::Contrast,
        CorruptionKind::Blur,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorruptionKind::Scale => "scale",
            CorruptionKind::Tint => "tint",
            CorruptionKind::Contrast => "contrast",
            CorruptionKind::Blur => "blur",
        }
    }
}

impl FromStr for CorruptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorruptionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown corruption kind '{s}'")))
    }
}

/// `kind=magnitude`, as accepted by the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corruption {
    pub kind: CorruptionKind,
    pub magnitude: f64,
}

impl FromStr for Corruption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, m) = s
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("corruption must look like kind=magnitude, got '{s}'")))?;
        let magnitude: f64 = m
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad corruption magnitude '{m}'")))?;
        Ok(Corruption {
            kind: k.trim().parse()?,
            magnitude,
        })
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.kind.name(), self.magnitude)
    }
}

fn map_pixels(img: &LinearImage, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<LinearImage> {
    let data = img.pixels().flat_map(f).collect();
    LinearImage::new(img.width(), img.height(), data)
}

pub fn corrupt_prediction(scene: &SyntheticScene, kind: CorruptionKind, magnitude: f64) -> Result<AlgorithmPrediction> {
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(Error::Parameter(format!("corruption magnitude must be >= 0, got {magnitude}")));
    }
    if magnitude == 0.0 {
        return Ok(scene.ground_truth());
    }
    let a = &scene.albedo;
    let (albedo, shading) = match kind {
        CorruptionKind::Scale => {
            let c = 1.0 + magnitude;
            (a.scaled(c)?, Some(scene.shading.scaled(1.0 / c)?))
        }
        CorruptionKind::Tint => {
            let t = 1.0 + magnitude;
            let tinted = map_pixels(a, |p| {
                let q = [p[0], p[1], p[2] * t];
                let (g, gq) = (gray_value(p), gray_value(q));
                if gq > 0.0 {
                    q.map(|v| v * g / gq)
                } else {
                    q
                }
            })?;
            (tinted, None)
        }
        CorruptionKind::Contrast => {
            if magnitude > 1.0 {
                return Err(Error::Parameter(format!("contrast magnitude must lie in [0, 1], got {magnitude}")));
            }
            let n = (a.width() * a.height()) as f64;
            let mean = a.pixels().map(gray_value).sum::<f64>() / n;
            let flattened = map_pixels(a, |p| {
                let g = gray_value(p);
                let target = mean + (1.0 - magnitude) * (g - mean);
                if g > 0.0 {
                    p.map(|v| v * target / g)
                } else {
                    [target; 3]
                }
            })?;
            (flattened, None)
        }
        CorruptionKind::Blur => (gaussian_blur(a, magnitude)?, None),
    };
    Ok(AlgorithmPrediction {
        image_id: scene.scene_id.clone(),
        albedo,
        shading,
    })
}

/// Writes images and `manifest.json` under `dir`; returns the manifest.
pub fn write_dataset(scenes: &[SyntheticScene], dir: &Path) -> Result<Manifest> {
    let images = dir.join("images");
    std::fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;
    scenes.par_iter().try_for_each(|s| write_exr(&images.join(format!("{}.exr", s.scene_id)), &s.image))?;
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        scenes: scenes
            .iter()
            .map(|s| Scene {
                scene_id: s.scene_id.clone(),
                measurements: s.measurements(),
                images: vec![s.image_record(&Path::new("images").join(format!("{}.exr", s.scene_id)))],
            })
            .collect(),
        base_dir: dir.to_path_buf(),
        content_hash: String::new(),
    };
    manifest.save(&dir.join("manifest.json"))?;
    Ok(manifest)
}

/// Writes a prediction directory with an index.
pub fn write_prediction_set(dir: &Path, algorithm: &str, predictions: &[AlgorithmPrediction]) -> Result<PredictionSet> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let entries = predictions
        .par_iter()
        .map(|p| {
            let albedo_file = format!("{}_albedo.exr", p.image_id);
            write_exr(&dir.join(&albedo_file), &p.albedo)?;
            let shading_file = match &p.shading {
                Some(s) => {
                    let f = format!("{}_shading.exr", p.image_id);
                    write_exr(&dir.join(&f), s)?;
                    Some(f.into())
                }
                None => None,
            };
            Ok((
                p.image_id.clone(),
                PredictionEntry {
                    albedo_file: albedo_file.into(),
                    transfer: Transfer::Linear,
                    shading_transfer: shading_file.as_ref().map(|_| Transfer::Linear),
                    shading_file,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let set = PredictionSet {
        dir: dir.to_path_buf(),
        index: PredictionIndex {
            algorithm: algorithm.to_string(),
            predictions: entries,
        },
    };
    set.save()?;
    Ok(set)
}

/// True when every judgement label equals the conversion of the true albedo.
pub fn labels_consistent(scene: &SyntheticScene) -> bool {
    let gray = crate::imagecore::to_grayscale(&scene.albedo);
    let (w, h) = (scene.width(), scene.height());
    scene.judgements.iter().all(|j| {
        let ((x1, y1), (x2, y2)) = j.pixels(w, h);
        convert_judgement(gray.get(x1, y1), gray.get(x2, y2), JUDGEMENT_DELTA) == j.label
    })
}

/// Counts of each judgement label, for diagnostics.
pub fn label_histogram(judgements: &[JudgementPair]) -> [usize; 3] {
    let mut out = [0; 3];
    for j in judgements {
        out[match j.label {
            Judgement::Equal => 0,
            Judgement::FirstDarker => 1,
            Judgement::SecondDarker => 2,
        }] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::measure_region_albedo;

    #[test]
    fn deterministic() {
        let a = generate_scene(7, 96, 64, 4).unwrap();
        let b = generate_scene(7, 96, 64, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.albedo, generate_scene(8, 96, 64, 4).unwrap().albedo);
    }

    #[test]
    fn render_and_ranges() {
        let s = generate_scene(3, 128, 96, 5).unwrap();
        for ((i, a), sh) in s.image.data().iter().zip(s.albedo.data()).zip(s.shading.data()) {
            assert_eq!(*i, a * sh);
            assert!((0.05..=0.9).contains(a));
            assert!((0.1..=1.5).contains(sh));
        }
        assert_eq!(s.regions.len(), 5);
        assert!(!s.constant_shading_polygons.is_empty());
        assert!(labels_consistent(&s));
    }

    #[test]
    fn shading_is_flat_on_constant_polygons() {
        let s = generate_scene(11, 160, 120, 3).unwrap();
        let m = rasterize_polygons(&s.constant_shading_polygons, 160, 120).unwrap();
        let first = m.indices().next().unwrap();
        let level = &s.shading.data()[first * 3..first * 3 + 3];
        for i in m.indices() {
            assert_eq!(&s.shading.data()[i * 3..i * 3 + 3], level);
        }
    }

    #[test]
    fn gray_card_recovers_albedo() {
        let s = generate_scene(5, 128, 96, 3).unwrap();
        for r in 0..3 {
            let cap = s.gray_card_capture(r).unwrap();
            let got = measure_region_albedo(&cap).unwrap().albedo;
            for c in 0..3 {
                assert!((got[c] - s.regions[r].albedo[c]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn corruption_parsing() {
        let c: Corruption = "tint=0.2".parse().unwrap();
        assert_eq!((c.kind, c.magnitude), (CorruptionKind::Tint, 0.2));
        assert!("warp=1".parse::<Corruption>().is_err());
        assert!("blur".parse::<Corruption>().is_err());
        let s = generate_scene(1, 64, 48, 2).unwrap();
        assert!(corrupt_prediction(&s, CorruptionKind::Contrast, 1.5).is_err());
        assert_eq!(corrupt_prediction(&s, CorruptionKind::Blur, 0.0).unwrap().albedo, s.albedo);
    }

    #[test]
    fn tint_preserves_gray() {
        let s = generate_scene(2, 64, 48, 2).unwrap();
        let p = corrupt_prediction(&s, CorruptionKind::Tint, 0.3).unwrap();
        for (a, b) in p.albedo.pixels().zip(s.albedo.pixels()) {
            assert!((gray_value(a) - gray_value(b)).abs() < 1e-15);
        }
    }
}
