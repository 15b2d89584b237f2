use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::imagecore::{image_dimensions, read_mask, Polygon, Transfer};

use super::regions::resolve_region_masks;

pub const MANIFEST_VERSION: u32 = 1;

/// Upper bound on a measured albedo channel.
pub const MAX_ALBEDO: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub scenes: Vec<Scene>,
    /// Directory relative file paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
    /// SHA-256 of the manifest bytes, hex encoded.
    #[serde(skip)]
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub scene_id: String,
    pub measurements: Vec<Measurement>,
    pub images: Vec<ImageRecord>,
}

/// One gray-card measured albedo in linear sRGB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub measurement_id: String,
    pub albedo: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub image_id: String,
    pub file: PathBuf,
    pub transfer: Transfer,
    #[serde(default)]
    pub regions: Vec<RegionAnnotation>,
    #[serde(default)]
    pub judgements: Vec<JudgementPair>,
    #[serde(default)]
    pub constant_shading_polygons: Vec<Polygon>,
    #[serde(default)]
    pub specular_polygons: Vec<Polygon>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAnnotation {
    pub measurement_id: String,
    #[serde(flatten)]
    pub source: MaskSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaskSource {
    Polygons { polygons: Vec<Polygon> },
    MaskFile { mask_file: PathBuf },
}

/// Relative-reflectance label; `FirstDarker` means point 1 has the darker albedo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Judgement {
    #[serde(rename = "E")]
    Equal,
    #[serde(rename = "1")]
    FirstDarker,
    #[serde(rename = "2")]
    SecondDarker,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgementPair {
    /// Normalized (x, y) in [0, 1]².
    pub p1: [f64; 2],
    pub p2: [f64; 2],
    pub label: Judgement,
    pub weight: f64,
}

fn nearest_pixel(p: [f64; 2], width: usize, height: usize) -> (usize, usize) {
    let x = ((p[0] * width as f64).floor().max(0.0) as usize).min(width - 1);
    let y = ((p[1] * height as f64).floor().max(0.0) as usize).min(height - 1);
    (x, y)
}

impl JudgementPair {
    /// Pixel indices of both points at the given resolution.
    pub fn pixels(&self, width: usize, height: usize) -> ((usize, usize), (usize, usize)) {
        (
            nearest_pixel(self.p1, width, height),
            nearest_pixel(self.p2, width, height),
        )
    }
}

impl Manifest {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn images(&self) -> impl Iterator<Item = (&Scene, &ImageRecord)> {
        self.scenes.iter().flat_map(|s| s.images.iter().map(move |i| (s, i)))
    }

    pub fn find_image(&self, image_id: &str) -> Option<(&Scene, &ImageRecord)> {
        self.images().find(|(_, i)| i.image_id == image_id)
    }

    pub fn image_count(&self) -> usize {
        self.scenes.iter().map(|s| s.images.len()).sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Parses manifest text without touching the filesystem.
    pub fn from_json(text: &str, base_dir: &Path, source: &Path) -> Result<Self> {
        let mut m: Manifest = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: source.to_path_buf(),
            message: e.to_string(),
        })?;
        m.base_dir = base_dir.to_path_buf();
        m.content_hash = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(m)
    }

    /// Checks every invariant and returns all violations at once.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.version != MANIFEST_VERSION {
            errs.push(format!(
                "unsupported manifest version {} (expected {MANIFEST_VERSION})",
                self.version
            ));
        }
        let mut scene_ids = HashSet::new();
        let mut image_ids = HashSet::new();
        for scene in &self.scenes {
            let sid = &scene.scene_id;
            if sid.is_empty() {
                errs.push("scene with empty scene_id".into());
            }
            if !scene_ids.insert(sid.as_str()) {
                errs.push(format!("duplicate scene_id '{sid}'"));
            }
            let mut meas_ids = HashSet::new();
            for m in &scene.measurements {
                if !meas_ids.insert(m.measurement_id.as_str()) {
                    errs.push(format!("scene '{sid}': duplicate measurement_id '{}'", m.measurement_id));
                }
                if m.albedo.iter().any(|v| !(v.is_finite() && *v > 0.0 && *v <= MAX_ALBEDO)) {
                    errs.push(format!(
                        "scene '{sid}': measurement '{}' albedo {:?} outside (0, {MAX_ALBEDO}]",
                        m.measurement_id, m.albedo
                    ));
                }
            }
            for img in &scene.images {
                let iid = &img.image_id;
                let ctx = format!("scene '{sid}', image '{iid}'");
                if !image_ids.insert(iid.as_str()) {
                    errs.push(format!("{ctx}: duplicate image_id"));
                }
                self.validate_image(scene, img, &ctx, &mut errs);
            }
        }
        errs
    }

    fn validate_image(&self, scene: &Scene, img: &ImageRecord, ctx: &str, errs: &mut Vec<String>) {
        let mut polygons_ok = true;
        for (i, r) in img.regions.iter().enumerate() {
            if !scene.measurements.iter().any(|m| m.measurement_id == r.measurement_id) {
                errs.push(format!("{ctx}: region {i} references unknown measurement_id '{}'", r.measurement_id));
                polygons_ok = false;
            }
            if let MaskSource::Polygons { polygons } = &r.source {
                for e in polygons.iter().filter_map(|p| p.validate().err()) {
                    errs.push(format!("{ctx}: region {i}: {e}"));
                    polygons_ok = false;
                }
            }
        }
        for (kind, list) in [
            ("constant-shading", &img.constant_shading_polygons),
            ("specular", &img.specular_polygons),
        ] {
            for e in list.iter().filter_map(|p| p.validate().err()) {
                errs.push(format!("{ctx}: {kind} polygon: {e}"));
            }
        }
        for (i, j) in img.judgements.iter().enumerate() {
            if j.p1.iter().chain(&j.p2).any(|v| !(0.0..=1.0).contains(v)) {
                errs.push(format!("{ctx}: judgement {i} has coordinates outside [0, 1]"));
            }
            if !(j.weight.is_finite() && j.weight >= 0.0) {
                errs.push(format!("{ctx}: judgement {i} has invalid weight {}", j.weight));
            }
        }

        let path = self.resolve(&img.file);
        let dims = match image_dimensions(&path) {
            Ok(d) => d,
            Err(e) => {
                errs.push(format!("{ctx}: cannot read image {}: {e}", path.display()));
                return;
            }
        };
        for (i, r) in img.regions.iter().enumerate() {
            if let MaskSource::MaskFile { mask_file } = &r.source {
                match read_mask(&self.resolve(mask_file)) {
                    Ok(m) if m.dims() != dims => errs.push(format!(
                        "{ctx}: region {i} mask {:?} does not match image size {:?}",
                        m.dims(),
                        dims
                    )),
                    Ok(_) => {}
                    Err(e) => {
                        errs.push(format!("{ctx}: region {i} mask: {e}"));
                        polygons_ok = false;
                    }
                }
            }
        }
        if polygons_ok {
            if let Err(e) = resolve_region_masks(img, &scene.measurements, &self.base_dir, dims.0, dims.1) {
                errs.push(format!("{ctx}: {e}"));
            }
        }
    }
}

/// Reads, parses and fully validates a manifest file.
pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let m = Manifest::from_json(&text, &base, path)?;
    let errs = m.validate();
    if errs.is_empty() {
        Ok(m)
    } else {
        Err(Error::Validation(errs))
    }
}
