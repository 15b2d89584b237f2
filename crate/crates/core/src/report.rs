//! Evaluation runs and their machine-readable outputs.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dataset::{Manifest, PredictionSet};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_image, ImageContext, ImageMetrics, MetricEntry, MetricKind, MetricVector, SkipReason};
use crate::perceptual::PerceptualDistance;

pub const TOOLKIT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub toolkit: String,
    pub version: String,
    pub algorithm: String,
    /// SHA-256 of the manifest the report was computed on.
    pub manifest_hash: String,
    pub config: RunConfig,
    /// Backend that actually computed texture distances.
    pub texture_backend_id: String,
    /// True when the configured texture backend was replaced by the builtin one.
    pub texture_backend_fallback: bool,
    /// Sorted by `image_id`.
    pub images: Vec<ImageMetrics>,
    /// Manifest images without a prediction.
    pub missing: Vec<String>,
    pub aggregate: MetricVector,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// One row per image, one column per metric; absent values are empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("algorithm,image_id");
        for k in MetricKind::ALL {
            let _ = write!(s, ",{}", k.name());
        }
        s.push_str(",derived_shading,resampled\n");
        for m in &self.images {
            let _ = write!(s, "{},{}", csv_field(&self.algorithm), csv_field(&m.image_id));
            for k in MetricKind::ALL {
                match m.get(k).value {
                    Some(v) => {
                        let _ = write!(s, ",{v}");
                    }
                    None => s.push(','),
                }
            }
            let _ = writeln!(s, ",{},{}", m.derived_shading, m.resampled);
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn failed_metrics(image_id: &str, detail: String) -> ImageMetrics {
    let e = MetricEntry {
        value: None,
        skip_reason: Some(SkipReason::EvaluationError),
        detail: Some(detail),
    };
    ImageMetrics {
        image_id: image_id.to_string(),
        whdr: e.clone(),
        intensity_si_mse: e.clone(),
        chroma_error: e.clone(),
        texture_error: e.clone(),
        shading_si_mse: e,
        derived_shading: false,
        resampled: false,
        intensity_scale: None,
        shading_scale: None,
        chroma_degenerate_regions: 0,
        texture_rectangles: 0,
    }
}

enum Outcome {
    Scored(ImageMetrics),
    Missing,
}

/// Texture backend plus how it was obtained, for the report header.
pub struct BackendInfo<'a> {
    pub backend: &'a dyn PerceptualDistance,
    pub fallback_warning: Option<String>,
}

/// Evaluates several prediction sets against one manifest. Each image's
/// context is built once and shared by all sets; images run in parallel
/// and results are reduced in `image_id` order.
pub fn evaluate_sets(
    manifest: &Manifest,
    sets: &[PredictionSet],
    config: &RunConfig,
    backend: BackendInfo<'_>,
) -> Result<Vec<Report>> {
    config.validate()?;
    let mut records: Vec<_> = manifest.images().collect();
    records.sort_by(|a, b| a.1.image_id.cmp(&b.1.image_id));

    let work = || {
        records
            .par_iter()
            .map(|(scene, record)| {
                let ctx = ImageContext::load(manifest, scene, record, config);
                sets.iter()
                    .map(|set| match set.load_prediction(&record.image_id) {
                        Ok(None) => Outcome::Missing,
                        Ok(Some(pred)) => match &ctx {
                            Ok(ctx) => Outcome::Scored(evaluate_image(ctx, &pred, config, backend.backend)),
                            Err(e) => Outcome::Scored(failed_metrics(&record.image_id, format!("annotation: {e}"))),
                        },
                        Err(e) => Outcome::Scored(failed_metrics(&record.image_id, format!("prediction: {e}"))),
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let per_image = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?
            .install(work)
    } else {
        work()
    };

    let mut reports = Vec::with_capacity(sets.len());
    for (s, set) in sets.iter().enumerate() {
        let mut images = Vec::new();
        let mut missing = Vec::new();
        let mut warnings: Vec<String> = backend.fallback_warning.iter().cloned().collect();
        for ((_, record), outcomes) in records.iter().zip(&per_image) {
            match &outcomes[s] {
                Outcome::Missing => missing.push(record.image_id.clone()),
                Outcome::Scored(m) => {
                    if let Some(d) = MetricKind::ALL.iter().find_map(|k| {
                        let e = m.get(*k);
                        (e.skip_reason == Some(SkipReason::EvaluationError)).then(|| e.detail.clone())
                    }) {
                        warnings.push(format!(
                            "image '{}': {}",
                            m.image_id,
                            d.unwrap_or_else(|| "evaluation error".into())
                        ));
                    }
                    images.push(m.clone());
                }
            }
        }
        if !missing.is_empty() {
            warnings.push(format!(
                "{} of {} images have no prediction: {}",
                missing.len(),
                records.len(),
                missing.join(", ")
            ));
        }
        for set_id in set.index.predictions.keys() {
            if manifest.find_image(set_id).is_none() {
                warnings.push(format!("prediction for unknown image '{set_id}' ignored"));
            }
        }
        let aggregate = MetricVector::aggregate(set.algorithm(), &images);
        reports.push(Report {
            toolkit: TOOLKIT.to_string(),
            version: VERSION.to_string(),
            algorithm: set.algorithm().to_string(),
            manifest_hash: manifest.content_hash.clone(),
            config: config.clone(),
            texture_backend_id: backend.backend.id(),
            texture_backend_fallback: backend.fallback_warning.is_some(),
            images,
            missing,
            aggregate,
            warnings,
        });
    }
    Ok(reports)
}

/// Aggregate rows read from a plain metric table:
/// `{"rows": [{"algorithm": "...", "whdr": 19.5, ...}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub rows: Vec<MetricVector>,
}

impl MetricTable {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Refuses reports computed on different manifests.
pub fn check_comparable(reports: &[Report]) -> Result<()> {
    if let Some(first) = reports.first() {
        let odd: Vec<String> = reports
            .iter()
            .filter(|r| r.manifest_hash != first.manifest_hash)
            .map(|r| format!("'{}' ({})", r.algorithm, r.manifest_hash))
            .collect();
        if !odd.is_empty() {
            return Err(Error::Validation(vec![format!(
                "reports are not comparable: '{}' used manifest {} but {} differ",
                first.algorithm,
                first.manifest_hash,
                odd.join(", ")
            )]));
        }
    }
    Ok(())
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 480.0;
const MARGIN: f64 = 64.0;

fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.08 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Scatter plot of two aggregate metrics with one labelled point per
/// algorithm. Algorithms lacking either metric are left out.
pub fn scatter_svg(vectors: &[MetricVector], x: MetricKind, y: MetricKind) -> Result<String> {
    let points: Vec<(&str, f64, f64)> = vectors
        .iter()
        .filter_map(|v| Some((v.algorithm.as_str(), v.get(x)?, v.get(y)?)))
        .collect();
    if points.is_empty() {
        return Err(Error::Parameter(format!(
            "no algorithm has both '{}' and '{}'",
            x.name(),
            y.name()
        )));
    }
    let (x0, x1) = axis_range(points.iter().map(|p| p.1));
    let (y0, y1) = axis_range(points.iter().map(|p| p.2));
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (SVG_W - 2.0 * MARGIN);
    let py = |v: f64| SVG_H - MARGIN - (v - y0) / (y1 - y0) * (SVG_H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, SVG_W - MARGIN, MARGIN, SVG_H - MARGIN);
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black"><line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/><line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}"/></g>"#
    );
    let _ = writeln!(s, r#"<g class="ticks">"#);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (vx, vy) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{bottom}" x2="{0:.1}" y2="{1}" stroke="black"/><text x="{0:.1}" y="{2}" text-anchor="middle">{3:.3}</text>"#,
            px(vx),
            bottom + 4.0,
            bottom + 16.0,
            vx
        );
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{0:.1}" x2="{1}" y2="{0:.1}" stroke="black"/><text x="{2}" y="{3:.1}" text-anchor="end">{4:.3}</text>"#,
            py(vy),
            left - 4.0,
            left - 6.0,
            py(vy) + 4.0,
            vy
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        SVG_W / 2.0,
        SVG_H - 20.0,
        x.name()
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="18" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        SVG_H / 2.0,
        SVG_H / 2.0,
        y.name()
    );
    let _ = writeln!(s, r#"<g class="points">"#);
    for (name, vx, vy) in &points {
        let (cx, cy) = (px(*vx), py(*vy));
        let name = xml_escape(name);
        let _ = writeln!(
            s,
            r#"<g class="point" data-algorithm="{name}"><circle cx="{cx:.1}" cy="{cy:.1}" r="4" fill="steelblue"/><text x="{:.1}" y="{:.1}">{name}</text></g>"#,
            cx + 6.0,
            cy - 6.0
        );
    }
    let _ = writeln!(s, "</g>\n</svg>");
    Ok(s)
}
