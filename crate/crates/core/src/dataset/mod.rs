//! Manifest schema, validation and annotation resolution.
//!
//! A manifest is a JSON file:
//!
//! ```json
//! {
//!   "version": 1,
//!   "scenes": [{
//!     "scene_id": "kitchen",
//!     "measurements": [{ "measurement_id": "counter", "albedo": [0.41, 0.38, 0.33] }],
//!     "images": [{
//!       "image_id": "kitchen_000",
//!       "file": "images/kitchen_000.png",
//!       "transfer": "srgb",
//!       "regions": [
//!         { "measurement_id": "counter", "polygons": [[[10, 10], [200, 10], [200, 90]]] },
//!         { "measurement_id": "counter", "mask_file": "masks/kitchen_000_counter.png" }
//!       ],
//!       "judgements": [{ "p1": [0.1, 0.2], "p2": [0.5, 0.5], "label": "E", "weight": 0.9 }],
//!       "constant_shading_polygons": [[[30, 30], [120, 30], [120, 80], [30, 80]]],
//!       "specular_polygons": []
//!     }]
//!   }]
//! }
//! ```
//!
//! Relative paths resolve against the manifest's directory. Polygon
//! coordinates are pixels at the image's stored resolution. Judgement labels
//! are `"E"` (equal), `"1"` (point 1 darker) or `"2"` (point 2 darker).

mod manifest;
mod predictions;
mod regions;

pub use manifest::{
    load_manifest, ImageRecord, Judgement, JudgementPair, Manifest, MaskSource, Measurement,
    RegionAnnotation, Scene, MANIFEST_VERSION, MAX_ALBEDO,
};
pub use predictions::{PredictionEntry, PredictionIndex, PredictionSet, INDEX_FILE};
pub use regions::{paint_albedo, region_mean, resolve_region_masks, union_mask, ResolvedRegion};
