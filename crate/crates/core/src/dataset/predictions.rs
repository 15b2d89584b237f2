use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagecore::{read_linear_image, Transfer};
use crate::metrics::AlgorithmPrediction;

pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionEntry {
    pub albedo_file: PathBuf,
    pub transfer: Transfer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shading_file: Option<PathBuf>,
    /// Transfer of the shading file; linear when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shading_transfer: Option<Transfer>,
}

/// `index.json` of a prediction directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionIndex {
    pub algorithm: String,
    pub predictions: BTreeMap<String, PredictionEntry>,
}

#[derive(Debug, Clone)]
pub struct PredictionSet {
    pub dir: PathBuf,
    pub index: PredictionIndex,
}

impl PredictionSet {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(INDEX_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let index = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            index,
        })
    }

    pub fn save(&self) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.dir.join(INDEX_FILE);
        let mut text = serde_json::to_string_pretty(&self.index).expect("index serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }

    pub fn algorithm(&self) -> &str {
        &self.index.algorithm
    }

    /// `Ok(None)` when the index has no entry for `image_id`.
    pub fn load_prediction(&self, image_id: &str) -> Result<Option<AlgorithmPrediction>> {
        let Some(entry) = self.index.predictions.get(image_id) else {
            return Ok(None);
        };
        let albedo = read_linear_image(&self.dir.join(&entry.albedo_file), entry.transfer)?;
        let shading = entry
            .shading_file
            .as_ref()
            .map(|f| read_linear_image(&self.dir.join(f), entry.shading_transfer.unwrap_or(Transfer::Linear)))
            .transpose()?;
        Ok(Some(AlgorithmPrediction {
            image_id: image_id.to_string(),
            albedo,
            shading,
        }))
    }
}
