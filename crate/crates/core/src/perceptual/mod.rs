//! Perceptual distances between equal-size image crops, used by the texture
//! metric.
//!
//! Crops reach a backend already display encoded (see
//! [`TextureParams::encode_srgb`](crate::metrics::TextureParams)). The
//! builtin backend is multi-scale SSIM; an external process can serve any
//! other model over the wire protocol in [`external`].

pub mod external;
mod msssim;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagecore::LinearImage;

pub use external::ExternalBackend;
pub use msssim::MsSsim;

pub trait PerceptualDistance: Send + Sync {
    /// Stable identifier echoed into reports.
    fn id(&self) -> String;

    /// Distance between two crops of equal size; 0 for identical crops.
    fn distance(&self, a: &LinearImage, b: &LinearImage) -> Result<f64>;
}

/// Backend selection as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BackendSpec {
    #[default]
    Builtin,
    /// `host:port` of an external backend.
    External(String),
}

impl FromStr for BackendSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "builtin" {
            return Ok(BackendSpec::Builtin);
        }
        match s.strip_prefix("external:") {
            Some(addr) if !addr.is_empty() => Ok(BackendSpec::External(addr.to_string())),
            _ => Err(Error::Config(format!(
                "texture backend must be 'builtin' or 'external:<host:port>', got '{s}'"
            ))),
        }
    }
}

impl TryFrom<String> for BackendSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BackendSpec> for String {
    fn from(b: BackendSpec) -> String {
        b.to_string()
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::Builtin => f.write_str("builtin"),
            BackendSpec::External(addr) => write!(f, "external:{addr}"),
        }
    }
}

/// A ready backend plus a warning when the requested one was unreachable.
pub struct ResolvedBackend {
    pub backend: Box<dyn PerceptualDistance>,
    pub warning: Option<String>,
}

/// Instantiates `spec`. An unreachable external backend falls back to the
/// builtin one and reports why.
pub fn resolve_backend(spec: &BackendSpec) -> ResolvedBackend {
    match spec {
        BackendSpec::Builtin => ResolvedBackend {
            backend: Box::new(MsSsim::default()),
            warning: None,
        },
        BackendSpec::External(addr) => match ExternalBackend::connect(addr) {
            Ok(b) => ResolvedBackend {
                backend: Box::new(b),
                warning: None,
            },
            Err(e) => ResolvedBackend {
                backend: Box::new(MsSsim::default()),
                warning: Some(format!(
                    "external texture backend {addr} unavailable ({e}); texture computed with builtin backend"
                )),
            },
        },
    }
}

pub(crate) fn check_same_size(a: &LinearImage, b: &LinearImage) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::Parameter(format!(
            "crops differ in size: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Average ranks (1-based), ties share the mean rank.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[order[k]] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` when either side is constant or the
/// lengths differ.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let (mut va, mut vb) = (0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    (va > 0.0 && vb > 0.0).then(|| cov / (va * vb).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_spec_parsing() {
        assert_eq!("builtin".parse::<BackendSpec>().unwrap(), BackendSpec::Builtin);
        assert_eq!(
            "external:127.0.0.1:9000".parse::<BackendSpec>().unwrap(),
            BackendSpec::External("127.0.0.1:9000".into())
        );
        assert!("lpips".parse::<BackendSpec>().is_err());
        assert!("external:".parse::<BackendSpec>().is_err());
        let json = serde_json::to_string(&BackendSpec::External("h:1".into())).unwrap();
        assert_eq!(json, "\"external:h:1\"");
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
        assert_eq!(ranks(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
    }

    #[test]
    fn unreachable_external_falls_back() {
        // Port 1 on localhost is essentially never listening.
        let r = resolve_backend(&BackendSpec::External("127.0.0.1:1".into()));
        assert_eq!(r.backend.id(), MsSsim::default().id());
        assert!(r.warning.is_some());
    }
}
