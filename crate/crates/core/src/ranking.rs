//! Cross-algorithm relative improvement and leaderboards.
//!
//! For lower-is-better metrics, the pairwise improvement of algorithm `i`
//! over `k` on metric `m` is `R = (A_k − A_i)(1/A_i + 1/A_k)`. An algorithm's
//! overall score is the mean of `R` over metrics, then over opponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{MetricKind, MetricVector};

/// Suffix marking a post-processed variant of a base algorithm.
pub const PP_SUFFIX: &str = "+pp";

pub fn relative_improvement_pair(a_i: f64, a_k: f64) -> Result<f64> {
    if !(a_i > 0.0 && a_k > 0.0 && a_i.is_finite() && a_k.is_finite()) {
        return Err(Error::Ranking(format!(
            "relative improvement needs positive finite values, got {a_i} and {a_k}"
        )));
    }
    Ok((a_k - a_i) * (1.0 / a_i + 1.0 / a_k))
}

/// Overall relative improvement of every vector against all others, in
/// percent, in input order.
pub fn overall_relative_improvement(vectors: &[MetricVector], metrics: &[MetricKind]) -> Result<Vec<f64>> {
    if vectors.len() < 2 {
        return Err(Error::Ranking(format!(
            "need at least 2 algorithms to rank, got {}",
            vectors.len()
        )));
    }
    if metrics.is_empty() {
        return Err(Error::Ranking("empty metric subset".into()));
    }
    let table = vectors
        .iter()
        .map(|v| {
            metrics
                .iter()
                .map(|m| match v.get(*m) {
                    Some(x) if x > 0.0 && x.is_finite() => Ok(x),
                    other => Err(Error::Ranking(format!(
                        "algorithm '{}' has metric '{}' = {other:?}; every ranked metric must be positive",
                        v.algorithm,
                        m.name()
                    ))),
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let l = vectors.len();
    let per_metric = metrics.len() as f64;
    let mut out = Vec::with_capacity(l);
    for i in 0..l {
        let mut sum = 0.0;
        for k in (0..l).filter(|k| *k != i) {
            let mut r = 0.0;
            for j in 0..metrics.len() {
                r += relative_improvement_pair(table[i][j], table[k][j])?;
            }
            sum += r / per_metric;
        }
        out.push(100.0 * sum / (l - 1) as f64);
    }
    Ok(out)
}

/// Indices of the algorithms that enter the ranking.
///
/// With an include list exactly those algorithms enter, in list order.
/// Otherwise every algorithm enters except a base algorithm whose
/// `+pp` variant is also present.
pub fn select_ranked(names: &[&str], include: Option<&[String]>) -> Result<Vec<usize>> {
    match include {
        Some(list) => list
            .iter()
            .map(|want| {
                names
                    .iter()
                    .position(|n| n == want)
                    .ok_or_else(|| Error::Ranking(format!("included algorithm '{want}' not found")))
            })
            .collect(),
        None => Ok((0..names.len())
            .filter(|&i| {
                let pp = format!("{}{PP_SUFFIX}", names[i]);
                !names.iter().any(|n| *n == pp)
            })
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub algorithm: String,
    /// Percent.
    pub relative_improvement: f64,
    pub scores: MetricVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaderboard {
    pub metrics: Vec<MetricKind>,
    /// Sorted by decreasing relative improvement.
    pub entries: Vec<LeaderboardEntry>,
    /// Algorithms present in the input but left out of the ranking.
    pub excluded: Vec<String>,
}

impl Leaderboard {
    pub fn build(vectors: &[MetricVector], metrics: &[MetricKind], include: Option<&[String]>) -> Result<Self> {
        let names: Vec<&str> = vectors.iter().map(|v| v.algorithm.as_str()).collect();
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(**n)) {
            return Err(Error::Ranking(format!("algorithm '{dup}' appears twice")));
        }
        let chosen = select_ranked(&names, include)?;
        let ranked: Vec<MetricVector> = chosen.iter().map(|&i| vectors[i].clone()).collect();
        let scores = overall_relative_improvement(&ranked, metrics)?;
        let mut entries: Vec<LeaderboardEntry> = ranked
            .into_iter()
            .zip(scores)
            .map(|(v, p)| LeaderboardEntry {
                algorithm: v.algorithm.clone(),
                relative_improvement: p,
                scores: v,
            })
            .collect();
        entries.sort_by(|a, b| {
            b.relative_improvement
                .total_cmp(&a.relative_improvement)
                .then_with(|| a.algorithm.cmp(&b.algorithm))
        });
        let excluded = (0..vectors.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| vectors[i].algorithm.clone())
            .collect();
        Ok(Self {
            metrics: metrics.to_vec(),
            entries,
            excluded,
        })
    }

    pub fn get(&self, algorithm: &str) -> Option<&LeaderboardEntry> {
        self.entries.iter().find(|e| e.algorithm == algorithm)
    }

    /// Plain-text table, percentages to one decimal.
    pub fn to_text(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|e| e.algorithm.len())
            .max()
            .unwrap_or(0)
            .max("algorithm".len());
        let mut s = format!("{:<4} {:<width$}", "rank", "algorithm");
        for m in &self.metrics {
            s.push_str(&format!(" {:>12}", m.name()));
        }
        s.push_str(&format!(" {:>12}\n", "rel.impr.%"));
        for (i, e) in self.entries.iter().enumerate() {
            s.push_str(&format!("{:<4} {:<width$}", i + 1, e.algorithm));
            for m in &self.metrics {
                match e.scores.get(*m) {
                    Some(v) => s.push_str(&format!(" {v:>12.4}")),
                    None => s.push_str(&format!(" {:>12}", "-")),
                }
            }
            s.push_str(&format!(" {:>+12.1}\n", e.relative_improvement));
        }
        if !self.excluded.is_empty() {
            s.push_str(&format!("not ranked: {}\n", self.excluded.join(", ")));
        }
        s
    }
}
