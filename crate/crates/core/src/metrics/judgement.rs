use crate::dataset::{Judgement, JudgementPair};
use crate::error::{Error, Result};
use crate::imagecore::GrayImage;

use super::SkipReason;

/// Reflectances at or below this are floored to it before taking ratios.
pub const JUDGEMENT_FLOOR: f64 = 1e-8;

/// The algorithm's relative judgement for one pair of reflectances.
///
/// Point 1 is darker when `r2 / r1 > 1 + δ`, point 2 when `r1 / r2 > 1 + δ`,
/// and they are equal otherwise.
pub fn convert_judgement(r1: f64, r2: f64, delta: f64) -> Judgement {
    let r1 = r1.max(JUDGEMENT_FLOOR);
    let r2 = r2.max(JUDGEMENT_FLOOR);
    if r2 / r1 > 1.0 + delta {
        Judgement::FirstDarker
    } else if r1 / r2 > 1.0 + delta {
        Judgement::SecondDarker
    } else {
        Judgement::Equal
    }
}

/// Weighted human disagreement rate of `pred_gray` against `judgements`,
/// sampling each point at its nearest pixel.
pub fn whdr(pred_gray: &GrayImage, judgements: &[JudgementPair], delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("WHDR delta must be > 0, got {delta}")));
    }
    let (w, h) = pred_gray.dims();
    let mut total = 0.0;
    let mut wrong = 0.0;
    for j in judgements {
        let ((x1, y1), (x2, y2)) = j.pixels(w, h);
        let guess = convert_judgement(pred_gray.get(x1, y1), pred_gray.get(x2, y2), delta);
        total += j.weight;
        if guess != j.label {
            wrong += j.weight;
        }
    }
    if total <= 0.0 {
        return Err(Error::MetricAbsent(SkipReason::NoJudgements));
    }
    Ok(wrong / total)
}
