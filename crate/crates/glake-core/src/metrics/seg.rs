//! Segmentation overlap metrics: per-image IoU and Dice, aggregated as
//! unweighted per-image means (macro) with an optional pooled-pixel (micro)
//! variant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{from_count, Real};
use crate::raster::BinaryMask;
use crate::Scalar;

/// Overlap scores for one (prediction, ground truth) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegScore<F = Scalar> {
    pub iou: F,
    pub dice: F,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// Both masks empty; scored 1.0 by convention and flagged so callers
    /// can exclude such images.
    pub both_empty: bool,
}

/// IoU = |P∩G| / |P∪G| and Dice = 2|P∩G| / (|P| + |G|). Two empty masks
/// score 1.0 on both (a correct prediction of absence), flagged via
/// `both_empty`.
pub fn score_pair<F: Real>(pred: &BinaryMask, gt: &BinaryMask) -> Result<SegScore<F>> {
    if pred.width() != gt.width() || pred.height() != gt.height() {
        return Err(Error::DimensionMismatch(format!(
            "pred {}x{} vs gt {}x{}",
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height()
        )));
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        match (p, g) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 1) => fn_ += 1,
            _ => {}
        }
    }
    Ok(from_counts(tp, fp, fn_))
}

/// Builds a score from raw pixel counts.
pub fn from_counts<F: Real>(tp: u64, fp: u64, fn_: u64) -> SegScore<F> {
    let both_empty = tp + fp + fn_ == 0;
    let (iou, dice) = if both_empty {
        (F::one(), F::one())
    } else {
        let tp_f: F = from_count(tp);
        let union: F = from_count(tp + fp + fn_);
        let two = F::from_u8(2).unwrap();
        let denom: F = from_count(2 * tp + fp + fn_);
        (tp_f / union, two * tp_f / denom)
    };
    SegScore {
        iou,
        dice,
        tp,
        fp,
        fn_,
        both_empty,
    }
}

/// Unweighted per-image means of IoU and Dice.
pub fn aggregate<F: Real>(scores: &[SegScore<F>]) -> Result<(F, F)> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no scores to aggregate".into()));
    }
    let n = from_count::<F>(scores.len() as u64);
    let iou = scores.iter().fold(F::zero(), |acc, s| acc + s.iou) / n;
    let dice = scores.iter().fold(F::zero(), |acc, s| acc + s.dice) / n;
    Ok((iou, dice))
}

/// Dataset-level IoU/Dice from pooled pixel counts.
pub fn aggregate_micro<F: Real>(scores: &[SegScore<F>]) -> Result<(F, F)> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no scores to aggregate".into()));
    }
    let tp = scores.iter().map(|s| s.tp).sum();
    let fp = scores.iter().map(|s| s.fp).sum();
    let fn_ = scores.iter().map(|s| s.fn_).sum();
    let pooled = from_counts::<F>(tp, fp, fn_);
    Ok((pooled.iou, pooled.dice))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(w: u32, h: u32, f: impl FnMut(u32, u32) -> bool) -> BinaryMask {
        BinaryMask::from_fn(w, h, "m", f)
    }

    #[test]
    fn identical_nonempty_masks_score_one() {
        let a = mask(10, 10, |x, _| x < 5);
        let s: SegScore = score_pair(&a, &a).unwrap();
        assert_eq!(s.iou, 1.0);
        assert_eq!(s.dice, 1.0);
        assert!(!s.both_empty);
    }

    #[test]
    fn disjoint_masks_score_zero() {
        let a = mask(10, 10, |x, _| x < 3);
        let b = mask(10, 10, |x, _| x >= 7);
        let s: SegScore = score_pair(&a, &b).unwrap();
        assert_eq!(s.iou, 0.0);
        assert_eq!(s.dice, 0.0);
    }

    #[test]
    fn half_overlap_fixture() {
        // 100x100: pred = left half, gt = top half. Intersection 2500,
        // union 7500.
        let pred = mask(100, 100, |x, _| x < 50);
        let gt = mask(100, 100, |_, y| y < 50);
        let s: SegScore = score_pair(&pred, &gt).unwrap();
        assert!((s.iou - 1.0 / 3.0).abs() < 1e-12);
        assert!((s.dice - 0.5).abs() < 1e-12);
        assert_eq!((s.tp, s.fp, s.fn_), (2500, 2500, 2500));
    }

    #[test]
    fn both_empty_scores_one_and_is_flagged() {
        let a = mask(4, 4, |_, _| false);
        let s: SegScore = score_pair(&a, &a).unwrap();
        assert_eq!((s.iou, s.dice), (1.0, 1.0));
        assert!(s.both_empty);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = mask(4, 4, |_, _| true);
        let b = mask(4, 5, |_, _| true);
        assert!(score_pair::<Scalar>(&a, &b).is_err());
    }

    #[test]
    fn score_is_symmetric() {
        let a = mask(12, 9, |x, y| (x + 2 * y) % 3 == 0);
        let b = mask(12, 9, |x, y| (2 * x + y) % 4 == 0);
        let ab: SegScore = score_pair(&a, &b).unwrap();
        let ba: SegScore = score_pair(&b, &a).unwrap();
        assert_eq!(ab.iou, ba.iou);
        assert_eq!(ab.dice, ba.dice);
    }

    #[test]
    fn dice_iou_identity() {
        let s = from_counts::<Scalar>(37, 11, 5);
        assert!((s.dice - 2.0 * s.iou / (1.0 + s.iou)).abs() < 1e-12);
        assert!(s.dice >= s.iou);
    }

    #[test]
    fn flipping_fn_to_tp_never_decreases_scores() {
        let before = from_counts::<Scalar>(10, 4, 6);
        let after = from_counts::<Scalar>(11, 4, 5);
        assert!(after.iou >= before.iou);
        assert!(after.dice >= before.dice);
    }

    #[test]
    fn aggregate_means() {
        let scores = vec![from_counts::<Scalar>(1, 0, 0), from_counts::<Scalar>(0, 1, 1)];
        let (miou, mdice) = aggregate(&scores).unwrap();
        assert_eq!(miou, 0.5);
        assert_eq!(mdice, 0.5);
        let single = vec![from_counts::<Scalar>(3, 1, 2)];
        let (miou, mdice) = aggregate(&single).unwrap();
        assert_eq!(miou, single[0].iou);
        assert_eq!(mdice, single[0].dice);
        assert!(aggregate::<Scalar>(&[]).is_err());
    }

    #[test]
    fn micro_pools_pixel_counts() {
        let scores = vec![from_counts::<Scalar>(10, 0, 0), from_counts::<Scalar>(0, 10, 10)];
        let (miou, _) = aggregate_micro(&scores).unwrap();
        assert!((miou - 10.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn generic_over_f32() {
        let s = from_counts::<f32>(3, 1, 0);
        assert!((s.iou - 0.75).abs() < 1e-6);
    }
}
