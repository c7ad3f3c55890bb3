//! Part proximity matrices and the graph-matching score.
//!
//! Two parts are near each other when they lie within `T` pixels; this is
//! approximated by dilating each part mask by `ceil(T/2)` and counting the
//! pixels where two dilated masks overlap. Rows are L2-normalized and two
//! maps are compared by the Frobenius distance of their matrices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::raster::{dilate, BBox, LabelMap, StructuringElement};

pub const DEFAULT_T: u32 = 4;
/// Weight of the graph-matching term in [`combined_score`].
pub const LAMBDA_GM: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximityMatrix {
    pub labels: Vec<u16>,
    /// Overlap counts, symmetric with a zero diagonal.
    pub raw: Vec<Vec<u64>>,
    /// `raw` with every non-zero row scaled to unit L2 norm.
    pub normalized: Vec<Vec<f64>>,
}

pub fn dilation_radius(t: u32) -> u32 {
    t.div_ceil(2)
}

/// Proximity matrix of `m` over `labels` (row/column order). Every
/// non-background id in `m` must appear in `labels`.
pub fn proximity_matrix(
    m: &LabelMap,
    labels: &[u16],
    t: u32,
    shape: StructuringElement,
) -> Result<ProximityMatrix> {
    if let Some(&id) = m.data().iter().find(|&&v| v != 0 && !labels.contains(&v)) {
        return Err(Error::UnknownLabel { id, set: m.tag() });
    }
    let r = dilation_radius(t);
    let present = m.labels_present();
    let (w, _) = m.dims();
    // dilated mask and its bounding box; None for labels absent from the map
    let grown: Vec<Option<(Vec<bool>, BBox)>> = labels
        .par_iter()
        .map(|&l| {
            if l == 0 || present.binary_search(&l).is_err() {
                return None;
            }
            let d = dilate(&m.mask_of(l), r, shape);
            let b = d.bbox()?;
            Some((d.bits().to_vec(), b))
        })
        .collect();
    let k = labels.len();
    let raw: Vec<Vec<u64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            (0..k)
                .map(|j| match (&grown[i], &grown[j]) {
                    (Some((a, ba)), Some((b, bb))) if i != j => {
                        let (x0, x1) = (ba.x0.max(bb.x0), ba.x1.min(bb.x1));
                        let (y0, y1) = (ba.y0.max(bb.y0), ba.y1.min(bb.y1));
                        let mut n = 0u64;
                        for y in y0..y1 {
                            for x in x0..x1 {
                                n += (a[y * w + x] && b[y * w + x]) as u64;
                            }
                        }
                        n
                    }
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let normalized = raw
        .iter()
        .map(|row| {
            let norm = row.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt();
            if norm == 0.0 {
                vec![0.0; row.len()]
            } else {
                row.iter().map(|&v| v as f64 / norm).collect()
            }
        })
        .collect();
    Ok(ProximityMatrix { labels: labels.to_vec(), raw, normalized })
}

/// Frobenius norm of the difference of two normalized matrices over the
/// same labels.
pub fn frobenius_distance(a: &ProximityMatrix, b: &ProximityMatrix) -> f64 {
    assert_eq!(a.labels, b.labels, "matrices over different labels");
    a.normalized
        .iter()
        .flatten()
        .zip(b.normalized.iter().flatten())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn gm_score(
    gt: &LabelMap,
    pred: &LabelMap,
    labels: &[u16],
    t: u32,
    shape: StructuringElement,
) -> Result<f64> {
    pred.expect_dims(gt.dims())?;
    let a = proximity_matrix(gt, labels, t, shape)?;
    let b = proximity_matrix(pred, labels, t, shape)?;
    Ok(frobenius_distance(&a, &b))
}

/// Fraction of mismatching pixels plus `LAMBDA_GM` times the graph score.
pub fn combined_score(
    gt: &LabelMap,
    pred: &LabelMap,
    labels: &[u16],
    t: u32,
    shape: StructuringElement,
) -> Result<f64> {
    let gm = gm_score(gt, pred, labels, t, shape)?;
    let n = gt.data().len().max(1);
    let wrong = gt.data().iter().zip(pred.data()).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / n as f64 + LAMBDA_GM * gm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::LabelSet;

    fn map(w: usize, h: usize, f: impl FnMut(usize, usize) -> u16) -> LabelMap {
        LabelMap::from_fn(w, h, LabelSet::Monolithic, f)
    }

    #[test]
    fn radius_rounds_up() {
        assert_eq!([0, 1, 2, 3, 4].map(dilation_radius), [0, 1, 1, 2, 2]);
    }

    #[test]
    fn one_part_gives_zero_matrix() {
        let m = map(5, 5, |x, _| (x < 2) as u16);
        let p = proximity_matrix(&m, &[1, 2], 4, StructuringElement::Square).unwrap();
        assert_eq!(p.raw, vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(p.normalized, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
    }

    #[test]
    fn two_pixels_three_apart() {
        // (0,0) and (0,3): 5x5 blocks clamped to the image overlap on rows 1..=2, columns 0..=2
        let m = map(8, 8, |x, y| match (x, y) {
            (0, 0) => 1,
            (0, 3) => 2,
            _ => 0,
        });
        let p = proximity_matrix(&m, &[1, 2], 4, StructuringElement::Square).unwrap();
        assert_eq!(p.raw, vec![vec![0, 6], vec![6, 0]]);
        assert_eq!(p.normalized, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn t_zero_disjoint_parts() {
        let m = map(4, 4, |x, _| x as u16 % 3);
        let p = proximity_matrix(&m, &[1, 2], 0, StructuringElement::Diamond).unwrap();
        assert_eq!(p.raw, vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn unknown_label() {
        let m = map(2, 1, |x, _| x as u16 * 7);
        assert!(matches!(
            proximity_matrix(&m, &[1], 2, StructuringElement::Square),
            Err(Error::UnknownLabel { id: 7, .. })
        ));
    }

    #[test]
    fn gm_identity_and_symmetry() {
        let a = map(10, 10, |x, y| ((x / 3 + y / 4) % 3) as u16);
        let b = map(10, 10, |x, y| ((x / 2 + y / 5) % 3) as u16);
        let labels = [1, 2];
        let s = StructuringElement::Square;
        assert_eq!(gm_score(&a, &a, &labels, 4, s).unwrap(), 0.0);
        assert_eq!(gm_score(&a, &b, &labels, 4, s).unwrap(), gm_score(&b, &a, &labels, 4, s).unwrap());
        assert_eq!(combined_score(&a, &a, &labels, 4, s).unwrap(), 0.0);
    }
}
