//! Zoom refinement: re-run inference on a padded crop around every scene
//! object and composite the refined parts back under the object's mask.
//!
//! The network is a callback from a crop box to factored maps of exactly
//! that size. Callbacks run in parallel; compositing is serial and, since
//! object masks are disjoint, order-independent.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::merge::top_down_merge;
use crate::ontology::{LabelSet, Ontology};
use crate::raster::{connected_components, BBox, Component, Connectivity, LabelMap};
use crate::relabel::FactoredMaps;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TargetAspect {
    /// Width/height of the whole image.
    #[default]
    ImageAspect,
    /// Width/height of the unpadded box.
    PreserveBox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadPolicy {
    /// Fraction of the box width (height) added to the left and right (top
    /// and bottom).
    pub margin: f64,
    pub target_aspect: TargetAspect,
}

impl Default for PadPolicy {
    fn default() -> Self {
        PadPolicy { margin: 0.10, target_aspect: TargetAspect::ImageAspect }
    }
}

/// Pads `b` by the margin, widens its short axis to the target aspect
/// (centered, odd pixel to the right/bottom), then shifts it into the image,
/// truncating only along an axis longer than the image.
pub fn pad_bbox(b: BBox, image_w: usize, image_h: usize, policy: PadPolicy) -> BBox {
    let margin = policy.margin.max(0.0);
    let (bw, bh) = (b.width() as f64, b.height() as f64);
    let aspect = match policy.target_aspect {
        TargetAspect::ImageAspect => image_w as f64 / image_h as f64,
        TargetAspect::PreserveBox => bw / bh,
    };
    let mx = (margin * bw).round() as i64;
    let my = (margin * bh).round() as i64;
    let (mut x0, mut x1) = (b.x0 as i64 - mx, b.x1 as i64 + mx);
    let (mut y0, mut y1) = (b.y0 as i64 - my, b.y1 as i64 + my);

    let (w, h) = ((x1 - x0) as f64, (y1 - y0) as f64);
    if w < h * aspect {
        let d = (h * aspect).round() as i64 - (x1 - x0);
        if d > 0 {
            x0 -= d / 2;
            x1 += d - d / 2;
        }
    } else if w > h * aspect {
        let d = (w / aspect).round() as i64 - (y1 - y0);
        if d > 0 {
            y0 -= d / 2;
            y1 += d - d / 2;
        }
    }
    let (x0, x1) = fit_axis(x0, x1, image_w as i64);
    let (y0, y1) = fit_axis(y0, y1, image_h as i64);
    BBox::new(x0, y0, x1, y1)
}

fn fit_axis(mut lo: i64, mut hi: i64, len: i64) -> (usize, usize) {
    if hi - lo >= len {
        return (0, len as usize);
    }
    if lo < 0 {
        hi -= lo;
        lo = 0;
    }
    if hi > len {
        lo -= hi - len;
        hi = len;
    }
    (lo as usize, hi as usize)
}

/// Object components of `s_o` with the padded box each one is refined in.
pub fn plan(s_o: &LabelMap, policy: PadPolicy) -> Vec<(Component, BBox)> {
    let (w, h) = s_o.dims();
    connected_components(s_o, Connectivity::Four)
        .into_iter()
        .map(|c| {
            let b = pad_bbox(c.bbox, w, h, policy);
            (c, b)
        })
        .collect()
}

/// Refines every object of `f_full` with maps from `infer` and composites
/// the merged crops under each object mask. Pixels outside every object come
/// from the unrefined merge.
pub fn izr_refine<F>(f_full: &FactoredMaps, o: &Ontology, infer: F, policy: PadPolicy) -> Result<LabelMap>
where
    F: Fn(BBox) -> Result<FactoredMaps> + Sync,
{
    let mut out = top_down_merge(f_full, o)?;
    let jobs = plan(&f_full.s_o, policy);
    let refined: Vec<LabelMap> = jobs
        .par_iter()
        .map(|(comp, b)| {
            let mut crop = infer(*b)?;
            let (cw, ch) = crop.dims();
            if (cw, ch) != (b.width(), b.height()) {
                return Err(Error::CallbackShapeMismatch { bbox: *b, width: cw, height: ch });
            }
            let mut s_o = LabelMap::new(cw, ch, LabelSet::Object);
            for (x, y) in comp.pixels() {
                s_o.set(x - b.x0, y - b.y0, comp.category);
            }
            crop.s_o = s_o;
            top_down_merge(&crop, o)
        })
        .collect::<Result<_>>()?;

    for ((comp, b), merged) in jobs.iter().zip(&refined) {
        for (x, y) in comp.pixels() {
            out.set(x, y, merged.get(x - b.x0, y - b.y0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merge::reconstruct_check;
    use crate::relabel::relabel;

    #[test]
    fn pads_to_image_aspect_and_shifts_inside() {
        let b = pad_bbox(BBox::new(10, 10, 30, 30), 100, 50, PadPolicy::default());
        assert_eq!(b, BBox::new(0, 8, 48, 32));
    }

    #[test]
    fn full_image_box_is_fixed() {
        let full = BBox::full(64, 40);
        assert_eq!(pad_bbox(full, 64, 40, PadPolicy::default()), full);
    }

    #[test]
    fn zero_margin_at_target_aspect_is_unchanged() {
        let p = PadPolicy { margin: 0.0, target_aspect: TargetAspect::ImageAspect };
        let b = BBox::new(5, 5, 25, 15);
        assert_eq!(pad_bbox(b, 100, 50, p), b);
        let p = PadPolicy { margin: 0.0, target_aspect: TargetAspect::PreserveBox };
        assert_eq!(pad_bbox(BBox::new(3, 1, 10, 4), 20, 20, p), BBox::new(3, 1, 10, 4));
    }

    #[test]
    fn tall_box_grows_vertically_for_portrait_image() {
        let p = PadPolicy { margin: 0.0, target_aspect: TargetAspect::ImageAspect };
        // 10x10 box in a 20x40 image: aspect 0.5 -> 10x20
        assert_eq!(pad_bbox(BBox::new(5, 15, 15, 25), 20, 40, p), BBox::new(5, 10, 15, 30));
    }

    #[test]
    fn identity_callback_is_a_no_op() {
        let o = Ontology::builtin("pp201").unwrap();
        let gt = crate::synth::gen_synthetic(3, &o, 64, 48, 4).unwrap();
        let mut f = relabel(&gt, &o).unwrap();
        // perturb so the unrefined merge is not just the ground truth
        f.s_lr.data_mut().iter_mut().step_by(7).for_each(|v| *v = 0);
        let base = top_down_merge(&f, &o).unwrap();
        let refined = izr_refine(&f, &o, |b| f.crop(b), PadPolicy::default()).unwrap();
        assert_eq!(refined, base);
    }

    #[test]
    fn oracle_callback_recovers_objects() {
        let o = Ontology::builtin("pp201").unwrap();
        let gt = crate::synth::gen_synthetic(11, &o, 80, 60, 5).unwrap();
        let truth = relabel(&gt, &o).unwrap();
        let noisy = FactoredMaps { s_o: truth.s_o.clone(), ..FactoredMaps::background(80, 60) };
        let refined = izr_refine(&noisy, &o, |b| truth.crop(b), PadPolicy::default()).unwrap();
        assert_eq!(refined, reconstruct_check(&gt, &o).unwrap());
    }

    #[test]
    fn callback_shape_is_checked() {
        let o = Ontology::builtin("pp58").unwrap();
        let mut f = FactoredMaps::background(8, 8);
        f.s_o.set(2, 2, o.object_id("boat").unwrap());
        let err = izr_refine(&f, &o, |_| Ok(FactoredMaps::background(1, 2)), PadPolicy::default());
        assert!(matches!(err, Err(Error::CallbackShapeMismatch { .. })));
    }
}
