//! Factored maps back to monolithic labels, pixel by pixel.
//!
//! The object map picks the category, the group's root map picks the root,
//! and the side maps fill in whatever side slots the declared parts of that
//! (category, root) pair require. Anything that does not spell a declared
//! part becomes background.

use rayon::prelude::*;

use crate::error::Result;
use crate::ontology::{Group, LabelSet, Ontology, Side, SideAxis, SideSet, SideSlots};
use crate::raster::{LabelMap, ScoreMap};
use crate::relabel::{relabel, FactoredMaps};

/// Side evidence at one pixel: the map value and, when confidences exist,
/// the best non-background side with its score.
#[derive(Debug, Clone, Copy)]
struct SideEvidence {
    value: Option<Side>,
    scored: Option<(Side, f32)>,
}

impl SideEvidence {
    fn at(axis: SideAxis, map_value: u16, scores: Option<&ScoreMap>, x: usize, y: usize) -> Self {
        let scored = scores.and_then(|s| {
            let (id, score) = s.best_at(x, y, |l| l != 0)?;
            Some((Side::from_id(axis, id)?, score))
        });
        SideEvidence { value: Side::from_id(axis, map_value), scored }
    }

    /// The side used to fill a required slot: confidence argmax ignoring
    /// background when scores exist, the map value otherwise.
    fn side(&self, have_scores: bool) -> Option<Side> {
        if have_scores {
            self.scored.map(|(s, _)| s)
        } else {
            self.value
        }
    }
}

/// Merges a factored bundle into a monolithic map.
pub fn top_down_merge(f: &FactoredMaps, o: &Ontology) -> Result<LabelMap> {
    f.validate(o)?;
    let (w, h) = f.dims();
    let (lr_scores, fb_scores) = match &f.side_scores {
        Some(s) => (Some(&s.lr), Some(&s.fb)),
        None => (None, None),
    };
    let mut out = vec![0u16; w * h];
    if w == 0 {
        return LabelMap::from_vec(w, h, out, LabelSet::Monolithic);
    }
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, px) in row.iter_mut().enumerate() {
            let lr = SideEvidence::at(SideAxis::LeftRight, f.s_lr.get(x, y), lr_scores, x, y);
            let fb = SideEvidence::at(SideAxis::FrontBack, f.s_fb.get(x, y), fb_scores, x, y);
            *px = merge_pixel(
                o,
                f.s_o.get(x, y),
                f.s_a.get(x, y),
                f.s_i.get(x, y),
                lr,
                fb,
                lr_scores.is_some(),
            );
        }
    });
    LabelMap::from_vec(w, h, out, LabelSet::Monolithic)
}

fn merge_pixel(
    o: &Ontology,
    object: u16,
    animate_root: u16,
    inanimate_root: u16,
    lr: SideEvidence,
    fb: SideEvidence,
    have_scores: bool,
) -> u16 {
    let Some(cat) = o.category(object) else { return 0 };
    let root = match cat.group {
        Group::NoParts => return o.bare_id(object).unwrap_or(0),
        Group::Animate => animate_root,
        Group::Inanimate => inanimate_root,
    };
    if root == 0 {
        return 0;
    }
    let sigs = o.signatures(object, root);
    if sigs.is_empty() {
        return 0;
    }
    let sides = match cat.group {
        Group::Animate => animate_sides(sigs.iter().map(|s| s.sides.slots()), lr, fb, have_scores),
        _ => inanimate_sides(sigs.iter().map(|s| s.sides.slots()), lr, fb, have_scores),
    };
    sides.and_then(|s| o.lookup_ids(object, root, s)).unwrap_or(0)
}

/// Largest declared slot set whose slots all have a side available;
/// among equally large sets the left/right one comes first.
fn animate_sides(
    slots: impl Iterator<Item = SideSlots>,
    lr: SideEvidence,
    fb: SideEvidence,
    have_scores: bool,
) -> Option<SideSet> {
    let (lr, fb) = (lr.side(have_scores), fb.side(have_scores));
    let mut best: Option<SideSlots> = None;
    for s in slots {
        let fillable = (!s.lr || lr.is_some()) && (!s.fb || fb.is_some());
        let better = match best {
            None => true,
            Some(b) => s.len() > b.len() || (s.len() == b.len() && s.lr && !b.lr),
        };
        if fillable && better {
            best = Some(s);
        }
    }
    let b = best?;
    Some(SideSet::new(lr.filter(|_| b.lr), fb.filter(|_| b.fb)))
}

/// At most one side for inanimate parts. With confidences the stronger
/// non-background side wins (left/right on ties); without, a non-background
/// left/right value beats front/back. Only side kinds that some declared
/// part of this root uses are considered.
fn inanimate_sides(
    slots: impl Iterator<Item = SideSlots>,
    lr: SideEvidence,
    fb: SideEvidence,
    have_scores: bool,
) -> Option<SideSet> {
    let (mut lr_ok, mut fb_ok, mut bare_ok) = (false, false, false);
    for s in slots {
        lr_ok |= s.lr;
        fb_ok |= s.fb;
        bare_ok |= s.is_empty();
    }
    let side = if have_scores {
        let l = lr.scored.filter(|_| lr_ok);
        let f = fb.scored.filter(|_| fb_ok);
        match (l, f) {
            (Some((ls, lsc)), Some((fs, fsc))) => Some(if fsc > lsc { fs } else { ls }),
            (Some((s, _)), None) | (None, Some((s, _))) => Some(s),
            (None, None) => None,
        }
    } else {
        lr.value.filter(|_| lr_ok).or(fb.value.filter(|_| fb_ok))
    };
    match side {
        Some(s) => Some(SideSet::single(s)),
        None if bare_ok => Some(SideSet::NONE),
        None => None,
    }
}

/// `top_down_merge(relabel(gt))`.
pub fn reconstruct_check(gt: &LabelMap, o: &Ontology) -> Result<LabelMap> {
    top_down_merge(&relabel(gt, o)?, o)
}
