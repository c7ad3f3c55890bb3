//! Monolithic ground truth to factored maps.
//!
//! Object, animate-root and inanimate-root maps are per-pixel lookups. Side
//! maps start from seed pixels (pixels whose part name carries the side) and
//! are completed per object connected component: every pixel of the object
//! takes the label of its Euclidean-nearest seed, exact ties going to the
//! lower label id.
//!
//! Animate objects fill left/right and front/back independently. Parts of
//! inanimate objects carry at most one side, so their four side labels are
//! filled jointly and each pixel ends up with a value in exactly one of the
//! two side maps.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ontology::{Group, LabelSet, Ontology, Side};
use crate::raster::{connected_components, netpbm, BBox, Connectivity, LabelMap, Mask, ScoreMap};

/// Side-map confidences, each over `{0: background, 1, 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SideScores {
    pub lr: ScoreMap,
    pub fb: ScoreMap,
}

/// The five factored maps, optionally with side confidences.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredMaps {
    pub s_o: LabelMap,
    pub s_a: LabelMap,
    pub s_i: LabelMap,
    pub s_lr: LabelMap,
    pub s_fb: LabelMap,
    pub side_scores: Option<SideScores>,
}

/// File names used when a bundle is stored as a directory of PGMs.
pub const MAP_FILES: [(&str, LabelSet); 5] = [
    ("s_o.pgm", LabelSet::Object),
    ("s_a.pgm", LabelSet::AnimateRoot),
    ("s_i.pgm", LabelSet::InanimateRoot),
    ("s_lr.pgm", LabelSet::LeftRight),
    ("s_fb.pgm", LabelSet::FrontBack),
];

impl FactoredMaps {
    pub fn background(width: usize, height: usize) -> FactoredMaps {
        FactoredMaps {
            s_o: LabelMap::new(width, height, LabelSet::Object),
            s_a: LabelMap::new(width, height, LabelSet::AnimateRoot),
            s_i: LabelMap::new(width, height, LabelSet::InanimateRoot),
            s_lr: LabelMap::new(width, height, LabelSet::LeftRight),
            s_fb: LabelMap::new(width, height, LabelSet::FrontBack),
            side_scores: None,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.s_o.dims()
    }

    pub fn maps(&self) -> [&LabelMap; 5] {
        [&self.s_o, &self.s_a, &self.s_i, &self.s_lr, &self.s_fb]
    }

    /// Shared dimensions and correct tags.
    pub fn check(&self) -> Result<()> {
        let dims = self.dims();
        for (m, (_, tag)) in self.maps().into_iter().zip(MAP_FILES) {
            m.expect_tag(tag)?;
            m.expect_dims(dims)?;
        }
        if let Some(s) = &self.side_scores {
            for sm in [&s.lr, &s.fb] {
                if sm.dims() != dims {
                    return Err(Error::shape(dims, sm.dims()));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self, o: &Ontology) -> Result<()> {
        self.check()?;
        self.maps().into_iter().try_for_each(|m| m.validate(o))
    }

    pub fn crop(&self, b: BBox) -> Result<FactoredMaps> {
        Ok(FactoredMaps {
            s_o: self.s_o.crop(b)?,
            s_a: self.s_a.crop(b)?,
            s_i: self.s_i.crop(b)?,
            s_lr: self.s_lr.crop(b)?,
            s_fb: self.s_fb.crop(b)?,
            side_scores: match &self.side_scores {
                Some(s) => Some(SideScores { lr: s.lr.crop(b)?, fb: s.fb.crop(b)? }),
                None => None,
            },
        })
    }

    /// Reads `s_o.pgm` … `s_fb.pgm` from a directory.
    pub fn read_dir(dir: impl AsRef<Path>) -> Result<FactoredMaps> {
        let dir = dir.as_ref();
        let [s_o, s_a, s_i, s_lr, s_fb] =
            MAP_FILES.map(|(name, tag)| netpbm::read_pgm(dir.join(name), tag));
        let maps = FactoredMaps {
            s_o: s_o?,
            s_a: s_a?,
            s_i: s_i?,
            s_lr: s_lr?,
            s_fb: s_fb?,
            side_scores: None,
        };
        maps.check()?;
        Ok(maps)
    }

    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (m, (name, _)) in self.maps().into_iter().zip(MAP_FILES) {
            netpbm::write_pgm(dir.join(name), m)?;
        }
        Ok(())
    }
}

/// Converts a monolithic ground-truth map into the five factored maps.
pub fn relabel(gt: &LabelMap, o: &Ontology) -> Result<FactoredMaps> {
    gt.expect_tag(LabelSet::Monolithic)?;
    gt.validate(o)?;
    let (w, h) = gt.dims();
    let mut out = FactoredMaps::background(w, h);
    // Joint side seeds: 1 left, 2 right, 3 front, 4 back.
    let mut side_seeds = vec![0u16; w * h];

    for (i, &id) in gt.data().iter().enumerate() {
        if id == 0 {
            continue;
        }
        let d = o.decompose(id).expect("validated id");
        out.s_o.data_mut()[i] = d.object;
        match d.group {
            Group::Animate => out.s_a.data_mut()[i] = d.root,
            Group::Inanimate => out.s_i.data_mut()[i] = d.root,
            Group::NoParts => {}
        }
        // Animate parts may carry both sides; keep them packed as lr + 4*fb.
        let lr = d.sides.lr.map_or(0, joint_id);
        let fb = d.sides.fb.map_or(0, joint_id);
        side_seeds[i] = lr + 8 * fb;
    }

    if side_seeds.iter().all(|&s| s == 0) {
        return Ok(out);
    }

    let components = connected_components(&out.s_o, Connectivity::Four);
    let fills: Vec<(BBox, Vec<u16>, Vec<u16>)> = components
        .par_iter()
        .filter_map(|comp| {
            let group = o.category(comp.category)?.group;
            let b = comp.bbox;
            let (bw, bh) = (b.width(), b.height());
            let mut mask = vec![false; bw * bh];
            for (x, y) in comp.pixels() {
                mask[(y - b.y0) * bw + (x - b.x0)] = true;
            }
            let local = |f: &dyn Fn(u16) -> u16| -> Vec<u16> {
                let mut v = vec![0u16; bw * bh];
                for y in 0..bh {
                    for x in 0..bw {
                        if mask[y * bw + x] {
                            v[y * bw + x] = f(side_seeds[(b.y0 + y) * w + b.x0 + x]);
                        }
                    }
                }
                v
            };
            match group {
                Group::NoParts => None,
                Group::Animate => {
                    let lr = nearest_seed_fill(&local(&|s| s % 8), &mask, bw, bh);
                    let fb = nearest_seed_fill(&local(&|s| (s / 8).saturating_sub(2)), &mask, bw, bh);
                    Some((b, lr, fb))
                }
                Group::Inanimate => {
                    let joint = nearest_seed_fill(&local(&|s| s % 8 + s / 8), &mask, bw, bh);
                    let lr = joint.iter().map(|&v| if v <= 2 { v } else { 0 }).collect();
                    let fb = joint.iter().map(|&v| v.saturating_sub(2)).collect();
                    Some((b, lr, fb))
                }
            }
        })
        .collect();

    for (b, lr, fb) in fills {
        let bw = b.width();
        for y in b.y0..b.y1 {
            for x in b.x0..b.x1 {
                let j = (y - b.y0) * bw + (x - b.x0);
                if lr[j] != 0 {
                    out.s_lr.set(x, y, lr[j]);
                }
                if fb[j] != 0 {
                    out.s_fb.set(x, y, fb[j]);
                }
            }
        }
    }
    Ok(out)
}

fn joint_id(side: Side) -> u16 {
    match side {
        Side::Left => 1,
        Side::Right => 2,
        Side::Front => 3,
        Side::Back => 4,
    }
}

/// Every pixel of `obj_mask` takes the label of its Euclidean-nearest seed
/// (lower id on exact ties); pixels outside the mask are background, and so
/// is the whole mask when there are no seeds.
pub fn floodfill_side(seeds: &LabelMap, obj_mask: &Mask) -> Result<LabelMap> {
    seeds.expect_dims(obj_mask.dims())?;
    let (w, h) = seeds.dims();
    for y in 0..h {
        for x in 0..w {
            if seeds.get(x, y) != 0 && !obj_mask.get(x, y) {
                return Err(Error::SeedOutsideMask { x, y });
            }
        }
    }
    let mut out = LabelMap::new(w, h, seeds.tag());
    let Some(b) = obj_mask.bbox() else { return Ok(out) };
    let local_seeds = seeds.crop(b)?.into_vec();
    let local_mask = obj_mask.crop(b)?.bits().to_vec();
    let filled = nearest_seed_fill(&local_seeds, &local_mask, b.width(), b.height());
    let src = LabelMap::from_vec(b.width(), b.height(), filled, seeds.tag())?;
    out.paste_masked_in_place(&src, b, obj_mask)?;
    Ok(out)
}

/// Core of [`floodfill_side`] on a local raster.
fn nearest_seed_fill(seeds: &[u16], mask: &[bool], w: usize, h: usize) -> Vec<u16> {
    let mut labels: Vec<u16> = seeds.iter().copied().filter(|&s| s != 0).collect();
    labels.sort_unstable();
    labels.dedup();
    let mut out = vec![0u16; w * h];
    if labels.is_empty() {
        return out;
    }
    let mut best = vec![f64::INFINITY; w * h];
    for &label in &labels {
        let dist = squared_edt(w, h, |i| seeds[i] == label);
        for i in 0..w * h {
            // ascending label order + strict comparison = lower id wins ties
            if mask[i] && dist[i] < best[i] {
                best[i] = dist[i];
                out[i] = label;
            }
        }
    }
    out
}

/// Exact squared Euclidean distance to the nearest pixel where `is_site`
/// holds, via separable lower envelopes of parabolas.
pub(crate) fn squared_edt(w: usize, h: usize, is_site: impl Fn(usize) -> bool) -> Vec<f64> {
    let mut grid: Vec<f64> =
        (0..w * h).map(|i| if is_site(i) { 0.0 } else { f64::INFINITY }).collect();
    let n = w.max(h);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for x in 0..w {
        for y in 0..h {
            f[y] = grid[y * w + x];
        }
        lower_envelope(&f[..h], &mut d[..h], &mut v, &mut z);
        for y in 0..h {
            grid[y * w + x] = d[y];
        }
    }
    for y in 0..h {
        f[..w].copy_from_slice(&grid[y * w..(y + 1) * w]);
        lower_envelope(&f[..w], &mut d[..w], &mut v, &mut z);
        grid[y * w..(y + 1) * w].copy_from_slice(&d[..w]);
    }
    grid
}

fn lower_envelope(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut finite = (0..n).filter(|&q| f[q].is_finite());
    let Some(first) = finite.next() else {
        out.fill(f64::INFINITY);
        return;
    };
    let mut k = 0;
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in finite {
        let qf = q as f64;
        let mut s;
        loop {
            let p = v[k] as f64;
            s = ((f[q] + qf * qf) - (f[v[k]] + p * p)) / (2.0 * qf - 2.0 * p);
            if s <= z[k] {
                k -= 1;
            } else {
                break;
            }
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let dq = q as f64 - v[k] as f64;
        *o = dq * dq + f[v[k]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::SideSet;

    fn seeds(w: usize, h: usize, data: &[u16]) -> LabelMap {
        LabelMap::from_vec(w, h, data.to_vec(), LabelSet::LeftRight).unwrap()
    }

    #[test]
    fn middle_tie_goes_to_lower_id() {
        let out = floodfill_side(&seeds(3, 1, &[1, 0, 2]), &Mask::from_fn(3, 1, |_, _| true)).unwrap();
        assert_eq!(out.data(), &[1, 1, 2]);
    }

    #[test]
    fn single_seed_covers_mask() {
        let mask = Mask::from_fn(4, 3, |x, y| x + y < 5);
        let mut s = LabelMap::new(4, 3, LabelSet::FrontBack);
        s.set(1, 1, 2);
        let out = floodfill_side(&s, &mask).unwrap();
        for y in 0..3 {
            for x in 0..4 {
                assert_eq!(out.get(x, y), if mask.get(x, y) { 2 } else { 0 });
            }
        }
    }

    #[test]
    fn no_seeds_leaves_background() {
        let out = floodfill_side(&LabelMap::new(3, 3, LabelSet::LeftRight), &Mask::from_fn(3, 3, |_, _| true))
            .unwrap();
        assert!(out.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn seed_outside_mask_is_an_error() {
        let mask = Mask::from_fn(3, 1, |x, _| x < 2);
        assert!(matches!(
            floodfill_side(&seeds(3, 1, &[0, 0, 1]), &mask),
            Err(Error::SeedOutsideMask { x: 2, y: 0 })
        ));
    }

    #[test]
    fn edt_matches_direct_distances() {
        let (w, h) = (7, 5);
        let sites = [(0usize, 0usize), (6, 4), (3, 2)];
        let d = squared_edt(w, h, |i| sites.contains(&(i % w, i / w)));
        for y in 0..h {
            for x in 0..w {
                let want = sites
                    .iter()
                    .map(|&(sx, sy)| {
                        let (dx, dy) = (sx as f64 - x as f64, sy as f64 - y as f64);
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(d[y * w + x], want);
            }
        }
    }

    #[test]
    fn cow_leg_pixel_factors() {
        let o = Ontology::builtin("pp201").unwrap();
        let id = o
            .lookup_monolithic("cow", "lower leg", SideSet::new(Some(Side::Left), Some(Side::Front)))
            .unwrap()
            .unwrap();
        let gt = LabelMap::from_vec(1, 1, vec![id], LabelSet::Monolithic).unwrap();
        let f = relabel(&gt, &o).unwrap();
        assert_eq!(f.s_o.get(0, 0), o.object_id("cow").unwrap());
        assert_eq!(o.root_name(Group::Animate, f.s_a.get(0, 0)), Some("lower leg"));
        assert_eq!(f.s_i.get(0, 0), 0);
        assert_eq!(f.s_lr.get(0, 0), Side::Left.id());
        assert_eq!(f.s_fb.get(0, 0), Side::Front.id());
    }

    #[test]
    fn tv_frame_factors() {
        let o = Ontology::builtin("pp201").unwrap();
        let id = o.lookup_monolithic("tv", "frame", SideSet::NONE).unwrap().unwrap();
        let gt = LabelMap::from_vec(2, 1, vec![id, id], LabelSet::Monolithic).unwrap();
        let f = relabel(&gt, &o).unwrap();
        assert_eq!(f.s_o.data(), &[o.object_id("tv").unwrap(); 2]);
        assert_eq!(o.root_name(Group::Inanimate, f.s_i.get(0, 0)), Some("frame"));
        assert!(f.s_a.data().iter().chain(f.s_lr.data()).chain(f.s_fb.data()).all(|&v| v == 0));
    }

    #[test]
    fn all_background() {
        let o = Ontology::builtin("pp201").unwrap();
        let f = relabel(&LabelMap::new(5, 4, LabelSet::Monolithic), &o).unwrap();
        assert_eq!(f, FactoredMaps::background(5, 4));
    }

    #[test]
    fn inanimate_sides_are_exclusive() {
        let o = Ontology::builtin("pp201").unwrap();
        let side = |s| o.lookup_monolithic("bus", "side", SideSet::single(s)).unwrap().unwrap();
        let gt = LabelMap::from_vec(
            4,
            1,
            vec![side(Side::Left), side(Side::Front), side(Side::Front), side(Side::Right)],
            LabelSet::Monolithic,
        )
        .unwrap();
        let f = relabel(&gt, &o).unwrap();
        assert_eq!(f.s_lr.data(), &[1, 0, 0, 2]);
        assert_eq!(f.s_fb.data(), &[0, 1, 1, 0]);
    }

    #[test]
    fn rejects_wrong_tag_and_unknown_ids() {
        let o = Ontology::builtin("pp58").unwrap();
        let m = LabelMap::new(1, 1, LabelSet::Object);
        assert!(matches!(relabel(&m, &o), Err(Error::TagMismatch { .. })));
        let m = LabelMap::from_vec(1, 1, vec![58], LabelSet::Monolithic).unwrap();
        assert!(matches!(relabel(&m, &o), Err(Error::UnknownLabel { id: 58, .. })));
    }
}
