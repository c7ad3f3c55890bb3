//! Seeded synthetic ground-truth scenes.
//!
//! Objects sit in the cells of a square-ish grid, one per cell, as a filled
//! rectangle or ellipse with at least a one-pixel gap to the cell border.
//! Each part-bearing object is cut into horizontal bands, one per chosen
//! (root, front/back) pair: front bands on top, back bands at the bottom.
//! A band whose part exists in left and right variants is split into a left
//! half and a right half.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ontology::{Group, LabelSet, Ontology, Side};
use crate::raster::LabelMap;

/// Smallest grid cell that still holds an object.
pub const MIN_CELL: usize = 6;
const MAX_BANDS: usize = 6;

pub fn gen_synthetic(seed: u64, o: &Ontology, width: usize, height: usize, n_objects: usize) -> Result<LabelMap> {
    let mut out = LabelMap::new(width, height, LabelSet::Monolithic);
    if n_objects == 0 {
        return Ok(out);
    }
    let cols = (n_objects as f64).sqrt().ceil() as usize;
    let rows = n_objects.div_ceil(cols);
    let (cw, ch) = (width / cols, height / rows);
    if cw < MIN_CELL || ch < MIN_CELL || o.categories().is_empty() {
        return Err(Error::DoesNotFit { n_objects, width, height });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n_objects {
        let (gx, gy) = (i % cols, i / cols);
        // usable region inside the cell, one pixel in from each edge
        let (rx0, ry0) = (gx * cw + 1, gy * ch + 1);
        let (rw, rh) = (cw - 2, ch - 2);
        let bw = rng.gen_range(rw.div_ceil(2).max(4).min(rw)..=rw);
        let bh = rng.gen_range(rh.div_ceil(2).max(4).min(rh)..=rh);
        let x0 = rx0 + rng.gen_range(0..=rw - bw);
        let y0 = ry0 + rng.gen_range(0..=rh - bh);
        let ellipse = rng.gen_bool(0.5);
        let object = rng.gen_range(1..=o.categories().len()) as u16;
        let bands = choose_bands(o, object, bh, &mut rng);

        let (cx, cy) = (x0 as f64 + bw as f64 / 2.0, y0 as f64 + bh as f64 / 2.0);
        let (ax, ay) = (bw as f64 / 2.0, bh as f64 / 2.0);
        for y in y0..y0 + bh {
            for x in x0..x0 + bw {
                if ellipse {
                    let dx = (x as f64 + 0.5 - cx) / ax;
                    let dy = (y as f64 + 0.5 - cy) / ay;
                    if dx * dx + dy * dy > 1.0 {
                        continue;
                    }
                }
                let band = &bands[(y - y0) * bands.len() / bh];
                let id = if x - x0 < bw / 2 { band.0 } else { band.1 };
                out.set(x, y, id);
            }
        }
    }
    Ok(out)
}

/// (left-half id, right-half id) per band, top to bottom.
fn choose_bands(o: &Ontology, object: u16, max_bands: usize, rng: &mut ChaCha8Rng) -> Vec<(u16, u16)> {
    let cat = o.category(object).expect("valid object id");
    if cat.group == Group::NoParts {
        let id = o.bare_id(object).expect("noparts category has a bare id");
        return vec![(id, id)];
    }
    // distinct (root, front/back) keys in declaration order
    let mut keys: Vec<(String, Option<Side>)> = Vec::new();
    for p in &cat.parts {
        let key = (p.root.clone(), p.sides.fb);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.shuffle(rng);
    keys.truncate(rng.gen_range(1..=keys.len().min(MAX_BANDS).min(max_bands)));
    let rank = |fb: Option<Side>| match fb {
        Some(Side::Front) => 0,
        None => 1,
        _ => 2,
    };
    keys.sort_by_key(|(_, fb)| rank(*fb));

    keys.iter()
        .map(|(root, fb)| {
            let variants: Vec<_> =
                cat.parts.iter().filter(|p| &p.root == root && p.sides.fb == *fb).collect();
            let id_of = |lr: Option<Side>| {
                variants.iter().find(|p| p.sides.lr == lr).map(|p| {
                    o.lookup_monolithic(&cat.name, &p.root, p.sides)
                        .expect("known category")
                        .expect("declared part")
                })
            };
            match (id_of(Some(Side::Left)), id_of(Some(Side::Right))) {
                (Some(l), Some(r)) => (l, r),
                _ => {
                    let p = variants.choose(rng).expect("key comes from a part");
                    let id = o
                        .lookup_monolithic(&cat.name, &p.root, p.sides)
                        .expect("known category")
                        .expect("declared part");
                    (id, id)
                }
            }
        })
        .collect()
}
