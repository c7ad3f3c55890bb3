//! Brute-force reference implementations and random instance generators
//! shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use factorseg::{LabelMap, LabelSet, Mask, StructuringElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn metric(shape: StructuringElement, dx: i64, dy: i64) -> i64 {
    match shape {
        StructuringElement::Square => dx.abs().max(dy.abs()),
        StructuringElement::Diamond => dx.abs() + dy.abs(),
    }
}

/// Nearest seed by squared Euclidean distance over every seed pixel, lower
/// label on exact ties.
pub fn floodfill_oracle(seeds: &LabelMap, mask: &Mask) -> Vec<u16> {
    let (w, h) = seeds.dims();
    let seed_px: Vec<(i64, i64, u16)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| seeds.get(x, y) != 0)
        .map(|(x, y)| (x as i64, y as i64, seeds.get(x, y)))
        .collect();
    let mut out = vec![0u16; w * h];
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            let mut best: Option<(i64, u16)> = None;
            for &(sx, sy, l) in &seed_px {
                let d = (sx - x as i64).pow(2) + (sy - y as i64).pow(2);
                if best.is_none_or(|(bd, bl)| d < bd || (d == bd && l < bl)) {
                    best = Some((d, l));
                }
            }
            out[y * w + x] = best.map_or(0, |(_, l)| l);
        }
    }
    out
}

/// Every pixel compared against every set pixel.
pub fn dilate_oracle(mask: &Mask, radius: u32, shape: StructuringElement) -> Vec<bool> {
    let (w, h) = mask.dims();
    let set: Vec<(usize, usize)> = mask.iter_set().collect();
    let mut out = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = set
                .iter()
                .any(|&(sx, sy)| metric(shape, sx as i64 - x as i64, sy as i64 - y as i64) <= radius as i64);
        }
    }
    out
}

/// Per-pixel BFS. Returns (category, sorted pixel list) per component,
/// ordered by (category, first pixel in raster order).
pub fn components_oracle(m: &LabelMap, eight: bool) -> Vec<(u16, Vec<(usize, usize)>)> {
    let (w, h) = m.dims();
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = m.get(x, y);
            if v == 0 || seen[y * w + x] {
                continue;
            }
            let mut pixels = Vec::new();
            let mut queue = VecDeque::from([(x, y)]);
            seen[y * w + x] = true;
            while let Some((px, py)) = queue.pop_front() {
                pixels.push((py, px));
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                            continue;
                        }
                        let (nx, ny) = (px as i64 + dx, py as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if !seen[ny * w + nx] && m.get(nx, ny) == v {
                            seen[ny * w + nx] = true;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
            pixels.sort_unstable();
            out.push((v, pixels.into_iter().map(|(y, x)| (x, y)).collect()));
        }
    }
    out.sort_by_key(|(c, _)| *c);
    out
}

/// Pixels within distance `r` of both label `a` and label `b`, checked by a
/// full scan of the distance ball around each pixel.
pub fn proximity_oracle(m: &LabelMap, labels: &[u16], t: u32, shape: StructuringElement) -> Vec<Vec<u64>> {
    let r = t.div_ceil(2) as i64;
    let (w, h) = m.dims();
    let near = |x: usize, y: usize| -> BTreeSet<u16> {
        let mut s = BTreeSet::new();
        for dy in -r..=r {
            for dx in -r..=r {
                if metric(shape, dx, dy) > r {
                    continue;
                }
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx >= 0 && ny >= 0 && nx < w as i64 && ny < h as i64 {
                    s.insert(m.get(nx as usize, ny as usize));
                }
            }
        }
        s
    };
    let k = labels.len();
    let mut raw = vec![vec![0u64; k]; k];
    for y in 0..h {
        for x in 0..w {
            let s = near(x, y);
            for i in 0..k {
                for j in 0..k {
                    if i != j && labels[i] != 0 && labels[j] != 0 && s.contains(&labels[i]) && s.contains(&labels[j]) {
                        raw[i][j] += 1;
                    }
                }
            }
        }
    }
    raw
}

/// Dataset metrics from explicit pixel sets.
#[derive(Debug, Clone, Copy)]
pub struct OracleScores {
    pub miou: f64,
    pub mavg: f64,
    pub sqiou: f64,
    pub sqavg: f64,
}

/// `category_of[p]` is the object id of monolithic id `p`.
pub fn metrics_oracle(pairs: &[(LabelMap, LabelMap)], category_of: &[u16]) -> (BTreeMap<u16, (f64, f64)>, OracleScores) {
    type Px = BTreeSet<(usize, usize)>;
    let pixels = |m: &LabelMap, id: u16| -> Px {
        let (w, h) = m.dims();
        (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).filter(|&(x, y)| m.get(x, y) == id).collect()
    };
    let mut per_part = BTreeMap::new();
    for p in 0..category_of.len() as u16 {
        let (mut inter, mut union, mut ious) = (0usize, 0usize, Vec::new());
        for (pred, gt) in pairs {
            let g = pixels(gt, p);
            if g.is_empty() {
                continue;
            }
            let q = pixels(pred, p);
            let i = g.intersection(&q).count();
            let u = g.union(&q).count();
            inter += i;
            union += u;
            ious.push(i as f64 / u as f64);
        }
        if !ious.is_empty() {
            let sq = ious.iter().sum::<f64>() / ious.len() as f64;
            per_part.insert(p, (inter as f64 / union as f64, sq));
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let miou = mean(&per_part.values().map(|v| v.0).collect::<Vec<_>>());
    let sqiou = mean(&per_part.values().map(|v| v.1).collect::<Vec<_>>());
    let mut by_cat: BTreeMap<u16, Vec<(f64, f64)>> = BTreeMap::new();
    for (&p, &v) in &per_part {
        by_cat.entry(category_of[p as usize]).or_default().push(v);
    }
    let cat_m: Vec<f64> = by_cat.values().map(|v| mean(&v.iter().map(|x| x.0).collect::<Vec<_>>())).collect();
    let cat_s: Vec<f64> = by_cat.values().map(|v| mean(&v.iter().map(|x| x.1).collect::<Vec<_>>())).collect();
    (per_part, OracleScores { miou, mavg: mean(&cat_m), sqiou, sqavg: mean(&cat_s) })
}

pub fn random_mask(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> Mask {
    Mask::from_fn(w, h, |_, _| rng.gen_bool(density))
}

/// Union of a few random rectangles; roughly blob-like masks.
pub fn random_blob_mask(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Mask {
    let mut m = Mask::new(w, h);
    for _ in 0..rng.gen_range(1..=4) {
        let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let (x1, y1) = (rng.gen_range(x0 + 1..=w), rng.gen_range(y0 + 1..=h));
        for y in y0..y1 {
            for x in x0..x1 {
                m.set(x, y, true);
            }
        }
    }
    m
}

/// Seeds with labels in `1..=n_labels` on random mask pixels.
pub fn random_seeds(rng: &mut ChaCha8Rng, mask: &Mask, n_labels: u16, max_seeds: usize, tag: LabelSet) -> LabelMap {
    let (w, h) = mask.dims();
    let inside: Vec<(usize, usize)> = mask.iter_set().collect();
    let mut seeds = LabelMap::new(w, h, tag);
    if inside.is_empty() {
        return seeds;
    }
    for _ in 0..rng.gen_range(0..=max_seeds) {
        let (x, y) = inside[rng.gen_range(0..inside.len())];
        seeds.set(x, y, rng.gen_range(1..=n_labels));
    }
    seeds
}

/// Blocky random map over `ids`, so parts form regions rather than noise.
pub fn random_blocky_map(rng: &mut ChaCha8Rng, w: usize, h: usize, ids: &[u16], tag: LabelSet) -> LabelMap {
    let block = rng.gen_range(1..=4);
    let bw = w.div_ceil(block);
    let cells: Vec<u16> = (0..bw * h.div_ceil(block)).map(|_| ids[rng.gen_range(0..ids.len())]).collect();
    LabelMap::from_fn(w, h, tag, |x, y| cells[(y / block) * bw + x / block])
}

/// `base` with a fraction of pixels replaced by random ids.
pub fn perturb(rng: &mut ChaCha8Rng, base: &LabelMap, ids: &[u16], rate: f64) -> LabelMap {
    let mut m = base.clone();
    for v in m.data_mut() {
        if rng.gen_bool(rate) {
            *v = ids[rng.gen_range(0..ids.len())];
        }
    }
    m
}
