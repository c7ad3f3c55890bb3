//! Connected-component labeling over label maps, union-find based.

use super::{BBox, LabelMap, Mask};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Connectivity {
    /// Edge neighbours only.
    #[default]
    Four,
    /// Edge and corner neighbours.
    Eight,
}

/// Horizontal run of pixels `[x0, x1)` on row `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub y: usize,
    pub x0: usize,
    pub x1: usize,
}

/// A maximal connected region of one non-background id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub category: u16,
    /// Row-major, non-overlapping runs.
    pub runs: Vec<Run>,
    pub bbox: BBox,
}

impl Component {
    pub fn area(&self) -> usize {
        self.runs.iter().map(|r| r.x1 - r.x0).sum()
    }

    /// First pixel in raster order.
    pub fn top_left(&self) -> (usize, usize) {
        let r = self.runs[0];
        (r.x0, r.y)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        if !self.bbox.contains(x, y) {
            return false;
        }
        let start = self.runs.partition_point(|r| r.y < y);
        self.runs[start..].iter().take_while(|r| r.y == y).any(|r| x >= r.x0 && x < r.x1)
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.runs.iter().flat_map(|r| (r.x0..r.x1).map(move |x| (x, r.y)))
    }

    pub fn to_mask(&self, width: usize, height: usize) -> Mask {
        let mut m = Mask::new(width, height);
        for (x, y) in self.pixels() {
            m.set(x, y, true);
        }
        m
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Keeps the smaller index as root, so roots are the raster-first pixel.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Maximal same-id regions of non-background pixels, ordered by
/// (category id, first pixel in raster order).
pub fn connected_components(m: &LabelMap, connectivity: Connectivity) -> Vec<Component> {
    let (w, h) = m.dims();
    let data = m.data();
    let mut sets = DisjointSet::new(w * h);

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let v = data[i];
            if v == 0 {
                continue;
            }
            if x > 0 && data[i - 1] == v {
                sets.union(i as u32, (i - 1) as u32);
            }
            if y > 0 {
                let up = i - w;
                if data[up] == v {
                    sets.union(i as u32, up as u32);
                }
                if connectivity == Connectivity::Eight {
                    if x > 0 && data[up - 1] == v {
                        sets.union(i as u32, (up - 1) as u32);
                    }
                    if x + 1 < w && data[up + 1] == v {
                        sets.union(i as u32, (up + 1) as u32);
                    }
                }
            }
        }
    }

    // Root index -> output slot, assigned in raster order of the root.
    let mut slot_of_root = vec![u32::MAX; w * h];
    let mut comps: Vec<Component> = Vec::new();
    for y in 0..h {
        let mut x = 0;
        while x < w {
            let i = y * w + x;
            let v = data[i];
            if v == 0 {
                x += 1;
                continue;
            }
            let root = sets.find(i as u32);
            let mut x1 = x + 1;
            while x1 < w && data[y * w + x1] == v && sets.find((y * w + x1) as u32) == root {
                x1 += 1;
            }
            let slot = &mut slot_of_root[root as usize];
            if *slot == u32::MAX {
                *slot = comps.len() as u32;
                comps.push(Component {
                    category: v,
                    runs: Vec::new(),
                    bbox: BBox::new(x, y, x1, y + 1),
                });
            }
            let c = &mut comps[*slot as usize];
            c.runs.push(Run { y, x0: x, x1 });
            c.bbox.x0 = c.bbox.x0.min(x);
            c.bbox.x1 = c.bbox.x1.max(x1);
            c.bbox.y1 = y + 1;
            x = x1;
        }
    }
    comps.sort_by_key(|c| c.category);
    comps
}
