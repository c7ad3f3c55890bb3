//! Label-map storage and the raster kernels everything else is built on.

mod components;
mod morphology;
pub mod netpbm;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use components::{connected_components, Component, Connectivity, Run};
pub use morphology::{dilate, distance_to_set, StructuringElement};

use crate::error::{Error, Result};
use crate::ontology::{LabelSet, Ontology};

/// Axis-aligned box, `x0`/`y0` inclusive and `x1`/`y1` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct BBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl BBox {
    /// Panics on an empty box.
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> BBox {
        BBox::try_new(x0, y0, x1, y1).unwrap_or_else(|| {
            panic!("empty box ({x0},{y0})-({x1},{y1})");
        })
    }

    pub fn try_new(x0: usize, y0: usize, x1: usize, y1: usize) -> Option<BBox> {
        (x0 < x1 && y0 < y1).then_some(BBox { x0, y0, x1, y1 })
    }

    pub fn full(width: usize, height: usize) -> BBox {
        BBox::new(0, 0, width, height)
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn contains_box(&self, other: &BBox) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    pub fn fits_in(&self, width: usize, height: usize) -> bool {
        self.x1 <= width && self.y1 <= height
    }

    fn check_fits(&self, width: usize, height: usize) -> Result<()> {
        if self.fits_in(width, height) {
            Ok(())
        } else {
            Err(Error::OutOfBounds { bbox: *self, width, height })
        }
    }
}

impl fmt::Display for BBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.x0, self.y0, self.x1, self.y1)
    }
}

impl TryFrom<[usize; 4]> for BBox {
    type Error = String;

    fn try_from([x0, y0, x1, y1]: [usize; 4]) -> std::result::Result<Self, String> {
        BBox::try_new(x0, y0, x1, y1).ok_or_else(|| format!("empty box [{x0}, {y0}, {x1}, {y1}]"))
    }
}

impl From<BBox> for [usize; 4] {
    fn from(b: BBox) -> Self {
        [b.x0, b.y0, b.x1, b.y1]
    }
}

/// Binary raster mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Mask {
        Mask { width, height, bits: vec![false; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Mask {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Mask { width, height, bits }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Mask> {
        if bits.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} mask bits for a {width}x{height} raster",
                bits.len()
            )));
        }
        Ok(Mask { width, height, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Set pixels in raster order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| (i % w, i / w))
    }

    /// Tight bounding box, `None` when empty.
    pub fn bbox(&self) -> Option<BBox> {
        let mut it = self.iter_set();
        let (x, y) = it.next()?;
        let (mut x0, mut y0, mut x1, mut y1) = (x, y, x, y);
        for (x, y) in it {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        Some(BBox::new(x0, y0, x1 + 1, y1 + 1))
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn intersection_count(&self, other: &Mask) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(&a, &b)| a && b).count()
    }

    pub fn crop(&self, b: BBox) -> Result<Mask> {
        b.check_fits(self.width, self.height)?;
        Ok(Mask::from_fn(b.width(), b.height(), |x, y| self.get(b.x0 + x, b.y0 + y)))
    }
}

/// W×H grid of label ids, tagged with the label set that interprets them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    data: Vec<u16>,
    tag: LabelSet,
}

impl LabelMap {
    /// All-background map.
    pub fn new(width: usize, height: usize, tag: LabelSet) -> LabelMap {
        LabelMap { width, height, data: vec![0; width * height], tag }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u16>, tag: LabelSet) -> Result<LabelMap> {
        if data.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a {width}x{height} label map",
                data.len()
            )));
        }
        Ok(LabelMap { width, height, data, tag })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        tag: LabelSet,
        mut f: impl FnMut(usize, usize) -> u16,
    ) -> LabelMap {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        LabelMap { width, height, data, tag }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn tag(&self) -> LabelSet {
        self.tag
    }

    pub fn with_tag(mut self, tag: LabelSet) -> LabelMap {
        self.tag = tag;
        self
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u16] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<u16> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, id: u16) {
        self.data[y * self.width + x] = id;
    }

    pub fn expect_tag(&self, tag: LabelSet) -> Result<()> {
        if self.tag == tag {
            Ok(())
        } else {
            Err(Error::TagMismatch { expected: tag, actual: self.tag })
        }
    }

    pub fn expect_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() == dims {
            Ok(())
        } else {
            Err(Error::shape(dims, self.dims()))
        }
    }

    /// Checks every id against the size of the tagged label set.
    pub fn validate(&self, ontology: &Ontology) -> Result<()> {
        let n = ontology.label_set_size(self.tag);
        match self.data.iter().find(|&&id| id as usize >= n) {
            Some(&id) => Err(Error::UnknownLabel { id, set: self.tag }),
            None => Ok(()),
        }
    }

    pub fn mask_of(&self, id: u16) -> Mask {
        Mask { width: self.width, height: self.height, bits: self.data.iter().map(|&v| v == id).collect() }
    }

    pub fn foreground(&self) -> Mask {
        Mask { width: self.width, height: self.height, bits: self.data.iter().map(|&v| v != 0).collect() }
    }

    /// Distinct non-background ids in ascending order.
    pub fn labels_present(&self) -> Vec<u16> {
        let mut seen: Vec<u16> = self.data.iter().copied().filter(|&v| v != 0).collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }

    pub fn crop(&self, b: BBox) -> Result<LabelMap> {
        b.check_fits(self.width, self.height)?;
        let mut data = Vec::with_capacity(b.area());
        for y in b.y0..b.y1 {
            data.extend_from_slice(&self.data[y * self.width + b.x0..y * self.width + b.x1]);
        }
        Ok(LabelMap { width: b.width(), height: b.height(), data, tag: self.tag })
    }

    /// Copy of `self` where pixels in `mask` take the corresponding pixel of
    /// `src`, which covers exactly `b`. `mask` is in `self` coordinates.
    pub fn paste_masked(&self, src: &LabelMap, b: BBox, mask: &Mask) -> Result<LabelMap> {
        let mut out = self.clone();
        out.paste_masked_in_place(src, b, mask)?;
        Ok(out)
    }

    pub fn paste_masked_in_place(&mut self, src: &LabelMap, b: BBox, mask: &Mask) -> Result<()> {
        b.check_fits(self.width, self.height)?;
        if src.dims() != (b.width(), b.height()) {
            return Err(Error::shape((b.width(), b.height()), src.dims()));
        }
        if mask.dims() != self.dims() {
            return Err(Error::shape(self.dims(), mask.dims()));
        }
        if let Some((x, y)) = mask.iter_set().find(|&(x, y)| !b.contains(x, y)) {
            return Err(Error::MaskOutsideBox { x, y, bbox: b });
        }
        for y in b.y0..b.y1 {
            for x in b.x0..b.x1 {
                if mask.get(x, y) {
                    self.data[y * self.width + x] = src.get(x - b.x0, y - b.y0);
                }
            }
        }
        Ok(())
    }
}

/// Per-pixel non-negative scores over an ordered list of label ids.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMap {
    width: usize,
    height: usize,
    labels: Vec<u16>,
    scores: Vec<f32>,
}

impl ScoreMap {
    /// `scores` is pixel-major: the `labels.len()` scores of pixel 0, then pixel 1, ...
    pub fn new(width: usize, height: usize, labels: Vec<u16>, scores: Vec<f32>) -> Result<ScoreMap> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("score map needs at least one label".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::InvalidArgument("score map labels must be distinct".into()));
        }
        if scores.len() != width * height * labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} scores for a {width}x{height} map over {} labels",
                scores.len(),
                labels.len()
            )));
        }
        if scores.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidArgument("scores must be finite and non-negative".into()));
        }
        Ok(ScoreMap { width, height, labels, scores })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn raw_scores(&self) -> &[f32] {
        &self.scores
    }

    pub fn scores_at(&self, x: usize, y: usize) -> &[f32] {
        let k = self.labels.len();
        let i = (y * self.width + x) * k;
        &self.scores[i..i + k]
    }

    /// Highest-scoring label at a pixel among labels accepted by `keep`;
    /// ties go to the lowest label id.
    pub fn best_at(&self, x: usize, y: usize, keep: impl Fn(u16) -> bool) -> Option<(u16, f32)> {
        let mut best: Option<(u16, f32)> = None;
        for (&label, &score) in self.labels.iter().zip(self.scores_at(x, y)) {
            if !keep(label) {
                continue;
            }
            best = match best {
                Some((bl, bs)) if bs > score || (bs == score && bl < label) => Some((bl, bs)),
                _ => Some((label, score)),
            };
        }
        best
    }

    pub fn argmax(&self, tag: LabelSet) -> LabelMap {
        LabelMap::from_fn(self.width, self.height, tag, |x, y| {
            self.best_at(x, y, |_| true).expect("non-empty labels").0
        })
    }

    pub fn crop(&self, b: BBox) -> Result<ScoreMap> {
        b.check_fits(self.width, self.height)?;
        let k = self.labels.len();
        let mut scores = Vec::with_capacity(b.area() * k);
        for y in b.y0..b.y1 {
            let row = y * self.width;
            scores.extend_from_slice(&self.scores[(row + b.x0) * k..(row + b.x1) * k]);
        }
        Ok(ScoreMap { width: b.width(), height: b.height(), labels: self.labels.clone(), scores })
    }
}
