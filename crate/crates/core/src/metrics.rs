//! mIOU, mAvg, sqIOU and sqAvg over a dataset of (prediction, ground truth)
//! pairs.
//!
//! A part counts in an image only when the ground truth contains it.
//! mIOU of a part is dataset-aggregate intersection over aggregate union;
//! sqIOU is the mean of its per-image IOUs over the images containing it.
//! Category scores average the category's parts (background is its own
//! category), and mAvg/sqAvg average the categories.

use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::ontology::{LabelSet, Ontology};
use crate::raster::LabelMap;

/// Aggregates for one part id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartStats {
    pub intersection: u64,
    pub union: u64,
    /// One IOU per image where the part is present in the ground truth.
    pub ious: Vec<f64>,
}

impl PartStats {
    pub fn presence(&self) -> usize {
        self.ious.len()
    }

    pub fn miou(&self) -> Option<f64> {
        (self.presence() > 0).then(|| self.intersection as f64 / self.union as f64)
    }

    /// Summed in sorted order so the value does not depend on image order.
    pub fn sqiou(&self) -> Option<f64> {
        if self.ious.is_empty() {
            return None;
        }
        let mut v = self.ious.clone();
        v.sort_by(f64::total_cmp);
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

/// Per-part aggregates, indexed by monolithic id (background included).
#[derive(Debug, Clone, PartialEq)]
pub struct PartTally {
    parts: Vec<PartStats>,
    images: usize,
}

impl PartTally {
    pub fn new(n_parts: usize) -> PartTally {
        PartTally { parts: vec![PartStats::default(); n_parts], images: 0 }
    }

    pub fn for_ontology(o: &Ontology) -> PartTally {
        PartTally::new(o.label_set_size(LabelSet::Monolithic))
    }

    /// Tally of a single image pair.
    pub fn of_image(pred: &LabelMap, gt: &LabelMap, n_parts: usize) -> Result<PartTally> {
        let mut t = PartTally::new(n_parts);
        t.accumulate(pred, gt)?;
        Ok(t)
    }

    pub fn accumulate(&mut self, pred: &LabelMap, gt: &LabelMap) -> Result<()> {
        gt.expect_tag(LabelSet::Monolithic)?;
        pred.expect_tag(LabelSet::Monolithic)?;
        pred.expect_dims(gt.dims())?;
        let n = self.parts.len();
        let mut gt_count = vec![0u64; n];
        let mut pred_count = vec![0u64; n];
        let mut inter = vec![0u64; n];
        for (&p, &g) in pred.data().iter().zip(gt.data()) {
            for id in [p, g] {
                if id as usize >= n {
                    return Err(Error::UnknownLabel { id, set: LabelSet::Monolithic });
                }
            }
            gt_count[g as usize] += 1;
            pred_count[p as usize] += 1;
            if p == g {
                inter[g as usize] += 1;
            }
        }
        for (id, stats) in self.parts.iter_mut().enumerate() {
            if gt_count[id] == 0 {
                continue;
            }
            let union = gt_count[id] + pred_count[id] - inter[id];
            stats.intersection += inter[id];
            stats.union += union;
            stats.ious.push(inter[id] as f64 / union as f64);
        }
        self.images += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &PartTally) {
        assert_eq!(self.parts.len(), other.parts.len(), "tallies over different label sets");
        for (a, b) in self.parts.iter_mut().zip(&other.parts) {
            a.intersection += b.intersection;
            a.union += b.union;
            a.ious.extend_from_slice(&b.ious);
        }
        self.images += other.images;
    }

    pub fn images(&self) -> usize {
        self.images
    }

    pub fn part(&self, id: u16) -> &PartStats {
        &self.parts[id as usize]
    }

    pub fn parts(&self) -> &[PartStats] {
        &self.parts
    }

    pub fn miou_part(&self, id: u16) -> Option<f64> {
        self.part(id).miou()
    }

    pub fn sqiou_part(&self, id: u16) -> Option<f64> {
        self.part(id).sqiou()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MetricOptions {
    /// Count parts never present in the ground truth as 0 instead of
    /// leaving them out of the means.
    pub zero_absent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartScore {
    pub id: u16,
    pub name: String,
    pub miou: Option<f64>,
    pub sqiou: Option<f64>,
    pub presence: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryScore {
    pub name: String,
    pub miou_c: Option<f64>,
    pub sqiou_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetScore {
    pub miou: f64,
    pub mavg: f64,
    pub sqiou: f64,
    pub sqavg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub ontology: String,
    pub images: usize,
    pub parts: Vec<PartScore>,
    pub categories: Vec<CategoryScore>,
    pub dataset: DatasetScore,
}

fn mean(values: impl Iterator<Item = Option<f64>>, zero_absent: bool) -> Option<f64> {
    let kept: Vec<f64> =
        values.filter_map(|v| if zero_absent { Some(v.unwrap_or(0.0)) } else { v }).collect();
    (!kept.is_empty()).then(|| kept.iter().sum::<f64>() / kept.len() as f64)
}

/// All part, category and dataset scores.
pub fn evaluate(t: &PartTally, o: &Ontology, opts: MetricOptions) -> Result<Report> {
    let n = o.label_set_size(LabelSet::Monolithic);
    if t.parts.len() != n {
        return Err(Error::InvalidArgument(format!(
            "tally covers {} parts, ontology has {n}",
            t.parts.len()
        )));
    }
    if t.parts.iter().all(|p| p.presence() == 0) {
        return Err(Error::EmptyDataset);
    }
    let parts: Vec<PartScore> = (0..n as u16)
        .map(|id| PartScore {
            id,
            name: o.monolithic_name(id).unwrap_or_default().to_owned(),
            miou: t.miou_part(id),
            sqiou: t.sqiou_part(id),
            presence: t.part(id).presence(),
        })
        .collect();

    let z = opts.zero_absent;
    let categories: Vec<CategoryScore> = (0..o.label_set_size(LabelSet::Object) as u16)
        .map(|c| {
            let ids = o.monolithic_ids_of(c);
            CategoryScore {
                name: o.object_name(c).unwrap_or_default().to_owned(),
                miou_c: mean(ids.iter().map(|&p| parts[p as usize].miou), z),
                sqiou_c: mean(ids.iter().map(|&p| parts[p as usize].sqiou), z),
            }
        })
        .collect();

    let some = |v: Option<f64>| v.expect("at least one part is present");
    let dataset = DatasetScore {
        miou: some(mean(parts.iter().map(|p| p.miou), z)),
        sqiou: some(mean(parts.iter().map(|p| p.sqiou), z)),
        mavg: some(mean(categories.iter().map(|c| c.miou_c), z)),
        sqavg: some(mean(categories.iter().map(|c| c.sqiou_c), z)),
    };
    Ok(Report { ontology: o.version().to_owned(), images: t.images(), parts, categories, dataset })
}

/// A float written with exactly six decimals, or `null`.
struct Fixed6(Option<f64>);

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => RawValue::from_string(format!("{v:.6}"))
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            None => s.serialize_none(),
        }
    }
}

impl Report {
    /// Pretty JSON with six-decimal floats.
    pub fn to_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct Part<'a> {
            id: u16,
            name: &'a str,
            miou: Fixed6,
            sqiou: Fixed6,
            presence: usize,
        }
        #[derive(serde::Serialize)]
        struct Category<'a> {
            name: &'a str,
            miou_c: Fixed6,
            sqiou_c: Fixed6,
        }
        #[derive(serde::Serialize)]
        struct Dataset {
            miou: Fixed6,
            mavg: Fixed6,
            sqiou: Fixed6,
            sqavg: Fixed6,
        }
        #[derive(serde::Serialize)]
        struct Doc<'a> {
            ontology: &'a str,
            images: usize,
            dataset: Dataset,
            categories: Vec<Category<'a>>,
            parts: Vec<Part<'a>>,
        }
        let doc = Doc {
            ontology: &self.ontology,
            images: self.images,
            dataset: Dataset {
                miou: Fixed6(Some(self.dataset.miou)),
                mavg: Fixed6(Some(self.dataset.mavg)),
                sqiou: Fixed6(Some(self.dataset.sqiou)),
                sqavg: Fixed6(Some(self.dataset.sqavg)),
            },
            categories: self
                .categories
                .iter()
                .map(|c| Category { name: &c.name, miou_c: Fixed6(c.miou_c), sqiou_c: Fixed6(c.sqiou_c) })
                .collect(),
            parts: self
                .parts
                .iter()
                .map(|p| Part {
                    id: p.id,
                    name: &p.name,
                    miou: Fixed6(p.miou),
                    sqiou: Fixed6(p.sqiou),
                    presence: p.presence,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(w: usize, h: usize, f: impl FnMut(usize, usize) -> u16) -> LabelMap {
        LabelMap::from_fn(w, h, LabelSet::Monolithic, f)
    }

    #[test]
    fn small_and_large_instance() {
        // part 1: 10 px perfectly predicted in image A, 100 px with 10 hits in image B
        let gt_a = map(10, 1, |_, _| 1);
        let gt_b = map(10, 10, |_, _| 1);
        let pred_b = map(10, 10, |_, y| if y == 0 { 1 } else { 0 });
        let mut t = PartTally::new(3);
        t.accumulate(&gt_a, &gt_a).unwrap();
        t.accumulate(&pred_b, &gt_b).unwrap();
        assert!((t.miou_part(1).unwrap() - 20.0 / 110.0).abs() < 1e-12);
        assert!((t.sqiou_part(1).unwrap() - 0.55).abs() < 1e-12);
        assert_eq!(t.part(1).presence(), 2);
        assert_eq!(t.miou_part(2), None);
    }

    #[test]
    fn absent_parts_ignore_false_positives() {
        let gt = map(2, 1, |_, _| 1);
        let pred = map(2, 1, |x, _| if x == 0 { 1 } else { 2 });
        let t = PartTally::of_image(&pred, &gt, 3).unwrap();
        assert_eq!(t.part(2).presence(), 0);
        assert_eq!(t.miou_part(1), Some(0.5));
    }

    #[test]
    fn perfect_prediction_scores_one() {
        let o = Ontology::builtin("pp58").unwrap();
        let gt = map(6, 6, |x, y| ((x + y) % 4) as u16);
        let t = PartTally::of_image(&gt, &gt, 58).unwrap();
        let r = evaluate(&t, &o, MetricOptions::default()).unwrap();
        assert_eq!(r.dataset, DatasetScore { miou: 1.0, mavg: 1.0, sqiou: 1.0, sqavg: 1.0 });
        let z = evaluate(&t, &o, MetricOptions { zero_absent: true }).unwrap();
        assert!((z.dataset.miou - 4.0 / 58.0).abs() < 1e-12);
    }

    #[test]
    fn empty_dataset() {
        let o = Ontology::builtin("pp58").unwrap();
        let t = PartTally::for_ontology(&o);
        assert!(matches!(evaluate(&t, &o, MetricOptions::default()), Err(Error::EmptyDataset)));
    }

    #[test]
    fn merge_is_order_independent() {
        let a = map(3, 1, |x, _| x as u16);
        let b = map(3, 1, |_, _| 2);
        let ta = PartTally::of_image(&a, &b, 4).unwrap();
        let tb = PartTally::of_image(&b, &a, 4).unwrap();
        let mut ab = ta.clone();
        ab.merge(&tb);
        let mut ba = tb.clone();
        ba.merge(&ta);
        for id in 0..4 {
            assert_eq!(ab.miou_part(id), ba.miou_part(id));
            assert_eq!(ab.sqiou_part(id), ba.sqiou_part(id));
        }
    }

    #[test]
    fn report_uses_six_decimals() {
        let o = Ontology::builtin("pp58").unwrap();
        let gt = map(3, 1, |_, _| 1);
        let pred = map(3, 1, |x, _| if x == 0 { 1 } else { 0 });
        let r = evaluate(&PartTally::of_image(&pred, &gt, 58).unwrap(), &o, MetricOptions::default())
            .unwrap();
        let s = r.to_json();
        assert!(s.contains("\"miou\": 0.333333"), "{s}");
        assert!(s.contains("\"miou_c\": null"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["parts"][1]["presence"], 1);
    }
}
