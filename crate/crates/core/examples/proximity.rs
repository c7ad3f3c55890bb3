// Part proximity matrices and the graph-matching score between a ground
// truth and a prediction that swaps two parts.

use factorseg::graphmatch::{gm_score, proximity_matrix, DEFAULT_T};
use factorseg::{LabelMap, LabelSet, StructuringElement};

pub fn run_example() -> factorseg::Result<f64> {
    // three stacked stripes: 1 above 2 above 3
    let gt = LabelMap::from_fn(12, 12, LabelSet::Monolithic, |_, y| (y / 4 + 1) as u16);
    // prediction puts 3 on top, making 3 and 1 neighbours instead of 2 and 3
    let pred = LabelMap::from_fn(12, 12, LabelSet::Monolithic, |_, y| [3, 1, 2][y / 4]);
    let labels = [1, 2, 3];
    let shape = StructuringElement::Square;

    let p = proximity_matrix(&gt, &labels, DEFAULT_T, shape)?;
    for (l, row) in labels.iter().zip(&p.raw) {
        println!("part {l}: {row:?}");
    }
    let gm = gm_score(&gt, &pred, &labels, DEFAULT_T, shape)?;
    println!("graph-matching score: {gm:.4}");
    Ok(gm)
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
