// mIOU versus sqIOU on a small, perfectly segmented instance and a large,
// badly segmented one.

use factorseg::metrics::{evaluate, MetricOptions, PartTally};
use factorseg::{LabelMap, LabelSet, Ontology};

pub fn run_example() -> factorseg::Result<(f64, f64)> {
    let o = Ontology::builtin("pp58").expect("shipped");
    let part = 1;
    let small_gt = LabelMap::from_fn(10, 1, LabelSet::Monolithic, |_, _| part);
    let large_gt = LabelMap::from_fn(10, 10, LabelSet::Monolithic, |_, _| part);
    let large_pred = LabelMap::from_fn(10, 10, LabelSet::Monolithic, |_, y| if y == 0 { part } else { 0 });

    let mut t = PartTally::for_ontology(&o);
    t.accumulate(&small_gt, &small_gt)?;
    t.accumulate(&large_pred, &large_gt)?;
    let miou = t.miou_part(part).expect("present");
    let sqiou = t.sqiou_part(part).expect("present");
    println!("{}: mIOU {miou:.4}  sqIOU {sqiou:.4}", o.monolithic_name(part).unwrap_or("?"));

    let report = evaluate(&t, &o, MetricOptions::default())?;
    println!(
        "dataset: mIOU {:.4} mAvg {:.4} sqIOU {:.4} sqAvg {:.4}",
        report.dataset.miou, report.dataset.mavg, report.dataset.sqiou, report.dataset.sqavg
    );
    Ok((miou, sqiou))
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
