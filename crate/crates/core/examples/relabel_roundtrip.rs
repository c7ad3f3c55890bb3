// Synthetic scene -> factored maps -> merged back, pixel for pixel.

use factorseg::merge::top_down_merge;
use factorseg::relabel::relabel;
use factorseg::synth::gen_synthetic;
use factorseg::Ontology;

pub fn run_example() -> factorseg::Result<usize> {
    let o = Ontology::builtin("pp201").expect("shipped");
    let gt = gen_synthetic(7, &o, 96, 72, 5)?;
    let f = relabel(&gt, &o)?;
    let back = top_down_merge(&f, &o)?;

    let parts = gt.labels_present();
    println!("{} parts in scene:", parts.len());
    for id in &parts {
        println!("  {:3} {}", id, o.monolithic_name(*id).unwrap_or("?"));
    }
    let mismatches = gt.data().iter().zip(back.data()).filter(|(a, b)| a != b).count();
    println!("round-trip mismatches: {mismatches}");
    Ok(mismatches)
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
