// Per-object refinement with a stand-in network callback.
//
// The coarse prediction has the right objects but no side information; the
// callback answers every crop with the true factored maps.

use factorseg::izr::{izr_refine, pad_bbox, PadPolicy};
use factorseg::merge::top_down_merge;
use factorseg::raster::connected_components;
use factorseg::relabel::relabel;
use factorseg::synth::gen_synthetic;
use factorseg::{Connectivity, FactoredMaps, LabelMap, LabelSet, Ontology};

pub fn run_example() -> factorseg::Result<(usize, usize)> {
    let o = Ontology::builtin("pp201").expect("shipped");
    let gt = gen_synthetic(21, &o, 120, 80, 4)?;
    let truth = relabel(&gt, &o)?;
    let coarse = FactoredMaps {
        s_lr: LabelMap::new(120, 80, LabelSet::LeftRight),
        s_fb: LabelMap::new(120, 80, LabelSet::FrontBack),
        ..truth.clone()
    };

    let policy = PadPolicy::default();
    for c in connected_components(&coarse.s_o, Connectivity::Four) {
        let padded = pad_bbox(c.bbox, 120, 80, policy);
        println!("{:<10} {} -> {}", o.object_name(c.category).unwrap_or("?"), c.bbox, padded);
    }

    let wrong = |m: &LabelMap| gt.data().iter().zip(m.data()).filter(|(a, b)| a != b).count();
    let before = wrong(&top_down_merge(&coarse, &o)?);
    let after = wrong(&izr_refine(&coarse, &o, |b| truth.crop(b), policy)?);
    println!("wrong pixels: {before} before refinement, {after} after");
    Ok((before, after))
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
