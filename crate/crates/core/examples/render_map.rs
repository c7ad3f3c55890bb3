// Colorize a synthetic scene and its object map.

use factorseg::relabel::relabel;
use factorseg::render::render;
use factorseg::synth::gen_synthetic;
use factorseg::Ontology;

pub fn run_example() -> Result<Vec<u8>, Box<dyn std::error::Error>> {
    let o = Ontology::builtin("pp108").expect("shipped");
    let gt = gen_synthetic(3, &o, 64, 64, 4)?;
    let parts = render(&gt, &o)?;
    let objects = render(&relabel(&gt, &o)?.s_o, &o)?;
    println!("part rendering: {} bytes, object rendering: {} bytes", parts.len(), objects.len());

    let path = std::env::temp_dir().join("factorseg_parts.ppm");
    std::fs::write(&path, &parts)?;
    println!("wrote {}", path.display());
    Ok(parts)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
