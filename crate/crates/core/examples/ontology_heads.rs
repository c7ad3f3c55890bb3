// Label-set sizes and output-head counts of the shipped ontologies.

use factorseg::ontology::parse_part_label;
use factorseg::{Group, LabelSet, Ontology};

pub fn run_example() -> factorseg::Result<Vec<(String, usize)>> {
    let mut heads = Vec::new();
    for name in Ontology::builtin_names() {
        let o = Ontology::builtin(name).expect("shipped");
        let sizes: Vec<String> = LabelSet::ALL
            .iter()
            .map(|&s| format!("{}={}", s.name(), o.label_set_size(s)))
            .collect();
        println!("{name}: {} heads ({})", o.output_head_count(), sizes.join(", "));
        heads.push((name.to_owned(), o.output_head_count()));
    }

    let leg = parse_part_label("left front lower leg", "cow", Group::Animate)?;
    println!("{leg}: root `{}`, sides {:?}", leg.root, leg.sides.iter().collect::<Vec<_>>());
    Ok(heads)
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
