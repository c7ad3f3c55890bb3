// Nearest-seed side propagation inside an object mask.

use factorseg::relabel::floodfill_side;
use factorseg::{LabelMap, LabelSet, Mask};

pub fn run_example() -> factorseg::Result<LabelMap> {
    // a 9x5 blob with one left seed and one right seed
    let mask = Mask::from_fn(9, 5, |x, y| (x as i32 - 4).pow(2) / 4 + (y as i32 - 2).pow(2) <= 4);
    let mut seeds = LabelMap::new(9, 5, LabelSet::LeftRight);
    seeds.set(2, 2, 1);
    seeds.set(6, 2, 2);

    let filled = floodfill_side(&seeds, &mask)?;
    for y in 0..5 {
        let row: String = (0..9)
            .map(|x| match filled.get(x, y) {
                0 => '.',
                1 => 'L',
                _ => 'R',
            })
            .collect();
        println!("{row}");
    }
    Ok(filled)
}

fn main() -> factorseg::Result<()> {
    run_example().map(|_| ())
}
