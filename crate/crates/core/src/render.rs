//! Colorized label maps as binary PPM.
//!
//! Background is black. Id `i` of a label set gets hue
//! `frac(offset(set) + i * φ⁻¹)` at full saturation and value, so colors are
//! the same on every run and differ between neighbouring ids.

use crate::error::{Error, Result};
use crate::ontology::{LabelSet, Ontology};
use crate::raster::{netpbm, LabelMap};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn set_offset(set: LabelSet) -> f64 {
    match set {
        LabelSet::Object => 0.0,
        LabelSet::AnimateRoot => 0.11,
        LabelSet::InanimateRoot => 0.23,
        LabelSet::LeftRight => 0.37,
        LabelSet::FrontBack => 0.53,
        LabelSet::Monolithic => 0.71,
    }
}

/// RGB color of one id.
pub fn color(set: LabelSet, id: u16) -> [u8; 3] {
    if id == 0 {
        return [0, 0, 0];
    }
    let hue = (set_offset(set) + id as f64 * GOLDEN).fract();
    hsv_full(hue)
}

/// Hue in [0, 1) at saturation = value = 1.
fn hsv_full(hue: f64) -> [u8; 3] {
    let h = hue * 6.0;
    let sector = h.floor() as u32 % 6;
    let f = h - h.floor();
    let up = (f * 255.0).round() as u8;
    let down = ((1.0 - f) * 255.0).round() as u8;
    match sector {
        0 => [255, up, 0],
        1 => [down, 255, 0],
        2 => [0, 255, up],
        3 => [0, down, 255],
        4 => [up, 0, 255],
        _ => [255, 0, down],
    }
}

/// RGB bytes, row-major.
pub fn render_rgb(m: &LabelMap, o: &Ontology) -> Result<Vec<u8>> {
    m.validate(o)?;
    Ok(m.data().iter().flat_map(|&id| color(m.tag(), id)).collect())
}

/// Binary PPM rendering of a label map.
pub fn render(m: &LabelMap, o: &Ontology) -> Result<Vec<u8>> {
    let rgb = render_rgb(m, o)?;
    Ok(netpbm::encode_ppm(m.width(), m.height(), &rgb))
}

pub fn render_to_file(m: &LabelMap, o: &Ontology, path: impl AsRef<std::path::Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render(m, o)?).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn background_is_black() {
        let o = Ontology::builtin("pp58").unwrap();
        let ppm = render(&LabelMap::new(3, 2, LabelSet::Monolithic), &o).unwrap();
        let (w, h, rgb) = netpbm::decode_ppm(&ppm).unwrap();
        assert_eq!((w, h), (3, 2));
        assert!(rgb.iter().all(|&b| b == 0));
    }

    #[test]
    fn deterministic_bytes() {
        let o = Ontology::builtin("pp108").unwrap();
        let m = LabelMap::from_fn(9, 4, LabelSet::Monolithic, |x, y| (x * 4 + y) as u16);
        assert_eq!(render(&m, &o).unwrap(), render(&m, &o).unwrap());
    }

    #[test]
    fn no_collisions_in_shipped_sets() {
        for name in ["pp58", "pp108", "pp201"] {
            let o = Ontology::builtin(name).unwrap();
            for set in LabelSet::ALL {
                let n = o.label_set_size(set) as u16;
                let colors: HashSet<_> = (0..n).map(|i| color(set, i)).collect();
                assert_eq!(colors.len(), n as usize, "{name} {set}");
            }
        }
    }

    #[test]
    fn rejects_ids_outside_the_set() {
        let o = Ontology::builtin("pp58").unwrap();
        let m = LabelMap::from_vec(1, 1, vec![3], LabelSet::LeftRight).unwrap();
        assert!(matches!(render(&m, &o), Err(Error::UnknownLabel { id: 3, .. })));
    }
}
