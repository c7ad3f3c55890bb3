//! Binary dilation by square (Chebyshev) or diamond (Manhattan) elements.
//!
//! Both are thresholded two-pass chamfer distance transforms; with unit
//! weights the 8-neighbour pass is exact for the chessboard metric and the
//! 4-neighbour pass is exact for the city-block metric.

use super::Mask;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum StructuringElement {
    /// (2r+1)×(2r+1) block: Chebyshev distance ≤ r.
    #[default]
    Square,
    /// Manhattan distance ≤ r.
    Diamond,
}

/// Distance from every pixel to the nearest set pixel of `mask`, in the
/// metric of `shape`. `u32::MAX` everywhere when the mask is empty.
pub fn distance_to_set(mask: &Mask, shape: StructuringElement) -> Vec<u32> {
    let (w, h) = mask.dims();
    const FAR: u32 = u32::MAX / 2;
    let mut d: Vec<u32> = mask.bits().iter().map(|&b| if b { 0 } else { FAR }).collect();
    let diagonal = shape == StructuringElement::Square;

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let mut best = d[i];
            if x > 0 {
                best = best.min(d[i - 1] + 1);
            }
            if y > 0 {
                best = best.min(d[i - w] + 1);
                if diagonal {
                    if x > 0 {
                        best = best.min(d[i - w - 1] + 1);
                    }
                    if x + 1 < w {
                        best = best.min(d[i - w + 1] + 1);
                    }
                }
            }
            d[i] = best;
        }
    }
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let i = y * w + x;
            let mut best = d[i];
            if x + 1 < w {
                best = best.min(d[i + 1] + 1);
            }
            if y + 1 < h {
                best = best.min(d[i + w] + 1);
                if diagonal {
                    if x + 1 < w {
                        best = best.min(d[i + w + 1] + 1);
                    }
                    if x > 0 {
                        best = best.min(d[i + w - 1] + 1);
                    }
                }
            }
            d[i] = best;
        }
    }
    if d.iter().all(|&v| v >= FAR) {
        d.fill(u32::MAX);
    }
    d
}

/// Pixels within `radius` of the mask. Radius 0 is the identity.
pub fn dilate(mask: &Mask, radius: u32, shape: StructuringElement) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    let d = distance_to_set(mask, shape);
    let (w, h) = mask.dims();
    Mask::from_bits(w, h, d.iter().map(|&v| v <= radius).collect()).expect("same dimensions")
}
