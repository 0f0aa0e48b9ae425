use num_complex::Complex64;

use super::grid::{Geometry, ImageGrid, Rgb};
use crate::tree::Alphabet;
use crate::{Error, Result};

/// Default cap on segments or points produced by a single render.
pub const DEFAULT_DRAW_BUDGET: usize = 10_000_000;

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

/// Colors by letter index, cycled for larger alphabets.
pub const LETTER_COLORS: [Rgb; 8] = [
    [220, 50, 47],
    [38, 139, 210],
    [133, 153, 0],
    [211, 54, 130],
    [181, 137, 0],
    [42, 161, 152],
    [108, 113, 196],
    [203, 75, 22],
];

pub fn letter_color(symbol: u16) -> Rgb {
    LETTER_COLORS[symbol as usize % LETTER_COLORS.len()]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub from: Complex64,
    pub to: Complex64,
    /// Last letter of the word at `to`.
    pub letter: u16,
}

fn count_up_to(n: usize, depth: usize) -> u128 {
    (1..=depth as u32).map(|k| (n as u128).saturating_pow(k)).sum()
}

fn check_budget(what: &'static str, needed: u128, budget: usize) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { what, needed, limit: budget as u128 });
    }
    Ok(())
}

/// Branches `phi(v') -> phi(v)` for every word `v` with `1 <= |v| <= depth`,
/// `v'` its parent, in breadth-first lexicographic order.
pub fn tree_segments(alphabet: &Alphabet, depth: usize, budget: usize) -> Result<Vec<Segment>> {
    let n = alphabet.len();
    check_budget("segments", count_up_to(n, depth), budget)?;
    let mut out = Vec::new();
    // (node, product) for the previous level
    let mut level = vec![(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * n);
        for &(node, prod) in &level {
            for (j, &c) in alphabet.letters().iter().enumerate() {
                let p = prod * c;
                let child = node + p;
                out.push(Segment { from: node, to: child, letter: j as u16 });
                next.push((child, p));
            }
        }
        level = next;
    }
    Ok(out)
}

/// Nodes `phi(v)` for every `v` of length `depth`, each with its first
/// letter; these sample the tipset to within `r^depth R`.
pub fn tipset_points(alphabet: &Alphabet, depth: usize, budget: usize) -> Result<Vec<(Complex64, u16)>> {
    let n = alphabet.len();
    check_budget("points", (n as u128).saturating_pow(depth as u32), budget)?;
    let mut level = vec![(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 0u16)];
    for d in 0..depth {
        let mut next = Vec::with_capacity(level.len() * n);
        for &(node, prod, first) in &level {
            for (j, &c) in alphabet.letters().iter().enumerate() {
                let p = prod * c;
                next.push((node + p, p, if d == 0 { j as u16 } else { first }));
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|(z, _, f)| (z, f)).collect())
}

/// Draws a straight segment by sampling it at sub-pixel steps.
pub fn draw_segment(img: &mut ImageGrid, from: Complex64, to: Complex64, rgb: Rgb) {
    let g = img.geometry;
    let (x0, y0) = g.to_pixel_space(from);
    let (x1, y1) = g.to_pixel_space(to);
    let (w, h) = (g.width as f64, g.height as f64);
    if (x0 < 0.0 && x1 < 0.0) || (y0 < 0.0 && y1 < 0.0) || (x0 >= w && x1 >= w) || (y0 >= h && y1 >= h) {
        return;
    }
    let len = (x1 - x0).abs().max((y1 - y0).abs());
    let steps = (2.0 * len).ceil().clamp(1.0, 4.0 * (w + h)) as usize;
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        if x >= 0.0 && y >= 0.0 && x < w && y < h {
            img.set(x as usize, y as usize, rgb);
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TreeStyle {
    /// Also draw the trunk from `0` to the root `1`.
    pub trunk: bool,
}

pub fn render_tree(alphabet: &Alphabet, depth: usize, geometry: Geometry, style: TreeStyle) -> Result<ImageGrid> {
    let segments = tree_segments(alphabet, depth, DEFAULT_DRAW_BUDGET)?;
    let mut img = ImageGrid::new(geometry, WHITE);
    if style.trunk {
        draw_segment(&mut img, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), BLACK);
    }
    for s in &segments {
        draw_segment(&mut img, s.from, s.to, letter_color(s.letter));
    }
    Ok(img)
}

/// Plots the depth-`depth` tipset sample, colored by first letter when
/// `color_pieces` is set and black otherwise.
pub fn render_tipset(alphabet: &Alphabet, depth: usize, geometry: Geometry, color_pieces: bool) -> Result<ImageGrid> {
    let points = tipset_points(alphabet, depth, DEFAULT_DRAW_BUDGET)?;
    let mut img = ImageGrid::new(geometry, WHITE);
    for (z, first) in points {
        img.plot(z, if color_pieces { letter_color(first) } else { BLACK });
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_level_branches() {
        let a = Alphabet::new(vec![c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)]).unwrap();
        let segs = tree_segments(&a, 1, 100).unwrap();
        assert_eq!(segs.len(), 3);
        for (s, &l) in segs.iter().zip(a.letters()) {
            assert_eq!(s.from, c(1.0, 0.0));
            assert_eq!(s.to, 1.0 + l);
        }
        assert!(tree_segments(&a, 5, 100).is_err());
    }

    #[test]
    fn segment_drawing_stays_in_bounds() {
        let g = Geometry::new(8, 8, c(-1.0, -1.0), c(1.0, 1.0)).unwrap();
        let mut img = ImageGrid::new(g, WHITE);
        draw_segment(&mut img, c(-5.0, 0.0), c(5.0, 0.0), BLACK);
        assert_eq!(img.count(BLACK), 8);
        draw_segment(&mut img, c(3.0, 3.0), c(4.0, 4.0), [1, 2, 3]);
        assert_eq!(img.count([1, 2, 3]), 0);
    }
}
