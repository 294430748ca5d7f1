//! Basin-of-attraction rasters and their PPM encoding.

use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;

use crate::dynamics::{iterate_orbit_with_cycles, CycleInfo, OrbitOutcome, ROOT_MERGE_RADIUS};
use crate::map::RelaxedNewtonMap;
use crate::{Error, Result};

/// Label of pixels whose orbit settled on no listed attractor.
pub const UNDECIDED: u32 = u32::MAX;
pub const MAX_PIXELS_PER_SIDE: usize = 16384;

/// A `width`-wide rectangle of the plane centred at `center`, with the
/// height fixed by the pixel aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub center: Complex64,
    pub width: f64,
    pub px_width: usize,
    pub px_height: usize,
}

impl Viewport {
    pub fn new(center: Complex64, width: f64, px_width: usize, px_height: usize) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter("viewport width must be positive and finite"));
        }
        if px_width == 0 || px_height == 0 || px_width > MAX_PIXELS_PER_SIDE || px_height > MAX_PIXELS_PER_SIDE {
            return Err(Error::InvalidParameter("pixel dimensions must be in 1..=16384"));
        }
        Ok(Viewport { center, width, px_width, px_height })
    }

    pub fn height(&self) -> f64 {
        self.width * self.px_height as f64 / self.px_width as f64
    }

    /// Centre of pixel `(col, row)`; row 0 is the top edge.
    pub fn pixel(&self, col: usize, row: usize) -> Complex64 {
        let step = self.width / self.px_width as f64;
        let re = self.center.re - self.width / 2.0 + (col as f64 + 0.5) * step;
        let im = self.center.im + self.height() / 2.0 - (row as f64 + 0.5) * step;
        Complex64::new(re, im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Attractor {
    Root { value: Complex64, multiplicity: u32 },
    Cycle(CycleInfo),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinImage {
    pub viewport: Viewport,
    pub budget: usize,
    /// Row-major, top row first; roots come first, then cycles.
    pub labels: Vec<u32>,
    pub iters: Vec<u32>,
    pub legend: Vec<Attractor>,
}

impl BasinImage {
    pub fn label(&self, col: usize, row: usize) -> u32 {
        self.labels[row * self.viewport.px_width + col]
    }

    /// Share of pixels carrying `label`.
    pub fn fraction(&self, label: u32) -> f64 {
        self.labels.iter().filter(|&&l| l == label).count() as f64 / self.labels.len() as f64
    }

    /// Distinct non-sentinel labels present in the image.
    pub fn labels_present(&self) -> Vec<u32> {
        let mut seen = alloc::vec![false; self.legend.len()];
        for &l in &self.labels {
            if l != UNDECIDED {
                seen[l as usize] = true;
            }
        }
        (0..self.legend.len() as u32).filter(|&l| seen[l as usize]).collect()
    }
}

/// The attractor list `render_basins` labels against.
pub fn legend(map: &RelaxedNewtonMap, cycles: &[CycleInfo]) -> Vec<Attractor> {
    let mut out: Vec<Attractor> = map
        .polynomial()
        .roots()
        .iter()
        .map(|&(value, multiplicity)| Attractor::Root { value, multiplicity })
        .collect();
    out.extend(cycles.iter().cloned().map(Attractor::Cycle));
    out
}

/// Label and iteration count for one starting point.
pub fn classify_point(map: &RelaxedNewtonMap, cycles: &[CycleInfo], z: Complex64, budget: usize, eps: f64) -> (u32, u32) {
    let outcome = iterate_orbit_with_cycles(map, z, budget, eps, cycles);
    let label = match &outcome {
        OrbitOutcome::ConvergedToRoot { root, .. } => *root as u32,
        OrbitOutcome::AttractedToCycle { cycle, .. } => cycles
            .iter()
            .position(|c| c.period == cycle.period && c.distance(cycle.points[0]) < ROOT_MERGE_RADIUS.max(eps))
            .map_or(UNDECIDED, |i| (map.polynomial().roots().len() + i) as u32),
        _ => UNDECIDED,
    };
    (label, outcome.iterations() as u32)
}

/// Labels and iteration counts for the pixel rows in `rows`.
pub fn render_rows(
    map: &RelaxedNewtonMap,
    cycles: &[CycleInfo],
    vp: &Viewport,
    budget: usize,
    eps: f64,
    rows: Range<usize>,
) -> (Vec<u32>, Vec<u32>) {
    let n = rows.len() * vp.px_width;
    let mut labels = Vec::with_capacity(n);
    let mut iters = Vec::with_capacity(n);
    for row in rows {
        for col in 0..vp.px_width {
            let (l, it) = classify_point(map, cycles, vp.pixel(col, row), budget, eps);
            labels.push(l);
            iters.push(it);
        }
    }
    (labels, iters)
}

/// Assembles an image from row bands produced by [`render_rows`], given in
/// top-to-bottom order.
pub fn assemble(
    map: &RelaxedNewtonMap,
    cycles: &[CycleInfo],
    vp: Viewport,
    budget: usize,
    bands: impl IntoIterator<Item = (Vec<u32>, Vec<u32>)>,
) -> BasinImage {
    let mut labels = Vec::with_capacity(vp.px_width * vp.px_height);
    let mut iters = Vec::with_capacity(vp.px_width * vp.px_height);
    for (l, i) in bands {
        labels.extend(l);
        iters.extend(i);
    }
    BasinImage { viewport: vp, budget, labels, iters, legend: legend(map, cycles) }
}

/// Sequential renderer.
pub fn render_basins(map: &RelaxedNewtonMap, cycles: &[CycleInfo], vp: Viewport, budget: usize, eps: f64) -> BasinImage {
    let band = render_rows(map, cycles, &vp, budget, eps, 0..vp.px_height);
    assemble(map, cycles, vp, budget, [band])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shading {
    Flat,
    ByIterations,
}

pub type Rgb = [u8; 3];

const ROOT_COLOURS: [Rgb; 8] = [
    [40, 110, 220],
    [250, 200, 40],
    [60, 170, 90],
    [150, 80, 200],
    [40, 190, 200],
    [240, 130, 30],
    [200, 90, 160],
    [130, 180, 50],
];
const CYCLE_COLOURS: [Rgb; 3] = [[220, 30, 30], [170, 20, 20], [255, 90, 90]];

/// Distinct hues for the roots, reds for the cycles, black last for
/// undecided pixels.
pub fn default_palette(legend: &[Attractor]) -> Vec<Rgb> {
    let mut roots = 0;
    let mut cycles = 0;
    let mut out: Vec<Rgb> = legend
        .iter()
        .map(|a| match a {
            Attractor::Root { .. } => {
                roots += 1;
                ROOT_COLOURS[(roots - 1) % ROOT_COLOURS.len()]
            }
            Attractor::Cycle(_) => {
                cycles += 1;
                CYCLE_COLOURS[(cycles - 1) % CYCLE_COLOURS.len()]
            }
        })
        .collect();
    out.push([0, 0, 0]);
    out
}

fn brightness(iters: u32, budget: usize) -> f64 {
    let t = num_traits::float::Float::ln(1.0 + iters as f64) / num_traits::float::Float::ln(2.0 + budget as f64);
    (1.0 - t).clamp(0.35, 1.0)
}

/// Binary `P6` bytes; the sentinel takes the last palette entry.
pub fn encode_ppm(img: &BasinImage, palette: &[Rgb], shading: Shading) -> Result<Vec<u8>> {
    let need = img.legend.len() + 1;
    if palette.len() < need {
        return Err(Error::PaletteTooSmall { need, have: palette.len() });
    }
    let header = alloc::format!("P6\n{} {}\n255\n", img.viewport.px_width, img.viewport.px_height);
    let mut out = Vec::with_capacity(header.len() + 3 * img.labels.len());
    out.extend_from_slice(header.as_bytes());
    for (&l, &it) in img.labels.iter().zip(&img.iters) {
        let colour = if l == UNDECIDED { palette[palette.len() - 1] } else { palette[l as usize] };
        match shading {
            Shading::Flat => out.extend_from_slice(&colour),
            Shading::ByIterations => {
                let f = brightness(it, img.budget);
                out.extend(colour.iter().map(|&c| num_traits::float::Float::round(c as f64 * f) as u8));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::constructions::two_root_rep;

    fn tiny(labels: Vec<u32>) -> BasinImage {
        let n = labels.len();
        BasinImage {
            viewport: Viewport::new(c64(0.0, 0.0), 1.0, n, 1).unwrap(),
            budget: 10,
            iters: alloc::vec![0; n],
            labels,
            legend: alloc::vec![
                Attractor::Root { value: c64(1.0, 0.0), multiplicity: 1 },
                Attractor::Root { value: c64(-1.0, 0.0), multiplicity: 1 },
            ],
        }
    }

    #[test]
    fn ppm_layout() {
        let pal = [[1, 2, 3], [4, 5, 6], [7, 8, 9]];
        let bytes = encode_ppm(&tiny(alloc::vec![0]), &pal, Shading::Flat).unwrap();
        assert_eq!(bytes, b"P6\n1 1\n255\n\x01\x02\x03");
        let bytes = encode_ppm(&tiny(alloc::vec![0, 1]), &pal, Shading::Flat).unwrap();
        assert_eq!(&bytes[11..], &[1, 2, 3, 4, 5, 6]);
        let bytes = encode_ppm(&tiny(alloc::vec![UNDECIDED]), &pal, Shading::Flat).unwrap();
        assert_eq!(&bytes[11..], &[7, 8, 9]);
        assert_eq!(
            encode_ppm(&tiny(alloc::vec![0]), &pal[..2], Shading::Flat),
            Err(Error::PaletteTooSmall { need: 3, have: 2 })
        );
    }

    #[test]
    fn pixel_centres() {
        let vp = Viewport::new(c64(0.0, 0.0), 4.0, 4, 2).unwrap();
        assert_eq!(vp.pixel(0, 0), c64(-1.5, 0.5));
        assert_eq!(vp.pixel(3, 1), c64(1.5, -0.5));
    }

    #[test]
    fn real_h_quadratic_splits_on_the_axis() {
        let n = RelaxedNewtonMap::new(two_root_rep(1, 1).unwrap(), c64(0.7, 0.0)).unwrap();
        let vp = Viewport::new(c64(0.0, 0.0), 4.0, 16, 8).unwrap();
        let img = render_basins(&n, &[], vp, 200, 1e-8);
        for row in 0..8 {
            for col in 0..16 {
                assert_eq!(img.label(col, row), if col >= 8 { 0 } else { 1 });
            }
        }
    }
}
