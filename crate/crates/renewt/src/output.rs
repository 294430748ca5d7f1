//! Parallel rendering and file output.

use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use renewt_core::dynamics::CycleInfo;
use renewt_core::render::{assemble, encode_ppm, render_rows, BasinImage, Rgb, Shading, Viewport};
use renewt_core::{Complex64, RelaxedNewtonMap};

/// Environment variable capping the number of render threads.
pub const THREADS_VAR: &str = "RENEWT_THREADS";

const BAND_ROWS: usize = 4;

fn thread_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(available, |n| n.min(available))
}

/// [`renewt_core::render::render_basins`] spread over row bands.
///
/// Bands are computed independently and concatenated in order, so the
/// result does not depend on the thread count.
pub fn render_parallel(
    map: &RelaxedNewtonMap,
    cycles: &[CycleInfo],
    vp: Viewport,
    budget: usize,
    eps: f64,
) -> BasinImage {
    let bands: Vec<_> = (0..vp.px_height).step_by(BAND_ROWS).collect();
    let work = || {
        bands
            .par_iter()
            .map(|&start| render_rows(map, cycles, &vp, budget, eps, start..(start + BAND_ROWS).min(vp.px_height)))
            .collect::<Vec<_>>()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build();
    let rendered = match pool {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    assemble(map, cycles, vp, budget, rendered)
}

pub fn write_ppm(path: &Path, img: &BasinImage, palette: &[Rgb], shading: Shading) -> io::Result<()> {
    let bytes = encode_ppm(img, palette, shading).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    fs::write(path, bytes)
}

pub fn write_png(path: &Path, img: &BasinImage, palette: &[Rgb], shading: Shading) -> io::Result<()> {
    let bytes = encode_ppm(img, palette, shading).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    let header = format!("P6\n{} {}\n255\n", img.viewport.px_width, img.viewport.px_height).len();
    let buf = image::RgbImage::from_raw(
        img.viewport.px_width as u32,
        img.viewport.px_height as u32,
        bytes[header..].to_vec(),
    )
    .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "pixel buffer has the wrong size"))?;
    buf.save_with_format(path, image::ImageFormat::Png).map_err(io::Error::other)
}

/// One `re,im` line per point.
pub fn write_csv(path: &Path, points: &[Complex64]) -> io::Result<()> {
    let mut s = String::with_capacity(points.len() * 48);
    for z in points {
        s.push_str(&format!("{:e},{:e}\n", z.re, z.im));
    }
    fs::write(path, s)
}
