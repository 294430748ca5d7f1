//! Julia sets by inverse iteration, the line test and rotation symmetry.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::{Complex64, ComplexFloat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{iterate_orbit, OrbitOutcome};
use crate::map::RelaxedNewtonMap;
use crate::poly::{FactoredPolynomial, Polynomial};
use crate::roots::{self, RootCluster};
use crate::{Error, Result};

/// Levels discarded at the start of every inverse-iteration chain.
pub const BURN_IN: usize = 20;
/// Imaginary parts of `h` below this count as real.
pub const REAL_TOL: f64 = 1e-12;

/// Roots of the reduced denominator with multiplicity.
pub fn poles(map: &RelaxedNewtonMap) -> Result<Vec<RootCluster>> {
    map.poles()
}

/// Points of the Julia set from backward orbits of a pole.
#[derive(Debug, Clone, PartialEq)]
pub struct JuliaSample {
    pub points: Vec<Complex64>,
    pub seed: u64,
    pub depth: usize,
    /// `N(points[i]) = points[parent[i]]` when the parent was kept.
    pub parent: Vec<Option<u32>>,
}

impl JuliaSample {
    /// Pairs `(w, z)` with `N(z) = w`.
    pub fn preimage_pairs(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.points
            .iter()
            .zip(&self.parent)
            .filter_map(|(&z, p)| p.map(|i| (self.points[i as usize], z)))
    }
}

/// All preimages of `w`: roots of `num - w den`, Newton-polished.
pub fn preimages(map: &RelaxedNewtonMap, w: Complex64) -> Result<Vec<Complex64>> {
    let eq = map.num() - &map.den().scale(w);
    let mut zs = roots::all_roots(&eq, roots::DEFAULT_TOL)?;
    for z in zs.iter_mut() {
        *z = polish(&eq, *z);
    }
    Ok(zs)
}

fn polish(p: &Polynomial, mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (v, d) = p.eval_with_derivative(z);
        if d == Complex64::new(0.0, 0.0) {
            break;
        }
        let next = z - v / d;
        if !next.is_finite() || p.eval(next).abs() >= v.abs() {
            break;
        }
        z = next;
    }
    z
}

/// Inverse iteration from the first pole with uniformly random branches.
///
/// Each chain restarts from the pole after `depth` kept levels; the first
/// [`BURN_IN`] levels of every chain are dropped.
pub fn sample_julia(map: &RelaxedNewtonMap, count: usize, depth: usize, rng_seed: u64) -> Result<JuliaSample> {
    if count == 0 || depth == 0 {
        return Err(Error::InvalidParameter("count and depth must be positive"));
    }
    let start = poles(map)?
        .first()
        .map(|c| c.center)
        .ok_or(Error::DegenerateInput("map has no finite pole"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut points = Vec::with_capacity(count);
    let mut parent = Vec::with_capacity(count);
    while points.len() < count {
        let mut w = start;
        for _ in 0..BURN_IN {
            let pre = preimages(map, w)?;
            w = pre[rng.gen_range(0..pre.len())];
        }
        for level in 0..depth {
            if points.len() == count {
                break;
            }
            let pre = preimages(map, w)?;
            w = pre[rng.gen_range(0..pre.len())];
            parent.push((level > 0).then(|| (points.len() - 1) as u32));
            points.push(w);
        }
    }
    Ok(JuliaSample { points, seed: rng_seed, depth, parent })
}

/// Every iterated preimage of every pole, level by level, up to
/// `max_points` points; only whole levels are kept.
///
/// Unlike [`sample_julia`] the result is invariant under every rotation
/// that commutes with `N`, which makes it the input of choice for
/// [`symmetry_order`].
pub fn sample_julia_tree(map: &RelaxedNewtonMap, max_points: usize) -> Result<JuliaSample> {
    let mut points: Vec<Complex64> = poles(map)?.iter().map(|c| c.center).collect();
    if points.is_empty() {
        return Err(Error::DegenerateInput("map has no finite pole"));
    }
    let mut parent = alloc::vec![None; points.len()];
    let mut level = 0..points.len();
    let mut depth = 0;
    let d = map.reduced_degree();
    while points.len() + d * level.len() <= max_points {
        let start = points.len();
        for i in level.clone() {
            for z in preimages(map, points[i])? {
                points.push(z);
                parent.push(Some(i as u32));
            }
        }
        level = start..points.len();
        depth += 1;
    }
    Ok(JuliaSample { points, seed: 0, depth, parent })
}

/// A line `point + t direction`, `|direction| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Complex64,
    pub direction: Complex64,
}

impl Line {
    pub fn distance(&self, z: Complex64) -> f64 {
        ((z - self.point) * self.direction.conj()).im.abs()
    }
}

/// The Julia set is a line exactly when `p` has two distinct roots of equal
/// multiplicity and `h` is real. The line is then the perpendicular
/// bisector of the roots.
pub fn line_predicate(p: &FactoredPolynomial, h: Complex64) -> Option<Line> {
    let roots = p.roots();
    if roots.len() != 2 || roots[0].1 != roots[1].1 || h.im.abs() > REAL_TOL {
        return None;
    }
    let (r1, r2) = (roots[0].0, roots[1].0);
    let along = (r2 - r1) / (r2 - r1).abs();
    Some(Line { point: (r1 + r2) / 2.0, direction: along * Complex64::new(0.0, 1.0) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub max_deviation: f64,
    pub line: Line,
    pub is_line: bool,
}

/// Principal-axis fit through the centroid and the largest perpendicular
/// deviation from it.
pub fn numeric_line_check(points: &[Complex64], tol: f64) -> Result<LineFit> {
    const NEED: usize = 3;
    if points.len() < NEED {
        return Err(Error::InsufficientSamples { need: NEED, have: points.len() });
    }
    let n = points.len() as f64;
    let centre = points.iter().sum::<Complex64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for z in points {
        let d = z - centre;
        sxx += d.re * d.re;
        syy += d.im * d.im;
        sxy += d.re * d.im;
    }
    let theta = 0.5 * num_traits::float::Float::atan2(2.0 * sxy, sxx - syy);
    let line = Line { point: centre, direction: Complex64::from_polar(1.0, theta) };
    let max_deviation = points.iter().map(|&z| line.distance(z)).fold(0.0, f64::max);
    Ok(LineFit { max_deviation, line, is_line: max_deviation < tol })
}

/// Uniform bucket grid for nearest-neighbour queries.
struct PointGrid<'a> {
    points: &'a [Complex64],
    origin: Complex64,
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> PointGrid<'a> {
    fn new(points: &'a [Complex64]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for z in points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-300);
        let side = num_traits::float::Float::sqrt(points.len() as f64).ceil().max(1.0);
        let cell = span / side;
        let cols = ((hi.re - lo.re) / cell) as usize + 1;
        let rows = ((hi.im - lo.im) / cell) as usize + 1;
        let mut buckets = alloc::vec![Vec::new(); cols * rows];
        for (i, z) in points.iter().enumerate() {
            let (c, r) = Self::cell_of(lo, cell, cols, rows, *z);
            buckets[r * cols + c].push(i as u32);
        }
        PointGrid { points, origin: lo, cell, cols, rows, buckets }
    }

    fn cell_of(origin: Complex64, cell: f64, cols: usize, rows: usize, z: Complex64) -> (usize, usize) {
        let c = ((z.re - origin.re) / cell).max(0.0) as usize;
        let r = ((z.im - origin.im) / cell).max(0.0) as usize;
        (c.min(cols - 1), r.min(rows - 1))
    }

    /// Distance from `z` to the nearest point, skipping index `skip`.
    fn nearest(&self, z: Complex64, skip: Option<usize>) -> f64 {
        let (c0, r0) = Self::cell_of(self.origin, self.cell, self.cols, self.rows, z);
        // Offset of z outside the grid box adds to every candidate distance.
        let mut best = f64::INFINITY;
        let max_ring = self.cols.max(self.rows);
        for ring in 0..=max_ring {
            let lo_c = c0.saturating_sub(ring);
            let hi_c = (c0 + ring).min(self.cols - 1);
            let lo_r = r0.saturating_sub(ring);
            let hi_r = (r0 + ring).min(self.rows - 1);
            for r in lo_r..=hi_r {
                for c in lo_c..=hi_c {
                    let on_ring = r == lo_r || r == hi_r || c == lo_c || c == hi_c;
                    if ring > 0 && !on_ring {
                        continue;
                    }
                    for &i in &self.buckets[r * self.cols + c] {
                        if Some(i as usize) == skip {
                            continue;
                        }
                        best = best.min((self.points[i as usize] - z).abs());
                    }
                }
            }
            // Points outside rings 0..=ring are at least this far away.
            let inner = ring as f64 * self.cell - self.outside(z);
            if best <= inner {
                break;
            }
        }
        best
    }

    /// Distance from `z` to the grid box, zero inside it.
    fn outside(&self, z: Complex64) -> f64 {
        let hi_re = self.origin.re + self.cols as f64 * self.cell;
        let hi_im = self.origin.im + self.rows as f64 * self.cell;
        let dx = (self.origin.re - z.re).max(z.re - hi_re).max(0.0);
        let dy = (self.origin.im - z.im).max(z.im - hi_im).max(0.0);
        num_traits::float::Float::hypot(dx, dy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryEstimate {
    /// Largest `n ≤ max_order` whose rotation defect is below `tau`.
    pub order: u32,
    pub tau: f64,
    /// `(n, defect)` for `n = 1..=max_order`.
    pub defects: Vec<(u32, f64)>,
}

impl SymmetryEstimate {
    pub fn verifies(&self, n: u32) -> bool {
        self.defects.iter().any(|&(k, d)| k == n && d < self.tau)
    }
}

/// Three times the median nearest-neighbour spacing.
pub fn adaptive_tau(points: &[Complex64]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let grid = PointGrid::new(points);
    let mut nn: Vec<f64> = (0..points.len()).map(|i| grid.nearest(points[i], Some(i))).collect();
    nn.sort_by(f64::total_cmp);
    3.0 * nn[nn.len() / 2]
}

/// Symmetric Hausdorff distance between the points and their rotation by
/// `2π/n` about the origin.
pub fn rotation_defect(points: &[Complex64], n: u32) -> f64 {
    if n <= 1 || points.is_empty() {
        return 0.0;
    }
    let rot = Complex64::from_polar(1.0, TAU / n as f64);
    let rotated: Vec<Complex64> = points.iter().map(|&z| z * rot).collect();
    let grid = PointGrid::new(points);
    let rgrid = PointGrid::new(&rotated);
    let forward = points.iter().map(|&z| rgrid.nearest(z, None)).fold(0.0, f64::max);
    let backward = rotated.iter().map(|&z| grid.nearest(z, None)).fold(0.0, f64::max);
    forward.max(backward)
}

/// Rotation orders about the origin that the sample supports. `tau`
/// defaults to [`adaptive_tau`].
pub fn symmetry_order(points: &[Complex64], max_order: u32, tau: Option<f64>) -> Result<SymmetryEstimate> {
    if points.is_empty() {
        return Err(Error::InsufficientSamples { need: 1, have: 0 });
    }
    if max_order == 0 {
        return Err(Error::InvalidParameter("max_order must be at least 1"));
    }
    let tau = tau.unwrap_or_else(|| adaptive_tau(points));
    let defects: Vec<(u32, f64)> = (1..=max_order).map(|n| (n, rotation_defect(points, n))).collect();
    let order = defects.iter().filter(|d| d.1 < tau).map(|d| d.0).max().unwrap_or(1);
    Ok(SymmetryEstimate { order, tau, defects })
}

/// Heuristic certificate that the basin of `root` reaches radius `r`: a
/// ray from the root, sampled every `delta`, whose vertices all converge
/// to that root. Rays are tried at 64 angles in increasing order.
pub fn basin_unbounded_probe(
    map: &RelaxedNewtonMap,
    root: Complex64,
    r: f64,
    delta: f64,
    budget: usize,
) -> Result<Option<Vec<Complex64>>> {
    const DIRECTIONS: usize = 64;
    let records = map.fixed_points();
    let index = map
        .polynomial()
        .roots()
        .iter()
        .position(|&(z, _)| (z - root).abs() <= 1e-9 * z.abs().max(1.0))
        .ok_or(Error::NotAFixedRoot)?;
    if !records[index].class.is_attracting() {
        return Err(Error::NotAFixedRoot);
    }
    let rmax = map.polynomial().roots().iter().map(|&(z, _)| z.abs()).fold(0.0, f64::max);
    if !(r > 10.0 * rmax) || !(delta > 0.0) || r / delta > 1e6 {
        return Err(Error::InvalidParameter("need R > 10 max|root| and 0 < delta with R/delta <= 1e6"));
    }
    let root = map.polynomial().roots()[index].0;
    let steps = num_traits::float::Float::ceil((r + root.abs()) / delta) as usize;
    for k in 0..DIRECTIONS {
        let dir = Complex64::from_polar(1.0, TAU * k as f64 / DIRECTIONS as f64);
        let mut path = Vec::with_capacity(steps + 1);
        let mut ok = true;
        for s in 0..=steps {
            let z = root + dir * (s as f64 * delta);
            match iterate_orbit(map, z, budget, crate::dynamics::DEFAULT_EPS) {
                OrbitOutcome::ConvergedToRoot { root: j, .. } if j == index => path.push(z),
                _ => {
                    ok = false;
                    break;
                }
            }
            if z.abs() >= r {
                break;
            }
        }
        if ok {
            return Ok(Some(path));
        }
    }
    Ok(None)
}
