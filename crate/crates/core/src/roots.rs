//! Simultaneous root finding (Aberth–Ehrlich) and multiplicity clustering.
//!
//! Multiple roots come back from [`all_roots`] as near-coincident simple
//! approximations. [`cluster_roots`] groups them at a fixed radius;
//! [`factor_roots`] groups them by overlapping inclusion disks and polishes
//! each cluster centre on the matching derivative.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::{Complex64, ComplexFloat};

use crate::poly::Polynomial;
use crate::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 200;
/// Default backward-error target for [`all_roots`].
pub const DEFAULT_TOL: f64 = 1e-10;

const INIT_ROTATION: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: u32,
    /// Largest `|p|` over the approximations merged into this cluster.
    pub residual: f64,
}

/// All `deg p` roots, with repetition.
///
/// Every returned `z` satisfies `|p(z)| <= tol * Σ|c_k||z|^k`.
pub fn all_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    all_roots_with_budget(p, tol, DEFAULT_MAX_SWEEPS)
}

pub fn all_roots_with_budget(p: &Polynomial, tol: f64, max_sweeps: usize) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::DegenerateInput("root finding needs degree >= 1"));
    }
    let zero = Complex64::new(0.0, 0.0);
    // Exact zero roots are split off so they never enter the iteration.
    let lead_zeros = p.coeffs().iter().take_while(|&&c| c == zero).count();
    let q = Polynomial::new(p.coeffs()[lead_zeros..].to_vec());
    let mut roots = vec![zero; lead_zeros];
    match q.degree() {
        0 => return Ok(roots),
        1 => {
            roots.push(-q.coeff(0) / q.coeff(1));
            return Ok(roots);
        }
        _ => {}
    }
    roots.extend(aberth(&q, tol, max_sweeps)?);
    Ok(roots)
}

fn cauchy_bound(p: &Polynomial) -> f64 {
    let lead = p.leading().abs();
    let n = p.degree();
    1.0 + p.coeffs()[..n].iter().map(|c| c.abs() / lead).fold(0.0, f64::max)
}

fn aberth(p: &Polynomial, tol: f64, max_sweeps: usize) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let radius = cauchy_bound(p);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + INIT_ROTATION))
        .collect();
    let mut done = vec![false; n];
    let floor = 8.0 * n as f64 * f64::EPSILON;

    for _ in 0..max_sweeps {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, d) = p.eval_with_derivative(z[i]);
            let bound = p.magnitude_bound(z[i].abs());
            if v.abs() <= floor * bound {
                done[i] = true;
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let denom = d / v - repulsion;
            if denom == Complex64::new(0.0, 0.0) || !denom.is_finite() {
                let kick = Complex64::from_polar(floor.sqrt() * (1.0 + z[i].abs()), i as f64);
                z[i] += kick;
                continue;
            }
            let step = denom.inv();
            z[i] -= step;
            if step.abs() <= 4.0 * f64::EPSILON * z[i].abs() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }

    let worst = z
        .iter()
        .map(|&zi| {
            let bound = p.magnitude_bound(zi.abs()).max(f64::MIN_POSITIVE);
            p.eval(zi).abs() / bound
        })
        .fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::NoConvergence {
            sweeps: max_sweeps,
            residual: worst,
        });
    }
    Ok(z)
}

struct DisjointSet(Vec<usize>);

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups of member indices, ordered by smallest member.
    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}

fn mean(points: &[Complex64], members: &[usize]) -> Complex64 {
    members.iter().map(|&i| points[i]).sum::<Complex64>() / members.len() as f64
}

/// Single-linkage clustering at `radius`; centres are arithmetic means.
///
/// The residual field is left at zero since no polynomial is available.
pub fn cluster_roots(approx: &[Complex64], radius: f64) -> Vec<RootCluster> {
    let mut set = DisjointSet::new(approx.len());
    for i in 0..approx.len() {
        for j in 0..i {
            if (approx[i] - approx[j]).abs() <= radius {
                set.union(i, j);
            }
        }
    }
    set.groups()
        .into_iter()
        .map(|members| RootCluster {
            center: mean(approx, &members),
            multiplicity: members.len() as u32,
            residual: 0.0,
        })
        .collect()
}

/// Relative coefficient perturbation that [`factor_roots`] treats as noise.
pub const COEFF_NOISE: f64 = 1e-13;

/// Roots with multiplicities.
///
/// Approximations are merged when their Weierstrass inclusion disks
/// `n e_i / |c_n Π_{j≠i}(z_i - z_j)|` overlap, where
/// `e_i = max(|p(z_i)|, COEFF_NOISE · max|c_k| · Σ|z_i|^k)` also covers
/// coefficient noise of relative size [`COEFF_NOISE`]. A cluster of size `m`
/// is then polished by Newton's method on `p^{(m-1)}`, which has a simple
/// root at an exact `m`-fold root of `p`.
pub fn factor_roots(p: &Polynomial, tol: f64) -> Result<Vec<RootCluster>> {
    let approx = all_roots(p, tol)?;
    let n = approx.len();
    let lead = p.leading();
    let cmax = p.max_coeff_norm();
    let n_coeffs = p.coeffs().len();
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let prod = (0..n)
                .filter(|&j| j != i)
                .fold(lead, |acc, j| acc * (approx[i] - approx[j]));
            let r = if prod == Complex64::new(0.0, 0.0) {
                0.0
            } else {
                let r = approx[i].abs();
                let powers = (0..n_coeffs).fold((0.0, 1.0), |(s, t), _| (s + t, t * r)).0;
                let err = p.eval(approx[i]).abs().max(COEFF_NOISE * cmax * powers);
                n as f64 * err / prod.abs()
            };
            r.max(2.0 * f64::EPSILON * approx[i].abs())
        })
        .collect();

    let mut set = DisjointSet::new(n);
    for i in 0..n {
        for j in 0..i {
            if (approx[i] - approx[j]).abs() <= radii[i] + radii[j] {
                set.union(i, j);
            }
        }
    }

    let mut groups = Vec::new();
    for component in set.groups() {
        if component.len() == 1 {
            groups.push(component);
        } else {
            split_component(p, &approx, component, cmax, &mut groups);
        }
    }

    Ok(groups
        .into_iter()
        .map(|members| {
            let residual = members
                .iter()
                .map(|&i| p.eval(approx[i]).abs())
                .fold(0.0, f64::max);
            let center = mean(&approx, &members);
            let m = members.len();
            let center = if m > 1 {
                let spread = members
                    .iter()
                    .map(|&i| (approx[i] - center).abs())
                    .fold(0.0, f64::max);
                polish_multiple(p, center, m, spread)
            } else {
                center
            };
            RootCluster {
                center,
                multiplicity: m as u32,
                residual,
            }
        })
        .collect())
}

/// First `k` Taylor coefficients `p^{(j)}(c) / j!` of `coeffs` at `c`.
fn taylor_coeffs(coeffs: &[Complex64], c: Complex64, k: usize) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(k);
    for j in 0..k.min(coeffs.len()) {
        let len = work.len() - j;
        for i in (0..len - 1).rev() {
            let hi = work[j + i + 1];
            work[j + i] += c * hi;
        }
        out.push(work[j]);
    }
    out
}

/// `c` is a numerical `m`-fold root: the first `m` Taylor coefficients are
/// within coefficient noise.
fn is_numerical_multiple(p: &Polynomial, c: Complex64, m: usize, cmax: f64) -> bool {
    let t = taylor_coeffs(p.coeffs(), c, m);
    let ones = vec![Complex64::new(1.0, 0.0); p.coeffs().len()];
    let b = taylor_coeffs(&ones, Complex64::new(c.abs(), 0.0), m);
    t.len() == m && t.iter().zip(&b).all(|(tk, bk)| tk.abs() <= COEFF_NOISE * cmax * bk.re)
}

/// Splits a component of overlapping inclusion disks into clusters that
/// pass the multiple-root test, taking the largest cluster first.
fn split_component(
    p: &Polynomial,
    approx: &[Complex64],
    mut rest: Vec<usize>,
    cmax: f64,
    groups: &mut Vec<Vec<usize>>,
) {
    while let Some(&i) = rest.first() {
        let mut best = vec![i];
        let mut others: Vec<usize> = rest[1..].to_vec();
        others.sort_by(|&a, &b| (approx[a] - approx[i]).abs().total_cmp(&(approx[b] - approx[i]).abs()));
        for m in (2..=rest.len()).rev() {
            let mut candidate = vec![i];
            candidate.extend_from_slice(&others[..m - 1]);
            let centre = mean(approx, &candidate);
            let spread = candidate.iter().map(|&j| (approx[j] - centre).abs()).fold(0.0, f64::max);
            let centre = polish_multiple(p, centre, m, spread);
            let reach = candidate.iter().map(|&j| (approx[j] - centre).abs()).fold(0.0, f64::max);
            let nearest = (0..approx.len())
                .filter(|j| !candidate.contains(j))
                .all(|j| (approx[j] - centre).abs() > reach);
            if nearest && is_numerical_multiple(p, centre, m, cmax) {
                best = candidate;
                break;
            }
        }
        rest.retain(|j| !best.contains(j));
        groups.push(best);
    }
}

fn polish_multiple(p: &Polynomial, start: Complex64, m: usize, spread: f64) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let mut z = start;
    for _ in 0..16 {
        let (v, d) = q.eval_with_derivative(z);
        if v == Complex64::new(0.0, 0.0) || d == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = v / d;
        z -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + z.abs()) {
            break;
        }
    }
    if z.is_finite() && (z - start).abs() <= 2.0 * spread + 1e-12 * (1.0 + start.abs()) {
        z
    } else {
        start
    }
}

/// Flattens clusters back into a list with repetition.
pub fn expand_clusters(clusters: &[RootCluster]) -> Vec<Complex64> {
    clusters
        .iter()
        .flat_map(|c| core::iter::repeat_n(c.center, c.multiplicity as usize))
        .collect()
}

/// Greedy nearest matching distance between two multisets of equal size:
/// the maximum over `a` of the distance to its matched partner in `b`.
/// Returns `f64::INFINITY` when the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).abs();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        used[best] = true;
        worst = worst.max(best_d);
    }
    worst
}
