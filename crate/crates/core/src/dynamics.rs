//! Orbits, attracting cycles and the critical-orbit convergence test.

use alloc::vec::Vec;

use num_complex::{Complex64, ComplexFloat};

use crate::map::RelaxedNewtonMap;

/// Root capture radius, scaled by `max(1, |root|)`.
pub const DEFAULT_EPS: f64 = 1e-8;
/// Longest period [`detect_cycle`] looks for.
pub const MAX_PERIOD: usize = 64;
/// A cycle closer than this to a root is the root itself.
pub const ROOT_MERGE_RADIUS: f64 = 1e-6;

const CONFIRM_STEPS: usize = 5;
const ESCAPE_STEPS: usize = 10;
const CYCLE_RESIDUAL: f64 = 1e-10;
const SUPERATTRACTING_TOL: f64 = 1e-8;
const PARABOLIC_LOW: f64 = 1.0 - 1e-4;
const PARABOLIC_HIGH: f64 = 1.0 + 1e-6;
const TAIL_LEN: usize = 2 * MAX_PERIOD + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleClass {
    Superattracting,
    Attracting,
    /// `|λ|` within the parabolic band and `λ` close to a root of unity.
    ParabolicSuspect,
    /// `|λ|` within the parabolic band otherwise.
    Indifferent,
}

impl CycleClass {
    pub fn name(self) -> &'static str {
        match self {
            CycleClass::Superattracting => "superattracting",
            CycleClass::Attracting => "attracting",
            CycleClass::ParabolicSuspect => "parabolic-suspect",
            CycleClass::Indifferent => "indifferent",
        }
    }

    /// `None` for repelling multipliers.
    pub fn of(multiplier: Complex64) -> Option<Self> {
        let r = multiplier.abs();
        if r <= SUPERATTRACTING_TOL {
            Some(CycleClass::Superattracting)
        } else if r < PARABOLIC_LOW {
            Some(CycleClass::Attracting)
        } else if r <= PARABOLIC_HIGH {
            let one = Complex64::new(1.0, 0.0);
            let mut power = one;
            let near_unity = (1..=MAX_PERIOD).any(|_| {
                power *= multiplier;
                (power - one).abs() < 1e-3
            });
            Some(if near_unity {
                CycleClass::ParabolicSuspect
            } else {
                CycleClass::Indifferent
            })
        } else {
            None
        }
    }

    pub fn is_attracting(self) -> bool {
        matches!(self, CycleClass::Superattracting | CycleClass::Attracting)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleInfo {
    pub period: usize,
    pub points: Vec<Complex64>,
    /// `(N^q)'` along the cycle, the product of `N'` at its points.
    pub multiplier: Complex64,
    pub class: CycleClass,
}

impl CycleInfo {
    /// Distance from `z` to the nearest cycle point.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.points.iter().map(|&p| (p - z).abs()).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitOutcome {
    ConvergedToRoot { root: usize, iterations: usize },
    AttractedToCycle { cycle: CycleInfo, iterations: usize },
    /// The orbit hit a pole, so it lands on the repelling fixed point at `∞`.
    ReachedInfinity { iterations: usize },
    /// `|z|` stayed beyond the divergence radius for 10 steps in a row.
    DivergedToInfinity { iterations: usize },
    Undecided { budget: usize },
}

impl OrbitOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            OrbitOutcome::ConvergedToRoot { .. } => "converged-to-root",
            OrbitOutcome::AttractedToCycle { .. } => "attracted-to-cycle",
            OrbitOutcome::ReachedInfinity { .. } => "reached-infinity",
            OrbitOutcome::DivergedToInfinity { .. } => "diverged-to-infinity",
            OrbitOutcome::Undecided { .. } => "undecided",
        }
    }

    pub fn iterations(&self) -> usize {
        match *self {
            OrbitOutcome::ConvergedToRoot { iterations, .. }
            | OrbitOutcome::AttractedToCycle { iterations, .. }
            | OrbitOutcome::ReachedInfinity { iterations }
            | OrbitOutcome::DivergedToInfinity { iterations } => iterations,
            OrbitOutcome::Undecided { budget } => budget,
        }
    }
}

/// `(N^q(z), (N^q)'(z))` by the chain rule, `None` if the orbit hits a pole.
pub fn iterate_with_derivative(map: &RelaxedNewtonMap, z: Complex64, q: usize) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut slope = Complex64::new(1.0, 0.0);
    for _ in 0..q {
        let (next, d) = map.step_with_derivative(w)?;
        slope *= d;
        w = next;
    }
    Some((w, slope))
}

/// Attractors tracked during an orbit.
struct Targets<'a> {
    roots: Vec<(Complex64, f64)>,
    cycles: &'a [CycleInfo],
    eps: f64,
    escape_radius: f64,
}

impl<'a> Targets<'a> {
    fn new(map: &RelaxedNewtonMap, eps: f64, cycles: &'a [CycleInfo]) -> Self {
        let roots: Vec<_> = map
            .polynomial()
            .roots()
            .iter()
            .map(|&(r, _)| (r, eps * r.abs().max(1.0)))
            .collect();
        let rmax = roots.iter().map(|r| r.0.abs()).fold(0.0, f64::max);
        Targets { roots, cycles, eps, escape_radius: 1e6 * (1.0 + rmax) }
    }

    fn near_root(&self, z: Complex64) -> Option<usize> {
        self.roots.iter().position(|&(r, e)| (z - r).abs() < e)
    }

    fn near_cycle(&self, z: Complex64) -> Option<usize> {
        self.cycles
            .iter()
            .position(|c| c.points.iter().any(|&p| (z - p).abs() < self.eps * p.abs().max(1.0)))
    }
}

/// Distances to `root` are non-increasing, up to rounding, over the next
/// few steps.
fn confirm_contraction(map: &RelaxedNewtonMap, mut z: Complex64, root: Complex64) -> bool {
    let slack = 8.0 * f64::EPSILON * root.abs().max(1.0);
    let mut dist = (z - root).abs();
    for _ in 0..CONFIRM_STEPS {
        match map.step(z) {
            Some(w) => z = w,
            None => return false,
        }
        let next = (z - root).abs();
        if next > dist + slack {
            return false;
        }
        dist = next;
    }
    true
}

/// Iterates `N` from `z0` until it is captured by a root, lands on `∞`,
/// settles on an attracting cycle, or the budget runs out.
pub fn iterate_orbit(map: &RelaxedNewtonMap, z0: Complex64, budget: usize, eps: f64) -> OrbitOutcome {
    iterate_orbit_with_cycles(map, z0, budget, eps, &[])
}

/// [`iterate_orbit`] that also captures orbits entering the `eps`
/// neighbourhood of a known cycle.
pub fn iterate_orbit_with_cycles(
    map: &RelaxedNewtonMap,
    z0: Complex64,
    budget: usize,
    eps: f64,
    cycles: &[CycleInfo],
) -> OrbitOutcome {
    let targets = Targets::new(map, eps, cycles);
    let transient = budget / 2;
    let mut z = z0;
    let mut escaped = 0;
    let mut tail: Vec<Complex64> = Vec::new();
    for it in 0..budget {
        if !z.is_finite() {
            return OrbitOutcome::ReachedInfinity { iterations: it };
        }
        if let Some(i) = targets.near_root(z) {
            if confirm_contraction(map, z, targets.roots[i].0) {
                return OrbitOutcome::ConvergedToRoot { root: i, iterations: it };
            }
        }
        if let Some(c) = targets.near_cycle(z) {
            return OrbitOutcome::AttractedToCycle { cycle: cycles[c].clone(), iterations: it };
        }
        if z.abs() > targets.escape_radius {
            escaped += 1;
            if escaped >= ESCAPE_STEPS {
                return OrbitOutcome::DivergedToInfinity { iterations: it };
            }
        } else {
            escaped = 0;
        }
        if it >= transient {
            tail.push(z);
            if tail.len() == TAIL_LEN {
                if let Some(cycle) = detect_cycle(&tail, map) {
                    let off_roots = cycle.points.iter().all(|&p| {
                        targets.roots.iter().all(|&(r, _)| (p - r).abs() > ROOT_MERGE_RADIUS * r.abs().max(1.0))
                    });
                    if off_roots {
                        return OrbitOutcome::AttractedToCycle { cycle, iterations: it };
                    }
                }
                tail.clear();
            }
        }
        match map.step(z) {
            Some(w) => z = w,
            None => return OrbitOutcome::ReachedInfinity { iterations: it + 1 },
        }
    }
    OrbitOutcome::Undecided { budget }
}

/// Looks for a period `q ≤ 64` in a post-transient orbit segment and
/// refines it by damped Newton on `N^q(z) - z`.
///
/// Returns `None` when no near-recurrence is found, the refinement fails,
/// or the refined cycle is repelling.
pub fn detect_cycle(tail: &[Complex64], map: &RelaxedNewtonMap) -> Option<CycleInfo> {
    let n = tail.len();
    if n < 2 {
        return None;
    }
    let last = tail[n - 1];
    let scale = 1.0 + last.abs();
    let gaps: Vec<(usize, f64)> = (1..=MAX_PERIOD.min(n - 1))
        .map(|q| (q, (last - tail[n - 1 - q]).abs()))
        .collect();
    let best = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    if !(best <= 1e-3 * scale) {
        return None;
    }
    let q = gaps.iter().find(|g| g.1 <= 2.0 * best + 1e-12 * scale)?.0;
    let z = refine_cycle(map, last, q)?;
    let q = true_period(map, z, q);
    let mut points = Vec::with_capacity(q);
    let mut multiplier = Complex64::new(1.0, 0.0);
    let mut w = z;
    for _ in 0..q {
        points.push(w);
        let (next, d) = map.step_with_derivative(w)?;
        multiplier *= d;
        w = next;
    }
    if (w - z).abs() > CYCLE_RESIDUAL * (1.0 + z.abs()) {
        return None;
    }
    let class = CycleClass::of(multiplier)?;
    Some(CycleInfo { period: q, points, multiplier, class })
}

fn refine_cycle(map: &RelaxedNewtonMap, start: Complex64, q: usize) -> Option<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let residual = |z: Complex64| iterate_with_derivative(map, z, q).map(|(w, d)| (w - z, d - one));
    let mut z = start;
    let (mut f, mut df) = residual(z)?;
    for _ in 0..60 {
        if f.abs() <= 1e-14 * (1.0 + z.abs()) {
            break;
        }
        if df == Complex64::new(0.0, 0.0) {
            return None;
        }
        let step = f / df;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let trial = z - step * t;
            if let Some((ft, dft)) = residual(trial) {
                if ft.abs() < f.abs() || ft.abs() <= 1e-14 * (1.0 + trial.abs()) {
                    z = trial;
                    f = ft;
                    df = dft;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (z.is_finite() && f.abs() <= CYCLE_RESIDUAL * (1.0 + z.abs())).then_some(z)
}

/// Smallest divisor `d` of `q` with `N^d(z) = z` to the cycle tolerance.
fn true_period(map: &RelaxedNewtonMap, z: Complex64, q: usize) -> usize {
    (1..q)
        .filter(|d| q.is_multiple_of(*d))
        .find(|&d| {
            iterate_with_derivative(map, z, d)
                .is_some_and(|(w, _)| (w - z).abs() <= CYCLE_RESIDUAL * (1.0 + z.abs()))
        })
        .unwrap_or(q)
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictStatus {
    /// Every critical orbit converges to a root or lands on `∞`.
    ConvergentEvidence,
    /// Some critical orbit is attracted to a cycle off the roots.
    NonConvergent(CycleInfo),
    Undecided,
}

impl VerdictStatus {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictStatus::ConvergentEvidence => "convergent-evidence",
            VerdictStatus::NonConvergent(_) => "non-convergent",
            VerdictStatus::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalOrbit {
    pub seed: Complex64,
    pub outcome: OrbitOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceVerdict {
    pub status: VerdictStatus,
    pub orbits: Vec<CriticalOrbit>,
}

impl ConvergenceVerdict {
    /// Distinct cycles met by the critical orbits.
    pub fn cycles(&self) -> Vec<&CycleInfo> {
        let mut out: Vec<&CycleInfo> = Vec::new();
        for o in &self.orbits {
            if let OrbitOutcome::AttractedToCycle { cycle, .. } = &o.outcome {
                if !out.iter().any(|c| c.period == cycle.period && c.distance(cycle.points[0]) < ROOT_MERGE_RADIUS) {
                    out.push(cycle);
                }
            }
        }
        out
    }
}

/// Follows every critical orbit. Evidence only: parabolic behaviour and
/// exhausted budgets give [`VerdictStatus::Undecided`].
pub fn classify_convergence(map: &RelaxedNewtonMap, budget: usize) -> crate::Result<ConvergenceVerdict> {
    let seeds = map.critical_points()?;
    let orbits: Vec<CriticalOrbit> = seeds
        .iter()
        .map(|&seed| CriticalOrbit { seed, outcome: iterate_orbit(map, seed, budget, DEFAULT_EPS) })
        .collect();
    Ok(verdict_from_orbits(orbits))
}

/// Combines critical-orbit outcomes, in seed order, into a verdict.
pub fn verdict_from_orbits(orbits: Vec<CriticalOrbit>) -> ConvergenceVerdict {
    let cycle = orbits.iter().find_map(|o| match &o.outcome {
        OrbitOutcome::AttractedToCycle { cycle, .. } if cycle.class.is_attracting() => Some(cycle.clone()),
        _ => None,
    });
    let all_settled = orbits.iter().all(|o| {
        matches!(
            o.outcome,
            OrbitOutcome::ConvergedToRoot { .. } | OrbitOutcome::ReachedInfinity { .. }
        )
    });
    let status = match cycle {
        Some(c) => VerdictStatus::NonConvergent(c),
        None if all_settled => VerdictStatus::ConvergentEvidence,
        None => VerdictStatus::Undecided,
    };
    ConvergenceVerdict { status, orbits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::poly::FactoredPolynomial;
    use alloc::vec;

    fn quadratic(h: Complex64) -> RelaxedNewtonMap {
        let p = FactoredPolynomial::monic(vec![(c64(1.0, 0.0), 1), (c64(-1.0, 0.0), 1)]).unwrap();
        RelaxedNewtonMap::new(p, h).unwrap()
    }

    #[test]
    fn newton_on_quadratic() {
        let n = quadratic(c64(1.0, 0.0));
        match iterate_orbit(&n, c64(2.0, 0.0), 100, DEFAULT_EPS) {
            OrbitOutcome::ConvergedToRoot { root, iterations } => {
                assert_eq!(root, 0);
                assert!(iterations <= 8);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            iterate_orbit(&n, c64(-1.0, 0.0), 100, DEFAULT_EPS),
            OrbitOutcome::ConvergedToRoot { root: 1, iterations: 0 }
        );
        assert_eq!(
            iterate_orbit(&n, c64(0.0, 0.0), 100, DEFAULT_EPS),
            OrbitOutcome::ReachedInfinity { iterations: 1 }
        );
    }

    #[test]
    fn fixed_tail_gives_period_one() {
        let h = c64(0.5, 0.0);
        let n = quadratic(h);
        let mut z = c64(1.3, 0.2);
        let mut tail = Vec::new();
        for _ in 0..80 {
            tail.push(z);
            z = n.step(z).unwrap();
        }
        let c = detect_cycle(&tail, &n).unwrap();
        assert_eq!(c.period, 1);
        assert!((c.points[0] - c64(1.0, 0.0)).abs() < 1e-12);
        assert!((c.multiplier - (c64(1.0, 0.0) - h)).abs() < 1e-10);
    }

    #[test]
    fn julia_tail_has_no_cycle() {
        // On the imaginary axis z^2 - 1 under Newton is conjugate to a doubling map.
        let n = quadratic(c64(1.0, 0.0));
        let mut z = c64(0.0, 0.3);
        let mut tail = Vec::new();
        for _ in 0..40 {
            tail.push(z);
            z = n.step(z).unwrap();
        }
        assert!(detect_cycle(&tail, &n).is_none());
    }

    #[test]
    fn quadratic_verdicts() {
        for h in [c64(1.0, 0.0), c64(0.5, 0.785), c64(1.5, 0.0)] {
            let v = classify_convergence(&quadratic(h), 2000).unwrap();
            assert_eq!(v.status, VerdictStatus::ConvergentEvidence, "{h}");
        }
    }

    #[test]
    fn cycle_classes() {
        assert_eq!(CycleClass::of(c64(0.0, 0.0)), Some(CycleClass::Superattracting));
        assert_eq!(CycleClass::of(c64(0.5, 0.0)), Some(CycleClass::Attracting));
        assert_eq!(CycleClass::of(c64(-1.0, 0.0)), Some(CycleClass::ParabolicSuspect));
        assert_eq!(CycleClass::of(c64(1.5, 0.0)), None);
    }
}
