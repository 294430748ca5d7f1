//! The relaxed Newton map `N(z) = z - h p(z) / p'(z)` in reduced rational form.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::{Complex64, ComplexFloat};

use crate::poly::{FactoredPolynomial, Polynomial};
use crate::roots::{self, RootCluster};
use crate::{Error, Result};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl Point {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        if z.is_finite() {
            Point::Finite(z)
        } else {
            Point::Infinity
        }
    }
}

/// Multipliers within this distance of 0 are superattracting, and moduli
/// within this distance of 1 are indifferent.
pub const MULTIPLIER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointClass {
    Superattracting,
    Attracting,
    Repelling,
    Indifferent,
}

impl FixedPointClass {
    pub fn of(multiplier: Complex64) -> Self {
        let r = multiplier.abs();
        if r <= MULTIPLIER_TOL {
            FixedPointClass::Superattracting
        } else if (r - 1.0).abs() <= MULTIPLIER_TOL {
            FixedPointClass::Indifferent
        } else if r < 1.0 {
            FixedPointClass::Attracting
        } else {
            FixedPointClass::Repelling
        }
    }

    pub fn is_attracting(self) -> bool {
        matches!(self, FixedPointClass::Superattracting | FixedPointClass::Attracting)
    }

    pub fn name(self) -> &'static str {
        match self {
            FixedPointClass::Superattracting => "superattracting",
            FixedPointClass::Attracting => "attracting",
            FixedPointClass::Repelling => "repelling",
            FixedPointClass::Indifferent => "indifferent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointRecord {
    pub location: Point,
    pub multiplier: Complex64,
    /// Multiplicity of the root of `p`; `None` for `∞`.
    pub root_multiplicity: Option<u32>,
    pub class: FixedPointClass,
    /// `1 / (1 - λ)`.
    pub residue_index: Complex64,
}

impl FixedPointRecord {
    fn new(location: Point, multiplier: Complex64, root_multiplicity: Option<u32>) -> Self {
        FixedPointRecord {
            location,
            multiplier,
            root_multiplicity,
            class: FixedPointClass::of(multiplier),
            residue_index: (Complex64::new(1.0, 0.0) - multiplier).inv(),
        }
    }
}

/// Polynomial families whose critical points have closed forms.
///
/// For the symmetric families, `z = center + scale · w` moves the
/// representative (`w^n - 1` or `w^m (w^n - 1)`) onto `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolynomialClass {
    TwoRoots,
    Unicritical { center: Complex64, scale: Complex64, n: u32 },
    Composite { center: Complex64, scale: Complex64, m: u32, n: u32 },
    General,
}

impl PolynomialClass {
    pub fn name(&self) -> &'static str {
        match self {
            PolynomialClass::TwoRoots => "two-roots",
            PolynomialClass::Unicritical { .. } => "unicritical",
            PolynomialClass::Composite { .. } => "composite",
            PolynomialClass::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedNewtonMap {
    h: Complex64,
    p: FactoredPolynomial,
    num: Polynomial,
    den: Polynomial,
    /// `num' den - num den'`; its roots are the critical points.
    wronskian: Polynomial,
}

impl RelaxedNewtonMap {
    /// Builds `N_{h,p}` from the factored form.
    ///
    /// With `q = lead Π (z - r_i)` the squarefree part, the common factor
    /// `Π (z - r_i)^{m_i - 1}` cancels analytically:
    /// `den = lead Σ m_i Π_{j≠i} (z - r_j)` and `num = z den - h q`.
    pub fn new(p: FactoredPolynomial, h: Complex64) -> Result<Self> {
        Self::check(&p, h)?;
        let lead = p.leading();
        let mut den = Polynomial::zero();
        for (i, &(_, m)) in p.roots().iter().enumerate() {
            let term = p
                .roots()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Polynomial::constant(lead * m as f64), |acc, (_, &(r, _))| {
                    &acc * &Polynomial::linear_factor(r)
                });
            den = &den + &term;
        }
        let q = p.squarefree_part();
        let num = &(&den * &Polynomial::monomial(Complex64::new(1.0, 0.0), 1)) - &q.scale(h);
        Ok(Self::assemble(p, h, num, den))
    }

    /// Builds `N_{h,p}` from dense coefficients.
    ///
    /// Roots are located numerically to fill in the factored form. When
    /// they are all simple, `num = z p' - h p` and `den = p'` are taken
    /// straight from the coefficients.
    pub fn from_dense(p: &Polynomial, h: Complex64) -> Result<Self> {
        if p.degree() < 2 {
            return Err(Error::DegenerateInput("polynomial is linear or constant: N is linear"));
        }
        let clusters = roots::factor_roots(p, roots::DEFAULT_TOL)?;
        let factored = FactoredPolynomial::new(
            p.leading(),
            clusters.iter().map(|c| (c.center, c.multiplicity)).collect(),
        )?;
        if clusters.iter().all(|c| c.multiplicity == 1) {
            Self::check(&factored, h)?;
            let den = p.derivative();
            let num = &(&den * &Polynomial::monomial(Complex64::new(1.0, 0.0), 1)) - &p.scale(h);
            Ok(Self::assemble(factored, h, num, den))
        } else {
            Self::new(factored, h)
        }
    }

    fn check(p: &FactoredPolynomial, h: Complex64) -> Result<()> {
        if p.distinct_roots() < 2 {
            return Err(Error::DegenerateInput(
                "polynomial is linear or a monomial: N is linear",
            ));
        }
        if h == Complex64::new(0.0, 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter("relaxation parameter must be finite and nonzero"));
        }
        if h == Complex64::new(p.degree() as f64, 0.0) {
            return Err(Error::InvalidParameter("h = deg p leaves infinity non-fixed"));
        }
        Ok(())
    }

    fn assemble(p: FactoredPolynomial, h: Complex64, num: Polynomial, den: Polynomial) -> Self {
        let wronskian = &(&num.derivative() * &den) - &(&num * &den.derivative());
        RelaxedNewtonMap { h, p, num, den, wronskian }
    }

    pub fn h(&self) -> Complex64 {
        self.h
    }

    pub fn polynomial(&self) -> &FactoredPolynomial {
        &self.p
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Degree of `N` as a rational map: the number of distinct roots.
    pub fn reduced_degree(&self) -> usize {
        self.p.distinct_roots()
    }

    /// `N' = wronskian / den²`.
    pub fn critical_polynomial(&self) -> &Polynomial {
        &self.wronskian
    }

    /// Whether every root is attracting: `|h - m| < m` for the least
    /// multiplicity `m`.
    pub fn h_in_attracting_domain(&self) -> bool {
        let m = self.p.min_multiplicity() as f64;
        (self.h - m).abs() < m
    }

    fn den_vanishes(&self, z: Complex64, value: Complex64) -> bool {
        let bound = self.den.magnitude_bound(z.abs().max(1.0));
        value.abs() <= 4.0 * (self.den.degree() + 1) as f64 * f64::EPSILON * bound
    }

    /// One step of the iteration, `None` when `z` is a pole (to rounding).
    #[inline]
    pub fn step(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z);
        if self.den_vanishes(z, d) {
            return None;
        }
        let w = self.num.eval(z) / d;
        w.is_finite().then_some(w)
    }

    /// `N` on the extended plane; poles go to `∞` and `N(∞) = ∞`.
    pub fn eval(&self, z: Point) -> Point {
        match z {
            Point::Infinity => Point::Infinity,
            Point::Finite(z) if !z.is_finite() => Point::Infinity,
            Point::Finite(z) => self.step(z).map_or(Point::Infinity, Point::Finite),
        }
    }

    /// `(N(z), N'(z))`, or `None` at a pole.
    #[inline]
    pub fn step_with_derivative(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        if self.den_vanishes(z, d) {
            return None;
        }
        let w = n / d;
        let slope = (dn * d - n * dd) / (d * d);
        (w.is_finite() && slope.is_finite()).then_some((w, slope))
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.step_with_derivative(z).map(|(_, s)| s).ok_or(Error::PoleInput)
    }

    /// Multiplier at `∞`: `d / (d - h)` with `d = deg p`.
    pub fn infinity_multiplier(&self) -> Complex64 {
        let d = Complex64::new(self.p.degree() as f64, 0.0);
        d / (d - self.h)
    }

    /// One record per distinct root (multiplier `1 - h/m`) followed by `∞`.
    pub fn fixed_points(&self) -> Vec<FixedPointRecord> {
        let one = Complex64::new(1.0, 0.0);
        let mut out: Vec<FixedPointRecord> = self
            .p
            .roots()
            .iter()
            .map(|&(r, m)| FixedPointRecord::new(Point::Finite(r), one - self.h / m as f64, Some(m)))
            .collect();
        out.push(FixedPointRecord::new(Point::Infinity, self.infinity_multiplier(), None));
        out
    }

    /// `Σ 1/(1 - λ)` over all fixed points; equals 1 for every valid map.
    pub fn residue_index_sum(&self) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for fp in self.fixed_points() {
            if (fp.multiplier - one).abs() <= MULTIPLIER_TOL {
                return Err(Error::ParabolicFixedPoint);
            }
            sum += (one - fp.multiplier).inv();
        }
        Ok(sum)
    }

    /// Recognises the families with closed-form critical points.
    pub fn class(&self) -> PolynomialClass {
        classify_polynomial(&self.p)
    }

    /// Critical points with multiplicity (`2 d - 2` of them for reduced
    /// degree `d`). Closed forms are used for the recognised families.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        let h = self.h;
        let pts = match self.class() {
            PolynomialClass::TwoRoots => {
                let w = &self.wronskian;
                let (a, b) = solve_quadratic(w.coeff(2), w.coeff(1), w.coeff(0));
                vec![a, b]
            }
            PolynomialClass::Unicritical { center, scale, n } => {
                let nf = n as f64;
                let mut pts = vec![center; n as usize - 2];
                let target = h * (nf - 1.0) / (nf - h);
                pts.extend(nth_roots(target, n).into_iter().map(|w| center + scale * w));
                pts
            }
            PolynomialClass::Composite { center, scale, m, n } => {
                let (mf, nf) = (m as f64, n as f64);
                let a = (mf + nf) * (mf + nf - h);
                let b = (mf * mf + mf * nf - mf * h) * 2.0 + h * (nf * nf) - h * nf;
                let c = (mf - h) * mf;
                let (t1, t2) = solve_quadratic(a, -b, c);
                nth_roots(t1, n)
                    .into_iter()
                    .chain(nth_roots(t2, n))
                    .map(|w| center + scale * w)
                    .collect()
            }
            PolynomialClass::General => return self.critical_points_general(),
        };
        Ok(pts)
    }

    /// Critical points from the roots of `num' den - num den'`, which is
    /// `(1-h)(p')² + h p p''` with the repeated-root factors divided out.
    pub fn critical_points_general(&self) -> Result<Vec<Complex64>> {
        let clusters = roots::factor_roots(&self.wronskian, roots::DEFAULT_TOL)?;
        Ok(roots::expand_clusters(&clusters))
    }

    /// Roots of the reduced denominator with multiplicity.
    pub fn poles(&self) -> Result<Vec<RootCluster>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        roots::factor_roots(&self.den, roots::DEFAULT_TOL)
    }
}

/// Stable roots of `a t² + b t + c`.
fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if a == zero {
        return (-c / b, Complex64::new(f64::INFINITY, 0.0));
    }
    let sq = (b * b - a * c * 4.0).sqrt();
    let q = if (b + sq).abs() >= (b - sq).abs() {
        -(b + sq) / 2.0
    } else {
        -(b - sq) / 2.0
    };
    if q == zero {
        (zero, zero)
    } else {
        (q / a, c / q)
    }
}

/// The `n` solutions of `w^n = t`.
fn nth_roots(t: Complex64, n: u32) -> Vec<Complex64> {
    if t == Complex64::new(0.0, 0.0) {
        return vec![t; n as usize];
    }
    let base = t.powf(1.0 / n as f64);
    (0..n)
        .map(|k| base * Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

const CLASS_REL_TOL: f64 = 1e-9;

/// If the given roots (all simple) are the vertices of a regular `n`-gon
/// about `center`, returns `c` with `Π (z - r_i) = (z - center)^n - c`.
fn regular_polygon(center: Complex64, pts: &[Complex64]) -> Option<Complex64> {
    let n = pts.len() as i32;
    let powers: Vec<Complex64> = pts.iter().map(|&r| (r - center).powi(n)).collect();
    let c = powers[0];
    if c.abs() == 0.0 {
        return None;
    }
    let scale = pts.iter().map(|&r| (r - center).abs()).fold(0.0, f64::max);
    let sum: Complex64 = pts.iter().map(|&r| r - center).sum();
    let centred = sum.abs() <= CLASS_REL_TOL * scale * n as f64;
    let equal = powers.iter().all(|&q| (q - c).abs() <= CLASS_REL_TOL * c.abs());
    (centred && equal).then_some(c)
}

pub fn classify_polynomial(p: &FactoredPolynomial) -> PolynomialClass {
    let roots = p.roots();
    let k = roots.len();
    if k == 2 {
        return PolynomialClass::TwoRoots;
    }
    if k < 2 {
        return PolynomialClass::General;
    }
    if roots.iter().all(|&(_, m)| m == 1) {
        let pts: Vec<Complex64> = roots.iter().map(|&(r, _)| r).collect();
        let center = pts.iter().sum::<Complex64>() / k as f64;
        if let Some(c) = regular_polygon(center, &pts) {
            return PolynomialClass::Unicritical {
                center,
                scale: c.powf(1.0 / k as f64),
                n: k as u32,
            };
        }
    }
    for (i, &(beta, m)) in roots.iter().enumerate() {
        let others: Vec<Complex64> = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &(r, mult))| if mult == 1 { Some(r) } else { None })
            .collect::<Option<Vec<_>>>()
            .unwrap_or_default();
        if others.len() != k - 1 || others.len() < 2 {
            continue;
        }
        if let Some(c) = regular_polygon(beta, &others) {
            let n = others.len() as u32;
            return PolynomialClass::Composite {
                center: beta,
                scale: c.powf(1.0 / n as f64),
                m,
                n,
            };
        }
    }
    PolynomialClass::General
}

/// Builds `N_{h,p}` and `N_{nh,p^n}` and returns the largest coefficient
/// difference after scaling both so that `den` has leading coefficient 1.
pub fn equal_power_check(p: &FactoredPolynomial, h: Complex64, n: u32) -> Result<f64> {
    let base = RelaxedNewtonMap::new(p.clone(), h)?;
    let powered = RelaxedNewtonMap::new(p.power(n)?, h * n as f64)?;
    let normalise = |m: &RelaxedNewtonMap| {
        let s = m.den().leading().inv();
        (m.num().scale(s), m.den().scale(s))
    };
    let (n1, d1) = normalise(&base);
    let (n2, d2) = normalise(&powered);
    Ok(n1.max_coeff_diff(&n2).max(d1.max_coeff_diff(&d2)))
}
