//! Representative polynomials and a cubic whose relaxed Newton map has a
//! superattracting 2-cycle.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::{Complex64, ComplexFloat};

use crate::map::RelaxedNewtonMap;
use crate::poly::{FactoredPolynomial, Polynomial};
use crate::{Error, Result};

/// `e^{2πik/n}` with components below rounding snapped to zero.
pub fn root_of_unity(k: u32, n: u32) -> Complex64 {
    let z = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(snap(z.re), snap(z.im))
}

/// `(z - 1)^k (z + 1)^m`.
pub fn two_root_rep(k: u32, m: u32) -> Result<FactoredPolynomial> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("multiplicities must be positive"));
    }
    FactoredPolynomial::monic(alloc::vec![(Complex64::new(1.0, 0.0), k), (Complex64::new(-1.0, 0.0), m)])
}

/// `z^n - 1`.
pub fn unicritical_rep(n: u32) -> Result<FactoredPolynomial> {
    if n < 2 {
        return Err(Error::InvalidParameter("unicritical representative needs n >= 2"));
    }
    FactoredPolynomial::monic((0..n).map(|k| (root_of_unity(k, n), 1)).collect())
}

/// `z^m (z^n - 1)`.
pub fn composite_rep(m: u32, n: u32) -> Result<FactoredPolynomial> {
    if m == 0 || n < 2 {
        return Err(Error::InvalidParameter("composite representative needs m >= 1, n >= 2"));
    }
    let mut roots: Vec<_> = alloc::vec![(Complex64::new(0.0, 0.0), m)];
    roots.extend((0..n).map(|k| (root_of_unity(k, n), 1)));
    FactoredPolynomial::monic(roots)
}

/// `z^3 - 3z + a`.
pub fn reduced_cubic(a: Complex64) -> Polynomial {
    Polynomial::new(alloc::vec![
        a,
        Complex64::new(-3.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Below this `|ξ|` the quotient formula for `a` is `0/0` to rounding and
/// the closed form is used instead.
const SMALL_XI: f64 = 1e-3;

/// `z^3 - 3z + a` together with a critical point `ξ` of `N_{h,p}` that
/// lies on a superattracting 2-cycle `{ξ, partner}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonconvergentCubic {
    pub h: Complex64,
    pub sign: Sign,
    pub a: Complex64,
    pub xi: Complex64,
    pub partner: Complex64,
    /// `a` from the closed form in `h`.
    pub a_closed_form: Complex64,
    pub report: CycleReport,
}

impl NonconvergentCubic {
    pub fn polynomial(&self) -> Polynomial {
        reduced_cubic(self.a)
    }

    pub fn map(&self) -> Result<RelaxedNewtonMap> {
        RelaxedNewtonMap::from_dense(&self.polynomial(), self.h)
    }
}

/// Residuals of the 2-cycle, recomputed from `(h, a, ξ)` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport {
    /// `|N²(ξ) - ξ|`
    pub residual_fix: f64,
    /// `|N'(ξ)|`
    pub residual_crit: f64,
    /// `|(N²)'(ξ)|`
    pub multiplier_mag: f64,
}

/// `ξ = ±(h-1)/√(h²-8h+13)` (principal root).
pub fn cycle_critical_point(h: Complex64, sign: Sign) -> Complex64 {
    let s = h * h - h * 8.0 + 13.0;
    (h - 1.0) / s.sqrt() * sign.value()
}

/// `a = ((h-3)ξ⁴ + 6ξ² + 3(h-1)) / (2hξ)`, which makes `ξ` critical.
pub fn a_from_critical_point(h: Complex64, xi: Complex64) -> Complex64 {
    let xi2 = xi * xi;
    ((h - 3.0) * xi2 * xi2 + xi2 * 6.0 + (h - 1.0) * 3.0) / (h * xi * 2.0)
}

/// `a = ±2(h⁴ - 12h³ + 57h² - 127h + 108) / (h (h²-8h+13)^{3/2})`.
pub fn a_closed_form(h: Complex64, sign: Sign) -> Complex64 {
    let s = h * h - h * 8.0 + 13.0;
    let poly = (((h - 12.0) * h + 57.0) * h - 127.0) * h + 108.0;
    poly * 2.0 / (h * s * s.sqrt()) * sign.value()
}

/// The degree-6 factor of `N²(z) - z` after removing the roots of `p`,
/// evaluated at `z` and divided by the sum of its term magnitudes.
pub fn two_periodic_residual(h: Complex64, a: Complex64, z: Complex64) -> f64 {
    let h2 = h * h;
    let h3 = h2 * h;
    let coeffs = [
        a * a * h3 - a * a * h2 * 3.0 - h * 27.0 + 54.0,
        -(a * h3 * 6.0 - a * h2 * 27.0 + a * h * 18.0),
        h3 * 9.0 - h2 * 54.0 + h * 135.0 - 162.0,
        a * h3 * 2.0 - a * h2 * 15.0 + a * h * 18.0,
        -(h3 * 6.0 - h2 * 54.0 + h * 153.0 - 162.0),
        Complex64::new(0.0, 0.0),
        h3 - h2 * 12.0 + h * 45.0 - 54.0,
    ];
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let mut power = Complex64::new(1.0, 0.0);
    for c in coeffs {
        value += c * power;
        scale += (c * power).abs();
        power *= z;
    }
    if scale == 0.0 {
        0.0
    } else {
        value.abs() / scale
    }
}

/// Recomputes the cycle residuals with the direct formulas
/// `N = z - h p/p'` and `N' = 1 - h + h p p''/p'²`.
pub fn verify_superattracting_2cycle(c: &NonconvergentCubic) -> CycleReport {
    cycle_report(c.h, c.a, c.xi)
}

fn cycle_report(h: Complex64, a: Complex64, xi: Complex64) -> CycleReport {
    let p = |z: Complex64| z * z * z - z * 3.0 + a;
    let dp = |z: Complex64| z * z * 3.0 - 3.0;
    let d2p = |z: Complex64| z * 6.0;
    let n = |z: Complex64| z - h * p(z) / dp(z);
    let dn = |z: Complex64| {
        let d = dp(z);
        -h + 1.0 + h * p(z) * d2p(z) / (d * d)
    };
    let w = n(xi);
    let back = n(w);
    let nan_to_inf = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
    CycleReport {
        residual_fix: nan_to_inf((back - xi).abs()),
        residual_crit: nan_to_inf(dn(xi).abs()),
        multiplier_mag: nan_to_inf((dn(xi) * dn(w)).abs()),
    }
}

/// Builds the cubic `z³ - 3z + a` for `|h - 1| < 1` and checks every
/// cycle invariant before returning it.
pub fn nonconvergent_cubic(h: Complex64, sign: Sign) -> Result<NonconvergentCubic> {
    if !h.is_finite() || !((h - 1.0).abs() < 1.0) {
        return Err(Error::InvalidParameter("h must satisfy |h - 1| < 1"));
    }
    let s = h * h - h * 8.0 + 13.0;
    if s.abs() < 1e-12 {
        return Err(Error::InvalidParameter("h^2 - 8h + 13 vanishes"));
    }
    let xi = cycle_critical_point(h, sign);
    let closed = a_closed_form(h, sign);
    let a = if xi.abs() > SMALL_XI {
        let a = a_from_critical_point(h, xi);
        if (a - closed).abs() > 1e-10 * a.abs().max(1.0) {
            return Err(Error::VerificationFailure("closed form for a disagrees with the critical-point formula"));
        }
        a
    } else {
        closed
    };
    if (a - 2.0).abs() < 1e-9 || (a + 2.0).abs() < 1e-9 {
        return Err(Error::VerificationFailure("a = ±2 gives a repeated root"));
    }
    let xi2 = xi * xi;
    let crit = (-h + 3.0) * xi2 * xi2 - xi2 * 6.0 + a * h * xi * 2.0 + (-h + 1.0) * 3.0;
    let crit_scale = 1.0 + (a * h * xi).abs() + xi2.abs() * 6.0;
    if crit.abs() > 1e-10 * crit_scale {
        return Err(Error::VerificationFailure("xi is not a critical point"));
    }
    let report = cycle_report(h, a, xi);
    if !(report.residual_fix < 1e-10) {
        return Err(Error::VerificationFailure("N^2(xi) != xi"));
    }
    if !(report.multiplier_mag < 1e-8) {
        return Err(Error::VerificationFailure("cycle is not superattracting"));
    }
    let partner = xi - h * (xi * xi * xi - xi * 3.0 + a) / (xi * xi * 3.0 - 3.0);
    Ok(NonconvergentCubic { h, sign, a, xi, partner, a_closed_form: closed, report })
}
