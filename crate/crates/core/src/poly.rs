//! Dense and factored complex polynomials, and the affine changes of
//! coordinates used to move a polynomial family onto its representative.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex64, ComplexFloat};

use crate::{Error, Result};

/// Roots closer than this (relative to `max(1, |r|)`) count as the same root.
pub const MERGE_RADIUS: f64 = 1e-9;

/// Relative coefficient tolerance used by [`Polynomial::approx_eq`] callers.
pub const COEFF_REL_TOL: f64 = 1e-12;

/// Dense polynomial, coefficients in ascending degree order.
///
/// Trailing zero coefficients are trimmed on construction, so the last entry
/// is the leading coefficient. The zero polynomial is stored as `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The monic linear factor `z - r`.
    pub fn linear_factor(r: Complex64) -> Self {
        Self::new(vec![-r, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut slope = zero;
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    /// `sum |c_k| r^k`, the scale against which a residual `|p(z)|` at
    /// `|z| = r` is judged.
    pub fn magnitude_bound(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn power(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `p ∘ T`, expanded by Horner's scheme in polynomial arithmetic.
    pub fn compose_affine(&self, t: AffineMap) -> Self {
        let inner = Self::new(vec![t.b, t.a]);
        let mut acc = Self::constant(self.leading());
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * &inner) + &Self::constant(c);
        }
        acc
    }

    /// `λ (p ∘ T)`; the relaxed Newton map of the result is `T⁻¹ ∘ N ∘ T`.
    pub fn affine_conjugate(&self, t: AffineMap, lambda: Complex64) -> Self {
        self.compose_affine(t).scale(lambda)
    }

    /// Monic form with vanishing second-leading coefficient.
    ///
    /// Returns `(q, T)` with `q = (1/lead) (p ∘ T)` and `T(z) = z + s`,
    /// `s = -c_{n-1} / (n c_n)`.
    pub fn normalize(&self) -> Result<(Self, AffineMap)> {
        let n = self.degree();
        if n < 2 {
            return Err(Error::DegenerateInput("normalize needs degree >= 2"));
        }
        let lead = self.leading();
        let shift = -self.coeffs[n - 1] / (lead * n as f64);
        let t = AffineMap::translation(shift);
        let mut q = self.affine_conjugate(t, lead.inv());
        // Exact by construction; only rounding noise is discarded here.
        q.coeffs[n] = Complex64::new(1.0, 0.0);
        q.coeffs[n - 1] = Complex64::new(0.0, 0.0);
        Ok((q, t))
    }

    /// Moves a non-unicritical cubic onto `z^3 - 3z + a`.
    ///
    /// Returns `(a, T, λ)` such that `λ (p ∘ T) = z^3 - 3z + a`, with
    /// `T(z) = A z + ξ`, `ξ = -a1/3`, `A² = (a1² - 3a2)/9` (principal root).
    pub fn reduce_cubic(&self) -> Result<(Complex64, AffineMap, Complex64)> {
        if self.degree() != 3 {
            return Err(Error::InvalidParameter("reduce_cubic needs a cubic"));
        }
        let lead = self.leading();
        let a1 = self.coeffs[2] / lead;
        let a2 = self.coeffs[1] / lead;
        let disc = a1 * a1 - a2 * 3.0;
        let scale = 1.0f64.max(a1.norm_sqr()).max(a2.abs());
        if disc.abs() <= 1e-12 * scale {
            return Err(Error::UnicriticalInput);
        }
        let big_a = (disc / 9.0).sqrt();
        let xi = -a1 / 3.0;
        let t = AffineMap::new(big_a, xi)?;
        let lambda = (lead * big_a * big_a * big_a).inv();
        let a = self.eval(xi) * lambda;
        Ok((a, t, lambda))
    }

    /// Largest coefficient difference, padding the shorter operand with zeros.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).abs())
            .fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison relative to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let scale = self.max_coeff_norm().max(other.max_coeff_norm()).max(f64::MIN_POSITIVE);
        self.max_coeff_diff(other) <= rel_tol * scale
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

/// `z ↦ a z + b` with `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if a == Complex64::new(0.0, 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter("affine scale must be finite and nonzero"));
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity() -> Self {
        AffineMap {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn translation(b: Complex64) -> Self {
        AffineMap {
            a: Complex64::new(1.0, 0.0),
            b,
        }
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a * inner.a,
            b: self.a * inner.b + self.b,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let a = self.a.inv();
        AffineMap { a, b: -self.b * a }
    }
}

/// `leading · Π (z - r_i)^{m_i}` over pairwise distinct roots.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPolynomial {
    leading: Complex64,
    roots: Vec<(Complex64, u32)>,
}

impl FactoredPolynomial {
    pub fn new(leading: Complex64, roots: Vec<(Complex64, u32)>) -> Result<Self> {
        if leading == Complex64::new(0.0, 0.0) || !leading.is_finite() {
            return Err(Error::InvalidParameter("leading coefficient must be finite and nonzero"));
        }
        for (i, &(r, m)) in roots.iter().enumerate() {
            if m == 0 {
                return Err(Error::InvalidParameter("root multiplicity must be positive"));
            }
            if !r.is_finite() {
                return Err(Error::InvalidParameter("roots must be finite"));
            }
            for &(s, _) in &roots[..i] {
                if (r - s).abs() <= MERGE_RADIUS * 1.0f64.max(r.abs()) {
                    return Err(Error::InvalidParameter("roots must be pairwise distinct"));
                }
            }
        }
        Ok(FactoredPolynomial { leading, roots })
    }

    pub fn monic(roots: Vec<(Complex64, u32)>) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), roots)
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    pub fn roots(&self) -> &[(Complex64, u32)] {
        &self.roots
    }

    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    pub fn distinct_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn min_multiplicity(&self) -> u32 {
        self.roots.iter().map(|&(_, m)| m).min().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.roots
            .iter()
            .fold(self.leading, |acc, &(r, m)| acc * (z - r).powi(m as i32))
    }

    pub fn expand(&self) -> Polynomial {
        let mut acc = Polynomial::constant(self.leading);
        for &(r, m) in &self.roots {
            acc = &acc * &Polynomial::linear_factor(r).power(m);
        }
        acc
    }

    /// `leading · Π (z - r_i)`, one factor per distinct root.
    pub fn squarefree_part(&self) -> Polynomial {
        self.roots.iter().fold(Polynomial::constant(self.leading), |acc, &(r, _)| {
            &acc * &Polynomial::linear_factor(r)
        })
    }

    /// `p^n`: multiplicities scale by `n`, leading coefficient is raised to `n`.
    pub fn power(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("power must be positive"));
        }
        Ok(FactoredPolynomial {
            leading: self.leading.powi(n as i32),
            roots: self.roots.iter().map(|&(r, m)| (r, m * n)).collect(),
        })
    }

    /// `λ (p ∘ T)` in factored form: roots pull back through `T⁻¹`.
    pub fn affine_conjugate(&self, t: AffineMap, lambda: Complex64) -> Result<Self> {
        let inv = t.inverse();
        let leading = self
            .roots
            .iter()
            .fold(self.leading * lambda, |acc, &(_, m)| acc * t.a.powi(m as i32));
        Self::new(leading, self.roots.iter().map(|&(r, m)| (inv.apply(r), m)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn real(c: &[f64]) -> Polynomial {
        Polynomial::from_real(c)
    }

    #[test]
    fn horner_values() {
        assert_eq!(real(&[-1.0, 0.0, 1.0]).eval(c64(0.0, 0.0)), c64(-1.0, 0.0));
        let f = FactoredPolynomial::monic(vec![(c64(1.0, 0.0), 1), (c64(-1.0, 0.0), 2)]).unwrap();
        assert_eq!(f.expand().eval(c64(1.0, 0.0)), c64(0.0, 0.0));
        let (v, d) = real(&[1.0, -3.0, 0.0, 1.0]).eval_with_derivative(c64(2.0, 0.0));
        assert_eq!(v, c64(3.0, 0.0));
        assert_eq!(d, c64(9.0, 0.0));
    }

    #[test]
    fn derivative_cases() {
        assert_eq!(real(&[-1.0, 0.0, 1.0]).derivative(), real(&[0.0, 2.0]));
        assert!(real(&[5.0]).derivative().is_zero());
        // z^m (z^n - 1) -> z^{m-1} [(m+n) z^n - m]
        for (m, n) in [(1usize, 2usize), (2, 3), (3, 4)] {
            let mut p = vec![0.0; m + n + 1];
            p[m] = -1.0;
            p[m + n] = 1.0;
            let mut expected = vec![0.0; m + n];
            expected[m - 1] = -(m as f64);
            expected[m + n - 1] = (m + n) as f64;
            assert_eq!(real(&p).derivative(), real(&expected));
        }
    }

    #[test]
    fn expand_cases() {
        let one = c64(1.0, 0.0);
        let f = FactoredPolynomial::monic(vec![(one, 1), (-one, 1)]).unwrap();
        assert_eq!(f.expand(), real(&[-1.0, 0.0, 1.0]));
        let f = FactoredPolynomial::monic(vec![(one, 1), (-one, 2)]).unwrap();
        assert_eq!(f.expand(), real(&[-1.0, -1.0, 1.0, 1.0]));
        let w = c64(-0.5, 3f64.sqrt() / 2.0);
        let f = FactoredPolynomial::monic(vec![(c64(0.0, 0.0), 1), (one, 1), (w, 1), (w.conj(), 1)])
            .unwrap();
        assert!(f.expand().approx_eq(&real(&[0.0, -1.0, 0.0, 0.0, 1.0]), 1e-15));
    }

    #[test]
    fn power_cases() {
        let q = real(&[-1.0, 0.0, 1.0]);
        assert_eq!(q.power(1), q);
        assert_eq!(q.power(2), real(&[1.0, 0.0, -2.0, 0.0, 1.0]));
        assert_eq!(real(&[-1.0, 1.0]).power(3), real(&[-1.0, 3.0, -3.0, 1.0]));
    }

    #[test]
    fn affine_conjugate_identity_and_unicritical() {
        let p = real(&[2.0, -1.0, 0.5, 3.0]);
        assert_eq!(p.affine_conjugate(AffineMap::identity(), c64(1.0, 0.0)), p);

        // (z - α)^n + β with T(z) = A z + α, A^n = -β, λ = -1/β gives z^n - 1.
        let alpha = c64(0.3, -1.2);
        let beta = c64(2.0, 0.5);
        let n = 4u32;
        let p = &Polynomial::linear_factor(alpha).power(n) + &Polynomial::constant(beta);
        let big_a = (-beta).powf(1.0 / n as f64);
        let t = AffineMap::new(big_a, alpha).unwrap();
        let g = p.affine_conjugate(t, -beta.inv());
        assert!(g.approx_eq(&real(&[-1.0, 0.0, 0.0, 0.0, 1.0]), 1e-12));
    }

    #[test]
    fn reduce_cubic_cases() {
        // Already reduced.
        let (a, t, lambda) = real(&[5.0, -3.0, 0.0, 1.0]).reduce_cubic().unwrap();
        assert!((a - c64(5.0, 0.0)).abs() < 1e-14);
        assert_eq!(t, AffineMap::identity());
        assert_eq!(lambda, c64(1.0, 0.0));

        // q(z - 1) with q = z^3 - 3z + 5 is z^3 - 3z^2 + 7; the reduction
        // pulls it back with T(z) = z + 1.
        let q = real(&[5.0, -3.0, 0.0, 1.0]);
        let p = q.compose_affine(AffineMap::translation(c64(-1.0, 0.0)));
        assert_eq!(p, real(&[7.0, 0.0, -3.0, 1.0]));
        let (a, t, lambda) = p.reduce_cubic().unwrap();
        assert!((a - c64(5.0, 0.0)).abs() < 1e-13);
        assert!((t.b - c64(1.0, 0.0)).abs() < 1e-15);
        assert!(p.affine_conjugate(t, lambda).approx_eq(&q, 1e-12));

        // z^3 + 3z^2: ξ = -1, A = 1, p(-1) = 2.
        let (a, t, _) = real(&[0.0, 0.0, 3.0, 1.0]).reduce_cubic().unwrap();
        assert!((a - c64(2.0, 0.0)).abs() < 1e-14);
        assert_eq!(t.b, c64(-1.0, 0.0));

        // Non-monic, complex input still lands on the one-parameter family.
        let p = real(&[1.0, 2.0, -1.0, 0.0]).scale(c64(0.0, 0.0));
        assert!(p.reduce_cubic().is_err());
        let p = Polynomial::new(vec![c64(1.0, 2.0), c64(-0.5, 0.1), c64(3.0, -1.0), c64(2.0, 1.0)]);
        let (a, t, lambda) = p.reduce_cubic().unwrap();
        let target = Polynomial::new(vec![a, c64(-3.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(p.affine_conjugate(t, lambda).approx_eq(&target, 1e-12));
    }

    #[test]
    fn reduce_cubic_rejects_unicritical() {
        // (z - 2)^3 + 1 has a1^2 = 3 a2.
        let p = &Polynomial::linear_factor(c64(2.0, 0.0)).power(3) + &Polynomial::one();
        assert_eq!(p.reduce_cubic(), Err(Error::UnicriticalInput));
    }

    #[test]
    fn normalize_cases() {
        let (q, t) = real(&[-1.0, 0.0, 1.0]).normalize().unwrap();
        assert_eq!(q, real(&[-1.0, 0.0, 1.0]));
        assert_eq!(t, AffineMap::identity());

        let (q, t) = real(&[0.0, 4.0, 2.0]).normalize().unwrap();
        assert_eq!(q, real(&[-1.0, 0.0, 1.0]));
        assert_eq!(t.b, c64(-1.0, 0.0));

        let (q, t) = real(&[1.0, 0.0, 3.0, 1.0]).normalize().unwrap();
        assert_eq!(q, real(&[3.0, -3.0, 0.0, 1.0]));
        assert_eq!(t.b, c64(-1.0, 0.0));

        assert!(real(&[1.0, 1.0]).normalize().is_err());
    }

    #[test]
    fn affine_map_algebra() {
        let t = AffineMap::new(c64(2.0, 1.0), c64(-1.0, 3.0)).unwrap();
        let z = c64(0.7, -0.2);
        assert!((t.inverse().apply(t.apply(z)) - z).abs() < 1e-15);
        let s = AffineMap::new(c64(0.0, 1.0), c64(1.0, 0.0)).unwrap();
        assert!((s.compose(&t).apply(z) - s.apply(t.apply(z))).abs() < 1e-15);
        assert!(AffineMap::new(c64(0.0, 0.0), c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn factored_validation() {
        let one = c64(1.0, 0.0);
        assert!(FactoredPolynomial::monic(vec![(one, 1), (one, 2)]).is_err());
        assert!(FactoredPolynomial::monic(vec![(one, 0)]).is_err());
        assert!(FactoredPolynomial::new(c64(0.0, 0.0), vec![(one, 1)]).is_err());
        let f = FactoredPolynomial::new(c64(2.0, 0.0), vec![(one, 3), (-one, 1)]).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.min_multiplicity(), 1);
        let z = c64(0.3, 0.4);
        assert!((f.eval(z) - f.expand().eval(z)).abs() < 1e-14);
        assert_eq!(f.power(2).unwrap().roots()[0].1, 6);
    }
}
