//! Recognising relaxed Newton maps from fixed-point data.

use alloc::vec::Vec;

use num_complex::{Complex64, ComplexFloat};

use crate::map::{Point, RelaxedNewtonMap};
use crate::mobius::MobiusMap;
use crate::poly::FactoredPolynomial;
use crate::{Error, Result};

/// Integer detection tolerance for `m_i = h / (1 - μ_i)`.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

const RATIONAL_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: u64 = 10_000;

/// Fixed-point data of a quadratic map with two attracting fixed points
/// and one repelling fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadraticData {
    /// Both attracting fixed points share the multiplier λ.
    EqualMultipliers(Complex64),
    /// One attracting point is superattracting; the other has this
    /// multiplier, which must be a rational `n/m` in `(0, 1)`.
    SuperattractingAndRational(Complex64),
    /// Ratio `ι(1)/ι(-1)` of the residue indices at the attracting points.
    IndexRatio(Complex64),
}

/// `R` is conjugate to `N_{h,p}` with `p = (z-1)^k (z+1)^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCharacterization {
    pub h: Complex64,
    pub k: u32,
    pub m: u32,
    /// Set when `h` is only determined up to a free nonzero scale `c`
    /// (`h = 1/c`); the reported `h` is the `c = 1` representative.
    pub free_scale: bool,
}

/// Best rational approximation `num/den` of `x` with `den <= max_den`,
/// accepted only if it is within `tol` of `x`.
fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut rest = x;
    for _ in 0..64 {
        let a = libm_floor(rest);
        let a_int = a as u64;
        let h2 = a_int.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a_int.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol * x.max(1.0) {
            return Some((h1, k1));
        }
        let frac = rest - a;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    (k1 != 0 && (h1 as f64 / k1 as f64 - x).abs() <= tol * x.max(1.0)).then_some((h1, k1))
}

fn libm_floor(x: f64) -> f64 {
    num_traits::float::Float::floor(x)
}

fn positive_real(z: Complex64) -> Option<f64> {
    (z.im.abs() <= RATIONAL_TOL * z.abs().max(1.0) && z.re > 0.0).then_some(z.re)
}

pub fn characterize_quadratic(data: QuadraticData) -> Result<QuadraticCharacterization> {
    let one = Complex64::new(1.0, 0.0);
    match data {
        QuadraticData::EqualMultipliers(lambda) => {
            if !(lambda.abs() < 1.0) {
                return Err(Error::NotRealizable("multiplier is not attracting"));
            }
            Ok(QuadraticCharacterization {
                h: one - lambda,
                k: 1,
                m: 1,
                free_scale: false,
            })
        }
        QuadraticData::SuperattractingAndRational(mu) => {
            let x = positive_real(mu).ok_or(Error::NotRealizable("multiplier is not a positive real"))?;
            let (n, m) = rationalize(x, MAX_DENOMINATOR, RATIONAL_TOL)
                .ok_or(Error::NotRealizable("multiplier is not rational"))?;
            if n >= m {
                return Err(Error::NotRealizable("multiplier n/m must be below 1"));
            }
            let k = (m - n) as u32;
            Ok(QuadraticCharacterization {
                h: Complex64::new(k as f64, 0.0),
                k,
                m: m as u32,
                free_scale: false,
            })
        }
        QuadraticData::IndexRatio(ratio) => {
            let x = positive_real(ratio).ok_or(Error::NotRealizable("index ratio is not a positive real"))?;
            let (k, m) = rationalize(x, MAX_DENOMINATOR, RATIONAL_TOL)
                .ok_or(Error::NotRealizable("index ratio is not rational"))?;
            Ok(QuadraticCharacterization {
                h: one,
                k: k as u32,
                m: m as u32,
                free_scale: true,
            })
        }
    }
}

/// Rebuilds `(φ, p)` such that `R = φ⁻¹ ∘ N_{h,p} ∘ φ` from the locations
/// and multipliers of the attracting fixed points and the location of the
/// repelling one.
pub fn reconstruct_general(
    fixed_points: &[(Point, Complex64)],
    repelling: Point,
    h: Complex64,
) -> Result<(MobiusMap, FactoredPolynomial)> {
    if h == Complex64::new(0.0, 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter("relaxation parameter must be finite and nonzero"));
    }
    let phi = match repelling {
        Point::Infinity => MobiusMap::identity(),
        Point::Finite(beta) => MobiusMap::sending_to_infinity(beta),
    };
    let mut roots = Vec::with_capacity(fixed_points.len());
    for (index, &(loc, mu)) in fixed_points.iter().enumerate() {
        let m = h / (Complex64::new(1.0, 0.0) - mu);
        let rounded = num_traits::float::Float::round(m.re);
        if !m.is_finite() || (m - rounded).abs() > MULTIPLICITY_TOL || rounded < 1.0 {
            return Err(Error::NonIntegerMultiplicity { index, value: m.re });
        }
        let root = phi
            .apply(loc)
            .finite()
            .ok_or(Error::NotRealizable("an attracting point coincides with the repelling point"))?;
        roots.push((root, rounded as u32));
    }
    let p = FactoredPolynomial::monic(roots)?;
    Ok((phi, p))
}

/// Largest difference between the given multipliers and those of
/// `N_{h,p}` at the images `φ(α_i)`.
pub fn reconstruction_error(
    fixed_points: &[(Point, Complex64)],
    phi: &MobiusMap,
    p: &FactoredPolynomial,
    h: Complex64,
) -> Result<f64> {
    let map = RelaxedNewtonMap::new(p.clone(), h)?;
    let records = map.fixed_points();
    let mut worst: f64 = 0.0;
    for &(loc, mu) in fixed_points {
        let target = phi.apply(loc).finite().ok_or(Error::NotRealizable("fixed point maps to infinity"))?;
        let rec = records
            .iter()
            .filter_map(|r| r.location.finite().map(|z| (z, r.multiplier)))
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .ok_or(Error::NotRealizable("no finite fixed point"))?;
        worst = worst.max((rec.1 - mu).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec;

    #[test]
    fn quadratic_cases() {
        let q = characterize_quadratic(QuadraticData::EqualMultipliers(c64(0.0, 0.0))).unwrap();
        assert_eq!((q.h, q.k, q.m, q.free_scale), (c64(1.0, 0.0), 1, 1, false));

        let q = characterize_quadratic(QuadraticData::SuperattractingAndRational(c64(0.5, 0.0))).unwrap();
        assert_eq!((q.h, q.k, q.m), (c64(1.0, 0.0), 1, 2));
        // Check against the map: multipliers 0 at 1 and 1/2 at -1.
        let p = FactoredPolynomial::monic(vec![(c64(1.0, 0.0), q.k), (c64(-1.0, 0.0), q.m)]).unwrap();
        let fps = RelaxedNewtonMap::new(p, q.h).unwrap().fixed_points();
        assert_eq!(fps[0].multiplier, c64(0.0, 0.0));
        assert_eq!(fps[1].multiplier, c64(0.5, 0.0));

        let q = characterize_quadratic(QuadraticData::SuperattractingAndRational(c64(2.0 / 7.0, 0.0))).unwrap();
        assert_eq!((q.k, q.m), (5, 7));

        let q = characterize_quadratic(QuadraticData::IndexRatio(c64(0.5, 0.0))).unwrap();
        assert_eq!((q.h, q.k, q.m, q.free_scale), (c64(1.0, 0.0), 1, 2, true));
    }

    #[test]
    fn quadratic_rejections() {
        let irrational = QuadraticData::SuperattractingAndRational(c64(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert!(matches!(characterize_quadratic(irrational), Err(Error::NotRealizable(_))));
        let complex = QuadraticData::IndexRatio(c64(0.5, 0.2));
        assert!(characterize_quadratic(complex).is_err());
        assert!(characterize_quadratic(QuadraticData::EqualMultipliers(c64(1.5, 0.0))).is_err());
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.5, 100, 1e-12), Some((1, 2)));
        assert_eq!(rationalize(3.0 / 7.0, 100, 1e-12), Some((3, 7)));
        assert_eq!(rationalize(core::f64::consts::PI, 100, 1e-12), None);
    }

    #[test]
    fn reconstruct_with_repelling_infinity() {
        let h = c64(0.7, 0.0);
        let lam = c64(1.0, 0.0) - h;
        let fps = [(Point::Finite(c64(1.0, 0.0)), lam), (Point::Finite(c64(-1.0, 0.0)), lam)];
        let (phi, p) = reconstruct_general(&fps, Point::Infinity, h).unwrap();
        assert_eq!(phi, MobiusMap::identity());
        assert_eq!(p.roots(), &[(c64(1.0, 0.0), 1), (c64(-1.0, 0.0), 1)]);
        assert!(reconstruction_error(&fps, &phi, &p, h).unwrap() < 1e-8);
    }

    #[test]
    fn reconstruct_with_finite_repelling_point() {
        let h = c64(0.6, 0.3);
        let lam = c64(1.0, 0.0) - h;
        let fps = [(Point::Finite(c64(1.0, 0.0)), lam), (Point::Finite(c64(-1.0, 0.0)), lam)];
        let (phi, p) = reconstruct_general(&fps, Point::Finite(c64(0.0, 0.0)), h).unwrap();
        assert_eq!(phi.apply(Point::Finite(c64(0.0, 0.0))), Point::Infinity);
        let mut roots: Vec<_> = p.roots().iter().map(|&(r, _)| r.re).collect();
        roots.sort_by(f64::total_cmp);
        assert_eq!(roots, vec![-1.0, 1.0]);
        assert!(reconstruction_error(&fps, &phi, &p, h).unwrap() < 1e-8);
    }

    #[test]
    fn reconstruct_multiplicities() {
        let h = c64(0.9, -0.2);
        let one = c64(1.0, 0.0);
        let fps = [
            (Point::Finite(c64(0.0, 1.0)), one - h / 2.0),
            (Point::Finite(c64(2.0, 0.0)), one - h),
            (Point::Finite(c64(-1.0, -1.0)), one - h / 3.0),
        ];
        let (_, p) = reconstruct_general(&fps, Point::Infinity, h).unwrap();
        let mults: Vec<_> = p.roots().iter().map(|&(_, m)| m).collect();
        assert_eq!(mults, vec![2, 1, 3]);

        let bad = [(Point::Finite(c64(0.0, 0.0)), one - h / 2.5), (Point::Finite(one), one - h)];
        assert!(matches!(
            reconstruct_general(&bad, Point::Infinity, h),
            Err(Error::NonIntegerMultiplicity { index: 0, .. })
        ));
    }
}
