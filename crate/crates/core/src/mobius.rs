use num_complex::Complex64;

use crate::map::Point;
use crate::{Error, Result};

/// `z ↦ (a z + b) / (c z + d)` on the Riemann sphere, `ad - bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det == Complex64::new(0.0, 0.0) || !det.is_finite() {
            return Err(Error::InvalidParameter("Mobius determinant must be nonzero"));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusMap { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ 1 / (z - β)`, which sends `β` to `∞` and `∞` to `0`.
    pub fn sending_to_infinity(beta: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        MobiusMap {
            a: Complex64::new(0.0, 0.0),
            b: one,
            c: one,
            d: -beta,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Point) -> Point {
        let zero = Complex64::new(0.0, 0.0);
        match z {
            Point::Infinity => {
                if self.c == zero {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                if den == zero {
                    Point::Infinity
                } else {
                    Point::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}
