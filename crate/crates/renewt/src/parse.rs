//! Text syntax for complex numbers and polynomials.
//!
//! ```text
//! complex   = real | imag | real sign uimag
//! imag      = [sign] [ureal] "i"
//! uimag     = [ureal] "i"
//! coeffs    = complex { "," complex }           (ascending degree)
//! factored  = "(" root { "," root } ")" [ ";" complex ]
//! root      = complex [ "^" multiplicity ]
//! class     = "two-root:" k "," m | "unicritical:" n | "composite:" m "," n
//!           | "cubic:" complex | "nonconvergent:" ("+" | "-")
//! ```
//!
//! No spaces are allowed inside a literal.

use renewt_core::constructions::{composite_rep, reduced_cubic, two_root_rep, unicritical_rep, Sign};
use renewt_core::{Complex64, FactoredPolynomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {what} from {input:?}: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

fn fail(what: &'static str, input: &str, reason: impl Into<String>) -> ParseError {
    ParseError { what, input: input.to_string(), reason: reason.into() }
}

fn real(s: &str, whole: &str) -> Result<f64, ParseError> {
    let x: f64 = s.parse().map_err(|_| fail("complex number", whole, format!("bad real part {s:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(fail("complex number", whole, "non-finite value"))
    }
}

fn imag_coefficient(s: &str, whole: &str) -> Result<f64, ParseError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s, whole),
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, ParseError> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(fail("complex number", s, "empty or contains spaces"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s, s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k], s)?, imag_coefficient(&body[k..], s)?)),
        None => Ok(Complex64::new(0.0, imag_coefficient(body, s)?)),
    }
}

/// Comma-separated coefficients, constant term first.
pub fn parse_coeffs(s: &str) -> Result<Polynomial, ParseError> {
    let coeffs = s.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    let p = Polynomial::new(coeffs);
    if p.is_zero() {
        return Err(fail("polynomial", s, "all coefficients are zero"));
    }
    Ok(p)
}

pub fn parse_factored(s: &str) -> Result<FactoredPolynomial, ParseError> {
    let (roots, lead) = match s.split_once(';') {
        Some((r, l)) => (r, parse_complex(l)?),
        None => (s, Complex64::new(1.0, 0.0)),
    };
    let inner = roots
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| fail("factored polynomial", s, "roots must be enclosed in parentheses"))?;
    let mut out = Vec::new();
    for entry in inner.split(',') {
        let (root, mult) = match entry.rsplit_once('^') {
            Some((r, m)) => {
                let m: u32 = m.parse().map_err(|_| fail("factored polynomial", s, format!("bad multiplicity {m:?}")))?;
                (parse_complex(r)?, m)
            }
            None => (parse_complex(entry)?, 1),
        };
        out.push((root, mult));
    }
    FactoredPolynomial::new(lead, out).map_err(|e| fail("factored polynomial", s, e.to_string()))
}

/// Where the polynomial of a run comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PolySource {
    Dense(Polynomial),
    Factored(FactoredPolynomial),
    /// The cubic with a superattracting 2-cycle, built from `h`.
    Nonconvergent(Sign),
}

pub fn parse_sign(s: &str) -> Result<Sign, ParseError> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(fail("sign", s, "expected + or -")),
    }
}

fn integers(what: &'static str, s: &str, n: usize) -> Result<Vec<u32>, ParseError> {
    let v = s
        .split(',')
        .map(|t| t.parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| fail(what, s, "expected positive integers"))?;
    if v.len() != n {
        return Err(fail(what, s, format!("expected {n} integer(s)")));
    }
    Ok(v)
}

pub fn parse_class(s: &str) -> Result<PolySource, ParseError> {
    let (name, args) = s.split_once(':').ok_or_else(|| fail("polynomial class", s, "expected name:params"))?;
    let wrap = |r: renewt_core::Result<FactoredPolynomial>| {
        r.map(PolySource::Factored).map_err(|e| fail("polynomial class", s, e.to_string()))
    };
    match name {
        "two-root" => {
            let v = integers("polynomial class", args, 2)?;
            wrap(two_root_rep(v[0], v[1]))
        }
        "unicritical" => {
            let v = integers("polynomial class", args, 1)?;
            wrap(unicritical_rep(v[0]))
        }
        "composite" => {
            let v = integers("polynomial class", args, 2)?;
            wrap(composite_rep(v[0], v[1]))
        }
        "cubic" => Ok(PolySource::Dense(reduced_cubic(parse_complex(args)?))),
        "nonconvergent" => Ok(PolySource::Nonconvergent(parse_sign(args)?)),
        _ => Err(fail("polynomial class", s, "unknown class")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use renewt_core::c64;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), c64(1.5, 0.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), c64(0.5, 0.25));
        assert_eq!(parse_complex("2-3i").unwrap(), c64(2.0, -3.0));
        assert_eq!(parse_complex("-i").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c64(0.0, 1.0));
        assert_eq!(parse_complex("4i").unwrap(), c64(0.0, 4.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c64(1e-3, 20.0));
        assert_eq!(parse_complex("-1e-3-i").unwrap(), c64(-1e-3, -1.0));
        assert_eq!(parse_complex("0.5+0i").unwrap(), c64(0.5, 0.0));
        for bad in ["", "1 +2i", "abc", "1+2j", "inf", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_coeffs("-1,0,1").unwrap(), Polynomial::from_real(&[-1.0, 0.0, 1.0]));
        let f = parse_factored("(1^1,-1^2);1").unwrap();
        assert_eq!(f.roots(), &[(c64(1.0, 0.0), 1), (c64(-1.0, 0.0), 2)]);
        let f = parse_factored("(i,-i^3);2").unwrap();
        assert_eq!(f.leading(), c64(2.0, 0.0));
        assert_eq!(f.roots()[1], (c64(0.0, -1.0), 3));
        assert!(parse_factored("1^1,-1^2").is_err());
        assert!(parse_factored("(1^0)").is_err());
    }

    #[test]
    fn classes() {
        assert!(matches!(parse_class("unicritical:3").unwrap(), PolySource::Factored(p) if p.degree() == 3));
        assert!(matches!(parse_class("composite:1,3").unwrap(), PolySource::Factored(p) if p.degree() == 4));
        assert_eq!(parse_class("nonconvergent:-").unwrap(), PolySource::Nonconvergent(Sign::Minus));
        assert!(parse_class("two-root:1").is_err());
        assert!(parse_class("bogus:1").is_err());
    }
}
