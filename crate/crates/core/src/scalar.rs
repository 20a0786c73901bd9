//! Exact rational and Gaussian-rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator; `GaussRational` is `re + i·im` with rational parts.
//! Nothing in this module ever rounds.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;
pub type GaussRational = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact rational")]
pub struct ParseRationalError {
    pub input: String,
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

pub fn real(re: Rational) -> GaussRational {
    Complex::new(re, Rational::zero())
}

pub fn imag_unit() -> GaussRational {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn gzero() -> GaussRational {
    Complex::new(Rational::zero(), Rational::zero())
}

pub fn gone() -> GaussRational {
    Complex::new(Rational::one(), Rational::zero())
}

pub fn is_gzero(z: &GaussRational) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

pub fn is_real(z: &GaussRational) -> bool {
    z.im.is_zero()
}

pub fn conj(z: &GaussRational) -> GaussRational {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// |z|² as an exact rational.
pub fn norm_sqr(z: &GaussRational) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_c64(z: &GaussRational) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

/// Nearest rational with denominator `2^bits`.
pub fn dyadic(x: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round() as i64;
    Rational::new(BigInt::from(n), BigInt::from(1u64 << bits))
}

/// Canonical `p/q` (or `p` when the denominator is 1).
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text of a Gaussian rational: `p/q`, `p/q*i`, or `(a+b*i)`.
pub fn fmt_gauss(z: &GaussRational) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_rational(&z.re),
        (true, false) => format!("{}*i", fmt_rational(&z.im)),
        (false, false) => {
            let mut s = String::from("(");
            s.push_str(&fmt_rational(&z.re));
            if z.im.is_negative() {
                let _ = write!(s, "-{}*i)", fmt_rational(&-z.im.clone()));
            } else {
                let _ = write!(s, "+{}*i)", fmt_rational(&z.im));
            }
            s
        }
    }
}

/// Parses `p`, `p/q`, `-p/q` or a finite decimal such as `0.46`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let ip_val = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(ip_digits).map_err(|_| err())?
        };
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let num = ip_val * &den + BigInt::from_str(fp).map_err(|_| err())?;
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err())
}

/// Parses the output of [`fmt_gauss`].
pub fn parse_gauss(s: &str) -> Result<GaussRational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let body = inner.strip_suffix("*i").ok_or_else(err)?;
        // split at the sign that separates the real and imaginary parts
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| bytes[i] == b'+' || bytes[i] == b'-')
            .ok_or_else(err)?;
        let re = parse_rational(&body[..split])?;
        let im_txt = &body[split..];
        let im = parse_rational(im_txt.trim_start_matches('+'))?;
        return Ok(gauss(re, im));
    }
    if let Some(im) = t.strip_suffix("*i") {
        return Ok(gauss(Rational::zero(), parse_rational(im)?));
    }
    Ok(real(parse_rational(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(fmt_rational(&r), "-3/4");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("9/32").unwrap(), rat(9, 32));
        assert_eq!(parse_rational("0.46").unwrap(), rat(46, 100));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn gauss_text_round_trip() {
        for z in [
            gauss(rat(1, 2), rat(-3, 4)),
            gauss(rat(-1, 2), rat(3, 4)),
            gauss(Rational::zero(), rat(5, 7)),
            real(rat(-2, 9)),
        ] {
            assert_eq!(parse_gauss(&fmt_gauss(&z)).unwrap(), z);
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        let z = gauss(rat(3, 5), rat(-2, 7));
        assert_eq!(conj(&conj(&z)), z);
        assert_eq!(&z * &conj(&z), real(norm_sqr(&z)));
    }
}
