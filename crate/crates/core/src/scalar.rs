//! Scalar fields for operator coefficients.
//!
//! Operators and group elements are generic over [`Scalar`]. Two concrete
//! fields back the public API: [`Complex64`] for floating-point work and
//! [`ExactScalar`] (Gaussian rationals) for identities that must hold with
//! zero tolerance. [`ModeScalar`] adds what is needed to put a field on disk
//! and to carry group elements.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Mode, Result};
use crate::group::GroupElement;
use crate::operators::BandedOperator;
use crate::rep::RepParameter;

/// Gaussian rational: a complex number with arbitrary-precision rational parts.
pub type ExactScalar = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Real subfield used for the representation parameter.
    type Real: Num + Clone + Debug + Send + Sync + 'static;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(r: &Self::Real) -> Self;
    fn from_gaussian(re: i64, im: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Modulus, evaluated in floating point.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    fn imag_unit() -> Self {
        Self::from_gaussian(0, 1)
    }

    fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Integer power of a unit-modulus value; negative powers use the conjugate.
    fn unit_pow(&self, n: i64) -> Self {
        if n >= 0 {
            self.pow_u(n as u64)
        } else {
            self.conj().pow_u(n.unsigned_abs())
        }
    }
}

/// Scalar fields that can be serialized, parsed from flags, and used for group elements.
pub trait ModeScalar: Scalar {
    const MODE: Mode;

    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self>;
    /// Parses `"re+imi"` flag syntax.
    fn parse_flag(s: &str) -> Result<Self>;
    fn real_from_str(s: &str) -> Result<Self::Real>;
    fn real_is_zero(r: &Self::Real) -> bool;
    fn real_to_f64(r: &Self::Real) -> f64;

    /// Admissible rotation part of a group element.
    fn is_admissible_rotation(&self, tol: f64) -> bool;
    fn renormalize_unit(&self) -> Self {
        self.clone()
    }

    /// Conjugation by a group element with nonzero translation part.
    fn conjugate_translation(
        _xi: &RepParameter<Self::Real>,
        _g: &GroupElement<Self>,
        _t: &BandedOperator<Self>,
        _tol: f64,
    ) -> Result<BandedOperator<Self>> {
        Err(Error::UnsupportedMode {
            mode: Self::MODE,
            reason: "conjugation by a translation needs Bessel matrix coefficients".into(),
        })
    }
}

impl Scalar for Complex64 {
    type Real = f64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(r: &f64) -> Self {
        Complex64::new(*r, 0.0)
    }
    fn from_gaussian(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl ModeScalar for Complex64 {
    const MODE: Mode = Mode::Numeric;

    fn encode(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn decode(v: &Value) -> Result<Self> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse(format!("expected [re, im], got {v}")))?;
        let part = |x: &Value| {
            x.as_f64()
                .filter(|f| f.is_finite())
                .ok_or_else(|| Error::Parse(format!("expected a finite number, got {x}")))
        };
        Ok(Complex64::new(part(&pair[0])?, part(&pair[1])?))
    }

    fn parse_flag(s: &str) -> Result<Self> {
        let (re, im) = split_complex(s)?;
        let parse = |p: &str| {
            if p.contains('/') {
                parse_rational(p).and_then(|r| {
                    r.to_f64()
                        .ok_or_else(|| Error::Parse(format!("cannot represent {p}")))
                })
            } else {
                p.parse::<f64>()
                    .ok()
                    .filter(|f| f.is_finite())
                    .ok_or_else(|| Error::Parse(format!("bad number {p:?} in {s:?}")))
            }
        };
        Ok(Complex64::new(parse(re)?, parse(im)?))
    }

    fn real_from_str(s: &str) -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|f| f.is_finite())
            .ok_or_else(|| Error::Parse(format!("bad real number {s:?}")))
    }

    fn real_is_zero(r: &f64) -> bool {
        *r == 0.0
    }

    fn real_to_f64(r: &f64) -> f64 {
        *r
    }

    fn is_admissible_rotation(&self, tol: f64) -> bool {
        self.re.is_finite() && self.im.is_finite() && (self.norm() - 1.0).abs() <= tol
    }

    fn renormalize_unit(&self) -> Self {
        self / self.norm()
    }

    fn conjugate_translation(
        xi: &RepParameter<f64>,
        g: &GroupElement<Self>,
        t: &BandedOperator<Self>,
        tol: f64,
    ) -> Result<BandedOperator<Self>> {
        crate::operators::conjugate_numeric(xi, g, t, tol)
    }
}

impl Scalar for ExactScalar {
    type Real = BigRational;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_real(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }
    fn from_gaussian(re: i64, im: i64) -> Self {
        Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl ModeScalar for ExactScalar {
    const MODE: Mode = Mode::Exact;

    fn encode(&self) -> Value {
        serde_json::json!([format_rational(&self.re), format_rational(&self.im)])
    }

    fn decode(v: &Value) -> Result<Self> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse(format!("expected [\"p/q\", \"p/q\"], got {v}")))?;
        let part = |x: &Value| match x {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
            other => Err(Error::Parse(format!("expected a rational string, got {other}"))),
        };
        Ok(Complex::new(part(&pair[0])?, part(&pair[1])?))
    }

    fn parse_flag(s: &str) -> Result<Self> {
        let (re, im) = split_complex(s)?;
        Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }

    fn real_from_str(s: &str) -> Result<BigRational> {
        parse_rational(s)
    }

    fn real_is_zero(r: &BigRational) -> bool {
        r.is_zero()
    }

    fn real_to_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact rotations are the fourth roots of unity, the only roots of unity
    /// among the Gaussian rationals.
    fn is_admissible_rotation(&self, _tol: f64) -> bool {
        self.pow_u(4) == <Self as Scalar>::one()
    }
}

/// `p/q` with an explicit denominator, e.g. `"-3/2"`, `"0/1"`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a finite decimal (`-0.125`, `1e-3`) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

/// Splits `"re+imi"` into its real and imaginary substrings. Plain reals and
/// pure imaginaries (`"2i"`, `"-i"`) are accepted.
pub fn split_complex(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok((s, "0"));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other.strip_prefix('+').unwrap_or(other),
    };
    Ok((re, im))
}

/// Largest of `|re|`, `|im|` over an exact value, kept exact.
pub fn exact_sup_norm(z: &ExactScalar) -> BigRational {
    let (r, i) = (z.re.abs(), z.im.abs());
    if r >= i {
        r
    } else {
        i
    }
}
