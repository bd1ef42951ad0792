//! Exact scalar types: arbitrary-precision rationals and rational complex
//! numbers. All combinatorial decisions in this crate run over `Rational`;
//! floating point only enters through quadrature and angle estimation.

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = BigRational;
pub type ExactComplex = Complex<BigRational>;
pub type C64 = num_complex::Complex64;

/// Shorthand for small rational constants.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses "p/q", "p", or a plain decimal such as "-1.25" (converted exactly).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if let Ok(q) = BigRational::from_str(s) {
        return Ok(q);
    }
    if let Some(dot) = s.find('.') {
        let (int_part, frac_part) = (&s[..dot], &s[dot + 1..]);
        if frac_part.chars().all(|c| c.is_ascii_digit()) && !frac_part.is_empty() {
            let digits = format!(
                "{}{}",
                if int_part.is_empty() || int_part == "-" || int_part == "+" {
                    format!("{int_part}0")
                } else {
                    int_part.to_string()
                },
                frac_part
            );
            if let Ok(num) = BigInt::from_str(&digits) {
                let den = BigInt::from(10u32).pow(frac_part.len() as u32);
                return Ok(Rational::new(num, den));
            }
        }
    }
    Err(ParseRationalError(s.to_string()))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Scalar field for measure values. Exact instantiation keeps additivity
/// identities literal equalities; the float instantiation is for generators
/// produced by quadrature.
pub trait MeasureScalar: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero_value() -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    /// Comparison with a tolerance; exact scalars ignore `tol`.
    fn close(&self, other: &Self, tol: f64) -> bool;
}

impl MeasureScalar for ExactComplex {
    fn zero_value() -> Self {
        Complex::new(Rational::zero(), Rational::zero())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn is_zero_value(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl MeasureScalar for C64 {
    fn zero_value() -> Self {
        C64::new(0.0, 0.0)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn close(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
}

impl MeasureScalar for Rational {
    fn zero_value() -> Self {
        Rational::zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

pub fn exact_complex(re: Rational, im: Rational) -> ExactComplex {
    Complex::new(re, im)
}

pub fn exact_one() -> ExactComplex {
    Complex::new(Rational::one(), Rational::zero())
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Canonical primitive integer form of a rational vector's entries:
/// clears denominators and divides by the gcd. Does not change sign.
pub fn primitive_integer_scale(coords: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    if coords.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for c in coords {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coords.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

pub fn bigint_sign(v: &BigInt) -> i32 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_scale_clears_denominators() {
        let v = vec![rat(1, 2), rat(-3, 4), rat_int(0)];
        let ints = primitive_integer_scale(&v);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
