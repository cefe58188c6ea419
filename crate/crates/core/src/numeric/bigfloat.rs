use std::cmp::Ordering;
use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

use super::{Coefficient, NumericDomain, DEFAULT_PRECISION_BITS};

type Inner = FBig<HalfEven, 2>;

/// Binary floating point number with a fixed working precision.
///
/// Arithmetic is correctly rounded (half to even) at the larger of the two
/// operand precisions.
#[derive(Clone, PartialEq)]
pub struct BigFloat {
    inner: Inner,
}

fn ibig_from_bigint(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl BigFloat {
    fn wrap(inner: Inner) -> Self {
        BigFloat { inner }
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self::wrap(Inner::ZERO.with_precision(precision_bits).value())
    }

    pub fn one(precision_bits: usize) -> Self {
        Self::wrap(Inner::ONE.with_precision(precision_bits).value())
    }

    pub fn from_f64(x: f64, precision_bits: usize) -> Self {
        let v = Inner::try_from(x).expect("finite f64");
        Self::wrap(v.with_precision(precision_bits).value())
    }

    pub fn from_i64(x: i64, precision_bits: usize) -> Self {
        Self::wrap(Inner::from(IBig::from(x)).with_precision(precision_bits).value())
    }

    pub fn from_bigint(x: &BigInt, precision_bits: usize) -> Self {
        Self::wrap(Inner::from(ibig_from_bigint(x)).with_precision(precision_bits).value())
    }

    pub fn from_rational(r: &BigRational, precision_bits: usize) -> Self {
        let num = Self::from_bigint(r.numer(), precision_bits);
        let den = Self::from_bigint(r.denom(), precision_bits);
        num.div(&den)
    }

    pub fn precision(&self) -> usize {
        self.inner.precision()
    }

    pub fn to_f64(&self) -> f64 {
        self.inner.to_f64().value()
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner / &rhs.inner)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.inner.exp())
    }

    /// Natural logarithm; panics on nonpositive input.
    pub fn ln(&self) -> Self {
        Self::wrap(self.inner.ln())
    }

    pub fn sqrt(&self) -> Self {
        use dashu_base::SquareRoot;
        Self::wrap(self.inner.sqrt())
    }

    pub fn powi(&self, e: i64) -> Self {
        Self::wrap(self.inner.powi(IBig::from(e)))
    }

    pub fn powf(&self, e: &Self) -> Self {
        Self::wrap(self.inner.powf(&e.inner))
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            Coefficient::neg(self)
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.inner < Inner::ZERO
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.inner.partial_cmp(&other.inner)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Roughly log10(2) decimal digits per bit, capped for readability.
        let digits = ((self.precision() as f64) * 0.30103).floor().clamp(1.0, 60.0) as usize;
        let dec = self.inner.to_decimal().value();
        let dec = dec.with_precision(digits).value();
        write!(f, "{dec}")
    }
}

impl Default for BigFloat {
    fn default() -> Self {
        BigFloat::zero(DEFAULT_PRECISION_BITS)
    }
}

fn precision_of(domain: NumericDomain) -> usize {
    match domain {
        NumericDomain::BigFloat { precision_bits } => precision_bits,
        _ => DEFAULT_PRECISION_BITS,
    }
}

impl Coefficient for BigFloat {
    fn accepts(domain: NumericDomain) -> bool {
        matches!(domain, NumericDomain::BigFloat { precision_bits } if precision_bits >= 53)
    }
    fn domain(&self) -> NumericDomain {
        NumericDomain::BigFloat { precision_bits: self.precision() }
    }
    fn zero_in(domain: NumericDomain) -> Self {
        BigFloat::zero(precision_of(domain))
    }
    fn one_in(domain: NumericDomain) -> Self {
        BigFloat::one(precision_of(domain))
    }
    fn from_rational_in(domain: NumericDomain, value: &BigRational) -> Self {
        BigFloat::from_rational(value, precision_of(domain))
    }
    fn add(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner + &rhs.inner)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner - &rhs.inner)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner * &rhs.inner)
    }
    fn neg(&self) -> Self {
        Self::wrap(-self.inner.clone())
    }
    fn mul_int(&self, k: i64) -> Self {
        Self::wrap(&self.inner * Inner::from(IBig::from(k)))
    }
    fn div_int(&self, k: i64) -> Self {
        let d = BigFloat::from_i64(k, self.precision());
        self.div(&d)
    }
    fn is_zero(&self) -> bool {
        self.inner.repr().is_zero()
    }
    fn inverse(&self) -> Option<Self> {
        (!Coefficient::is_zero(self)).then(|| BigFloat::one(self.precision()).div(self))
    }
    fn real_power_in(domain: NumericDomain, base: u64, exponent: f64) -> Option<Self> {
        let p = precision_of(domain);
        if base == 0 {
            return None;
        }
        let b = BigFloat::from_i64(base as i64, p);
        if exponent.fract() == 0.0 && exponent.abs() < 1e9 {
            return Some(b.powi(exponent as i64));
        }
        let e = BigFloat::from_f64(exponent, p);
        Some(e.mul(&b.ln()).exp())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(BigFloat::to_f64(self))
    }
    fn is_nonnegative(&self) -> Option<bool> {
        Some(!self.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_keeps_precision() {
        let p = 192;
        let third = BigFloat::one(p).div_int(3);
        assert_eq!(third.precision(), p);
        let back = third.mul_int(3);
        assert!((back.to_f64() - 1.0).abs() < 1e-50);
        let r = BigFloat::from_rational(&super::super::ratio(-7, 4), p);
        assert_eq!(r.to_f64(), -1.75);
    }

    #[test]
    fn real_power_matches_f64() {
        let d = NumericDomain::big_float(128);
        let v = BigFloat::real_power_in(d, 10, -2.5).unwrap();
        assert!((v.to_f64() - 10f64.powf(-2.5)).abs() < 1e-17);
        let w = BigFloat::real_power_in(d, 3, 4.0).unwrap();
        assert_eq!(w.to_f64(), 81.0);
    }

    #[test]
    fn display_is_decimal() {
        let x = BigFloat::from_f64(0.5, 64);
        assert!(x.to_string().starts_with("0.5") || x.to_string().starts_with("5"));
    }
}
