//! Coefficient domains for truncated power series.
//!
//! Every series in the crate is generic over a [`Coefficient`] type. Four
//! domains are provided:
//!
//! * [`BigRational`] for exact univariate enumeration,
//! * [`PolyU`] for exact polynomials in the block weight `u`,
//! * [`BigFloat`] for high-precision numerics near the singularity,
//! * `f64` for the sampler tables, where speed matters more than digits.

mod bigfloat;
mod polyu;
pub mod special;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use bigfloat::BigFloat;
pub use polyu::PolyU;

/// Working precision used when a caller does not ask for one.
pub const DEFAULT_PRECISION_BITS: usize = 192;

/// Runtime tag describing which ring a series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumericDomain {
    ExactRational,
    ExactRationalPolyU,
    BigFloat { precision_bits: usize },
    Float64,
}

impl NumericDomain {
    pub fn big_float(precision_bits: usize) -> Self {
        NumericDomain::BigFloat { precision_bits: precision_bits.max(53) }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericDomain::ExactRational | NumericDomain::ExactRationalPolyU)
    }
}

impl fmt::Display for NumericDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericDomain::ExactRational => write!(f, "exact-rational"),
            NumericDomain::ExactRationalPolyU => write!(f, "exact-rational[u]"),
            NumericDomain::BigFloat { precision_bits } => write!(f, "bigfloat({precision_bits})"),
            NumericDomain::Float64 => write!(f, "f64"),
        }
    }
}

/// Ring operations needed by the series engine.
///
/// Values always know their own domain; constructors take the domain so that
/// big floats can be created at the right precision.
pub trait Coefficient: Clone + fmt::Debug + Send + Sync + 'static {
    /// Whether values of this type can live in `domain`.
    fn accepts(domain: NumericDomain) -> bool;
    fn domain(&self) -> NumericDomain;
    fn zero_in(domain: NumericDomain) -> Self;
    fn one_in(domain: NumericDomain) -> Self {
        Self::from_rational_in(domain, &BigRational::one())
    }
    fn from_rational_in(domain: NumericDomain, value: &BigRational) -> Self;
    fn from_integer_in(domain: NumericDomain, value: &BigInt) -> Self {
        Self::from_rational_in(domain, &BigRational::from_integer(value.clone()))
    }
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn div_int(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, when it exists in the domain.
    fn inverse(&self) -> Option<Self>;
    /// `base^exponent` for a real exponent; `None` when the result does not
    /// belong to the domain (exact domains).
    fn real_power_in(domain: NumericDomain, base: u64, exponent: f64) -> Option<Self>;
    /// Numeric value, when the element is a number.
    fn to_f64(&self) -> Option<f64>;
    /// `Some(sign)` for numeric domains, `None` for polynomials.
    fn is_nonnegative(&self) -> Option<bool>;
}

impl Coefficient for BigRational {
    fn accepts(domain: NumericDomain) -> bool {
        domain == NumericDomain::ExactRational
    }
    fn domain(&self) -> NumericDomain {
        NumericDomain::ExactRational
    }
    fn zero_in(_: NumericDomain) -> Self {
        BigRational::zero()
    }
    fn from_rational_in(_: NumericDomain, value: &BigRational) -> Self {
        value.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
    fn div_int(&self, k: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(k))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn real_power_in(_: NumericDomain, base: u64, exponent: f64) -> Option<Self> {
        if exponent.fract() != 0.0 || base == 0 {
            return None;
        }
        let b = BigRational::from_integer(BigInt::from(base));
        let e = exponent as i32;
        Some(num_traits::pow::Pow::pow(&b, e))
    }
    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
    fn is_nonnegative(&self) -> Option<bool> {
        Some(!self.is_negative())
    }
}

impl Coefficient for f64 {
    fn accepts(domain: NumericDomain) -> bool {
        domain == NumericDomain::Float64
    }
    fn domain(&self) -> NumericDomain {
        NumericDomain::Float64
    }
    fn zero_in(_: NumericDomain) -> Self {
        0.0
    }
    fn from_rational_in(_: NumericDomain, value: &BigRational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }
    fn div_int(&self, k: i64) -> Self {
        self / k as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn inverse(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn real_power_in(_: NumericDomain, base: u64, exponent: f64) -> Option<Self> {
        Some((base as f64).powf(exponent))
    }
    fn to_f64(&self) -> Option<f64> {
        Some(*self)
    }
    fn is_nonnegative(&self) -> Option<bool> {
        Some(*self >= 0.0)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rational number `num/den` in a single call.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
