use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Coefficient, NumericDomain};

/// Polynomial in the formal block weight `u` with exact rational coefficients.
///
/// Entry `k` of the coefficient vector is the coefficient of `u^k`; trailing
/// zeros are never stored, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyU {
    coeffs: Vec<BigRational>,
}

impl PolyU {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyU { coeffs }
    }

    pub fn zero() -> Self {
        PolyU { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        PolyU::new(vec![c])
    }

    /// The formal weight `u` itself.
    pub fn variable() -> Self {
        PolyU::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c * u^k` with an integer coefficient.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::from_integer(BigInt::from(c));
        PolyU::new(coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        PolyU::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `u^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, u: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * u + c)
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN))
    }

    fn scale(&self, k: &BigRational) -> Self {
        PolyU::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for PolyU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}u", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}u^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Coefficient for PolyU {
    fn accepts(domain: NumericDomain) -> bool {
        domain == NumericDomain::ExactRationalPolyU
    }
    fn domain(&self) -> NumericDomain {
        NumericDomain::ExactRationalPolyU
    }
    fn zero_in(_: NumericDomain) -> Self {
        PolyU::zero()
    }
    fn from_rational_in(_: NumericDomain, value: &BigRational) -> Self {
        PolyU::constant(value.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PolyU::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
    fn sub(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PolyU::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return PolyU::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyU::new(out)
    }
    fn neg(&self) -> Self {
        PolyU::new(self.coeffs.iter().map(|c| -c).collect())
    }
    fn mul_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }
    fn div_int(&self, k: i64) -> Self {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(k)))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn inverse(&self) -> Option<Self> {
        match self.coeffs.as_slice() {
            [c] => Some(PolyU::constant(c.recip())),
            _ => None,
        }
    }
    fn real_power_in(domain: NumericDomain, base: u64, exponent: f64) -> Option<Self> {
        BigRational::real_power_in(domain, base, exponent).map(PolyU::constant)
    }
    fn to_f64(&self) -> Option<f64> {
        match self.coeffs.as_slice() {
            [] => Some(0.0),
            [c] => num_traits::ToPrimitive::to_f64(c),
            _ => None,
        }
    }
    fn is_nonnegative(&self) -> Option<bool> {
        None
    }
}
