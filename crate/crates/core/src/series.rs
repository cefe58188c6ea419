//! Truncated power series over a pluggable coefficient domain.
//!
//! Series store ordinary coefficients `[y^n]F`; EGF counts (`n! [y^n]F`) are
//! produced only on request.

use rayon::prelude::*;
use thiserror::Error;

use crate::numeric::{factorial, BigFloat, Coefficient, NumericDomain};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(NumericDomain, NumericDomain),
    #[error("coefficient type cannot live in domain {0}")]
    UnsupportedDomain(NumericDomain),
    #[error("series needs at least one coefficient")]
    Empty,
    #[error("cannot differentiate a series of order 0")]
    OrderZero,
    #[error("constant term must vanish")]
    NonzeroConstant,
    #[error("constant term must be nonzero")]
    ZeroConstant,
    #[error("constant term must be one")]
    ConstantNotOne,
    #[error("constant term is not invertible in the domain")]
    NotInvertible,
    #[error("evaluation point {y0} lies beyond the radius {rho}")]
    Divergent { y0: f64, rho: f64 },
    #[error("negative evaluation point {0}")]
    NegativeArgument(f64),
    #[error("tail model does not converge (exponent {0})")]
    TailDiverges(f64),
}

/// Truncated series `sum_{n <= N} c_n y^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EgfSeries<T> {
    domain: NumericDomain,
    coeffs: Vec<T>,
}

impl<T: Coefficient> EgfSeries<T> {
    pub fn new(domain: NumericDomain, coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if !T::accepts(domain) {
            return Err(SeriesError::UnsupportedDomain(domain));
        }
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(EgfSeries { domain, coeffs })
    }

    pub fn zero(domain: NumericDomain, order: usize) -> Self {
        EgfSeries { domain, coeffs: vec![T::zero_in(domain); order + 1] }
    }

    pub fn one(domain: NumericDomain, order: usize) -> Self {
        let mut s = Self::zero(domain, order);
        s.coeffs[0] = T::one_in(domain);
        s
    }

    /// `c * y^k` truncated at `order`.
    pub fn monomial(domain: NumericDomain, order: usize, k: usize, c: T) -> Self {
        let mut s = Self::zero(domain, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Build from EGF counts `a_n`, storing `a_n / n!`.
    pub fn from_egf_counts(domain: NumericDomain, counts: Vec<T>) -> Result<Self, SeriesError> {
        let mut coeffs = counts;
        let mut fact = T::one_in(domain);
        for (n, c) in coeffs.iter_mut().enumerate() {
            if n > 0 {
                fact = fact.mul_int(n as i64);
            }
            *c = c.mul(&fact.inverse().expect("factorial invertible"));
        }
        Self::new(domain, coeffs)
    }

    pub fn domain(&self) -> NumericDomain {
        self.domain
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(|| T::zero_in(self.domain))
    }

    /// EGF counts `n! [y^n]F`.
    pub fn egf_counts(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.mul(&T::from_integer_in(self.domain, &factorial(n))))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        EgfSeries { domain: self.domain, coeffs: self.coeffs[..keep].to_vec() }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.domain != other.domain {
            return Err(SeriesError::DomainMismatch(self.domain, other.domain));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect();
        Ok(EgfSeries { domain: self.domain, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect();
        Ok(EgfSeries { domain: self.domain, coeffs })
    }

    pub fn scale(&self, c: &T) -> Self {
        EgfSeries { domain: self.domain, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order().min(other.order());
        Ok(EgfSeries { domain: self.domain, coeffs: truncated_product(&self.coeffs, &other.coeffs, n, self.domain) })
    }

    pub fn derive(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderZero);
        }
        let coeffs = (1..=self.order()).map(|n| self.coeffs[n].mul_int(n as i64)).collect();
        Ok(EgfSeries { domain: self.domain, coeffs })
    }

    /// Antiderivative with zero constant term; order increases by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero_in(self.domain));
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.div_int(n as i64 + 1));
        }
        EgfSeries { domain: self.domain, coeffs }
    }

    /// `exp(g)` via `F' = g' F`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order();
        let kg: Vec<T> = (0..=n).map(|k| self.coeffs[k].mul_int(k as i64)).collect();
        let mut f = Vec::with_capacity(n + 1);
        f.push(T::one_in(self.domain));
        for m in 1..=n {
            let mut acc = T::zero_in(self.domain);
            for k in 1..=m {
                if !kg[k].is_zero() {
                    acc = acc.add(&kg[k].mul(&f[m - k]));
                }
            }
            f.push(acc.div_int(m as i64));
        }
        Ok(EgfSeries { domain: self.domain, coeffs: f })
    }

    /// Formal logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let one = T::one_in(self.domain);
        if !self.coeffs[0].sub(&one).is_zero() {
            return Err(SeriesError::ConstantNotOne);
        }
        let n = self.order();
        let f = &self.coeffs;
        // m L_m = m F_m - sum_{k=1}^{m-1} k L_k F_{m-k}
        let mut kl: Vec<T> = vec![T::zero_in(self.domain); n + 1];
        let mut l = vec![T::zero_in(self.domain); n + 1];
        for m in 1..=n {
            let mut acc = f[m].mul_int(m as i64);
            for k in 1..m {
                if !kl[k].is_zero() {
                    acc = acc.sub(&kl[k].mul(&f[m - k]));
                }
            }
            l[m] = acc.div_int(m as i64);
            kl[m] = acc;
        }
        Ok(EgfSeries { domain: self.domain, coeffs: l })
    }

    /// `self(inner)` by Horner's rule, truncated to the smaller order.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order().min(inner.order());
        let mut acc = vec![T::zero_in(self.domain); n + 1];
        for k in (0..=n).rev() {
            // acc = acc * inner + c_k, with acc of valuation >= 0 and inner of valuation >= 1
            acc = truncated_product(&acc, &inner.coeffs, n, self.domain);
            acc[0] = acc[0].add(&self.coeffs[k]);
        }
        Ok(EgfSeries { domain: self.domain, coeffs: acc })
    }

    /// `F^p` for an integer `p >= 0`, truncated at `order`, by the power recurrence.
    pub fn pow(&self, p: u64, order: usize) -> Result<Self, SeriesError> {
        power_series_pow(&self.coeffs, p, order, self.domain).map(|coeffs| EgfSeries { domain: self.domain, coeffs })
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, y: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero_in(self.domain), |acc, c| acc.mul(y).add(c))
    }
}

fn truncated_product<T: Coefficient>(a: &[T], b: &[T], n: usize, domain: NumericDomain) -> Vec<T> {
    let mut out = vec![T::zero_in(domain); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

// P = phi^p: m phi_0 P_m = sum_{k=1}^m ((p+1)k - m) phi_k P_{m-k}.
fn power_series_pow<T: Coefficient>(phi: &[T], p: u64, order: usize, domain: NumericDomain) -> Result<Vec<T>, SeriesError> {
    let phi0 = &phi[0];
    let inv = match phi0.inverse() {
        Some(inv) => inv,
        None => return repeated_pow(phi, p, order, domain),
    };
    let mut out = Vec::with_capacity(order + 1);
    let mut p0 = T::one_in(domain);
    for _ in 0..p {
        p0 = p0.mul(phi0);
    }
    out.push(p0);
    let pp = p as i64 + 1;
    for m in 1..=order {
        let mut acc = T::zero_in(domain);
        for k in 1..=m.min(phi.len() - 1) {
            if phi[k].is_zero() {
                continue;
            }
            let w = pp * k as i64 - m as i64;
            if w != 0 {
                acc = acc.add(&phi[k].mul(&out[m - k]).mul_int(w));
            }
        }
        out.push(acc.mul(&inv).div_int(m as i64));
    }
    Ok(out)
}

fn repeated_pow<T: Coefficient>(phi: &[T], p: u64, order: usize, domain: NumericDomain) -> Result<Vec<T>, SeriesError> {
    let mut acc = vec![T::zero_in(domain); order + 1];
    acc[0] = T::one_in(domain);
    let mut padded: Vec<T> = phi.iter().take(order + 1).cloned().collect();
    padded.resize(order + 1, T::zero_in(domain));
    for _ in 0..p {
        acc = truncated_product(&acc, &padded, order, domain);
    }
    Ok(acc)
}

/// Solve `T = x * phi(T)` to order `order` by Lagrange inversion,
/// `[x^n]T = (1/n) [y^{n-1}] phi^n`.
pub fn lagrange_solve<T: Coefficient>(phi: &EgfSeries<T>, order: usize) -> Result<EgfSeries<T>, SeriesError> {
    if phi.coeffs[0].is_zero() {
        return Err(SeriesError::ZeroConstant);
    }
    let domain = phi.domain;
    let mut padded = phi.coeffs.clone();
    padded.resize(order.max(1), T::zero_in(domain));
    let tail: Vec<T> = (1..=order)
        .into_par_iter()
        .map(|n| {
            let pw = power_series_pow(&padded, n as u64, n - 1, domain).expect("power");
            pw[n - 1].div_int(n as i64)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(T::zero_in(domain));
    coeffs.extend(tail);
    Ok(EgfSeries { domain, coeffs })
}

/// Solve `T = x * exp(g(T))` to order `order`.
///
/// Same coefficients as [`lagrange_solve`] on `exp(g)`, but each power
/// `exp(g)^n = exp(n g)` costs one multiply-add per term.
pub fn lagrange_solve_exp<T: Coefficient>(g: &EgfSeries<T>, order: usize) -> Result<EgfSeries<T>, SeriesError> {
    if !g.coeffs[0].is_zero() {
        return Err(SeriesError::NonzeroConstant);
    }
    let domain = g.domain;
    let kg = weighted_exponent(g, order);
    let tail: Vec<T> = (1..=order).into_par_iter().map(|n| exp_lagrange_term(&kg, n, domain)).collect();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(T::zero_in(domain));
    coeffs.extend(tail);
    Ok(EgfSeries { domain, coeffs })
}

/// Single coefficient `[x^n]T` of the solution of `T = x * exp(g(T))`.
pub fn lagrange_coefficient_exp<T: Coefficient>(g: &EgfSeries<T>, n: usize) -> Result<T, SeriesError> {
    if !g.coeffs[0].is_zero() {
        return Err(SeriesError::NonzeroConstant);
    }
    if n == 0 {
        return Ok(T::zero_in(g.domain));
    }
    Ok(exp_lagrange_term(&weighted_exponent(g, n), n, g.domain))
}

fn weighted_exponent<T: Coefficient>(g: &EgfSeries<T>, order: usize) -> Vec<T> {
    (0..order.max(1)).map(|k| g.coeff(k).mul_int(k as i64)).collect()
}

// (1/n) [y^{n-1}] exp(n g), with F = exp(n g) from F_m = (n/m) sum_k k g_k F_{m-k}
fn exp_lagrange_term<T: Coefficient>(kg: &[T], n: usize, domain: NumericDomain) -> T {
    let mut f: Vec<T> = Vec::with_capacity(n);
    f.push(T::one_in(domain));
    for m in 1..n {
        let mut acc = T::zero_in(domain);
        for k in 1..=m {
            if !kg[k].is_zero() {
                acc = acc.add(&kg[k].mul(&f[m - k]));
            }
        }
        f.push(acc.mul_int(n as i64).div_int(m as i64));
    }
    f[n - 1].div_int(n as i64)
}

/// Solve `T = x * phi(T)` by Newton iteration with order doubling.
///
/// Independent of the Lagrange formula; used as a cross-check.
pub fn lagrange_fixed_point<T: Coefficient>(phi: &EgfSeries<T>, order: usize) -> Result<EgfSeries<T>, SeriesError> {
    if phi.coeffs[0].is_zero() {
        return Err(SeriesError::ZeroConstant);
    }
    let domain = phi.domain;
    let mut padded = phi.coeffs.clone();
    padded.resize(order + 1, T::zero_in(domain));
    let phi_full = EgfSeries { domain, coeffs: padded };
    let dphi = if order >= 1 { phi_full.derive()? } else { EgfSeries::zero(domain, 0) };
    let mut t = EgfSeries::zero(domain, order);
    if order >= 1 {
        t.coeffs[1] = phi.coeffs[0].clone();
    }
    let mut prec = 1usize;
    while prec < order {
        prec = (2 * prec).min(order);
        let tt = t.truncate(prec);
        let comp = phi_full.truncate(prec).compose(&tt)?;
        let dcomp = dphi.truncate(prec).compose(&tt)?;
        // residual r = T - x phi(T); jacobian j = 1 - x phi'(T)
        let mut r = tt.clone();
        let mut j: EgfSeries<T> = EgfSeries::one(domain, prec);
        for k in 1..=prec {
            r.coeffs[k] = r.coeffs[k].sub(&comp.coeffs[k - 1]);
            j.coeffs[k] = j.coeffs[k].sub(&dcomp.coeffs[k - 1]);
        }
        let jinv = series_inverse(&j)?;
        let step = r.mul(&jinv)?;
        let next = tt.sub(&step)?;
        for k in 0..=prec {
            t.coeffs[k] = next.coeffs[k].clone();
        }
    }
    Ok(t)
}

/// Multiplicative inverse of a series with invertible constant term.
pub fn series_inverse<T: Coefficient>(f: &EgfSeries<T>) -> Result<EgfSeries<T>, SeriesError> {
    let inv0 = f.coeffs[0].inverse().ok_or(SeriesError::NotInvertible)?;
    let n = f.order();
    let mut g = Vec::with_capacity(n + 1);
    g.push(inv0.clone());
    for m in 1..=n {
        let mut acc = T::zero_in(f.domain);
        for k in 1..=m {
            if !f.coeffs[k].is_zero() {
                acc = acc.add(&f.coeffs[k].mul(&g[m - k]));
            }
        }
        g.push(acc.neg().mul(&inv0));
    }
    Ok(EgfSeries { domain: f.domain, coeffs: g })
}

/// Single Lagrange coefficient `(1/n) [y^{n-1}] phi^n`.
pub fn lagrange_coefficient<T: Coefficient>(phi: &EgfSeries<T>, n: usize) -> Result<T, SeriesError> {
    if n == 0 {
        return Ok(T::zero_in(phi.domain));
    }
    let mut padded = phi.coeffs.clone();
    padded.resize(n, T::zero_in(phi.domain));
    let pw = power_series_pow(&padded, n as u64, n - 1, phi.domain)?;
    Ok(pw[n - 1].div_int(n as i64))
}

/// Tail shape `[y^n]F ~ c * rho^{-n} * (n + shift)^{-alpha}` beyond the truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailModel {
    pub c: f64,
    pub rho: f64,
    pub alpha: f64,
    pub shift: u32,
}

impl TailModel {
    pub fn coefficient(&self, n: usize) -> f64 {
        self.c * self.rho.powf(-(n as f64)) * (n as f64 + self.shift as f64).powf(-self.alpha)
    }
}

/// Value of a truncated series at a point, with an error bound.
#[derive(Clone, Debug)]
pub struct TailedValue {
    pub value: BigFloat,
    pub partial_sum: BigFloat,
    pub tail: f64,
    pub error_bound: f64,
}

impl TailedValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `sum_{n <= N} f_n y0^n` plus the modelled tail `sum_{n > N}`.
///
/// With a tail model, the bound is `|tail| * 2 * max(delta, 1/N)` where
/// `delta` is the relative misfit of the model at the last stored
/// coefficient. Without one it is the magnitude of the last term.
pub fn eval_with_tail(f: &EgfSeries<BigFloat>, y0: f64, tail: Option<&TailModel>) -> Result<TailedValue, SeriesError> {
    if y0 < 0.0 {
        return Err(SeriesError::NegativeArgument(y0));
    }
    let prec = match f.domain {
        NumericDomain::BigFloat { precision_bits } => precision_bits,
        d => return Err(SeriesError::UnsupportedDomain(d)),
    };
    let y = BigFloat::from_f64(y0, prec);
    let partial = f.eval(&y);
    let n = f.order();
    let last_term = f.coeffs[n].mul(&y.powi(n as i64)).to_f64().abs();
    let rounding = partial.to_f64().abs() * (n as f64 + 1.0) * 2f64.powi(-(prec as i32) + 4);
    let Some(model) = tail else {
        return Ok(TailedValue { value: partial.clone(), partial_sum: partial, tail: 0.0, error_bound: last_term + rounding });
    };
    if y0 > model.rho * (1.0 + 1e-15) {
        return Err(SeriesError::Divergent { y0, rho: model.rho });
    }
    let r = (y0 / model.rho).min(1.0);
    if r == 1.0 && model.alpha <= 1.0 {
        return Err(SeriesError::TailDiverges(model.alpha));
    }
    let s = model.shift as u64;
    let tail_sum = if r == 0.0 {
        0.0
    } else {
        model.c * r.powf(-(s as f64)) * crate::numeric::special::power_geometric_tail(model.alpha, n as u64 + 1 + s, r)
    };
    let predicted_last = model.coefficient(n);
    let actual_last = f.coeffs[n].to_f64();
    let delta = if predicted_last != 0.0 { (actual_last / predicted_last - 1.0).abs() } else { 1.0 };
    let bound = tail_sum.abs() * 2.0 * delta.max(1.0 / n.max(1) as f64) + rounding;
    let value = partial.add(&BigFloat::from_f64(tail_sum, prec));
    Ok(TailedValue { value, partial_sum: partial, tail: tail_sum, error_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{ratio, PolyU};
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    const Q: NumericDomain = NumericDomain::ExactRational;
    const QU: NumericDomain = NumericDomain::ExactRationalPolyU;

    fn q(v: &[i64]) -> EgfSeries<BigRational> {
        EgfSeries::new(Q, v.iter().map(|&c| BigRational::from_integer(c.into())).collect()).unwrap()
    }

    #[test]
    fn add_and_mul_basics() {
        assert_eq!(q(&[1, 1]).add(&q(&[1, -1])).unwrap(), q(&[2, 0]));
        assert_eq!(q(&[0, 1, 1]).add(&q(&[0, 0, 1])).unwrap(), q(&[0, 1, 2]));
        assert_eq!(q(&[1, 1, 0]).mul(&q(&[1, 1, 0])).unwrap(), q(&[1, 2, 1]));
        let geom = q(&[1, 1, 1, 1, 1]);
        assert_eq!(geom.mul(&q(&[1, -1, 0, 0, 0])).unwrap(), q(&[1, 0, 0, 0, 0]));
        let other = EgfSeries::<BigRational>::zero(Q, 3);
        assert!(EgfSeries::<BigFloat>::new(Q, vec![BigFloat::default()]).is_err());
        assert_eq!(other.order(), 3);
    }

    #[test]
    fn derive_basics() {
        let half_sq = EgfSeries::new(Q, vec![BigRational::zero(), BigRational::zero(), ratio(1, 2)]).unwrap();
        assert_eq!(half_sq.derive().unwrap(), q(&[0, 1]));
        assert_eq!(q(&[5, 0, 0]).derive().unwrap(), q(&[0, 0]));
        assert_eq!(q(&[5]).derive(), Err(SeriesError::OrderZero));
    }

    #[test]
    fn exp_of_uy_gives_u_power_counts() {
        let g = EgfSeries::new(QU, vec![PolyU::zero(), PolyU::variable(), PolyU::zero(), PolyU::zero(), PolyU::zero()]).unwrap();
        let counts = g.exp().unwrap().egf_counts();
        for (k, c) in counts.iter().enumerate() {
            assert_eq!(*c, PolyU::monomial(1, k));
        }
        assert_eq!(q(&[0, 0, 0]).exp().unwrap(), q(&[1, 0, 0]));
        assert_eq!(q(&[1, 0]).exp(), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn exp_log_roundtrip_small() {
        let g = q(&[0, 3, -2, 7, 1]);
        assert_eq!(g.exp().unwrap().log().unwrap(), g);
    }

    #[test]
    fn compose_basics() {
        // exp series of y composed with y^2
        let e = EgfSeries::from_egf_counts(Q, vec![BigRational::one(); 7]).unwrap();
        let sq = q(&[0, 0, 1, 0, 0, 0, 0]);
        let composed = e.compose(&sq).unwrap();
        let expected = EgfSeries::new(
            Q,
            vec![BigRational::one(), BigRational::zero(), BigRational::one(), BigRational::zero(), ratio(1, 2), BigRational::zero(), ratio(1, 6)],
        )
        .unwrap();
        assert_eq!(composed, expected);
        assert_eq!(q(&[4, 1, 2]).compose(&q(&[0, 0, 0])).unwrap(), q(&[4, 0, 0]));
    }

    #[test]
    fn lagrange_trees_cayley() {
        let g = EgfSeries::new(QU, vec![PolyU::zero(), PolyU::variable(), PolyU::zero(), PolyU::zero(), PolyU::zero(), PolyU::zero()]).unwrap();
        let t = lagrange_solve(&g.exp().unwrap(), 5).unwrap();
        let counts = t.egf_counts();
        for n in 1..=5usize {
            let nn = (n as i64).pow(n as u32 - 1);
            assert_eq!(counts[n], PolyU::monomial(nn, n - 1), "n = {n}");
        }
        let t2 = lagrange_solve_exp(&g, 5).unwrap();
        assert_eq!(t, t2);
        for n in 0..=5 {
            assert_eq!(lagrange_coefficient_exp(&g, n).unwrap(), t.coeff(n));
        }
    }

    #[test]
    fn lagrange_empty_class_is_x() {
        let t = lagrange_solve(&q(&[1, 0, 0, 0]), 4).unwrap();
        assert_eq!(t, q(&[0, 1, 0, 0, 0]));
        assert_eq!(lagrange_solve(&q(&[0, 1]), 3), Err(SeriesError::ZeroConstant));
    }

    #[test]
    fn fixed_point_agrees_with_lagrange() {
        let phi = q(&[2, -1, 3, 0, 5, 1, -2]);
        let a = lagrange_solve(&phi, 9).unwrap();
        let b = lagrange_fixed_point(&phi, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pow_falls_back_without_inverse() {
        let p = EgfSeries::new(QU, vec![PolyU::variable(), PolyU::from_integers(&[1])]).unwrap();
        let sq = p.pow(2, 2).unwrap();
        assert_eq!(sq.coeffs()[0], PolyU::monomial(1, 2));
        assert_eq!(sq.coeffs()[1], PolyU::monomial(2, 1));
        assert_eq!(sq.coeffs()[2], PolyU::from_integers(&[1]));
    }

    #[test]
    fn eval_polynomial_has_no_tail() {
        let d = NumericDomain::big_float(128);
        let f = EgfSeries::new(d, vec![BigFloat::zero(128), BigFloat::one(128)]).unwrap();
        let v = eval_with_tail(&f, 0.5, None).unwrap();
        assert_eq!(v.to_f64(), 0.5);
        assert!(eval_with_tail(&f, -1.0, None).is_err());
    }
}
