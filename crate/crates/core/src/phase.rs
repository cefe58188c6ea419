//! Critical weight, singularity `rho(u)`, the block tree offspring law and
//! the constants of the coefficient asymptotics for square-root-type classes.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::classes::{BlockClassSpec, ClassError};

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("block weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("rho_B B''(rho_B) = {0} gives no finite critical weight")]
    NoCriticalWeight(f64),
    #[error("no bracket for y B''(y) = {target} below rho_B = {rho_b}")]
    NoBracket { target: f64, rho_b: f64 },
    #[error("tail mass {mass:e} above tolerance {eps:e} at support cap {cap}")]
    TailTooLarge { mass: f64, eps: f64, cap: usize },
    #[error("class {0} lacks the singular constants required here")]
    NotSingular(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseSolution {
    pub class: String,
    pub u: f64,
    pub u_c: f64,
    pub rho_u: f64,
    pub y_u: f64,
    pub phase: Phase,
    /// `u y(u) B''(y(u))`.
    pub mean_mu: f64,
    /// `|y - rho exp(u B'(y))| / y`.
    pub residual: f64,
}

/// Relative distance under which `u` is treated as equal to `u_C`.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// `u_C = 1 / (rho_B B''(rho_B))`; `0` when the product is infinite.
pub fn critical_u(class: &BlockClassSpec) -> Result<f64, PhaseError> {
    let rho = class.rho_b();
    if rho.is_infinite() {
        return Ok(0.0);
    }
    if !(rho > 0.0) {
        return Err(ClassError::NoMetadata(class.name.clone()).into());
    }
    let product = rho * class.bsecond(rho)?;
    if product.is_infinite() {
        return Ok(0.0);
    }
    if !(product > 0.0) {
        return Err(PhaseError::NoCriticalWeight(product));
    }
    Ok(1.0 / product)
}

fn check_weight(u: f64) -> Result<(), PhaseError> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(PhaseError::InvalidWeight(u))
    }
}

pub fn solve_phase(class: &BlockClassSpec, u: f64) -> Result<PhaseSolution, PhaseError> {
    check_weight(u)?;
    let u_c = critical_u(class)?;
    let rho_b = class.rho_b();
    let (y, phase) = if u_c > 0.0 && u <= u_c * (1.0 + CRITICAL_TOLERANCE) {
        let phase = if (u - u_c).abs() <= CRITICAL_TOLERANCE * u_c { Phase::Critical } else { Phase::Subcritical };
        (rho_b, phase)
    } else {
        (solve_supercritical_y(class, u)?, Phase::Supercritical)
    };
    let bp = class.bprime(y)?;
    let rho_u = y * (-u * bp).exp();
    let mean_mu = u * y * class.bsecond(y)?;
    let residual = (y - rho_u * (u * bp).exp()).abs() / y;
    Ok(PhaseSolution { class: class.name.clone(), u, u_c, rho_u, y_u: y, phase, mean_mu, residual })
}

// Root of y B''(y) = 1/u on (0, rho_B): bisection, then guarded Newton.
fn solve_supercritical_y(class: &BlockClassSpec, u: f64) -> Result<f64, PhaseError> {
    let target = 1.0 / u;
    let rho_b = class.rho_b();
    let g = |y: f64| -> Result<f64, PhaseError> { Ok(y * class.bsecond(y)? - target) };
    let mut lo = 0.0;
    let mut hi = if rho_b.is_finite() { rho_b } else { 1.0 };
    while g(hi)? < 0.0 {
        if rho_b.is_finite() {
            return Err(PhaseError::NoBracket { target, rho_b });
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(PhaseError::NoBracket { target, rho_b });
        }
    }
    for _ in 0..2000 {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..4 {
        let d = class.derivatives(y)?;
        let slope = d[1] + y * d[2];
        if !(slope > 0.0) {
            break;
        }
        let next = y - (y * d[1] - target) / slope;
        if !(next > lo && next < hi) {
            break;
        }
        if (next - y).abs() <= 1e-15 * y {
            y = next;
            break;
        }
        y = next;
    }
    Ok(y)
}

/// Ordinary coefficients of `Phi(y z, u) = exp(u B'(y z))` in `z` up to `cap`,
/// in `f64`.
///
/// Uses `f_m = (1/m) sum_k k a_k f_{m-k}` with `a_k = u b'_k y^k / k!`.
pub fn scaled_phi_coefficients(class: &BlockClassSpec, u: f64, y: f64, cap: usize) -> Result<Vec<f64>, PhaseError> {
    let beta = class.beta_vec(cap)?;
    let mut ka = vec![0.0; cap + 1];
    let mut yk = 1.0;
    for k in 1..=cap {
        yk *= y;
        ka[k] = k as f64 * u * beta[k] * yk;
    }
    Ok(exp_recurrence(&ka))
}

// f = exp(A) where ka[k] = k a_k; f_0 = 1.
fn exp_recurrence(ka: &[f64]) -> Vec<f64> {
    let cap = ka.len() - 1;
    // rev[cap - i] = f_i, so that the convolution reads both slices forwards
    let mut rev = vec![0.0; cap + 1];
    rev[cap] = 1.0;
    for m in 1..=cap {
        let s = dot(&ka[1..=m], &rev[cap + 1 - m..=cap]);
        rev[cap - m] = s / m as f64;
    }
    rev.reverse();
    rev
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] += x[i] * y[i];
        }
    }
    let mut s: f64 = acc.iter().sum();
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

/// Offspring law of the block tree, truncated at `probs.len() - 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ReproductionLaw {
    pub u: f64,
    pub y: f64,
    pub probs: Vec<f64>,
    pub tail_mass: f64,
    /// Mean from the closed form `u y B''(y)`.
    pub mean: f64,
    /// `sum_j j mu(j)` over the stored support.
    pub table_mean: f64,
}

impl ReproductionLaw {
    pub fn cap(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn prob(&self, j: usize) -> f64 {
        self.probs.get(j).copied().unwrap_or(0.0)
    }
}

/// `mu(j) = [y^j]Phi y(u)^j / Phi(y(u))` for `j <= cap`. With `eps`, fails
/// when more than `eps` of the mass lies beyond the cap.
pub fn reproduction_law(class: &BlockClassSpec, u: f64, cap: usize, eps: Option<f64>) -> Result<ReproductionLaw, PhaseError> {
    let sol = solve_phase(class, u)?;
    reproduction_law_at(class, &sol, cap, eps)
}

pub fn reproduction_law_at(class: &BlockClassSpec, sol: &PhaseSolution, cap: usize, eps: Option<f64>) -> Result<ReproductionLaw, PhaseError> {
    let u = sol.u;
    let y = sol.y_u;
    let norm = (-u * class.bprime(y)?).exp();
    let probs: Vec<f64> = scaled_phi_coefficients(class, u, y, cap)?.into_iter().map(|f| f * norm).collect();
    let total: f64 = probs.iter().sum();
    let tail_mass = (1.0 - total).max(0.0);
    if let Some(eps) = eps {
        if tail_mass > eps {
            return Err(PhaseError::TailTooLarge { mass: tail_mass, eps, cap });
        }
    }
    let table_mean = probs.iter().enumerate().map(|(j, p)| j as f64 * p).sum();
    Ok(ReproductionLaw { u, y, probs, tail_mass, mean: sol.mean_mu, table_mean })
}

/// Constants of the leading coefficient asymptotics.
///
/// The critical and supercritical constants come in two versions: the
/// `printed` formulas and the ones obtained by redoing the expansion of
/// `x = y exp(-u B'(y))` at the singularity (`derived`). They differ; see
/// the README.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticConstants {
    pub regime: Phase,
    pub alpha: f64,
    pub rho_u: f64,
    pub y_u: f64,
    pub r_u: Option<f64>,
    pub s_u: f64,
    pub s_u_derived: f64,
    pub gamma_u: f64,
    pub c_u: f64,
    pub leading_coefficient: f64,
    pub leading_coefficient_derived: f64,
}

pub fn asymptotic_constants(class: &BlockClassSpec, u: f64) -> Result<AsymptoticConstants, PhaseError> {
    let meta = class.metadata.as_ref().ok_or_else(|| PhaseError::NotSingular(class.name.clone()))?;
    let c_b = meta.c_b.ok_or_else(|| PhaseError::NotSingular(class.name.clone()))?;
    let sol = solve_phase(class, u)?;
    let rho_b = meta.rho_b;
    let y = sol.y_u;
    let gamma_u = 3.0 * rho_b.powf(1.5) * c_b / (4.0 * PI.sqrt()) * u * (u * class.bprime(rho_b)?).exp();
    let c_u = gamma_u * (-u * class.bprime(y)?).exp();
    let (alpha, r_u, s_u, s_der, lead, lead_der) = match sol.phase {
        Phase::Subcritical => {
            let f = 1.0 - u / sol.u_c;
            let s = u * c_b * rho_b.powf(2.5) * f.powf(-2.5);
            let lead = 3.0 * s / (4.0 * PI.sqrt());
            (2.5, Some(rho_b / f), s, s, lead, lead)
        }
        Phase::Critical => {
            let s = (sol.u_c * c_b).powf(-2.0 / 3.0);
            let g23 = gamma(2.0 / 3.0);
            (5.0 / 3.0, None, s, s, s * g23 / (3.0 * PI).sqrt(), s * g23 / (3.0f64.sqrt() * PI))
        }
        Phase::Supercritical => {
            let d = class.derivatives(y)?;
            let s = (2.0 / (u * d[1] + u * u * d[0] * d[0])).sqrt();
            let s_der = (2.0 / (1.0 / (y * y) + u * d[2])).sqrt();
            let k = 1.0 / (2.0 * PI.sqrt());
            (1.5, None, s, s_der, s * k, s_der * k)
        }
    };
    Ok(AsymptoticConstants {
        regime: sol.phase,
        alpha,
        rho_u: sol.rho_u,
        y_u: y,
        r_u,
        s_u,
        s_u_derived: s_der,
        gamma_u,
        c_u,
        leading_coefficient: lead,
        leading_coefficient_derived: lead_der,
    })
}

/// `ln` of the predicted `[x^n]C*(x, u)` with the printed constant.
pub fn predicted_log_coefficient(k: &AsymptoticConstants, n: usize, derived: bool) -> f64 {
    let lead = if derived { k.leading_coefficient_derived } else { k.leading_coefficient };
    let n = n as f64;
    lead.ln() - k.alpha * n.ln() - n * k.rho_u.ln()
}

/// Leading-order prediction of `[x^n]C*(x, u)`; may overflow to `inf`.
pub fn predicted_coefficient(class: &BlockClassSpec, u: f64, n: usize) -> Result<f64, PhaseError> {
    Ok(predicted_log_coefficient(&asymptotic_constants(class, u)?, n, false).exp())
}

/// Law of `R` with generating function `exp(u B'(rho_B z)) / exp(u B'(rho_B))`.
#[derive(Clone, Debug, Serialize)]
pub struct RemainderLaw {
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

pub fn gibbs_remainder_law(class: &BlockClassSpec, u: f64, rmax: usize, eps: Option<f64>) -> Result<RemainderLaw, PhaseError> {
    check_weight(u)?;
    let rho_b = class.rho_b();
    if !rho_b.is_finite() || class.metadata.is_none() && class.closed_form.is_none() {
        return Err(PhaseError::NotSingular(class.name.clone()));
    }
    let bp = class.bprime(rho_b)?;
    if !bp.is_finite() {
        return Err(PhaseError::NotSingular(class.name.clone()));
    }
    let norm = (-u * bp).exp();
    let probs: Vec<f64> = scaled_phi_coefficients(class, u, rho_b, rmax)?.into_iter().map(|f| f * norm).collect();
    let tail_mass = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    if let Some(eps) = eps {
        if tail_mass > eps {
            return Err(PhaseError::TailTooLarge { mass: tail_mass, eps, cap: rmax });
        }
    }
    Ok(RemainderLaw { probs, tail_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{cacti, planar, polylog_class, trees};
    use crate::numeric::special::zeta;
    use crate::series::{series_inverse, EgfSeries};
    use crate::NumericDomain;

    #[test]
    fn critical_weights() {
        assert!((critical_u(&polylog_class()).unwrap() - 1.0 / zeta(1.5)).abs() < 1e-12);
        assert!((critical_u(&polylog_class()).unwrap() - 0.382_793).abs() < 1e-6);
        assert_eq!(critical_u(&cacti()).unwrap(), 0.0);
        assert_eq!(critical_u(&trees()).unwrap(), 0.0);
        assert!((critical_u(&planar()).unwrap() - 24.837).abs() < 0.01);
    }

    #[test]
    fn trees_phase() {
        for &u in &[0.3, 1.0, 2.5] {
            let s = solve_phase(&trees(), u).unwrap();
            assert!((s.y_u - 1.0 / u).abs() < 1e-12 / u);
            assert!((s.rho_u - 1.0 / (u * std::f64::consts::E)).abs() < 1e-12);
            assert!((s.mean_mu - 1.0).abs() < 1e-12);
            assert_eq!(s.phase, Phase::Supercritical);
        }
        let law = reproduction_law(&trees(), 1.7, 30, Some(1e-12)).unwrap();
        assert!((law.probs[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((law.probs[3] - (-1.0f64).exp() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn polylog_subcritical() {
        let s = solve_phase(&polylog_class(), 0.2).unwrap();
        assert_eq!(s.phase, Phase::Subcritical);
        assert_eq!(s.y_u, 1.0);
        assert!((s.rho_u - (-0.2 * zeta(2.5)).exp()).abs() < 1e-14);
        assert!((s.mean_mu - 0.2 * zeta(1.5)).abs() < 1e-12);
        assert!((s.mean_mu - 0.522_475).abs() < 1e-6);
        let law = reproduction_law(&polylog_class(), 0.2, 2000, None).unwrap();
        assert!((law.probs[0] - s.rho_u / s.y_u).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_critical_weight() {
        let class = polylog_class();
        let uc = critical_u(&class).unwrap();
        let at = solve_phase(&class, uc).unwrap();
        assert_eq!(at.phase, Phase::Critical);
        // second-branch formulas evaluated at u_C
        // B'' has a square-root singularity at rho_B, so y is compared to
        // rho_B and the formulas are evaluated there
        let y = solve_supercritical_y(&class, uc).unwrap();
        assert!((y - at.y_u).abs() < 1e-12);
        let d = class.derivatives(at.y_u).unwrap();
        let rho = 1.0 / (uc * d[1] * (uc * d[0]).exp());
        assert!((rho - at.rho_u).abs() < 1e-10, "{rho} vs {}", at.rho_u);
    }

    #[test]
    fn supercritical_fixed_point() {
        for &u in &[0.5, 0.8, 2.0] {
            let s = solve_phase(&polylog_class(), u).unwrap();
            assert!(s.residual < 1e-10);
            assert!((s.mean_mu - 1.0).abs() < 1e-9, "{}", s.mean_mu);
            assert!(s.y_u < 1.0);
        }
        let c = solve_phase(&cacti(), 1.0).unwrap();
        assert!((c.mean_mu - 1.0).abs() < 1e-10);
    }

    #[test]
    fn polylog_constants() {
        let class = polylog_class();
        let k = asymptotic_constants(&class, 0.2).unwrap();
        assert!((k.gamma_u - 0.2 * (0.2 * zeta(2.5)).exp()).abs() < 1e-12);
        assert!((k.c_u - 0.2).abs() < 1e-12);
        assert_eq!(k.alpha, 2.5);
        let uc = critical_u(&class).unwrap();
        assert_eq!(asymptotic_constants(&class, uc).unwrap().alpha, 5.0 / 3.0);
        let sup = asymptotic_constants(&class, 0.6).unwrap();
        assert_eq!(sup.alpha, 1.5);
        assert!(sup.s_u != sup.s_u_derived);
        assert!(predicted_coefficient(&class, 0.2, 1).unwrap() > 0.0);
    }

    #[test]
    fn supercritical_constant_on_trees() {
        // n![x^n]C* = (n u)^{n-1}, so [x^n]C* ~ n^{-3/2} rho^{-n} / (u sqrt(2 pi)).
        let mut class = trees();
        class.metadata = Some(crate::classes::SingularMetadata {
            rho_b: f64::INFINITY,
            bprime_at_rho: f64::INFINITY,
            bsecond_at_rho: 1.0,
            c_b: Some(1.0),
            singular_exponent: 1.5,
            provenance: String::new(),
        });
        let u = 1.3;
        let sol = solve_phase(&class, u).unwrap();
        let d = class.derivatives(sol.y_u).unwrap();
        let s_der = (2.0 / (1.0 / (sol.y_u * sol.y_u) + u * d[2])).sqrt();
        assert!((s_der / (2.0 * PI.sqrt()) - 1.0 / (u * (2.0 * PI).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn remainder_law() {
        let r = gibbs_remainder_law(&polylog_class(), 0.2, 400, None).unwrap();
        assert!((r.probs[0] - (-0.2 * zeta(2.5)).exp()).abs() < 1e-14);
        assert!((r.probs[0] - 0.7647).abs() < 5e-5);
        assert!(r.tail_mass < 1e-3);
    }

    #[test]
    fn remainder_law_matches_composed_form() {
        // P_N(P_X(z)) / P_X(z) with P_X(z) = B'(z)/B'(1), P_N(w) = w exp(l (w - 1)).
        let class = polylog_class();
        let u = 0.2;
        let order = 60;
        let bp = zeta(2.5);
        let lambda = u * bp;
        let dom = NumericDomain::Float64;
        let px: Vec<f64> = (0..=order).map(|k| if k == 0 { 0.0 } else { (k as f64).powf(-2.5) / bp }).collect();
        let px = EgfSeries::new(dom, px).unwrap();
        let pn: Vec<f64> = (0..=order).map(|k| if k == 0 { 0.0 } else { (-lambda).exp() * lambda.powi(k as i32 - 1) / (1..k).map(|i| i as f64).product::<f64>() }).collect();
        let pn = EgfSeries::new(dom, pn).unwrap();
        let composed = pn.compose(&px).unwrap();
        // divide by P_X: both vanish at 0, so shift down one place first
        let shift = |s: &EgfSeries<f64>| EgfSeries::new(dom, s.coeffs()[1..].to_vec()).unwrap();
        let quotient = shift(&composed).mul(&series_inverse(&shift(&px)).unwrap()).unwrap();
        let r = gibbs_remainder_law(&class, u, order - 1, None).unwrap();
        for k in 0..order {
            assert!((quotient.coeff(k) - r.probs[k]).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn exp_recurrence_matches_poisson() {
        let ka = vec![0.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        let f = exp_recurrence(&ka);
        let mut expect = 1.0;
        for (m, v) in f.iter().enumerate() {
            assert!((v - expect).abs() < 1e-15);
            expect *= 2.0 / (m + 1) as f64;
        }
    }
}
