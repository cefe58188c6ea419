//! Block-stable classes described as data.
//!
//! A class is determined by its derived-block weights `b'_k` (EGF counts of
//! derived 2-connected blocks with `k` labelled vertices). Ordinary
//! coefficients `b'_k / k!` are kept in `f64` for every class; integer classes
//! also keep exact counts.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{block_decompose, enumerate_graphs, is_2connected, is_planar, LabelledGraph};
use crate::numeric::special::{gamma_neg_three_halves, polylog, power_geometric_tail};
use crate::numeric::{factorial, Coefficient, NumericDomain};
use crate::series::{EgfSeries, SeriesError};

#[derive(Debug, Error)]
pub enum ClassError {
    #[error("class {class} has weights only up to k = {available}, order {requested} requested")]
    InsufficientWeights { class: String, available: usize, requested: usize },
    #[error("class {0} cannot be evaluated in an exact domain")]
    NotExact(String),
    #[error("class {class} cannot be evaluated at y = {y} (radius {rho})")]
    OutOfRange { class: String, y: f64, rho: f64 },
    #[error("class {0} has no block tools")]
    NoBlockTools(String),
    #[error("class {0} has no singular metadata")]
    NoMetadata(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("class file: {0}")]
    File(String),
}

/// Closed forms for `B'`, `B''` and `B'''`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `B'(y) = y`.
    SingleEdge,
    /// `B'(y) = y + y^2 / (2 (1 - y))`.
    Cactus,
    /// `B'(y) = Li_s(y)`, i.e. `b'_k / k! = k^{-s}`.
    Polylog { exponent: f64 },
}

/// Constants of the square-root-type singular expansion of `B'` at `rho_b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularMetadata {
    pub rho_b: f64,
    pub bprime_at_rho: f64,
    /// May be `f64::INFINITY`.
    pub bsecond_at_rho: f64,
    pub c_b: Option<f64>,
    #[serde(default = "three_halves")]
    pub singular_exponent: f64,
    #[serde(default)]
    pub provenance: String,
}

fn three_halves() -> f64 {
    1.5
}

impl SingularMetadata {
    /// `c_B rho_B^{3/2} / Gamma(-3/2)`, the constant of the coefficient tail
    /// `[y^k]B' ~ K rho_B^{-k} k^{-5/2}`.
    pub fn tail_constant(&self) -> Option<f64> {
        self.c_b.map(|c| c * self.rho_b.powf(1.5) / gamma_neg_three_halves())
    }
}

/// Which 2-connected graphs form the blocks of a concrete class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    SingleEdge,
    Cycles,
    Planar,
    All,
}

impl BlockKind {
    /// Is the 2-connected graph `block` (ordinary or derived) a block of the class?
    pub fn contains_block(&self, block: &LabelledGraph) -> bool {
        if !is_2connected(block) {
            return false;
        }
        match self {
            BlockKind::SingleEdge => block.vertex_count() == 2,
            BlockKind::Cycles => block.vertex_count() == 2 || block.edge_count() == block.vertex_count(),
            BlockKind::Planar => is_planar(block).unwrap_or(false),
            BlockKind::All => true,
        }
    }
}

/// Enumerator and uniform sampler of derived blocks.
#[derive(Clone, Debug)]
pub struct BlockTools {
    pub kind: BlockKind,
    cache: Arc<Vec<OnceLock<Arc<Vec<LabelledGraph>>>>>,
}

/// Largest derived size for which block lists are enumerated on demand.
pub const MAX_ENUMERATED_BLOCK: usize = 6;

impl BlockTools {
    pub fn new(kind: BlockKind) -> Self {
        BlockTools { kind, cache: Arc::new((0..=MAX_ENUMERATED_BLOCK).map(|_| OnceLock::new()).collect()) }
    }

    /// All derived blocks with `k` labelled vertices (unlabelled vertex `0`).
    pub fn enumerate_derived(&self, k: usize) -> Result<Arc<Vec<LabelledGraph>>, ClassError> {
        if k == 0 {
            return Ok(Arc::new(Vec::new()));
        }
        if k > MAX_ENUMERATED_BLOCK {
            return Err(ClassError::InsufficientWeights { class: format!("{:?}", self.kind), available: MAX_ENUMERATED_BLOCK, requested: k });
        }
        Ok(self.cache[k]
            .get_or_init(|| {
                let list: Vec<LabelledGraph> = match self.kind {
                    BlockKind::SingleEdge => {
                        if k == 1 {
                            vec![LabelledGraph::new_derived(1, vec![(0, 1)]).unwrap()]
                        } else {
                            Vec::new()
                        }
                    }
                    _ => {
                        let kind = self.kind;
                        enumerate_graphs(k + 1, move |g| kind.contains_block(g))
                            .expect("size within enumeration range")
                            .map(|g| derive_top_label(&g))
                            .collect()
                    }
                };
                Arc::new(list)
            })
            .clone())
    }

    /// Uniform derived block with `k` labelled vertices.
    pub fn sample_derived<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<LabelledGraph, ClassError> {
        match self.kind {
            BlockKind::SingleEdge if k == 1 => Ok(LabelledGraph::new_derived(1, vec![(0, 1)]).unwrap()),
            BlockKind::Cycles => Ok(random_derived_cycle(k, rng)),
            _ => {
                let list = self.enumerate_derived(k)?;
                if list.is_empty() {
                    return Err(ClassError::InsufficientWeights { class: format!("{:?}", self.kind), available: 0, requested: k });
                }
                Ok(list[rng.random_range(0..list.len())].clone())
            }
        }
    }
}

// Vertex k+1 of a graph on 1..=k+1 becomes the unlabelled vertex.
fn derive_top_label(g: &LabelledGraph) -> LabelledGraph {
    let top = g.size() as u32;
    let edges = g.edges().iter().map(|&(a, b)| if b == top { (0, a) } else { (a, b) }).collect();
    LabelledGraph::new_derived(g.size() - 1, edges).expect("derived relabelling is valid")
}

fn random_derived_cycle<R: Rng + ?Sized>(k: usize, rng: &mut R) -> LabelledGraph {
    if k == 1 {
        return LabelledGraph::new_derived(1, vec![(0, 1)]).unwrap();
    }
    let mut order: Vec<u32> = (1..=k as u32).collect();
    order.shuffle(rng);
    let mut edges = vec![(0, order[0]), (order[k - 1], 0)];
    for w in order.windows(2) {
        edges.push((w[0], w[1]));
    }
    LabelledGraph::new_derived(k, edges).unwrap()
}

/// A block-stable class.
#[derive(Clone, Debug)]
pub struct BlockClassSpec {
    pub name: String,
    /// `beta[k] = b'_k / k!`, `beta[0] = 0`.
    beta: Vec<f64>,
    /// Exact `b'_k`, index `k` (entry 0 unused).
    exact: Option<Vec<BigUint>>,
    pub closed_form: Option<ClosedForm>,
    pub metadata: Option<SingularMetadata>,
    pub tools: Option<BlockTools>,
    pub is_abstract: bool,
}

impl BlockClassSpec {
    /// Class from exact EGF counts `b'_1, b'_2, ...`.
    pub fn from_exact_counts(name: &str, counts: &[BigUint]) -> Self {
        let mut exact = vec![BigUint::zero()];
        exact.extend_from_slice(counts);
        let beta = exact
            .iter()
            .enumerate()
            .map(|(k, c)| ToPrimitive::to_f64(&BigRational::new(c.clone().into(), factorial(k))).unwrap_or(f64::NAN))
            .collect();
        BlockClassSpec { name: name.into(), beta, exact: Some(exact), closed_form: None, metadata: None, tools: None, is_abstract: true }
    }

    /// Class from ordinary coefficients `b'_k / k!` for `k = 1, 2, ...`.
    pub fn from_ordinary_weights(name: &str, ordinary: &[f64]) -> Self {
        let mut beta = vec![0.0];
        beta.extend_from_slice(ordinary);
        BlockClassSpec { name: name.into(), beta, exact: None, closed_form: None, metadata: None, tools: None, is_abstract: true }
    }

    pub fn with_closed_form(mut self, cf: ClosedForm) -> Self {
        self.closed_form = Some(cf);
        self
    }

    pub fn with_metadata(mut self, m: SingularMetadata) -> Self {
        self.metadata = Some(m);
        self
    }

    pub fn with_blocks(mut self, kind: BlockKind) -> Self {
        self.tools = Some(BlockTools::new(kind));
        self.is_abstract = false;
        self
    }

    /// Largest `k` with a stored weight.
    pub fn max_k(&self) -> usize {
        self.beta.len() - 1
    }

    /// Whether `b'_k` is available for every `k`, via a closed form.
    pub fn unbounded_weights(&self) -> bool {
        matches!(self.closed_form, Some(ClosedForm::SingleEdge) | Some(ClosedForm::Cactus))
    }

    /// Ordinary coefficient `b'_k / k!` in `f64`.
    pub fn beta(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return Some(0.0);
        }
        match self.closed_form {
            Some(ClosedForm::SingleEdge) => Some(if k == 1 { 1.0 } else { 0.0 }),
            Some(ClosedForm::Cactus) => Some(if k == 1 { 1.0 } else { 0.5 }),
            Some(ClosedForm::Polylog { exponent }) => Some((k as f64).powf(-exponent)),
            None => self.beta.get(k).copied(),
        }
    }

    /// Ordinary coefficients `beta_0..=beta_order` in `f64`.
    pub fn beta_vec(&self, order: usize) -> Result<Vec<f64>, ClassError> {
        (0..=order).map(|k| self.beta(k).ok_or_else(|| self.insufficient(order))).collect()
    }

    /// Exact `b'_k`, when the class has integer weights.
    pub fn exact_count(&self, k: usize) -> Option<BigUint> {
        if k == 0 {
            return Some(BigUint::zero());
        }
        match self.closed_form {
            Some(ClosedForm::SingleEdge) => Some(BigUint::from(u32::from(k == 1))),
            Some(ClosedForm::Cactus) => Some(if k == 1 { BigUint::from(1u32) } else { factorial(k).to_biguint().unwrap() / 2u32 }),
            Some(ClosedForm::Polylog { .. }) => None,
            None => self.exact.as_ref().and_then(|e| e.get(k).cloned()),
        }
    }

    pub fn has_integer_weights(&self) -> bool {
        !matches!(self.closed_form, Some(ClosedForm::Polylog { .. })) && (self.unbounded_weights() || self.exact.is_some())
    }

    fn insufficient(&self, requested: usize) -> ClassError {
        ClassError::InsufficientWeights { class: self.name.clone(), available: self.max_k(), requested }
    }

    /// Radius of convergence of `B'` (`inf` for polynomial classes).
    pub fn rho_b(&self) -> f64 {
        match self.closed_form {
            Some(ClosedForm::SingleEdge) => f64::INFINITY,
            Some(ClosedForm::Cactus) | Some(ClosedForm::Polylog { .. }) => 1.0,
            None => self.metadata.as_ref().map_or(0.0, |m| m.rho_b),
        }
    }

    /// `B'(y)`, `B''(y)` and `B'''(y)` for `0 <= y <= rho_b`.
    pub fn derivatives(&self, y: f64) -> Result<[f64; 3], ClassError> {
        let rho = self.rho_b();
        if !(0.0..=rho).contains(&y) {
            return Err(ClassError::OutOfRange { class: self.name.clone(), y, rho });
        }
        match self.closed_form {
            Some(ClosedForm::SingleEdge) => Ok([y, 1.0, 0.0]),
            Some(ClosedForm::Cactus) => {
                if y == 1.0 {
                    return Ok([f64::INFINITY; 3]);
                }
                let d = 1.0 - y;
                Ok([y + y * y / (2.0 * d), 0.5 + 0.5 / (d * d), 1.0 / (d * d * d)])
            }
            Some(ClosedForm::Polylog { exponent: s }) => {
                if y < 1e-6 {
                    // direct series, first terms
                    let t = |k: f64| k.powf(-s);
                    return Ok([
                        y + t(2.0) * y * y + t(3.0) * y.powi(3),
                        1.0 + 2.0 * t(2.0) * y + 3.0 * t(3.0) * y * y,
                        2.0 * t(2.0) + 6.0 * t(3.0) * y,
                    ]);
                }
                let l0 = polylog(s, y);
                let l1 = polylog(s - 1.0, y);
                let l2 = polylog(s - 2.0, y);
                Ok([l0, l1 / y, (l2 - l1) / (y * y)])
            }
            None => self.series_derivatives(y),
        }
    }

    pub fn bprime(&self, y: f64) -> Result<f64, ClassError> {
        if let Some(m) = self.at_rho(y) {
            return Ok(m.bprime_at_rho);
        }
        Ok(self.derivatives(y)?[0])
    }

    pub fn bsecond(&self, y: f64) -> Result<f64, ClassError> {
        if let Some(m) = self.at_rho(y) {
            return Ok(m.bsecond_at_rho);
        }
        Ok(self.derivatives(y)?[1])
    }

    pub fn bthird(&self, y: f64) -> Result<f64, ClassError> {
        Ok(self.derivatives(y)?[2])
    }

    fn at_rho(&self, y: f64) -> Option<&SingularMetadata> {
        match (&self.closed_form, &self.metadata) {
            (None, Some(m)) if y == m.rho_b => Some(m),
            _ => None,
        }
    }

    // Truncated series plus a k^{-5/2} tail anchored at the last stored weight.
    fn series_derivatives(&self, y: f64) -> Result<[f64; 3], ClassError> {
        let Some(meta) = &self.metadata else {
            return Err(ClassError::NoMetadata(self.name.clone()));
        };
        let kmax = self.max_k();
        let mut out = [0.0; 3];
        for k in 1..=kmax {
            let b = self.beta[k];
            let kf = k as f64;
            out[0] += b * y.powi(k as i32);
            out[1] += b * kf * y.powi(k as i32 - 1);
            if k >= 2 {
                out[2] += b * kf * (kf - 1.0) * y.powi(k as i32 - 2);
            }
        }
        if y == 0.0 {
            return Ok(out);
        }
        let rho = meta.rho_b;
        let anchor = self.beta[kmax] * rho.powi(kmax as i32) * (kmax as f64).powf(2.5);
        let r = (y / rho).min(1.0);
        let k0 = kmax as u64 + 1;
        let tail = |alpha: f64| if r == 1.0 && alpha <= 1.0 { f64::INFINITY } else { power_geometric_tail(alpha, k0, r) };
        out[0] += anchor * tail(2.5);
        out[1] += anchor * tail(1.5) / y;
        out[2] += anchor * (tail(0.5) - tail(1.5)) / (y * y);
        Ok(out)
    }

    /// `u * B'(y)` as the Poisson mean of the number of blocks in `Set(B')`.
    pub fn poisson_mean(&self, u: f64, y: f64) -> Result<f64, ClassError> {
        Ok(u * self.bprime(y)?)
    }

    /// Does the connected graph `g` belong to the class (all blocks in `B`)?
    pub fn contains_graph(&self, g: &LabelledGraph) -> Result<bool, ClassError> {
        let tools = self.tools.as_ref().ok_or_else(|| ClassError::NoBlockTools(self.name.clone()))?;
        if !g.is_connected() {
            return Ok(false);
        }
        if g.vertex_count() == 1 {
            return Ok(true);
        }
        let d = block_decompose(g).expect("connected graph decomposes");
        Ok(d.blocks.iter().all(|b| {
            let sub = crate::graph::consistent_relabel(&g.without_root(), &b.vertices).expect("block vertices exist");
            tools.kind.contains_block(&sub)
        }))
    }

    pub fn block_tools(&self) -> Result<&BlockTools, ClassError> {
        self.tools.as_ref().ok_or_else(|| ClassError::NoBlockTools(self.name.clone()))
    }
}

/// `B'` as a truncated series, entry `k` equal to `b'_k / k!`.
pub fn bprime_series<T: Coefficient>(class: &BlockClassSpec, order: usize, domain: NumericDomain) -> Result<EgfSeries<T>, ClassError> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let c = if let Some(count) = class.exact_count(k) {
            T::from_rational_in(domain, &BigRational::new(count.into(), factorial(k)))
        } else if domain.is_exact() {
            return Err(match class.closed_form {
                Some(ClosedForm::Polylog { .. }) => ClassError::NotExact(class.name.clone()),
                _ => class.insufficient(order),
            });
        } else if let Some(ClosedForm::Polylog { exponent }) = class.closed_form {
            T::real_power_in(domain, k as u64, -exponent).expect("numeric domain")
        } else {
            let b = class.beta(k).ok_or_else(|| class.insufficient(order))?;
            float_in::<T>(domain, b)
        };
        coeffs.push(c);
    }
    Ok(EgfSeries::new(domain, coeffs)?)
}

// f64 weights convert exactly through their binary expansion.
fn float_in<T: Coefficient>(domain: NumericDomain, x: f64) -> T {
    T::from_rational_in(domain, &BigRational::from_float(x).expect("finite weight"))
}

/// `Phi = exp(u B')` truncated at `order`.
pub fn phi_series<T: Coefficient>(class: &BlockClassSpec, u: &T, order: usize, domain: NumericDomain) -> Result<EgfSeries<T>, ClassError> {
    Ok(bprime_series::<T>(class, order, domain)?.scale(u).exp()?)
}

/// One line of a validation report.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub class: String,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(ValidationCheck { name: name.into(), passed, detail });
    }
}

/// Options for [`validate_class`].
#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Largest derived size compared against block enumeration.
    pub enumeration_cap: usize,
    /// Relative tolerance for the coefficient tail fit.
    pub tail_tolerance: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { enumeration_cap: 4, tail_tolerance: 0.01 }
    }
}

pub fn validate_class(class: &BlockClassSpec, opts: &ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport { class: class.name.clone(), checks: Vec::new() };
    let kmax = if class.unbounded_weights() || matches!(class.closed_form, Some(ClosedForm::Polylog { .. })) {
        10_000
    } else {
        class.max_k()
    };
    let negative = (1..=kmax).find(|&k| class.beta(k).is_none_or(|b| b < 0.0 || !b.is_finite()));
    report.push("nonnegative weights", negative.is_none(), match negative {
        Some(k) => format!("weight {k} negative or missing"),
        None => format!("checked k <= {kmax}"),
    });

    if let Some(tools) = &class.tools {
        let cap = opts.enumeration_cap.min(kmax).min(MAX_ENUMERATED_BLOCK);
        let mut bad = Vec::new();
        for k in 1..=cap {
            let n = tools.enumerate_derived(k).map(|l| l.len()).unwrap_or(0);
            let expected = class.exact_count(k);
            if expected.as_ref() != Some(&BigUint::from(n)) {
                bad.push(format!("k={k}: enumerated {n}, declared {expected:?}"));
            }
        }
        report.push("weights match block enumeration", bad.is_empty(), if bad.is_empty() { format!("k <= {cap}") } else { bad.join("; ") });
    }

    if let Some(cf) = class.closed_form {
        let rho = class.rho_b();
        let top = if rho.is_finite() { 0.9 * rho } else { 0.9 };
        let mut worst: f64 = 0.0;
        for i in 1..=9 {
            let y = top * i as f64 / 9.0;
            let closed = class.derivatives(y).map(|d| d[0]).unwrap_or(f64::NAN);
            let mut series = 0.0;
            for k in (1..=4000).rev() {
                series = series * y + class.beta(k).unwrap_or(0.0);
            }
            series *= y;
            worst = worst.max(((closed - series) / closed.max(1e-300)).abs());
        }
        report.push("closed form matches series", worst < 1e-10, format!("{cf:?}: worst relative gap {worst:.3e}"));
    }

    if let Some(meta) = &class.metadata {
        let rho = meta.rho_b;
        let positive = rho > 0.0 && meta.bprime_at_rho > 0.0;
        report.push("metadata positive", positive, format!("rho_B = {rho}, B'(rho_B) = {}", meta.bprime_at_rho));
        let top = kmax.min(10_000);
        let (mut s1, mut s2) = (0.0, 0.0);
        for k in 1..=top {
            let b = class.beta(k).unwrap_or(0.0);
            s1 += b * rho.powi(k as i32);
            s2 += b * k as f64 * rho.powi(k as i32 - 1);
        }
        let ok = s1 <= meta.bprime_at_rho * (1.0 + 1e-12) && s2 <= meta.bsecond_at_rho * (1.0 + 1e-12);
        report.push(
            "partial sums below declared values",
            ok,
            format!("sum B' = {s1:.10}, declared {}; sum B'' = {s2:.10}, declared {}", meta.bprime_at_rho, meta.bsecond_at_rho),
        );
        if let Some(kc) = meta.tail_constant() {
            let lo = (top / 10).max(1);
            let mut worst: f64 = 0.0;
            for k in lo..=top {
                let b = class.beta(k).unwrap_or(0.0);
                let fit = b * rho.powi(k as i32) * (k as f64).powf(2.5);
                worst = worst.max((fit / kc - 1.0).abs());
            }
            let finite_second = meta.bsecond_at_rho.is_finite();
            report.push(
                "coefficient tail fit",
                worst <= opts.tail_tolerance && finite_second,
                format!("k in [{lo}, {top}]: worst relative deviation {worst:.3e}, B''(rho_B) finite: {finite_second}"),
            );
        }
    }
    report
}

/// Trees: every block is a single edge.
pub fn trees() -> BlockClassSpec {
    BlockClassSpec::from_exact_counts("trees", &[BigUint::from(1u32)]).with_closed_form(ClosedForm::SingleEdge).with_blocks(BlockKind::SingleEdge)
}

/// Cacti: every block is an edge or a cycle; `b'_k = k!/2` for `k >= 2`.
pub fn cacti() -> BlockClassSpec {
    BlockClassSpec::from_ordinary_weights("cacti", &[]).with_closed_form(ClosedForm::Cactus).with_blocks(BlockKind::Cycles)
}

/// Abstract class with `b'_k / k! = k^{-5/2}`.
pub fn polylog_class() -> BlockClassSpec {
    let s = 2.5;
    let zeta52 = crate::numeric::special::zeta(s);
    let zeta32 = crate::numeric::special::zeta(s - 1.0);
    BlockClassSpec::from_ordinary_weights("polylog", &[]).with_closed_form(ClosedForm::Polylog { exponent: s }).with_metadata(SingularMetadata {
        rho_b: 1.0,
        bprime_at_rho: zeta52,
        bsecond_at_rho: zeta32,
        c_b: Some(gamma_neg_three_halves()),
        singular_exponent: 1.5,
        provenance: "zeta(5/2), zeta(3/2) and Gamma(-3/2) from the exact coefficient law".into(),
    })
}

/// EGF counts of 2-connected planar graphs on 2..=7 vertices.
pub const PLANAR_DERIVED_COUNTS: [u64; 6] = [1, 1, 10, 237, 10707, 774924];

/// EGF counts of 2-connected graphs on 2..=7 vertices.
pub const ALL_DERIVED_COUNTS: [u64; 6] = [1, 1, 10, 238, 11368, 1014888];

/// Radius of convergence of the 2-connected planar EGF (literature value).
pub const PLANAR_RHO_B: f64 = 0.038_191_097_6;
/// Radius of convergence of the connected planar EGF (literature value).
pub const PLANAR_RHO: f64 = 0.036_728_412_5;
/// Critical weight of the planar class as published; used to back out `B''(rho_B)`.
pub const PLANAR_U_C: f64 = 24.837;

/// Planar graphs, with weights counted by brute force and literature metadata.
///
/// `B'(rho_B) = ln(rho_B / rho)` follows from the uniform (`u = 1`) case.
/// `B''(rho_B)` has no independent literature value here and is taken as
/// `1 / (u_C rho_B)`.
pub fn planar() -> BlockClassSpec {
    let counts: Vec<BigUint> = PLANAR_DERIVED_COUNTS.iter().map(|&c| BigUint::from(c)).collect();
    BlockClassSpec::from_exact_counts("planar", &counts).with_blocks(BlockKind::Planar).with_metadata(SingularMetadata {
        rho_b: PLANAR_RHO_B,
        bprime_at_rho: (PLANAR_RHO_B / PLANAR_RHO).ln(),
        bsecond_at_rho: 1.0 / (PLANAR_U_C * PLANAR_RHO_B),
        c_b: None,
        singular_exponent: 1.5,
        provenance: "rho_B and rho from the planar enumeration literature; B''(rho_B) backed out of the published u_C".into(),
    })
}

/// All connected graphs (every 2-connected graph is a block). Enumeration only.
pub fn all_graphs() -> BlockClassSpec {
    let counts: Vec<BigUint> = ALL_DERIVED_COUNTS.iter().map(|&c| BigUint::from(c)).collect();
    BlockClassSpec::from_exact_counts("all-graphs", &counts).with_blocks(BlockKind::All)
}

/// Shipped class by name.
pub fn by_name(name: &str) -> Option<BlockClassSpec> {
    match name.to_ascii_lowercase().as_str() {
        "trees" => Some(trees()),
        "cacti" => Some(cacti()),
        "polylog" => Some(polylog_class()),
        "planar" => Some(planar()),
        "all-graphs" | "all" => Some(all_graphs()),
        _ => None,
    }
}

/// On-disk class description.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ClassFile {
    pub name: String,
    #[serde(default, rename = "abstract")]
    pub is_abstract: Option<bool>,
    /// Block family for concrete classes.
    pub blocks: Option<BlockKind>,
    pub closed_form: Option<ClosedForm>,
    /// EGF counts `b'_1, b'_2, ...`; integers or decimal strings for big values.
    pub weights: Option<Vec<toml::Value>>,
    /// Ordinary coefficients `b'_k / k!`.
    pub ordinary_weights: Option<Vec<f64>>,
    /// CSV file with columns `k, b'_k`, relative to the class file.
    pub weights_csv: Option<String>,
    pub metadata: Option<SingularMetadata>,
}

impl ClassFile {
    pub fn load(path: &Path) -> Result<BlockClassSpec, ClassError> {
        let text = std::fs::read_to_string(path).map_err(|e| ClassError::File(format!("{}: {e}", path.display())))?;
        let file: ClassFile = toml::from_str(&text).map_err(|e| ClassError::File(e.to_string()))?;
        file.into_spec(path.parent())
    }

    pub fn into_spec(self, base: Option<&Path>) -> Result<BlockClassSpec, ClassError> {
        let mut spec = if let Some(ws) = &self.weights {
            let counts = ws
                .iter()
                .map(|v| match v {
                    toml::Value::Integer(i) if *i >= 0 => Ok(BigUint::from(*i as u64)),
                    toml::Value::String(s) => s.parse::<BigUint>().map_err(|e| ClassError::File(format!("weight {s:?}: {e}"))),
                    other => Err(ClassError::File(format!("weight {other} is not a nonnegative integer"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            BlockClassSpec::from_exact_counts(&self.name, &counts)
        } else if let Some(csv) = &self.weights_csv {
            let path = base.map_or_else(|| Path::new(csv).to_path_buf(), |b| b.join(csv));
            let text = std::fs::read_to_string(&path).map_err(|e| ClassError::File(format!("{}: {e}", path.display())))?;
            let mut rows: HashMap<usize, BigUint> = HashMap::new();
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('k')) {
                let (k, c) = line.split_once(',').ok_or_else(|| ClassError::File(format!("bad CSV row {line:?}")))?;
                let k: usize = k.trim().parse().map_err(|_| ClassError::File(format!("bad k in {line:?}")))?;
                let c: BigUint = c.trim().parse().map_err(|_| ClassError::File(format!("bad weight in {line:?}")))?;
                rows.insert(k, c);
            }
            let kmax = rows.keys().copied().max().unwrap_or(0);
            let counts = (1..=kmax)
                .map(|k| rows.remove(&k).ok_or_else(|| ClassError::File(format!("missing weight for k = {k}"))))
                .collect::<Result<Vec<_>, _>>()?;
            BlockClassSpec::from_exact_counts(&self.name, &counts)
        } else if let Some(ord) = &self.ordinary_weights {
            BlockClassSpec::from_ordinary_weights(&self.name, ord)
        } else if self.closed_form.is_some() {
            BlockClassSpec::from_ordinary_weights(&self.name, &[])
        } else {
            return Err(ClassError::File("class needs weights, weights_csv, ordinary_weights or closed_form".into()));
        };
        if let Some(cf) = self.closed_form {
            spec = spec.with_closed_form(cf);
        }
        if let Some(kind) = self.blocks {
            spec = spec.with_blocks(kind);
        }
        if let Some(a) = self.is_abstract {
            spec.is_abstract = a;
        }
        if let Some(m) = self.metadata {
            spec = spec.with_metadata(m);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::zeta;
    use crate::numeric::{ratio, PolyU};

    #[test]
    fn shipped_weights() {
        let t = trees();
        assert_eq!(t.exact_count(1), Some(BigUint::from(1u32)));
        assert_eq!(t.exact_count(2), Some(BigUint::zero()));
        let c = cacti();
        let counts: Vec<u64> = (1..=5).map(|k| c.exact_count(k).unwrap().to_u64().unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 3, 12, 60]);
        let p = planar();
        assert_eq!(p.exact_count(3), Some(BigUint::from(10u32)));
    }

    #[test]
    fn series_forms() {
        let s: EgfSeries<BigRational> = bprime_series(&trees(), 3, NumericDomain::ExactRational).unwrap();
        assert_eq!(s.coeffs()[1], ratio(1, 1));
        assert!(Zero::is_zero(&s.coeffs()[2]));
        let c: EgfSeries<BigRational> = bprime_series(&cacti(), 4, NumericDomain::ExactRational).unwrap();
        assert_eq!(c.coeffs()[3], ratio(1, 2));
        assert!(bprime_series::<BigRational>(&polylog_class(), 3, NumericDomain::ExactRational).is_err());
        assert!(bprime_series::<BigRational>(&planar(), 7, NumericDomain::ExactRational).is_err());
        let f: EgfSeries<f64> = bprime_series(&polylog_class(), 4, NumericDomain::Float64).unwrap();
        assert!((f.coeffs()[4] - 4f64.powf(-2.5)).abs() < 1e-16);
        // counts for the cacti decoration series at u = 1: 1, 1, 2, 7
        let phi: EgfSeries<PolyU> = phi_series(&cacti(), &PolyU::constant(ratio(1, 1)), 3, NumericDomain::ExactRationalPolyU).unwrap();
        let counts = phi.egf_counts();
        assert_eq!(counts, vec![PolyU::from_integers(&[1]), PolyU::from_integers(&[1]), PolyU::from_integers(&[2]), PolyU::from_integers(&[7])]);
    }

    #[test]
    fn closed_form_derivatives() {
        let c = cacti();
        let [b1, b2, b3] = c.derivatives(0.5).unwrap();
        assert!((b1 - 0.75).abs() < 1e-15);
        assert!((b2 - 2.5).abs() < 1e-15);
        assert!((b3 - 8.0).abs() < 1e-15);
        let p = polylog_class();
        assert!((p.bprime(1.0).unwrap() - zeta(2.5)).abs() < 1e-14);
        assert!((p.bsecond(1.0).unwrap() - zeta(1.5)).abs() < 1e-13);
        let h = 1e-5;
        let y = 0.7;
        let num = (p.bsecond(y + h).unwrap() - p.bsecond(y - h).unwrap()) / (2.0 * h);
        assert!((num - p.bthird(y).unwrap()).abs() < 1e-6);
        assert!(c.derivatives(1.5).is_err());
    }

    #[test]
    fn block_tools_counts() {
        for (class, k_max) in [(cacti(), 5), (planar(), 4), (all_graphs(), 4), (trees(), 3)] {
            let tools = class.block_tools().unwrap();
            for k in 1..=k_max {
                let n = tools.enumerate_derived(k).unwrap().len();
                assert_eq!(BigUint::from(n), class.exact_count(k).unwrap(), "{} k = {k}", class.name);
            }
        }
    }

    #[test]
    fn derived_cycle_sampler_gives_members() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let tools = cacti().tools.unwrap();
        for k in 1..6 {
            let b = tools.sample_derived(k, &mut rng).unwrap();
            assert_eq!(b.size(), k);
            assert!(tools.kind.contains_block(&b));
        }
    }

    #[test]
    fn validation() {
        let opts = ValidationOptions::default();
        let poly = validate_class(&polylog_class(), &opts);
        assert!(poly.passed(), "{poly:?}");
        assert!(validate_class(&trees(), &opts).passed());
        let fake = cacti().with_metadata(SingularMetadata {
            rho_b: 1.0,
            bprime_at_rho: 100.0,
            bsecond_at_rho: 100.0,
            c_b: Some(1.0),
            singular_exponent: 1.5,
            provenance: String::new(),
        });
        assert!(!validate_class(&fake, &opts).passed());
        let pl = validate_class(&planar(), &opts);
        assert!(pl.passed(), "{pl:?}");
    }

    #[test]
    fn class_file_roundtrip() {
        let text = r#"
name = "my-planar"
blocks = "planar"
weights = [1, 1, 10, "237"]
[metadata]
rho_b = 0.0381910976
bprime_at_rho = 0.039
bsecond_at_rho = 1.05
"#;
        let f: ClassFile = toml::from_str(text).unwrap();
        let spec = f.into_spec(None).unwrap();
        assert_eq!(spec.exact_count(4), Some(BigUint::from(237u32)));
        assert!(!spec.is_abstract);
        assert!(spec.metadata.unwrap().c_b.is_none());
    }
}
