use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::SamplerError;
use crate::block_tree::PlaneTree;
use crate::phase::ReproductionLaw;

/// Default cap on outdegree draws for [`bienayme_conditioned`].
pub const DEFAULT_DRAW_BUDGET: u64 = 1_000_000_000;

/// Rotate an outdegree sequence summing to `len - 1` into the unique cyclic
/// shift that encodes a plane tree.
pub fn cycle_lemma_rotation(degrees: &[u32]) -> Vec<u32> {
    let mut s: i64 = 0;
    let mut min = i64::MAX;
    let mut arg = 0;
    for (i, &d) in degrees.iter().enumerate() {
        s += d as i64 - 1;
        if s < min {
            min = s;
            arg = i;
        }
    }
    let start = (arg + 1) % degrees.len();
    degrees[start..].iter().chain(&degrees[..start]).copied().collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RejectionStats {
    pub attempts: u64,
    pub draws: u64,
}

/// Bienaymé tree conditioned on `n` vertices by rejection: `n` outdegrees
/// from the `(n-1)`-truncated law until they sum to `n - 1`, then the cycle
/// lemma rotation.
pub fn bienayme_conditioned<R: Rng + ?Sized>(law: &ReproductionLaw, n: usize, budget: u64, rng: &mut R) -> Result<(PlaneTree, RejectionStats), SamplerError> {
    if n == 0 {
        return Err(SamplerError::Impossible(0));
    }
    if n == 1 {
        return Ok((PlaneTree::single_vertex(), RejectionStats { attempts: 1, draws: 1 }));
    }
    if !(law.prob(0) > 0.0) {
        return Err(SamplerError::NoLeaves);
    }
    let support = (n - 1).min(law.cap());
    let weights: Vec<f64> = law.probs[..=support].to_vec();
    let alias = WeightedAliasIndex::new(weights).map_err(|e| SamplerError::Unsupported(format!("alias table: {e}")))?;
    let mut stats = RejectionStats::default();
    let mut seq = vec![0u32; n];
    loop {
        stats.attempts += 1;
        let mut sum = 0usize;
        let mut ok = true;
        for slot in seq.iter_mut() {
            let d = alias.sample(rng);
            *slot = d as u32;
            sum += d;
            stats.draws += 1;
            if sum > n - 1 {
                ok = false;
                break;
            }
        }
        if ok && sum == n - 1 {
            let tree = PlaneTree::from_outdegrees(cycle_lemma_rotation(&seq))?;
            return Ok((tree, stats));
        }
        if stats.draws >= budget {
            return Err(SamplerError::BudgetExhausted(budget));
        }
    }
}

/// Exact sampler of `n` i.i.d. outdegrees conditioned on summing to `n - 1`.
///
/// The law is first tilted by `exp(theta k)` so that its mean is `(n-1)/n`
/// (the conditional law does not change), then the sequence is split
/// recursively in halves, the sum of the left half being drawn from
/// `P_{m1}(a) P_{m2}(s - a)`. The partial-sum laws `P_m` are truncated
/// convolution powers computed by FFT.
#[derive(Clone, Debug)]
pub struct ConditionedSumSampler {
    n: usize,
    target: usize,
    theta: f64,
    powers: BTreeMap<usize, Vec<f64>>,
}

impl ConditionedSumSampler {
    pub fn new(law: &ReproductionLaw, n: usize) -> Result<Self, SamplerError> {
        if n == 0 {
            return Err(SamplerError::Impossible(0));
        }
        if !(law.prob(0) > 0.0) {
            return Err(SamplerError::NoLeaves);
        }
        let target = n - 1;
        let support = target.min(law.cap());
        let logp: Vec<f64> = law.probs[..=support].iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();
        let theta = if n == 1 { 0.0 } else { tilt_for_mean(&logp, target as f64 / n as f64) };
        let base = tilted(&logp, theta, target);
        let mut needed = Vec::new();
        collect_sizes(n, &mut needed);
        needed.sort_unstable();
        needed.dedup();
        let mut powers: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        let mut planner = FftPlanner::new();
        for &m in &needed {
            let p = if m == 1 {
                base.clone()
            } else {
                let (m1, m2) = (m / 2, m - m / 2);
                convolve(&powers[&m1], &powers[&m2], target + 1, &mut planner)
            };
            powers.insert(m, p);
        }
        if !(powers[&n][target] > 0.0) {
            return Err(SamplerError::Impossible(n));
        }
        Ok(ConditionedSumSampler { n, target, theta, powers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Tilt parameter used internally.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Outdegree sequence in exchangeable (unrotated) order.
    pub fn sample_sequence<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        // (offset, count, sum)
        let mut stack = vec![(0usize, self.n, self.target)];
        while let Some((off, m, s)) = stack.pop() {
            if m == 1 {
                out[off] = s as u32;
                continue;
            }
            let (m1, m2) = (m / 2, m - m / 2);
            let (p1, p2) = (&self.powers[&m1], &self.powers[&m2]);
            let a = super::draw_linear((0..=s).map(|a| p1[a] * p2[s - a]), rng).expect("positive conditional mass");
            stack.push((off, m1, a));
            stack.push((off + m1, m2, s - a));
        }
        out
    }

    pub fn sample_tree<R: Rng + ?Sized>(&self, rng: &mut R) -> PlaneTree {
        let seq = self.sample_sequence(rng);
        PlaneTree::from_outdegrees(cycle_lemma_rotation(&seq)).expect("sum is n - 1")
    }
}

fn collect_sizes(m: usize, out: &mut Vec<usize>) {
    let mut frontier = vec![m];
    while let Some(m) = frontier.pop() {
        if out.contains(&m) {
            continue;
        }
        out.push(m);
        if m > 1 {
            frontier.push(m / 2);
            frontier.push(m - m / 2);
        }
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn tilted_mean(logp: &[f64], theta: f64) -> f64 {
    let lz = log_sum_exp(logp.iter().enumerate().map(|(k, &l)| l + theta * k as f64));
    logp.iter().enumerate().map(|(k, &l)| k as f64 * (l + theta * k as f64 - lz).exp()).sum()
}

fn tilt_for_mean(logp: &[f64], mean: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0, 1.0);
    while tilted_mean(logp, lo) > mean {
        lo *= 2.0;
    }
    while tilted_mean(logp, hi) < mean {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tilted_mean(logp, mid) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn tilted(logp: &[f64], theta: f64, target: usize) -> Vec<f64> {
    let lz = log_sum_exp(logp.iter().enumerate().map(|(k, &l)| l + theta * k as f64));
    let mut out = vec![0.0; target + 1];
    for (k, &l) in logp.iter().enumerate() {
        out[k] = (l + theta * k as f64 - lz).exp();
    }
    out
}

// Linear convolution truncated to `len` entries; tiny negative round-off is clamped.
fn convolve(a: &[f64], b: &[f64], len: usize, planner: &mut FftPlanner<f64>) -> Vec<f64> {
    if a.len().min(b.len()) <= 64 {
        let mut out = vec![0.0; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len.saturating_sub(i)) {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let size = (a.len() + b.len()).next_power_of_two();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);
    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).chain(std::iter::repeat(Complex::new(0.0, 0.0))).take(size).collect();
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).chain(std::iter::repeat(Complex::new(0.0, 0.0))).take(size).collect();
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa.iter().take(len).map(|c| (c.re * scale).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::trees;
    use crate::phase::reproduction_law;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotation_gives_valid_tree() {
        let seq = vec![0, 0, 2, 2, 0];
        let rot = cycle_lemma_rotation(&seq);
        assert_eq!(rot, vec![2, 2, 0, 0, 0]);
        assert!(PlaneTree::from_outdegrees(rot).is_ok());
    }

    #[test]
    fn trees_on_three_vertices() {
        // Poisson(1) weights: (2,0,0) has e^-3/2, (1,1,0) e^-3; two rotations
        // of each sequence class give 1/3 versus 2/3.
        let law = reproduction_law(&trees(), 1.0, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dc = ConditionedSumSampler::new(&law, 3).unwrap();
        let n = 60_000;
        let (mut rej, mut div) = (0, 0);
        for _ in 0..n {
            if bienayme_conditioned(&law, 3, DEFAULT_DRAW_BUDGET, &mut rng).unwrap().0.outdegrees() == [2, 0, 0] {
                rej += 1;
            }
            if dc.sample_tree(&mut rng).outdegrees() == [2, 0, 0] {
                div += 1;
            }
        }
        let sd = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        assert!((rej as f64 - n as f64 / 3.0).abs() < 4.0 * sd);
        assert!((div as f64 - n as f64 / 3.0).abs() < 4.0 * sd);
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let a: Vec<f64> = (0..300).map(|k| 1.0 / (1.0 + k as f64).powf(2.5)).collect();
        let mut planner = FftPlanner::new();
        let fast = convolve(&a, &a, 300, &mut planner);
        for s in [0usize, 1, 17, 150, 299] {
            let direct: f64 = (0..=s).map(|i| a[i] * a[s - i]).sum();
            assert!((fast[s] - direct).abs() < 1e-12 * direct.max(1e-3));
        }
    }

    #[test]
    fn sequence_sums_and_size_one() {
        let law = reproduction_law(&trees(), 1.0, 200, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = ConditionedSumSampler::new(&law, 201).unwrap();
        for _ in 0..20 {
            assert_eq!(s.sample_sequence(&mut rng).iter().map(|&d| d as usize).sum::<usize>(), 200);
        }
        let one = ConditionedSumSampler::new(&law, 1).unwrap();
        assert_eq!(one.sample_tree(&mut rng), PlaneTree::single_vertex());
    }
}
