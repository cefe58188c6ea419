use std::collections::HashMap;

use blockweight::classes::{cacti, polylog_class, trees};
use blockweight::graph::LabelledGraph;
use blockweight::phase::{reproduction_law, solve_phase};
use blockweight::sampler::{bienayme_conditioned, DecorationSample, DecorationTable, ExactSmallLaw, PnuSampler, RngHandle, DEFAULT_DRAW_BUDGET};
use rayon::prelude::*;

fn parallel_counts<F>(total: usize, seed: u64, cells: usize, draw: F) -> Vec<u64>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> usize + Sync,
{
    (0..64u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngHandle::new(seed, c).rng();
            let mut counts = vec![0u64; cells];
            for _ in 0..total / 64 {
                counts[draw(&mut rng)] += 1;
            }
            counts
        })
        .reduce(|| vec![0u64; cells], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

fn tv(a: &[u64], b: &[u64]) -> f64 {
    let (sa, sb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    0.5 * a.iter().zip(b).map(|(&x, &y)| (x as f64 / sa - y as f64 / sb).abs()).sum::<f64>()
}

#[test]
fn pipeline_agrees_with_exact_sampler() {
    // 1810 rooted cacti at u = 1; 10^7 draws per side keeps the sampling
    // noise of the distance near 0.007
    let samples = 10_000_000;
    let class = cacti();
    let law = ExactSmallLaw::new(&class, 5).unwrap();
    let index: HashMap<&LabelledGraph, usize> = law.graphs.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let pnu = PnuSampler::new(&class, 1.0, 5).unwrap();
    let exact = law.sampler(1.0).unwrap();
    let a = parallel_counts(samples, 1, law.graphs.len(), |rng| index[&pnu.sample(rng).unwrap().graph.unwrap()]);
    let b = parallel_counts(samples, 2, law.graphs.len(), |rng| exact.sample_index(rng));
    let d = tv(&a, &b);
    assert!(d < 0.01, "TV = {d}");
}

#[test]
fn uniform_at_unit_weight() {
    // P_{4,1} is uniform on the rooted cacti with 4 vertices
    let class = cacti();
    let law = ExactSmallLaw::new(&class, 4).unwrap();
    let index: HashMap<&LabelledGraph, usize> = law.graphs.iter().enumerate().map(|(i, g)| (g, i)).collect();
    assert_eq!(law.graphs.len(), 124);
    let pnu = PnuSampler::new(&class, 1.0, 4).unwrap();
    let samples = 1_240_000;
    let counts = parallel_counts(samples, 3, law.graphs.len(), |rng| index[&pnu.sample(rng).unwrap().graph.unwrap()]);
    let e = samples as f64 / 124.0;
    let chi2: f64 = counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    // 123 degrees of freedom; the 0.999 quantile is about 181
    assert!(chi2 < 181.0, "chi-square {chi2}");
}

#[test]
fn decorations_uniform_given_size() {
    // size-d elements of Set(B') for cacti: 1, 1, 2, 7 for d = 0..3
    let oracle = [1usize, 1, 2, 7];
    let law = reproduction_law(&cacti(), 1.0, 8, None).unwrap();
    let table = DecorationTable::new(&cacti(), &law).unwrap();
    let mut rng = RngHandle::new(4, 0).rng();
    for d in 1..=3 {
        let samples = 70_000;
        let mut counts: HashMap<String, u64> = HashMap::new();
        for _ in 0..samples {
            let DecorationSample::Blocks(dec) = table.sample(d, &mut rng).unwrap() else { panic!("concrete class") };
            *counts.entry(format!("{dec:?}")).or_default() += 1;
        }
        assert_eq!(counts.len(), oracle[d], "d = {d}");
        let e = samples as f64 / oracle[d] as f64;
        let chi2: f64 = counts.values().map(|&o| (o as f64 - e).powi(2) / e).sum();
        // at most 6 degrees of freedom; 0.999 quantile 22.46
        assert!(chi2 < 22.46, "d = {d}, chi-square {chi2}");
    }
}

#[test]
fn root_block_count_is_not_poisson_under_conditioning() {
    // the conditioned root always carries at least one block, unlike Poisson(u B'(y))
    let class = polylog_class();
    let u = 0.2;
    let sol = solve_phase(&class, u).unwrap();
    let lambda = u * class.bprime(sol.y_u).unwrap();
    let sampler = PnuSampler::new(&class, u, 1000).unwrap();
    let mut rng = RngHandle::new(5, 0).rng();
    let samples = 2000;
    let mut counts = [0u64; 8];
    for _ in 0..samples {
        let s = sampler.sample(&mut rng).unwrap();
        counts[s.decorations[0].block_count().min(7)] += 1;
    }
    let mut pois = [0f64; 8];
    let mut p = (-lambda).exp();
    for (k, slot) in pois.iter_mut().enumerate().take(7) {
        *slot = p;
        p *= lambda / (k + 1) as f64;
    }
    pois[7] = 1.0 - pois[..7].iter().sum::<f64>();
    let dist = 0.5 * counts.iter().zip(&pois).map(|(&c, &q)| (c as f64 / samples as f64 - q).abs()).sum::<f64>();
    assert!(dist > 0.3, "distance to Poisson {dist}");
}

#[test]
fn rejection_and_divide_and_conquer_agree() {
    // Poisson(1) trees on 3 vertices: outdegrees (2,0,0) w.p. 1/3, (1,1,0) w.p. 2/3
    let law = reproduction_law(&trees(), 1.0, 2, None).unwrap();
    let mut rng = RngHandle::new(6, 0).rng();
    let n = 60_000;
    let twos = (0..n).filter(|_| bienayme_conditioned(&law, 3, DEFAULT_DRAW_BUDGET, &mut rng).unwrap().0.outdegrees()[0] == 2).count();
    let sd = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    assert!((twos as f64 - n as f64 / 3.0).abs() < 4.0 * sd);

    let class = polylog_class();
    let law = reproduction_law(&class, 0.6, 29, None).unwrap();
    let sampler = PnuSampler::new(&class, 0.6, 30).unwrap();
    let samples = 40_000;
    let mut a = vec![0u64; 30];
    let mut b = vec![0u64; 30];
    for _ in 0..samples {
        let t = bienayme_conditioned(&law, 30, DEFAULT_DRAW_BUDGET, &mut rng).unwrap().0;
        a[*t.outdegrees().iter().max().unwrap() as usize] += 1;
        b[*sampler.sample(&mut rng).unwrap().tree.outdegrees().iter().max().unwrap() as usize] += 1;
    }
    let d = tv(&a, &b);
    assert!(d < 0.03, "TV of largest outdegree {d}");
}
