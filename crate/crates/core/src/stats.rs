//! Monte Carlo harness: block-tree degrees, block sizes, the remainder
//! `d - m` and the scaling fits across an `n` grid.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block_tree::ranked_vertices;
use crate::classes::{by_name, BlockClassSpec, ClassError, ClassFile};
use crate::phase::{critical_u, reproduction_law_at, solve_phase, Phase, PhaseError, PhaseSolution, RemainderLaw};
use crate::sampler::{PnuSampler, RngHandle, SampleOutput, SamplerError};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Statistics of one sample. Block sizes are derived sizes (vertices minus
/// one); add one for the number of vertices of the block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockStatsRecord {
    pub n: usize,
    pub u: f64,
    pub replicate: u64,
    pub seed: u64,
    pub stream: u64,
    /// Largest tree outdegrees, decreasing.
    pub d: Vec<usize>,
    /// Largest block in the decoration of the vertex of rank `j`.
    pub m: Vec<usize>,
    /// Largest blocks of the whole graph, decreasing.
    pub lb: Vec<usize>,
    pub num_blocks: usize,
    pub root_blocks: usize,
    /// Number of blocks at the vertex of largest outdegree.
    pub blocks_at_top: usize,
    /// `sum_v d_v b_v / sum_v d_v`, the block count at a vertex chosen
    /// proportionally to its decoration size.
    pub size_biased_blocks: f64,
    pub decoration_total: usize,
    pub block_total: usize,
}

pub fn extract_block_stats(s: &SampleOutput, ranks: usize) -> BlockStatsRecord {
    let n = s.size();
    let deg = s.tree.outdegrees();
    let order = ranked_vertices(&s.tree);
    let top: Vec<usize> = order.iter().take(ranks).copied().collect();
    let d = top.iter().map(|&v| deg[v] as usize).collect();
    let m = top.iter().map(|&v| s.decorations[v].largest()).collect();
    let mut sizes = s.block_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let block_total = sizes.iter().sum();
    let lb = sizes.iter().take(ranks).copied().collect();
    let counts: Vec<usize> = s.decorations.iter().map(|x| x.block_count()).collect();
    let decoration_total: usize = s.decorations.iter().map(|x| x.total()).sum();
    let weighted: usize = counts.iter().zip(deg).map(|(&b, &d)| b * d as usize).sum();
    BlockStatsRecord {
        n,
        u: s.u,
        replicate: 0,
        seed: 0,
        stream: 0,
        d,
        m,
        lb,
        num_blocks: sizes.len(),
        root_blocks: counts.first().copied().unwrap_or(0),
        blocks_at_top: top.first().map_or(0, |&v| counts[v]),
        size_biased_blocks: if decoration_total > 0 { weighted as f64 / decoration_total as f64 } else { 0.0 },
        decoration_total,
        block_total,
    }
}

/// Weight value in a run file: a number or `"critical"`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Value(f64),
    Named(String),
}

impl WeightSpec {
    pub fn resolve(&self, class: &BlockClassSpec) -> Result<f64, StatsError> {
        match self {
            WeightSpec::Value(u) => Ok(*u),
            WeightSpec::Named(s) if s == "critical" || s == "u_c" => Ok(critical_u(class)?),
            WeightSpec::Named(s) => Err(StatsError::Config(format!("unknown weight {s:?}"))),
        }
    }
}

fn default_ranks() -> usize {
    5
}

/// A batch of `P_{n,u}` samples over weights and sizes.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RunConfig {
    /// Shipped class name or path to a class file.
    pub class: String,
    pub u: Vec<WeightSpec>,
    pub n: Vec<usize>,
    pub replicates: u64,
    pub seed: u64,
    #[serde(default = "default_ranks")]
    pub ranks: usize,
    #[serde(default)]
    pub records_csv: Option<PathBuf>,
    #[serde(default)]
    pub report_json: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, StatsError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| StatsError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), StatsError> {
        if self.n.is_empty() || self.n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StatsError::Config("n grid must be nonempty and strictly increasing".into()));
        }
        if self.n[0] == 0 {
            return Err(StatsError::Config("sizes must be positive".into()));
        }
        if self.replicates == 0 {
            return Err(StatsError::Config("replicates must be at least 1".into()));
        }
        if self.u.is_empty() {
            return Err(StatsError::Config("no weights given".into()));
        }
        Ok(())
    }

    pub fn class_spec(&self, base: Option<&Path>) -> Result<BlockClassSpec, StatsError> {
        if let Some(c) = by_name(&self.class) {
            return Ok(c);
        }
        let path = match base {
            Some(b) => b.join(&self.class),
            None => PathBuf::from(&self.class),
        };
        Ok(ClassFile::load(&path)?)
    }
}

/// Stream index of replicate `rep` at grid position `(ui, ni)`.
pub fn stream_index(ui: usize, ni: usize, rep: u64) -> u64 {
    ((ui as u64) << 48) | ((ni as u64) << 32) | rep
}

/// Samples for one weight over the whole `n` grid.
#[derive(Clone, Debug, Serialize)]
pub struct WeightRun {
    pub solution: PhaseSolution,
    pub records: Vec<BlockStatsRecord>,
}

/// Runs `replicates` samples for every `n`, in parallel over replicates.
/// The law of the block tree is computed once at the largest size.
pub fn run_weight(class: &BlockClassSpec, u: f64, ui: usize, ns: &[usize], replicates: u64, seed: u64, ranks: usize) -> Result<WeightRun, StatsError> {
    let solution = solve_phase(class, u)?;
    let nmax = *ns.iter().max().ok_or_else(|| StatsError::Insufficient("empty n grid".into()))?;
    let law = Arc::new(reproduction_law_at(class, &solution, nmax.saturating_sub(1).max(1), None)?);
    let mut records = Vec::new();
    for (ni, &n) in ns.iter().enumerate() {
        let sampler = PnuSampler::with_law(class, solution.clone(), law.clone(), n)?;
        let batch: Result<Vec<_>, StatsError> = (0..replicates)
            .into_par_iter()
            .map(|rep| {
                let handle = RngHandle::new(seed, stream_index(ui, ni, rep));
                let s = sampler.sample(&mut handle.rng())?;
                let mut r = extract_block_stats(&s, ranks);
                r.replicate = rep;
                r.seed = seed;
                r.stream = handle.stream;
                Ok(r)
            })
            .collect();
        records.extend(batch?);
    }
    Ok(WeightRun { solution, records })
}

/// One numeric check of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    /// Relative tolerance, or absolute when `absolute` is set.
    pub tolerance: f64,
    pub absolute: bool,
    pub passed: bool,
}

impl Check {
    pub fn relative(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, target, tolerance, absolute: false, passed: ((value - target) / target).abs() <= tolerance }
    }

    pub fn absolute(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, target, tolerance, absolute: true, passed: (value - target).abs() <= tolerance }
    }
}

/// Per-`n` summary of one statistic.
#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub mean: f64,
    pub std_err: f64,
    pub q99: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub statistic: String,
    pub phase: Phase,
    pub u: f64,
    pub grid: Vec<GridPoint>,
    pub checks: Vec<Check>,
}

impl FitReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((v.len() as f64 - 1.0) * q).round() as usize;
    v[idx]
}

/// Least-squares slope and intercept.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn grid<F: Fn(&BlockStatsRecord) -> f64>(records: &[BlockStatsRecord], f: F) -> Vec<GridPoint> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let xs: Vec<f64> = records.iter().filter(|r| r.n == n).map(&f).collect();
            let (mean, std_err) = mean_se(&xs);
            GridPoint { n, mean, std_err, q99: quantile(&xs, 0.99) }
        })
        .collect()
}

fn check_grid(grid: &[GridPoint], min_points: usize) -> Result<(), StatsError> {
    if grid.len() < min_points {
        return Err(StatsError::Insufficient(format!("{} grid points, {min_points} needed", grid.len())));
    }
    Ok(())
}

/// Slope of `ln(mean)` against `ln(n)`.
pub fn log_log_slope(grid: &[GridPoint]) -> f64 {
    let x: Vec<f64> = grid.iter().map(|g| (g.n as f64).ln()).collect();
    let y: Vec<f64> = grid.iter().map(|g| g.mean.ln()).collect();
    ols(&x, &y).0
}

/// `ln n - (5/2) ln ln n`, the size-dependent part of the supercritical law.
pub fn log_law_abscissa(n: usize) -> f64 {
    let l = (n as f64).ln();
    l - 2.5 * l.ln()
}

/// Tolerances of the scaling fits.
#[derive(Clone, Debug, Serialize)]
pub struct FitTolerances {
    pub linear_constant: f64,
    pub second_slope: f64,
    pub critical_slope: f64,
    pub log_coefficient: f64,
}

impl Default for FitTolerances {
    fn default() -> Self {
        FitTolerances { linear_constant: 0.05, second_slope: 0.10, critical_slope: 0.05, log_coefficient: 0.15 }
    }
}

/// Largest-statistic fits for one phase. `first` and `second` select the
/// rank-1 and rank-2 statistics (tree degrees or block sizes).
fn scaling_check(
    statistic: &str,
    records: &[BlockStatsRecord],
    solution: &PhaseSolution,
    rho_b: f64,
    tol: &FitTolerances,
    first: impl Fn(&BlockStatsRecord) -> f64,
    second: impl Fn(&BlockStatsRecord) -> f64,
) -> Result<FitReport, StatsError> {
    let g1 = grid(records, &first);
    check_grid(&g1, 3)?;
    let mut checks = Vec::new();
    let mut out_grid = g1.clone();
    match solution.phase {
        Phase::Subcritical => {
            let last = g1.last().unwrap();
            let target = 1.0 - solution.u / solution.u_c;
            checks.push(Check::relative(&format!("mean {statistic}1/n at n = {}", last.n), last.mean / last.n as f64, target, tol.linear_constant));
            let g2 = grid(records, &second);
            checks.push(Check::absolute(&format!("log-log slope of {statistic}2"), log_log_slope(&g2), 2.0 / 3.0, tol.second_slope));
            out_grid.extend(g2);
        }
        Phase::Critical => {
            checks.push(Check::absolute(&format!("log-log slope of {statistic}1"), log_log_slope(&g1), 2.0 / 3.0, tol.critical_slope));
        }
        Phase::Supercritical => {
            let x: Vec<f64> = g1.iter().map(|g| log_law_abscissa(g.n)).collect();
            let y: Vec<f64> = g1.iter().map(|g| g.mean).collect();
            let (slope, _) = ols(&x, &y);
            let target = 1.0 / (rho_b / solution.y_u).ln();
            checks.push(Check::relative(&format!("{statistic}1 coefficient of ln n - 5/2 ln ln n"), slope, target, tol.log_coefficient));
        }
    }
    Ok(FitReport { statistic: statistic.into(), phase: solution.phase, u: solution.u, grid: out_grid, checks })
}

pub fn degree_scaling_check(records: &[BlockStatsRecord], solution: &PhaseSolution, rho_b: f64, tol: &FitTolerances) -> Result<FitReport, StatsError> {
    scaling_check("d", records, solution, rho_b, tol, |r| r.d.first().copied().unwrap_or(0) as f64, |r| r.d.get(1).copied().unwrap_or(0) as f64)
}

pub fn block_size_phase_check(records: &[BlockStatsRecord], solution: &PhaseSolution, rho_b: f64, tol: &FitTolerances) -> Result<FitReport, StatsError> {
    scaling_check("LB", records, solution, rho_b, tol, |r| r.lb.first().copied().unwrap_or(0) as f64, |r| r.lb.get(1).copied().unwrap_or(0) as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderReport {
    pub n: usize,
    pub samples: usize,
    pub empirical: Vec<f64>,
    pub total_variation: f64,
    pub p0_empirical: f64,
    pub p0_law: f64,
    pub q99: f64,
}

/// Empirical law of `d1 - m1` at size `n` against the law of `R`; mass of
/// either side beyond the table is lumped into one cell.
pub fn gibbs_remainder_check(records: &[BlockStatsRecord], n: usize, law: &RemainderLaw) -> Result<RemainderReport, StatsError> {
    let diffs: Vec<usize> = records.iter().filter(|r| r.n == n).map(|r| r.d[0] - r.m[0]).collect();
    if diffs.is_empty() {
        return Err(StatsError::Insufficient(format!("no records at n = {n}")));
    }
    let cap = law.probs.len();
    let mut counts = vec![0usize; cap + 1];
    for &x in &diffs {
        counts[x.min(cap)] += 1;
    }
    let total = diffs.len() as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let mut tv = 0.0;
    for r in 0..cap {
        tv += (empirical[r] - law.probs[r]).abs();
    }
    tv += (empirical[cap] - law.tail_mass).abs();
    let as_f: Vec<f64> = diffs.iter().map(|&x| x as f64).collect();
    Ok(RemainderReport {
        n,
        samples: diffs.len(),
        p0_empirical: empirical[0],
        p0_law: law.probs[0],
        empirical,
        total_variation: 0.5 * tv,
        q99: quantile(&as_f, 0.99),
    })
}

/// Three readings of "the expected number of blocks in a decoration".
#[derive(Clone, Debug, Serialize)]
pub struct DecorationCountProbe {
    pub n: usize,
    pub uniform_vertex: (f64, f64),
    pub size_biased_vertex: (f64, f64),
    pub top_vertex: (f64, f64),
    pub u_over_uc: f64,
    pub poisson_mean: f64,
}

pub fn decoration_count_probe(records: &[BlockStatsRecord], n: usize, u_over_uc: f64, poisson_mean: f64) -> Result<DecorationCountProbe, StatsError> {
    let rs: Vec<&BlockStatsRecord> = records.iter().filter(|r| r.n == n).collect();
    if rs.is_empty() {
        return Err(StatsError::Insufficient(format!("no records at n = {n}")));
    }
    let uniform: Vec<f64> = rs.iter().map(|r| r.num_blocks as f64 / r.n as f64).collect();
    let biased: Vec<f64> = rs.iter().map(|r| r.size_biased_blocks).collect();
    let top: Vec<f64> = rs.iter().map(|r| r.blocks_at_top as f64).collect();
    Ok(DecorationCountProbe { n, uniform_vertex: mean_se(&uniform), size_biased_vertex: mean_se(&biased), top_vertex: mean_se(&top), u_over_uc, poisson_mean })
}

#[derive(Clone, Debug, Serialize)]
struct CsvRow {
    n: usize,
    u: f64,
    replicate: u64,
    seed: u64,
    stream: u64,
    d: String,
    m: String,
    lb: String,
    num_blocks: usize,
    root_blocks: usize,
    blocks_at_top: usize,
    size_biased_blocks: f64,
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_records_csv<W: std::io::Write>(records: &[BlockStatsRecord], out: W) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow {
            n: r.n,
            u: r.u,
            replicate: r.replicate,
            seed: r.seed,
            stream: r.stream,
            d: join(&r.d),
            m: join(&r.m),
            lb: join(&r.lb),
            num_blocks: r.num_blocks,
            root_blocks: r.root_blocks,
            blocks_at_top: r.blocks_at_top,
            size_biased_blocks: r.size_biased_blocks,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Everything a run produces.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub class: String,
    pub runs: Vec<WeightReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub solution: PhaseSolution,
    pub degrees: Option<FitReport>,
    pub block_sizes: Option<FitReport>,
    pub decoration_counts: Option<DecorationCountProbe>,
}

/// Execute a run file; returns all records and the fit report. Fits need
/// at least three grid sizes and are skipped otherwise.
pub fn run_config(cfg: &RunConfig, base: Option<&Path>) -> Result<(Vec<BlockStatsRecord>, RunReport), StatsError> {
    cfg.validate()?;
    let class = cfg.class_spec(base)?;
    let tol = FitTolerances::default();
    let mut all = Vec::new();
    let mut runs = Vec::new();
    for (ui, w) in cfg.u.iter().enumerate() {
        let u = w.resolve(&class)?;
        let run = run_weight(&class, u, ui, &cfg.n, cfg.replicates, cfg.seed, cfg.ranks)?;
        let rho_b = class.rho_b();
        let fits = cfg.n.len() >= 3;
        let degrees = if fits { Some(degree_scaling_check(&run.records, &run.solution, rho_b, &tol)?) } else { None };
        let block_sizes = if fits { Some(block_size_phase_check(&run.records, &run.solution, rho_b, &tol)?) } else { None };
        let decoration_counts = if run.solution.phase != Phase::Supercritical && run.solution.u_c > 0.0 {
            let bp = class.bprime(rho_b)?;
            Some(decoration_count_probe(&run.records, *cfg.n.last().unwrap(), u / run.solution.u_c, u * bp)?)
        } else {
            None
        };
        all.extend(run.records);
        runs.push(WeightReport { solution: run.solution, degrees, block_sizes, decoration_counts });
    }
    Ok((all, RunReport { class: class.name.clone(), runs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block_tree::{build_block_tree, Decoration};
    use crate::classes::{polylog_class, trees};
    use crate::graph::LabelledGraph;
    use crate::sampler::{DecorationSample, PnuSampler};

    #[test]
    fn bowtie_record() {
        let g: LabelledGraph = "5;1,2 1,3 2,3 3,4 3,5 4,5;3".parse().unwrap();
        let (t, _) = build_block_tree(&g).unwrap();
        let s = SampleOutput {
            tree: t.tree.clone(),
            decorations: t.decorations.iter().cloned().map(DecorationSample::Blocks).collect(),
            graph: Some(g),
            u: 1.0,
            n: Some(5),
            x: None,
        };
        let r = extract_block_stats(&s, 3);
        assert_eq!(r.d[0], 4);
        assert_eq!(r.m[0], 2);
        assert_eq!(r.lb, vec![2, 2]);
        assert_eq!(r.block_total, 4);
    }

    #[test]
    fn single_vertex_record() {
        let s = SampleOutput {
            tree: crate::block_tree::PlaneTree::single_vertex(),
            decorations: vec![DecorationSample::Blocks(Decoration::empty())],
            graph: None,
            u: 1.0,
            n: Some(1),
            x: None,
        };
        let r = extract_block_stats(&s, 2);
        assert!(r.lb.is_empty());
        assert_eq!(r.num_blocks, 0);
    }

    #[test]
    fn trees_records() {
        let sampler = PnuSampler::new(&trees(), 1.0, 40).unwrap();
        let mut rng = RngHandle::new(3, 0).rng();
        let s = sampler.sample(&mut rng).unwrap();
        let r = extract_block_stats(&s, 5);
        assert_eq!(r.num_blocks, 39);
        assert_eq!(r.lb[0], 1);
        // every block is an edge, so b_v = d_v
        let sq: u32 = s.tree.outdegrees().iter().map(|d| d * d).sum();
        assert!((r.size_biased_blocks - sq as f64 / 39.0).abs() < 1e-12);
        assert_eq!(r.blocks_at_top, r.d[0]);
    }

    #[test]
    fn run_is_reproducible() {
        let cfg = RunConfig {
            class: "polylog".into(),
            u: vec![WeightSpec::Value(0.2), WeightSpec::Named("critical".into())],
            n: vec![50, 100, 200],
            replicates: 8,
            seed: 99,
            ranks: 3,
            records_csv: None,
            report_json: None,
        };
        let (a, rep) = run_config(&cfg, None).unwrap();
        let (b, _) = run_config(&cfg, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 48);
        assert_eq!(rep.runs[1].solution.phase, Phase::Critical);
        let mut buf = Vec::new();
        write_records_csv(&a, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 49);
    }

    #[test]
    fn config_validation() {
        let bad: RunConfig = toml::from_str("class = \"polylog\"\nu = [0.2]\nn = [100, 10]\nreplicates = 3\nseed = 1\n").unwrap();
        assert!(bad.validate().is_err());
        let ok: RunConfig = toml::from_str("class = \"polylog\"\nu = [0.2, \"critical\"]\nn = [10, 100]\nreplicates = 3\nseed = 1\n").unwrap();
        assert!(ok.validate().is_ok());
        assert_eq!(ok.ranks, 5);
        assert!((ok.u[1].resolve(&polylog_class()).unwrap() - critical_u(&polylog_class()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn fitting_helpers() {
        let (s, b) = ols(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((s - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        let g: Vec<GridPoint> = [10usize, 100, 1000].iter().map(|&n| GridPoint { n, mean: (n as f64).powf(2.0 / 3.0), std_err: 0.0, q99: 0.0 }).collect();
        assert!((log_log_slope(&g) - 2.0 / 3.0).abs() < 1e-12);
    }
}
