use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use blockweight::block_tree::build_block_tree;
use blockweight::classes::{bprime_series, by_name, phi_series, BlockClassSpec, ClassFile};
use blockweight::phase::{asymptotic_constants, critical_u, solve_phase};
use blockweight::sampler::{boltzmann_cstar, PnuSampler, RngHandle, SampleOutput};
use blockweight::series::{lagrange_solve, lagrange_solve_exp};
use blockweight::stats::{run_config, write_records_csv, RunConfig};
use blockweight::verify::{run_criterion, CRITERIA};
use blockweight::{BigFloat, NumericDomain, PolyU};

#[derive(Parser)]
#[command(name = "blockweight", version, about = "Block-weighted random graphs from block-stable classes")]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "BLOCKWEIGHT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of the rooted class: exact polynomials in u, or decimals at a fixed u.
    Enumerate {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Numeric weight; omit for exact polynomials.
        #[arg(long)]
        u: Option<f64>,
        /// Mantissa bits for decimal output.
        #[arg(long, default_value_t = 128)]
        precision: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase, singularity and asymptotic constants as JSON.
    Phase {
        #[arg(long)]
        class: String,
        /// A number or `critical`.
        #[arg(long)]
        u: String,
    },
    /// Samples as JSON lines, or graphs in the exchange format.
    Sample {
        #[arg(long)]
        class: String,
        #[arg(long)]
        u: String,
        /// Size of a conditioned sample.
        #[arg(long, conflicts_with = "x", required_unless_present = "x")]
        n: Option<usize>,
        /// Boltzmann parameter instead of a fixed size.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Emit::Sizes)]
        emit: Emit,
        /// Size cap for Boltzmann samples.
        #[arg(long, default_value_t = 10_000_000)]
        max_size: usize,
    },
    /// Run a statistics configuration file.
    Stats {
        config: PathBuf,
    },
    /// Run the acceptance criteria; exit code 1 if any fails.
    Verify {
        /// Criterion numbers; all when empty.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        #[arg(long, default_value_t = 20_241_017)]
        seed: u64,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Sizes,
    Tree,
    Graph,
}

fn load_class(name: &str) -> Result<BlockClassSpec> {
    if let Some(c) = by_name(name) {
        return Ok(c);
    }
    ClassFile::load(Path::new(name)).with_context(|| format!("class {name:?} is neither a shipped class nor a readable class file"))
}

fn parse_weight(s: &str, class: &BlockClassSpec) -> Result<f64> {
    if s == "critical" {
        return Ok(critical_u(class)?);
    }
    let u: f64 = s.parse().with_context(|| format!("weight {s:?}"))?;
    if !(u > 0.0 && u.is_finite()) {
        bail!("weight must be positive and finite");
    }
    Ok(u)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| p.display().to_string())?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn enumerate(class: &BlockClassSpec, n_max: usize, u: Option<f64>, precision: usize, out: &mut dyn Write) -> Result<()> {
    match u {
        None => {
            let domain = NumericDomain::ExactRationalPolyU;
            let phi = phi_series::<PolyU>(class, &PolyU::variable(), n_max.saturating_sub(1), domain)?;
            let counts = lagrange_solve(&phi, n_max)?.egf_counts();
            writeln!(out, "n,egf_count")?;
            for (n, c) in counts.iter().enumerate().skip(1) {
                writeln!(out, "{n},{c}")?;
            }
        }
        Some(u) => {
            let domain = NumericDomain::big_float(precision);
            let g = bprime_series::<BigFloat>(class, n_max, domain)?.scale(&BigFloat::from_f64(u, precision));
            let c = lagrange_solve_exp(&g, n_max)?;
            writeln!(out, "# [x^n] C*(x, u) at u = {u}, {precision}-bit mantissa")?;
            writeln!(out, "n,coefficient")?;
            for (n, a) in c.coeffs().iter().enumerate().skip(1) {
                writeln!(out, "{n},{a}")?;
            }
        }
    }
    Ok(())
}

fn phase(class: &BlockClassSpec, u: f64) -> Result<serde_json::Value> {
    let sol = solve_phase(class, u)?;
    let constants = asymptotic_constants(class, u).ok();
    Ok(json!({
        "class": sol.class,
        "u": sol.u,
        "u_c": sol.u_c,
        "rho": sol.rho_u,
        "y": sol.y_u,
        "phase": sol.phase,
        "mean_mu": sol.mean_mu,
        "residual": sol.residual,
        "constants": constants,
    }))
}

fn emit_sample(s: &SampleOutput, rep: u64, handle: &RngHandle, emit: Emit, out: &mut dyn Write) -> Result<()> {
    match emit {
        Emit::Graph => {
            let Some(g) = &s.graph else { bail!("abstract classes have no graphs; use --emit sizes") };
            writeln!(out, "{g}")?;
        }
        Emit::Sizes | Emit::Tree => {
            let mut rec = json!({
                "replicate": rep,
                "seed": handle.seed,
                "stream": handle.stream,
                "u": s.u,
                "size": s.size(),
                "block_sizes": s.block_sizes(),
            });
            if let Some(x) = s.x {
                rec["x"] = json!(x);
            }
            if matches!(emit, Emit::Tree) {
                rec["outdegrees"] = json!(s.tree.outdegrees());
                if let Some(g) = &s.graph {
                    rec["decorated_tree"] = json!(build_block_tree(g)?.0.to_string());
                    rec["graph"] = json!(g.to_string());
                }
            }
            writeln!(out, "{rec}")?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon_init(t)?;
    }
    match cli.command {
        Command::Enumerate { class, n_max, u, precision, out } => {
            let class = load_class(&class)?;
            let mut w = output(&out)?;
            enumerate(&class, n_max, u, precision, &mut w)?;
            w.flush()?;
        }
        Command::Phase { class, u } => {
            let class = load_class(&class)?;
            let u = parse_weight(&u, &class)?;
            let mut w = output(&None)?;
            writeln!(w, "{}", serde_json::to_string_pretty(&phase(&class, u)?)?)?;
            w.flush()?;
        }
        Command::Sample { class, u, n, x, replicates, seed, emit, max_size } => {
            let class = load_class(&class)?;
            let u = parse_weight(&u, &class)?;
            let mut w = output(&None)?;
            let sampler = match n {
                Some(n) => Some(PnuSampler::new(&class, u, n)?),
                None => None,
            };
            for rep in 0..replicates {
                let handle = RngHandle::new(seed, rep);
                let mut rng = handle.rng();
                let s = match (&sampler, x) {
                    (Some(p), _) => p.sample(&mut rng)?,
                    (None, Some(x)) => boltzmann_cstar(&class, x, u, max_size, &mut rng)?,
                    (None, None) => unreachable!(),
                };
                emit_sample(&s, rep, &handle, emit, &mut w)?;
            }
            w.flush()?;
        }
        Command::Stats { config } => {
            let cfg = RunConfig::load(&config)?;
            let base = config.parent();
            let (records, report) = run_config(&cfg, base)?;
            let resolve = |p: &PathBuf| match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p.clone(),
            };
            if let Some(p) = &cfg.records_csv {
                write_records_csv(&records, File::create(resolve(p))?)?;
            }
            let json = serde_json::to_string_pretty(&report)?;
            match &cfg.report_json {
                Some(p) => std::fs::write(resolve(p), json)?,
                None => println!("{json}"),
            }
        }
        Command::Verify { criteria, seed, verbose } => {
            let mut all_passed = true;
            for (id, title) in CRITERIA {
                if !criteria.is_empty() && !criteria.contains(&id) {
                    continue;
                }
                match run_criterion(id, seed) {
                    Ok(o) => {
                        println!("{}", o.line());
                        if verbose || !o.passed {
                            for d in &o.details {
                                println!("    {d}");
                            }
                        }
                        all_passed &= o.passed;
                    }
                    Err(e) => {
                        println!("criterion {id:>2} [FAIL] {title}: error: {e}");
                        all_passed = false;
                    }
                }
            }
            return Ok(all_passed);
        }
    }
    Ok(true)
}

fn rayon_init(threads: usize) -> Result<()> {
    blockweight::set_threads(threads).context("thread pool")
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
