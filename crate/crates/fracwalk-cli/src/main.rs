//! `fracwalk`: heavy-tailed renewal processes, continuous-time random
//! walks and space-time fractional diffusion from the command line.
//!
//! Every subcommand emits CSV (with a `#` schema header) or
//! line-delimited JSON, writes a reproducibility manifest next to file
//! outputs, and is bit-reproducible given `--seed`/`--stream`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage/domain error,
//! 3 internal numerical failure.

mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracwalk_core::ctrw::{CtrwConfig, EmpiricalField, ScaleState};
use fracwalk_core::error::CoreError;
use fracwalk_core::fracdiff::FracDiffProblem;
use fracwalk_core::renewal::{counting_pmf_table, simulate_renewal, DEFAULT_EVENT_CAP};
use fracwalk_core::rng::RngStream;
use fracwalk_core::special::mittag_leffler as ml;
use fracwalk_core::special::mwright::mwright_eval;
use fracwalk_core::stats::empirical_mean_stderr;
use fracwalk_core::variates::{JumpLaw, WaitingLaw};
use num_complex::Complex64;
use output::{num, write_manifest, write_output, RunManifest, Sink};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "fracwalk",
    version,
    about = "Mittag-Leffler waiting times, thinning, CTRWs and fractional diffusion"
)]
struct Cli {
    /// Worker threads (default: logical cores; env FRACWALK_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Config file with key=value lines (flags override file values).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the primary output to this file (and a manifest next to it).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Emit line-delimited JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Mittag-Leffler family functions.
    MlEval(MlEvalArgs),
    /// Draw variates from a waiting or jump law.
    Sample(SampleArgs),
    /// Simulate renewal paths; optionally tabulate the counting pmf.
    RenewalSim(RenewalSimArgs),
    /// Thinning limit curve: deviation from the Mittag-Leffler transform.
    ThinDemo(ThinDemoArgs),
    /// Simulate a CTRW ensemble; histograms or characteristic function.
    CtrwSim(CtrwSimArgs),
    /// Solution density of the fractional Cauchy problem.
    Density(DensityArgs),
    /// Parametric-subordination trajectories (flash-light point clouds).
    Subordinate(SubordinateArgs),
    /// Empirical vs analytic variance of the subdiffusive walk.
    VarianceScan(VarianceScanArgs),
    /// Run the named validation checks.
    Validate(ValidateArgs),
    /// Re-run a recorded manifest and verify the output digests.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
struct MlEvalArgs {
    /// Order of E_alpha (one/two-parameter mode).
    #[arg(long)]
    alpha: Option<f64>,
    /// Second parameter (defaults to 1).
    #[arg(long)]
    beta2: Option<f64>,
    /// Argument(s) z, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Survival mode: E_beta(-t^beta).
    #[arg(long)]
    survival: bool,
    /// Density mode: t^{beta-1} E_{beta,beta}(-t^beta).
    #[arg(long)]
    density: bool,
    /// M-Wright mode: M_beta(z).
    #[arg(long)]
    mwright: bool,
    /// Exponent for the survival/density/M-Wright modes.
    #[arg(long)]
    beta: Option<f64>,
    /// Time(s) for the survival/density modes, comma-separated.
    #[arg(long)]
    t: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LawName {
    Exponential,
    MittagLeffler,
    Pareto,
    TwoPoint,
    Gaussian,
    SymPareto,
    SymStable,
    OneSidedStable,
    UnitDrift,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, value_enum)]
    law: LawName,
    /// Rate of the exponential law.
    #[arg(long)]
    rate: Option<f64>,
    /// Tail exponent (waiting laws / one-sided stable).
    #[arg(long)]
    beta: Option<f64>,
    /// Scale of the Pareto laws.
    #[arg(long)]
    theta: Option<f64>,
    /// Tail exponent of the jump laws.
    #[arg(long)]
    alpha: Option<f64>,
    /// Standard deviation of the Gaussian law.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
    /// CSV (index,value) instead of newline-delimited values.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct RenewalSimArgs {
    #[arg(long, value_enum)]
    law: LawName,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    horizon: f64,
    #[arg(long, default_value_t = 100)]
    paths: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
    /// Emit the counting pmf at this time instead of event times.
    #[arg(long)]
    pmf_at: Option<f64>,
    /// Largest count tabulated in pmf mode.
    #[arg(long, default_value_t = 128)]
    k_max: usize,
}

#[derive(Args, Debug)]
struct ThinDemoArgs {
    #[arg(long, value_enum, default_value = "pareto")]
    law: LawName,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Decreasing rescale factors, comma-separated.
    #[arg(long, default_value = "1e-1,1e-2,1e-3,1e-4")]
    taus: String,
    /// Transform evaluation points, comma-separated.
    #[arg(long, default_value = "0.25,1,4")]
    s_grid: String,
}

#[derive(Args, Debug)]
struct CtrwSimArgs {
    #[arg(long, value_enum)]
    waiting: LawName,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum)]
    jump: LawName,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    jump_alpha: Option<f64>,
    #[arg(long)]
    jump_theta: Option<f64>,
    /// Spatial scale.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Temporal scale (ignored with --well-scaled).
    #[arg(long)]
    tau: Option<f64>,
    /// Derive tau from h through the scaling relation r(h, tau) = 1.
    #[arg(long)]
    well_scaled: bool,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    /// Observation times, comma-separated.
    #[arg(long, default_value = "1")]
    times: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
    /// Histogram bins.
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Emit the empirical characteristic function instead of histograms.
    #[arg(long)]
    charfn: bool,
    /// Wavenumbers for --charfn, comma-separated.
    #[arg(long, default_value = "0,0.5,1,2")]
    kappas: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DensityRoute {
    Fourier,
    Subordination,
    Mc,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 5.0)]
    x_max: f64,
    #[arg(long, default_value_t = 101)]
    n_points: usize,
    #[arg(long, value_enum, default_value = "fourier")]
    route: DensityRoute,
    /// Monte Carlo paths (mc route).
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    /// Operational-time step (mc route).
    #[arg(long, default_value_t = 1e-3)]
    dt_star: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
}

#[derive(Args, Debug)]
struct SubordinateArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1e-2)]
    dt_star: f64,
    #[arg(long, default_value_t = 200)]
    n_steps: usize,
    #[arg(long, default_value_t = 10)]
    paths: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
}

#[derive(Args, Debug)]
struct VarianceScanArgs {
    #[arg(long)]
    beta: f64,
    /// Observation times, comma-separated.
    #[arg(long, default_value = "1,2,4,8")]
    times: String,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stream: Option<u64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Run only the sub-minute subset.
    #[arg(long)]
    quick: bool,
    /// Run a single named check.
    #[arg(long)]
    only: Option<String>,
    /// List check names and exit.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// Manifest file recorded by an earlier run.
    manifest: PathBuf,
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let code = match run(cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            classify_error(&e)
        }
    };
    std::process::exit(code);
}

/// Map failures onto the documented exit-code contract.
fn classify_error(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::Domain(_) | CoreError::Range(_) => 2,
            _ => 3,
        };
    }
    // anyhow context strings from argument handling count as usage
    if e.to_string().contains("usage:") {
        2
    } else {
        3
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("usage: bad number '{p}' in list"))
        })
        .collect()
}

fn resolve_threads(cli_threads: Option<usize>, config: &ConfigFile) -> usize {
    cli_threads
        .or(config.threads)
        .or_else(|| {
            std::env::var("FRACWALK_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(num_cpus)
}

fn num_cpus() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[derive(Default, Debug)]
struct ConfigFile {
    threads: Option<usize>,
    seed: Option<u64>,
    stream: Option<u64>,
}

fn load_config(path: Option<&PathBuf>) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::default();
    let Some(path) = path else {
        return Ok(cfg);
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("usage: config line {} is not key=value", lineno + 1))?;
        match key.trim() {
            "threads" => cfg.threads = Some(value.trim().parse()?),
            "seed" => cfg.seed = Some(value.trim().parse()?),
            "stream" => cfg.stream = Some(value.trim().parse()?),
            other => bail!("usage: unknown config key '{other}'"),
        }
    }
    Ok(cfg)
}

fn run(cli: Cli, argv: &[String]) -> Result<i32> {
    let config = load_config(cli.config.as_ref())?;
    let threads = resolve_threads(cli.threads, &config);
    // the pool is global; ignore the error if a test harness built it
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();

    let started = Instant::now();
    let mut manifest = RunManifest {
        tool: "fracwalk".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: subcommand_name(&cli.command).into(),
        argv: argv.iter().skip(1).cloned().collect(),
        seed: None,
        stream: None,
        threads,
        duration_secs: 0.0,
        outputs: Vec::new(),
    };

    let json = cli.json;
    let out = cli.out.clone();
    let code = match &cli.command {
        Command::MlEval(a) => cmd_ml_eval(a, json, out.as_deref(), &mut manifest)?,
        Command::Sample(a) => cmd_sample(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::RenewalSim(a) => cmd_renewal_sim(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::ThinDemo(a) => cmd_thin_demo(a, json, out.as_deref(), &mut manifest)?,
        Command::CtrwSim(a) => cmd_ctrw_sim(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::Density(a) => cmd_density(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::Subordinate(a) => cmd_subordinate(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::VarianceScan(a) => {
            cmd_variance_scan(a, &config, json, out.as_deref(), &mut manifest)?
        }
        Command::Validate(a) => cmd_validate(a, &config, json, out.as_deref(), &mut manifest)?,
        Command::Replay(a) => cmd_replay(a)?,
    };

    manifest.duration_secs = started.elapsed().as_secs_f64();
    if let Some(path) = &cli.out {
        let mpath = write_manifest(&manifest, path)?;
        eprintln!("manifest: {}", mpath.display());
    }
    Ok(code)
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::MlEval(_) => "ml-eval",
        Command::Sample(_) => "sample",
        Command::RenewalSim(_) => "renewal-sim",
        Command::ThinDemo(_) => "thin-demo",
        Command::CtrwSim(_) => "ctrw-sim",
        Command::Density(_) => "density",
        Command::Subordinate(_) => "subordinate",
        Command::VarianceScan(_) => "variance-scan",
        Command::Validate(_) => "validate",
        Command::Replay(_) => "replay",
    }
}

fn stream_of(
    seed: Option<u64>,
    stream: Option<u64>,
    config: &ConfigFile,
    manifest: &mut RunManifest,
) -> RngStream {
    let seed = seed.or(config.seed).unwrap_or(0);
    let stream = stream.or(config.stream).unwrap_or(0);
    manifest.seed = Some(seed);
    manifest.stream = Some(stream);
    RngStream::new(seed, stream)
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

fn cmd_ml_eval(
    a: &MlEvalArgs,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let mut sink = Sink::new(json, &["argument", "value", "abs_error_bound", "method"]);
    if a.survival || a.density {
        let beta = a.beta.ok_or_else(|| anyhow!("usage: --beta required"))?;
        let ts = parse_list(a.t.as_deref().ok_or_else(|| anyhow!("usage: --t required"))?)?;
        for t in ts {
            if a.survival {
                if t == 0.0 || beta == 1.0 {
                    let v = ml::ml_survival(beta, t)?;
                    sink.row(&[num(t), num(v), num(2.0 * f64::EPSILON * v), "series".into()]);
                } else {
                    let e = ml::ml_one_real(beta, -t.powf(beta))?;
                    sink.row(&[
                        num(t),
                        num(e.value),
                        num(e.abs_error_bound),
                        e.method_used.as_str().into(),
                    ]);
                }
            } else {
                let e = ml::ml_two_real(beta, beta, -t.powf(beta))?;
                let scale = t.powf(beta - 1.0);
                sink.row(&[
                    num(t),
                    num(scale * e.value),
                    num(scale * e.abs_error_bound),
                    e.method_used.as_str().into(),
                ]);
            }
        }
    } else if a.mwright {
        let beta = a.beta.ok_or_else(|| anyhow!("usage: --beta required"))?;
        let zs = parse_list(a.z.as_deref().ok_or_else(|| anyhow!("usage: --z required"))?)?;
        for z in zs {
            let e = mwright_eval(beta, z)?;
            sink.row(&[num(z), num(e.value), num(e.abs_error_bound), "series".into()]);
        }
    } else {
        let alpha = a.alpha.ok_or_else(|| anyhow!("usage: --alpha required"))?;
        let beta2 = a.beta2.unwrap_or(1.0);
        let zs = parse_list(a.z.as_deref().ok_or_else(|| anyhow!("usage: --z required"))?)?;
        for z in zs {
            let e = ml::ml_two_real(alpha, beta2, z)?;
            sink.row(&[
                num(z),
                num(e.value),
                num(e.abs_error_bound),
                e.method_used.as_str().into(),
            ]);
        }
    }
    write_output(&sink.render("ml-eval"), out, manifest)?;
    Ok(0)
}

fn waiting_law(name: LawName, rate: Option<f64>, beta: Option<f64>, theta: Option<f64>) -> Result<WaitingLaw> {
    let law = match name {
        LawName::Exponential => WaitingLaw::Exponential {
            rate: rate.unwrap_or(1.0),
        },
        LawName::MittagLeffler => WaitingLaw::MittagLeffler {
            beta: beta.ok_or_else(|| anyhow!("usage: --beta required"))?,
        },
        LawName::Pareto => WaitingLaw::Pareto {
            beta: beta.ok_or_else(|| anyhow!("usage: --beta required"))?,
            theta: theta.unwrap_or(1.0),
        },
        _ => bail!("usage: {name:?} is not a waiting law"),
    };
    law.validate()?;
    Ok(law)
}

fn jump_law(name: LawName, sigma: Option<f64>, alpha: Option<f64>, theta: Option<f64>) -> Result<JumpLaw> {
    let law = match name {
        LawName::TwoPoint => JumpLaw::TwoPoint,
        LawName::Gaussian => JumpLaw::Gaussian {
            sigma: sigma.unwrap_or(1.0),
        },
        LawName::SymPareto => JumpLaw::SymPareto {
            alpha: alpha.ok_or_else(|| anyhow!("usage: --jump-alpha required"))?,
            theta: theta.unwrap_or(1.0),
        },
        LawName::SymStable => JumpLaw::SymStable {
            alpha: alpha.ok_or_else(|| anyhow!("usage: --jump-alpha required"))?,
        },
        LawName::UnitDrift => JumpLaw::UnitDrift,
        _ => bail!("usage: {name:?} is not a jump law"),
    };
    law.validate()?;
    Ok(law)
}

fn cmd_sample(
    a: &SampleArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let stream = stream_of(a.seed, a.stream, config, manifest);
    let mut rng = stream.rng();
    let draw: Box<dyn FnMut(&mut fracwalk_core::rng::ChaCha8Rng) -> f64> = match a.law {
        LawName::Exponential | LawName::MittagLeffler | LawName::Pareto => {
            let law = waiting_law(a.law, a.rate, a.beta, a.theta)?;
            Box::new(move |r| law.sample(r))
        }
        LawName::OneSidedStable => {
            let beta = a.beta.ok_or_else(|| anyhow!("usage: --beta required"))?;
            if !(beta > 0.0 && beta < 1.0) {
                return Err(CoreError::Domain(format!("one-sided exponent {beta}")).into());
            }
            Box::new(move |r| fracwalk_core::variates::sample_one_sided_stable(beta, r))
        }
        _ => {
            let law = jump_law(a.law, a.sigma, a.alpha, a.theta)?;
            Box::new(move |r| law.sample(r))
        }
    };
    let mut draw = draw;
    if a.csv || json {
        let mut sink = Sink::new(json, &["index", "value"]);
        for i in 0..a.count {
            sink.row(&[i.to_string(), num(draw(&mut rng))]);
        }
        write_output(&sink.render("sample"), out, manifest)?;
    } else {
        let mut text = String::new();
        for _ in 0..a.count {
            text.push_str(&num(draw(&mut rng)));
            text.push('\n');
        }
        write_output(&text, out, manifest)?;
    }
    Ok(0)
}

fn cmd_renewal_sim(
    a: &RenewalSimArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let law = waiting_law(a.law, a.rate, a.beta, a.theta)?;
    let base = stream_of(a.seed, a.stream, config, manifest);
    if let Some(t) = a.pmf_at {
        if t > a.horizon {
            bail!("usage: --pmf-at beyond the horizon");
        }
        let mut counts = vec![0usize; a.k_max + 1];
        for i in 0..a.paths {
            let p = simulate_renewal(law, a.horizon, base.substream(i as u64), DEFAULT_EVENT_CAP)?;
            let k = p.counting_number(t)?;
            counts[k.min(a.k_max)] += 1;
        }
        let exact: Option<Vec<f64>> = match law {
            WaitingLaw::MittagLeffler { beta } => {
                Some(counting_pmf_table(beta, t, 1e-10, 4 * a.k_max)?)
            }
            WaitingLaw::Exponential { rate } => {
                Some(counting_pmf_table(1.0, rate * t, 1e-10, 4 * a.k_max)?)
            }
            _ => None,
        };
        let mut sink = Sink::new(json, &["k", "p_empirical", "p_inversion"]);
        for (k, &c) in counts.iter().enumerate() {
            let inv = exact
                .as_ref()
                .and_then(|e| e.get(k))
                .map(|&p| num(p))
                .unwrap_or_default();
            sink.row(&[k.to_string(), num(c as f64 / a.paths as f64), inv]);
        }
        write_output(&sink.render("renewal-sim"), out, manifest)?;
    } else {
        let mut sink = Sink::new(json, &["path", "k", "event_time"]);
        for i in 0..a.paths {
            let p = simulate_renewal(law, a.horizon, base.substream(i as u64), DEFAULT_EVENT_CAP)?;
            for (k, &t) in p.event_times.iter().enumerate() {
                sink.row(&[i.to_string(), (k + 1).to_string(), num(t)]);
            }
        }
        write_output(&sink.render("renewal-sim"), out, manifest)?;
    }
    Ok(0)
}

fn cmd_thin_demo(
    a: &ThinDemoArgs,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let law = waiting_law(a.law, a.rate, Some(a.beta), Some(a.theta))?;
    let taus = parse_list(&a.taus)?;
    let s_grid = parse_list(&a.s_grid)?;
    let beta = law.beta();
    let lambda = law.lambda();
    let mut sink = Sink::new(json, &["tau", "q", "s", "deviation"]);
    for &tau in &taus {
        let q = (lambda * tau.powf(beta)).min(1.0);
        for &s in &s_grid {
            let g = fracwalk_core::renewal::thinned_laplace(&law, q, tau, Complex64::new(s, 0.0))?;
            let target = 1.0 / (1.0 + s.powf(beta));
            sink.row(&[num(tau), num(q), num(s), num((g.re - target).abs())]);
        }
    }
    write_output(&sink.render("thin-demo"), out, manifest)?;
    Ok(0)
}

fn cmd_ctrw_sim(
    a: &CtrwSimArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let waiting = waiting_law(a.waiting, a.rate, a.beta, a.theta)?;
    let jump = jump_law(a.jump, a.sigma, a.jump_alpha, a.jump_theta)?;
    let scale = if a.well_scaled {
        ScaleState::well_scaled_from_h(&waiting, &jump, a.h)?
    } else {
        ScaleState {
            h: a.h,
            tau: a.tau.unwrap_or(1.0),
            a: 1.0,
        }
    };
    let times = parse_list(&a.times)?;
    let cfg = CtrwConfig {
        waiting,
        jump,
        scale,
        n_paths: a.paths,
        observation_times: times.clone(),
        event_cap: DEFAULT_EVENT_CAP,
    };
    let base = stream_of(a.seed, a.stream, config, manifest);
    let ens = fracwalk_core::ctrw::simulate_ctrw(&cfg, base)?;
    if a.charfn {
        let kappas = parse_list(&a.kappas)?;
        let mut sink = Sink::new(json, &["t", "kappa", "re_estimate", "stderr"]);
        for (j, &t) in times.iter().enumerate() {
            let field = EmpiricalField::char_function(&ens[j], &kappas, t)?;
            for (i, &k) in kappas.iter().enumerate() {
                sink.row(&[num(t), num(k), num(field.values[i]), num(field.std_errs[i])]);
            }
        }
        write_output(&sink.render("ctrw-sim"), out, manifest)?;
    } else {
        let mut sink = Sink::new(json, &["t", "bin_left", "bin_right", "density"]);
        for (j, &t) in times.iter().enumerate() {
            let h = EmpiricalField::histogram(&ens[j], a.bins, t)?;
            for (i, w) in h.grid.windows(2).enumerate() {
                sink.row(&[num(t), num(w[0]), num(w[1]), num(h.values[i])]);
            }
        }
        write_output(&sink.render("ctrw-sim"), out, manifest)?;
    }
    Ok(0)
}

fn cmd_density(
    a: &DensityArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let p = FracDiffProblem::new(a.alpha, a.beta, a.t)?;
    if a.n_points < 2 {
        bail!("usage: need at least two grid points");
    }
    let xs: Vec<f64> = (0..a.n_points)
        .map(|i| -a.x_max + 2.0 * a.x_max * i as f64 / (a.n_points - 1) as f64)
        .collect();
    let mut sink = Sink::new(json, &["x", "u"]);
    match a.route {
        DensityRoute::Fourier => {
            for &x in &xs {
                sink.row(&[num(x), num(p.density_fourier_at(x)?)]);
            }
        }
        DensityRoute::Subordination => {
            for &x in &xs {
                sink.row(&[num(x), num(p.density_subordination_at(x)?)]);
            }
        }
        DensityRoute::Mc => {
            let base = stream_of(a.seed, a.stream, config, manifest);
            let (_, positions) = fracwalk_core::fracdiff::simulate_subordination_ensemble(
                &p, a.t, a.dt_star, a.paths, base,
            )?;
            let width = 2.0 * a.x_max / (a.n_points - 1) as f64;
            let mut counts = vec![0usize; a.n_points];
            let mut inside = 0usize;
            for &x in &positions {
                let idx = ((x + a.x_max + 0.5 * width) / width).floor();
                if idx >= 0.0 && (idx as usize) < a.n_points {
                    counts[idx as usize] += 1;
                    inside += 1;
                }
            }
            let _ = inside;
            for (i, &x) in xs.iter().enumerate() {
                sink.row(&[
                    num(x),
                    num(counts[i] as f64 / (positions.len() as f64 * width)),
                ]);
            }
        }
    }
    write_output(&sink.render("density"), out, manifest)?;
    Ok(0)
}

fn cmd_subordinate(
    a: &SubordinateArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let p = FracDiffProblem::new(a.alpha, a.beta, 1.0)?;
    let base = stream_of(a.seed, a.stream, config, manifest);
    let mut sink = Sink::new(json, &["path", "t_star", "t", "x"]);
    for i in 0..a.paths {
        let traj = fracwalk_core::fracdiff::simulate_parametric_subordination(
            &p,
            a.dt_star,
            a.n_steps,
            base.substream(i as u64),
        )?;
        for pair in traj {
            sink.row(&[
                i.to_string(),
                num(pair.operational_time),
                num(pair.physical_time),
                num(pair.position),
            ]);
        }
    }
    write_output(&sink.render("subordinate"), out, manifest)?;
    Ok(0)
}

fn cmd_variance_scan(
    a: &VarianceScanArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    let times = parse_list(&a.times)?;
    let cfg = CtrwConfig {
        waiting: WaitingLaw::MittagLeffler { beta: a.beta },
        jump: JumpLaw::Gaussian {
            sigma: std::f64::consts::SQRT_2,
        },
        scale: ScaleState::identity(),
        n_paths: a.paths,
        observation_times: times.clone(),
        event_cap: DEFAULT_EVENT_CAP,
    };
    let base = stream_of(a.seed, a.stream, config, manifest);
    let ens = fracwalk_core::ctrw::simulate_ctrw(&cfg, base)?;
    let mut sink = Sink::new(json, &["t", "analytic", "empirical", "stderr"]);
    for (j, &t) in times.iter().enumerate() {
        let analytic =
            2.0 * t.powf(a.beta) / statrs_gamma(1.0 + a.beta);
        let sq: Vec<f64> = ens[j].iter().map(|x| x * x).collect();
        let (emp, se) = empirical_mean_stderr(&sq);
        sink.row(&[num(t), num(analytic), num(emp), num(se)]);
    }
    write_output(&sink.render("variance-scan"), out, manifest)?;
    Ok(0)
}

fn statrs_gamma(x: f64) -> f64 {
    fracwalk_core::special::gamma_dd::ln_gamma_dd(fracwalk_core::dd::Dd::from_f64(x))
        .exp()
        .to_f64()
}

fn cmd_validate(
    a: &ValidateArgs,
    config: &ConfigFile,
    json: bool,
    out: Option<&std::path::Path>,
    manifest: &mut RunManifest,
) -> Result<i32> {
    use fracwalk_core::validate::{checks, CheckContext};
    let defs = checks();
    if a.list {
        let mut text = String::new();
        for d in &defs {
            text.push_str(&format!(
                "{} (criterion {}{})\n",
                d.name,
                d.criterion,
                if d.quick { ", quick" } else { "" }
            ));
        }
        write_output(&text, out, manifest)?;
        return Ok(0);
    }
    let seed = a.seed.or(config.seed).unwrap_or(0);
    manifest.seed = Some(seed);
    let ctx = CheckContext { seed };
    let selected: Vec<_> = defs
        .into_iter()
        .filter(|d| {
            if let Some(only) = &a.only {
                d.name == only
            } else {
                !a.quick || d.quick
            }
        })
        .collect();
    if selected.is_empty() {
        bail!("usage: no check named '{}'", a.only.as_deref().unwrap_or(""));
    }
    let mut all_passed = true;
    let mut text = String::new();
    for d in selected {
        let started = Instant::now();
        let outcome = (d.run)(&ctx).map_err(anyhow::Error::from)?;
        // timing to stderr only: reports must be byte-identical per seed
        eprintln!(
            "{} finished in {:.2}s",
            outcome.name,
            started.elapsed().as_secs_f64()
        );
        all_passed &= outcome.passed;
        if json {
            let lines: Vec<serde_json::Value> = outcome
                .lines
                .iter()
                .map(|l| serde_json::json!({"label": l.label, "passed": l.passed}))
                .collect();
            text.push_str(
                &serde_json::json!({
                    "name": outcome.name, "criterion": d.criterion,
                    "passed": outcome.passed, "assertions": lines
                })
                .to_string(),
            );
            text.push('\n');
        } else {
            let ok = outcome.lines.iter().filter(|l| l.passed).count();
            text.push_str(&format!(
                "{} {} ({}/{} assertions)\n",
                if outcome.passed { "PASS" } else { "FAIL" },
                outcome.name,
                ok,
                outcome.lines.len()
            ));
            for l in outcome.lines.iter().filter(|l| !l.passed) {
                text.push_str(&format!("  FAIL {}\n", l.label));
            }
        }
    }
    write_output(&text, out, manifest)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn cmd_replay(a: &ReplayArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&a.manifest)
        .with_context(|| format!("reading {}", a.manifest.display()))?;
    let recorded: RunManifest = serde_json::from_str(&text)?;
    let exe = std::env::current_exe()?;
    let status_out = std::process::Command::new(&exe)
        .args(&recorded.argv)
        .output()
        .context("re-running recorded argv")?;
    if !status_out.status.success() {
        eprintln!(
            "replay: rerun exited with {:?}",
            status_out.status.code()
        );
        return Ok(1);
    }
    let mut ok = true;
    for o in &recorded.outputs {
        let content = std::fs::read(&o.path)
            .with_context(|| format!("reading regenerated {}", o.path))?;
        let digest = hex::encode(<sha2::Sha256 as sha2::Digest>::digest(&content));
        let matched = digest == o.sha256;
        println!(
            "{} {} ({} bytes)",
            if matched { "MATCH" } else { "MISMATCH" },
            o.path,
            content.len()
        );
        ok &= matched;
    }
    Ok(if ok { 0 } else { 1 })
}
