//! Continuous-time random walks: path simulation, the transform algebra
//! of the walk (Montroll-Weiss equation, geometric series), rescaling
//! and respeeding of the waiting-time transform, memory functions, and
//! the scaling-limit diagnostics.
//!
//! A walk is a renewal process with iid jumps: the particle sits at
//! `x_n` for `t_n <= t < t_{n+1}` and jumps by `h X_{n+1}` at `t_{n+1}`,
//! the waiting times being scaled by `tau`.  In the Fourier-Laplace
//! domain the sojourn density is
//! `p(kappa, s) = (1 - phi(tau s))/s * 1/(1 - w(h kappa) phi(tau s))`.

use crate::error::{CoreError, Result};
use crate::renewal::counting_pmf;
use crate::rng::RngStream;
use crate::special::stable::symmetric_stable_density;
use crate::stats;
use crate::variates::{JumpLaw, WaitingLaw};
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

/// Spatial/temporal rescaling plus the respeeding factor.
#[derive(Clone, Copy, Debug)]
pub struct ScaleState {
    /// Spatial scale multiplying jumps.
    pub h: f64,
    /// Temporal scale multiplying waiting times.
    pub tau: f64,
    /// Respeeding factor (applied in the transform domain only).
    pub a: f64,
}

impl ScaleState {
    pub fn identity() -> Self {
        ScaleState {
            h: 1.0,
            tau: 1.0,
            a: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h > 0.0 && self.tau > 0.0 && self.a > 0.0 {
            Ok(())
        } else {
            Err(CoreError::Domain(format!("invalid scale state {self:?}")))
        }
    }

    /// The scaling ratio `r(h, tau) = mu h^alpha / (lambda tau^beta)`.
    pub fn ratio(&self, waiting: &WaitingLaw, jump: &JumpLaw) -> Result<f64> {
        let mu = jump.mu().ok_or_else(|| {
            CoreError::Domain("jump law has no Fourier scale constant".into())
        })?;
        Ok(mu * self.h.powf(jump.alpha()) / (waiting.lambda() * self.tau.powf(waiting.beta())))
    }

    /// Whether the scaling relation `r(h, tau) = 1` holds.
    pub fn well_scaled(&self, waiting: &WaitingLaw, jump: &JumpLaw) -> Result<bool> {
        Ok((self.ratio(waiting, jump)? - 1.0).abs() < 1e-9)
    }

    /// The scale with `tau` eliminated through `tau = ((mu/lambda) h^alpha)^{1/beta}`,
    /// which enforces `r(h, tau) = 1`.
    pub fn well_scaled_from_h(waiting: &WaitingLaw, jump: &JumpLaw, h: f64) -> Result<Self> {
        let mu = jump.mu().ok_or_else(|| {
            CoreError::Domain("jump law has no Fourier scale constant".into())
        })?;
        let tau = (mu / waiting.lambda() * h.powf(jump.alpha())).powf(1.0 / waiting.beta());
        Ok(ScaleState { h, tau, a: 1.0 })
    }
}

/// Full configuration of a CTRW ensemble.
#[derive(Clone, Debug)]
pub struct CtrwConfig {
    pub waiting: WaitingLaw,
    pub jump: JumpLaw,
    pub scale: ScaleState,
    pub n_paths: usize,
    /// Strictly increasing positive observation times.
    pub observation_times: Vec<f64>,
    /// Cap on events per path.
    pub event_cap: usize,
}

impl CtrwConfig {
    pub fn validate(&self) -> Result<()> {
        self.waiting.validate()?;
        self.jump.validate()?;
        self.scale.validate()?;
        if self.observation_times.is_empty() {
            return Err(CoreError::Domain("no observation times".into()));
        }
        if !self
            .observation_times
            .windows(2)
            .all(|w| w[0] < w[1])
        {
            return Err(CoreError::Domain(
                "observation times must be strictly increasing".into(),
            ));
        }
        if self.observation_times[0] < 0.0 {
            return Err(CoreError::Domain("negative observation time".into()));
        }
        Ok(())
    }
}

/// Simulate one path; returns the position at each observation time.
///
/// Paths are right-continuous: a jump at exactly an observation instant
/// is included in the reported position.
pub fn simulate_ctrw_path(cfg: &CtrwConfig, stream: RngStream) -> Result<Vec<f64>> {
    let mut rng = stream.rng();
    let mut positions = Vec::with_capacity(cfg.observation_times.len());
    let mut t = 0.0f64;
    let mut x = 0.0f64;
    let mut events = 0usize;
    let last = *cfg.observation_times.last().unwrap();
    let mut obs_iter = cfg.observation_times.iter().peekable();
    loop {
        let wait = cfg.waiting.sample(&mut rng) * cfg.scale.tau;
        let t_next = t + wait;
        // report x at every observation time strictly before the jump
        while let Some(&&ot) = obs_iter.peek() {
            if ot < t_next {
                positions.push(x);
                obs_iter.next();
            } else {
                break;
            }
        }
        if t_next > last {
            break;
        }
        t = t_next;
        x += cfg.jump.sample(&mut rng) * cfg.scale.h;
        events += 1;
        if events >= cfg.event_cap {
            return Err(CoreError::Budget(format!(
                "path exceeded {} events before t = {last}",
                cfg.event_cap
            )));
        }
    }
    // any remaining observation times fall at or after the final jump
    for _ in obs_iter {
        positions.push(x);
    }
    Ok(positions)
}

/// Simulate the ensemble in parallel; `out[obs][path]` holds the
/// position of `path` at observation time `obs`.  Stream assignment is
/// per-path, so the result does not depend on the thread count.
pub fn simulate_ctrw(cfg: &CtrwConfig, base: RngStream) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let per_path: Vec<Vec<f64>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| simulate_ctrw_path(cfg, base.substream(i as u64)))
        .collect::<Result<_>>()?;
    let n_obs = cfg.observation_times.len();
    let mut out = vec![Vec::with_capacity(cfg.n_paths); n_obs];
    for path in &per_path {
        for (j, &x) in path.iter().enumerate() {
            out[j].push(x);
        }
    }
    Ok(out)
}

/// The Montroll-Weiss transform of the rescaled walk at `(kappa, s)`.
///
/// Both factors are assembled from the cancellation-free quantities
/// `D_t = 1 - phi(tau s)` and `D_x = 1 - w(h kappa)`:
/// `p = D_t / s / (D_t + (1 - D_t) D_x)`.
pub fn montroll_weiss(
    waiting: &WaitingLaw,
    jump: &JumpLaw,
    scale: &ScaleState,
    kappa: f64,
    s: Complex64,
) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(CoreError::Domain("need Re s > 0".into()));
    }
    let d_t = waiting.one_minus_laplace(s * scale.tau)?;
    let d_x = jump.one_minus_fourier(scale.h * kappa)?;
    let denom = d_t + (Complex64::new(1.0, 0.0) - d_t) * d_x;
    Ok(d_t / s / denom)
}

/// Partial sums of the geometric-series form of the walk transform,
/// `Psi(s) sum_n [phi(tau s) w(h kappa)]^n`.
pub fn montroll_weiss_series(
    waiting: &WaitingLaw,
    jump: &JumpLaw,
    scale: &ScaleState,
    kappa: f64,
    s: Complex64,
    n_terms: usize,
) -> Result<Complex64> {
    let phi = waiting.laplace(s * scale.tau)?;
    let w = jump.fourier(scale.h * kappa)?;
    let psi = waiting.one_minus_laplace(s * scale.tau)? / s;
    let ratio = phi * w;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 0..n_terms {
        sum += pow;
        pow *= ratio;
    }
    Ok(psi * sum)
}

/// Combined rescale-respeed of a waiting transform:
/// `phi_{tau,a}(s) = a phi(tau s) / (1 - (1-a) phi(tau s))`.
///
/// Algebraically identical to the thinning transform with `q = a`; the
/// pathwise realization of respeeding is exactly Bernoulli thinning.
pub fn respeed_transform(law: &WaitingLaw, tau: f64, a: f64, s: Complex64) -> Result<Complex64> {
    if !(tau > 0.0 && a > 0.0) {
        return Err(CoreError::Domain(format!("bad rescale-respeed ({tau}, {a})")));
    }
    let d = law.one_minus_laplace(s * tau)?;
    Ok(a * (Complex64::new(1.0, 0.0) - d) / (a + (1.0 - a) * d))
}

/// Memory-function transform `H(s) = (1 - phi(s)) / (s phi(s))`.
pub fn memory_transform(law: &WaitingLaw, s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(CoreError::Domain("need Re s > 0".into()));
    }
    let d = law.one_minus_laplace(s)?;
    Ok(d / (s * (Complex64::new(1.0, 0.0) - d)))
}

/// Deviation of the rescaled walk transform from its scaling limit
/// `s^{beta-1} / (|kappa|^alpha + s^beta)` along a decreasing sequence
/// of spatial scales, with `tau` eliminated via the scaling relation.
pub fn diffusion_limit_gap(
    waiting: &WaitingLaw,
    jump: &JumpLaw,
    kappa: f64,
    s: f64,
    h_seq: &[f64],
) -> Result<Vec<GapPoint>> {
    let beta = waiting.beta();
    let alpha = jump.alpha();
    let target = s.powf(beta - 1.0) / (kappa.abs().powf(alpha) + s.powf(beta));
    let mut out = Vec::with_capacity(h_seq.len());
    for &h in h_seq {
        let scale = ScaleState::well_scaled_from_h(waiting, jump, h)?;
        let mw = montroll_weiss(waiting, jump, &scale, kappa, Complex64::new(s, 0.0))?;
        out.push(GapPoint {
            h,
            tau: scale.tau,
            gap: (mw - target).norm(),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct GapPoint {
    pub h: f64,
    pub tau: f64,
    pub gap: f64,
}

/// What a Monte Carlo field estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    DensityHistogram,
    CharFunction,
}

/// A binned density or characteristic-function estimate.
#[derive(Clone, Debug)]
pub struct EmpiricalField {
    /// Bin edges (histogram; length = values + 1) or kappa grid.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Per-point standard errors (char function) or empty (histogram).
    pub std_errs: Vec<f64>,
    pub n_samples: usize,
    pub t: f64,
    pub kind: FieldKind,
}

impl EmpiricalField {
    /// Histogram of samples as a probability density; bins span exactly
    /// `[min, max]` of the data so the density integrates to one.
    pub fn histogram(samples: &[f64], n_bins: usize, t: f64) -> Result<Self> {
        if samples.is_empty() || n_bins == 0 {
            return Err(CoreError::Domain("empty histogram request".into()));
        }
        let lo = samples.iter().cloned().fold(f64::MAX, f64::min);
        let hi = samples.iter().cloned().fold(f64::MIN, f64::max);
        let width = ((hi - lo) / n_bins as f64).max(f64::MIN_POSITIVE);
        let mut counts = vec![0usize; n_bins];
        for &x in samples {
            let idx = (((x - lo) / width) as usize).min(n_bins - 1);
            counts[idx] += 1;
        }
        let n = samples.len() as f64;
        let values = counts.iter().map(|&c| c as f64 / (n * width)).collect();
        let grid = (0..=n_bins).map(|i| lo + i as f64 * width).collect();
        Ok(EmpiricalField {
            grid,
            values,
            std_errs: Vec::new(),
            n_samples: samples.len(),
            t,
            kind: FieldKind::DensityHistogram,
        })
    }

    /// Empirical characteristic function `E[cos(kappa x)]` on a kappa
    /// grid (real part; the laws here are symmetric).
    pub fn char_function(samples: &[f64], kappa_grid: &[f64], t: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(CoreError::Domain("no samples".into()));
        }
        let mut values = Vec::with_capacity(kappa_grid.len());
        let mut errs = Vec::with_capacity(kappa_grid.len());
        for &k in kappa_grid {
            if k == 0.0 {
                values.push(1.0);
                errs.push(0.0);
                continue;
            }
            let cs: Vec<f64> = samples.iter().map(|&x| (k * x).cos()).collect();
            let (m, se) = stats::empirical_mean_stderr(&cs);
            values.push(m);
            errs.push(se);
        }
        Ok(EmpiricalField {
            grid: kappa_grid.to_vec(),
            values,
            std_errs: errs,
            n_samples: samples.len(),
            t,
            kind: FieldKind::CharFunction,
        })
    }

    /// Total mass of a histogram (should be 1 up to rounding).
    pub fn mass(&self) -> f64 {
        match self.kind {
            FieldKind::DensityHistogram => self
                .values
                .iter()
                .zip(self.grid.windows(2))
                .map(|(v, w)| v * (w[1] - w[0]))
                .sum(),
            FieldKind::CharFunction => f64::NAN,
        }
    }
}

/// How the series representation reports the sojourn law.
#[derive(Clone, Debug)]
pub enum SeriesSolution {
    /// Lattice walks: point masses at `offsets * h`.
    Lattice { positions: Vec<f64>, mass: Vec<f64> },
    /// Continuous jump laws: an atom at the origin (the no-jump weight)
    /// plus a density on the given grid.
    Continuous {
        atom_at_origin: f64,
        x: Vec<f64>,
        density: Vec<f64>,
    },
}

/// The series representation `p(x, t) = sum_n v_n(t) w_n(x)` where
/// `v_n = Psi * phi^{*n}` and `w_n` is the n-fold jump convolution,
/// truncated adaptively once the counting tail drops below `tail_tol`.
pub fn series_solution(
    cfg: &CtrwConfig,
    x_grid: &[f64],
    t: f64,
    n_max: usize,
    tail_tol: f64,
) -> Result<SeriesSolution> {
    cfg.validate()?;
    if !(t >= 0.0) {
        return Err(CoreError::Domain(format!("time {t}")));
    }
    let weights = counting_weights(&cfg.waiting, t / cfg.scale.tau, n_max, tail_tol)?;
    match cfg.jump {
        JumpLaw::UnitDrift => {
            let positions = (0..weights.len()).map(|n| n as f64 * cfg.scale.h).collect();
            Ok(SeriesSolution::Lattice {
                positions,
                mass: weights,
            })
        }
        JumpLaw::TwoPoint => {
            // sum of n fair +-1 steps: binomial masses on the lattice
            let n_terms = weights.len();
            let mut mass = vec![0.0f64; 2 * n_terms + 1]; // offsets -n..n
            for (n, &v) in weights.iter().enumerate() {
                for j in 0..=n {
                    let m = 2 * j as i64 - n as i64; // net displacement
                    let ln_c = ln_gamma(n as f64 + 1.0)
                        - ln_gamma(j as f64 + 1.0)
                        - ln_gamma((n - j) as f64 + 1.0);
                    let p = (ln_c - n as f64 * std::f64::consts::LN_2).exp();
                    mass[(m + n_terms as i64) as usize] += v * p;
                }
            }
            let positions = (0..mass.len())
                .map(|i| (i as i64 - n_terms as i64) as f64 * cfg.scale.h)
                .collect();
            Ok(SeriesSolution::Lattice { positions, mass })
        }
        JumpLaw::Gaussian { sigma } => {
            let mut density = vec![0.0f64; x_grid.len()];
            for (n, &v) in weights.iter().enumerate().skip(1) {
                let var = n as f64 * (sigma * cfg.scale.h).powi(2);
                for (i, &x) in x_grid.iter().enumerate() {
                    density[i] += v * (-x * x / (2.0 * var)).exp()
                        / (2.0 * std::f64::consts::PI * var).sqrt();
                }
            }
            Ok(SeriesSolution::Continuous {
                atom_at_origin: weights[0],
                x: x_grid.to_vec(),
                density,
            })
        }
        JumpLaw::SymStable { alpha } => {
            let mut density = vec![0.0f64; x_grid.len()];
            for (n, &v) in weights.iter().enumerate().skip(1) {
                let r = n as f64 * cfg.scale.h.powf(alpha);
                for (i, &x) in x_grid.iter().enumerate() {
                    density[i] += v * symmetric_stable_density(alpha, x, r)?;
                }
            }
            Ok(SeriesSolution::Continuous {
                atom_at_origin: weights[0],
                x: x_grid.to_vec(),
                density,
            })
        }
        JumpLaw::SymPareto { .. } => {
            // n-fold convolutions of a pure power law keep mass out to
            // |x| ~ (n / eps)^{1/alpha}; a grid meeting a 1e-8 tail-mass
            // budget per convolution is beyond desk scale
            Err(CoreError::Truncation(
                "series solution for power-law jumps cannot meet the tail-mass budget \
                 on a finite grid; use Monte Carlo or the transform domain"
                    .into(),
            ))
        }
    }
}

/// The counting weights `v_n(t)`: closed Poisson form for exponential
/// waiting, Laplace inversion for Mittag-Leffler, and a time-grid
/// convolution ladder for everything else.
fn counting_weights(
    waiting: &WaitingLaw,
    t: f64,
    n_max: usize,
    tail_tol: f64,
) -> Result<Vec<f64>> {
    if t == 0.0 {
        return Ok(vec![1.0]);
    }
    let mut out = Vec::new();
    let mut acc = 0.0;
    match *waiting {
        WaitingLaw::Exponential { rate } => {
            for n in 0..n_max {
                let ln_p = -(rate * t) + n as f64 * (rate * t).ln() - ln_gamma(n as f64 + 1.0);
                let p = ln_p.exp();
                out.push(p);
                acc += p;
                if acc >= 1.0 - tail_tol {
                    return Ok(out);
                }
            }
        }
        WaitingLaw::MittagLeffler { beta } => {
            for n in 0..n_max {
                let p = counting_pmf(beta, t, n)?;
                out.push(p);
                acc += p;
                if acc >= 1.0 - tail_tol {
                    return Ok(out);
                }
            }
        }
        WaitingLaw::Pareto { beta, theta } => {
            // trapezoid convolution ladder on a uniform grid over [0, t]
            let m = 4096usize;
            let dt = t / m as f64;
            let dens =
                |u: f64| -> f64 { (beta / theta) * (1.0 + u / theta).powf(-beta - 1.0) };
            let phi: Vec<f64> = (0..=m).map(|i| dens(i as f64 * dt)).collect();
            // f_n sampled on the grid; f_1 = phi
            let mut f_n = phi.clone();
            // v_0 = Psi(t)
            let p0 = (1.0 + t / theta).powf(-beta);
            out.push(p0);
            acc += p0;
            for _n in 1..n_max {
                // v_n(t) = int_0^t Psi(t - u) f_n(u) du
                let mut v = 0.0;
                for i in 0..=m {
                    let u = i as f64 * dt;
                    let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                    v += w * (1.0 + (t - u) / theta).powf(-beta) * f_n[i] * dt;
                }
                out.push(v);
                acc += v;
                if acc >= 1.0 - tail_tol {
                    return Ok(out);
                }
                // f_{n+1} = f_n * phi
                let mut next = vec![0.0f64; m + 1];
                for (i, nx) in next.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for j in 0..=i {
                        let w = if j == 0 || j == i { 0.5 } else { 1.0 };
                        s += w * f_n[j] * phi[i - j] * dt;
                    }
                    *nx = s;
                }
                f_n = next;
            }
        }
    }
    Err(CoreError::Truncation(format!(
        "counting weights reach only {acc} mass after {n_max} terms"
    )))
}
