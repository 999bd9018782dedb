//! Renewal processes: path simulation, counting numbers, thinning with
//! rescaling, and the Laplace-domain limit diagnostics.
//!
//! Thinning deletes each event independently with probability `p = 1-q`
//! and rescales the surviving times by `tau`.  In the Laplace domain the
//! thinned-rescaled waiting density is
//! `g_{q,tau}(s) = q phi(tau s) / (1 - (1-q) phi(tau s))`,
//! and under the scaling `q = lambda tau^beta` it converges to the
//! Mittag-Leffler transform `1/(1 + s^beta)` as `tau -> 0`.

use crate::error::{CoreError, Result};
use crate::rng::RngStream;
use crate::talbot;
use crate::variates::WaitingLaw;
use num_complex::Complex64;
use rand::Rng;
use statrs::function::gamma::ln_gamma;

/// Default cap on simulated events per path; heavy-tail laws with tiny
/// samples can explode.
pub const DEFAULT_EVENT_CAP: usize = 50_000_000;

/// One realization of a renewal process on `[0, horizon]`.
#[derive(Clone, Debug)]
pub struct RenewalPath {
    /// Strictly increasing event times in `(0, horizon]`.
    pub event_times: Vec<f64>,
    pub law: WaitingLaw,
    pub horizon: f64,
    /// First event time beyond the horizon, for unbiased restarts.
    /// `None` after thinning (the continuation is no longer a fresh
    /// renewal of the same law).
    pub overhang: Option<f64>,
}

impl RenewalPath {
    /// Counting number `N(t) = max{k : t_k <= t}` (right-continuous).
    pub fn counting_number(&self, t: f64) -> Result<usize> {
        if t < 0.0 || t > self.horizon {
            return Err(CoreError::Range(format!(
                "t = {t} outside the observed horizon {}",
                self.horizon
            )));
        }
        Ok(self.event_times.partition_point(|&e| e <= t))
    }
}

/// Simulate one renewal path.
pub fn simulate_renewal(
    law: WaitingLaw,
    horizon: f64,
    stream: RngStream,
    event_cap: usize,
) -> Result<RenewalPath> {
    law.validate()?;
    if !(horizon >= 0.0) {
        return Err(CoreError::Domain(format!("bad horizon {horizon}")));
    }
    let mut rng = stream.rng();
    let mut t = 0.0;
    let mut event_times = Vec::new();
    let overhang;
    loop {
        let w = law.sample(&mut rng);
        t += w;
        if t > horizon {
            overhang = Some(t);
            break;
        }
        event_times.push(t);
        if event_times.len() >= event_cap {
            return Err(CoreError::Budget(format!(
                "event count exceeded the cap {event_cap} before the horizon"
            )));
        }
    }
    Ok(RenewalPath {
        event_times,
        law,
        horizon,
        overhang,
    })
}

/// How `q` relates to `tau` in a thinning configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThinningRelation {
    /// `q` and `tau` are free parameters.
    Free,
    /// `q = lambda tau^beta` (the infinite-thinning scaling relation).
    Scaled,
}

/// Bernoulli-thinning plus time-rescaling parameters.
#[derive(Clone, Copy, Debug)]
pub struct ThinningConfig {
    /// Keep probability in (0, 1].
    pub q: f64,
    /// Time rescale factor.
    pub tau: f64,
    pub relation: ThinningRelation,
}

impl ThinningConfig {
    pub fn validate(&self, law: &WaitingLaw) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(CoreError::Domain(format!("keep probability {}", self.q)));
        }
        if !(self.tau > 0.0) {
            return Err(CoreError::Domain(format!("rescale factor {}", self.tau)));
        }
        if self.relation == ThinningRelation::Scaled {
            let expect = law.lambda() * self.tau.powf(law.beta());
            if (self.q - expect).abs() > 1e-12 * expect.max(1e-300) {
                return Err(CoreError::Domain(format!(
                    "scaled thinning requires q = lambda tau^beta = {expect}, got {}",
                    self.q
                )));
            }
        }
        Ok(())
    }

    /// The scaled configuration `q = lambda tau^beta` for a law.
    pub fn scaled(law: &WaitingLaw, tau: f64) -> Self {
        ThinningConfig {
            q: law.lambda() * tau.powf(law.beta()),
            tau,
            relation: ThinningRelation::Scaled,
        }
    }
}

/// Thin a path: each event kept independently with probability `q`,
/// surviving times (and the horizon) multiplied by `tau`.
pub fn thin_path(path: &RenewalPath, cfg: &ThinningConfig, stream: RngStream) -> Result<RenewalPath> {
    cfg.validate(&path.law)?;
    let mut rng = stream.rng();
    let event_times = path
        .event_times
        .iter()
        .filter(|_| rng.random::<f64>() < cfg.q)
        .map(|&t| t * cfg.tau)
        .collect();
    Ok(RenewalPath {
        event_times,
        law: path.law,
        horizon: path.horizon * cfg.tau,
        overhang: None,
    })
}

/// Laplace transform of the thinned-rescaled waiting density,
/// `g_{q,tau}(s) = q phi(tau s) / (1 - (1-q) phi(tau s))`.
///
/// Evaluated through `D = 1 - phi(tau s)` as `q (1 - D) / (q + (1-q) D)`
/// so that no accuracy is lost when both `q` and `D` are tiny.
pub fn thinned_laplace(law: &WaitingLaw, q: f64, tau: f64, s: Complex64) -> Result<Complex64> {
    law.validate()?;
    if !(q > 0.0 && q <= 1.0) || !(tau > 0.0) {
        return Err(CoreError::Domain(format!("bad thinning (q={q}, tau={tau})")));
    }
    if s.re <= 0.0 {
        return Err(CoreError::Domain("need Re s > 0".into()));
    }
    let d = law.one_minus_laplace(s * tau)?;
    Ok(q * (Complex64::new(1.0, 0.0) - d) / (q + (1.0 - q) * d))
}

/// Sup-norm deviation of the thinned transform from the Mittag-Leffler
/// limit `1/(1 + s^beta)` for each `tau` in a decreasing sequence, with
/// `q = lambda tau^beta`.
pub fn thinning_limit_curve(
    law: &WaitingLaw,
    s_grid: &[f64],
    tau_seq: &[f64],
) -> Result<Vec<ThinningDeviation>> {
    law.validate()?;
    let beta = law.beta();
    let lambda = law.lambda();
    let mut out = Vec::with_capacity(tau_seq.len());
    for &tau in tau_seq {
        let q = (lambda * tau.powf(beta)).min(1.0);
        let mut sup: f64 = 0.0;
        for &s in s_grid {
            let g = thinned_laplace(law, q, tau, Complex64::new(s, 0.0))?;
            let target = 1.0 / (1.0 + s.powf(beta));
            sup = sup.max((g - target).norm());
        }
        out.push(ThinningDeviation { tau, q, sup });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct ThinningDeviation {
    pub tau: f64,
    pub q: f64,
    /// sup over the s-grid of |g_{q,tau}(s) - 1/(1+s^beta)|
    pub sup: f64,
}

/// `P(N(t) = k)` for the renewal process with Mittag-Leffler waiting
/// times: numerical Laplace inversion of `s^{beta-1} / (1+s^beta)^{k+1}`;
/// the exact Poisson formula at `beta = 1`.
pub fn counting_pmf(beta: f64, t: f64, k: usize) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CoreError::Domain(format!("counting exponent {beta}")));
    }
    if !(t > 0.0) {
        return Err(CoreError::Domain(format!("time {t}")));
    }
    if beta == 1.0 {
        // e^{-t} t^k / k! in log space
        let ln_p = -t + k as f64 * t.ln() - ln_gamma(k as f64 + 1.0);
        return Ok(ln_p.exp());
    }
    let (v, _err) = talbot::invert(
        |s| {
            let sb = s.powf(beta);
            s.powf(beta - 1.0) / (sb + 1.0).powf(k as f64 + 1.0)
        },
        t,
        1e-7,
    )?;
    // probabilities: clamp inversion noise at the edges
    Ok(v.clamp(0.0, 1.0))
}

/// The pmf table `P(N(t) = k)` for `k = 0..`, truncated adaptively once
/// the accumulated mass exceeds `1 - tail_mass`.
pub fn counting_pmf_table(beta: f64, t: f64, tail_mass: f64, k_cap: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut acc = 0.0;
    for k in 0..k_cap {
        let p = counting_pmf(beta, t, k)?;
        out.push(p);
        acc += p;
        if acc >= 1.0 - tail_mass {
            return Ok(out);
        }
    }
    Err(CoreError::Truncation(format!(
        "pmf mass {acc} after {k_cap} terms (beta={beta}, t={t})"
    )))
}
