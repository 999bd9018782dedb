//! Waiting-time and jump laws: samplers and transform evaluators.
//!
//! Each law knows how to draw variates, evaluate its Laplace (waiting)
//! or Fourier (jump) transform, and report the scaling constants of its
//! heavy-tail behaviour: `1 - laplace(s) ~ lambda s^beta` as `s -> 0`
//! for waiting laws, `1 - fourier(k) ~ mu |k|^alpha` as `k -> 0` for
//! symmetric jump laws.

use crate::error::{CoreError, Result};
use crate::quad::integrate_complex;
use crate::special::mittag_leffler::ml_survival;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Waiting-time distribution of a renewal process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WaitingLaw {
    /// Exponential with the given rate; mean `1/rate`.
    Exponential { rate: f64 },
    /// Mittag-Leffler law with survival `E_beta(-t^beta)`; reduces to
    /// `Exponential { rate: 1 }` at `beta = 1`.
    MittagLeffler { beta: f64 },
    /// Lomax-type power tail, survival `(1 + t/theta)^{-beta}`.
    Pareto { beta: f64, theta: f64 },
}

impl WaitingLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WaitingLaw::Exponential { rate } if rate > 0.0 => Ok(()),
            WaitingLaw::MittagLeffler { beta } if beta > 0.0 && beta <= 1.0 => Ok(()),
            WaitingLaw::Pareto { beta, theta } if beta > 0.0 && beta < 1.0 && theta > 0.0 => {
                Ok(())
            }
            _ => Err(CoreError::Domain(format!(
                "invalid waiting law parameters: {self:?}"
            ))),
        }
    }

    /// Tail exponent: 1 for finite-mean laws.
    pub fn beta(&self) -> f64 {
        match *self {
            WaitingLaw::Exponential { .. } => 1.0,
            WaitingLaw::MittagLeffler { beta } => beta,
            WaitingLaw::Pareto { beta, .. } => beta,
        }
    }

    /// The scale constant in `1 - laplace(s) ~ lambda s^beta`:
    /// the mean for finite-mean laws, `c pi / (Gamma(beta+1) sin(beta pi))`
    /// for power tails.
    pub fn lambda(&self) -> f64 {
        match *self {
            WaitingLaw::Exponential { rate } => 1.0 / rate,
            WaitingLaw::MittagLeffler { .. } => 1.0,
            WaitingLaw::Pareto { beta, theta } => {
                let c = beta * theta.powf(beta);
                c * PI / (gamma(beta + 1.0) * (beta * PI).sin())
            }
        }
    }

    /// Tail constant `c` in `survival(t) ~ (c/beta) t^{-beta}`; only
    /// power-tail laws carry one.
    pub fn tail_c(&self) -> Option<f64> {
        match *self {
            WaitingLaw::Pareto { beta, theta } => Some(beta * theta.powf(beta)),
            _ => None,
        }
    }

    /// Survival probability `P(T > t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        match *self {
            WaitingLaw::Exponential { rate } => Ok((-rate * t).exp()),
            WaitingLaw::MittagLeffler { beta } => ml_survival(beta, t),
            WaitingLaw::Pareto { beta, theta } => Ok((1.0 + t / theta).powf(-beta)),
        }
    }

    /// Draw one waiting time.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            WaitingLaw::Exponential { rate } => -open01(rng).ln() / rate,
            WaitingLaw::MittagLeffler { beta } => sample_mittag_leffler(beta, rng),
            WaitingLaw::Pareto { beta, theta } => {
                theta * (open01(rng).powf(-1.0 / beta) - 1.0)
            }
        }
    }

    /// Laplace transform `phi(s)` of the waiting density.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0) - self.one_minus_laplace(s)?)
    }

    /// `1 - phi(s)`, computed without cancellation; the quantity the
    /// thinning and scaling-limit algebra actually consumes.
    pub fn one_minus_laplace(&self, s: Complex64) -> Result<Complex64> {
        match *self {
            WaitingLaw::Exponential { rate } => Ok(s / (s + rate)),
            WaitingLaw::MittagLeffler { beta } => {
                let sb = s.powf(beta);
                Ok(sb / (sb + 1.0))
            }
            WaitingLaw::Pareto { beta, theta } => {
                // 1 - phi(s) = s * integral_0^inf e^{-st} (1 + t/theta)^{-beta} dt
                if s.re <= 0.0 {
                    return Err(CoreError::Domain(
                        "Laplace transform needs Re s > 0".into(),
                    ));
                }
                let t_max = 46.0 / s.re;
                let q = integrate_complex(
                    |t| (-s * t).exp() * (1.0 + t / theta).powf(-beta),
                    0.0,
                    t_max,
                    1e-13,
                    1e-12,
                )?;
                Ok(s * q.value)
            }
        }
    }
}

/// Symmetric jump distribution of a random walk (plus the unit-drift
/// degenerate law that embeds counting processes).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JumpLaw {
    /// +-1 with probability 1/2 each.
    TwoPoint,
    /// Centered Gaussian with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Symmetrized pure power law: `|X| = theta U^{-1/alpha}`, sign fair.
    SymPareto { alpha: f64, theta: f64 },
    /// Symmetric stable law with characteristic function `exp(-|k|^alpha)`.
    SymStable { alpha: f64 },
    /// Deterministic jump of +1 (renewal embedding); not symmetric.
    UnitDrift,
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpLaw::TwoPoint | JumpLaw::UnitDrift => Ok(()),
            JumpLaw::Gaussian { sigma } if sigma > 0.0 => Ok(()),
            JumpLaw::SymPareto { alpha, theta } if alpha > 0.0 && alpha < 2.0 && theta > 0.0 => {
                Ok(())
            }
            JumpLaw::SymStable { alpha } if alpha > 0.0 && alpha <= 2.0 => Ok(()),
            _ => Err(CoreError::Domain(format!(
                "invalid jump law parameters: {self:?}"
            ))),
        }
    }

    /// Tail exponent; 2 for finite-variance laws.
    pub fn alpha(&self) -> f64 {
        match *self {
            JumpLaw::TwoPoint | JumpLaw::Gaussian { .. } => 2.0,
            JumpLaw::SymPareto { alpha, .. } => alpha,
            JumpLaw::SymStable { alpha } => alpha,
            JumpLaw::UnitDrift => f64::NAN,
        }
    }

    /// Second moment, where finite.
    pub fn sigma2(&self) -> Option<f64> {
        match *self {
            JumpLaw::TwoPoint => Some(1.0),
            JumpLaw::Gaussian { sigma } => Some(sigma * sigma),
            JumpLaw::SymStable { alpha } if alpha == 2.0 => Some(2.0),
            JumpLaw::UnitDrift => Some(1.0),
            _ => None,
        }
    }

    /// One-sided tail constant `b` in `P(X > x) ~ b x^{-alpha} / alpha`;
    /// our symmetrized power law puts half its tail mass on each side,
    /// so `b = alpha theta^alpha / 2`.
    pub fn tail_b(&self) -> Option<f64> {
        match *self {
            JumpLaw::SymPareto { alpha, theta } => Some(alpha * theta.powf(alpha) / 2.0),
            _ => None,
        }
    }

    /// The scale constant in `1 - fourier(k) ~ mu |k|^alpha`:
    /// `sigma^2/2` for finite variance, `b pi / (Gamma(alpha+1) sin(alpha pi/2))`
    /// for power tails, exactly 1 for the stable law.
    pub fn mu(&self) -> Option<f64> {
        match *self {
            JumpLaw::TwoPoint => Some(0.5),
            JumpLaw::Gaussian { sigma } => Some(sigma * sigma / 2.0),
            JumpLaw::SymPareto { alpha, theta } => {
                let b = alpha * theta.powf(alpha) / 2.0;
                Some(b * PI / (gamma(alpha + 1.0) * (alpha * PI / 2.0).sin()))
            }
            JumpLaw::SymStable { .. } => Some(1.0),
            JumpLaw::UnitDrift => None,
        }
    }

    /// Draw one jump.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            JumpLaw::TwoPoint => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            JumpLaw::Gaussian { sigma } => {
                Normal::new(0.0, sigma).unwrap().sample(rng)
            }
            JumpLaw::SymPareto { alpha, theta } => {
                let mag = theta * (1.0 - open01(rng)).powf(-1.0 / alpha);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            JumpLaw::SymStable { alpha } => sample_sym_stable(alpha, rng),
            JumpLaw::UnitDrift => 1.0,
        }
    }

    /// Characteristic function `w(k) = E[exp(i k X)]`.
    pub fn fourier(&self, kappa: f64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0) - self.one_minus_fourier(kappa)?)
    }

    /// `1 - w(k)` without cancellation.
    pub fn one_minus_fourier(&self, kappa: f64) -> Result<Complex64> {
        match *self {
            JumpLaw::TwoPoint => {
                let s = (kappa / 2.0).sin();
                Ok(Complex64::new(2.0 * s * s, 0.0))
            }
            JumpLaw::Gaussian { sigma } => Ok(Complex64::new(
                -(-sigma * sigma * kappa * kappa / 2.0).exp_m1(),
                0.0,
            )),
            JumpLaw::SymPareto { alpha, theta } => {
                Ok(Complex64::new(sym_pareto_one_minus_cf(alpha, theta, kappa)?, 0.0))
            }
            JumpLaw::SymStable { alpha } => Ok(Complex64::new(
                -(-kappa.abs().powf(alpha)).exp_m1(),
                0.0,
            )),
            JumpLaw::UnitDrift => Ok(Complex64::new(1.0, 0.0) - Complex64::new(0.0, kappa).exp()),
        }
    }
}

/// `1 - w(k)` for the symmetrized power law
/// `w(k) = alpha theta^alpha int_theta^inf cos(k x) x^{-alpha-1} dx`:
/// after `y = |k| x`,
/// `1 - w(k) = alpha (theta |k|)^alpha [C_alpha - int_0^{theta |k|} (1-cos y) y^{-alpha-1} dy]`
/// with `C_alpha = pi / (2 Gamma(alpha+1) sin(alpha pi/2))`.
fn sym_pareto_one_minus_cf(alpha: f64, theta: f64, kappa: f64) -> Result<f64> {
    let k = kappa.abs();
    if k == 0.0 {
        return Ok(0.0);
    }
    let z = theta * k;
    let c_alpha = PI / (2.0 * gamma(alpha + 1.0) * (alpha * PI / 2.0).sin());
    if z < 30.0 {
        let q = crate::quad::integrate(
            |y| {
                if y <= 0.0 {
                    return 0.0;
                }
                let one_minus_cos = 2.0 * (y / 2.0).sin().powi(2);
                one_minus_cos * y.powf(-alpha - 1.0)
            },
            0.0,
            z,
            1e-14,
            1e-12,
        )?;
        Ok(alpha * z.powf(alpha) * (c_alpha - q.value))
    } else {
        // far regime: w(k) itself is the small quantity
        // 1 - w = 1 - alpha z^alpha int_z^inf cos(y) y^{-alpha-1} dy
        let tail = crate::quad::cos_tail_moment(alpha + 1.0, z)?;
        Ok(1.0 - alpha * z.powf(alpha) * tail)
    }
}

#[inline]
fn open01(rng: &mut ChaCha8Rng) -> f64 {
    // uniform on (0, 1), never exactly 0 or 1
    loop {
        let u: f64 = rng.random();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

/// Mittag-Leffler waiting time by the two-uniform closed form
/// `T = -ln U (sin(b pi)/tan(b pi V) - cos(b pi))^{1/b}`.
pub fn sample_mittag_leffler(beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    debug_assert!(beta > 0.0 && beta <= 1.0);
    let u = open01(rng);
    if beta == 1.0 {
        return -u.ln();
    }
    let v = open01(rng);
    let bp = beta * PI;
    let factor = bp.sin() / (bp * v).tan() - bp.cos();
    -u.ln() * factor.powf(1.0 / beta)
}

/// Reference sampler: inversion of the survival function by bisection,
/// bracketed from the small- and large-argument behaviour.  Slow but
/// grounded directly in `E_beta(-t^beta)`; used to validate the closed
/// form above.
pub fn sample_mittag_leffler_by_inversion(beta: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let u = open01(rng); // target survival value
    mittag_leffler_quantile(beta, u)
}

/// Solve `E_beta(-t^beta) = u` for `t`.
pub fn mittag_leffler_quantile(beta: f64, u: f64) -> Result<f64> {
    if !(0.0 < u && u < 1.0) {
        return Err(CoreError::Domain(format!(
            "survival level must lie in (0,1), got {u}"
        )));
    }
    // brackets from the two power laws: 1 - t^beta/Gamma(1+beta) near 0,
    // t^{-beta}/Gamma(1-beta) at infinity
    let small = ((1.0 - u) * gamma(1.0 + beta)).powf(1.0 / beta);
    let large = (u * gamma(1.0 - beta)).powf(-1.0 / beta);
    let mut lo = 0.25 * small.min(large);
    let mut hi = 4.0 * small.max(large);
    while ml_survival(beta, lo)? < u {
        lo *= 0.25;
    }
    while ml_survival(beta, hi)? > u {
        hi *= 4.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ml_survival(beta, mid)? > u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Positive stable variate with Laplace transform `exp(-s^beta)`
/// (uniform-exponential transformation method).
pub fn sample_one_sided_stable(beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    debug_assert!(beta > 0.0 && beta < 1.0);
    let u = open01(rng) * PI;
    let w = -open01(rng).ln();
    let s1 = (beta * u).sin() / u.sin().powf(1.0 / beta);
    let s2 = (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    s1 * s2
}

/// Symmetric stable variate with characteristic function `exp(-|k|^alpha)`
/// (uniform-exponential transformation method; Gaussian shortcut at
/// `alpha = 2`).
pub fn sample_sym_stable(alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 2.0);
    if alpha == 2.0 {
        // cf exp(-k^2) means variance 2
        return Normal::new(0.0, std::f64::consts::SQRT_2)
            .unwrap()
            .sample(rng);
    }
    let v = (open01(rng) - 0.5) * PI;
    let w = -open01(rng).ln();
    if alpha == 1.0 {
        return v.tan();
    }
    let s1 = (alpha * v).sin() / v.cos().powf(1.0 / alpha);
    let s2 = (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha);
    s1 * s2
}
