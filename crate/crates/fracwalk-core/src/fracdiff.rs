//! The space-time fractional Cauchy problem: characteristic function,
//! Fourier-inversion densities, the inverse-stable subordorator density,
//! the subordination integral, moment formulas, and the parametric
//! subordination sampler.
//!
//! The evolution operators enter only through their transform symbols
//! (`s^beta` in Laplace time, `-|kappa|^alpha` in Fourier space); the
//! solution has `u(kappa, t) = E_beta(-|kappa|^alpha t^beta)` and can be
//! reached three independent ways: cosine inversion of that transform,
//! the subordination integral over the stable density, and Monte Carlo.

use crate::error::{CoreError, Result};
use crate::quad::{cos_tail_moment, integrate};
use crate::rng::RngStream;
use crate::special::mittag_leffler::ml_one_real;
use crate::special::mwright::{mwright_eval, mwright_support_cut, Z_MW_MAX};
use crate::special::stable::{one_sided_stable_density, symmetric_stable_density};
use crate::variates::{sample_one_sided_stable, sample_sym_stable};
use rayon::prelude::*;
use statrs::function::gamma::gamma;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

/// Parameter regimes of the Cauchy problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// alpha = 2, beta = 1: classical heat kernel.
    Normal,
    /// alpha = 2, beta < 1.
    TimeFractional,
    /// alpha < 2, beta = 1.
    SpaceFractional,
    /// both exponents fractional.
    General,
}

/// A space-time fractional diffusion problem at a fixed evolution time.
#[derive(Clone, Copy, Debug)]
pub struct FracDiffProblem {
    /// Spatial exponent in (0, 2].
    pub alpha: f64,
    /// Temporal exponent in (0, 1].
    pub beta: f64,
    /// Evolution time > 0.
    pub t: f64,
}

impl FracDiffProblem {
    pub fn new(alpha: f64, beta: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(CoreError::Domain(format!("spatial exponent {alpha}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(CoreError::Domain(format!("temporal exponent {beta}")));
        }
        if !(t > 0.0) {
            return Err(CoreError::Domain(format!("evolution time {t}")));
        }
        Ok(FracDiffProblem { alpha, beta, t })
    }

    pub fn regime(&self) -> Regime {
        match (self.alpha == 2.0, self.beta == 1.0) {
            (true, true) => Regime::Normal,
            (true, false) => Regime::TimeFractional,
            (false, true) => Regime::SpaceFractional,
            (false, false) => Regime::General,
        }
    }

    /// Characteristic function `E_beta(-|kappa|^alpha t^beta)`.
    pub fn char_function(&self, kappa: f64) -> Result<f64> {
        let y = kappa.abs().powf(self.alpha) * self.t.powf(self.beta);
        if self.beta == 1.0 {
            return Ok((-y).exp());
        }
        Ok(ml_one_real(self.beta, -y)?.value)
    }

    /// Variance of the solution: finite only for `alpha = 2`.
    pub fn variance(&self) -> Variance {
        if self.alpha == 2.0 {
            Variance::Finite(2.0 * self.t.powf(self.beta) / gamma(1.0 + self.beta))
        } else {
            Variance::Infinite
        }
    }

    /// Solution density by cosine inversion of the characteristic
    /// function, `u(x,t) = (1/pi) int_0^inf cos(kappa x) E_beta(...) dkappa`.
    pub fn density_fourier(&self, x_grid: &[f64]) -> Result<Vec<f64>> {
        x_grid.iter().map(|&x| self.density_fourier_at(x)).collect()
    }

    pub fn density_fourier_at(&self, x: f64) -> Result<f64> {
        let (alpha, beta, t) = (self.alpha, self.beta, self.t);
        let x = x.abs();
        // closed forms and the beta = 1 degeneracy (pure stable density)
        if beta == 1.0 {
            return symmetric_stable_density(alpha, x, t);
        }
        if alpha <= 1.0 && x == 0.0 {
            return Err(CoreError::Domain(format!(
                "u(0, t) diverges for alpha = {alpha} <= 1 with beta < 1"
            )));
        }
        // integrate the spline-cached transform out to where the
        // asymptotic expansion takes over
        let y_cut = Y_SPLINE_MAX;
        let k_cut = (y_cut / t.powf(beta)).powf(1.0 / alpha);
        let spline = ml_neg_spline(beta);
        let spline = spline.borrow();
        let q = integrate(
            |k| {
                let y = k.powf(alpha) * t.powf(beta);
                (k * x).cos() * spline.eval(y)
            },
            0.0,
            k_cut,
            1e-11,
            1e-10,
        )?;
        // asymptotic tail: E_b(-y) ~ sum_m (-1)^{m-1} y^{-m} / Gamma(1 - m b)
        let mut tail = 0.0;
        let mut prev_mag = f64::INFINITY;
        for m in 1..=6 {
            let coeff = {
                let g_arg = 1.0 - m as f64 * beta;
                let rg = crate::special::gamma_dd::recip_gamma_scaled(
                    crate::dd::Dd::from_f64(g_arg),
                )
                .to_dd()
                .to_f64();
                (-1.0f64).powi(m as i32 - 1) * t.powf(-(m as f64) * beta) * rg
            };
            let s_exp = m as f64 * alpha;
            let moment = if x == 0.0 {
                if s_exp <= 1.0 {
                    return Err(CoreError::Domain(
                        "non-integrable transform tail at x = 0".into(),
                    ));
                }
                k_cut.powf(1.0 - s_exp) / (s_exp - 1.0)
            } else {
                x.powf(s_exp - 1.0) * cos_tail_moment(s_exp, k_cut * x)?
            };
            let term = coeff * moment;
            if term.abs() > prev_mag {
                break;
            }
            tail += term;
            prev_mag = term.abs();
        }
        Ok((q.value + tail) / PI)
    }

    /// Solution density through the subordination integral
    /// `u(x,t) = int_0^inf f_alpha(x, r) q0(r, t) dr`, evaluated in the
    /// similarity variable `r = t^beta z`.
    pub fn density_subordination(&self, x_grid: &[f64]) -> Result<Vec<f64>> {
        x_grid
            .iter()
            .map(|&x| self.density_subordination_at(x))
            .collect()
    }

    pub fn density_subordination_at(&self, x: f64) -> Result<f64> {
        let (alpha, beta, t) = (self.alpha, self.beta, self.t);
        if beta == 1.0 {
            // physical and operational time coincide
            return symmetric_stable_density(alpha, x, t);
        }
        if alpha <= 1.0 && x == 0.0 {
            return Err(CoreError::Domain(format!(
                "u(0, t) diverges for alpha = {alpha} <= 1 with beta < 1"
            )));
        }
        if beta > BETA_SPIKE {
            // near the degenerate limit the operational-time density is a
            // spike around z = 1 whose peak lies beyond any series range;
            // evaluate by moment matching (exact through second moments)
            let m1 = 1.0 / gamma(1.0 + beta);
            let var = 2.0 / gamma(1.0 + 2.0 * beta) - m1 * m1;
            let r0 = t.powf(beta) * m1;
            let f0 = symmetric_stable_density(alpha, x, r0)?;
            let dr = (0.25 * var.sqrt() * t.powf(beta)).max(1e-6 * r0);
            let fp = symmetric_stable_density(alpha, x, r0 + dr)?;
            let fm = symmetric_stable_density(alpha, x, (r0 - dr).max(1e-300))?;
            let f_rr = (fp - 2.0 * f0 + fm) / (dr * dr);
            return Ok(f0 + 0.5 * f_rr * var * t.powf(2.0 * beta));
        }
        let z_cut = mwright_support_cut(beta, (1e-16f64).ln());
        let tb = t.powf(beta);
        if x == 0.0 {
            // f_alpha(0, r) ~ r^{-1/alpha}: flatten the endpoint
            // singularity with z = v^p, p = alpha/(alpha-1)
            let p_exp = alpha / (alpha - 1.0);
            let q = integrate(
                |v| {
                    if v <= 0.0 {
                        return 0.0;
                    }
                    let z = v.powf(p_exp);
                    let m = mwright_eval(beta, z).map(|e| e.value).unwrap_or(0.0);
                    if m == 0.0 {
                        return 0.0;
                    }
                    let f = symmetric_stable_density(alpha, 0.0, tb * z).unwrap_or(0.0);
                    m * f * p_exp * v.powf(p_exp - 1.0)
                },
                0.0,
                z_cut.powf(1.0 / p_exp),
                1e-9,
                1e-8,
            )?;
            return Ok(q.value);
        }
        let q = integrate(
            |z| {
                if z <= 0.0 {
                    return 0.0;
                }
                let m = mwright_eval(beta, z).map(|e| e.value).unwrap_or(0.0);
                if m == 0.0 {
                    return 0.0;
                }
                m * symmetric_stable_density(alpha, x, tb * z).unwrap_or(0.0)
            },
            0.0,
            z_cut,
            1e-9,
            1e-8,
        )?;
        Ok(q.value)
    }
}

/// A variance that may be infinite (heavy spatial tails).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Variance {
    Finite(f64),
    Infinite,
}

/// Density `q0(r, t) = t^{-beta} M_beta(r t^{-beta})` of the operational
/// time at physical time `t` (the inverse one-sided stable process).
pub fn subordinator_density(beta: f64, r: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::Domain(format!("subordinator exponent {beta}")));
    }
    if !(t > 0.0) || !(r >= 0.0) {
        return Err(CoreError::Domain(format!("bad (r, t) = ({r}, {t})")));
    }
    let tb = t.powf(-beta);
    if r * tb > Z_MW_MAX {
        return Ok(0.0);
    }
    Ok(tb * mwright_eval(beta, r * tb)?.value)
}

/// The same density through the one-sided stable form
/// `(t/beta) r^{-1-1/beta} L_beta(t r^{-1/beta})`; an independent code
/// path used for cross-validation.
pub fn subordinator_density_via_stable(beta: f64, r: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::Domain(format!("subordinator exponent {beta}")));
    }
    if !(r > 0.0) || !(t > 0.0) {
        return Err(CoreError::Domain(format!("bad (r, t) = ({r}, {t})")));
    }
    let arg = t * r.powf(-1.0 / beta);
    Ok(t / beta * r.powf(-1.0 - 1.0 / beta) * one_sided_stable_density(beta, arg)?)
}

/// Laplace-domain solution `s^{beta-1} exp(-r s^beta)` of the
/// fractional drift problem; zero for `r < 0`.
pub fn drift_solution_transform(beta: f64, r: f64, s: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CoreError::Domain(format!("drift exponent {beta}")));
    }
    if !(s > 0.0) {
        return Err(CoreError::Domain(format!("transform variable {s}")));
    }
    if r < 0.0 {
        return Ok(0.0);
    }
    Ok(s.powf(beta - 1.0) * (-r * s.powf(beta)).exp())
}

/// One point of a parametric-subordination trajectory.
#[derive(Clone, Copy, Debug)]
pub struct SubordinationPair {
    /// Operational time `t_*` on the generating grid.
    pub operational_time: f64,
    /// Physical time `t(t_*)`, nondecreasing.
    pub physical_time: f64,
    /// Position `y(t_*)`.
    pub position: f64,
}

/// Simulate one trajectory of the parametric representation
/// `t = t(t_*), x = y(t_*)` on an operational-time grid of step
/// `dt_star`: flash-light shots of true particle positions.
pub fn simulate_parametric_subordination(
    p: &FracDiffProblem,
    dt_star: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<Vec<SubordinationPair>> {
    if !(dt_star > 0.0) {
        return Err(CoreError::Domain(format!("operational step {dt_star}")));
    }
    let mut rng = stream.rng();
    let dt_time = dt_star.powf(1.0 / p.beta);
    let dt_space = dt_star.powf(1.0 / p.alpha);
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut t_phys = 0.0;
    let mut x = 0.0;
    out.push(SubordinationPair {
        operational_time: 0.0,
        physical_time: 0.0,
        position: 0.0,
    });
    for k in 1..=n_steps {
        t_phys += if p.beta == 1.0 {
            dt_star
        } else {
            sample_one_sided_stable(p.beta, &mut rng) * dt_time
        };
        x += sample_sym_stable(p.alpha, &mut rng) * dt_space;
        out.push(SubordinationPair {
            operational_time: k as f64 * dt_star,
            physical_time: t_phys,
            position: x,
        });
    }
    Ok(out)
}

/// Walk the parametric trajectory until the physical time crosses
/// `t_target`; returns the crossing operational time and the position
/// there (the value of the inverse subordinator and of the walk).
pub fn sample_position_at(
    p: &FracDiffProblem,
    t_target: f64,
    dt_star: f64,
    stream: RngStream,
) -> Result<(f64, f64)> {
    if !(dt_star > 0.0 && t_target > 0.0) {
        return Err(CoreError::Domain(format!(
            "bad subordination request (t = {t_target}, dt = {dt_star})"
        )));
    }
    let mut rng = stream.rng();
    let dt_time = dt_star.powf(1.0 / p.beta);
    let dt_space = dt_star.powf(1.0 / p.alpha);
    let mut t_phys = 0.0;
    let mut x = 0.0;
    let mut k = 0usize;
    let cap = 100_000_000;
    loop {
        let dt = if p.beta == 1.0 {
            dt_star
        } else {
            sample_one_sided_stable(p.beta, &mut rng) * dt_time
        };
        if t_phys + dt > t_target {
            // the particle sits at y(t_*) for the whole increment
            return Ok(((k as f64 + 0.5) * dt_star, x));
        }
        t_phys += dt;
        x += sample_sym_stable(p.alpha, &mut rng) * dt_space;
        k += 1;
        if k >= cap {
            return Err(CoreError::Budget(
                "subordination walk exceeded its step budget".into(),
            ));
        }
    }
}

/// Ensemble of positions (and inverse-subordinator values) at a fixed
/// physical time, one stream per path.
pub fn simulate_subordination_ensemble(
    p: &FracDiffProblem,
    t_target: f64,
    dt_star: f64,
    n_paths: usize,
    base: RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let pairs: Vec<(f64, f64)> = (0..n_paths)
        .into_par_iter()
        .map(|i| sample_position_at(p, t_target, dt_star, base.substream(i as u64)))
        .collect::<Result<_>>()?;
    Ok(pairs.into_iter().unzip())
}

// ---------------------------------------------------------------------
// cached spline of E_beta(-y) on [0, Y_SPLINE_MAX]
// ---------------------------------------------------------------------

/// Above this the asymptotic expansion of the transform is used instead.
const Y_SPLINE_MAX: f64 = 100.0;
/// Exponents beyond this use the degenerate (moment-matched) form of
/// the subordination integral.
const BETA_SPIKE: f64 = 0.995;
const SPLINE_KNOTS: usize = 16001;

struct MlNegSpline {
    dy: f64,
    values: Vec<f64>,
}

impl MlNegSpline {
    fn build(beta: f64) -> Result<Self> {
        let dy = Y_SPLINE_MAX / (SPLINE_KNOTS - 1) as f64;
        let values = (0..SPLINE_KNOTS)
            .map(|i| Ok(ml_one_real(beta, -(i as f64) * dy)?.value))
            .collect::<Result<Vec<f64>>>()?;
        Ok(MlNegSpline { dy, values })
    }

    /// Four-point Lagrange interpolation on the uniform grid; error
    /// O(dy^4) ~ 1e-9 here.
    fn eval(&self, y: f64) -> f64 {
        debug_assert!((0.0..=Y_SPLINE_MAX).contains(&y));
        let fi = y / self.dy;
        let i1 = (fi.floor() as usize).clamp(1, SPLINE_KNOTS - 3);
        let s = fi - i1 as f64; // in [0, 1) away from the edges
        let (f0, f1, f2, f3) = (
            self.values[i1 - 1],
            self.values[i1],
            self.values[i1 + 1],
            self.values[i1 + 2],
        );
        // cubic through nodes at s = -1, 0, 1, 2
        let a = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let b = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let c = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let d = (s + 1.0) * s * (s - 1.0) / 6.0;
        a * f0 + b * f1 + c * f2 + d * f3
    }
}

thread_local! {
    static SPLINES: RefCell<HashMap<u64, Rc<RefCell<MlNegSpline>>>> =
        RefCell::new(HashMap::new());
}

fn ml_neg_spline(beta: f64) -> Rc<RefCell<MlNegSpline>> {
    SPLINES.with(|t| {
        t.borrow_mut()
            .entry(beta.to_bits())
            .or_insert_with(|| {
                Rc::new(RefCell::new(
                    MlNegSpline::build(beta).expect("spline build cannot fail in (0,1)"),
                ))
            })
            .clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{empirical_mean_stderr, total_variation};

    const E_HALF_M1: f64 = 0.427583576155807004410750344491;

    #[test]
    fn regimes() {
        assert_eq!(FracDiffProblem::new(2.0, 1.0, 1.0).unwrap().regime(), Regime::Normal);
        assert_eq!(
            FracDiffProblem::new(2.0, 0.5, 1.0).unwrap().regime(),
            Regime::TimeFractional
        );
        assert_eq!(
            FracDiffProblem::new(1.5, 1.0, 1.0).unwrap().regime(),
            Regime::SpaceFractional
        );
        assert_eq!(
            FracDiffProblem::new(1.5, 0.5, 1.0).unwrap().regime(),
            Regime::General
        );
    }

    #[test]
    fn char_function_values() {
        let p = FracDiffProblem::new(2.0, 1.0, 1.0).unwrap();
        assert!((p.char_function(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(p.char_function(0.0).unwrap(), 1.0);
        let p = FracDiffProblem::new(2.0, 0.5, 1.0).unwrap();
        assert!((p.char_function(1.0).unwrap() - E_HALF_M1).abs() < 1e-12);
        // even in kappa
        assert_eq!(
            p.char_function(-1.3).unwrap(),
            p.char_function(1.3).unwrap()
        );
    }

    #[test]
    fn variance_formulas() {
        let p = FracDiffProblem::new(2.0, 1.0, 3.0).unwrap();
        assert_eq!(p.variance(), Variance::Finite(6.0));
        let p = FracDiffProblem::new(2.0, 0.5, 1.0).unwrap();
        match p.variance() {
            Variance::Finite(v) => {
                assert!((v - 2.0 / gamma(1.5)).abs() < 1e-14, "{v}")
            }
            _ => panic!(),
        }
        let p = FracDiffProblem::new(1.5, 1.0, 1.0).unwrap();
        assert_eq!(p.variance(), Variance::Infinite);
    }

    #[test]
    fn fourier_degenerate_cases() {
        // (2, 1): Gaussian with variance 2t
        let p = FracDiffProblem::new(2.0, 1.0, 0.8).unwrap();
        for &x in &[0.0, 0.7, 2.5] {
            let u = p.density_fourier_at(x).unwrap();
            let expect = (4.0 * PI * 0.8).sqrt().recip() * (-x * x / 3.2).exp();
            assert!((u - expect).abs() < 1e-6, "x={x}");
        }
        // (1, 1): Cauchy
        let p = FracDiffProblem::new(1.0, 1.0, 2.0).unwrap();
        for &x in &[0.0, 1.0, 5.0] {
            let u = p.density_fourier_at(x).unwrap();
            let expect = 2.0 / (PI * (x * x + 4.0));
            assert!((u - expect).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn fourier_route_is_symmetric_and_normalized() {
        let p = FracDiffProblem::new(1.5, 0.75, 1.0).unwrap();
        assert_eq!(
            p.density_fourier_at(-1.2).unwrap(),
            p.density_fourier_at(1.2).unwrap()
        );
        // normalization with the analytic power tail beyond the grid
        let x_cut = 50.0;
        let q = integrate(|x| p.density_fourier_at(x).unwrap(), 0.0, x_cut, 1e-7, 1e-7)
            .unwrap();
        let c_alpha = gamma(1.0 + p.alpha) * (p.alpha * PI / 2.0).sin() / PI;
        let tail = c_alpha * p.t.powf(p.beta) / gamma(1.0 + p.beta) / p.alpha
            * x_cut.powf(-p.alpha);
        let total = 2.0 * (q.value + tail);
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }

    #[test]
    fn origin_divergence_for_small_alpha() {
        let p = FracDiffProblem::new(1.0, 0.9, 1.0).unwrap();
        assert!(p.density_fourier_at(0.0).is_err());
        assert!(p.density_fourier_at(0.5).is_ok());
    }

    #[test]
    fn subordinator_density_identities() {
        // normalization over r at a few times
        for &t in &[0.5f64, 1.0, 2.0] {
            let beta = 0.6;
            let cut = mwright_support_cut(beta, -36.0) * t.powf(beta);
            let q = integrate(
                |r| subordinator_density(beta, r, t).unwrap_or(0.0),
                0.0,
                cut,
                1e-9,
                1e-9,
            )
            .unwrap();
            assert!((q.value - 1.0).abs() < 1e-6, "t={t}: {}", q.value);
        }
        // Laplace-type integral equals E_beta(-y t^beta)
        for &y in &[0.5f64, 1.0, 2.0] {
            for &t in &[0.5f64, 1.0, 2.0] {
                let beta = 0.5;
                let cut = mwright_support_cut(beta, -40.0) * t.powf(beta);
                let q = integrate(
                    |r| (-y * r).exp() * subordinator_density(beta, r, t).unwrap_or(0.0),
                    0.0,
                    cut,
                    1e-9,
                    1e-9,
                )
                .unwrap();
                let expect = ml_one_real(beta, -y * t.powf(beta)).unwrap().value;
                assert!(
                    (q.value - expect).abs() < 1e-6,
                    "y={y} t={t}: {} vs {expect}",
                    q.value
                );
            }
        }
        // closed value at beta = 1/2, r = t = 1
        let q = subordinator_density(0.5, 1.0, 1.0).unwrap();
        assert!((q - (-0.25f64).exp() / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn subordinator_two_forms_agree() {
        for &beta in &[0.3, 0.5, 0.75] {
            for &(r, t) in &[(0.5, 1.0), (1.0, 1.0), (2.0, 0.7), (0.2, 2.0)] {
                let a = subordinator_density(beta, r, t).unwrap();
                let b = subordinator_density_via_stable(beta, r, t).unwrap();
                assert!(
                    (a - b).abs() < 1e-8 * a.abs().max(1e-8),
                    "beta={beta} r={r} t={t}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn subordinator_self_similarity() {
        // q0(r, t) = t^{-beta} Q0(r / t^beta) by construction; check the
        // scaling numerically at scattered points
        let beta = 0.7;
        for &(r, t) in &[(0.3, 0.5), (1.0, 2.0), (2.0, 1.3), (0.1, 3.0)] {
            let lhs = subordinator_density(beta, r, t).unwrap();
            let z = r * t.powf(-beta);
            let rhs = t.powf(-beta) * subordinator_density(beta, z, 1.0).unwrap();
            assert!(
                (lhs - rhs).abs() < 1e-12 * lhs.abs().max(1e-12),
                "r={r} t={t}"
            );
        }
    }

    #[test]
    fn drift_transform_and_inversion() {
        // direct value
        let v = drift_solution_transform(0.5, 1.0, 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(drift_solution_transform(0.5, -1.0, 1.0).unwrap(), 0.0);
        // Talbot inversion in s reproduces the subordinator density
        let (beta, r) = (0.5, 1.0);
        let (v, _) = crate::talbot::invert(
            |s| s.powf(beta - 1.0) * (-r * s.powf(beta)).exp(),
            1.0,
            1e-7,
        )
        .unwrap();
        let expect = subordinator_density(beta, r, 1.0).unwrap();
        assert!((v - expect).abs() < 1e-6, "{v} vs {expect}");
        // beta -> 1: the pair degenerates to exp(-r s) <-> delta(t - r);
        // verified as a limit: the density's mass concentrates in
        // [r - eps, r + eps] more and more tightly
        let r = 1.5;
        let mass_near = |beta: f64| {
            crate::quad::integrate(
                |t| subordinator_density_t_marginal(beta, r, t),
                r - 0.5,
                r + 0.5,
                1e-7,
                1e-7,
            )
            .unwrap()
            .value
        };
        let m90 = mass_near(0.90);
        let m98 = mass_near(0.98);
        assert!(m98 > m90 && m98 > 0.8, "m(0.90)={m90} m(0.98)={m98}");
    }

    /// density in t of the stable time process at operational time r,
    /// i.e. the inverse Laplace transform of s^{beta-1} exp(-r s^beta)
    /// performed numerically
    fn subordinator_density_t_marginal(beta: f64, r: f64, t: f64) -> f64 {
        crate::talbot::talbot_fixed(
            &|s: num_complex::Complex64| s.powf(beta - 1.0) * (-r * s.powf(beta)).exp(),
            t,
            24,
        )
    }

    #[test]
    fn fourier_vs_subordination_time_fractional() {
        let p = FracDiffProblem::new(2.0, 0.5, 1.0).unwrap();
        for &x in &[0.0, 0.5, 1.0, 2.0, 3.5, 5.0] {
            let a = p.density_fourier_at(x).unwrap();
            let b = p.density_subordination_at(x).unwrap();
            assert!((a - b).abs() < 1e-4, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn fourier_vs_subordination_general() {
        let p = FracDiffProblem::new(1.5, 0.75, 1.0).unwrap();
        for &x in &[0.0, 0.5, 1.0, 2.0, 5.0] {
            let a = p.density_fourier_at(x).unwrap();
            let b = p.density_subordination_at(x).unwrap();
            assert!((a - b).abs() < 1e-4, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn subordination_approaches_stable_as_beta_to_one() {
        let p = FracDiffProblem::new(1.5, 0.999, 1.0).unwrap();
        for &x in &[0.3, 1.0, 2.0] {
            let u = p.density_subordination_at(x).unwrap();
            let f = symmetric_stable_density(1.5, x, 1.0).unwrap();
            assert!((u - f).abs() < 1e-2, "x={x}: {u} vs {f}");
        }
    }

    #[test]
    fn fourier_similarity_scaling() {
        // u(x, t) = t^{-b/a} u(x t^{-b/a}, 1)
        let p1 = FracDiffProblem::new(1.5, 0.75, 2.0).unwrap();
        let p2 = FracDiffProblem::new(1.5, 0.75, 1.0).unwrap();
        let scale = 2.0f64.powf(-0.75 / 1.5);
        for &x in &[0.4, 1.0, 3.0] {
            let lhs = p1.density_fourier_at(x).unwrap();
            let rhs = scale * p2.density_fourier_at(x * scale).unwrap();
            assert!((lhs - rhs).abs() < 1e-6, "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn transform_domain_residual() {
        // the Fourier-Laplace solution satisfies
        // s^{b-1} (s u - 1) = -|k|^a u with u = s^{b-1}/(|k|^a + s^b)
        for &(alpha, beta) in &[(2.0, 0.5), (1.5, 0.75), (1.0, 0.9)] {
            for &(k, s) in &[(0.5f64, 1.0f64), (1.0, 0.5), (2.0, 2.0)] {
                let u = s.powf(beta - 1.0) / (k.powf(alpha) + s.powf(beta));
                let lhs = s.powf(beta - 1.0) * (s * u - 1.0);
                let rhs = -k.powf(alpha) * u;
                assert!((lhs - rhs).abs() < 1e-14, "a={alpha} b={beta}");
            }
        }
    }

    #[test]
    fn parametric_subordination_beta_one_is_identity() {
        let p = FracDiffProblem::new(2.0, 1.0, 1.0).unwrap();
        let path =
            simulate_parametric_subordination(&p, 0.01, 100, RngStream::new(1, 0)).unwrap();
        for pair in &path {
            assert!((pair.physical_time - pair.operational_time).abs() < 1e-12);
        }
    }

    #[test]
    fn parametric_subordination_monotone_time() {
        let p = FracDiffProblem::new(1.5, 0.6, 1.0).unwrap();
        let path =
            simulate_parametric_subordination(&p, 0.001, 2000, RngStream::new(2, 0)).unwrap();
        assert!(path
            .windows(2)
            .all(|w| w[1].physical_time >= w[0].physical_time));
        assert!(path
            .windows(2)
            .all(|w| w[1].operational_time > w[0].operational_time));
    }

    #[test]
    fn inverse_subordinator_histogram_matches_density() {
        // marginal of t_*(t = 1) vs q0(r, 1)
        let beta = 0.5;
        let p = FracDiffProblem::new(2.0, beta, 1.0).unwrap();
        let n_paths = 20_000;
        let (t_stars, _) =
            simulate_subordination_ensemble(&p, 1.0, 1e-3, n_paths, RngStream::new(3, 0))
                .unwrap();
        // bin onto [0, 4]
        let n_bins = 40;
        let width = 4.0 / n_bins as f64;
        let mut emp = vec![0.0; n_bins + 1];
        for &r in &t_stars {
            let idx = ((r / width) as usize).min(n_bins);
            emp[idx] += 1.0 / n_paths as f64;
        }
        let mut exact = vec![0.0; n_bins + 1];
        for (i, e) in exact.iter_mut().enumerate().take(n_bins) {
            let mid = (i as f64 + 0.5) * width;
            *e = subordinator_density(beta, mid, 1.0).unwrap() * width;
        }
        exact[n_bins] = 1.0 - exact.iter().take(n_bins).sum::<f64>();
        let tv = total_variation(&emp, &exact);
        assert!(tv < 0.03, "TV {tv}");
    }

    #[test]
    fn inverse_subordinator_matches_direct_sampler() {
        // t_*(t) equals (t / S)^beta in distribution for a one-sided
        // stable S: compare means cheaply
        let beta = 0.6;
        let p = FracDiffProblem::new(2.0, beta, 1.0).unwrap();
        let n = 20_000;
        let (t_stars, _) =
            simulate_subordination_ensemble(&p, 1.0, 1e-3, n, RngStream::new(4, 0)).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        let direct: Vec<f64> = (0..n)
            .map(|_| (1.0 / sample_one_sided_stable(beta, &mut rng)).powf(beta))
            .collect();
        let (m1, s1) = empirical_mean_stderr(&t_stars);
        let (m2, s2) = empirical_mean_stderr(&direct);
        let se = (s1 * s1 + s2 * s2).sqrt();
        assert!((m1 - m2).abs() < 4.0 * se, "{m1} vs {m2}");
        // and against the analytic mean E[t_*(1)] = 1/Gamma(1+beta)
        let expect = 1.0 / gamma(1.0 + beta);
        assert!((m1 - expect).abs() < 4.0 * s1, "{m1} vs {expect}");
    }

    #[test]
    fn mc_histogram_matches_fourier_density() {
        let p = FracDiffProblem::new(2.0, 0.5, 1.0).unwrap();
        let n_paths = 20_000;
        let (_, xs) =
            simulate_subordination_ensemble(&p, 1.0, 1e-3, n_paths, RngStream::new(6, 0))
                .unwrap();
        let lo = -8.0f64;
        let hi = 8.0f64;
        let n_bins = 64;
        let width = (hi - lo) / n_bins as f64;
        let mut emp = vec![0.0; n_bins + 1];
        let mut outside = 0.0;
        for &x in &xs {
            if x < lo || x >= hi {
                outside += 1.0 / n_paths as f64;
            } else {
                emp[(((x - lo) / width) as usize).min(n_bins - 1)] += 1.0 / n_paths as f64;
            }
        }
        emp[n_bins] = outside;
        let mut exact = vec![0.0; n_bins + 1];
        for (i, e) in exact.iter_mut().enumerate().take(n_bins) {
            let mid = lo + (i as f64 + 0.5) * width;
            *e = p.density_fourier_at(mid).unwrap() * width;
        }
        exact[n_bins] = (1.0 - exact.iter().take(n_bins).sum::<f64>()).max(0.0);
        let tv = total_variation(&emp, &exact);
        assert!(tv < 0.03, "TV {tv}");
    }

    #[test]
    fn moment_law_of_subordination_sampler() {
        // alpha = 2: empirical variance matches 2 t^b / Gamma(1+b)
        let p = FracDiffProblem::new(2.0, 0.5, 1.0).unwrap();
        let n = 20_000;
        let (_, xs) =
            simulate_subordination_ensemble(&p, 1.0, 1e-3, n, RngStream::new(7, 0)).unwrap();
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let (m, se) = empirical_mean_stderr(&sq);
        let expect = 2.0 / gamma(1.5);
        assert!((m - expect).abs() < 3.0 * se, "{m} vs {expect} ({se})");
    }

    #[test]
    fn spline_accuracy_spot_check() {
        let spline = ml_neg_spline(0.75);
        let spline = spline.borrow();
        for &y in &[0.013, 0.5, 1.01, 7.3, 42.0, 99.0] {
            let exact = ml_one_real(0.75, -y).unwrap().value;
            assert!(
                (spline.eval(y) - exact).abs() < 1e-8,
                "y={y}: {} vs {exact}",
                spline.eval(y)
            );
        }
    }
}
