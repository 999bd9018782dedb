//! Stable probability densities.
//!
//! * `one_sided_stable_density`: the extremal positive density of order
//!   `beta` with Laplace transform `exp(-s^beta)`, computed through the
//!   M-Wright bridge `L_beta(t) = (beta / t^{1+beta}) M_beta(t^-beta)`.
//! * `symmetric_stable_density`: the symmetric density `f_alpha(x, r)`
//!   with Fourier transform `exp(-r |kappa|^alpha)`; Gaussian and Cauchy
//!   closed forms at `alpha = 2, 1`, a convergent tail series when the
//!   argument is deep in the power-law tail, cosine-transform inversion
//!   otherwise.

use crate::error::{CoreError, Result};
use crate::quad::integrate;
use crate::special::mwright::mwright;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Density of the positive-oriented stable law of order `beta` (Laplace
/// transform `exp(-s^beta)`).
pub fn one_sided_stable_density(beta: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::Domain(format!(
            "one-sided stable order must lie in (0, 1), got {beta}"
        )));
    }
    if !(t > 0.0) {
        return Err(CoreError::Domain(format!("time must be > 0, got {t}")));
    }
    let u = t.powf(-beta);
    if u > crate::special::mwright::Z_MW_MAX {
        // deep left tail: the density underflows
        return Ok(0.0);
    }
    Ok(beta / t.powf(1.0 + beta) * mwright(beta, u)?)
}

/// Symmetric stable density `f_alpha(x, r)`, Fourier transform
/// `exp(-r |kappa|^alpha)`.
pub fn symmetric_stable_density(alpha: f64, x: f64, r: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(CoreError::Domain(format!(
            "stable exponent must lie in (0, 2], got {alpha}"
        )));
    }
    if !(r > 0.0) {
        return Err(CoreError::Domain(format!("scale must be > 0, got {r}")));
    }
    let x = x.abs();
    if alpha == 2.0 {
        return Ok((4.0 * PI * r).sqrt().recip() * (-x * x / (4.0 * r)).exp());
    }
    if alpha == 1.0 {
        return Ok(r / (PI * (x * x + r * r)));
    }
    if x > 0.0 && r < 0.01 * x.powf(alpha) {
        return stable_tail_series(alpha, x, r);
    }
    if x == 0.0 {
        return Ok(gamma(1.0 + 1.0 / alpha) / (PI * r.powf(1.0 / alpha)));
    }
    // cosine inversion; exp(-r k^alpha) confines the integrand
    let k_max = (46.0 / r).powf(1.0 / alpha);
    let q = integrate(
        |k| (k * x).cos() * (-r * k.powf(alpha)).exp(),
        0.0,
        k_max,
        1e-12,
        1e-11,
    )?;
    Ok(q.value / PI)
}

/// Power-law tail expansion
/// `f ~ (1/pi) sum_m (-1)^{m+1} Gamma(m alpha + 1) sin(m alpha pi / 2) r^m / (m! x^{m alpha + 1})`,
/// convergent for `alpha < 1` and asymptotic otherwise; valid here only
/// deep in the tail where the first omitted term is negligible.
fn stable_tail_series(alpha: f64, x: f64, r: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut fact = 1.0;
    for m in 1..=12 {
        fact *= m as f64;
        let term = (-1.0f64).powi(m as i32 + 1) * gamma(m as f64 * alpha + 1.0)
            * (m as f64 * alpha * PI / 2.0).sin()
            * r.powi(m as i32)
            / (fact * x.powf(m as f64 * alpha + 1.0));
        let mag = term.abs();
        if mag > prev {
            break;
        }
        sum += term;
        if mag < 1e-16 * sum.abs() {
            break;
        }
        prev = mag;
    }
    Ok(sum / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_exp_tail;
    use statrs::function::erf::erfc;

    #[test]
    fn half_order_is_levy_smirnov() {
        // L_{1/2}(t) = (4 pi)^{-1/2} t^{-3/2} exp(-1/(4t))
        for t in [0.05, 0.2, 1.0, 3.0, 20.0] {
            let l = one_sided_stable_density(0.5, t).unwrap();
            let expect = (4.0 * PI).sqrt().recip() * t.powf(-1.5) * (-1.0 / (4.0 * t)).exp();
            assert!(
                (l - expect).abs() < 1e-12 * expect.max(1e-12),
                "t={t}: {l} vs {expect}"
            );
        }
    }

    #[test]
    fn one_sided_normalization_and_laplace() {
        // substituting u = t^{-beta} maps both integrals onto M-Wright
        // integrals, but here we check the t-domain directly
        for &beta in &[0.4, 0.6, 0.75] {
            let q = integrate(
                |t| {
                    if t <= 0.0 {
                        0.0
                    } else {
                        one_sided_stable_density(beta, t).unwrap_or(0.0)
                    }
                },
                0.0,
                1e4,
                1e-7,
                1e-7,
            )
            .unwrap();
            // heavy right tail: P(T > T0) ~ T0^{-beta}/Gamma(1-beta)
            let tail = 1e4f64.powf(-beta) / gamma(1.0 - beta);
            assert!(
                (q.value + tail - 1.0).abs() < 1e-3,
                "beta={beta}: {}",
                q.value + tail
            );
        }
        // Laplace transform at s in {0.5, 1, 2} equals exp(-s^beta) to 1e-6
        for &beta in &[0.3, 0.5, 0.8] {
            for &s in &[0.5f64, 1.0, 2.0] {
                let q = integrate_exp_tail(
                    |t| {
                        if t <= 0.0 {
                            0.0
                        } else {
                            (-s * t).exp() * one_sided_stable_density(beta, t).unwrap_or(0.0)
                        }
                    },
                    0.0,
                    s,
                    1e-9,
                )
                .unwrap();
                let expect = (-s.powf(beta)).exp();
                assert!(
                    (q.value - expect).abs() < 1e-6,
                    "beta={beta} s={s}: {} vs {expect}",
                    q.value
                );
            }
        }
    }

    #[test]
    fn one_sided_median_half_order() {
        // CDF of Levy-Smirnov is erfc(1/(2 sqrt t)); median solves = 1/2
        let cdf = |t: f64| erfc(1.0 / (2.0 * t.sqrt()));
        let mut lo = 0.1;
        let mut hi = 10.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let median = 0.5 * (lo + hi);
        // integral of the density up to the median is 1/2
        let q = integrate(
            |t| {
                if t <= 0.0 {
                    0.0
                } else {
                    one_sided_stable_density(0.5, t).unwrap_or(0.0)
                }
            },
            0.0,
            median,
            1e-10,
            1e-10,
        )
        .unwrap();
        assert!((q.value - 0.5).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn gaussian_and_cauchy_closed_forms() {
        let f = symmetric_stable_density(2.0, 1.3, 0.7).unwrap();
        let expect = (4.0 * PI * 0.7).sqrt().recip() * (-1.3f64 * 1.3 / 2.8).exp();
        assert!((f - expect).abs() < 1e-16);
        let f = symmetric_stable_density(1.0, 0.4, 2.0).unwrap();
        assert!((f - 2.0 / (PI * (0.16 + 4.0))).abs() < 1e-16);
    }

    #[test]
    fn symmetry_and_normalization() {
        for &(alpha, r) in &[(1.5, 1.0), (0.8, 0.5), (1.2, 2.0)] {
            for &x in &[0.3, 1.0, 4.0] {
                let a = symmetric_stable_density(alpha, x, r).unwrap();
                let b = symmetric_stable_density(alpha, -x, r).unwrap();
                assert_eq!(a, b);
                assert!(a > 0.0);
            }
            // normalization: 2 int_0^X f dx + 2 * tail, tail from the
            // leading power law b_1 / (alpha x^alpha)
            let x_cut = 1e4f64;
            let q = integrate(
                |x| symmetric_stable_density(alpha, x, r).unwrap(),
                0.0,
                x_cut,
                1e-8,
                1e-8,
            )
            .unwrap();
            let tail = gamma(1.0 + alpha) * (alpha * PI / 2.0).sin() * r
                / (PI * alpha * x_cut.powf(alpha));
            let total = 2.0 * (q.value + tail);
            assert!(
                (total - 1.0).abs() < 1e-4,
                "alpha={alpha} r={r}: {total}"
            );
        }
    }

    #[test]
    fn tail_series_matches_integral_at_crossover() {
        // both routes around r = 0.01 x^alpha agree
        let alpha = 1.5;
        let x = 3.0f64;
        let r_lo = 0.009 * x.powf(alpha); // tail series route
        let r_hi = 0.011 * x.powf(alpha); // integral route
        let f_lo = symmetric_stable_density(alpha, x, r_lo).unwrap();
        let f_hi = symmetric_stable_density(alpha, x, r_hi).unwrap();
        // continuity: the two routes differ by the r-derivative step
        let slope = (f_hi - f_lo) / (r_hi - r_lo);
        let f_mid_expected = f_lo + slope * (0.010 * x.powf(alpha) - r_lo);
        let f_mid_series = stable_tail_series(alpha, x, 0.010 * x.powf(alpha)).unwrap();
        assert!(
            ((f_mid_series - f_mid_expected) / f_mid_expected).abs() < 1e-3,
            "{f_mid_series} vs {f_mid_expected}"
        );
    }

    #[test]
    fn fourier_transform_roundtrip() {
        // int f(x, r) cos(kappa x) dx = exp(-r kappa^alpha)
        let alpha = 1.5;
        let r = 1.0;
        let kappa = 1.0f64;
        let q = integrate(
            |x| symmetric_stable_density(alpha, x, r).unwrap() * (kappa * x).cos(),
            0.0,
            400.0,
            1e-9,
            1e-9,
        )
        .unwrap();
        let expect = (-r * kappa.powf(alpha)).exp();
        assert!(
            (2.0 * q.value - expect).abs() < 1e-5,
            "{} vs {expect}",
            2.0 * q.value
        );
    }

    #[test]
    fn domain_errors() {
        assert!(one_sided_stable_density(1.0, 1.0).is_err());
        assert!(one_sided_stable_density(0.5, 0.0).is_err());
        assert!(symmetric_stable_density(2.1, 0.0, 1.0).is_err());
        assert!(symmetric_stable_density(1.5, 0.0, 0.0).is_err());
    }
}
