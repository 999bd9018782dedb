//! The M-Wright function `M_beta(z)`.
//!
//! `M_beta(z) = sum_n (-z)^n / (n! Gamma(1 - beta - beta n))`, the
//! entire function whose rescaling `t^{-beta} M_beta(r t^{-beta})` is
//! the density of the inverse one-sided stable process.  Some series
//! coefficients vanish exactly (reciprocal gamma poles), and the
//! alternating sum cancels heavily for large `z`, so coefficients are
//! built in double-double from the reflection formula and summation
//! runs in scaled dd arithmetic.

use crate::dd::{Dd, Scaled, DD_EPS};
use crate::error::{CoreError, Result};
use crate::special::gamma_dd::recip_gamma_scaled;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Arguments above this are rejected; the value has long underflowed.
pub const Z_MW_MAX: f64 = 50.0;

const MAX_TERMS: usize = 60_000;

struct MwTable {
    beta: f64,
    /// 1 / (n! Gamma(1 - beta - beta n)); exact zeros where the gamma
    /// argument hits a pole
    coeffs: Vec<Scaled>,
    /// running 1/n! alongside the coefficients
    recip_fact: Scaled,
}

impl MwTable {
    fn ensure(&mut self, n: usize) {
        while self.coeffs.len() <= n {
            let k = self.coeffs.len();
            if k > 0 {
                self.recip_fact = self
                    .recip_fact
                    .mul_dd(Dd::from_f64(k as f64).recip());
            }
            let arg = Dd::from_f64(1.0 - self.beta)
                .sub(Dd::from_f64(self.beta).mul_f64(k as f64));
            self.coeffs.push(recip_gamma_scaled(arg).mul(self.recip_fact));
        }
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<u64, Rc<RefCell<MwTable>>>> = RefCell::new(HashMap::new());
}

fn table_for(beta: f64) -> Rc<RefCell<MwTable>> {
    TABLES.with(|t| {
        t.borrow_mut()
            .entry(beta.to_bits())
            .or_insert_with(|| {
                Rc::new(RefCell::new(MwTable {
                    beta,
                    coeffs: Vec::new(),
                    recip_fact: Scaled::from_f64(1.0),
                }))
            })
            .clone()
    })
}

/// An M-Wright value with its accumulated error bound.
#[derive(Clone, Copy, Debug)]
pub struct MwEval {
    pub value: f64,
    pub abs_error_bound: f64,
}

/// `M_beta(z)` with an explicit error bound.
///
/// Never fails on cancellation: deep in the super-exponential tail the
/// series noise can exceed the (tiny) value, in which case the result
/// is clamped to zero and the bound states the honest uncertainty.
/// Integrators weigh that bound into their own error budget.
pub fn mwright_eval(beta: f64, z: f64) -> Result<MwEval> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::Domain(format!(
            "M-Wright exponent must lie in (0, 1), got {beta}"
        )));
    }
    if !(z >= 0.0) {
        return Err(CoreError::Domain(format!(
            "M-Wright argument must be >= 0, got {z}"
        )));
    }
    if z > Z_MW_MAX {
        return Err(CoreError::Domain(format!(
            "M-Wright argument {z} exceeds the supported range {Z_MW_MAX}"
        )));
    }
    // super-exponential decay: bail out early once the value underflows
    if ln_mag_estimate(beta, z) < -120.0 {
        return Ok(MwEval {
            value: 0.0,
            abs_error_bound: 1e-45,
        });
    }
    let table = table_for(beta);
    let mut table = table.borrow_mut();
    let neg_z = Dd::from_f64(-z);
    let mut zpow = Scaled::from_f64(1.0);
    let mut sum = Dd::ZERO;
    let mut max_term = 0.0f64;
    let mut small_run = 0;
    let mut n = 0usize;
    loop {
        table.ensure(n);
        let term = table.coeffs[n].mul(zpow).to_dd();
        sum = sum.add(term);
        let mag = term.hi.abs();
        max_term = max_term.max(mag);
        // zero coefficients occur up to once per 1/beta terms, so demand
        // three consecutive negligible terms before stopping
        if mag <= 1e-34 * sum.hi.abs().max(1e-300) {
            small_run += 1;
            if n >= 8 && small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
        n += 1;
        if n >= MAX_TERMS {
            return Err(CoreError::Convergence(format!(
                "M-Wright series needs more than {MAX_TERMS} terms (beta={beta}, z={z})"
            )));
        }
        zpow = zpow.mul_dd(neg_z);
    }
    let mut value = sum.to_f64();
    // the coefficient error grows with the magnitude of the log-gammas
    // behind it, roughly 2 n ln n at term n
    let nf = n as f64 + 2.0;
    let coeff_rel = 4e-30 * (2.0 * nf * nf.ln() + 40.0);
    let mut bound =
        max_term * (coeff_rel + DD_EPS * (nf + 4.0)) + f64::EPSILON * value.abs();
    if value.abs() <= bound {
        // indistinguishable from zero at working precision; return a
        // clean zero instead of signed noise
        bound = bound.max(value.abs());
        value = 0.0;
    } else if value < 0.0 {
        // nonnegative function: fold the observed undershoot into the
        // bound and clamp
        bound = bound.max(-value);
        value = 0.0;
    }
    Ok(MwEval {
        value,
        abs_error_bound: bound,
    })
}

/// `M_beta(z)` under a strict accuracy contract: relative 1e-10 or
/// absolute 2e-15, whichever is weaker; fails with a convergence error
/// when the alternating series cannot deliver that at dd precision.
pub fn mwright(beta: f64, z: f64) -> Result<f64> {
    let e = mwright_eval(beta, z)?;
    if e.abs_error_bound > (1e-10 * e.value.abs()).max(2e-15) {
        return Err(CoreError::Convergence(format!(
            "M-Wright cancellation exhausts working precision at beta={beta}, z={z} \
             (bound {:.2e} vs value {:.2e})",
            e.abs_error_bound, e.value
        )));
    }
    Ok(e.value)
}

/// Crude log-magnitude of `M_beta(z)` from the saddle-point decay
/// `exp(-(1-beta) beta^{beta/(1-beta)} z^{1/(1-beta)})`.
fn ln_mag_estimate(beta: f64, z: f64) -> f64 {
    if z <= 1.0 {
        return 0.0;
    }
    let c = (1.0 - beta) * beta.powf(beta / (1.0 - beta));
    -c * z.powf(1.0 / (1.0 - beta))
}

/// Smallest argument beyond which `M_beta` stays below `exp(ln_floor)`;
/// used by integrators to truncate.
///
/// Starts from the saddle-point decay estimate (which ignores the
/// prefactor and, for `beta -> 1`, the narrowing spike at `z = 1`) and
/// then scans upward against the actual function.
pub fn mwright_support_cut(beta: f64, ln_floor: f64) -> f64 {
    let c = (1.0 - beta) * beta.powf(beta / (1.0 - beta));
    let mut cut = ((-ln_floor) / c)
        .powf(1.0 - beta)
        .max(1.0 + 10.0 * (2.0 * (1.0 - beta)).sqrt())
        .min(Z_MW_MAX);
    let floor = ln_floor.exp();
    while cut < Z_MW_MAX {
        match mwright_eval(beta, cut) {
            Ok(e) if e.value > floor => cut = (cut * 1.3).min(Z_MW_MAX),
            _ => break,
        }
    }
    cut
}

/// The alternative sine-form series; an independent route used for
/// cross-validation.
#[cfg(test)]
pub(crate) fn mwright_sine_series(beta: f64, z: f64) -> Result<f64> {
    use crate::special::gamma_dd::ln_gamma_dd;
    let pi = Dd::PI;
    let mut sum = Dd::ZERO;
    let mut zpow = Scaled::from_f64(1.0); // (-z)^{n-1}
    let mut recip_fact = Scaled::from_f64(1.0); // 1/(n-1)!
    let mut max_term = 0.0f64;
    let mut small_run = 0;
    for n in 1..MAX_TERMS {
        if n > 1 {
            recip_fact = recip_fact.mul_dd(Dd::from_f64((n - 1) as f64).recip());
            zpow = zpow.mul_dd(Dd::from_f64(-z));
        }
        let bn = Dd::from_f64(beta).mul_f64(n as f64);
        let gamma_bn = Scaled::from_ln(1.0, ln_gamma_dd(bn));
        let s = bn.sin_pi();
        let term = zpow
            .mul(recip_fact)
            .mul(gamma_bn)
            .mul_dd(s)
            .mul_dd(pi.recip())
            .to_dd();
        sum = sum.add(term);
        let mag = term.hi.abs();
        max_term = max_term.max(mag);
        if mag <= 1e-34 * sum.hi.abs().max(1e-300) {
            small_run += 1;
            if n >= 8 && small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let value = sum.to_f64();
    let bound = max_term * (3e-28 + DD_EPS * 50.0);
    if bound > (1e-9 * value.abs()).max(1e-13) {
        return Err(CoreError::Convergence("sine series drowned".into()));
    }
    Ok(value)
}
