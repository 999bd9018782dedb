//! Double-double log-gamma and reciprocal gamma.
//!
//! Series coefficients like 1/Gamma(1 + alpha n) must be accurate well
//! beyond `f64` so that heavily cancelling sums still deliver ~1e-12
//! results.  Positive arguments use the Stirling expansion after an
//! exact upward shift; nonpositive arguments go through the reflection
//! formula with the exact-zero-aware `sin_pi`.

use crate::dd::{Dd, Scaled};
use std::sync::OnceLock;

/// Stirling threshold: below this the argument is shifted up by integer
/// steps (Gamma(x) = Gamma(x+k) / (x (x+1) ... (x+k-1))).
const STIRLING_MIN: f64 = 40.0;

/// B_{2j} / (2j (2j-1)) for j = 1..=12, the Stirling correction weights.
fn stirling_coeffs() -> &'static [Dd; 12] {
    static CACHE: OnceLock<[Dd; 12]> = OnceLock::new();
    CACHE.get_or_init(|| {
        // exact rationals for the Bernoulli numbers B_2..B_24
        let bern: [(f64, f64); 12] = [
            (1.0, 6.0),
            (-1.0, 30.0),
            (1.0, 42.0),
            (-1.0, 30.0),
            (5.0, 66.0),
            (-691.0, 2730.0),
            (7.0, 6.0),
            (-3617.0, 510.0),
            (43867.0, 798.0),
            (-174611.0, 330.0),
            (854513.0, 138.0),
            (-236364091.0, 2730.0),
        ];
        let mut out = [Dd::ZERO; 12];
        for (j, (num, den)) in bern.iter().enumerate() {
            let two_j = 2.0 * (j as f64 + 1.0);
            out[j] = Dd::from_f64(*num).div(Dd::from_f64(den * two_j * (two_j - 1.0)));
        }
        out
    })
}

/// ln Gamma(x) for x > 0 in double-double precision.
pub fn ln_gamma_dd(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0, "ln_gamma_dd needs a positive argument");
    let mut shift_ln = Dd::ZERO;
    let mut y = x;
    if y.hi < STIRLING_MIN {
        // product of the shifted-out factors, tracked in Scaled to be
        // safe for very small x
        let k = (STIRLING_MIN - y.hi).ceil() as usize;
        let mut prod = Scaled::from_f64(1.0);
        for _ in 0..k {
            prod = prod.mul_dd(y);
            y = y.add_f64(1.0);
        }
        shift_ln = scaled_ln(prod);
    }
    // Stirling: (y - 1/2) ln y - y + ln(2 pi)/2 + sum B_{2j}/(2j(2j-1) y^{2j-1})
    let ln_y = y.ln();
    let mut s = y.add_f64(-0.5).mul(ln_y).sub(y).add(Dd::HALF_LN_2PI);
    let inv = y.recip();
    let inv2 = inv.mul(inv);
    let mut p = inv;
    for c in stirling_coeffs() {
        s = s.add(c.mul(p));
        p = p.mul(inv2);
    }
    s.sub(shift_ln)
}

fn scaled_ln(s: Scaled) -> Dd {
    debug_assert!(!s.is_zero() && s.m.hi > 0.0);
    s.m.ln().add(Dd::LN2.mul_f64(s.e as f64))
}

/// 1/Gamma(x) for any real x, as a `Scaled` value.
///
/// Exactly zero at the poles x = 0, -1, -2, ...; the sign for negative
/// x comes from the reflection formula 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.
pub fn recip_gamma_scaled(x: Dd) -> Scaled {
    if x.hi > 0.0 {
        Scaled::from_ln(1.0, ln_gamma_dd(x).neg())
    } else {
        let s = x.sin_pi();
        if s.hi == 0.0 {
            return Scaled::ZERO;
        }
        let one_minus = Dd::ONE.sub(x);
        let ln_mag = ln_gamma_dd(one_minus)
            .add(s.abs().ln())
            .sub(Dd::PI.ln());
        Scaled::from_ln(s.hi.signum(), ln_mag)
    }
}
