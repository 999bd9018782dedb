//! Adaptive Gauss-Kronrod quadrature (21-point Kronrod / 10-point Gauss)
//! plus helpers for exponential tails and oscillatory cosine moments.

use crate::error::{CoreError, Result};
use num_complex::Complex64;

// QUADPACK 21-point Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub value: f64,
    pub abs_error: f64,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    (value, err)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Bisects the worst subinterval until the summed error estimate drops
/// below `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    if a == b {
        return Ok(Quad {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    const MAX_INTERVALS: usize = 4096;
    let (v, e) = gk21(&mut f, a, b);
    if !v.is_finite() {
        return Err(CoreError::Quadrature(format!(
            "integrand produced a non-finite value on [{a}, {b}]"
        )));
    }
    let mut segs: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)]; // (a, b, value, err)
    loop {
        let value: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quad {
                value,
                abs_error: err,
            });
        }
        if segs.len() >= MAX_INTERVALS {
            return Err(CoreError::Quadrature(format!(
                "adaptive GK21 did not converge: error {err:.3e} after {} intervals",
                segs.len()
            )));
        }
        // split the interval with the largest error
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            return Err(CoreError::Quadrature(
                "interval collapsed below f64 resolution".into(),
            ));
        }
        let (v1, e1) = gk21(&mut f, sa, mid);
        let (v2, e2) = gk21(&mut f, mid, sb);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(CoreError::Quadrature(format!(
                "integrand produced a non-finite value inside [{sa}, {sb}]"
            )));
        }
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadC {
    pub value: Complex64,
    pub abs_error: f64,
}

fn gk21_c<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm())
}

/// Adaptive integration of a complex-valued integrand over `[a, b]`.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadC> {
    if a == b {
        return Ok(QuadC {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
        });
    }
    const MAX_INTERVALS: usize = 4096;
    let (v, e) = gk21_c(&mut f, a, b);
    let mut segs: Vec<(f64, f64, Complex64, f64)> = vec![(a, b, v, e)];
    loop {
        let value: Complex64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * value.norm()) {
            return Ok(QuadC {
                value,
                abs_error: err,
            });
        }
        if segs.len() >= MAX_INTERVALS {
            return Err(CoreError::Quadrature(format!(
                "adaptive GK21 (complex) did not converge: error {err:.3e}"
            )));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            return Err(CoreError::Quadrature(
                "interval collapsed below f64 resolution".into(),
            ));
        }
        let (v1, e1) = gk21_c(&mut f, sa, mid);
        let (v2, e2) = gk21_c(&mut f, mid, sb);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(CoreError::Quadrature(format!(
                "integrand produced a non-finite value inside [{sa}, {sb}]"
            )));
        }
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}

/// Integrate `f` over `[a, infinity)` where `|f(t)| <~ C exp(-rate t)`.
///
/// Walks fixed windows of width `10/rate`, integrating each adaptively,
/// and stops once two consecutive windows contribute less than a quarter
/// of the remaining tolerance.
pub fn integrate_exp_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    rate: f64,
    abs_tol: f64,
) -> Result<Quad> {
    debug_assert!(rate > 0.0);
    let w = 10.0 / rate;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut lo = a;
    let mut quiet = 0;
    for _ in 0..300 {
        let q = integrate(&mut f, lo, lo + w, abs_tol * 0.25, 1e-12)?;
        total += q.value;
        err += q.abs_error;
        lo += w;
        if q.value.abs() < abs_tol * 0.25 {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Quad {
                    value: total,
                    abs_error: err + abs_tol * 0.25,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(CoreError::Quadrature(
        "exponential-tail integral did not settle within 300 windows".into(),
    ))
}

/// The oscillatory tail moment `integral_z^inf u^{-s} cos(u) du` for
/// `s > 0`, `z > 0`.
///
/// For large `z` the repeated-integration-by-parts expansion
/// `I(s,z) = -z^{-s} sin z + s z^{-s-1} cos z - s(s+1) I(s+2, z)`
/// is applied eight times; below the asymptotic threshold the range up
/// to it is covered by adaptive quadrature.
pub fn cos_tail_moment(s: f64, z: f64) -> Result<f64> {
    debug_assert!(s > 0.0 && z > 0.0);
    const Z_ASYM: f64 = 40.0;
    if z >= Z_ASYM {
        return Ok(cos_tail_asymptotic(s, z));
    }
    let mid = integrate(|u| u.powf(-s) * u.cos(), z, Z_ASYM, 1e-13, 1e-12)?;
    Ok(mid.value + cos_tail_asymptotic(s, Z_ASYM))
}

fn cos_tail_asymptotic(s: f64, z: f64) -> f64 {
    // eight levels of the two-term recursion; remainder < 1e-10 z^{-s}
    fn level(s: f64, z: f64, depth: u32) -> f64 {
        let head = -z.powf(-s) * z.sin() + s * z.powf(-s - 1.0) * z.cos();
        if depth == 0 {
            head
        } else {
            head - s * (s + 1.0) * level(s + 2.0, z, depth - 1)
        }
    }
    level(s, z, 8)
}
