//! Double-double arithmetic: unevaluated sums of two `f64`s giving
//! roughly 32 significant decimal digits.
//!
//! Alternating series for the Mittag-Leffler and M-Wright functions
//! cancel far beyond what plain `f64` accumulation survives; all series
//! summation in this crate runs on this type.  The algorithms are the
//! classic error-free transformations (Dekker/Knuth two-sum, FMA-based
//! two-prod) as used in the QD library.

/// A double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Relative rounding unit of a double-double, about 4.93e-32.
pub const DD_EPS: f64 = 4.93038065763132e-32;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi
    pub const PI: Dd = Dd {
        hi: 3.141592653589793116e0,
        lo: 1.224646799147353207e-16,
    };
    /// ln 2
    pub const LN2: Dd = Dd {
        hi: 6.931471805599452862e-1,
        lo: 2.319046813846299558e-17,
    };
    /// ln(2 pi) / 2
    pub const HALF_LN_2PI: Dd = Dd {
        hi: 9.189385332046727418e-1,
        lo: -3.878294158067241582e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let (s1, s2) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + self.hi * b.lo + self.lo * b.hi;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        let (s1, s2) = two_sum(q1, q2);
        Dd { hi: s1, lo: s2 }.add_f64(q3)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    /// Multiply by 2^n exactly.
    #[inline]
    pub fn ldexp(self, n: i32) -> Dd {
        Dd {
            hi: libm_ldexp(self.hi, n),
            lo: libm_ldexp(self.lo, n),
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// e^self; overflows to infinity / underflows to zero like `f64::exp`.
    pub fn exp(self) -> Dd {
        if self.hi > 709.8 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / std::f64::consts::LN_2).round();
        let r = self.sub(Dd::LN2.mul_f64(m));
        // |r| <= ln2/2; Taylor with term recursion (full dd division --
        // multiplying by a rounded 1/n would cap accuracy at f64 level)
        let mut sum = Dd::ONE.add(r);
        let mut term = r;
        for n in 2..40 {
            term = term.mul(r).div(Dd::from_f64(n as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.ldexp(m as i32)
    }

    /// Natural logarithm; `self` must be positive.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let x0 = self.hi.ln();
        // one Newton step: x1 = x0 + a*e^{-x0} - 1, exact to ~1e-32
        let e = Dd::from_f64(-x0).exp();
        Dd::from_f64(x0).add(self.mul(e)).add_f64(-1.0)
    }

    /// sin(pi * self), with exact zeros at integer arguments.
    pub fn sin_pi(self) -> Dd {
        let n = self.hi.round();
        let r = self.sub(Dd::from_f64(n)); // |r| <= 0.5 + tiny
        if r.hi == 0.0 && r.lo == 0.0 {
            return Dd::ZERO;
        }
        let s = Dd::PI.mul(r);
        // Taylor for sin on |s| <= pi/2
        let s2 = s.mul(s);
        let mut term = s;
        let mut sum = s;
        for k in 1..30 {
            let denom = (2 * k) as f64 * (2 * k + 1) as f64;
            term = term.mul(s2).div(Dd::from_f64(-denom));
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        // odd multiples of pi flip the sign
        if (n as i64) % 2 != 0 {
            sum.neg()
        } else {
            sum
        }
    }
}

#[inline]
fn libm_ldexp(x: f64, n: i32) -> f64 {
    // x * 2^n without a libm dependency; exact for normal results
    if n >= 0 {
        let mut v = x;
        let mut k = n;
        while k > 1000 {
            v *= f64::powi(2.0, 1000);
            k -= 1000;
        }
        v * f64::powi(2.0, k)
    } else {
        let mut v = x;
        let mut k = n;
        while k < -1000 {
            v *= f64::powi(2.0, -1000);
            k += 1000;
        }
        v * f64::powi(2.0, k)
    }
}

/// A nonzero double-double scaled by a power of two: `m * 2^e` with
/// `|m.hi|` kept near 1.  Lets coefficient tables span magnitudes far
/// outside the `f64` exponent range (factorials past 170!, stable-law
/// series coefficients, ...).
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub m: Dd,
    pub e: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: Dd::ZERO, e: 0 };

    pub fn from_dd(x: Dd) -> Scaled {
        Scaled { m: x, e: 0 }.normalize()
    }

    pub fn from_f64(x: f64) -> Scaled {
        Scaled::from_dd(Dd::from_f64(x))
    }

    /// Build sign * exp(ln_mag) where ln_mag is a double-double log-magnitude.
    pub fn from_ln(sign: f64, ln_mag: Dd) -> Scaled {
        if sign == 0.0 {
            return Scaled::ZERO;
        }
        let e = (ln_mag.hi / std::f64::consts::LN_2).floor();
        let r = ln_mag.sub(Dd::LN2.mul_f64(e));
        let m = r.exp().mul_f64(sign);
        Scaled { m, e: e as i64 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.hi == 0.0
    }

    fn normalize(self) -> Scaled {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        let (_, exp2) = frexp(self.m.hi);
        Scaled {
            m: self.m.ldexp(-exp2),
            e: self.e + exp2 as i64,
        }
    }

    pub fn mul(self, b: Scaled) -> Scaled {
        if self.is_zero() || b.is_zero() {
            return Scaled::ZERO;
        }
        Scaled {
            m: self.m.mul(b.m),
            e: self.e + b.e,
        }
        .normalize()
    }

    pub fn mul_dd(self, b: Dd) -> Scaled {
        if self.is_zero() || b.hi == 0.0 {
            return Scaled::ZERO;
        }
        Scaled {
            m: self.m.mul(b),
            e: self.e,
        }
        .normalize()
    }

    /// Collapse to a double-double; saturates to 0 / +-inf outside range.
    pub fn to_dd(self) -> Dd {
        if self.is_zero() || self.e < -1070 {
            return Dd::ZERO;
        }
        if self.e > 1020 {
            return Dd::from_f64(if self.m.hi > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            });
        }
        self.m.ldexp(self.e as i32)
    }

    pub fn ln_abs(self) -> f64 {
        self.m.hi.abs().ln() + self.e as f64 * std::f64::consts::LN_2
    }
}

#[inline]
fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    if exp_bits == 0 {
        // subnormal: scale up first
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        (m, e - 64)
    } else {
        (f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52)), exp_bits - 1022)
    }
}
