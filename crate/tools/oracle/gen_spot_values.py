#!/usr/bin/env python3
"""Print assorted high-precision special-function spot values.

These are frozen into Rust unit tests as string constants.  Everything
is computed by direct series summation (or closed form) in mpmath with
generous working precision, independent of the library code.
"""

import mpmath as mp

mp.mp.dps = 160


def ml2(alpha, beta, z, n_terms=4000):
    """Two-parameter Mittag-Leffler by direct series."""
    s = mp.mpf(0)
    zp = mp.mpf(1)
    for n in range(n_terms):
        term = zp * mp.rgamma(beta + alpha * n)
        s += term
        if n > 8 and abs(term) < mp.mpf(10) ** (-100) * max(abs(s), mp.mpf(1)):
            break
        zp *= z
    return s


def mwright(beta, z, n_terms=4000):
    """M-Wright function by direct series.

    Some coefficients vanish exactly (reciprocal gamma at a pole), so the
    stopping rule requires two consecutive negligible terms.
    """
    s = mp.mpf(0)
    zp = mp.mpf(1)
    small_run = 0
    for n in range(n_terms):
        term = zp * mp.rgamma(-beta * n + 1 - beta) / mp.factorial(n)
        s += term
        if abs(term) < mp.mpf(10) ** (-100) * max(abs(s), mp.mpf(1)):
            small_run += 1
            if n > 8 and small_run >= 2:
                break
        else:
            small_run = 0
        zp *= -z
    return s


cases = [
    ("E_{1/2}(-1)", ml2(mp.mpf(1) / 2, 1, -1)),
    ("E_{1/2}(-10)          [= survival at beta=1/2, t=100]", ml2(mp.mpf(1) / 2, 1, -10)),
    ("E_{1/2,1/2}(-1)       [= ml_density at beta=1/2, t=1]", ml2(mp.mpf(1) / 2, mp.mpf(1) / 2, -1)),
    ("E_{0.7,0.7}(-3)", ml2(mp.mpf(7) / 10, mp.mpf(7) / 10, -3)),
    ("E_{1/2}(-2)", ml2(mp.mpf(1) / 2, 1, -2)),
    ("E_{3/4}(-2.371)       [char fn at alpha=1.5, beta=0.75, kappa=1.778, t=1]",
     ml2(mp.mpf(3) / 4, 1, -mp.mpf("2.371"))),
    ("M_{1/4}(1/2)", mwright(mp.mpf(1) / 4, mp.mpf(1) / 2)),
    ("M_{3/4}(3/2)", mwright(mp.mpf(3) / 4, mp.mpf(3) / 2)),
    ("M_{1/2}(1)  (vs closed form exp(-1/4)/sqrt(pi))", mwright(mp.mpf(1) / 2, 1)),
    ("closed form exp(-1/4)/sqrt(pi)", mp.exp(mp.mpf(-1) / 4) / mp.sqrt(mp.pi)),
]

# cross-check the E_{1/2} values against the independent erfc identity
ident = mp.exp(1) * mp.erfc(1)
assert abs(ident - cases[0][1]) < mp.mpf(10) ** -90
ident10 = mp.exp(100) * mp.erfc(10)
assert abs(ident10 - cases[1][1]) < mp.mpf(10) ** -90

for name, val in cases:
    print(f"{name:70s} {mp.nstr(val, 30)}")


def cos_tail_cases():
    """Oscillatory cosine tail moments used by the quadrature tests."""
    print("\ncos tail moments  integral_z^inf u^-s cos(u) du:")
    for (s, z) in [(1.5, 2.0), (2.0, 5.0), (3.0, 0.5), (1.0, 10.0), (2.5, 60.0), (0.5, 3.0)]:
        v = mp.quadosc(lambda u: u ** (-s) * mp.cos(u), [z, mp.inf], period=2 * mp.pi)
        print(f"  ({s}, {z}, {mp.nstr(v, 20)}),")


cos_tail_cases()
