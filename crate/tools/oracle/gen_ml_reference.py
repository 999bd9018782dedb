#!/usr/bin/env python3
"""Generate high-precision Mittag-Leffler reference values.

Writes crates/fracwalk-core/tests/data/ml_reference.csv with rows
(alpha, z, E_alpha(z)) on a 4 x 50 grid covering alpha in {0.25, 0.5,
0.75, 1.0} and z in [-5, 2].

Values come from direct summation of the defining power series
E_a(z) = sum_n z^n / Gamma(1 + a n) in mpmath arbitrary-precision
arithmetic.  The working precision (450 decimal digits) is far beyond
the worst-case cancellation of the alternating series on this grid
(about 270 digits at alpha = 0.25, z = -5), so every printed value is
correct to all 25 emitted digits.  This script is the independent
oracle for the library's evaluator; it shares no code with it.
"""

import os
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 450

ALPHAS = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1, 1)]
N_Z = 50
Z_LO, Z_HI = mp.mpf(-5), mp.mpf(2)
N_TERMS = 9000


def gamma_table(alpha, n_terms):
    """Gamma(1 + alpha*n) for n = 0..n_terms, alpha = p/4.

    Uses the exact stride-4 recursion
    Gamma(1 + a(n+4)) = Gamma(1 + a n + p) = (1 + a n)_p * Gamma(1 + a n)
    so only four seed values need the full gamma algorithm.
    """
    p = alpha.numerator * (4 // alpha.denominator)
    a = mp.mpf(alpha.numerator) / mp.mpf(alpha.denominator)
    g = [mp.mpf(0)] * (n_terms + 1)
    for n in range(min(4, n_terms + 1)):
        g[n] = mp.gamma(1 + a * n)
    for n in range(4, n_terms + 1):
        x = 1 + a * (n - 4)
        rise = mp.mpf(1)
        for j in range(p):
            rise *= x + j
        g[n] = g[n - 4] * rise
    return g


def ml_series(z, gammas):
    s = mp.mpf(0)
    zp = mp.mpf(1)
    peak = mp.mpf(0)
    for n in range(len(gammas)):
        term = zp / gammas[n]
        s += term
        if abs(term) > peak:
            peak = abs(term)
        if n > 8 and abs(term) < mp.mpf(10) ** (-120) * max(abs(s), mp.mpf(1)):
            break
        zp *= z
    # sanity: confirm the working precision covered the cancellation
    lost = mp.log10(peak / max(abs(s), mp.mpf(10) ** -50)) if peak > 0 else 0
    assert lost < mp.mp.dps - 60, f"precision exhausted: lost {lost} digits"
    return s


def main():
    out_dir = os.path.join(
        os.path.dirname(__file__), "..", "..", "crates", "fracwalk-core", "tests", "data"
    )
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "ml_reference.csv")
    with open(path, "w") as fh:
        fh.write("# alpha,z,ml_one(alpha, z); generated by tools/oracle/gen_ml_reference.py\n")
        for alpha in ALPHAS:
            gammas = gamma_table(alpha, N_TERMS)
            a_str = mp.nstr(mp.mpf(alpha.numerator) / alpha.denominator, 17)
            for k in range(N_Z):
                z = Z_LO + (Z_HI - Z_LO) * k / (N_Z - 1)
                val = ml_series(z, gammas)
                fh.write(f"{a_str},{mp.nstr(z, 20)},{mp.nstr(val, 25)}\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
