"""Renormalized square of a free fractional Schrodinger wave.

Build f_N for a rough initial datum, check it against the pointwise
definition on a grid, then watch the weighted norms settle as the
truncation level grows.
"""

import numpy as np

from wickshift.spectral_core import FlowParams, FourierCoeffs, WickExponents, japanese
from wickshift.wick_square import build_wick_rep, cauchy_gap, convergence_scan, norm_at_time

p = FlowParams(alpha=2.0)
exps = WickExponents.for_flow(sigma=0.5, alpha=p.alpha)
print(f"exponents for sigma={exps.sigma}, alpha={p.alpha}: s1={exps.s1:g}, s2={exps.s2:g}")

# a single mode has constant modulus, so its renormalized square vanishes
rep = build_wick_rep(FourierCoeffs({3: 1 + 1j}), 5, exps.sigma, p)
print("single mode -> number of terms:", len(rep))

# two symmetric modes: a standing wave whose square oscillates like cos(2x)
rep = build_wick_rep(FourierCoeffs({1: 1, -1: 1}), 1, exps.sigma, p)
print("two modes -> terms:", rep.terms)
print("norm at t=0 and t=7:", norm_at_time(rep, 0.0, exps.s1, exps.s2), norm_at_time(rep, 7.0, exps.s1, exps.s2))

# data just below L^2 regularity of the weights: a_n = <n>^-0.6
n = np.arange(-256, 257)
a = FourierCoeffs.from_arrays(n, japanese(n) ** -0.6)
print("\nlevel  t0_norm   sup bracket          gap to previous   rhs")
for r in convergence_scan(a, exps, p, [16, 32, 64, 128, 256], t_samples=16):
    print(f"{r.N:5d}  {r.t0_norm:.5f}   [{r.sup_lower:.5f}, {r.sup_upper:.5f}]   {r.gap_upper:.5f}          {r.rhs:.4f}")

g = cauchy_gap(a, 128, 256, exps, p)
print(f"\ngap 128 -> 256 is {g.gap_upper:.4f}, {g.gap_upper / g.rhs:.3f} of ||a|| * ||P_256 a - P_128 a||")
