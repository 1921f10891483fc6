"""Two ingredients of the observability proof.

A uniform-in-x bound on the time energy of free waves, measured both by
random sampling and exactly through the top eigenvalue of the time-integral
matrix; and the decay of translation averages by an irrational rotation.
"""

from wickshift.observability import ergodic_bound, ergodic_deviation, strichartz_cap, strichartz_constant
from wickshift.spectral_core import FlowParams, FourierCoeffs

for alpha in (1.5, 2.0, 3.0):
    p = FlowParams(alpha)
    exact = [strichartz_constant(p, 1.0, M) for M in (16, 32, 64)]
    sampled = [strichartz_cap(p, 1.0, M, 200, seed=0) for M in (16, 32, 64)]
    print(f"alpha={alpha}: exact constants {[round(c, 5) for c in exact]}, sampled caps {[round(c, 4) for c in sampled]}")

f = FourierCoeffs({m: 1.0 for m in (-2, -1, 0, 1, 2)})
print("\n   n   ||S_n f - mean||   bound")
for n in (1, 10, 100, 1000):
    print(f"{n:4d}   {ergodic_deviation(f, 1.0, n):.5f}            {ergodic_bound(f, 1.0, n):.5f}")
