"""Why the exponents cannot be lowered.

Each counterexample is square summable, yet the weighted norm of the
renormalized square at t = 0 keeps growing once the exponents leave the
admissible range.
"""

from wickshift.optimality import (
    CounterexampleSpec,
    borderline_log_series,
    divergence_scan,
    gen_borderline_counterexample,
    time_regime_kept_sum,
)
from wickshift.spectral_core import FlowParams, sobolev_norm

p = FlowParams(2.0)
levels = [2**k for k in range(4, 11)]

print("time regularity: a_n = <n>^-(0.6), s1 = 0.8 sits 0.2 below the critical 1.0")
spec = CounterexampleSpec("time_regularity", sigma=0.5, epsilon=0.1)
for N, v in divergence_scan(spec, 0.8, 0.0, p, levels):
    kept = time_regime_kept_sum(0.1, 0.5, p, 0.8, 0.0, N)
    print(f"  N={N:5d}  value={v:8.3f}   n=1 slice alone={kept ** 0.5:8.3f}")

print("\nspace regularity: lacunary data on powers of two, s2 = 0.4 < 2 sigma")
spec = CounterexampleSpec("space_regularity", sigma=0.5, s2=0.4)
for N, v in divergence_scan(spec, 1.0, 0.4, p, levels):
    print(f"  N={N:5d}  value^2={v * v:8.3f}")

print("\nborderline: one-sided n^-1/2 (ln n)^-3/4 data, 2(s1+s2) = 1")
spec = CounterexampleSpec("borderline", sigma=0.25)
for N, v in divergence_scan(spec, 0.5, 0.0, p, levels[:5]):
    l2 = sobolev_norm(gen_borderline_counterexample(2 * N), 0)
    print(f"  N={N:5d}  value={v:.4f}  ||a||={l2:.4f}  log series={borderline_log_series(N):.4f}")
print("growth here is iterated-logarithmic; the l2 norm barely moves")
