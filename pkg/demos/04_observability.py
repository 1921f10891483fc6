"""Observability from an arc.

The observed energy int_0^T int b |u|^2 is a Hermitian form on each finite
mode space.  Its smallest eigenvalue decreases with the truncation and
settles at a positive value, as the observability inequality predicts.
"""

import numpy as np

from wickshift.observability import ControlProfile, assemble_gram, observability_scan, weak_obs_check
from wickshift.spectral_core import FlowParams, FourierCoeffs

p = FlowParams(2.0)
print("uniform control, N=4:", np.allclose(assemble_gram(ControlProfile.uniform(), p, 1.0, 4).entries, np.eye(9)))

for beta, gamma in [(0.0, np.pi), (0.0, 1.0), (0.0, 0.25)]:
    b = ControlProfile.arc(beta, gamma, 128)
    scan = observability_scan(b, p, 1.0, [4, 8, 16, 32, 64])
    print(f"\narc ({beta:g}, {gamma:g}), mass {b.bhat[0].real:.3f}")
    for N, r in scan:
        print(f"  N={N:3d}  lambda_min={r.lambda_min:.6f}  C={r.C:.3f}")

b = ControlProfile.arc(0.0, np.pi, 16)
u0 = FourierCoeffs({k: 1.0 for k in range(-8, 9)})
print("\nweak observability with C = 30:", weak_obs_check(u0, b, p, 1.0, 30.0))
