"""
Finite-dimensional observability of the fractional Schrodinger flow.

On the span of ``exp(i n x)``, ``|n| <= N``, the observed energy

    Q(a) = int_0^T int b(x) |exp(i t |D|^alpha) u0|^2 dx dt

is a Hermitian form.  Its Gram matrix, smallest eigenvalue and the related
``L^inf_x L^2_t`` functional and ergodic averages are computed exactly in
the frequency domain.  ``dx`` is the normalized measure ``dx / (2 pi)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import linalg

from .spectral_core import FlowParams, FourierCoeffs, sobolev_norm, uniform_grid

DEGENERACY_RTOL = 1e-14


@dataclass(frozen=True)
class ControlProfile:
    """Nonnegative observation weight ``b`` given by its Fourier coefficients."""

    bhat: FourierCoeffs
    description: str = ""

    def __post_init__(self):
        for k, c in self.bhat:
            if abs(self.bhat[-k] - c.conjugate()) > 1e-12 * max(1.0, abs(c)):
                raise ValueError(f"bhat is not Hermitian at mode {k}: b must be real")
        b0 = self.bhat[0]
        if not (b0.real > 0):
            raise ValueError("admissible profiles have positive mean bhat(0)")

    @classmethod
    def uniform(cls) -> "ControlProfile":
        return cls(FourierCoeffs({0: 1.0}), "uniform")

    @classmethod
    def one_plus_cos(cls) -> "ControlProfile":
        return cls(FourierCoeffs({0: 1.0, 1: 0.5, -1: 0.5}), "one_plus_cos")

    @classmethod
    def arc(cls, beta: float, gamma: float, kmax: int) -> "ControlProfile":
        """Indicator of the arc ``(beta, gamma)``, modes ``|k| <= kmax``.

        ``bhat(k) = (exp(-i k beta) - exp(-i k gamma)) / (2 pi i k)`` and
        ``bhat(0) = (gamma - beta) / (2 pi)``.
        """
        if not 0 < gamma - beta <= 2 * np.pi:
            raise ValueError("need 0 < gamma - beta <= 2 pi")
        k = np.arange(1, kmax + 1)
        pos = (np.exp(-1j * k * beta) - np.exp(-1j * k * gamma)) / (2j * np.pi * k)
        entries = {0: (gamma - beta) / (2 * np.pi)}
        for kk, c in zip(k.tolist(), pos):
            entries[kk] = c
            entries[-kk] = np.conj(c)
        return cls(FourierCoeffs(entries), f"arc({beta!r},{gamma!r})")

    def scale(self, c: float) -> "ControlProfile":
        return ControlProfile(self.bhat.scale(c), f"{c!r}*{self.description}")


def time_integral_matrix(modes: np.ndarray, p: FlowParams, T: float) -> np.ndarray:
    """``I[i, j] = int_0^T exp(i t (|n_i|^alpha - |n_j|^alpha)) dt``.

    Resonant pairs are detected as ``|n_i| = |n_j|`` and get exactly ``T``.
    """
    disp = p.dispersion(modes)
    d = disp[:, None] - disp[None, :]
    resonant = np.abs(modes)[:, None] == np.abs(modes)[None, :]
    safe = np.where(resonant, 1.0, d)
    out = np.expm1(1j * T * safe) / (1j * safe)
    out[resonant] = T
    return out


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """``entries[i, j]`` pairs modes ``n1 = modes[i]``, ``n2 = modes[j]``; the
    form is ``sum a_{n1} conj(a_{n2}) entries[n1, n2]``."""

    modes: np.ndarray
    entries: np.ndarray
    T: float
    alpha: float

    @property
    def size(self) -> int:
        return len(self.modes)

    @property
    def N(self) -> int:
        return int(self.modes.max())

    def form(self, a: FourierCoeffs) -> complex:
        """Value of the quadratic form at ``a`` (modes beyond ``N`` ignored)."""
        v = a.dense(self.N)
        return complex(v @ self.entries @ np.conj(v))

    def submatrix(self, N: int) -> "GramMatrix":
        keep = np.abs(self.modes) <= N
        return GramMatrix(self.modes[keep], self.entries[np.ix_(keep, keep)], self.T, self.alpha)


def assemble_gram(b: ControlProfile, p: FlowParams, T: float, N: int) -> GramMatrix:
    """Gram matrix of the observed energy on modes ``|n| <= N``.

    ``entries[n1, n2] = bhat(n2 - n1) * I_T(n1, n2)``; coefficients of ``b``
    missing up to ``2N`` are treated as zero.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if N < 0:
        raise ValueError("N must be nonnegative")
    modes = np.arange(-N, N + 1)
    bh = b.bhat.dense(2 * N)
    shift = modes[None, :] - modes[:, None] + 2 * N
    return GramMatrix(modes, bh[shift] * time_integral_matrix(modes, p, T), T, p.alpha)


class ObservabilityResult(NamedTuple):
    lambda_min: float
    C: float
    degenerate: bool


def observability_constant(G: GramMatrix) -> ObservabilityResult:
    """Smallest eigenvalue of ``G`` and the best constant ``C = 1 / lambda_min``.

    ``degenerate`` is set (and ``C = inf``) when ``lambda_min`` is at most
    ``1e-14 ||G||``.
    """
    evals = linalg.eigvalsh(G.entries)
    lam = float(evals[0])
    scale = float(np.max(np.abs(evals)))
    if lam <= DEGENERACY_RTOL * scale:
        return ObservabilityResult(lam, float("inf"), True)
    return ObservabilityResult(lam, 1.0 / lam, False)


def observability_scan(b: ControlProfile, p: FlowParams, T: float, levels: Sequence[int]):
    """``(N, result)`` for each level, from one assembly at the largest level."""
    levels = sorted(int(N) for N in levels)
    G = assemble_gram(b, p, T, levels[-1])
    return [(N, observability_constant(G.submatrix(N))) for N in levels]


def time_energy_profile(u0: FourierCoeffs, p: FlowParams, T: float, x) -> np.ndarray:
    """``int_0^T |u(t, x)|^2 dt`` at the points ``x``, exactly."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not len(u0):
        return np.zeros(x.shape)
    modes = u0.modes
    I = time_integral_matrix(modes, p, T)
    W = u0.values[None, :] * np.exp(1j * np.outer(x, modes))
    return np.real(np.sum((W @ I) * np.conj(W), axis=1))


def strichartz_ratio(u0: FourierCoeffs, p: FlowParams, T: float, x_samples: int | None = None) -> float:
    """``max_x sqrt(int_0^T |u(t,x)|^2 dt) / ||u0||_{L2}`` over a uniform grid."""
    if not T > 0:
        raise ValueError("T must be positive")
    if not len(u0):
        return 0.0
    need = 4 * (u0.max_mode + 1)
    x_samples = need if x_samples is None else x_samples
    if x_samples < need:
        raise ValueError(f"x_samples must be at least {need}")
    F = time_energy_profile(u0, p, T, uniform_grid(x_samples))
    return float(np.sqrt(max(F.max(), 0.0)) / sobolev_norm(u0, 0))


def random_unit_data(rng: np.random.Generator, max_mode: int) -> FourierCoeffs:
    modes = np.arange(-max_mode, max_mode + 1)
    v = rng.standard_normal(len(modes)) + 1j * rng.standard_normal(len(modes))
    return FourierCoeffs.from_arrays(modes, v / np.linalg.norm(v))


def strichartz_constant(p: FlowParams, T: float, max_mode: int) -> float:
    """Exact best constant of the ``L^inf_x L^2_t`` bound on modes ``|n| <= max_mode``.

    At each ``x`` the time energy is a Hermitian form in ``a`` conjugated by a
    unitary diagonal, so the supremum over data is ``sqrt(lambda_max(I_T))``.
    """
    modes = np.arange(-max_mode, max_mode + 1)
    top = linalg.eigvalsh(time_integral_matrix(modes, p, T), subset_by_index=[len(modes) - 1] * 2)
    return float(np.sqrt(top[0]))


def strichartz_cap(p: FlowParams, T: float, max_mode: int, samples: int, seed: int) -> float:
    """Largest :func:`strichartz_ratio` over random unit-norm data.

    Each sample draws its own support ``|n| <= K`` with ``K`` uniform on
    ``1..max_mode`` and unit-normal real and imaginary parts.
    """
    rng = np.random.default_rng(seed)
    cap = 0.0
    for _ in range(samples):
        K = int(rng.integers(1, max_mode + 1))
        cap = max(cap, strichartz_ratio(random_unit_data(rng, K), p, T))
    return cap


def weak_obs_check(u0: FourierCoeffs, b: ControlProfile, p: FlowParams, T: float, C_candidate: float) -> bool:
    """Whether ``||u0||^2 <= C (Q(u0) + ||u0||_{H^-alpha}^2)`` holds."""
    if not C_candidate > 0:
        raise ValueError("C_candidate must be positive")
    if not len(u0):
        return True
    G = assemble_gram(b, p, T, u0.max_mode)
    rhs = G.form(u0).real + sobolev_norm(u0, -p.alpha) ** 2
    return sobolev_norm(u0, 0) ** 2 <= C_candidate * rhs


def ergodic_average(f: FourierCoeffs, shift: float, n: int) -> FourierCoeffs:
    """``S_n f = (1/n) sum_{k<n} f(. - k shift)``; mode ``m`` picks up the
    average of ``exp(-i m k shift)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not len(f):
        return f
    k = np.arange(n)
    mult = np.exp(-1j * np.outer(f.modes, k) * shift).mean(axis=1)
    return FourierCoeffs.from_arrays(f.modes, f.values * mult)


def ergodic_deviation(f: FourierCoeffs, shift: float, n: int) -> float:
    """``||S_n f - fhat(0)||_{L2}``."""
    avg = ergodic_average(f, shift, n)
    return float(np.sqrt(sum(abs(c) ** 2 for m, c in avg if m != 0)))


def ergodic_bound(f: FourierCoeffs, shift: float, n: int) -> float:
    """``(2/n) sum_{m != 0} |f_m| / |1 - exp(-i m shift)|``."""
    total = 0.0
    for m, c in f:
        if m != 0:
            total += abs(c) / abs(1 - np.exp(-1j * m * shift))
    return 2 * total / n


def rows_to_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (str, int, np.integer)) else repr(float(v)) for v in row])
    return buf.getvalue()

