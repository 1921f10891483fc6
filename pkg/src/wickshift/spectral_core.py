"""
Fourier-side representation of distributions on the circle.

Coefficients are stored sparsely as a map ``n -> a_n`` with the averaging
normalization of the circle, so that ``||u||_{L^2}^2 = sum |a_n|^2``.
The fractional Schrodinger flow ``exp(i t |D|^alpha)`` is diagonal in this
basis and is applied exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np


def japanese(x):
    """Japanese bracket ``<x> = (1 + x^2)^(1/2)``, elementwise."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + x * x)


def abs_power(n, alpha: float):
    """``|n|^alpha`` computed as ``exp(alpha ln|n|)``, with ``0 -> 0`` exactly."""
    n = np.abs(np.asarray(n, dtype=float))
    out = np.zeros_like(n)
    nz = n != 0
    out[nz] = np.exp(alpha * np.log(n[nz]))
    return out


@dataclass(frozen=True)
class FlowParams:
    """Dispersion exponent of ``i u_t + |D|^alpha u = 0``; requires ``alpha > 1``."""

    alpha: float

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 1:
            raise ValueError(f"alpha must be > 1, got {self.alpha!r}")

    def dispersion(self, n):
        return abs_power(n, self.alpha)


@dataclass(frozen=True)
class FourierCoeffs:
    """Finitely supported Fourier coefficients ``{n: a_n}``.

    Exact zeros are dropped on construction, so ``max_mode`` is the largest
    ``|n|`` carrying a nonzero amplitude (``-1`` for the empty map).
    """

    entries: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, a in self.entries.items():
            if int(n) != n:
                raise ValueError(f"mode must be an integer, got {n!r}")
            a = complex(a)
            if not (np.isfinite(a.real) and np.isfinite(a.imag)):
                raise ValueError(f"non-finite amplitude at mode {n}")
            if a != 0:
                clean[int(n)] = a
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_arrays(cls, modes: Iterable[int], values: Iterable[complex]) -> "FourierCoeffs":
        return cls(dict(zip((int(n) for n in modes), values)))

    @classmethod
    def from_dense(cls, values, N: int) -> "FourierCoeffs":
        """Inverse of :meth:`dense`: ``values[k]`` is the amplitude at ``k - N``."""
        values = np.asarray(values)
        if values.shape != (2 * N + 1,):
            raise ValueError("dense array must have length 2N+1")
        return cls.from_arrays(range(-N, N + 1), values)

    @property
    def max_mode(self) -> int:
        return max((abs(n) for n in self.entries), default=-1)

    @property
    def modes(self) -> np.ndarray:
        return np.fromiter(self.entries.keys(), dtype=np.int64, count=len(self.entries))

    @property
    def values(self) -> np.ndarray:
        return np.fromiter(self.entries.values(), dtype=complex, count=len(self.entries))

    def dense(self, N: int) -> np.ndarray:
        """Amplitudes on ``-N..N`` as a length ``2N+1`` array; modes beyond ``N`` are dropped."""
        out = np.zeros(2 * N + 1, dtype=complex)
        for n, a in self.entries.items():
            if abs(n) <= N:
                out[n + N] = a
        return out

    def __getitem__(self, n: int) -> complex:
        return self.entries.get(n, 0j)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def __add__(self, other: "FourierCoeffs") -> "FourierCoeffs":
        out = dict(self.entries)
        for n, a in other.entries.items():
            out[n] = out.get(n, 0j) + a
        return FourierCoeffs(out)

    def __neg__(self) -> "FourierCoeffs":
        return FourierCoeffs({n: -a for n, a in self.entries.items()})

    def __sub__(self, other: "FourierCoeffs") -> "FourierCoeffs":
        return self + (-other)

    def scale(self, c: complex) -> "FourierCoeffs":
        return FourierCoeffs({n: c * a for n, a in self.entries.items()})

    def conj(self) -> "FourierCoeffs":
        return FourierCoeffs({n: a.conjugate() for n, a in self.entries.items()})

    def l2_norm_sq(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.entries.values()))

    def to_json(self) -> str:
        """JSON array of ``[n, re, im]`` triples sorted by ``n``."""
        return json.dumps([[n, a.real, a.imag] for n, a in self.entries.items()])

    @classmethod
    def from_json(cls, text: str) -> "FourierCoeffs":
        return cls({int(n): complex(re, im) for n, re, im in json.loads(text)})


def evolve(a: FourierCoeffs, p: FlowParams, t: float) -> FourierCoeffs:
    """Apply the propagator: ``a_n -> a_n exp(i t |n|^alpha)``."""
    if not len(a):
        return a
    phase = np.exp(1j * t * p.dispersion(a.modes))
    return FourierCoeffs.from_arrays(a.modes, a.values * phase)


def truncate(a: FourierCoeffs, N: int) -> FourierCoeffs:
    """Keep the modes with ``|n| <= N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return FourierCoeffs({n: v for n, v in a.entries.items() if abs(n) <= N})


def sobolev_norm(a: FourierCoeffs, s: float) -> float:
    """``sqrt(sum <n>^(2s) |a_n|^2)``; ``s = 0`` is the L2 norm."""
    if not len(a):
        return 0.0
    w = japanese(a.modes) ** (2.0 * s)
    return float(np.sqrt(np.sum(w * np.abs(a.values) ** 2)))


def evaluate_grid(a: FourierCoeffs, p: FlowParams, t: float, x_points) -> np.ndarray:
    """Point values of ``exp(i t |D|^alpha) u0`` at ``x_points`` by direct summation."""
    x = np.atleast_1d(np.asarray(x_points, dtype=float))
    if x.size == 0:
        raise ValueError("x_points must be nonempty")
    if not len(a):
        return np.zeros(x.shape, dtype=complex)
    b = evolve(a, p, t)
    return np.exp(1j * np.outer(x, b.modes)) @ b.values


def uniform_grid(M: int) -> np.ndarray:
    """``M`` equispaced points on ``[0, 2 pi)``."""
    return 2 * np.pi * np.arange(M) / M


def exponent_threshold(alpha: float) -> float:
    """Critical smoothing index ``1/4 - 1/(4 alpha)`` separating the two ``s2`` branches."""
    return 0.25 - 0.25 / alpha


@dataclass(frozen=True)
class WickExponents:
    """Time and space regularity ``(s1, s2)`` at which the Wick square converges.

    ``s1 (alpha - 1) = 2 sigma``; ``s2 = 2 sigma`` above the threshold
    :func:`exponent_threshold`, otherwise ``max(0, 1/2 - s1) + lambda_slack``.
    Use :meth:`for_flow` to derive them; direct construction is validated.
    """

    sigma: float
    s1: float
    s2: float
    alpha: float
    lambda_slack: float = 0.0

    def __post_init__(self):
        FlowParams(self.alpha)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.lambda_slack < 0:
            raise ValueError("lambda_slack must be nonnegative")
        target = 2 * self.sigma / (self.alpha - 1)
        if not np.isclose(self.s1, target, rtol=1e-12, atol=1e-15):
            raise ValueError(f"s1 must equal 2 sigma/(alpha-1) = {target!r}")
        if self.sigma > exponent_threshold(self.alpha):
            expected = 2 * self.sigma
        else:
            if self.lambda_slack <= 0:
                raise ValueError("lambda_slack must be positive below the threshold")
            expected = max(0.0, 0.5 - self.s1) + self.lambda_slack
        if not np.isclose(self.s2, expected, rtol=1e-12, atol=1e-15):
            raise ValueError(f"s2 must equal {expected!r} for these sigma, alpha")

    @classmethod
    def for_flow(cls, sigma: float, alpha: float, lambda_slack: float = 0.01) -> "WickExponents":
        s1 = 2 * sigma / (alpha - 1)
        if sigma > exponent_threshold(alpha):
            return cls(sigma, s1, 2 * sigma, alpha, 0.0)
        return cls(sigma, s1, max(0.0, 0.5 - s1) + lambda_slack, alpha, lambda_slack)
