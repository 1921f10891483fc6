"""
Space-time pairing of the Wick square against tensorized test functions.

Test functions are ``phi(t, x) = g(t) * sum_n c_n exp(i n x)`` with a Gaussian
time profile ``g(t) = A exp(-(t - t0)^2 / (2 w^2))``.  The time transform
``g^(tau) = int g(t) exp(-i t tau) dt`` is closed form, so the pairing
against two free evolutions is an exact finite sum.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, NamedTuple

import numpy as np
from scipy import integrate

from .spectral_core import FlowParams, FourierCoeffs, WickExponents, sobolev_norm

# frequencies beyond this many widths contribute below exp(-0.5 * 40**2)
_TAU_CUTOFF_WIDTHS = 40.0


@dataclass(frozen=True)
class GaussianProfile:
    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(-0.5 * ((t - self.center) / self.width) ** 2)

    def transform(self, tau):
        """``int g(t) exp(-i t tau) dt``."""
        tau = np.asarray(tau, dtype=float)
        w = self.width
        return (self.amplitude * w * np.sqrt(2 * np.pi)
                * np.exp(-0.5 * (w * tau) ** 2 - 1j * self.center * tau))


@dataclass(frozen=True)
class TestFunction:
    time_profile: GaussianProfile
    space_modes: Mapping[int, complex] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def coeff_transform(self, n: int, tau):
        return complex(self.space_modes.get(n, 0j)) * self.time_profile.transform(tau)

    def conjugate(self) -> "TestFunction":
        """Complex conjugate of ``phi``; the profile is real so only modes change."""
        return TestFunction(self.time_profile,
                            {-n: complex(c).conjugate() for n, c in self.space_modes.items()})

    def __call__(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        space = sum(complex(c) * np.exp(1j * n * x) for n, c in self.space_modes.items() if n != 0)
        return self.time_profile(t) * space


class PairingBreakdown(NamedTuple):
    resonant: complex
    nonresonant: complex
    total: complex


def pairing(phi: TestFunction, u0: FourierCoeffs, v0: FourierCoeffs, p: FlowParams) -> PairingBreakdown:
    """``int int (P0perp phi) exp(it|D|^a) u0 conj(exp(it|D|^a) v0) dx dt``.

    Equals the sum over ``n + n1 - n2 = 0``, ``n != 0`` of
    ``c^_n(|n2|^a - |n1|^a) a_{n1} conj(b_{n2})``.  Resonant terms are those
    with ``n1 = -n2``.
    """
    if not len(u0) or not len(v0):
        return PairingBreakdown(0j, 0j, 0j)
    n1 = u0.modes[:, None]
    n2 = v0.modes[None, :]
    n = n2 - n1
    c = np.zeros(n.shape, dtype=complex)
    for k, ck in phi.space_modes.items():
        if k != 0:
            c[n == k] = ck
    tau = p.dispersion(n2) - p.dispersion(n1)
    terms = c * phi.time_profile.transform(tau) * u0.values[:, None] * np.conj(v0.values)[None, :]
    resonant_mask = np.broadcast_to(n1 == -n2, terms.shape)
    resonant = complex(terms[resonant_mask].sum())
    nonresonant = complex(terms[~resonant_mask].sum())
    return PairingBreakdown(resonant, nonresonant, resonant + nonresonant)


def smoothed_profile(width: float, s1: float, t):
    """``<D_t>^{s1} g`` for the unit-amplitude Gaussian centred at 0.

    ``(1/pi) int_0^inf <tau>^{s1} g^(tau) cos(t tau) dtau``, by adaptive quadrature.
    """
    scale = width * np.sqrt(2 * np.pi) / np.pi
    cutoff = _TAU_CUTOFF_WIDTHS / width
    f = lambda tau: (1 + tau * tau) ** (s1 / 2) * np.exp(-0.5 * (width * tau) ** 2)  # noqa: E731
    t = abs(float(t))
    if t == 0:
        val, _ = integrate.quad(f, 0, cutoff, epsabs=1e-13, limit=200)
    else:
        val, _ = integrate.quad(f, 0, cutoff, weight="cos", wvar=t, epsabs=1e-13, limit=400)
    return scale * val


@lru_cache(maxsize=256)
def profile_l1_norm(width: float, s1: float) -> float:
    """``int |<D_t>^{s1} g(t)| dt`` for the unit-amplitude Gaussian of the given width."""
    if s1 == 0:
        return width * np.sqrt(2 * np.pi)
    g = lambda t: abs(smoothed_profile(width, s1, t))  # noqa: E731
    # even in t; decays like exp(-|t|) plus a Gaussian of the given width
    edges = sorted({0.0, width, 2 * width, 4 * width, 8 * width, 16 * width, 10.0, 20.0, 30.0, 45.0, 60.0})
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(g, lo, hi, epsabs=1e-11, limit=200)
        total += val
    return 2 * total


def test_norm(phi: TestFunction, s1: float, s2: float) -> float:
    """``int || <D_t>^{s1} phi(t, .) ||_{H^{s2}} dt``.

    For a tensorized ``phi`` the integrand factors into the L1 norm of the
    smoothed time profile times the ``H^{s2}`` norm of the space modes.
    """
    prof = phi.time_profile
    space = sobolev_norm(FourierCoeffs(dict(phi.space_modes)), s2)
    return abs(prof.amplitude) * profile_l1_norm(prof.width, s1) * space


test_norm.__test__ = False


def phase_gap(x, y, alpha: float):
    """``(||x|^a - |y|^a|, 2^{1-a} (|x|+|y|)^{a-1} ||x|-|y||)``; the first dominates."""
    if not np.all(np.asarray(alpha) > 1):
        raise ValueError("alpha must be > 1")
    ax = np.abs(np.asarray(x, dtype=float))
    ay = np.abs(np.asarray(y, dtype=float))
    lhs = np.abs(ax ** alpha - ay ** alpha)
    rhs = 2.0 ** (1 - alpha) * (ax + ay) ** (alpha - 1) * np.abs(ax - ay)
    return lhs, rhs


def _random_coeffs(rng: np.random.Generator, max_mode: int) -> FourierCoeffs:
    K = int(rng.integers(1, max_mode + 1))
    modes = np.arange(-K, K + 1)
    vals = rng.standard_normal(len(modes)) + 1j * rng.standard_normal(len(modes))
    return FourierCoeffs.from_arrays(modes, vals)


#: Widths drawn by the probe; a fixed menu keeps the time-norm quadrature cached.
PROBE_WIDTHS = (0.5, 0.75, 1.0, 1.5, 2.0)


def random_sample(rng: np.random.Generator, max_mode: int = 32):
    """Draw ``(phi, u0, v0)`` with supports up to ``max_mode`` and unit-normal parts."""
    prof = GaussianProfile(center=float(rng.uniform(-2, 2)), width=float(rng.choice(PROBE_WIDTHS)))
    phi = TestFunction(prof, dict(_random_coeffs(rng, max_mode).entries))
    return phi, _random_coeffs(rng, max_mode), _random_coeffs(rng, max_mode)


class ProbeSample(NamedTuple):
    ratio: float
    resonant_ratio: float


def pairing_ratio(phi, u0, v0, p: FlowParams, exps: WickExponents) -> ProbeSample:
    """Pairing size against the bound shape, overall and for the resonant part.

    The resonant part is measured against ``test_norm(phi, s1, 2 sigma)``.
    """
    br = pairing(phi, u0, v0, p)
    norms = sobolev_norm(u0, -exps.sigma) * sobolev_norm(v0, -exps.sigma)
    if norms == 0:
        return ProbeSample(0.0, 0.0)
    denom = test_norm(phi, exps.s1, exps.s2) * norms
    denom_res = test_norm(phi, exps.s1, 2 * exps.sigma) * norms
    ratio = abs(br.total) / denom if denom > 0 else 0.0
    res = abs(br.resonant) / denom_res if denom_res > 0 else 0.0
    return ProbeSample(ratio, res)


def probe_samples(sigma: float, p: FlowParams, trials: int, seed: int,
                  max_mode: int = 32, workers: int = 1) -> list[ProbeSample]:
    """Ratios for ``trials`` independent samples; trial ``k`` uses the ``k``-th spawned stream."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    exps = WickExponents.for_flow(sigma, p.alpha)
    streams = np.random.SeedSequence(seed).spawn(trials)

    def one(ss):
        return pairing_ratio(*random_sample(np.random.default_rng(ss), max_mode), p, exps)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, streams))
    return [one(ss) for ss in streams]


def constant_probe(sigma: float, p: FlowParams, trials: int, seed: int) -> float:
    """Largest sampled ``|pairing| / (test_norm * ||u0||_{H^-sigma} * ||v0||_{H^-sigma})``."""
    return max(s.ratio for s in probe_samples(sigma, p, trials, seed))


def probe_to_csv(seed: int, samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed", "trial", "ratio"])
    for k, s in enumerate(samples):
        writer.writerow([seed, k, repr(float(s.ratio))])
    return buf.getvalue()
