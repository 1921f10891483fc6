"""
Counterexample data showing the Wick-square exponents cannot be improved.

Each generator materializes an L2 coefficient sequence up to a cutoff.  For
that data ``|| <D_t>^{-s1} f_N(0) ||_{H^{-s2}}`` grows without bound in the
matching exponent regime, and :func:`divergence_scan` records it over levels.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .spectral_core import FlowParams, FourierCoeffs, japanese
from .wick_square import wick_norm_at_zero

KINDS = ("time_regularity", "space_regularity", "borderline")

DEFAULT_LEVELS = {
    "time_regularity": [2**k for k in range(4, 13)],
    "space_regularity": [2**k for k in range(4, 13)],
    "borderline": [2**k for k in range(4, 11)],
}

# slack for the equality-type regime conditions
_REGIME_TOL = 1e-12


@dataclass(frozen=True)
class CounterexampleSpec:
    kind: str
    sigma: float
    epsilon: float | None = None
    s2: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown counterexample kind {self.kind!r}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.kind == "time_regularity" and not (self.epsilon is not None and self.epsilon > 0):
            raise ValueError("time_regularity needs epsilon > 0")
        if self.kind == "space_regularity":
            if self.s2 is None or not self.s2 < 2 * self.sigma:
                raise ValueError("space_regularity needs s2 < 2 sigma")


def gen_time_counterexample(epsilon: float, N: int) -> FourierCoeffs:
    """``a_n = <n>^{-(1/2 + epsilon)}`` for ``|n| <= N``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = np.arange(-N, N + 1)
    return FourierCoeffs.from_arrays(n, japanese(n) ** (-(0.5 + epsilon)))


def gen_lacunary_counterexample(sigma: float, s2: float, N: int) -> FourierCoeffs:
    """``a_{+-n} = n^{-(2 sigma - s2)/2}`` on ``n = 2^k <= N``, zero elsewhere."""
    if not s2 < 2 * sigma:
        raise ValueError("need s2 < 2 sigma, otherwise the sequence is not square summable")
    out = {}
    n = 1
    while n <= N:
        v = float(n) ** (-(2 * sigma - s2) / 2)
        out[n] = v
        out[-n] = v
        n *= 2
    return FourierCoeffs(out)


def gen_borderline_counterexample(N: int) -> FourierCoeffs:
    """One-sided ``a_1 = 1``, ``a_n = n^{-1/2} (ln n)^{-3/4}`` for ``2 <= n <= N``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(2, N + 1, dtype=float)
    vals = np.concatenate([[1.0], n ** -0.5 * np.log(n) ** -0.75])
    return FourierCoeffs.from_arrays(range(1, N + 1), vals)


def generate(spec: CounterexampleSpec, N: int) -> FourierCoeffs:
    if spec.kind == "time_regularity":
        return gen_time_counterexample(spec.epsilon, N)
    if spec.kind == "space_regularity":
        return gen_lacunary_counterexample(spec.sigma, spec.s2, N)
    return gen_borderline_counterexample(N)


def check_regime(spec: CounterexampleSpec, s1: float, s2: float, p: FlowParams) -> None:
    """Raise ``ValueError`` unless ``(s1, s2)`` lies in the divergence regime of ``spec``."""
    s1_crit = 2 * spec.sigma / (p.alpha - 1)
    if spec.kind == "time_regularity":
        bound = s1_crit - 2 * spec.epsilon / (p.alpha - 1)
        if s1 > bound + _REGIME_TOL:
            raise ValueError(f"time regime needs s1 <= {bound!r}, got {s1!r}")
    elif spec.kind == "space_regularity":
        if s2 != spec.s2:
            raise ValueError("s2 must match the one the lacunary data was built for")
    else:
        if abs(s1 - s1_crit) > _REGIME_TOL:
            raise ValueError(f"borderline regime needs s1 = {s1_crit!r}, got {s1!r}")
        if 2 * (s1 + s2) > 1 + _REGIME_TOL:
            raise ValueError("borderline regime needs 2 (s1 + s2) <= 1")


def divergence_scan(spec: CounterexampleSpec, s1: float, s2: float, p: FlowParams,
                    levels: Sequence[int] | None = None, workers: int = 1) -> list[tuple[int, float]]:
    """``(N, value)`` with ``value = || <D_t>^{-s1} f_M(0) ||_{H^{-s2}}``.

    ``M = N`` for the time and space regimes.  For the borderline regime the
    data is cut at ``2N`` and the Wick square is taken at level ``M = 2N``.
    """
    levels = list(DEFAULT_LEVELS[spec.kind] if levels is None else levels)
    if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be nonempty and strictly increasing")
    check_regime(spec, s1, s2, p)
    scale = 2 if spec.kind == "borderline" else 1

    def one(N):
        M = scale * N
        return N, wick_norm_at_zero(generate(spec, M), M, spec.sigma, p, s1, s2)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, levels))
    return [one(N) for N in levels]


def time_regime_kept_sum(epsilon: float, sigma: float, p: FlowParams, s1: float, s2: float, N: int) -> float:
    """Squared ``n = 1`` contribution restricted to ``1 <= m <= N - 1``.

    A lower bound for the squared time-regime value at level ``N``.
    """
    m = np.arange(1, N, dtype=float)
    a_m = japanese(m) ** (-(0.5 + epsilon))
    a_m1 = japanese(m + 1) ** (-(0.5 + epsilon))
    omega = p.dispersion(m + 1) - p.dispersion(m)
    inner = np.sum(japanese(m + 1) ** sigma * japanese(m) ** sigma * japanese(omega) ** (-s1) * a_m1 * a_m)
    return float(japanese(1) ** (-2 * s2) * inner ** 2)


def time_regime_power_sum(epsilon: float, sigma: float, alpha: float, s1: float, N: int) -> float:
    """``(sum_{1<=m<=N-1} <1+m>^{-(s1(alpha-1) + 1 + 2 epsilon - 2 sigma)})^2``."""
    m = np.arange(1, N, dtype=float)
    q = s1 * (alpha - 1) + 1 + 2 * epsilon - 2 * sigma
    return float(np.sum(japanese(1 + m) ** (-q)) ** 2)


def space_regime_kept_sum(sigma: float, s2: float, N: int) -> float:
    """``sum_{0<|n|<=N} <n>^{4 sigma} <2n>^{-2 s2} |a_n a_{-n}|^2`` for the lacunary data.

    The ``m = -n`` diagonal of the even modes, a lower bound for the squared
    space-regime value at level ``N``.
    """
    a = gen_lacunary_counterexample(sigma, s2, N)
    n = a.modes
    vals = a.values
    partner = np.array([a[-k] for k in n])
    return float(np.sum(japanese(n) ** (4 * sigma) * japanese(2 * n) ** (-2 * s2) * np.abs(vals * partner) ** 2))


def borderline_restricted_sum(sigma: float, p: FlowParams, s1: float, s2: float, N: int) -> float:
    """Squared level-``2N`` value restricted to ``-N <= n <= -1`` and ``-2n <= m <= 2N``."""
    a = gen_borderline_counterexample(2 * N).dense(2 * N).real
    idx = lambda k: k + 2 * N  # noqa: E731
    total = 0.0
    for n in range(1, N + 1):
        m = np.arange(2 * n, 2 * N + 1)
        omega = p.dispersion(m - n) - p.dispersion(m)
        terms = (japanese(m - n) ** sigma * japanese(m) ** sigma * japanese(omega) ** (-s1)
                 * a[idx(m - n)] * a[idx(m)])
        total += japanese(n) ** (-2 * s2) * terms.sum() ** 2
    return float(total)


def borderline_log_series(N: int) -> float:
    """``sum_{n=1}^N (1/n) |(ln 2n)^{-1/2} - (ln 2N)^{-1/2}|^2``, the closed lower-bound series."""
    n = np.arange(1, N + 1, dtype=float)
    return float(np.sum((np.log(2 * n) ** -0.5 - np.log(2 * N) ** -0.5) ** 2 / n))


def scan_to_csv(kind: str, rows: Sequence[tuple[int, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "N", "value"])
    for N, v in rows:
        writer.writerow([kind, int(N), repr(float(v))])
    return buf.getvalue()


def scan_echo(spec: CounterexampleSpec, s1: float, s2: float, p: FlowParams) -> str:
    return json.dumps({"spec": asdict(spec), "s1": s1, "s2": s2, "alpha": p.alpha}, indent=2)
