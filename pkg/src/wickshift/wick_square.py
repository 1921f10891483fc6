"""
Renormalized square modulus of the fractional Schrodinger flow.

For truncation level ``N`` the Wick square

    f_N(t, x) = |<D>^sigma exp(i t |D|^alpha) P_N u0|^2 - ||P_N u0||_{H^sigma}^2

is a finite sum of terms ``A exp(i t omega) exp(i n x)`` indexed by pairs
``(n + m, m)`` of retained modes with ``n != 0``.  A :class:`WickRep` stores
those terms, so the time multiplier ``<D_t>^{-s1}`` acts exactly as the weight
``<omega>^{-s1}`` and no time discretization is involved.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .spectral_core import (
    FlowParams,
    FourierCoeffs,
    WickExponents,
    abs_power,
    japanese,
    sobolev_norm,
    truncate,
)

#: Number of windows spanned by the default time grid of :func:`sup_norm_bounds`.
SUP_WINDOWS = 8
DEFAULT_T_SAMPLES = 512


@dataclass(frozen=True, eq=False)
class WickRep:
    """Flat term list of ``f_N``.

    Term ``k`` contributes ``amp[k] * exp(i t omega[k]) * exp(i n[k] x)`` and
    comes from the mode pair ``(n[k] + m[k], m[k])``.  Terms are sorted by
    ``(n, m)``.
    """

    n: np.ndarray
    m: np.ndarray
    omega: np.ndarray
    amp: np.ndarray
    N: int
    sigma: float
    alpha: float

    def __len__(self):
        return len(self.n)

    @property
    def terms(self) -> dict[int, list[tuple[float, complex]]]:
        """Mapping ``n -> [(omega, amp), ...]``."""
        out: dict[int, list[tuple[float, complex]]] = {}
        for n, w, a in zip(self.n.tolist(), self.omega.tolist(), self.amp.tolist()):
            out.setdefault(n, []).append((w, a))
        return out

    def evaluate(self, t: float, x_points) -> np.ndarray:
        """Point values ``f_N(t, x)`` by direct summation of the terms."""
        x = np.atleast_1d(np.asarray(x_points, dtype=float))
        if not len(self):
            return np.zeros(x.shape, dtype=complex)
        coef = self.amp * np.exp(1j * t * self.omega)
        return np.exp(1j * np.outer(x, self.n)) @ coef


def _sorted_rep(n, m, omega, amp, N, sigma, alpha) -> WickRep:
    order = np.lexsort((m, n))
    return WickRep(n[order], m[order], omega[order], amp[order], N, sigma, alpha)


def _coalesce(n, m, omega, amp):
    # merge terms sharing (n, omega) bit-for-bit; the first m is kept
    if len(n) < 2:
        return n, m, omega, amp
    order = np.lexsort((omega, n))
    n, m, omega, amp = n[order], m[order], omega[order], amp[order]
    new = np.ones(len(n), dtype=bool)
    new[1:] = (n[1:] != n[:-1]) | (omega[1:] != omega[:-1])
    if new.all():
        return n, m, omega, amp
    group = np.cumsum(new) - 1
    summed = np.zeros(group[-1] + 1, dtype=complex)
    np.add.at(summed, group, amp)
    return n[new], m[new], omega[new], summed


def build_wick_rep(a: FourierCoeffs, N: int, sigma: float, p: FlowParams) -> WickRep:
    """Enumerate the terms of ``f_N`` for data ``a``.

    Only pairs of modes in the support of ``P_N a`` are generated, since all
    other pairs carry a zero amplitude.  The amplitude of pair
    ``(n + m, m)`` is ``<n+m>^sigma <m>^sigma a_{n+m} conj(a_m)`` and its
    time frequency is ``|n+m|^alpha - |m|^alpha``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    aN = truncate(a, N)
    k = aN.modes
    w = japanese(k) ** sigma * aN.values
    disp = p.dispersion(k)
    i1, i2 = np.nonzero(k[:, None] != k[None, :])
    n = k[i1] - k[i2]
    m = k[i2]
    omega = disp[i1] - disp[i2]
    amp = w[i1] * np.conj(w[i2])
    n, m, omega, amp = _coalesce(n, m, omega, amp)
    return _sorted_rep(n, m, omega, amp, N, sigma, p.alpha)


def rep_difference(rep2: WickRep, rep1: WickRep) -> WickRep:
    """Term-wise ``rep2 - rep1`` keyed on the mode pair ``(n, m)``.

    Pairs present in both with identical amplitude cancel and are dropped.
    """
    if rep1.alpha != rep2.alpha or rep1.sigma != rep2.sigma:
        raise ValueError("representations must share alpha and sigma")
    n = np.concatenate([rep2.n, rep1.n])
    m = np.concatenate([rep2.m, rep1.m])
    omega = np.concatenate([rep2.omega, rep1.omega])
    amp = np.concatenate([rep2.amp, -rep1.amp])
    N = max(rep1.N, rep2.N)
    if not len(n):
        return _sorted_rep(n, m, omega, amp, N, rep2.sigma, rep2.alpha)
    keys = np.stack([n, m], axis=1)
    uniq, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    summed = np.zeros(len(uniq), dtype=complex)
    np.add.at(summed, inverse.ravel(), amp)
    keep = summed != 0
    return _sorted_rep(
        uniq[keep, 0], uniq[keep, 1], omega[first][keep], summed[keep], N, rep2.sigma, rep2.alpha
    )


def _mode_sums(rep: WickRep, coef: np.ndarray):
    """Sum ``coef`` over terms sharing a spatial mode; returns (modes, sums)."""
    modes, idx = np.unique(rep.n, return_inverse=True)
    idx = idx.ravel()
    re = np.bincount(idx, weights=coef.real, minlength=len(modes))
    im = np.bincount(idx, weights=coef.imag, minlength=len(modes))
    return modes, re + 1j * im


def norm_at_time(rep: WickRep, t: float, s1: float, s2: float) -> float:
    """``|| <D_t>^{-s1} f_N(t) ||_{H^{-s2}}`` evaluated exactly from the terms."""
    if not len(rep):
        return 0.0
    coef = rep.amp * japanese(rep.omega) ** (-s1) * np.exp(1j * t * rep.omega)
    modes, inner = _mode_sums(rep, coef)
    return float(np.sqrt(np.sum(japanese(modes) ** (-2 * s2) * np.abs(inner) ** 2)))


def norm_at_times(rep: WickRep, times, s1: float, s2: float, chunk_terms: int = 2**24) -> np.ndarray:
    """Vectorized :func:`norm_at_time` over an array of times."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.zeros(times.shape)
    if not len(rep):
        return out
    modes, idx = np.unique(rep.n, return_inverse=True)
    idx = idx.ravel()
    mode_w = japanese(modes) ** (-2 * s2)
    base = rep.amp * japanese(rep.omega) ** (-s1)
    step = max(1, chunk_terms // len(rep))
    for lo in range(0, len(times), step):
        ts = times[lo:lo + step]
        coef = base[None, :] * np.exp(1j * np.outer(ts, rep.omega))
        for j, row in enumerate(coef):
            re = np.bincount(idx, weights=row.real, minlength=len(modes))
            im = np.bincount(idx, weights=row.imag, minlength=len(modes))
            out[lo + j] = np.sqrt(np.sum(mode_w * (re * re + im * im)))
    return out


def sup_time_grid(rep: WickRep, t_samples: int) -> np.ndarray:
    """``t = 0`` followed by ``t_samples`` uniform points on the sampling window.

    The window is ``[0, 2 pi ceil(W)/W * SUP_WINDOWS)`` with ``W = max|omega|``,
    or ``[0, 2 pi SUP_WINDOWS)`` when every frequency vanishes.
    """
    if t_samples < 1:
        raise ValueError("t_samples must be >= 1")
    W = float(np.max(np.abs(rep.omega))) if len(rep) else 0.0
    span = 2 * np.pi * SUP_WINDOWS * (np.ceil(W) / W if W > 0 else 1.0)
    return np.concatenate([[0.0], np.linspace(0.0, span, t_samples, endpoint=False)])


def sup_upper_bound(rep: WickRep, s1: float, s2: float) -> float:
    """Triangle-inequality bound on ``sup_t || <D_t>^{-s1} f_N(t) ||_{H^{-s2}}``."""
    if not len(rep):
        return 0.0
    coef = np.abs(rep.amp) * japanese(rep.omega) ** (-s1)
    modes, inner = _mode_sums(rep, coef)
    return float(np.sqrt(np.sum(japanese(modes) ** (-2 * s2) * inner.real ** 2)))


def sup_norm_bounds(rep: WickRep, s1: float, s2: float, t_samples: int = DEFAULT_T_SAMPLES):
    """Bracket ``(lower, upper)`` for the sup-in-time norm of ``f_N``.

    ``lower`` is the maximum over :func:`sup_time_grid`; ``upper`` applies the
    triangle inequality inside every spatial mode.
    """
    if t_samples < 1:
        raise ValueError("t_samples must be >= 1")
    if not len(rep):
        return 0.0, 0.0
    lower = float(np.max(norm_at_times(rep, sup_time_grid(rep, t_samples), s1, s2)))
    upper = sup_upper_bound(rep, s1, s2)
    return lower, max(lower, upper)


def wick_norm_at_zero(a: FourierCoeffs, N: int, sigma: float, p: FlowParams,
                      s1: float, s2: float) -> float:
    """``|| <D_t>^{-s1} f_N(0) ||_{H^{-s2}}`` without materializing the terms.

    Streams over the spatial modes ``n = 1..2N`` on a dense coefficient array
    and doubles the result, since the ``-n`` inner sum is the conjugate of the
    ``n`` one.  Memory is ``O(N)``, time ``O(N^2)``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    k = np.arange(-N, N + 1)
    w = japanese(k) ** sigma * a.dense(N)
    disp = abs_power(k, p.alpha)
    support = np.flatnonzero(w)
    if len(support) < 2:
        return 0.0
    lo, hi = support[0], support[-1]
    total = 0.0
    for n in range(1, hi - lo + 1):
        # index i is mode m = i - N; partner index i + n is mode n + m
        i = np.arange(lo, hi - n + 1)
        terms = w[i + n] * np.conj(w[i]) * japanese(disp[i + n] - disp[i]) ** (-s1)
        inner = terms.sum()
        total += japanese(n) ** (-2 * s2) * (inner.real ** 2 + inner.imag ** 2)
    return float(np.sqrt(2 * total))


class GapEstimate(NamedTuple):
    gap_upper: float
    rhs: float
    gap_lower: float = float("nan")


def cauchy_gap(a: FourierCoeffs, N1: int, N2: int, exps: WickExponents, p: FlowParams,
               t_samples: int = 0) -> GapEstimate:
    """Bound ``|| f_{N2} - f_{N1} ||`` in the sup-in-time norm and pair it with
    ``||u0||_{L2} ||P_{N2} u0 - P_{N1} u0||_{L2}``.

    ``gap_lower`` is only sampled when ``t_samples > 0``.
    """
    if N1 >= N2:
        raise ValueError(f"need N1 < N2, got N1={N1}, N2={N2}")
    rep1 = build_wick_rep(a, N1, exps.sigma, p)
    rep2 = build_wick_rep(a, N2, exps.sigma, p)
    return _gap_from_reps(a, rep1, rep2, exps, t_samples)


def _gap_from_reps(a, rep1, rep2, exps, t_samples) -> GapEstimate:
    diff = rep_difference(rep2, rep1)
    rhs = sobolev_norm(a, 0) * sobolev_norm(truncate(a, rep2.N) - truncate(a, rep1.N), 0)
    upper = sup_upper_bound(diff, exps.s1, exps.s2)
    if t_samples > 0:
        lower, _ = sup_norm_bounds(diff, exps.s1, exps.s2, t_samples)
        return GapEstimate(upper, rhs, lower)
    return GapEstimate(upper, rhs)


@dataclass(frozen=True)
class NormRecord:
    """One level of a convergence scan.

    ``gap_upper``/``rhs``/``ratio`` compare this level with the previous one
    and are NaN on the first level.
    """

    N: int
    t0_norm: float
    sup_lower: float
    sup_upper: float
    gap_upper: float = float("nan")
    rhs: float = float("nan")

    @property
    def ratio(self) -> float:
        if not np.isfinite(self.rhs):
            return float("nan")
        if self.rhs == 0:
            return 0.0 if self.gap_upper == 0 else float("inf")
        return self.gap_upper / self.rhs


def convergence_scan(a: FourierCoeffs, exps: WickExponents, p: FlowParams,
                     levels: Sequence[int], t_samples: int = 16) -> list[NormRecord]:
    """Norms of ``f_N`` and Cauchy gaps between consecutive ``levels``."""
    levels = [int(N) for N in levels]
    if not levels or any(b <= a_ for a_, b in zip(levels, levels[1:])):
        raise ValueError("levels must be nonempty and strictly increasing")
    if exps.alpha != p.alpha:
        raise ValueError("exponents were derived for a different alpha")
    records: list[NormRecord] = []
    prev = None
    for N in levels:
        rep = build_wick_rep(a, N, exps.sigma, p)
        t0 = norm_at_time(rep, 0.0, exps.s1, exps.s2)
        if t_samples:
            lower, upper = sup_norm_bounds(rep, exps.s1, exps.s2, t_samples)
        else:
            lower, upper = t0, sup_upper_bound(rep, exps.s1, exps.s2)
        if prev is None:
            records.append(NormRecord(N, t0, lower, upper))
        else:
            gap = _gap_from_reps(a, prev, rep, exps, 0)
            records.append(NormRecord(N, t0, lower, upper, gap.gap_upper, gap.rhs))
        prev = rep
    return records


REPORT_FIELDS = ("N", "t0_norm", "sup_lower", "sup_upper", "gap_upper", "rhs")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def report_to_csv(records: Sequence[NormRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for r in records:
        writer.writerow([_fmt(getattr(r, f)) for f in REPORT_FIELDS])
    return buf.getvalue()


def report_to_json(records: Sequence[NormRecord]) -> str:
    rows = []
    for r in records:
        d = asdict(r)
        rows.append({k: (None if isinstance(v, float) and not np.isfinite(v) else v) for k, v in d.items()})
    return json.dumps(rows, indent=2)
