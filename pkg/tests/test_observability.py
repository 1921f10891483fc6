import math

import numpy as np
import pytest

from conftest import random_coeffs
from oracles import arc_energy_quadrature, arc_gram_quadrature
from oracles import gauss_legendre as gl
from wickshift.observability import (
    ControlProfile,
    GramMatrix,
    assemble_gram,
    ergodic_average,
    ergodic_bound,
    ergodic_deviation,
    observability_constant,
    observability_scan,
    random_unit_data,
    rows_to_csv,
    strichartz_cap,
    strichartz_constant,
    strichartz_ratio,
    time_energy_profile,
    time_integral_matrix,
    weak_obs_check,
)
from wickshift.spectral_core import FlowParams, FourierCoeffs, uniform_grid


# --- control profiles ---------------------------------------------------------------

def test_profile_validation():
    with pytest.raises(ValueError):
        ControlProfile(FourierCoeffs({0: 1.0, 1: 1.0}))
    with pytest.raises(ValueError):
        ControlProfile(FourierCoeffs({1: 0.5, -1: 0.5}))
    with pytest.raises(ValueError):
        ControlProfile.arc(1.0, 0.5, 4)


def test_arc_coefficients_by_quadrature():
    b = ControlProfile.arc(0.3, 2.0, 6)
    x, w = gl(0.3, 2.0, 80)
    for k in range(-6, 7):
        assert b.bhat[k] == pytest.approx(np.sum(w * np.exp(-1j * k * x)) / (2 * np.pi), abs=1e-14)


# --- Gram matrices ----------------------------------------------------------------

@pytest.mark.parametrize("alpha,T,N", [(1.5, 1.0, 0), (2.0, 0.3, 5), (3.7, 2.0, 12)])
def test_uniform_gives_scaled_identity(alpha, T, N):
    G = assemble_gram(ControlProfile.uniform(), FlowParams(alpha), T, N)
    assert G.size == 2 * N + 1
    assert np.allclose(G.entries, T * np.eye(2 * N + 1), atol=1e-15, rtol=0)
    r = observability_constant(G)
    assert r.lambda_min == pytest.approx(T, rel=1e-14) and r.C == pytest.approx(1 / T, rel=1e-14)
    assert not r.degenerate


def test_one_plus_cos_entry():
    G = assemble_gram(ControlProfile.one_plus_cos(), FlowParams(2.0), 1.0, 1)
    i0, i1 = 1, 2  # rows for modes 0 and 1
    assert G.entries[i0, i1] == pytest.approx(0.5 * (np.exp(-1j) - 1) / (-1j), rel=1e-15)
    assert G.entries[i1, i1] == 1.0


def test_one_plus_cos_form_quadrature(rng):
    p, T = FlowParams(2.0), 1.0
    G = assemble_gram(ControlProfile.one_plus_cos(), p, T, 1)
    t, wt = gl(0.0, T, 60)
    x = uniform_grid(16)
    for _ in range(5):
        a = random_coeffs(rng, 1, dense=True)
        u = np.exp(1j * (np.outer(t, p.dispersion(a.modes))[:, None, :] + np.outer(x, a.modes)[None])) @ a.values
        quad = float(np.sum(wt[:, None] * (1 + np.cos(x))[None, :] * np.abs(u) ** 2) / len(x))
        assert G.form(a).real == pytest.approx(quad, abs=1e-8)


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_arc_form_matches_quadrature(rng, alpha):
    p = FlowParams(alpha)
    b = ControlProfile.arc(0.0, np.pi, 16)
    G = assemble_gram(b, p, 1.0, 8)
    for _ in range(3):
        a = random_coeffs(rng, 8)
        assert G.form(a).real == pytest.approx(arc_energy_quadrature(a, p, 1.0, 0.0, np.pi), abs=1e-6)


def test_arc_gram_entries_and_lambda_min():
    p = FlowParams(2.0)
    G = assemble_gram(ControlProfile.arc(0.0, np.pi, 16), p, 1.0, 8)
    Q = arc_gram_quadrature(8, p, 1.0, 0.0, np.pi)
    assert np.max(np.abs(G.entries - Q)) < 1e-6
    lam_oracle = np.linalg.eigvalsh(0.5 * (Q + Q.conj().T))[0]
    assert observability_constant(G).lambda_min == pytest.approx(lam_oracle, rel=1e-6)


def test_nesting_and_hermitian(rng):
    b = ControlProfile.arc(-1.0, 0.4, 40)
    p = FlowParams(2.3)
    big = assemble_gram(b, p, 1.5, 20)
    small = assemble_gram(b, p, 1.5, 7)
    sub = big.submatrix(7)
    assert np.array_equal(sub.modes, small.modes)
    assert np.array_equal(sub.entries, small.entries)
    E = big.entries
    assert np.max(np.abs(E - E.conj().T)) <= 1e-12 * np.max(np.abs(E))
    for _ in range(5):
        a = random_coeffs(rng, 20, dense=True)
        q = big.form(a)
        assert abs(q.imag) <= 1e-10 * abs(q.real)
        assert q.real > 0


def test_positive_semidefinite_and_single_modes():
    p = FlowParams(1.8)
    for b in (ControlProfile.arc(0.0, 0.5, 60), ControlProfile.one_plus_cos(), ControlProfile.arc(2.0, 6.0, 60)):
        G = assemble_gram(b, p, 0.7, 30)
        lam = np.linalg.eigvalsh(G.entries)
        assert lam[0] >= -1e-10 * np.max(np.abs(lam))
        assert np.allclose(np.diag(G.entries), b.bhat[0] * 0.7, rtol=1e-14)


def test_scaling_profile():
    p = FlowParams(2.0)
    b = ControlProfile.arc(0.0, np.pi, 16)
    r1 = observability_constant(assemble_gram(b, p, 1.0, 8))
    r2 = observability_constant(assemble_gram(b.scale(2.0), p, 1.0, 8))
    assert r2.lambda_min == pytest.approx(2 * r1.lambda_min, rel=1e-12)
    assert r2.C == pytest.approx(r1.C / 2, rel=1e-12)


def test_scan_monotone():
    results = observability_scan(ControlProfile.arc(0.0, np.pi, 64), FlowParams(2.0), 1.0, [4, 8, 16, 32])
    lams = [r.lambda_min for _, r in results]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(lams, lams[1:]))
    assert [N for N, _ in results] == [4, 8, 16, 32]


def test_degenerate_flag():
    zero = GramMatrix(np.array([-1, 0, 1]), np.diag([1.0, 0.0, 1.0]).astype(complex), 1.0, 2.0)
    r = observability_constant(zero)
    assert r.degenerate and r.C == math.inf
    tiny = GramMatrix(np.array([-1, 0, 1]), np.diag([1.0, 1e-15, 1.0]).astype(complex), 1.0, 2.0)
    assert observability_constant(tiny).degenerate


def test_gram_rejects_bad_input():
    with pytest.raises(ValueError):
        assemble_gram(ControlProfile.uniform(), FlowParams(2.0), 0.0, 3)
    with pytest.raises(ValueError):
        assemble_gram(ControlProfile.uniform(), FlowParams(2.0), 1.0, -1)


def test_time_integral_matrix_direct():
    p = FlowParams(1.5)
    modes = np.array([-2, 0, 1, 2])
    I = time_integral_matrix(modes, p, 0.8)
    t, w = gl(0.0, 0.8, 40)
    d = p.dispersion(modes)
    direct = np.einsum("t,tij->ij", w, np.exp(1j * t[:, None, None] * (d[:, None] - d[None, :])[None]))
    assert np.allclose(I, direct, atol=1e-14)
    assert I[0, 3] == 0.8


# --- Strichartz functional -------------------------------------------------------------

@pytest.mark.parametrize("n,alpha,T", [(0, 2.0, 1.0), (7, 1.5, 0.25), (-3, 3.0, 4.0)])
def test_single_mode_ratio(n, alpha, T):
    assert strichartz_ratio(FourierCoeffs({n: 0.3 - 2j}), FlowParams(alpha), T) == pytest.approx(math.sqrt(T), abs=1e-12)


@pytest.mark.parametrize("alpha,T", [(1.5, 1.0), (2.0, 0.5), (3.3, 2.0)])
def test_symmetric_pair_ratio(alpha, T):
    u0 = FourierCoeffs({1: 1, -1: 1})
    assert strichartz_ratio(u0, FlowParams(alpha), T) == pytest.approx(math.sqrt(2 * T), rel=1e-13)
    # time energy at x is T (2 + 2 cos 2x)
    x = np.linspace(0, 6, 13)
    assert np.allclose(time_energy_profile(u0, FlowParams(alpha), T, x), T * (2 + 2 * np.cos(2 * x)), atol=1e-12)


def test_time_energy_quadrature(rng):
    p = FlowParams(2.5)
    a = random_coeffs(rng, 5)
    x = rng.uniform(0, 2 * np.pi, 4)
    t, w = gl(0.0, 1.0, 200)
    u = np.exp(1j * (np.outer(t, p.dispersion(a.modes))[:, None, :] + np.outer(x, a.modes)[None])) @ a.values
    assert np.allclose(time_energy_profile(a, p, 1.0, x), w @ np.abs(u) ** 2, atol=1e-10)


def test_ratio_homogeneous_and_validated(rng):
    p = FlowParams(2.0)
    a = random_coeffs(rng, 6)
    assert strichartz_ratio(a.scale(2.0), p, 1.0) == pytest.approx(strichartz_ratio(a, p, 1.0), rel=1e-13)
    assert strichartz_ratio(FourierCoeffs({}), p, 1.0) == 0.0
    with pytest.raises(ValueError):
        strichartz_ratio(a, p, 1.0, x_samples=4 * a.max_mode)
    with pytest.raises(ValueError):
        strichartz_ratio(a, p, -1.0)


def test_exact_constant_bounds_samples():
    for alpha in (1.5, 2.0, 3.0):
        p = FlowParams(alpha)
        C = strichartz_constant(p, 1.0, 16)
        assert C >= 1.0
        assert strichartz_cap(p, 1.0, 16, 50, seed=4) <= C * (1 + 1e-12)
        # the top eigenvector is attained at x = 0
        modes = np.arange(-16, 17)
        vals, vecs = np.linalg.eigh(time_integral_matrix(modes, p, 1.0))
        top = FourierCoeffs.from_arrays(modes, np.conj(vecs[:, -1]))
        assert strichartz_ratio(top, p, 1.0) == pytest.approx(C, rel=1e-10)


def test_cap_deterministic_and_unit_data():
    p = FlowParams(2.0)
    assert strichartz_cap(p, 1.0, 8, 20, seed=3) == strichartz_cap(p, 1.0, 8, 20, seed=3)
    u = random_unit_data(np.random.default_rng(0), 10)
    assert u.l2_norm_sq() == pytest.approx(1.0, rel=1e-14) and u.max_mode <= 10


# --- weak observability ---------------------------------------------------------------

def test_weak_obs_examples():
    p, T = FlowParams(2.0), 1.0
    u = FourierCoeffs({0: 1})
    assert weak_obs_check(u, ControlProfile.uniform(), p, T, 1 / (T + 1))
    assert weak_obs_check(u, ControlProfile.uniform(), p, T, 3.0)
    assert not weak_obs_check(u, ControlProfile.uniform(), p, T, 0.99 / (T + 1))
    assert weak_obs_check(FourierCoeffs({}), ControlProfile.uniform(), p, T, 1e-9)
    with pytest.raises(ValueError):
        weak_obs_check(u, ControlProfile.uniform(), p, T, 0.0)


def test_weak_obs_with_constant_from_gram(rng):
    p, b = FlowParams(2.0), ControlProfile.arc(0.0, np.pi, 24)
    C = observability_constant(assemble_gram(b, p, 1.0, 12)).C
    for _ in range(10):
        assert weak_obs_check(random_coeffs(rng, 12), b, p, 1.0, C * (1 + 1e-9))


# --- ergodic averages -----------------------------------------------------------------

def test_ergodic_examples():
    f = FourierCoeffs({0: 2.0, 1: 1j, -3: 0.5})
    assert ergodic_average(f, 0.7, 1) == f
    half = ergodic_average(FourierCoeffs({1: 1}), np.pi, 2)
    assert abs(half[1]) < 1e-16
    with pytest.raises(ValueError):
        ergodic_average(f, 1.0, 0)


def test_ergodic_geometric_sum():
    f = FourierCoeffs({0: 1, 1: 1})
    for n in (10, 137, 1000):
        avg = ergodic_average(f, 1.0, n)
        closed = (1 - np.exp(-1j * n)) / (n * (1 - np.exp(-1j)))
        assert avg[1] == pytest.approx(closed, abs=1e-14)
        assert abs(avg[1]) <= 2 / (n * abs(1 - np.exp(-1j)))
        assert avg[0] == 1


def test_ergodic_bound_holds():
    f = FourierCoeffs({m: 1.0 for m in (-2, -1, 0, 1, 2)})
    for n in range(1, 1001):
        assert ergodic_deviation(f, 1.0, n) <= ergodic_bound(f, 1.0, n)
    assert ergodic_deviation(f, 1.0, 1000) < 0.01


def test_rows_to_csv():
    text = rows_to_csv(["n", "deviation", "bound"], [(1, 0.5, 1.0), (np.int64(2), np.float64(0.25), 0.5)])
    assert text.splitlines() == ["n,deviation,bound", "1,0.5,1.0", "2,0.25,0.5"]
