import math

import numpy as np
import pytest

from oracles import direct_norm_t0
from wickshift.optimality import (
    DEFAULT_LEVELS,
    CounterexampleSpec,
    borderline_log_series,
    borderline_restricted_sum,
    check_regime,
    divergence_scan,
    gen_borderline_counterexample,
    gen_lacunary_counterexample,
    gen_time_counterexample,
    generate,
    scan_echo,
    scan_to_csv,
    space_regime_kept_sum,
    time_regime_kept_sum,
    time_regime_power_sum,
)
from wickshift.spectral_core import FlowParams, sobolev_norm


# --- generators --------------------------------------------------------------

def test_time_generator_values():
    a = gen_time_counterexample(0.1, 6)
    assert a[0] == 1.0
    assert a[1].real == pytest.approx(2**-0.3, rel=1e-14)
    assert a[1].real == pytest.approx(0.8122, abs=1e-4)
    assert all(a[n] == a[-n] for n in range(7))
    assert a[7] == 0
    with pytest.raises(ValueError):
        gen_time_counterexample(0.0, 4)


def test_lacunary_generator_values():
    a = gen_lacunary_counterexample(0.5, 0.5, 20)
    assert a[1] == 1.0 and a[-1] == 1.0
    assert a[3] == 0 and a[0] == 0
    assert a[4].real == pytest.approx(2**-0.5, rel=1e-14)
    assert sorted(a.modes.tolist()) == [-16, -8, -4, -2, -1, 1, 2, 4, 8, 16]
    with pytest.raises(ValueError):
        gen_lacunary_counterexample(0.5, 1.0, 8)


def test_borderline_generator_values():
    a = gen_borderline_counterexample(10)
    assert a[-5] == 0 and a[0] == 0
    assert a[1] == 1.0
    assert a[2].real == pytest.approx(2**-0.5 * math.log(2) ** -0.75, rel=1e-14)
    assert a[2].real == pytest.approx(0.9312, abs=5e-4)
    with pytest.raises(ValueError):
        gen_borderline_counterexample(0)


@pytest.mark.parametrize("make,limit", [
    (lambda N: gen_time_counterexample(0.1, N), None),
    (lambda N: gen_lacunary_counterexample(0.5, 0.4, N), None),
    (gen_borderline_counterexample, None),
])
def test_l2_bounded_uniformly(make, limit):
    norms = [sobolev_norm(make(N), 0) for N in (2**6, 2**10, 2**14, 2**17)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))
    # bounded tails: the last doubling steps barely move the norm
    assert norms[-1] - norms[-2] < 0.5 * (norms[1] - norms[0]) + 1e-12
    assert norms[-1] < 10


def test_generate_dispatch():
    assert generate(CounterexampleSpec("borderline", 0.25), 5) == gen_borderline_counterexample(5)
    assert generate(CounterexampleSpec("space_regularity", 0.5, s2=0.4), 9) == gen_lacunary_counterexample(0.5, 0.4, 9)


# --- specs and regimes -------------------------------------------------------

def test_spec_validation():
    with pytest.raises(ValueError):
        CounterexampleSpec("nope", 0.5)
    with pytest.raises(ValueError):
        CounterexampleSpec("time_regularity", 0.5)
    with pytest.raises(ValueError):
        CounterexampleSpec("space_regularity", 0.5, s2=1.0)
    with pytest.raises(ValueError):
        CounterexampleSpec("borderline", 0.0)


def test_regime_checks():
    p = FlowParams(2.0)
    check_regime(CounterexampleSpec("time_regularity", 0.5, 0.1), 0.8, 0.0, p)
    with pytest.raises(ValueError):
        check_regime(CounterexampleSpec("time_regularity", 0.5, 0.1), 0.81, 0.0, p)
    check_regime(CounterexampleSpec("borderline", 0.25), 0.5, 0.0, p)
    with pytest.raises(ValueError):
        check_regime(CounterexampleSpec("borderline", 0.25), 0.4, 0.0, p)
    with pytest.raises(ValueError):
        check_regime(CounterexampleSpec("borderline", 0.25), 0.5, 0.1, p)
    with pytest.raises(ValueError):
        check_regime(CounterexampleSpec("space_regularity", 0.5, s2=0.4), 1.0, 0.3, p)


def test_unsorted_levels_rejected():
    with pytest.raises(ValueError):
        divergence_scan(CounterexampleSpec("time_regularity", 0.5, 0.1), 0.8, 0.0, FlowParams(2.0), [4, 2])
    with pytest.raises(ValueError):
        divergence_scan(CounterexampleSpec("time_regularity", 0.5, 0.1), 0.8, 0.0, FlowParams(2.0), [])


# --- scans against oracles -------------------------------------------------------

@pytest.mark.parametrize("s2", [0.0, 1.0])
def test_time_scan_small_level_double_loop(s2):
    spec = CounterexampleSpec("time_regularity", 0.5, 0.1)
    [(N, v)] = divergence_scan(spec, 0.8, s2, FlowParams(2.0), [2])
    assert N == 2
    assert v == pytest.approx(direct_norm_t0(gen_time_counterexample(0.1, 2), 2, 0.5, 2.0, 0.8, s2), rel=1e-12)


def test_scans_match_double_loop_several_kinds():
    p = FlowParams(2.0)
    spec = CounterexampleSpec("space_regularity", 0.5, s2=0.4)
    for N, v in divergence_scan(spec, 1.0, 0.4, p, [4, 8]):
        assert v == pytest.approx(direct_norm_t0(generate(spec, N), N, 0.5, 2.0, 1.0, 0.4), rel=1e-12)
    spec = CounterexampleSpec("borderline", 0.25)
    for N, v in divergence_scan(spec, 0.5, 0.0, p, [3, 5]):
        assert v == pytest.approx(direct_norm_t0(generate(spec, 2 * N), 2 * N, 0.25, 2.0, 0.5, 0.0), rel=1e-12)


def test_threaded_scan_identical():
    spec = CounterexampleSpec("time_regularity", 0.5, 0.1)
    levels = [8, 16, 32, 64]
    assert divergence_scan(spec, 0.8, 0.0, FlowParams(2.0), levels, workers=3) == \
        divergence_scan(spec, 0.8, 0.0, FlowParams(2.0), levels)


def test_time_lower_bound_consistency():
    p = FlowParams(2.0)
    spec = CounterexampleSpec("time_regularity", 0.5, 0.1)
    levels = [16, 64, 256]
    for N, v in divergence_scan(spec, 0.8, 0.0, p, levels):
        kept = time_regime_kept_sum(0.1, 0.5, p, 0.8, 0.0, N)
        assert v**2 >= kept * (1 - 1e-12)
        # kept sub-sum against the power-law shape it is compared to, up to constants
        ratio = kept / time_regime_power_sum(0.1, 0.5, 2.0, 0.8, N)
        assert 0.05 < ratio < 20


def test_space_kept_sum_grows_linearly():
    sigma, s2 = 0.5, 0.4
    p = FlowParams(2.0)
    spec = CounterexampleSpec("space_regularity", sigma, s2=s2)
    prev = 0.0
    for k in range(2, 9):
        kept = space_regime_kept_sum(sigma, s2, 2**k)
        [(_, v)] = divergence_scan(spec, 2 * sigma / (p.alpha - 1), s2, p, [2**k])
        assert v**2 >= kept * (1 - 1e-12)
        assert kept - prev >= 0.5
        prev = kept


def test_borderline_restricted_below_full():
    p = FlowParams(2.0)
    spec = CounterexampleSpec("borderline", 0.25)
    for N, v in divergence_scan(spec, 0.5, 0.0, p, [4, 16, 64]):
        restricted = borderline_restricted_sum(0.25, p, 0.5, 0.0, N)
        assert 0 < restricted <= v**2 * (1 + 1e-12)
        assert borderline_log_series(N) > 0


def test_borderline_log_series_direct():
    N = 7
    expected = sum((math.log(2 * n) ** -0.5 - math.log(2 * N) ** -0.5) ** 2 / n for n in range(1, N + 1))
    assert borderline_log_series(N) == pytest.approx(expected, rel=1e-14)


def test_default_levels_shape():
    assert DEFAULT_LEVELS["time_regularity"][0] == 16 and DEFAULT_LEVELS["time_regularity"][-1] == 4096
    assert DEFAULT_LEVELS["borderline"][-1] == 1024


def test_outputs():
    spec = CounterexampleSpec("space_regularity", 0.5, s2=0.4)
    text = scan_to_csv(spec.kind, [(4, 1.5), (8, 2.25)])
    assert text.splitlines() == ["kind,N,value", "space_regularity,4,1.5", "space_regularity,8,2.25"]
    import json

    echo = json.loads(scan_echo(spec, 1.0, 0.4, FlowParams(2.0)))
    assert echo["spec"]["kind"] == "space_regularity" and echo["s2"] == 0.4 and echo["alpha"] == 2.0


def test_values_finite_and_nonnegative():
    rows = divergence_scan(CounterexampleSpec("time_regularity", 0.3, 0.05), 0.4, 0.5, FlowParams(1.7), [1, 2, 4])
    assert all(np.isfinite(v) and v >= 0 for _, v in rows)
