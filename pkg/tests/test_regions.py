"""Scheme exponent pairs, Stein values, and tradeoff curves.

Pinned numbers in this file are regression anchors frozen from dense
independent scans (wider grids and more golden iterations than the
defaults); agreement of the prior benchmark formulas with the scheme
evaluation is itself one of the cross-checks.
"""

import math

import numpy as np
import pytest

from bindht.binmath import binary_divergence, binary_entropy
from bindht.errors import ParameterError
from bindht.regions import (
    SCHEMES,
    CurvePoint,
    ExponentPair,
    HypothesisPair,
    SchemeParams,
    baseline_pair,
    curve_value_at,
    one_sided_pair,
    one_sided_stein,
    pareto_points,
    prior_stein_bound,
    sigma_ac,
    sigma_han,
    sigma_sha,
    stein_columns,
    stein_time_share,
    symmetric_pair,
    symmetric_stein,
    time_share,
    tradeoff_curve,
    unconstrained_pair,
)

FIG_A = HypothesisPair(0.01, 0.25)
FIG_B = HypothesisPair(0.01, 0.1)


def test_hypothesis_pair_validation():
    with pytest.raises(ParameterError):
        HypothesisPair(0.3, 0.2)
    with pytest.raises(ParameterError):
        HypothesisPair(-0.01, 0.2)
    with pytest.raises(ParameterError):
        HypothesisPair(0.1, 0.6)


def test_scheme_params_bin_rate():
    params = SchemeParams(a=0.1, theta=0.05, rate_x=0.3)
    assert params.rate_bin == pytest.approx(
        1.0 - binary_entropy(0.1) - 0.3, abs=1e-12
    )
    with pytest.raises(ParameterError):
        SchemeParams(a=0.5, theta=0.05, rate_x=0.9)


def test_unconstrained_pair_is_divergence_pair():
    for theta in (0.02, 0.1, 0.2):
        pair = unconstrained_pair(FIG_A, theta)
        assert pair.e0 == pytest.approx(
            binary_divergence(theta, 0.01), abs=1e-12
        )
        assert pair.e1 == pytest.approx(
            binary_divergence(theta, 0.25), abs=1e-12
        )


def test_baseline_pair_scales_unconstrained():
    for theta in (0.05, 0.12):
        full = unconstrained_pair(FIG_A, theta)
        base = baseline_pair(FIG_A, 0.3, theta)
        assert base.e0 == pytest.approx(0.3 * full.e0, abs=1e-12)
        assert base.e1 == pytest.approx(0.3 * full.e1, abs=1e-12)


def test_time_share_scales_both_exponents():
    pair = ExponentPair(0.4, 0.2)
    scaled = time_share(pair, 0.25)
    assert (scaled.e0, scaled.e1) == (pytest.approx(0.1), pytest.approx(0.05))


def test_symmetric_equals_one_sided_without_quantization():
    for theta in np.linspace(0.011, 0.24, 25):
        sym = symmetric_pair(FIG_A, 0.3, float(theta))
        one = one_sided_pair(
            FIG_A, SchemeParams(a=0.0, theta=float(theta), rate_x=0.3)
        )
        assert sym == one


def test_one_sided_pair_quantization_can_help_miss_side():
    # with a > 0 the threshold can sit above conv(a, p0) and still keep
    # a positive false-alarm exponent
    params = SchemeParams(a=0.1, theta=0.15, rate_x=0.3)
    pair = one_sided_pair(FIG_A, params)
    assert pair.e0 > 0.0
    assert pair.e1 > 0.0


def test_stein_pinned_references():
    # frozen anchors; independent benchmark formulas agree below
    cols = stein_columns(FIG_A, 0.3)
    assert cols["unconstrained"] == pytest.approx(0.3500939883901444, abs=1e-9)
    assert cols["new"] == pytest.approx(0.2586661935377357, abs=1e-7)
    assert cols["prior"] == pytest.approx(0.2586661935377357, abs=1e-7)
    assert cols["symmetric"] == pytest.approx(0.24287770444566265, abs=1e-7)


def test_stein_low_alternative_collapses_to_unconstrained():
    cols = stein_columns(FIG_B, 0.3)
    want = binary_divergence(0.01, 0.1)
    for key in ("unconstrained", "new", "prior", "symmetric"):
        assert cols[key] == pytest.approx(want, abs=1e-6)


def test_stein_ordering_across_sweep():
    for p0 in (0.005, 0.02, 0.04):
        cols = stein_columns(HypothesisPair(p0, 0.25), 0.3)
        assert cols["unconstrained"] >= cols["new"] - 1e-9
        assert cols["new"] >= cols["prior"] - 1e-7
        assert cols["prior"] >= cols["symmetric"] - 1e-9


def test_stein_benchmark_combination():
    # the scan's prior value is the better of the two benchmark formulas
    h = FIG_A
    from bindht.binmath import gv_distance

    # the scan shares one candidate grid across terms, the standalone
    # formula refines its own optimum, hence the 1e-5 scale slack
    formulas = max(sigma_han(h, gv_distance(0.3)), sigma_sha(h, 0.3))
    assert prior_stein_bound(h, 0.3) == pytest.approx(formulas, abs=2e-5)
    assert stein_columns(h, 0.3)["prior"] == pytest.approx(
        stein_time_share(h, 0.3, which="prior"), abs=1e-9
    )


def test_stein_benchmarks_individual():
    h = FIG_A
    # rate 1 removes the constraint for every benchmark
    full = binary_divergence(h.p0, h.p1)
    assert sigma_ac(h, 1.0) == pytest.approx(full, abs=1e-9)
    assert sigma_han(h, 0.0) == pytest.approx(full, abs=1e-9)
    assert sigma_sha(h, 1.0) == pytest.approx(full, abs=1e-9)
    assert one_sided_stein(h, 1.0) == pytest.approx(full, abs=1e-6)
    # and the binning benchmark improves with rate
    assert sigma_sha(h, 0.2) <= sigma_sha(h, 0.4) + 1e-9


def test_symmetric_stein_matches_column():
    cols = stein_columns(FIG_A, 0.3)
    assert cols["symmetric"] == pytest.approx(
        stein_time_share(FIG_A, 0.3, which="symmetric"), abs=1e-9
    )
    # time sharing strictly helps the plain equal-rate value here
    assert cols["symmetric"] > symmetric_stein(FIG_A, 0.3) + 0.01


def test_pareto_points_removes_dominated():
    pts = [
        CurvePoint(0.1, 0.0, ExponentPair(0.1, 0.5)),
        CurvePoint(0.2, 0.0, ExponentPair(0.2, 0.4)),
        CurvePoint(0.3, 0.0, ExponentPair(0.15, 0.3)),  # dominated
        CurvePoint(0.4, 0.0, ExponentPair(0.3, 0.1)),
    ]
    kept = pareto_points(pts)
    assert [pt.pair.e0 for pt in kept] == [0.1, 0.2, 0.3]
    e0s = [pt.pair.e0 for pt in kept]
    assert e0s == sorted(e0s)


def test_tradeoff_curthan_monotone_frontiers():
    for scheme in SCHEMES:
        curve = tradeoff_curve(
            scheme, FIG_A, 0.3, resolution=60, a_points=8, alpha_points=5
        )
        e0, e1 = curve.as_arrays()
        assert np.all(np.diff(e0) > 0.0)
        assert np.all(np.diff(e1) <= 1e-12)
        assert curve.scheme == scheme
        assert np.all(e0 >= 0.0) and np.all(e1 >= 0.0)


def test_tradeoff_baseline_scales_unconstrained_curve():
    un = tradeoff_curve("unconstrained", FIG_A, 0.3, resolution=50)
    base = tradeoff_curve("baseline", FIG_A, 0.3, resolution=50)
    for pu, pb in zip(un.points, base.points):
        assert pb.pair.e0 == pytest.approx(0.3 * pu.pair.e0, abs=1e-12)
        assert pb.pair.e1 == pytest.approx(0.3 * pu.pair.e1, abs=1e-12)


def test_tradeoff_time_sharing_extends_reach():
    # without the envelope the symmetric curve cannot pass the plain
    # stein value; with it the reachable miss exponent is the time-shared
    # one at every false-alarm level
    curve = tradeoff_curve(
        "symmetric", FIG_A, 0.3, resolution=80, alpha_points=9
    )
    best_e1 = max(pt.pair.e1 for pt in curve.points)
    assert best_e1 >= 0.9 * symmetric_stein(FIG_A, 0.3)
    alphas = {pt.alpha for pt in curve.points}
    assert len(alphas) > 1


def test_curve_value_at_interpolates():
    pts = (
        CurvePoint(0.1, 0.0, ExponentPair(0.0, 1.0)),
        CurvePoint(0.2, 0.0, ExponentPair(1.0, 0.0)),
    )
    from bindht.regions import TradeoffCurve

    curve = TradeoffCurve("unconstrained", 0.3, pts)
    assert curve_value_at(curve, 0.5) == pytest.approx(0.5)
    # outside the covered range the endpoints clamp
    assert curve_value_at(curve, 0.0) == pytest.approx(1.0)
    assert curve_value_at(curve, 1.5) == pytest.approx(0.0)


def test_tradeoff_rejects_unknown_scheme():
    with pytest.raises(ParameterError):
        tradeoff_curve("nonsense", FIG_A, 0.3)
