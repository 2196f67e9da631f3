"""Large-deviation exponents checked against brute-force searches and oracles.

The closed-form pieces (stationary-point weight-difference exponent,
golden-section sphere and channel searches) each get an independent route
here: dense grid scans, direct Gallager evaluations, and the exact
finite-n probability oracle.
"""

import math

import numpy as np
import pytest
from scipy.special import xlogy

from bindht.binmath import binary_convolution, binary_divergence, binary_entropy
from bindht.errors import ParameterError
from bindht.exponents import (
    ball_exponent_forms,
    ball_noise_ball_exponent,
    best_channel_exponent,
    best_channel_exponent_vec,
    expurgated_exponent,
    mixed_weight_exponent,
    random_coding_exponent,
    type_noise_ball_exponent,
    weight_difference_exponent,
)
from bindht.oracle import exact_ball_log2_prob

_LN2 = math.log(2.0)


def _persp(x, alpha, p):
    """Direct alpha-scaled divergence, the brute-force counterpart."""
    if alpha == 0.0:
        return 0.0
    return alpha * binary_divergence(min(max(x / alpha, 0.0), 1.0), p)


def _wd_brute(p, alpha, beta, tau, npts=4001):
    """Grid scan over the W2 weight x; W1 weight is then x + tau."""
    lo = max(0.0, -tau)
    hi = min(beta, alpha - tau)
    if hi < lo:
        return math.inf
    best = math.inf
    for x in np.linspace(lo, hi, npts):
        val = _persp(x + tau, alpha, p) + _persp(x, beta, p)
        best = min(best, val)
    return best


def test_weight_difference_against_grid():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(300):
        p = rng.uniform(0.01, 0.99)
        alpha = rng.uniform(0.0, 1.0)
        beta = rng.uniform(0.0, 1.0 - alpha)
        tau = rng.uniform(-beta, alpha)
        closed = weight_difference_exponent(p, alpha, beta, tau)
        brute = _wd_brute(p, alpha, beta, tau)
        # the grid only overestimates the true minimum
        assert closed <= brute + 1e-9
        worst = max(worst, brute - closed)
    assert worst < 5e-4


def test_weight_difference_edges():
    assert weight_difference_exponent(0.2, 0.3, 0.1, 0.5) == math.inf
    assert weight_difference_exponent(0.2, 0.3, 0.1, -0.2) == math.inf
    # tau = alpha forces W1 = n alpha and W2 = 0
    want = 0.3 * binary_divergence(1.0, 0.2) + 0.1 * binary_divergence(0.0, 0.2)
    got = weight_difference_exponent(0.2, 0.3, 0.1, 0.3)
    assert got == pytest.approx(want, abs=1e-9)
    # beta = 0 reduces to a one-binomial large deviation
    got = weight_difference_exponent(0.3, 0.5, 0.0, 0.1)
    assert got == pytest.approx(0.5 * binary_divergence(0.2, 0.3), abs=1e-9)
    assert weight_difference_exponent(0.25, 0.0, 0.0, 0.0) == 0.0


def test_weight_difference_validation():
    with pytest.raises(ParameterError):
        weight_difference_exponent(0.2, 0.7, 0.4, 0.1)
    with pytest.raises(ParameterError):
        weight_difference_exponent(1.2, 0.3, 0.3, 0.0)


def _overlap_rate(r, w, g):
    """Exponent of a uniform radius-r shell point overlapping the center in g."""
    return (
        binary_entropy(r)
        + (xlogy(g, g) + xlogy(w - g, w - g) + xlogy(r - g, r - g)
           + xlogy(1.0 - w - r + g, 1.0 - w - r + g)
           - xlogy(w, w) - xlogy(1.0 - w, 1.0 - w)) / _LN2
    )


def _sphere_brute(p, r, w, tau, npts=2001):
    """Scan the overlap between the radius-r shell and the center."""
    best = math.inf
    for g in np.linspace(max(0.0, r + w - 1.0), min(r, w), npts):
        sig = w + r - 2.0 * g
        val = _overlap_rate(r, w, g) + weight_difference_exponent(
            p, 1.0 - sig, sig, tau - sig
        )
        best = min(best, val)
    return max(best, 0.0)


def test_mixed_weight_against_overlap_scan():
    rng = np.random.default_rng(11)
    for _ in range(40):
        p = rng.uniform(0.02, 0.45)
        r = rng.uniform(0.0, 0.5)
        w = rng.uniform(0.0, 1.0)
        tau = rng.uniform(0.0, 1.0)
        fast = mixed_weight_exponent(p, r, w, tau)
        brute = _sphere_brute(p, r, w, tau)
        if math.isinf(fast):
            assert math.isinf(brute) or brute > 50.0
        else:
            # the grid scan can only sit above the true minimum
            assert fast <= brute + 1e-9
            assert brute - fast < 5e-5


def test_mixed_weight_degenerate_noise():
    # p = 0: only the shell overlap can reach tau, here overlap zero
    v = mixed_weight_exponent(0.0, 0.2, 0.3, 0.5)
    assert v == pytest.approx(_overlap_rate(0.2, 0.3, 0.0), abs=1e-9)
    # and weights outside [|w-a|, w+a] are unreachable
    assert mixed_weight_exponent(0.0, 0.1, 0.3, 0.05) == math.inf
    # a = 0 is a pure Bernoulli deviation around the center
    v = mixed_weight_exponent(0.25, 0.0, 0.3, 0.5)
    brute = _wd_brute(0.25, 0.7, 0.3, 0.2)
    assert v == pytest.approx(brute, abs=1e-6)


def test_mixed_weight_zero_at_typical():
    for p, a, w in ((0.1, 0.2, 0.3), (0.25, 0.0, 0.5), (0.4, 0.4, 0.0)):
        typ = binary_convolution(binary_convolution(w, a), p)
        assert mixed_weight_exponent(p, a, w, typ) == pytest.approx(0.0, abs=1e-9)


def test_ball_exponent_two_stage_structure():
    p, a, w = 0.1, 0.15, 0.4
    typ = binary_convolution(binary_convolution(w, a), p)
    # below the typical weight the ball and sphere forms agree
    for theta in (0.1, 0.2, typ):
        forms = ball_exponent_forms(p, a, w, theta)
        assert forms["two_stage"] == pytest.approx(forms["at_theta"], abs=1e-9)
    # above it the ball probability stops decaying but the sphere does not
    forms = ball_exponent_forms(p, a, w, typ + 0.1)
    assert forms["two_stage"] == 0.0
    assert forms["at_theta"] > 0.01


def test_type_noise_ball_monotone_in_theta():
    vals = [
        type_noise_ball_exponent(0.15, 0.1, 0.45, th)
        for th in np.linspace(0.0, 0.6, 40)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[0] > vals[-1]


def test_type_noise_ball_against_oracle():
    # exact finite-n probabilities converge to the formula from below
    for p, a, w, theta in ((0.1, 0.1, 0.3, 0.2), (0.25, 0.05, 0.5, 0.15)):
        ref = type_noise_ball_exponent(p, a, w, theta)
        n = 1500
        emp = -exact_ball_log2_prob(
            n, round(a * n), round(w * n), round(theta * n), p
        ) / n
        assert emp == pytest.approx(ref, abs=0.01)


def _bb_brute(p, a, w, theta, npts=801):
    best = math.inf
    for r in np.linspace(0.0, a, npts):
        val = (
            binary_entropy(a) - binary_entropy(r)
            + type_noise_ball_exponent(p, r, w, theta)
        )
        best = min(best, val)
    return max(best, 0.0)


def test_ball_noise_against_shell_scan():
    rng = np.random.default_rng(3)
    for _ in range(25):
        p = rng.uniform(0.02, 0.45)
        a = rng.uniform(0.0, 0.5)
        w = rng.uniform(0.0, 1.0)
        theta = rng.uniform(0.0, 0.6)
        fast = ball_noise_ball_exponent(p, a, w, theta)
        brute = _bb_brute(p, a, w, theta)
        assert fast <= brute + 1e-9
        assert fast == pytest.approx(brute, abs=5e-5)


def test_ball_noise_never_exceeds_type_noise():
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = rng.uniform(0.02, 0.45)
        a = rng.uniform(0.0, 0.5)
        w = rng.uniform(0.0, 1.0)
        theta = rng.uniform(0.0, 0.6)
        bb = ball_noise_ball_exponent(p, a, w, theta)
        bt = type_noise_ball_exponent(p, a, w, theta)
        # the two routes run separate golden searches, hence the slack
        assert bb <= bt + 1e-7


def _gallager_direct(p, rho):
    return rho - (1.0 + rho) * math.log2(
        p ** (1.0 / (1.0 + rho)) + (1.0 - p) ** (1.0 / (1.0 + rho))
    )


def test_random_coding_against_dense_rho_scan():
    for p, rate in ((0.11, 0.2), (0.05, 0.5), (0.25, 0.1), (0.4, 0.02)):
        brute = max(
            max(_gallager_direct(p, rho) - rho * rate
                for rho in np.linspace(0.0, 1.0, 20001)),
            0.0,
        )
        assert random_coding_exponent(p, rate) == pytest.approx(brute, abs=1e-8)


def test_random_coding_pinned_value():
    # frozen from an independent 1e6-point scan of the Gallager objective
    assert random_coding_exponent(0.11, 0.2) == pytest.approx(
        0.10109572345523046, abs=1e-9
    )


def test_expurgated_beats_random_coding_at_low_rate():
    # at rates near zero the expurgated bound wins for small p
    assert expurgated_exponent(0.11, 0.01) > random_coding_exponent(0.11, 0.01)
    assert expurgated_exponent(0.11, 0.01) == pytest.approx(
        0.2983703255452653, abs=1e-8
    )


def test_expurgated_zero_rate_slope_cap():
    # the s -> 0 slope is capped, so rate 0 stays finite
    v = expurgated_exponent(0.2, 0.0)
    assert math.isfinite(v)
    assert v > 0.0


def test_channel_exponent_zero_at_capacity():
    for p in (0.05, 0.11, 0.25, 0.4):
        cap = 1.0 - binary_entropy(p)
        assert abs(best_channel_exponent(p, cap)) <= 1e-6
        assert best_channel_exponent(p, max(cap - 0.05, 0.0)) > 1e-3
        assert best_channel_exponent(p, min(cap + 0.05, 1.0)) == 0.0


def test_channel_exponent_noiseless_closed_form():
    # p = 0: random coding gives 1 - rate
    assert best_channel_exponent(0.0, 0.3) >= 0.7 - 1e-12


def test_channel_exponent_vec_matches_scalar():
    ps = np.array([0.0, 0.05, 0.11, 0.25, 0.4, 0.5])
    rates = np.array([0.0, 0.1, 0.3, 0.5, 0.9, 0.2])
    vec = best_channel_exponent_vec(ps, rates)
    for i in range(len(ps)):
        assert vec[i] == pytest.approx(
            best_channel_exponent(ps[i], rates[i]), abs=1e-10
        )
