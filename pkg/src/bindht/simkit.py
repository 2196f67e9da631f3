"""Monte Carlo runs of the coded testing schemes at small blocklengths.

Trials draw the source pair (X, Y), push X through the actual linear-code
machinery from `gf2` (quantize with the fine code, transmit the coarse
syndrome increment, or exchange syndromes for the modulo-sum scheme), and
apply the weight-threshold decision at the far terminal.  Blocklengths are
small enough that coset leader tables make the decoders exact.

Randomness is counter-based: trial t of hypothesis hyp uses its own
Philox generator keyed by (seed, scheme id, hyp, t), so runs are
reproducible bit for bit and trials could be executed in any order or in
parallel without changing the records.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .gf2 import _popcount64, coset_table, row_parities, syndromes
from .regions import HypothesisPair, SchemeParams

_SCHEME_IDS = {"one_sided": 0, "korner_marton": 1}

# two-sided 95% normal quantile for Wilson intervals
_WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single simulated block.

    decided is 1 when the decoded weight exceeded the threshold;
    bin_decoding_error flags trials where the coset decoder missed the
    transmitted word (the decision itself may still be right).
    """

    true_hypothesis: int
    bin_decoding_error: bool
    decided: int
    noise_weight_norm: float
    decoded_weight_norm: float


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: `trials` blocks per hypothesis."""

    n: int
    trials: int
    seed: int
    h: HypothesisPair
    params: SchemeParams
    scheme: str = "one_sided"

    def __post_init__(self):
        if not (1 <= self.n <= 64):
            raise ParameterError(f"blocklength {self.n} outside [1, 64]")
        if self.trials < 1:
            raise ParameterError(f"trials={self.trials} must be positive")
        if self.seed < 0:
            raise ParameterError(f"seed={self.seed} must be nonnegative")
        if self.scheme not in _SCHEME_IDS:
            raise ParameterError(
                f"scheme {self.scheme!r} not in {sorted(_SCHEME_IDS)}"
            )


@dataclass(frozen=True)
class ErrorEstimate:
    """Empirical error rates with Wilson 95% intervals.

    Exponents are -(1/n) log2 of the rates (infinite when no errors
    were seen; the interval then degrades to the rule-of-three bound).
    bin_rate0/1 are the fractions of trials with a coset decoding error
    under each hypothesis.
    """

    trials0: int
    trials1: int
    eps0: float
    eps1: float
    ci0: tuple
    ci1: tuple
    exponent0: float
    exponent1: float
    bin_rate0: float
    bin_rate1: float


def gen_dsbs(n, p, seed=None):
    """One doubly symmetric source block as a pair of packed words.

    X is uniform on n bits, Y = X xor Z with Z i.i.d. Bernoulli(p).
    seed may be anything `numpy.random.default_rng` accepts, including
    an existing Generator, which is used in place.
    """
    if not (1 <= n <= 64):
        raise ParameterError(f"blocklength {n} outside [1, 64]")
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"p={p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    u = rng.random(2 * n)
    x = _pack(u[:n] < 0.5)
    z = _pack(u[n:] < p)
    return x, x ^ z


def _pack(bits):
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _trial_rng(seed, scheme_id, hyp, t):
    key = np.random.SeedSequence((seed, scheme_id, hyp, t))
    return np.random.Generator(np.random.Philox(key))


def _draw_run(cfg, hyp, p):
    """(X, Z) word arrays for one hypothesis, one substream per trial."""
    sid = _SCHEME_IDS[cfg.scheme]
    x = np.empty(cfg.trials, dtype=np.uint64)
    z = np.empty(cfg.trials, dtype=np.uint64)
    for t in range(cfg.trials):
        xt, yt = gen_dsbs(cfg.n, p, _trial_rng(cfg.seed, sid, hyp, t))
        x[t] = xt
        z[t] = xt ^ yt
    return x, z


def _accept_weight(n, theta):
    """Largest integer weight still decided as the null."""
    return int(math.floor(n * theta + 1e-9))


def _emit(records, hyp, n, bin_err, decided, noise_w, decoded_w):
    for be, d, wn, wd in zip(bin_err, decided, noise_w, decoded_w):
        records.append(
            TrialRecord(hyp, bool(be), int(d), int(wn) / n, int(wd) / n)
        )


def run_one_sided(cfg, nested):
    """Simulate the quantize-and-bin scheme over a nested code pair.

    Per trial: U is the fine-code quantization of X, the transmitted
    message is the coarse syndrome increment of U, and the decoder picks
    the member of the matching coarse coset closest to Y.  The decision
    thresholds the normalized distance between Y and that estimate.
    Returns records for both hypotheses, nulls first.
    """
    if cfg.scheme != "one_sided":
        raise ParameterError(f"config is for scheme {cfg.scheme!r}")
    if nested.fine.n != cfg.n:
        raise ParameterError(
            f"code blocklength {nested.fine.n} != config n {cfg.n}"
        )
    n = cfg.n
    m_fine = nested.fine.H.rows
    fine_leaders, _ = coset_table(nested.fine)
    coarse_leaders, coarse_weights = coset_table(nested.coarse)
    k_acc = _accept_weight(n, cfg.params.theta)
    records = []
    for hyp, p in ((0, cfg.h.p0), (1, cfg.h.p1)):
        x, z = _draw_run(cfg, hyp, p)
        y = x ^ z
        u = x ^ fine_leaders[syndromes(nested.fine, x)]
        inc = row_parities(nested.delta.bits, u)
        # the coarse syndrome stacks the fine bits below the increment
        # bits, and U itself has zero fine syndrome
        s_rel = syndromes(nested.coarse, y) ^ (inc << np.uint64(m_fine))
        u_hat = y ^ coarse_leaders[s_rel]
        w_hat = coarse_weights[s_rel]
        _emit(
            records, hyp, n,
            u_hat != u, w_hat > k_acc, _popcount64(z), w_hat,
        )
    return records


def run_korner_marton(cfg, code):
    """Simulate the symmetric syndrome-exchange scheme.

    Both terminals send the syndrome of their observation; the decision
    function decodes the noise word from the syndrome sum and thresholds
    its weight.  Quantization is not part of this scheme, so the config
    must have a = 0.
    """
    if cfg.scheme != "korner_marton":
        raise ParameterError(f"config is for scheme {cfg.scheme!r}")
    if code.n != cfg.n:
        raise ParameterError(f"code blocklength {code.n} != config n {cfg.n}")
    if cfg.params.a > 1e-12:
        raise ParameterError("the symmetric scheme has no quantization step")
    n = cfg.n
    leaders, weights = coset_table(code)
    k_acc = _accept_weight(n, cfg.params.theta)
    records = []
    for hyp, p in ((0, cfg.h.p0), (1, cfg.h.p1)):
        x, z = _draw_run(cfg, hyp, p)
        s_z = syndromes(code, x) ^ syndromes(code, x ^ z)
        z_hat = leaders[s_z]
        w_hat = weights[s_z]
        _emit(
            records, hyp, n,
            z_hat != z, w_hat > k_acc, _popcount64(z), w_hat,
        )
    return records


def decoded_weights(records, hypothesis):
    """Decoded weight statistics of one hypothesis as an array."""
    return np.array(
        [r.decoded_weight_norm for r in records
         if r.true_hypothesis == hypothesis]
    )


def _wilson(k, m):
    if k == 0:
        return 0.0, min(1.0, 3.0 / m)
    if k == m:
        return max(0.0, 1.0 - 3.0 / m), 1.0
    z2 = _WILSON_Z ** 2
    phat = k / m
    denom = 1.0 + z2 / m
    center = (phat + z2 / (2.0 * m)) / denom
    rad = _WILSON_Z * math.sqrt(
        phat * (1.0 - phat) / m + z2 / (4.0 * m * m)
    ) / denom
    return max(0.0, center - rad), min(1.0, center + rad)


def _exponent(eps, n):
    return math.inf if eps == 0.0 else -math.log2(eps) / n


def estimate_errors(records, n):
    """Aggregate trial records into an ErrorEstimate.

    Needs records from both hypotheses; the false-alarm rate comes from
    the null trials, the miss rate from the alternative trials.
    """
    k0 = m0 = k1 = m1 = b0 = b1 = 0
    for r in records:
        if r.true_hypothesis == 0:
            m0 += 1
            k0 += r.decided
            b0 += r.bin_decoding_error
        else:
            m1 += 1
            k1 += 1 - r.decided
            b1 += r.bin_decoding_error
    if m0 == 0 or m1 == 0:
        raise ParameterError("records must cover both hypotheses")
    eps0 = k0 / m0
    eps1 = k1 / m1
    return ErrorEstimate(
        trials0=m0,
        trials1=m1,
        eps0=eps0,
        eps1=eps1,
        ci0=_wilson(k0, m0),
        ci1=_wilson(k1, m1),
        exponent0=_exponent(eps0, n),
        exponent1=_exponent(eps1, n),
        bin_rate0=b0 / m0,
        bin_rate1=b1 / m1,
    )
