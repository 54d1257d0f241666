"""Monte-Carlo false-accept/false-reject estimation and summary statistics.

Every random number comes from a counter-based Philox stream keyed by
``(seed, purpose, draw index, lane)``, so any single draw can be recomputed
in isolation: reproducibility does not depend on call order, and trials may
run in parallel without changing results.

Stream layout (Philox 4x64, key = seed masked to 64 bits):

    counter = [0, lane, draw, purpose]

with purpose 1 for jitter noise (lane = segment index) and purpose 2 for
random phrase generation (lane 0 = tap count, lane j+1 = duration of
segment j). Each lane yields values through a fresh ``numpy.random
.Generator``, of which only the leading draws are consumed.

Jitter is multiplicative: segment ``d`` becomes ``d * max(0.05, 1 + g)``
with ``g ~ Normal(0, sigma)``. The unit normal is drawn independently of
``sigma``, so running a sigma grid with a shared seed uses common random
numbers. The 0.05 floor keeps durations positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateSample, EmptyInput, InvariantViolation
from .matchers import hamming_match
from .model import TapPhrase, Template

_MASK64 = (1 << 64) - 1
_PURPOSE_JITTER = 1
_PURPOSE_PHRASE = 2


def _lane_rng(seed: int, purpose: int, draw: int, lane: int) -> np.random.Generator:
    """Fresh generator for one (seed, purpose, draw, lane) stream."""
    counter = [0, lane, draw, purpose]
    return np.random.Generator(np.random.Philox(key=seed & _MASK64, counter=counter))


@dataclass(frozen=True)
class JitterModel:
    """Per-segment multiplicative noise of relative scale ``sigma``."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise InvariantViolation(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class PhraseGenModel:
    """Random-attacker phrases: uniform tap count, log-uniform durations."""

    tap_count_range: tuple[int, int] = (3, 10)
    duration_range_ms: tuple[float, float] = (80.0, 800.0)
    seed: int = 0

    def __post_init__(self):
        lo_c, hi_c = self.tap_count_range
        if lo_c < 1 or hi_c < lo_c:
            raise InvariantViolation(f"bad tap_count_range {self.tap_count_range}")
        lo_d, hi_d = self.duration_range_ms
        if lo_d <= 0 or hi_d < lo_d:
            raise InvariantViolation(f"bad duration_range_ms {self.duration_range_ms}")


@dataclass(frozen=True)
class SummaryStats:
    """Sample size, mean and sample standard deviation of a measurement."""

    n: int
    mean: float
    sd: float


@dataclass(frozen=True)
class RateEstimate:
    """A Monte-Carlo rate: exact event count over trial count."""

    rate: float
    trials: int
    seed: int


def perturb(phrase: TapPhrase, model: JitterModel, draw: int) -> TapPhrase:
    """Jitter every segment of a phrase; deterministic per (seed, draw)."""
    segs = []
    for j, d in enumerate(phrase.segments):
        g = _lane_rng(model.seed, _PURPOSE_JITTER, draw, j).standard_normal() * model.sigma
        segs.append(d * max(0.05, 1.0 + g))
    return TapPhrase(tuple(segs))


def gen_random_phrase(model: PhraseGenModel, draw: int) -> TapPhrase:
    """One random-attacker phrase; deterministic per (seed, draw)."""
    lo_c, hi_c = model.tap_count_range
    if lo_c == hi_c:
        n_taps = lo_c
    else:
        n_taps = int(_lane_rng(model.seed, _PURPOSE_PHRASE, draw, 0).integers(lo_c, hi_c + 1))
    lo_d, hi_d = model.duration_range_ms
    segs = []
    for j in range(2 * n_taps - 1):
        if lo_d == hi_d:
            segs.append(lo_d)
            continue
        u = _lane_rng(model.seed, _PURPOSE_PHRASE, draw, j + 1).random()
        segs.append(math.exp(math.log(lo_d) + u * (math.log(hi_d) - math.log(lo_d))))
    return TapPhrase(tuple(segs))


def estimate_frr(template: Template, jitter: JitterModel, trials: int) -> RateEstimate:
    """Fraction of jittered self-replays the signal matcher rejects."""
    if trials < 1:
        raise InvariantViolation(f"trials must be >= 1, got {trials}")
    rejects = 0
    for i in range(trials):
        if not hamming_match(template, perturb(template.phrase, jitter, i)).accepted:
            rejects += 1
    return RateEstimate(rate=rejects / trials, trials=trials, seed=jitter.seed)


def estimate_far(template: Template, attacker: PhraseGenModel, trials: int) -> RateEstimate:
    """Fraction of random-attacker phrases the signal matcher accepts."""
    if trials < 1:
        raise InvariantViolation(f"trials must be >= 1, got {trials}")
    accepts = 0
    for i in range(trials):
        if hamming_match(template, gen_random_phrase(attacker, i)).accepted:
            accepts += 1
    return RateEstimate(rate=accepts / trials, trials=trials, seed=attacker.seed)


class TTestResult(NamedTuple):
    t: float
    df: int
    cohens_d: float


def one_sample_t(stats: SummaryStats, mu0: float) -> TTestResult:
    """One-sample t statistic and Cohen's d from summary statistics.

    t = (mean - mu0) / (sd / sqrt(n)), df = n - 1, d = (mean - mu0) / sd.
    p-values are deliberately not computed.
    """
    if stats.n < 2 or stats.sd <= 0:
        raise DegenerateSample(f"need n >= 2 and sd > 0, got n={stats.n}, sd={stats.sd}")
    diff = stats.mean - mu0
    t = diff / (stats.sd / math.sqrt(stats.n))
    return TTestResult(t=t, df=stats.n - 1, cohens_d=diff / stats.sd)


class Description(NamedTuple):
    mean: float
    sd: float
    median: float
    iqr: float


def describe(samples: Sequence[float]) -> Description:
    """Mean, sample sd (n-1), median and Tukey-hinge IQR.

    Hinges are the medians of the lower and upper halves of the sorted
    sample, each half including the middle element when n is odd. The
    sample sd is NaN for n = 1, where it is undefined.
    """
    xs = np.asarray(samples, dtype=np.float64)
    if xs.size == 0:
        raise EmptyInput("describe() needs at least one sample")
    n = xs.size
    mean = float(np.mean(xs))
    sd = float(np.std(xs, ddof=1)) if n > 1 else float("nan")
    s = np.sort(xs)
    half = (n + 1) // 2
    iqr = float(np.median(s[n - half :]) - np.median(s[:half]))
    return Description(mean=mean, sd=sd, median=float(np.median(xs)), iqr=iqr)
