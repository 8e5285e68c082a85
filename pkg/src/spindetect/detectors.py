"""Fixed-sample-size detectors: energy (chi-square) and Fisher-F ratio tests.

Both statistics are monotone transforms of their log-likelihood ratios, so
thresholding the raw statistic on its H0 distribution is equivalent to the
LRT; thresholds are one-sided upper-tail since H1 strictly inflates scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import CHI2, FAMILIES, ScaledChi2, ScaledFisherF, TestStrength
from .errors import DegenerateInputError, DomainError

ACCEPT_H0 = "accept_H0"
ACCEPT_H1 = "accept_H1"


@dataclass(frozen=True)
class HypothesisModel:
    """Noise variance and snr = signal_var/noise_var defining H0 vs H1."""

    noise_var: float
    snr: float

    def __post_init__(self):
        if not self.noise_var > 0.0:
            raise DomainError(f"noise_var must be positive, got {self.noise_var}")
        if not self.snr > 0.0:
            raise DomainError(f"snr must be positive, got {self.snr}")

    @property
    def h1_var(self) -> float:
        return self.noise_var * (1.0 + self.snr)


@dataclass(frozen=True)
class FixedDecision:
    decision: str
    statistic: float
    threshold: float
    n: int

    def __post_init__(self):
        expected = ACCEPT_H1 if self.statistic > self.threshold else ACCEPT_H0
        if self.decision != expected:
            raise DomainError(
                f"decision {self.decision!r} inconsistent with statistic "
                f"{self.statistic} vs threshold {self.threshold}"
            )


def energy(x) -> float:
    """Sum of squared samples."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise DomainError("energy of an empty sequence is undefined")
    return float(np.dot(x, x))


def chi2_llr(e: float, n: int, model: HypothesisModel) -> float:
    """Log-likelihood ratio of an energy value under the two-variance model.

    (snr/(1+snr)) * E / (2 noise_var) - (n/2) log(1+snr); strictly increasing
    in E.
    """
    if e < 0:
        raise DomainError(f"energy must be nonnegative, got {e}")
    s = model.snr
    return s / (1.0 + s) * e / (2.0 * model.noise_var) - n / 2.0 * math.log1p(s)


def chi2_llr_increments(x, model: HypothesisModel) -> np.ndarray:
    """Per-sample LLR contributions; their sum equals chi2_llr(energy(x), n)."""
    x = np.asarray(x, dtype=np.float64)
    s = model.snr
    a = s / (1.0 + s) / (2.0 * model.noise_var)
    return a * np.square(x) - 0.5 * math.log1p(s)


def fisher_ratio(xi, xq) -> float:
    """Ratio of in-phase to quadrature channel energies."""
    xi = np.asarray(xi, dtype=np.float64)
    xq = np.asarray(xq, dtype=np.float64)
    if xi.size == 0 or xi.size != xq.size:
        raise DomainError(
            f"channels must share a nonzero length, got {xi.size} and {xq.size}"
        )
    denom = energy(xq)
    if denom == 0.0:
        raise DegenerateInputError("quadrature channel has zero energy")
    return energy(xi) / denom


def fisher_llr(x: float, n: int, snr: float) -> float:
    """Log-likelihood ratio of the energy ratio; depends only on (x, n, snr).

    (n/2) log(1+snr) + n log(1+x) - n log(1+snr+x); strictly increasing in x
    and independent of the noise variance by construction.
    """
    if not x > 0.0:
        raise DomainError(f"energy ratio must be positive, got {x}")
    if not snr > 0.0:
        raise DomainError(f"snr must be positive, got {snr}")
    return n / 2.0 * math.log1p(snr) + n * math.log1p(x) - n * math.log1p(snr + x)


def fixed_test(
    statistic: float,
    strength: TestStrength,
    n: int,
    family: str,
    model: HypothesisModel,
) -> FixedDecision:
    """Fixed-sample decision: reject H0 when the statistic exceeds the
    1-alpha quantile of its H0 distribution."""
    if family not in FAMILIES:
        raise DomainError(f"family must be one of {FAMILIES}, got {family!r}")
    if family == CHI2:
        h0 = ScaledChi2(df=n, scale=model.noise_var)
    else:
        h0 = ScaledFisherF(df=n, scale=1.0)
    threshold = h0.quantile(1.0 - strength.alpha)
    decision = ACCEPT_H1 if statistic > threshold else ACCEPT_H0
    return FixedDecision(decision=decision, statistic=statistic, threshold=threshold, n=n)
