"""Brownian-motion view of the chi-square LLR and the truncated SPRT.

The per-sample LLR increment a*x^2 - c (a = snr/(2*noise_var*(1+snr)),
c = log(1+snr)/2) has exact moments

    H0: mu = snr/(2(1+snr)) - c      var = snr^2 / (2(1+snr)^2)
    H1: mu = snr/2 - c               var = snr^2 / 2

from E{x^2} and Var{x^2} of the underlying scaled chi-square with one degree
of freedom.  A truncated run extrapolates the mean Brownian path from the
LLR reached at the budget to the boundary the drift points toward, which
predicts the unobserved stopping sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import DomainError, PredictionUndefinedError
from .sequential import TRUNCATED, Boundaries, SprtOutcome, sprt_run
from .signal_chain import Hypothesis


@dataclass(frozen=True)
class BrownianParams:
    """Drift and variance per sample of the approximating Brownian motion."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if self.sigma2 < 0.0:
            raise DomainError(f"sigma2 must be nonnegative, got {self.sigma2}")


@dataclass(frozen=True)
class TsprtOutcome:
    """SPRT outcome plus, when truncated, the predicted stopping sample."""

    base: SprtOutcome
    predicted_n: Optional[float] = None

    def __post_init__(self):
        if self.predicted_n is not None:
            if self.base.decision != TRUNCATED:
                raise DomainError("predicted_n only applies to truncated runs")
            if self.predicted_n < self.base.n_stop:
                raise DomainError(
                    f"predicted_n {self.predicted_n} below truncation point "
                    f"{self.base.n_stop}"
                )


def chi2_bm_params(snr: float, hyp: Hypothesis) -> BrownianParams:
    """Exact mean and variance of one chi-square LLR increment under hyp."""
    if not snr > 0.0:
        raise DomainError(f"snr must be positive, got {snr}")
    c = 0.5 * math.log1p(snr)
    if hyp is Hypothesis.H0:
        return BrownianParams(
            mu=snr / (2.0 * (1.0 + snr)) - c,
            sigma2=snr**2 / (2.0 * (1.0 + snr) ** 2),
        )
    return BrownianParams(mu=snr / 2.0 - c, sigma2=snr**2 / 2.0)


def tsprt_run(
    llr_increments: Iterable[float],
    bounds: Boundaries,
    n_max: int,
) -> TsprtOutcome:
    """SPRT truncated at n_max; identical to sprt_run until the budget."""
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    return TsprtOutcome(base=sprt_run(llr_increments, bounds, n_max=n_max))


def predict_stopping(
    final_llr: float,
    n_max: int,
    bm: BrownianParams,
    bounds: Boundaries,
    hyp: Hypothesis,
) -> float:
    """Extrapolate the truncated LLR to the boundary the drift points toward.

    Under H1 the drift is positive toward log A, so the predicted stopping
    sample is n_max + (log A - final_llr)/mu; under H0 the drift is negative
    toward log B.  The prediction is never below n_max.
    """
    if hyp is Hypothesis.H1:
        if bm.mu <= 0.0:
            raise PredictionUndefinedError(
                f"H1 prediction needs positive drift, got mu={bm.mu}"
            )
        gap = bounds.log_a - final_llr
        if gap < 0.0:
            raise PredictionUndefinedError(
                f"LLR {final_llr} already beyond log A = {bounds.log_a}"
            )
    else:
        if bm.mu >= 0.0:
            raise PredictionUndefinedError(
                f"H0 prediction needs negative drift, got mu={bm.mu}"
            )
        gap = bounds.log_b - final_llr
        if gap > 0.0:
            raise PredictionUndefinedError(
                f"LLR {final_llr} already beyond log B = {bounds.log_b}"
            )
    return n_max + gap / bm.mu


def with_prediction(
    outcome: TsprtOutcome,
    bm: BrownianParams,
    bounds: Boundaries,
    hyp: Hypothesis,
) -> TsprtOutcome:
    """Attach the predicted stopping sample to a truncated outcome."""
    if outcome.base.decision != TRUNCATED:
        return outcome
    predicted = predict_stopping(
        outcome.base.final_llr, outcome.base.n_stop, bm, bounds, hyp
    )
    return replace(outcome, predicted_n=predicted)
