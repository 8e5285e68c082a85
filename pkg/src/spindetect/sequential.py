"""Wald's sequential probability ratio test and its classical approximations.

Boundary setting A = (1-beta)/alpha, B = beta/(1-alpha); the sequential loop
accumulates log-likelihood increments until the sum leaves (log B, log A).
The operating characteristic comes from the nonzero root h(theta) of the
moment equation of the likelihood-ratio power, which for the zero-mean
Gaussian variance family has the closed-form integrand

    (v0/v1)^(h/2) * (1 - h*theta*(1/v0 - 1/v1))^(-1/2),

leaving a one-dimensional root find; generic quadrature of the defining
integral is kept in the tests as the oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import optimize

from . import _kernels
from .detectors import ACCEPT_H0, ACCEPT_H1, HypothesisModel
from .distributions import TestStrength
from .errors import DomainError, NoRootError, StreamExhaustedError

TRUNCATED = "truncated"

WALD_VALIDITY_LIMIT = 0.05
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class Boundaries:
    """SPRT thresholds stored as log A > 0 > log B."""

    log_a: float
    log_b: float

    def __post_init__(self):
        if not (self.log_b < 0.0 < self.log_a):
            raise DomainError(
                f"need log B < 0 < log A, got log_b={self.log_b}, log_a={self.log_a}"
            )

    @property
    def a(self) -> float:
        return math.exp(self.log_a)

    @property
    def b(self) -> float:
        return math.exp(self.log_b)


@dataclass(frozen=True)
class SprtOutcome:
    """Decision label, stopping sample number and final accumulated LLR.

    For accept_H1 the final LLR sits at or above log A, for accept_H0 at or
    below log B (asserted where outcomes are built); truncated outcomes
    carry the LLR reached at the budget.
    """

    decision: str
    n_stop: int
    final_llr: float


@dataclass(frozen=True)
class OcPoint:
    """Operating-characteristic sample: true scale theta, root h, L(theta)."""

    theta: float
    h: float
    L: float


def wald_boundaries(strength: TestStrength) -> Boundaries:
    """Boundaries from Wald's approximations A=(1-beta)/alpha, B=beta/(1-alpha).

    Warns above error probabilities of 0.05 where the approximations degrade.
    """
    if strength.alpha > WALD_VALIDITY_LIMIT or strength.beta > WALD_VALIDITY_LIMIT:
        warnings.warn(
            "Wald's boundary approximations are calibrated for error "
            f"probabilities below {WALD_VALIDITY_LIMIT}; got alpha="
            f"{strength.alpha}, beta={strength.beta}",
            stacklevel=2,
        )
    log_a = math.log1p(-strength.beta) - math.log(strength.alpha)
    log_b = math.log(strength.beta) - math.log1p(-strength.alpha)
    return Boundaries(log_a=log_a, log_b=log_b)


def _outcome(decision: str, n: int, llr: float, bounds: Boundaries) -> SprtOutcome:
    if decision == ACCEPT_H1:
        assert llr >= bounds.log_a
    elif decision == ACCEPT_H0:
        assert llr <= bounds.log_b
    return SprtOutcome(decision=decision, n_stop=n, final_llr=llr)


def sprt_run(
    llr_increments: Iterable[float],
    bounds: Boundaries,
    n_max: Optional[int] = None,
) -> SprtOutcome:
    """Accumulate increments until the LLR leaves (log B, log A), inclusively.

    Arrays take the compiled scan; generic iterables run the plain loop.
    Raises StreamExhaustedError if the stream ends before a decision and no
    n_max was given to truncate at.
    """
    if isinstance(llr_increments, np.ndarray):
        inc = np.ascontiguousarray(llr_increments, dtype=np.float64)
        if n_max is not None:
            inc = inc[:n_max]
        if inc.size:
            idx, llr, crossed = _kernels.first_crossing(
                inc, 0.0, bounds.log_b, bounds.log_a
            )
            if crossed:
                decision = ACCEPT_H1 if llr >= bounds.log_a else ACCEPT_H0
                return _outcome(decision, idx + 1, llr, bounds)
            if n_max is not None and inc.size >= n_max:
                return SprtOutcome(TRUNCATED, n_max, llr)
        raise StreamExhaustedError(
            f"increments exhausted after {inc.size} samples without a decision"
        )
    llr = 0.0
    n = 0
    for x in llr_increments:
        n += 1
        llr += x
        if llr >= bounds.log_a:
            return _outcome(ACCEPT_H1, n, llr, bounds)
        if llr <= bounds.log_b:
            return _outcome(ACCEPT_H0, n, llr, bounds)
        if n_max is not None and n >= n_max:
            return SprtOutcome(TRUNCATED, n, llr)
    raise StreamExhaustedError(
        f"increments exhausted after {n} samples without a decision"
    )


def h_solve(theta: float, model: HypothesisModel) -> float:
    """Nonzero root h(theta) with h(v0) = 1 and h(v1) = -1.

    theta is the true variance of the zero-mean Gaussian samples.  The
    moment function psi(h) = (h/2)log(v0/v1) - (1/2)log(1 - h*theta*delta)
    is strictly convex with psi(0) = 0, so exactly one nonzero root exists
    except at the indifference variance where 0 is returned.
    """
    if not theta > 0.0:
        raise DomainError(f"theta must be a positive variance, got {theta}")
    v0 = model.noise_var
    v1 = model.h1_var
    delta = 1.0 / v0 - 1.0 / v1
    log_ratio = math.log(v0 / v1)

    def psi(h: float) -> float:
        return 0.5 * h * log_ratio - 0.5 * math.log1p(-h * theta * delta)

    slope0 = 0.5 * (theta * delta + log_ratio)
    if abs(slope0) < 1e-14:
        return 0.0
    if slope0 < 0.0:
        # root on the positive side, below the integrability limit 1/(theta*delta)
        hi = (1.0 - 1e-12) / (theta * delta)
        lo = 1e-12
        if psi(hi) <= 0.0:
            raise NoRootError(f"no sign change in (0, {hi}) for theta={theta}")
    else:
        lo = -2.0
        while psi(lo) <= 0.0:
            lo *= 2.0
            if lo < -1e12:
                raise NoRootError(f"no sign change on (-inf, 0) for theta={theta}")
        hi = -1e-12
    root = optimize.brentq(psi, lo, hi, xtol=1e-13, rtol=1e-13)
    return float(root)


def oc_value(h: float, bounds: Boundaries) -> float:
    """Operating characteristic L = (A^h - 1)/(A^h - B^h), limit at h = 0."""
    if h == 0.0:
        return bounds.log_a / (bounds.log_a - bounds.log_b)
    x = h * bounds.log_a
    y = h * bounds.log_b
    if x > _EXP_LIMIT:
        return 1.0
    if y > _EXP_LIMIT:
        return 0.0
    num = math.expm1(x)
    den = num - math.expm1(y)
    return min(1.0, max(0.0, num / den))


def oc_point(theta: float, model: HypothesisModel, bounds: Boundaries) -> OcPoint:
    """Solve h at theta and evaluate the operating characteristic there."""
    h = h_solve(theta, model)
    return OcPoint(theta=theta, h=h, L=oc_value(h, bounds))


def asn_approx(L: float, bounds: Boundaries, expected_increment: float) -> float:
    """Wald's ASN approximation (L log B + (1-L) log A) / E{increment}."""
    if expected_increment == 0.0:
        raise DomainError("expected increment is zero: theta sits at the "
                          "indifference point and the ASN approximation is singular")
    numerator = L * bounds.log_b + (1.0 - L) * bounds.log_a
    if numerator == 0.0:
        warnings.warn("degenerate ASN: numerator vanished at this L", stacklevel=2)
        return 0.0
    return numerator / expected_increment


def rse(n_fixed: int, asn: float) -> float:
    """Relative sample efficiency: fixed-test sample size over the ASN."""
    if not n_fixed > 0 or not asn > 0.0:
        raise DomainError(f"n_fixed and asn must be positive, got {n_fixed}, {asn}")
    return n_fixed / asn
