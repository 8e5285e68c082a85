"""Low-snr expansion of the expected Fisher-F log-likelihood ratio.

Expanding the ratio LLR around snr = 0 reduces its expectation to inverse
moments E{1/(1+x)^m} of the F(N, N) family, each a ratio of Gamma functions
built from the kernel integral

    A_m(N, b) = Gamma(N/2-b+1) Gamma(N/2+m) / Gamma(N+m-b+1).

Because the expected ratio LLR is not linear in the number of observations,
no Brownian drift exists for this test; the sequential cost is instead the
smallest sample count whose expected LLR reaches the Wald ASN numerator,
converted to scalar data samples (each ratio observation consumes one
in-phase and one quadrature sample).

All Gamma ratios here have small integer offsets, so they are evaluated as
short products of factor ratios: exact to double precision at any N, where
differencing log-Gamma values of order N log N would lose ~11 digits by the
time N reaches 1e9 (the snr = 1e-4 regime).  The standalone A_m keeps the
log-Gamma form, which is ample over its own domain of use.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy import special

from .brownian import chi2_bm_params
from .distributions import TestStrength
from .errors import DomainError, InfeasibleSampleSizeError
from .sequential import asn_approx, oc_value, wald_boundaries
from .signal_chain import Hypothesis

SERIES_SNR_LIMIT = 0.1
FISHER_ASN_CAP = 10**12


@dataclass(frozen=True)
class SeriesOrder:
    """Truncation orders: M outer terms in snr, K inner expansion terms."""

    M: int = 6
    K: int = 6

    def __post_init__(self):
        if self.M < 1:
            raise DomainError(f"M must be at least 1, got {self.M}")
        if self.K < 0:
            raise DomainError(f"K must be nonnegative, got {self.K}")


@dataclass(frozen=True)
class AsnComparison:
    """Sequential sample costs of the two tests at one snr point."""

    snr: float
    asn_chi2: float
    asn_fisher: float
    ratio: float
    residual_estimate: float


def a_integral(m: int, n: int, b: int) -> float:
    """A_m(N, b) = int_0^inf e^(-(N+m-b)y) (e^y - 1)^(N/2-b) dy in Gamma form.

    Exact for even N; asymptotically exact for odd N.  Requires b <= N/2 so
    no Gamma pole is hit.
    """
    if m < 1 or n < 1:
        raise DomainError(f"m and N must be positive integers, got m={m}, N={n}")
    if b > n / 2:
        raise DomainError(f"need b <= N/2 to stay off the Gamma poles, got "
                          f"b={b}, N={n}")
    return math.exp(
        special.gammaln(n / 2.0 - b + 1.0)
        + special.gammaln(n / 2.0 + m)
        - special.gammaln(n + m - b + 1.0)
    )


def _coef_h0(n: int, m: int) -> float:
    # Gamma(N)Gamma(N/2+m) / (Gamma(N/2)Gamma(N+m)) as a factor-ratio product
    c = 1.0
    for j in range(m):
        c *= (n / 2.0 + j) / (n + j)
    return c


def _coef_h1(n: int, m: int, k: int) -> float:
    # Gamma(N)Gamma(N/2+k)Gamma(N/2+m) / (Gamma(N/2)^2 Gamma(N+m+k))
    c = 1.0
    for j in range(k):
        c *= n / 2.0 + j
    for j in range(m):
        c *= n / 2.0 + j
    for j in range(m + k):
        c /= n + j
    return c


def e0_inverse_moment(m: int, n: int) -> float:
    """E{1/(1+x)^m} for x ~ F(N, N): Gamma(N)Gamma(N/2+m)/(Gamma(N/2)Gamma(N+m))."""
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    if n < 1:
        raise DomainError(f"N must be a positive integer, got {n}")
    return _coef_h0(n, m)


def e1_inverse_moment(
    m: int, n: int, snr: float, order: SeriesOrder = SeriesOrder()
) -> float:
    """E{1/(1+x)^m} for x ~ (1+snr) F(N, N), expanded to order K in snr.

    Alternating series; successive truncations bracket the true value at
    small snr.  Warns above snr = 0.1 where the expansion degrades.
    """
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if n < 1:
        raise DomainError(f"N must be a positive integer, got {n}")
    _warn_series_validity(snr)
    total = 0.0
    for k in range(order.K + 1):
        total += (-1.0) ** k * math.comb(m + k - 1, k) * snr**k * _coef_h1(n, m, k)
    return total


def _warn_series_validity(snr: float) -> None:
    if not snr > 0.0:
        raise DomainError(f"snr must be positive, got {snr}")
    if snr > SERIES_SNR_LIMIT:
        warnings.warn(
            f"snr={snr} is outside the low-snr validity domain "
            f"(<= {SERIES_SNR_LIMIT}) of the series expansion",
            stacklevel=3,
        )


def _llr_terms(n: int, snr: float, hyp: Hypothesis, order: SeriesOrder):
    # Per-(m, k) series terms beyond the folded leading one; H0 keeps k = 0.
    terms = []
    if hyp is Hypothesis.H0:
        for m in range(2, order.M + 1):
            terms.append((m, 0, n * (-1.0) ** m * snr**m / m * _coef_h0(n, m)))
    else:
        for m in range(1, order.M + 1):
            for k in range(order.K + 1):
                if m == 1 and k == 0:
                    continue
                value = (
                    n
                    * (-1.0) ** (m + k)
                    * math.comb(m + k - 1, k)
                    * snr ** (m + k)
                    / m
                    * _coef_h1(n, m, k)
                )
                terms.append((m, k, value))
    return terms


def expected_fisher_llr(
    n: int, snr: float, hyp: Hypothesis, order: SeriesOrder = SeriesOrder()
) -> float:
    """Expected ratio LLR after n observation pairs, to the series order.

    The (m=1, k=0) term has coefficient exactly 1/2 for every N, so it folds
    with the (N/2)log(1+snr) lead into (N/2)(log1p(snr) - snr), dodging the
    cancellation between the two near-equal large terms.
    """
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    _warn_series_validity(snr)
    total = n / 2.0 * (math.log1p(snr) - snr)
    for _, _, value in _llr_terms(n, snr, hyp, order):
        total += value
    return total


def series_residual(
    n: int, snr: float, hyp: Hypothesis, order: SeriesOrder = SeriesOrder()
) -> float:
    """Truncation-error estimate: largest term magnitude on the outer shell."""
    shell = [
        abs(v)
        for m, k, v in _llr_terms(n, snr, hyp, order)
        if m == order.M or k == order.K
    ]
    return max(shell) if shell else 0.0


def _wald_numerator(strength: TestStrength, hyp: Hypothesis):
    bounds = wald_boundaries(strength)
    h = -1.0 if hyp is Hypothesis.H1 else 1.0
    big_l = oc_value(h, bounds)
    return big_l * bounds.log_b + (1.0 - big_l) * bounds.log_a, bounds


def fisher_asn(
    strength: TestStrength,
    snr: float,
    order: SeriesOrder = SeriesOrder(),
    hyp: Hypothesis = Hypothesis.H1,
    cap: int = FISHER_ASN_CAP,
) -> float:
    """Expected data-sample cost of the sequential ratio test.

    Implicit solve: the smallest number of observation pairs whose expected
    LLR reaches the Wald ASN numerator for the given hypothesis, times two
    because every pair consumes an in-phase and a quadrature sample.  No
    per-sample drift exists here (the expected LLR is nonlinear in n), so
    this replaces the ASN quotient used for the chi-square test.
    """
    target, _ = _wald_numerator(strength, hyp)
    if hyp is Hypothesis.H1:
        def reached(k: int) -> bool:
            return expected_fisher_llr(k, snr, hyp, order) >= target
    else:
        def reached(k: int) -> bool:
            return expected_fisher_llr(k, snr, hyp, order) <= target
    if reached(1):
        return 2.0
    lo, hi = 1, 2
    while not reached(hi):
        lo = hi
        hi *= 2
        if hi > cap:
            raise InfeasibleSampleSizeError(
                cap, f"expected ratio LLR does not reach the Wald numerator "
                f"within {cap} pairs at snr={snr}"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reached(mid):
            hi = mid
        else:
            lo = mid
    return 2.0 * hi


def asn_ratio_curve(
    strength: TestStrength,
    snr_grid,
    order: SeriesOrder = SeriesOrder(),
    hyp: Hypothesis = Hypothesis.H1,
) -> list[AsnComparison]:
    """Fisher vs chi-square sequential cost over an snr grid.

    The chi-square ASN comes from Wald's approximation with the exact
    increment drift; under Wald's approximations the resulting ratio does
    not depend on the error probabilities.
    """
    snr_grid = list(snr_grid)
    if not snr_grid:
        raise DomainError("snr grid must be nonempty")
    target_h = -1.0 if hyp is Hypothesis.H1 else 1.0
    rows = []
    for snr in snr_grid:
        _, bounds = _wald_numerator(strength, hyp)
        mu = chi2_bm_params(snr, hyp).mu
        asn_chi2 = asn_approx(oc_value(target_h, bounds), bounds, mu)
        asn_f = fisher_asn(strength, snr, order, hyp)
        residual = series_residual(int(asn_f // 2), snr, hyp, order)
        rows.append(
            AsnComparison(
                snr=snr,
                asn_chi2=asn_chi2,
                asn_fisher=asn_f,
                ratio=asn_f / asn_chi2,
                residual_estimate=residual,
            )
        )
    return rows
