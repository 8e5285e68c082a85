"""OSCAR-style measurement chain: synthesis, demodulation model, filtering.

The full front end (FM carrier, telegraph spin relaxation, reference-wave
correlation) is modeled for validation, but detection works on the baseband
shortcut: the frequency lock-in is treated as an identity-plus-white-noise
estimator, so observations are synthesized directly at baseband as
telegraph-modulated amplitude plus white Gaussian noise, then low-pass
filtered and decimated.  ``fm_synthesize`` and the phase-differencing
discriminator exist to check the front-end story, not to feed the detectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .rng import as_generator


class Hypothesis(enum.Enum):
    """Spin absent (H0) or spin present (H1)."""

    H0 = "H0"
    H1 = "H1"


@dataclass(frozen=True)
class ChainParams:
    """Physical and processing constants of the measurement chain.

    carrier_freq, freq_shift are rad/s; skip_period, sample_period seconds;
    relax_rate expected spin flips per second; cutoff rad/sample of the
    digital low-pass; noise_var and signal_var in squared signal units.
    """

    carrier_freq: float
    amplitude: float
    phase: float
    freq_shift: float
    skip_period: float
    relax_rate: float
    sample_period: float
    noise_var: float
    signal_var: float
    cutoff: float

    def __post_init__(self):
        for name in ("carrier_freq", "amplitude", "skip_period", "sample_period"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")
        if self.freq_shift < 0.0:
            raise DomainError("freq_shift must be nonnegative")
        if self.relax_rate < 0.0:
            raise DomainError("relax_rate must be nonnegative")
        if not 0.0 <= self.relax_rate * self.sample_period <= 1.0:
            raise DomainError("relax_rate * sample_period must lie in [0, 1]")
        if self.noise_var < 0.0 or self.signal_var < 0.0:
            raise DomainError("variances must be nonnegative")
        if not 0.0 < self.cutoff < math.pi:
            raise DomainError(f"cutoff must lie in (0, pi), got {self.cutoff}")


@dataclass(frozen=True)
class TelegraphParams:
    """Two-state Markov chain: stay with probability p, flip with 1 - p."""

    stay_prob: float
    length: int

    def __post_init__(self):
        if not 0.0 <= self.stay_prob <= 1.0:
            raise DomainError(f"stay_prob must lie in [0, 1], got {self.stay_prob}")
        if self.length < 1:
            raise DomainError(f"length must be positive, got {self.length}")

    @classmethod
    def from_rates(cls, relax_rate: float, sample_period: float, length: int):
        # Poisson small-interval limit: flip probability per sample is
        # relax_rate * sample_period, so the stay probability is 1 minus it.
        return cls(stay_prob=1.0 - relax_rate * sample_period, length=length)


def filter_alpha(cutoff: float) -> float:
    """Recursion coefficient (1 - sin wc)/cos wc, via its tan(pi/4 - wc/2) form.

    The tan form equals the quotient everywhere on (0, pi) and absorbs the
    0/0 at wc = pi/2 (alpha = 0) without a special case.
    """
    if not 0.0 < cutoff < math.pi:
        raise DomainError(f"cutoff must lie in (0, pi), got {cutoff}")
    return math.tan(math.pi / 4.0 - cutoff / 2.0)


def noise_power_gain(cutoff: float) -> float:
    """White-noise power gain of the low-pass filter, (1 - alpha)/2."""
    return (1.0 - filter_alpha(cutoff)) / 2.0


def warmup_length(cutoff: float) -> int:
    """Samples discarded to flush the filter transient: ceil(3/(1 - alpha))."""
    return math.ceil(3.0 / (1.0 - filter_alpha(cutoff)))


def decimation_factor(cutoff: float) -> int:
    """Subsampling period D = round(2 pi / wc)."""
    if not 0.0 < cutoff < math.pi:
        raise DomainError(f"cutoff must lie in (0, pi), got {cutoff}")
    return int(round(2.0 * math.pi / cutoff))


def telegraph(params: TelegraphParams, seed) -> np.ndarray:
    """Simulate the +-1 relaxation telegraph; first state equiprobable."""
    rng = as_generator(seed)
    u = rng.random(params.length)
    first = 1.0 if u[0] < 0.5 else -1.0
    if params.length == 1:
        return np.array([first])
    steps = np.where(u[1:] < params.stay_prob, 1.0, -1.0)
    out = np.empty(params.length)
    out[0] = first
    np.cumprod(steps, out=out[1:])
    out[1:] *= first
    return out


def fm_synthesize(
    params: ChainParams,
    spin_present: bool,
    flips,
    duration: float,
) -> np.ndarray:
    """Interferometer output: carrier FM-modulated by the spin square wave.

    The instantaneous frequency offset is freq_shift times the product of a
    +-1 square wave of period 2*skip_period and the per-sample telegraph
    state; its integral accumulates by left-rectangle rule, exact for the
    piecewise-constant modulation.  Without a spin the plain carrier
    amplitude*cos(carrier_freq*t + phase) is returned.
    """
    if not duration > 0.0:
        raise DomainError(f"duration must be positive, got {duration}")
    n = int(round(duration / params.sample_period))
    if n < 1:
        raise DomainError("duration shorter than one sample period")
    t = np.arange(n) * params.sample_period
    if not spin_present:
        return params.amplitude * np.cos(params.carrier_freq * t + params.phase)
    flips = np.asarray(flips, dtype=np.float64)
    if flips.size == 0:
        raise DomainError("spin_present requires a nonempty flips sequence")
    if flips.size < n:
        raise DomainError(f"flips sequence too short: need {n}, got {flips.size}")
    square = np.where((t // params.skip_period).astype(np.int64) % 2 == 0, 1.0, -1.0)
    s = params.freq_shift * square * flips[:n]
    phase_acc = np.empty(n)
    phase_acc[0] = 0.0
    np.cumsum(s[:-1] * params.sample_period, out=phase_acc[1:])
    return params.amplitude * np.cos(params.carrier_freq * t + phase_acc + params.phase)


def instantaneous_frequency(signal, sample_period: float) -> np.ndarray:
    """Phase-differencing discriminator (test oracle, not a detection stage).

    Differences the unwrapped phase of the analytic signal; returns n-1
    rad/s estimates.
    """
    from scipy.signal import hilbert

    signal = np.asarray(signal, dtype=np.float64)
    if signal.size < 2:
        raise DomainError("need at least two samples to difference the phase")
    phase = np.unwrap(np.angle(hilbert(signal)))
    return np.diff(phase) / sample_period


def correlate_channels(demod, t_skip_samples: int):
    """Correlate with the reference square wave and its quarter-period shift.

    The reference has period 2*t_skip_samples; the quadrature reference is
    delayed by t_skip_samples/2 (90 degrees), so t_skip_samples must be even.
    Returns (inphase, quadrature) product sequences.
    """
    demod = np.asarray(demod, dtype=np.float64)
    if t_skip_samples < 1:
        raise DomainError("t_skip_samples must be positive")
    if t_skip_samples % 2 != 0:
        raise DomainError("t_skip_samples must be even for the 90-degree shift")
    if demod.size < 2 * t_skip_samples:
        raise DomainError(
            f"input must cover a full reference period: need {2 * t_skip_samples}, "
            f"got {demod.size}"
        )
    n = np.arange(demod.size)
    period = 2 * t_skip_samples
    ref = np.where(n % period < t_skip_samples, 1.0, -1.0)
    ref_quad = np.where((n - t_skip_samples // 2) % period < t_skip_samples, 1.0, -1.0)
    return demod * ref, demod * ref_quad


def lowpass(z, cutoff: float) -> np.ndarray:
    """First-order recursive low-pass with unity DC gain and zero prior state.

    x[n] = alpha*x[n-1] + (1-alpha)/2*(z[n] + z[n-1]), alpha = filter_alpha(wc);
    |H(wc)|^2 = 1/2 at the cutoff.
    """
    alpha = filter_alpha(cutoff)
    z = np.ascontiguousarray(z, dtype=np.float64)
    return _kernels.iir_lowpass(z, alpha)


def subsample(x, cutoff: float) -> np.ndarray:
    """Keep every D-th sample, D = round(2 pi / wc), starting at index 0."""
    x = np.asarray(x)
    return x[:: decimation_factor(cutoff)]


def generate_observation(params: ChainParams, hyp: Hypothesis, n: int, seed):
    """Baseband observation pair after filtering and decimation.

    Under H0 both channels are white Gaussian noise through the low-pass and
    subsampler; under H1 the in-phase channel adds the telegraph-modulated
    amplitude sqrt(signal_var) before filtering.  A warm-up stretch of
    warmup_length(cutoff) filtered samples is discarded so the transient
    never reaches the statistics.  Returns (inphase, quadrature), each of
    length n; equal (params, hyp, n, seed) give bit-identical output.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    rng = as_generator(seed)
    d = decimation_factor(params.cutoff)
    w = warmup_length(params.cutoff)
    n_pre = w + (n - 1) * d + 1
    sigma = math.sqrt(params.noise_var)
    pre_i = rng.standard_normal(n_pre) * sigma
    pre_q = rng.standard_normal(n_pre) * sigma
    if hyp is Hypothesis.H1 and params.signal_var > 0.0:
        states = telegraph(
            TelegraphParams.from_rates(params.relax_rate, params.sample_period, n_pre),
            rng,
        )
        pre_i = pre_i + math.sqrt(params.signal_var) * states
    xi = subsample(lowpass(pre_i, params.cutoff)[w:], params.cutoff)
    xq = subsample(lowpass(pre_q, params.cutoff)[w:], params.cutoff)
    return xi, xq


def post_filter_snr(params: ChainParams, n: int = 100_000, seed=0) -> float:
    """Empirical post-filter snr: channel variance ratio minus one under H1.

    This is the calibration oracle tying the chain's pre-filter snr
    (signal_var/noise_var) to the snr seen by the detectors after the
    low-pass gain.
    """
    xi, xq = generate_observation(params, Hypothesis.H1, n, seed)
    return float(np.var(xi) / np.var(xq) - 1.0)
