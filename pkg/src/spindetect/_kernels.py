"""Hot numeric kernels: numba-compiled fast path, pure-numpy fallback.

The two genuinely loop-bound inner kernels of the package live here: the
sequential boundary-crossing scan consumed by the Monte Carlo harness and
the first-order IIR low-pass recursion of the measurement chain.

Set ``SPINDETECT_DISABLE_NUMBA=1`` in the environment to force the fallback
path (``backend()`` reports which one is active).  Both paths produce
bit-identical results: ``np.cumsum`` accumulates left to right with the same
rounding as the compiled scalar loop, and the fallback filter runs the same
loop uncompiled.  ``benchmarks/bench_kernels.py`` times one against the other.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "SPINDETECT_DISABLE_NUMBA"


def _first_crossing_loop(increments, carry, log_b, log_a):
    # Returns (index, llr, crossed): index is the 0-based position within
    # `increments` where the accumulated sum first leaves (log_b, log_a),
    # llr the accumulated value there; crossed=False reports the final state.
    s = carry
    for i in range(increments.shape[0]):
        s += increments[i]
        if s >= log_a or s <= log_b:
            return i, s, True
    return increments.shape[0] - 1, s, False


def _first_crossing_numpy(increments, carry, log_b, log_a):
    n = increments.shape[0]
    if n == 0:
        return -1, carry, False
    buf = np.empty(n + 1, dtype=np.float64)
    buf[0] = carry
    buf[1:] = increments
    cs = np.cumsum(buf)[1:]
    hit = (cs >= log_a) | (cs <= log_b)
    idx = int(np.argmax(hit))
    if hit[idx]:
        return idx, float(cs[idx]), True
    return n - 1, float(cs[-1]), False


def _iir_lowpass_loop(z, alpha):
    # x[n] = alpha*x[n-1] + (1-alpha)/2*(z[n] + z[n-1]) with zero prior state.
    h = (1.0 - alpha) / 2.0
    x = np.empty_like(z)
    prev_x = 0.0
    prev_z = 0.0
    for i in range(z.shape[0]):
        prev_x = alpha * prev_x + h * (z[i] + prev_z)
        prev_z = z[i]
        x[i] = prev_x
    return x


USING_NUMBA = False
if os.environ.get(DISABLE_ENV, "").strip().lower() not in {"1", "true", "yes"}:
    try:
        import numba
    except ImportError:
        numba = None
    if numba is not None:
        first_crossing = numba.njit(cache=True)(_first_crossing_loop)
        iir_lowpass = numba.njit(cache=True)(_iir_lowpass_loop)
        USING_NUMBA = True

if not USING_NUMBA:
    first_crossing = _first_crossing_numpy
    iir_lowpass = _iir_lowpass_loop


def backend() -> str:
    """Name of the active kernel path: 'numba' or 'numpy'."""
    return "numba" if USING_NUMBA else "numpy"
