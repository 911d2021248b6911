"""Bound envelopes for functions of positive contractions, chiefly sqrt.

The target quantity is the worst case of ||[f(H), A]|| over positive
contractions H and contractions A with ||[H, A]|| <= delta.  For
f(x) = sqrt(x) two line families combine into the envelope gamma0:
partial sums of the series for 1 - sqrt(1-x) and tangent lines to sqrt
at points a in [1/4, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_eigh, sqrt_series_sums
from .circle_bounds import BoundCurve, BoundLine

_SQRT_SERIES_DESC = "series for 1 - sqrt(1 - x): c1 = 1/2, c_{n+1} = c_n (2n-1)/(2n+2)"

# largest table computed so far; smaller requests slice it
_series_cache = {}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients c_n (n = 0..N_store) with running plain and n-weighted sums."""

    coefficients: np.ndarray
    partial_sums: np.ndarray
    weighted_sums: np.ndarray
    description: str = ""

    def __post_init__(self):
        if not (len(self.coefficients) == len(self.partial_sums)
                == len(self.weighted_sums)):
            raise ValueError("coefficient and sum arrays must align")

    @property
    def order(self):
        return len(self.coefficients) - 1

    def partial(self, N):
        return float(self.partial_sums[N])

    def weighted(self, N):
        return float(self.weighted_sums[N])


def sqrt_series(N: int) -> PowerSeries:
    """Series data for 1 - sqrt(1-x) through degree N (N >= 1).

    c_0 = 0, c_1 = 1/2, c_{n+1} = c_n (2n-1)/(2n+2); all later c_n are
    positive and the partial sums increase toward 1.  Sums are accumulated
    with compensated summation.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be at least 1")
    cached = _series_cache.get("sqrt")
    if cached is None or cached[0] < N:
        c, partial, weighted = sqrt_series_sums(N)
        cached = (N, _frozen(c), _frozen(partial), _frozen(weighted))
        _series_cache["sqrt"] = cached
    _, c, partial, weighted = cached
    k = N + 1
    return PowerSeries(_frozen(c[:k]), _frozen(partial[:k]),
                       _frozen(weighted[:k]), _SQRT_SERIES_DESC)


def power_series_line(series: PowerSeries, N: int, h_osc: float) -> BoundLine:
    """Line with slope sum_{n<=N} |n c_n| and the caller-supplied remainder
    oscillation as intercept; domain [0, 1] (positive-contraction setting)."""
    N = int(N)
    if not 0 <= N <= series.order:
        raise ValueError("N outside the stored series range")
    c = series.coefficients
    m = math.fsum(abs(n * c[n]) for n in range(N + 1))
    return BoundLine(m, float(h_osc), 1.0, "power series N=%d" % N)


def pedersen_line(N: int) -> BoundLine:
    """Line from the degree-N partial sum of the sqrt series.

    Slope sum_{n<=N} n c_n; intercept 1 - sum_{n<=N} c_n, the value at 1 of
    the nonnegative increasing remainder, which equals its oscillation on
    [0, 1].
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be at least 1")
    s = sqrt_series(N)
    b = max(1.0 - s.partial(N), 0.0)
    return BoundLine(s.weighted(N), b, 1.0, "pedersen N=%d" % N)


@dataclass(frozen=True)
class TangentParam:
    """Tangency abscissa for sqrt, restricted to the window [1/4, 1]."""

    a: float

    def __post_init__(self):
        if not 0.25 <= self.a <= 1.0:
            raise ValueError("tangent parameter must lie in [1/4, 1]")


def tangent_line(a) -> BoundLine:
    """Tangent bound delta/(2 sqrt(a)) + sqrt(a)/2; equals sqrt(a) at delta=a."""
    if not isinstance(a, TangentParam):
        a = TangentParam(float(a))
    r = math.sqrt(a.a)
    return BoundLine(0.5 / r, 0.5 * r, 1.0, "tangent a=%.12g" % a.a)


class SqrtEnvelope(BoundCurve):
    """Envelope for f(x) = sqrt(x) on delta in (0, 1].

    Evaluation takes the minimum of the stored lines and, for delta in
    [1/4, 1], the tangent line at the exact minimizer a = delta, whose
    value there is sqrt(delta).  Queries beyond delta = 1 clamp to the
    value at 1.  Breakpoint segmentation reflects the stored lines only.
    """

    def __init__(self, arrays):
        super().__init__(arrays=arrays, clamp_above=True)

    def _refine(self, deltas, vals):
        deltas = np.asarray(deltas, dtype=float)
        exact = np.sqrt(np.maximum(deltas, 0.25))
        return np.where(deltas >= 0.25, np.minimum(vals, exact), vals)

    def evaluate(self, deltas):
        scalar = np.isscalar(deltas) or np.asarray(deltas).ndim == 0
        clamped = self._check_domain(deltas)
        vals, _ = self._min_over_lines(clamped)
        vals = self._refine(clamped, vals)
        return float(vals) if scalar else vals

    def evaluate_with_provenance(self, delta):
        clamped = self._check_domain(float(delta))
        vals, idxs = self._min_over_lines(clamped)
        refined = self._refine(clamped, vals)
        if float(refined) < float(vals):
            prov = "tangent a=delta (exact minimizer)"
        else:
            prov = self._prov_fn(int(idxs))
        if float(clamped) != float(delta):
            prov += " (clamped at delta=1)"
        return float(refined), prov


def _pedersen_arrays(N_max):
    s = sqrt_series(N_max)
    m = s.weighted_sums[1:N_max + 1]
    b = np.maximum(1.0 - s.partial_sums[1:N_max + 1], 0.0)
    return m, b


def pedersen_envelope(N_max: int = 10 ** 5) -> BoundCurve:
    """Envelope of the pedersen lines alone, N = 1..N_max, on [0, 1]."""
    N_max = int(N_max)
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    m, b = _pedersen_arrays(N_max)

    def prov(i):
        return "pedersen N=%d" % (i + 1)

    return BoundCurve(arrays=(m, b, np.ones(m.size), prov))


def gamma0(N_max: int = 10 ** 5, a_grid: int = 1024) -> SqrtEnvelope:
    """The combined sqrt envelope: pedersen lines N = 1..N_max, tangent
    lines on a uniform a-grid over [1/4, 1] (endpoints included), and the
    constant cap 1 (the range extent of sqrt on [0, 1])."""
    N_max = int(N_max)
    a_grid = int(a_grid)
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    if a_grid < 2:
        raise ValueError("a_grid must be at least 2")
    m_ped, b_ped = _pedersen_arrays(N_max)
    a = np.linspace(0.25, 1.0, a_grid)
    ra = np.sqrt(a)
    m = np.concatenate([m_ped, 0.5 / ra, [0.0]])
    b = np.concatenate([b_ped, 0.5 * ra, [1.0]])

    def prov(i):
        if i < N_max:
            return "pedersen N=%d" % (i + 1)
        j = i - N_max
        if j < a_grid:
            return "tangent a=%.12g" % a[j]
        return "constant cap"

    return SqrtEnvelope((m, b, np.ones(m.size), prov))


def reflect_instance(H) -> np.ndarray:
    """I - H for a Hermitian H with spectrum in [0, 1] (checked to 1e-10)."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("square matrix required")
    if np.linalg.norm(H - H.conj().T) > 1e-10:
        raise ValueError("Hermitian matrix required")
    w, _ = jacobi_eigh(np.ascontiguousarray(H))
    if w[0] < -1e-10 or w[-1] > 1.0 + 1e-10:
        raise ValueError("spectrum outside [0, 1]")
    return np.eye(H.shape[0], dtype=np.complex128) - H


def reflect_function(f1):
    """The reflected rule f2(x) = 1 - f1(1 - x); reflecting twice returns
    the original rule (exactly so on dyadic arguments)."""

    def f2(x):
        return 1.0 - f1(1.0 - x)

    f2.inner = f1
    return f2
