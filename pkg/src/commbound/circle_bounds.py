"""Upper-bound curves and the constructive lower bound for unitary commutators.

The quantity bounded is the worst case of ||[f(V), A]|| over unitaries V
and contractions A with ||[V, A]|| <= delta.  Upper bounds are affine
lines delta -> m*delta + b collected into lower envelopes; the lower
bound comes from evaluating f at pairs of nearby spectral points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import best_by_offset
from .periodic_fn import (
    PeriodicFunction,
    TrigPolynomial,
    QuadratureError,
    chebyshev_radius,
    coefficient_l1,
    derivative_fourier_norm,
    fourier_coefficient,
    fourier_coefficient_estimate,
    TWO_PI,
)

_EVAL_CHUNK = 2 ** 24


@dataclass(frozen=True)
class BoundLine:
    """Affine bound delta -> slope*delta + intercept on [0, delta_max]."""

    slope: float
    intercept: float
    delta_max: float = 2.0
    provenance: str = ""

    def __post_init__(self):
        if not (self.slope >= 0.0):
            raise ValueError("slope must be nonnegative")
        if not (self.intercept >= 0.0):
            raise ValueError("intercept must be nonnegative")
        if not (0.0 < self.delta_max <= 2.0):
            raise ValueError("delta_max must lie in (0, 2]")

    def value(self, delta):
        return self.slope * np.asarray(delta, dtype=float) + self.intercept


class BoundCurve:
    """Pointwise minimum of a family of bound lines.

    Evaluation is an exact brute-force minimum over the stored lines
    (chunked for large families); breakpoint segmentation is derived
    separately for export and must reproduce the same values.
    """

    def __init__(self, lines=None, arrays=None, clamp_above=False):
        if arrays is not None:
            m, b, dmax, prov_fn = arrays
            self._m = np.asarray(m, dtype=float)
            self._b = np.asarray(b, dtype=float)
            self._dmax = np.asarray(dmax, dtype=float)
            self._prov_fn = prov_fn
        else:
            lines = list(lines)
            if not lines:
                raise ValueError("a bound curve needs at least one line")
            self._m = np.array([l.slope for l in lines], dtype=float)
            self._b = np.array([l.intercept for l in lines], dtype=float)
            self._dmax = np.array([l.delta_max for l in lines], dtype=float)
            provs = [l.provenance for l in lines]
            self._prov_fn = provs.__getitem__
        if self._m.size == 0:
            raise ValueError("a bound curve needs at least one line")
        self.delta_max = float(np.max(self._dmax))
        self.clamp_above = bool(clamp_above)

    @property
    def size(self):
        return int(self._m.size)

    def line(self, idx) -> BoundLine:
        return BoundLine(float(self._m[idx]), float(self._b[idx]),
                         float(self._dmax[idx]), self._prov_fn(int(idx)))

    def lines(self):
        return [self.line(i) for i in range(self.size)]

    def _min_over_lines(self, deltas):
        deltas = np.asarray(deltas, dtype=float)
        flat = deltas.ravel()
        vals = np.empty(flat.size)
        idxs = np.empty(flat.size, dtype=np.int64)
        chunk = max(1, _EVAL_CHUNK // max(1, self._m.size))
        for s in range(0, flat.size, chunk):
            d = flat[s:s + chunk]
            table = self._m[:, None] * d[None, :] + self._b[:, None]
            table[self._dmax[:, None] < d[None, :]] = np.inf
            k = np.argmin(table, axis=0)
            vals[s:s + chunk] = table[k, np.arange(d.size)]
            idxs[s:s + chunk] = k
        return vals.reshape(deltas.shape), idxs.reshape(deltas.shape)

    def _check_domain(self, deltas):
        deltas = np.asarray(deltas, dtype=float)
        if np.any(deltas < 0.0):
            raise ValueError("delta must be nonnegative")
        if np.any(deltas > self.delta_max) and not self.clamp_above:
            raise ValueError("delta beyond the curve domain [0, %g]" % self.delta_max)
        if self.clamp_above:
            deltas = np.minimum(deltas, self.delta_max)
        return deltas

    def evaluate(self, deltas):
        """Pointwise minimum over the stored lines, exactly."""
        scalar = np.isscalar(deltas) or np.asarray(deltas).ndim == 0
        vals, _ = self._min_over_lines(self._check_domain(deltas))
        return float(vals) if scalar else vals

    def evaluate_with_provenance(self, delta):
        """(value, provenance of the active line) at a single delta."""
        clamped = self._check_domain(float(delta))
        vals, idxs = self._min_over_lines(clamped)
        prov = self._prov_fn(int(idxs))
        if float(clamped) != float(delta):
            prov += " (clamped at delta=%g)" % self.delta_max
        return float(vals), prov

    def segments(self, lo=0.0, hi=None):
        """Breakpoint segmentation [(start, end, BoundLine), ...] on [lo, hi].

        Lines are processed in decreasing-slope order and dominated ones
        pruned by the standard convex-hull-of-lines sweep (the minimum of
        lines is concave, so active slopes decrease left to right).  The
        segmentation is only defined up to the smallest per-line domain.
        """
        dom = float(np.min(self._dmax))
        hi = dom if hi is None else min(float(hi), dom)
        if not lo < hi:
            raise ValueError("empty segmentation interval")
        order = np.lexsort((self._b, -self._m))
        kept = []          # active line indices, slopes decreasing
        starts = []        # delta where kept[i] becomes active

        def cross(i, j):
            # delta where line i and line j meet; slopes differ
            return (self._b[j] - self._b[i]) / (self._m[i] - self._m[j])

        for idx in order:
            idx = int(idx)
            if kept and self._m[kept[-1]] == self._m[idx]:
                continue  # same slope, intercept not smaller
            while kept:
                x = cross(kept[-1], idx)
                if x <= starts[-1]:
                    kept.pop()
                    starts.pop()
                else:
                    break
            start = lo if not kept else max(lo, cross(kept[-1], idx))
            kept.append(idx)
            starts.append(start)
        out = []
        for i, idx in enumerate(kept):
            a = starts[i]
            b = starts[i + 1] if i + 1 < len(kept) else hi
            b = min(b, hi)
            if a < b:
                out.append((float(a), float(b), self.line(idx)))
        return out


def folk_line(g: TrigPolynomial) -> BoundLine:
    """Slope-only bound ||[g(V), A]|| <= (sum |n a_n|) ||[V, A]||."""
    return BoundLine(derivative_fourier_norm(g), 0.0, 2.0, "folk")


def _remainder(f: PeriodicFunction, g: TrigPolynomial) -> PeriodicFunction:
    def rule(x):
        return np.asarray(f.sample(x)) - np.asarray(g.sample(x))

    return PeriodicFunction(rule, real_valued=f.real_valued and g.real_valued,
                            name="%s remainder" % (f.name or "f"))


def split_line(f: PeriodicFunction, g: TrigPolynomial) -> BoundLine:
    """Bound from the split f = g + h: slope from g, intercept from h.

    The intercept is twice the Chebyshev radius of the remainder, which for
    real h equals max(h) - min(h).
    """
    h = _remainder(f, g)
    return BoundLine(derivative_fourier_norm(g), 2.0 * chebyshev_radius(h),
                     2.0, "split")


def _abs_coeff_sum(f, lo, hi, tol):
    """sum of |a_n| + |a_{-n}| for n in lo..hi, each inflated by tol."""
    s = 0.0
    for n in range(lo, hi + 1):
        s += abs(fourier_coefficient(f, n, tol)) + tol
        s += abs(fourier_coefficient(f, -n, tol)) + tol
    return s


def _corollary_tail(f, N, head_factor=10):
    """2 * sum_{|n|>N} |a_n|, by closed form when the function carries one,
    else by cutoff summation with a geometric remainder estimate over dyadic
    blocks; None when the tail cannot be estimated."""
    if f.l1_tail_rule is not None:
        return 2.0 * float(f.l1_tail_rule(N))
    cutoff = max(head_factor * max(N, 1), N + 8)
    tol = 1e-6
    try:
        head = _abs_coeff_sum(f, N + 1, cutoff, tol)
        b0 = _abs_coeff_sum(f, cutoff + 1, 2 * cutoff, tol)
        b1 = _abs_coeff_sum(f, 2 * cutoff + 1, 4 * cutoff, tol)
    except QuadratureError:
        return None
    if b0 <= 0.0:
        return None if b1 > 0.0 else 2.0 * float(head)
    ratio = b1 / b0
    if ratio >= 0.75:
        return None
    remainder = b1 * ratio / (1.0 - ratio)
    return 2.0 * float(head + b0 + b1 + remainder)


def constant_cap(f: PeriodicFunction) -> BoundLine:
    """Flat bound min(2 sum |a_n|, 2 * chebyshev radius); provenance
    records which branch won, with ties going to the oscillation branch."""
    osc = 2.0 * chebyshev_radius(f)
    l1 = coefficient_l1(f)
    if l1 is not None and 2.0 * l1 < osc - 1e-12:
        return BoundLine(0.0, 2.0 * l1, 2.0, "constant cap (l1)")
    return BoundLine(0.0, osc, 2.0, "constant cap (oscillation)")


def truncation_envelope(f: PeriodicFunction, N_max: int,
                        grid_size: int = 2 ** 16) -> BoundCurve:
    """Envelope of the truncation bounds for N = 0..N_max plus the cap.

    For each N the slope is sum_{|n|<=N} |n a_n|.  The intercept is the
    tighter of the remainder oscillation and the coefficient-tail bound
    2 sum_{|n|>N} (|a_n| + |a_-n|); the losing branch's value is retained
    in the provenance string.

    Coefficients come from best-effort quadrature estimates, so slowly
    converging integrands still produce lines: the oscillation intercept
    certifies the split against the polynomial actually built, and any
    residual coefficient error is charged to the tail intercept before
    the two branches are compared.
    """
    N_max = int(N_max)
    if N_max < 0:
        raise ValueError("N_max must be nonnegative")
    coeffs = {}
    err_run = [0.0]
    for k in range(N_max + 1):
        orders = (0,) if k == 0 else (k, -k)
        step = err_run[-1]
        for n in orders:
            coeffs[n], err = fourier_coefficient_estimate(f, n)
            step += err
        err_run.append(step)
    lines = []
    for N in range(N_max + 1):
        g = TrigPolynomial(
            {n: coeffs[n] for n in range(-N, N + 1)},
            name="%s truncated at N=%d" % (f.name or "f", N),
        )
        m = derivative_fourier_norm(g)
        h = _remainder(f, g)
        b_lemma = 2.0 * chebyshev_radius(h, grid_size)
        b_tail = _corollary_tail(f, N)
        if b_tail is not None:
            # the tail certificate speaks about the exact truncation; shifting
            # it to the estimated polynomial costs the accumulated head error
            b_tail += 2.0 * err_run[N + 1]
        if b_tail is not None and b_tail < b_lemma:
            b, branch = b_tail, "tail"
            other = " [oscillation b=%.6g]" % b_lemma
        else:
            b, branch = b_lemma, "oscillation"
            other = "" if b_tail is None else " [tail b=%.6g]" % b_tail
        prov = "truncation N=%d (%s)" % (N, branch) + other
        lines.append(BoundLine(m, b, 2.0, prov))
    lines.append(constant_cap(f))
    return BoundCurve(lines)


def _lower_table(f: PeriodicFunction, grid_size: int):
    key = int(grid_size)
    table = f._pair_cache.get(key)
    if table is None:
        x = -np.pi + TWO_PI * np.arange(grid_size) / grid_size
        vals = np.asarray(f.sample(x), dtype=np.complex128)
        best, _ = best_by_offset(vals, grid_size // 2)
        # running max over offsets d' <= d keeps the search monotone in delta
        running = np.maximum.accumulate(best)
        table = (x, vals, running)
        f._pair_cache[key] = table
    return table


def eta_lower(f: PeriodicFunction, delta: float, grid_size: int = 4096) -> float:
    """Constructive lower bound: the largest |f(x2) - f(x1)| over pairs
    whose circular distance is at most 2 arcsin(delta/2).

    Grid pairs at all admissible offsets are combined with an exact
    full-width pair scan and one golden-section refinement around the best
    full-width pair; ties go to the smaller x1.
    """
    delta = float(delta)
    if not 0.0 <= delta < 2.0:
        raise ValueError("delta must lie in [0, 2)")
    if delta == 0.0:
        return 0.0
    grid_size = int(grid_size)
    w = 2.0 * np.arcsin(0.5 * delta)
    h = TWO_PI / grid_size
    x, vals, running = _lower_table(f, grid_size)
    d_max = int(np.floor(w / h))
    if d_max * h > w:
        d_max -= 1
    d_max = min(d_max, grid_size // 2)
    best = float(running[d_max]) if d_max >= 1 else 0.0
    # pairs at separation exactly w, one endpoint on the grid
    shifted = np.asarray(f.sample(x + w), dtype=np.complex128)
    diffs = np.abs(shifted - vals)
    i0 = int(np.argmax(diffs))
    best = max(best, float(diffs[i0]))

    def pair_gap(t):
        a = f.sample(np.array([t]))[0]
        b = f.sample(np.array([t + w]))[0]
        return abs(complex(b) - complex(a))

    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = x[i0] - h, x[i0] + h
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    gc, gd = pair_gap(c), pair_gap(d)
    for _ in range(80):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - phi * (b - a)
            gc = pair_gap(c)
        else:
            a, c, gc = c, d, gd
            d = a + phi * (b - a)
            gd = pair_gap(d)
    return max(best, gc, gd)


def continuity_bound(curve: BoundCurve, d: float) -> float:
    """Upper bound on ||f(V) - f(V1)|| given ||V - V1|| = d, via the curve."""
    d = float(d)
    if not 0.0 <= d <= 2.0:
        raise ValueError("d must lie in [0, 2]")
    return curve.evaluate(d)
