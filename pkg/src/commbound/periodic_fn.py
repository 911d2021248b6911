"""2pi-periodic functions: evaluation, Fourier coefficients, norms, builtins.

A PeriodicFunction is known through a vectorized evaluation rule on
[-pi, pi]; it may carry an exact coefficient rule n -> a_n and a closed
form for the coefficient l1 tail.  Coefficients follow the complex
exponential convention f(x) = sum a_n e^{inx}.  Quadrature-based
coefficients use the composite trapezoid rule on uniform samples, which
is spectrally accurate for periodic integrands, with grid doubling until
a Richardson comparison certifies the requested absolute error.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

_QUAD_K_START = 2 ** 14
_QUAD_K_CAP = 2 ** 22
_QUAD_BLOCK = 2 ** 16
_EXTENT_GRID = 2 ** 16


class QuadratureError(RuntimeError):
    """Raised when a coefficient quadrature cannot certify its error target."""


def _reduce_angle(x):
    """Map angles into [-pi, pi); the seam invariant makes the endpoints agree."""
    return np.mod(np.asarray(x, dtype=float) + np.pi, TWO_PI) - np.pi


class PeriodicFunction:
    """A 2pi-periodic function with optional exact coefficient data.

    rule: callable taking an ndarray of angles in [-pi, pi] and returning
    values (real or complex).  real_valued promises |Im f| < 1e-12.
    coefficient_rule, if given, returns the exact Fourier coefficient a_n.
    l1_tail_rule, if given, returns sum_{|n| > N} |a_n| exactly.
    """

    def __init__(self, rule, real_valued=False, name="", coefficient_rule=None,
                 l1_tail_rule=None):
        self.rule = rule
        self.real_valued = bool(real_valued)
        self.name = name
        self.coefficient_rule = coefficient_rule
        self.l1_tail_rule = l1_tail_rule
        self._coeff_cache = {}
        self._pair_cache = {}
        self._check_seam()
        if self.real_valued:
            self._check_real()

    def _check_seam(self):
        ends = np.asarray(self.rule(np.array([-np.pi, np.pi])))
        if abs(complex(ends[0]) - complex(ends[1])) >= 1e-12:
            raise ValueError(
                "rule is not periodic at the seam: f(-pi)=%r f(pi)=%r"
                % (complex(ends[0]), complex(ends[1]))
            )

    def _check_real(self):
        x = np.linspace(-np.pi, np.pi, 97)
        v = np.asarray(self.rule(x))
        if np.iscomplexobj(v) and np.max(np.abs(v.imag)) >= 1e-12:
            raise ValueError("real_valued is set but the rule returns complex values")

    def sample(self, x):
        """Evaluate on an array of angles, reduced mod 2pi into [-pi, pi)."""
        return np.asarray(self.rule(_reduce_angle(x)))

    def __call__(self, x):
        return complex(self.sample(np.array([float(x)]))[0])

    def __repr__(self):
        return "PeriodicFunction(name=%r, real_valued=%r)" % (self.name, self.real_valued)


class TrigPolynomial(PeriodicFunction):
    """Finite Fourier sum of degree N, evaluated by direct summation."""

    def __init__(self, coefficients, name=""):
        if isinstance(coefficients, dict):
            items = {int(n): complex(a) for n, a in coefficients.items()}
        else:
            items = {int(n): complex(a) for n, a in coefficients}
        degree = max((abs(n) for n in items), default=0)
        ns = np.arange(-degree, degree + 1)
        coeffs = np.zeros(2 * degree + 1, dtype=np.complex128)
        for n, a in items.items():
            coeffs[n + degree] = a
        self.degree = int(degree)
        self.ns = ns
        self.coeffs = coeffs
        real = bool(np.all(coeffs[::-1] == np.conj(coeffs)))

        def rule(x, _ns=ns, _c=coeffs, _real=real):
            v = _c @ np.exp(1j * np.multiply.outer(_ns, np.asarray(x, dtype=float)))
            return v.real if _real else v

        super().__init__(
            rule,
            real_valued=real,
            name=name or "trig polynomial",
            coefficient_rule=self.coefficient,
            l1_tail_rule=self._l1_tail,
        )

    def coefficient(self, n):
        n = int(n)
        if abs(n) > self.degree:
            return 0j
        return complex(self.coeffs[n + self.degree])

    def _l1_tail(self, N):
        mask = np.abs(self.ns) > N
        return float(np.sum(np.abs(self.coeffs[mask])))


def evaluate(f: PeriodicFunction, x: float) -> complex:
    """Value of f at angle x, reduced mod 2pi into [-pi, pi)."""
    return f(x)


def _quad_block_sum(f, n, count, start, step):
    """sum f(x_j) e^{-i n x_j} over x_j = -pi + step*(start + j), j < count."""
    total = 0.0 + 0.0j
    done = 0
    while done < count:
        m = min(_QUAD_BLOCK, count - done)
        x = -np.pi + step * (start + done + np.arange(m))
        total += complex(np.sum(f.sample(x) * np.exp(-1j * n * x)))
        done += m
    return total


def _coefficient_quadrature(f: PeriodicFunction, n: int, tol: float) -> tuple:
    """Refine the trapezoid sum by grid doubling; (estimate, error, at_cap)."""
    K = _QUAD_K_START
    total = _quad_block_sum(f, n, K, 0.0, TWO_PI / K)
    est = total / K
    while True:
        # the K midpoints turn the K-point rule into the 2K-point rule
        total = total + _quad_block_sum(f, n, K, 0.5, TWO_PI / K)
        K *= 2
        new = total / K
        diff = abs(new - est)
        est = new
        if diff <= tol:
            return complex(est), diff, False
        if K >= _QUAD_K_CAP:
            return complex(est), diff, True


def fourier_coefficient(f: PeriodicFunction, n: int, tol: float = 1e-10) -> complex:
    """Fourier coefficient a_n = (1/2pi) integral f(x) e^{-inx} dx.

    Uses the exact rule when the function carries one.  Otherwise the
    trapezoid sum is refined by grid doubling until the K vs 2K Richardson
    difference is within tol; QuadratureError if the cap grid cannot
    certify it.
    """
    n = int(n)
    if f.coefficient_rule is not None:
        return complex(f.coefficient_rule(n))
    cached = f._coeff_cache.get(n)
    if cached is not None and (cached[1] <= tol or cached[2]):
        if cached[1] <= tol:
            return cached[0]
        raise QuadratureError(
            "coefficient a_%d: error estimate %.3e exceeds target %.3e at K=%d"
            % (n, cached[1], tol, _QUAD_K_CAP)
        )
    est, diff, at_cap = _coefficient_quadrature(f, n, tol)
    f._coeff_cache[n] = (est, diff, at_cap)
    if diff <= tol:
        return est
    raise QuadratureError(
        "coefficient a_%d: error estimate %.3e exceeds target %.3e at K=%d"
        % (n, diff, tol, _QUAD_K_CAP)
    )


def fourier_coefficient_estimate(
    f: PeriodicFunction, n: int, tol: float = 1e-10
) -> tuple:
    """Best-effort coefficient with its certified error; never raises.

    Returns (value, error_bound).  Functions with an exact rule report
    error 0.  Otherwise the Richardson difference at the final grid is
    the error bound, which may exceed tol when refinement hits the cap
    grid (slowly converging integrands keep their best estimate).
    """
    n = int(n)
    if f.coefficient_rule is not None:
        return complex(f.coefficient_rule(n)), 0.0
    cached = f._coeff_cache.get(n)
    if cached is not None and (cached[1] <= tol or cached[2]):
        return cached[0], cached[1]
    est, diff, at_cap = _coefficient_quadrature(f, n, tol)
    f._coeff_cache[n] = (est, diff, at_cap)
    return est, diff


def truncate(f: PeriodicFunction, N: int) -> TrigPolynomial:
    """Degree-N Fourier partial sum of f."""
    N = int(N)
    if N < 0:
        raise ValueError("truncation degree must be nonnegative")
    coeffs = {n: fourier_coefficient(f, n) for n in range(-N, N + 1)}
    return TrigPolynomial(coeffs, name="%s truncated at N=%d" % (f.name or "f", N))


def derivative_fourier_norm(p: TrigPolynomial) -> float:
    """l1 norm of the differentiated coefficient sequence, sum |n a_n|."""
    return float(np.sum(np.abs(p.ns * p.coeffs)))


def _golden_extremum(g, lo, hi, sign, iters=80):
    """Golden-section search for max (sign=+1) or min (sign=-1) of g."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    gc = sign * g(c)
    gd = sign * g(d)
    for _ in range(iters):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - phi * (b - a)
            gc = sign * g(c)
        else:
            a, c, gc = c, d, gd
            d = a + phi * (b - a)
            gd = sign * g(d)
    xm = 0.5 * (a + b)
    return xm, sign * max(gc, gd)


def range_extent(f: PeriodicFunction, grid_size: int = _EXTENT_GRID):
    """(min, max) of a real-valued f over a uniform grid with one refinement.

    One golden-section pass inside the best cell; extents are certified
    only to grid tolerance.
    """
    if not f.real_valued:
        raise ValueError("range_extent requires a real-valued function")
    if grid_size < 1024:
        raise ValueError("grid_size must be at least 1024")
    x = -np.pi + TWO_PI * np.arange(grid_size) / grid_size
    v = np.real(f.sample(x))
    h = TWO_PI / grid_size

    def scalar(t):
        return float(np.real(f.sample(np.array([t]))[0]))

    imax = int(np.argmax(v))
    _, refined_max = _golden_extremum(scalar, x[imax] - h, x[imax] + h, +1.0)
    imin = int(np.argmin(v))
    _, refined_min = _golden_extremum(scalar, x[imin] - h, x[imin] + h, -1.0)
    return (min(float(v[imin]), refined_min), max(float(v[imax]), refined_max))


def _disk_two(a, b):
    c = 0.5 * (a + b)
    return c, abs(a - b) * 0.5


def _circumdisk(a, b, c):
    """Smallest disk through three points; falls back to best two-point disk."""
    d = 2.0 * ((a.real * (b.imag - c.imag))
               + (b.real * (c.imag - a.imag))
               + (c.real * (a.imag - b.imag)))
    if abs(d) < 1e-30:
        cands = [_disk_two(a, b), _disk_two(a, c), _disk_two(b, c)]
        center, r = max(cands, key=lambda t: t[1])
        return center, r
    ux = ((abs(a) ** 2) * (b.imag - c.imag)
          + (abs(b) ** 2) * (c.imag - a.imag)
          + (abs(c) ** 2) * (a.imag - b.imag)) / d
    uy = ((abs(a) ** 2) * (c.real - b.real)
          + (abs(b) ** 2) * (a.real - c.real)
          + (abs(c) ** 2) * (b.real - a.real)) / d
    center = complex(ux, uy)
    return center, max(abs(a - center), abs(b - center), abs(c - center))


def _first_outside(pts, center, radius):
    bad = np.abs(pts - center) > radius * (1.0 + 1e-13) + 1e-15
    idx = np.nonzero(bad)[0]
    return int(idx[0]) if idx.size else -1


def _smallest_disk(pts):
    """Smallest enclosing disk of complex points, incremental construction.

    Points are pre-shuffled with a fixed seed so the incremental passes run
    in expected linear time; the result does not depend on the shuffle.
    """
    pts = np.asarray(pts, dtype=np.complex128)
    if pts.size == 0:
        return 0j, 0.0
    if pts.size == 1:
        return complex(pts[0]), 0.0
    order = np.random.default_rng(0).permutation(pts.size)
    p = pts[order]
    center, radius = _disk_two(p[0], p[1])
    i = 2
    while True:
        k = _first_outside(p[i:], center, radius)
        if k < 0:
            return center, float(radius)
        i += k
        q1 = p[i]
        # rebuild with q1 on the boundary
        center, radius = _disk_two(p[0], q1)
        j = 1
        while True:
            k2 = _first_outside(p[j:i], center, radius)
            if k2 < 0:
                break
            j += k2
            q2 = p[j]
            center, radius = _disk_two(q1, q2)
            for t in range(j):
                if abs(p[t] - center) > radius * (1.0 + 1e-13) + 1e-15:
                    center, radius = _circumdisk(q1, q2, p[t])
            j += 1
        i += 1


def chebyshev_radius(f: PeriodicFunction, grid_size: int = _EXTENT_GRID) -> float:
    """min over constants of sup |f - c|, to grid tolerance.

    Real case: half the oscillation (max - min)/2.  Complex case: radius of
    the smallest disk enclosing the sampled range.
    """
    if f.real_valued:
        lo, hi = range_extent(f, grid_size)
        return 0.5 * (hi - lo)
    if grid_size < 1024:
        raise ValueError("grid_size must be at least 1024")
    x = -np.pi + TWO_PI * np.arange(grid_size) / grid_size
    v = np.asarray(f.sample(x), dtype=np.complex128)
    _, radius = _smallest_disk(v)
    return radius


def coefficient_l1(f: PeriodicFunction, head: int = 64, tol: float = 1e-6):
    """Certified upper bound on sum |a_n|, or None when no tail is certifiable.

    Uses the closed tail when the function carries one.  Otherwise dyadic
    blocks past the head are summed and the remainder is bounded by
    geometric extrapolation of the block ratio; returns None when the
    blocks do not decay.
    """
    if f.l1_tail_rule is not None:
        total = abs(fourier_coefficient(f, 0))
        for n in range(1, head + 1):
            total += abs(fourier_coefficient(f, n)) + abs(fourier_coefficient(f, -n))
        return float(total + f.l1_tail_rule(head))
    try:
        total = abs(fourier_coefficient(f, 0, tol)) + tol
        for n in range(1, head + 1):
            total += abs(fourier_coefficient(f, n, tol)) + tol
            total += abs(fourier_coefficient(f, -n, tol)) + tol
    except QuadratureError:
        return None
    blocks = []
    lo = head + 1
    for _ in range(2):
        hi = 2 * lo - 1
        s = 0.0
        for n in range(lo, hi + 1):
            try:
                s += abs(fourier_coefficient(f, n, tol)) + tol
                s += abs(fourier_coefficient(f, -n, tol)) + tol
            except QuadratureError:
                return None
        blocks.append(s)
        total += s
        lo = hi + 1
    if blocks[0] <= 0.0:
        return float(total)
    ratio = blocks[1] / blocks[0]
    if ratio >= 0.75:
        return None
    return float(total + blocks[1] * ratio / (1.0 - ratio))


def builtin_triangle() -> PeriodicFunction:
    """Triangle wave 1 - (2/pi)|x| on [-pi, pi], range [-1, 1].

    Carries the exact coefficient rule a_n = 4/(pi^2 n^2) for odd n and 0
    for even n (complex exponential convention) and the closed l1 tail.
    """

    def rule(x):
        return 1.0 - (2.0 / np.pi) * np.abs(x)

    def coeff(n):
        n = int(n)
        if n == 0 or n % 2 == 0:
            return 0j
        return complex(4.0 / (np.pi ** 2 * n ** 2))

    def l1_tail(N):
        # sum over odd m of m^-2 is pi^2/8, so the total l1 mass is 1
        odd = np.arange(1, int(N) + 1, 2, dtype=float)
        head = (8.0 / np.pi ** 2) * float(np.sum(odd ** -2.0))
        return max(0.0, 1.0 - head)

    return PeriodicFunction(rule, real_valued=True, name="triangle",
                            coefficient_rule=coeff, l1_tail_rule=l1_tail)


def builtin_bump() -> PeriodicFunction:
    """Half-disc bump sqrt(1 - 4x^2/pi^2) on [-pi/2, pi/2], zero elsewhere."""

    def rule(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        m = np.abs(x) <= np.pi / 2
        out[m] = np.sqrt(np.maximum(0.0, 1.0 - 4.0 * x[m] ** 2 / np.pi ** 2))
        return out

    return PeriodicFunction(rule, real_valued=True, name="bump")


def from_coefficients(coefficients) -> TrigPolynomial:
    """Trig polynomial from a finite map n -> a_n."""
    return TrigPolynomial(coefficients, name="from coefficients")
