"""Hot numerical kernels with a numba path and a pure-numpy fallback.

Three kernels live here: a cyclic Jacobi eigensolver for small complex
Hermitian matrices, a circular pair search used by the lower-bound curves,
and the compensated recurrence for the Taylor coefficients of 1 - sqrt(1-x).
The active implementation is chosen by COMMBOUND_BACKEND (see _backend).
Both paths are deterministic; they agree to roundoff but not bit for bit,
so cross-backend comparisons must use tolerances.
"""

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA, njit


def _jacobi_eigh_impl(a):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Returns (w, V) with eigenvalues ascending and unitary V whose columns
    are eigenvectors.  Unconditionally stable at the small dimensions used
    here (n <= 64).
    """
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(A[i, j]) ** 2
    scale = np.sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), V
    tol = 1e-300
    for _sweep in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += abs(A[p, q]) ** 2
        off = np.sqrt(2.0 * off)
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= tol:
                    continue
                # phase so the pivot becomes real, then a real Givens rotation
                ph = apq / r
                A[:, q] = A[:, q] / ph
                A[q, :] = A[q, :] * ph
                V[:, q] = V[:, q] / ph
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    order = np.argsort(w)
    return w[order], V[:, order].copy()


def _best_by_offset_loop(vals, d_max):
    """Largest |vals[i+d] - vals[i]| per circular offset d = 1..d_max.

    Returns (best, arg) where arg[d] is the first index attaining best[d];
    the forward scan keeps the smallest index on ties.
    """
    n = vals.shape[0]
    best = np.zeros(d_max + 1)
    arg = np.zeros(d_max + 1, dtype=np.int64)
    for d in range(1, d_max + 1):
        bv = -1.0
        bi = 0
        for i in range(n):
            j = i + d
            if j >= n:
                j -= n
            diff = abs(vals[j] - vals[i])
            if diff > bv:
                bv = diff
                bi = i
        best[d] = bv
        arg[d] = bi
    return best, arg


def _best_by_offset_numpy(vals, d_max):
    """Vectorized fallback; bitwise identical to the loop form."""
    n = vals.shape[0]
    ext = np.concatenate((vals, vals[:d_max]))
    best = np.zeros(d_max + 1)
    arg = np.zeros(d_max + 1, dtype=np.int64)
    for d in range(1, d_max + 1):
        diff = np.abs(ext[d:d + n] - vals)
        i = int(np.argmax(diff))
        best[d] = diff[i]
        arg[d] = i
    return best, arg


def _sqrt_series_impl(n_max):
    """Coefficients c_n of 1 - sqrt(1-x) with compensated running sums.

    c_1 = 1/2 and c_{n+1} = c_n (2n-1)/(2n+2).  Returns (c, partial,
    weighted) where partial[n] = sum_{k<=n} c_k and weighted[n] =
    sum_{k<=n} k c_k, both accumulated with Kahan compensation so the
    identity partial[n] + tail(n) = 1 survives to n ~ 1e5.
    """
    c = np.zeros(n_max + 1)
    partial = np.zeros(n_max + 1)
    weighted = np.zeros(n_max + 1)
    if n_max >= 1:
        c[1] = 0.5
    ps = 0.0
    pc = 0.0
    ws = 0.0
    wc = 0.0
    for n in range(1, n_max + 1):
        if n >= 2:
            c[n] = c[n - 1] * (2.0 * n - 3.0) / (2.0 * n)
        y = c[n] - pc
        t = ps + y
        pc = (t - ps) - y
        ps = t
        partial[n] = ps
        y = n * c[n] - wc
        t = ws + y
        wc = (t - ws) - y
        ws = t
        weighted[n] = ws
    return c, partial, weighted


jacobi_eigh_python = _jacobi_eigh_impl
best_by_offset_python = _best_by_offset_numpy
sqrt_series_sums_python = _sqrt_series_impl

if HAVE_NUMBA:
    jacobi_eigh_numba = njit(cache=True)(_jacobi_eigh_impl)
    best_by_offset_numba = njit(cache=True)(_best_by_offset_loop)
    sqrt_series_sums_numba = njit(cache=True)(_sqrt_series_impl)
else:
    jacobi_eigh_numba = None
    best_by_offset_numba = None
    sqrt_series_sums_numba = None

if BACKEND == "numba":
    jacobi_eigh = jacobi_eigh_numba
    best_by_offset = best_by_offset_numba
    sqrt_series_sums = sqrt_series_sums_numba
else:
    jacobi_eigh = jacobi_eigh_python
    best_by_offset = best_by_offset_python
    sqrt_series_sums = sqrt_series_sums_python
