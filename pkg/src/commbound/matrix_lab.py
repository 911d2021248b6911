"""Desk-scale matrix oracle for the commutator bounds.

Matrices are plain complex numpy arrays, dimensions 2..64.  Everything a
validation run produces is reproducible from (seed, index) alone: each
record draws from its own counter-based stream, so a reported violation
can be replayed bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import jacobi_eigh

_DIM_MIN = 2
_DIM_MAX = 64


class DecompositionError(RuntimeError):
    """Eigendecomposition failed to reproduce the input within tolerance."""


class ViolationError(RuntimeError):
    """A measured commutator norm exceeded its certified bound.

    Carries a replay payload: seed, index, dimension, spectrum mode, the
    offending matrices (entries as [re, im] pairs), and the numbers.
    """

    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


@dataclass
class SampleRecord:
    """One validation datum; margin = bound - measured when a bound applies."""

    seed: int
    dim: int
    delta: float
    measured: float
    bound: Optional[float] = None
    margin: Optional[float] = None


@dataclass
class InstancePair:
    """A tagged random instance (X, A) with its generation coordinates."""

    x: np.ndarray
    a: np.ndarray
    role: str  # "unitary" | "positive"
    seed: int
    index: int
    dim: int
    spectrum_mode: Optional[str] = None

    def validate(self):
        n = self.dim
        if self.role == "unitary":
            if op_norm(self.x.conj().T @ self.x - np.eye(n)) > 1e-10:
                raise ValueError("unitary role check failed")
        elif self.role == "positive":
            if op_norm(self.x - self.x.conj().T) > 1e-10:
                raise ValueError("positive role check failed: not Hermitian")
            w, _ = jacobi_eigh(np.ascontiguousarray(self.x))
            if w[0] < -1e-12 or w[-1] > 1.0 + 1e-12:
                raise ValueError("positive role check failed: spectrum")
        else:
            raise ValueError("unknown role %r" % self.role)
        if op_norm(self.a) > 1.0 + 1e-12:
            raise ValueError("A is not a contraction")


@dataclass
class ProbeResult:
    """Outcome of the hill-climb probe, with the matrices behind it."""

    record: SampleRecord
    gap: float
    iterations: int
    restarts: int
    h: np.ndarray
    a: np.ndarray


def _check_square(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix required")


def _check_dim(n):
    if not _DIM_MIN <= n <= _DIM_MAX:
        raise ValueError("dimension must lie in [%d, %d]" % (_DIM_MIN, _DIM_MAX))


def op_norm(M) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(M, dtype=np.complex128), 2))


def commutator(M1, M2) -> np.ndarray:
    M1 = np.asarray(M1, dtype=np.complex128)
    M2 = np.asarray(M2, dtype=np.complex128)
    _check_square(M1)
    if M1.shape != M2.shape:
        raise ValueError("dimension mismatch")
    return M1 @ M2 - M2 @ M1


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for record (seed, index)."""
    key = np.array([int(seed) % 2 ** 64, int(index) % 2 ** 64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _as_rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return stream(int(seed_or_rng), 0)


def _ginibre(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / math.sqrt(2.0)


def haar_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary: QR of a Gaussian matrix with the
    triangular factor's diagonal phases folded into Q."""
    n = int(n)
    _check_dim(n)
    rng = _as_rng(seed)
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diagonal(r)
    mag = np.abs(d)
    ph = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return q * ph


def random_contraction(n: int, seed) -> np.ndarray:
    """Gaussian matrix scaled so the typical norm is near 1, then rescaled
    to a contraction only when the norm exceeds 1."""
    n = int(n)
    _check_dim(n)
    rng = _as_rng(seed)
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / math.sqrt(8.0 * n)
    nrm = op_norm(a)
    if nrm > 1.0:
        a = a / nrm
    return a


def random_positive_contraction(n: int, seed, spectrum_mode: str = "uniform") -> np.ndarray:
    """H = U diag(lam) U* with Haar U; spectrum_mode `uniform` draws
    eigenvalues i.i.d. uniform on [0,1], `atoms` mixes in exact 0 and 1
    eigenvalues to hit the boundary cases."""
    n = int(n)
    _check_dim(n)
    rng = _as_rng(seed)
    u = haar_unitary(n, rng)
    if spectrum_mode == "uniform":
        lam = rng.uniform(0.0, 1.0, n)
    elif spectrum_mode == "atoms":
        kind = rng.integers(0, 3, n)
        unif = rng.uniform(0.0, 1.0, n)
        lam = np.where(kind == 0, 0.0, np.where(kind == 1, 1.0, unif))
    else:
        raise ValueError("spectrum_mode must be 'uniform' or 'atoms'")
    h = (u * lam) @ u.conj().T
    return (h + h.conj().T) / 2.0


def _cluster_ranges(w, tol):
    # chain clustering of sorted eigenvalues: split where the gap exceeds tol
    ranges = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > tol:
            ranges.append((start, k))
            start = k
    return ranges


def unitary_calculus(f, V) -> np.ndarray:
    """f[V] for unitary V: eigendecompose, apply f to the eigenvalue
    phases in (-pi, pi], reassemble.

    V is normal, so it is diagonalized in two Hermitian steps: the real
    part fixes the basis up to clusters (tolerance 1e-8), and within each
    cluster the compressed imaginary part separates the eigenvalues.  The
    residual ||V - Q Lam Q*|| must stay below 1e-9.
    """
    V = np.ascontiguousarray(V, dtype=np.complex128)
    _check_square(V)
    n = V.shape[0]
    if op_norm(V.conj().T @ V - np.eye(n)) > 1e-10:
        raise ValueError("unitary input required")
    h1 = (V + V.conj().T) / 2.0
    h2 = (V - V.conj().T) / 2.0j
    w, q = jacobi_eigh(h1)
    for s, e in _cluster_ranges(w, 1e-8):
        if e - s > 1:
            qc = q[:, s:e]
            k = qc.conj().T @ h2 @ qc
            _, rot = jacobi_eigh(np.ascontiguousarray((k + k.conj().T) / 2.0))
            q[:, s:e] = qc @ rot
    lam = np.diagonal(q.conj().T @ V @ q).copy()
    resid = op_norm(V - (q * lam) @ q.conj().T)
    if resid > 1e-9:
        raise DecompositionError("unitary diagonalization residual %.3e" % resid)
    theta = np.angle(lam)
    theta[theta == -np.pi] = np.pi
    vals = np.asarray(f.sample(theta), dtype=np.complex128)
    return (q * vals) @ q.conj().T


def hermitian_calculus(f, H) -> np.ndarray:
    """f(H) for Hermitian H with spectrum in [0, 1] (checked to 1e-10);
    eigenvalues are clipped to [0, 1] before applying the plain callable f."""
    H = np.ascontiguousarray(H, dtype=np.complex128)
    _check_square(H)
    if op_norm(H - H.conj().T) > 1e-10:
        raise ValueError("Hermitian input required")
    w, q = jacobi_eigh((H + H.conj().T) / 2.0)
    if w[0] < -1e-10 or w[-1] > 1.0 + 1e-10:
        raise ValueError("spectrum outside [0, 1]")
    resid = op_norm(H - (q * w) @ q.conj().T)
    if resid > 1e-9:
        raise DecompositionError("Hermitian diagonalization residual %.3e" % resid)
    vals = np.asarray(f(np.clip(w, 0.0, 1.0)), dtype=np.complex128)
    return (q * vals) @ q.conj().T


def block_offdiag(M1, M2) -> np.ndarray:
    """[[0, M1], [M2, 0]] in doubled dimension."""
    M1 = np.asarray(M1, dtype=np.complex128)
    M2 = np.asarray(M2, dtype=np.complex128)
    if M1.shape != M2.shape:
        raise ValueError("dimension mismatch")
    _check_square(M1)
    n = M1.shape[0]
    z = np.zeros((n, n), dtype=np.complex128)
    return np.block([[z, M1], [M2, z]])


def block_pair(V, V1):
    """(S, T) with S the off-diagonal identity swap and T = offdiag(V, V1);
    the identity ||[S, T]|| = ||V - V1|| is verified to 1e-10 on return."""
    V = np.asarray(V, dtype=np.complex128)
    V1 = np.asarray(V1, dtype=np.complex128)
    if V.shape != V1.shape:
        raise ValueError("dimension mismatch")
    _check_square(V)
    n = V.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    s = block_offdiag(eye, eye)
    t = block_offdiag(V, V1)
    lhs = op_norm(commutator(s, t))
    rhs = op_norm(V - V1)
    if abs(lhs - rhs) > 1e-10:
        raise RuntimeError("block identity failed: %.3e vs %.3e" % (lhs, rhs))
    return s, t


def lower_bound_instance(f, x1: float, x2: float) -> SampleRecord:
    """The 2x2 witness V = diag(e^{i x1}, e^{i x2}), A = swap: delta is
    2 |sin((x1 - x2)/2)| and the measured norm is |f(x2) - f(x1)|; both
    are obtained from the actual matrices."""
    v = np.diag(np.exp(1j * np.array([float(x1), float(x2)])))
    a = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    delta = op_norm(commutator(v, a))
    measured = op_norm(commutator(unitary_calculus(f, v), a))
    return SampleRecord(seed=0, dim=2, delta=delta, measured=measured)


def instance_pair(role: str, dim: int, seed: int, index: int,
                  spectrum_mode: Optional[str] = None) -> InstancePair:
    """Deterministically regenerate the instance at (seed, index)."""
    rng = stream(seed, index)
    if role == "unitary":
        x = haar_unitary(dim, rng)
    elif role == "positive":
        x = random_positive_contraction(dim, rng, spectrum_mode or "uniform")
    else:
        raise ValueError("role must be 'unitary' or 'positive'")
    a = random_contraction(dim, rng)
    return InstancePair(x=x, a=a, role=role, seed=seed, index=index, dim=dim,
                        spectrum_mode=spectrum_mode)


def _matrix_entries(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def sample_sweep(f, role: str, count: int, dims, seed: int, curve,
                 spectrum_mode: str = "both"):
    """Random validation sweep: for each index, draw (X, A), measure
    delta = ||[X, A]|| and ||[f(X), A]||, and check the margin against the
    supplied curve.  A margin below -1e-8 raises ViolationError carrying
    a full replay payload.

    Dimensions cycle through `dims`; for the positive role the spectrum
    mode alternates uniform/atoms when `both` is requested.  f is a
    periodic function for the unitary role and a plain callable on [0, 1]
    for the positive role.
    """
    count = int(count)
    if count < 1:
        raise ValueError("count must be at least 1")
    dims = [int(d) for d in dims]
    if not dims:
        raise ValueError("dims must be nonempty")
    for d in dims:
        _check_dim(d)
    records = []
    for i in range(count):
        dim = dims[i % len(dims)]
        if role == "positive":
            mode = spectrum_mode
            if spectrum_mode == "both":
                mode = "uniform" if i % 2 == 0 else "atoms"
        else:
            mode = None
        pair = instance_pair(role, dim, seed, i, mode)
        delta = op_norm(commutator(pair.x, pair.a))
        if role == "unitary":
            fx = unitary_calculus(f, pair.x)
        else:
            fx = hermitian_calculus(f, pair.x)
        measured = op_norm(commutator(fx, pair.a))
        # fp guard: delta may poke past the curve domain by rounding only
        bound = curve.evaluate(min(delta, curve.delta_max))
        margin = bound - measured
        record = SampleRecord(seed=seed, dim=dim, delta=delta,
                              measured=measured, bound=bound, margin=margin)
        if margin < -1e-8:
            payload = {
                "seed": int(seed),
                "index": i,
                "dim": dim,
                "role": role,
                "spectrum_mode": mode,
                "delta": delta,
                "measured": measured,
                "bound": bound,
                "margin": margin,
                "x": _matrix_entries(pair.x),
                "a": _matrix_entries(pair.a),
            }
            raise ViolationError(
                "bound violated at seed=%d index=%d: measured %.12e > bound %.12e"
                % (seed, i, measured, bound), payload)
        records.append(record)
    return records


def _eigh_box(H):
    # Hermitize and clip the spectrum to [0, 1]
    w, q = jacobi_eigh(np.ascontiguousarray((H + H.conj().T) / 2.0))
    return np.clip(w, 0.0, 1.0), q


def _bind_contraction(w, q, araw, delta_target):
    """A from raw material: rescale to a contraction, then shrink so the
    commutator constraint against H = q diag(w) q* binds when possible."""
    a = araw
    nrm = op_norm(a)
    if nrm > 1.0:
        a = a / nrm
    h = (q * w) @ q.conj().T
    dc = op_norm(commutator(h, a))
    if dc == 0.0:
        return None
    t = delta_target / dc
    if t <= 1.0:
        a = t * a
    return a


def _rand_value(w, q, araw, delta_target):
    a = _bind_contraction(w, q, araw, delta_target)
    if a is None:
        return 0.0
    root = (q * np.sqrt(w)) @ q.conj().T
    return op_norm(commutator(root, a))


def _pair_value(w, delta_target):
    """Closed-form value of the best eigenbasis swap A = s (q_i q_j* +
    q_j q_i*): with s binding the constraint it is
    min(1, dt/gap) * |sqrt(w_j) - sqrt(w_i)|."""
    n = len(w)
    r = np.sqrt(w)
    best = 0.0
    bi = bj = 0
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(w[i] - w[j])
            num = abs(r[i] - r[j])
            v = delta_target * num / gap if gap >= delta_target else num
            if v > best:
                best = v
                bi, bj = i, j
    return best, bi, bj


def _probe_score(hraw, araw, delta_target):
    """Composite objective of a raw state: the better of the feasible
    random instance and the best swap pair for the candidate spectrum."""
    w, q = _eigh_box(hraw)
    vr = _rand_value(w, q, araw, delta_target)
    vp, _, _ = _pair_value(w, delta_target)
    return max(vr, vp)


def _materialize_best(hraw, araw, delta_target):
    """Turn the winning raw state into actual matrices (H, A), picking
    whichever of the two candidate A's measures higher."""
    w, q = _eigh_box(hraw)
    h = (q * w) @ q.conj().T
    h = (h + h.conj().T) / 2.0
    root = (q * np.sqrt(w)) @ q.conj().T
    cands = []
    a_rand = _bind_contraction(w, q, araw, delta_target)
    if a_rand is not None:
        cands.append(a_rand)
    _, bi, bj = _pair_value(w, delta_target)
    gap = abs(w[bi] - w[bj])
    if gap > 0.0:
        s = min(1.0, delta_target / gap)
        qi = q[:, bi]
        qj = q[:, bj]
        cands.append(s * (np.outer(qi, qj.conj()) + np.outer(qj, qi.conj())))
    best = None
    best_v = -1.0
    for a in cands:
        v = op_norm(commutator(root, a))
        if v > best_v:
            best_v = v
            best = a
    return h, best, best_v


def probe_max_commutator(delta_target: float, dim: int, iters: int, seed: int,
                         restarts: int = 64, sigma0: float = 0.5,
                         stall_limit: int = 10) -> ProbeResult:
    """Random-restart hill climb maximizing ||[sqrt(H), A]|| subject to
    ||[H, A]|| <= delta_target.

    The climb walks raw complex matrices; evaluation projects H's spectrum
    to [0, 1], rescales A to a contraction, and shrinks A until the
    commutator constraint binds.  Each candidate is scored as the better
    of that feasible instance and the best eigenbasis swap pair for its
    spectrum, so proposals that improve the spectral pair structure are
    accepted even before a good A is found.  Equal scores are accepted
    (plateau drift); the step size grows 1.5x on improvement up to sigma0
    and halves after `stall_limit` rejected steps.  The best state is
    materialized into actual matrices and re-measured before reporting.
    """
    dt = float(delta_target)
    if not 0.0 < dt <= 1.0:
        raise ValueError("delta_target must lie in (0, 1]")
    dim = int(dim)
    _check_dim(dim)
    iters = int(iters)
    restarts = int(restarts)
    if iters < 1 or restarts < 1:
        raise ValueError("iters and restarts must be positive")
    steps_per = max(1, iters // restarts)
    best_v = -1.0
    best_raw = None
    total = 0
    for r in range(restarts):
        rng = stream(seed, r)
        hraw = _ginibre(rng, dim) * math.sqrt(2.0)
        araw = _ginibre(rng, dim) / math.sqrt(dim)
        v = _probe_score(hraw, araw, dt)
        sigma = sigma0
        stall = 0
        for _ in range(steps_per):
            total += 1
            which = int(rng.integers(0, 3))
            hc = hraw if which == 1 else \
                hraw + sigma * math.sqrt(2.0) * _ginibre(rng, dim)
            ac = araw if which == 0 else \
                araw + sigma * math.sqrt(2.0) * _ginibre(rng, dim)
            vc = _probe_score(hc, ac, dt)
            if vc >= v:
                if vc > v:
                    stall = 0
                    sigma = min(sigma * 1.5, sigma0)
                v = vc
                hraw, araw = hc, ac
            else:
                stall += 1
                if stall >= stall_limit:
                    sigma = max(sigma * 0.5, 1e-300)
                    stall = 0
        if v > best_v:
            best_v = v
            best_raw = (hraw, araw)
    h, a, measured = _materialize_best(best_raw[0], best_raw[1], dt)
    delta = op_norm(commutator(h, a))
    bound = math.sqrt(dt)
    record = SampleRecord(seed=int(seed), dim=dim, delta=delta,
                          measured=measured, bound=bound,
                          margin=bound - measured)
    return ProbeResult(record=record, gap=bound - measured, iterations=total,
                       restarts=restarts, h=h, a=a)
