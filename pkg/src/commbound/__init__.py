"""Certified bound curves for commutator norms of matrix functions.

Given delta = ||[X, A]||, the package bounds ||[f(X), A]|| from above by
envelopes of affine bounds and from below by constructive witnesses, for
periodic f of a unitary X and for f on [0, 1] of a positive contraction,
including the piecewise-linear envelope gamma0 for f(x) = sqrt(x).  A
random-matrix lab validates every emitted bound.
"""

from ._backend import BACKEND, HAVE_NUMBA
from .periodic_fn import (
    PeriodicFunction,
    TrigPolynomial,
    QuadratureError,
    builtin_bump,
    builtin_triangle,
    chebyshev_radius,
    coefficient_l1,
    derivative_fourier_norm,
    evaluate,
    fourier_coefficient,
    fourier_coefficient_estimate,
    from_coefficients,
    range_extent,
    truncate,
)
from .circle_bounds import (
    BoundCurve,
    BoundLine,
    constant_cap,
    continuity_bound,
    eta_lower,
    folk_line,
    split_line,
    truncation_envelope,
)
from .positive_bounds import (
    PowerSeries,
    SqrtEnvelope,
    TangentParam,
    gamma0,
    pedersen_envelope,
    pedersen_line,
    power_series_line,
    reflect_function,
    reflect_instance,
    sqrt_series,
    tangent_line,
)
from .matrix_lab import (
    DecompositionError,
    InstancePair,
    ProbeResult,
    SampleRecord,
    ViolationError,
    block_offdiag,
    block_pair,
    commutator,
    haar_unitary,
    hermitian_calculus,
    instance_pair,
    lower_bound_instance,
    op_norm,
    probe_max_commutator,
    random_contraction,
    random_positive_contraction,
    sample_sweep,
    stream,
    unitary_calculus,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "PeriodicFunction",
    "TrigPolynomial",
    "QuadratureError",
    "builtin_bump",
    "builtin_triangle",
    "chebyshev_radius",
    "coefficient_l1",
    "derivative_fourier_norm",
    "evaluate",
    "fourier_coefficient",
    "fourier_coefficient_estimate",
    "from_coefficients",
    "range_extent",
    "truncate",
    "BoundCurve",
    "BoundLine",
    "constant_cap",
    "continuity_bound",
    "eta_lower",
    "folk_line",
    "split_line",
    "truncation_envelope",
    "PowerSeries",
    "SqrtEnvelope",
    "TangentParam",
    "gamma0",
    "pedersen_envelope",
    "pedersen_line",
    "power_series_line",
    "reflect_function",
    "reflect_instance",
    "sqrt_series",
    "tangent_line",
    "DecompositionError",
    "InstancePair",
    "ProbeResult",
    "SampleRecord",
    "ViolationError",
    "block_offdiag",
    "block_pair",
    "commutator",
    "haar_unitary",
    "hermitian_calculus",
    "instance_pair",
    "lower_bound_instance",
    "op_norm",
    "probe_max_commutator",
    "random_contraction",
    "random_positive_contraction",
    "sample_sweep",
    "stream",
    "unitary_calculus",
    "__version__",
]
