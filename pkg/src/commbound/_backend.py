"""Kernel backend selection.

COMMBOUND_BACKEND picks the implementation of the hot kernels:
"numba" (the default whenever numba imports) or "numpy" for the pure
fallback path.  COMMBOUND_THREADS caps the numba thread pool; it is read
once at import time.
"""

import os

_REQUESTED = os.environ.get("COMMBOUND_BACKEND", "auto").strip().lower()
_THREADS = os.environ.get("COMMBOUND_THREADS", "").strip()

if _REQUESTED not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        "COMMBOUND_BACKEND must be 'numba' or 'numpy', got %r" % (_REQUESTED,)
    )

HAVE_NUMBA = False
njit = None

if _REQUESTED in ("auto", "numba"):
    try:
        import numba as _numba
        from numba import njit as _njit
    except ImportError:
        if _REQUESTED == "numba":
            raise RuntimeError("COMMBOUND_BACKEND=numba but numba is not importable")
    else:
        HAVE_NUMBA = True
        njit = _njit
        if _THREADS:
            try:
                _cap = int(_THREADS)
            except ValueError:
                raise RuntimeError(
                    "COMMBOUND_THREADS must be an integer, got %r" % (_THREADS,)
                )
            _cap = max(1, min(_cap, _numba.config.NUMBA_NUM_THREADS))
            _numba.set_num_threads(_cap)

BACKEND = "numba" if HAVE_NUMBA else "numpy"
