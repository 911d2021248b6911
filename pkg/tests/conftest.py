"""Shared fixtures.

The heavyweight objects (truncation envelopes, the square-root envelope)
are built once per session; tests treat them as read-only.
"""

import pytest

import commbound as cb


@pytest.fixture(scope="session")
def triangle():
    return cb.builtin_triangle()


@pytest.fixture(scope="session")
def bump():
    return cb.builtin_bump()


@pytest.fixture(scope="session")
def triangle_envelope(triangle):
    return cb.truncation_envelope(triangle, 16)


@pytest.fixture(scope="session")
def gamma_small():
    # reduced resolution keeps unit tests quick; acceptance uses the defaults
    return cb.gamma0(N_max=2000, a_grid=256)
