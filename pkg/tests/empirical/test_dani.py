"""Dani frames, lattice reduction and systole traces."""

import numpy as np
import pytest
from mpmath import mp

from diophantine_exponents.common.exceptions import DimensionMismatchError, PreconditionError
from diophantine_exponents.empirical.dani import dani_frame, dani_systole, lll_reduce, shortest_vector
from diophantine_exponents.exponents.pencil import QuasiNorm

QV = QuasiNorm.uniform(2, "source")
QE = QuasiNorm.uniform(1, "target")
THETA = 2**0.5 - 1


def test_frame_of_a_row():
    frame = dani_frame(np.array([[1.0, THETA]]), QV, QE)
    assert frame.kernel_rows == [1]
    assert frame.image_rows == [1]
    np.testing.assert_allclose(frame.matrix, [[1.0, 0.0], [1.0, THETA]])
    assert frame.rates == [1.0, 1.0]
    assert not frame.ambiguous


def test_frame_of_zero_map_is_identity():
    frame = dani_frame(np.zeros((1, 2)), QV, QE)
    assert frame.kernel_dim == 2
    assert frame.image_rows == []
    np.testing.assert_allclose(frame.matrix, np.eye(2))


def test_frame_uses_weights():
    qv = QuasiNorm.of([2, 1], "source")
    frame = dani_frame(np.array([[0.0, 1.0]]), qv, QE)
    # e_1 completes the image row, so the kernel rate is the first weight
    assert frame.kernel_rows == [1]
    assert frame.rates == [2.0, 1.0]


def test_frame_shape_checked():
    with pytest.raises(DimensionMismatchError):
        dani_frame(np.eye(2), QV, QE)


def test_lll_finds_short_vector():
    with mp.workdps(30):
        basis = [[mp.mpf(1), mp.mpf(0)], [mp.mpf(100), mp.mpf(1)]]
        reduced = lll_reduce(basis)
        assert min(mp.sqrt(v[0] ** 2 + v[1] ** 2) for v in reduced) == 1
        assert shortest_vector(basis) == 1


def test_systole_bounded_above_the_exponent():
    grid = [float(t) for t in np.linspace(0, 25, 26)]
    trace = dani_systole(np.array([[1.0, THETA]]), QV, QE, 1.3, grid)
    assert len(trace.systole) == 26
    assert min(trace.systole) >= 0.1 * trace.systole[0]


def test_systole_decays_below_the_exponent():
    grid = [float(t) for t in np.linspace(0, 25, 26)]
    trace = dani_systole(np.array([[1.0, THETA]]), QV, QE, 0.7, grid)
    assert min(trace.systole) < 0.1 * trace.systole[0]
    assert trace.to_csv().splitlines()[0] == "t,systole"


def test_systole_arguments_validated():
    with pytest.raises(PreconditionError):
        dani_systole(np.array([[1.0, THETA]]), QV, QE, 0.0, [0.0])
    with pytest.raises(PreconditionError):
        dani_systole(np.array([[1.0, THETA]]), QV, QE, 1.0, [0.0], radius=0)
