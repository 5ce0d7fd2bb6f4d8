import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracwiener import (
    PauliPair,
    TimeGrid,
    clifford_jump,
    clifford_path,
    clifford_square,
    identity,
    increments,
    path_from_increments,
    pauli,
    squared_jump_decomposition,
)
from fracwiener.clifford import recover_brownian_clifford
from fracwiener.fracpower import sqrt_rep_coefficient

DT = 2.0**-8
MU = 30.0
PAIRS = [p for p in itertools.permutations((1, 2, 3), 2)]


def matmul2(a, b):
    return [[a[r][0] * b[0][c] + a[r][1] * b[1][c] for c in range(2)] for r in range(2)]


def test_pauli_squares_and_anticommutators():
    for n in (1, 2, 3):
        assert np.array_equal(pauli(n) @ pauli(n), identity())
    for i, k in PAIRS:
        assert np.array_equal(pauli(i) @ pauli(k) + pauli(k) @ pauli(i), np.zeros((2, 2)))
    assert np.array_equal(pauli(1) @ pauli(2), 1j * pauli(3))


def test_pauli_index_validation():
    for bad in (0, 4, "x", None):
        with pytest.raises(ValueError):
            pauli(bad)
    with pytest.raises(ValueError):
        PauliPair(2, 2)
    with pytest.raises(ValueError):
        PauliPair(1, 4)


def test_pauli_is_a_copy():
    p = pauli(1)
    p[0, 0] = 5
    assert pauli(1)[0, 0] == 0


def test_jump_square_against_explicit_product():
    e = clifford_jump(0.05, MU, DT, (1, 2))
    sq = matmul2(e.tolist(), e.tolist())
    assert abs(sq[0][0] - 0.05) < 1e-4 and abs(sq[1][1] - 0.05) < 1e-4
    assert sq[0][1] == 0 and sq[1][0] == 0
    assert np.array_equal(clifford_square(e), np.array(sq))


def test_scalar_coefficient_is_shared():
    # coefficient of sigma_i is c * Phi, identical to the scalar scheme
    for dw in (0.05, -0.05, 0.0):
        e = clifford_jump(dw, MU, DT, (1, 2))
        comp = np.trace(pauli(1) @ e) / 2
        phi = 1 if dw >= 0 else 1j
        assert comp == sqrt_rep_coefficient(abs(dw), MU, DT) * phi


def test_pair_swap_changes_matrix_not_square():
    a = clifford_jump(0.05, MU, DT, (1, 2))
    b = clifford_jump(0.05, MU, DT, (2, 1))
    assert not np.array_equal(a, b)
    assert np.diag(clifford_square(a)) == pytest.approx(np.diag(clifford_square(b)), abs=1e-12)


def test_zero_increment_zero_dt_squares_to_zero():
    sq = clifford_square(clifford_jump(0.0, MU, 0.0, (1, 2)))
    assert np.array_equal(sq, np.zeros((2, 2)))


@settings(max_examples=300)
@given(st.floats(-0.5, 0.5), st.sampled_from(PAIRS))
def test_square_is_dw_plus_residual(dw, pair):
    sq = clifford_square(clifford_jump(dw, MU, DT, pair))
    r = squared_jump_decomposition(dw, MU, DT).residual
    assert abs(sq[0, 1]) <= 1e-12 and abs(sq[1, 0]) <= 1e-12
    assert abs(sq[0, 0] - sq[1, 1]) <= 1e-12
    assert abs(sq[0, 0].real - dw - r) <= 1e-12
    assert abs(sq[0, 0].imag) <= 1e-12
    # the scalar scheme carries mu0**2 * sgn, the algebra-valued one does not
    assert abs(sq[0, 0].real - dw) < 1e-4


def test_diagonal_independent_of_pair(rng):
    dw = rng.normal(0, np.sqrt(DT), 1000)
    diags = [clifford_square(clifford_jump(dw, MU, DT, p))[:, 0, 0] for p in PAIRS]
    for d in diags[1:]:
        assert np.max(np.abs(d - diags[0])) <= 1e-12


def test_path_single_step():
    w = path_from_increments([0.04], TimeGrid(1.0, 1))
    e = clifford_path(w, MU)
    assert len(e) == 1
    assert np.array_equal(e.values[0], clifford_jump(0.04, MU, 1.0))


def test_path_zero_stream(grid):
    w = path_from_increments(np.zeros(grid.steps), grid)
    e = clifford_path(w, MU, (1, 3))
    expected = pauli(1) * (MU - DT / (8 * MU**3)) + 1j * pauli(3) * MU
    assert np.allclose(np.diff(e.values, axis=0), expected, rtol=0, atol=1e-10)
    assert np.array_equal(e.values[0], expected)


def test_path_recovers_terminal_value(path):
    e = clifford_path(path, MU)
    rec = recover_brownian_clifford(e)
    assert abs(rec.values[-1] - path.values[-1]) <= path.grid.steps * 1e-4
    assert np.max(np.abs(increments(rec) - increments(path))) < 1e-4
