import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from qchn.chn import algebra
from qchn.classical import (
    as_matrix,
    classical_chn_check,
    classical_demo,
    classical_newton_check,
    classical_symfun,
    elem_from_traces,
    faddeev_leverrier,
    identity,
    matmul,
    random_matrix,
    specialize_quantum,
    tensor_power,
)
from qchn.rmatrix import HeckeData

ZERO2 = [[0, 0], [0, 0]]


def brute_det(m):
    n = len(m)
    total = Fraction(0)
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


def test_identity_matrix():
    s, e, h = classical_symfun(identity(2), 2)
    assert s == [2, 2, 2]
    assert e == [1, 2, 1]
    assert h == [1, 2, 3]


def test_diagonal():
    s, e, h = classical_symfun([[1, 0], [0, 2]], 4)
    assert s[2] == 5
    assert e[2] == 2 == (e[1] * s[1] - s[2]) / 2
    assert e[3] == e[4] == 0
    assert h[2] == 1 + 2 + 4


def test_bound_limit():
    with pytest.raises(ValueError):
        classical_symfun(identity(2), 5)


def test_wedge_square_of_identity():
    assert tensor_power(identity(2), 2) == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]
    assert classical_chn_check(identity(2), 2)["le"] == ZERO2


def test_cayley_hamilton_at_height():
    x = as_matrix([[1, 2], [3, 4]])
    s, e, _ = classical_symfun(x)
    ch = [[a - e[1] * b + e[2] * c for a, b, c in zip(ra, rb, rc)]
          for ra, rb, rc in zip(matmul(x, x), x, identity(2))]
    assert ch == ZERO2
    assert all(v == 0 for row in classical_chn_check(x, 2)["le"] for v in row)


@settings(max_examples=25)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_random_matrices(n, seed):
    x = random_matrix(n, random.Random(seed))
    c = faddeev_leverrier(x)
    assert c[0] == (-1) ** n * brute_det(x)
    _, e, _ = classical_symfun(x)
    for k in range(n + 1):
        assert elem_from_traces(x, k) == e[k]
    for j in range(1, n + 2):
        for res in classical_chn_check(x, j).values():
            assert all(v == 0 for row in res for v in row)
        assert all(v == 0 for v in classical_newton_check(x, j).values())


def test_j_range():
    with pytest.raises(ValueError):
        classical_chn_check(identity(2), 4)
    with pytest.raises(ValueError):
        classical_chn_check(identity(2), 0)


def test_quantum_to_classical():
    a = algebra(HeckeData.classical(2), "rtt")
    x = [[1, 0], [0, 2]]
    assert specialize_quantum(a.elem_sym(2), x) == 2
    assert specialize_quantum(a.power_sum(3), x) == 9
    with pytest.raises(ValueError):
        specialize_quantum(a.generators(), [[1]])
    with pytest.raises(TypeError):
        specialize_quantum("T", x)


def test_demo_report():
    rep = classical_demo(3, 12, seed=7)
    assert rep == classical_demo(3, 12, seed=7)
    assert rep["verdict"] == "holds"
    assert len(rep["results"]) == 12
    assert {r["n"] for r in rep["results"]} == {1, 2, 3}
    assert all(v == "0" for r in rep["results"] for v in r["residuals"].values())
    with pytest.raises(ValueError):
        classical_demo(0, 1)
