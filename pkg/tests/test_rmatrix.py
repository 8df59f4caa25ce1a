import json
from fractions import Fraction

import pytest

from qchn.rmatrix import (
    HeckeData,
    HeckeError,
    check_hecke,
    check_ybe,
    compute_height,
    d_matrices,
    load_rmatrix,
    permutation_op,
    rhat_inverse,
    standard_rhat,
)
from qchn.scalars import Q, qnum, specialize
from qchn.tensorspace import TensorOp, from_digits, identity_op, partial_trace

ONE = Fraction(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_rhat_is_hecke(n):
    r = standard_rhat(n)
    assert check_ybe(r).is_zero()
    assert check_hecke(r).is_zero()


def test_standard_rhat_small_cases():
    assert standard_rhat(1) == TensorOp(1, 2, {(0, 0): Q})
    for n in (2, 3):
        assert standard_rhat(n).map(specialize(1)) == permutation_op(n, ONE)
        assert standard_rhat(n, ONE) == permutation_op(n, ONE)


def test_permutation_op():
    p = permutation_op(2)
    assert p[(from_digits((1, 0), 2), from_digits((0, 1), 2))] == 1
    assert p @ p == identity_op(2, 2)
    assert check_hecke(permutation_op(2, ONE), ONE).is_zero()
    assert check_ybe(permutation_op(3)).is_zero()
    assert not check_hecke(permutation_op(2)).is_zero()


def test_ybe_detects_asymmetric_perturbation():
    ent = dict(identity_op(2, 2).entries)
    ent[(from_digits((0, 0), 2), from_digits((0, 1), 2))] = Q ** 0
    assert not check_ybe(TensorOp(2, 2, ent)).is_zero()


def test_inverse():
    assert rhat_inverse(standard_rhat(1)) == TensorOp(1, 2, {(0, 0): Q ** -1})
    assert rhat_inverse(permutation_op(2, ONE), ONE) == permutation_op(2, ONE)
    for n in (2, 3):
        r = standard_rhat(n)
        inv = rhat_inverse(r)
        assert r @ inv == identity_op(n, 2) == inv @ r
    with pytest.raises(HeckeError):
        rhat_inverse(permutation_op(2))


def test_height():
    assert compute_height(standard_rhat(1)) == 1
    assert compute_height(standard_rhat(2)) == 2
    ranks = []
    assert compute_height(standard_rhat(3), ranks=ranks) == 3
    assert ranks == [3, 3, 1]
    ranks = []
    assert compute_height(permutation_op(3, ONE), q=ONE, ranks=ranks) == 3
    assert ranks == [3, 3, 1]
    with pytest.raises(HeckeError, match="not even"):
        compute_height(standard_rhat(3), max_k=2)


@pytest.mark.parametrize("q0", [Fraction(2), Fraction(3, 7), Fraction(11, 5)])
def test_height_stable_across_samples(q0):
    assert HeckeData.standard(3).specialize(q0).ensure_height() == 3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_d_matrices_trace(n):
    d_r, d_l = d_matrices(standard_rhat(n), n)
    want = qnum(n) * Q ** -n
    assert d_r.trace() == want
    assert d_l.trace() == want


def test_d_matrices_values():
    d_r, d_l = d_matrices(standard_rhat(1), 1)
    assert d_r == d_l == TensorOp(1, 1, {(0, 0): Q ** -1})
    d_r, d_l = d_matrices(standard_rhat(3), 3)
    assert d_r == TensorOp(3, 1, {(0, 0): Q ** -5, (1, 1): Q ** -3, (2, 2): Q ** -1})
    assert d_l == TensorOp(3, 1, {(0, 0): Q ** -1, (1, 1): Q ** -3, (2, 2): Q ** -5})
    for n in (1, 2, 3):
        hd = HeckeData.classical(n)
        d_r, d_l = hd.ensure_d()
        assert d_r == d_l == identity_op(n, 1, ONE)
    with pytest.raises(HeckeError):
        d_matrices(standard_rhat(2), None)


def test_hecke_data_roundtrip(tmp_path):
    hd = HeckeData.standard(2)
    path = tmp_path / "r.json"
    path.write_text(json.dumps(hd.to_json_dict()))
    loaded = load_rmatrix(path)
    assert loaded.rhat == hd.rhat
    assert loaded.name == "standard-2"
    assert loaded.is_hecke()
    bad = tmp_path / "k3.json"
    bad.write_text(json.dumps(identity_op(2, 3).to_json_dict()))
    with pytest.raises(ValueError):
        load_rmatrix(bad)


def test_inverse_is_cached():
    hd = HeckeData.standard(2)
    assert hd.inverse() is hd.inverse()
