import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import small_fraction
from qchn.projectors import antisymmetrizer
from qchn.rmatrix import permutation_op, standard_rhat
from qchn.scalars import Q, PoleError, ScalarQ
from qchn.tensorspace import (
    TensorOp,
    compose,
    digits,
    embed,
    embed_pair,
    exact_rank,
    from_digits,
    generic_rank,
    identity_op,
    partial_trace,
    weighted_partial_trace,
    zero_op,
)

P2 = permutation_op(2)


@st.composite
def sparse_ops(draw, n=2, k=2, symbolic=False):
    dim = n ** k
    coeff = small_fraction
    if symbolic:
        coeff = st.builds(lambda c, e: c * Q ** e, small_fraction, st.integers(-2, 2))
    ents = draw(st.dictionaries(st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1)), coeff, max_size=8))
    return TensorOp(n, k, {rc: ScalarQ(v) if not isinstance(v, ScalarQ) else v for rc, v in ents.items()})


def basis_image(op, idx):
    return {r: v for (r, c), v in op.entries.items() if c == idx}


def test_digits_convention():
    assert digits(from_digits((1, 0, 1), 2), 2, 3) == (1, 0, 1)
    assert from_digits((1, 0), 3) == 3  # factor 1 is the most significant digit


def test_compose_and_add_examples():
    x = standard_rhat(2)
    assert compose(identity_op(2, 2), x) == x
    assert compose(P2, P2) == identity_op(2, 2)
    assert (x + x.scale(-1)).is_zero()
    with pytest.raises(ValueError):
        compose(identity_op(2, 2), identity_op(3, 2))


def test_entries_range_checked():
    with pytest.raises(IndexError):
        TensorOp(2, 1, {(2, 0): 1})


def test_embed_pair_examples():
    r = standard_rhat(2)
    assert embed_pair(r, 1, 2) == r
    # flip factors 1,2 first, then 2,3
    cyc = embed_pair(P2, 2, 3) @ embed_pair(P2, 1, 3)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                img = basis_image(cyc, from_digits((a, b, c), 2))
                assert img == {from_digits((b, c, a), 2): 1}
    with pytest.raises(ValueError):
        embed_pair(r, 3, 3)
    with pytest.raises(ValueError):
        embed_pair(r, 0, 3)


def test_far_embeddings_commute():
    r = standard_rhat(2)
    a, b = embed_pair(r, 1, 4), embed_pair(r, 3, 4)
    assert a @ b == b @ a


def test_partial_trace_examples():
    for n in (1, 2, 3):
        assert partial_trace(identity_op(n, 2), {2}) == identity_op(n, 1).scale(n)
        assert partial_trace(permutation_op(n), {2}) == identity_op(n, 1)
        assert partial_trace(identity_op(n, 3), {1, 2, 3}) == n ** 3
    assert partial_trace(zero_op(2, 2), {1, 2}) == 0
    with pytest.raises(ValueError):
        partial_trace(identity_op(2, 2), {3})


def test_weighted_partial_trace_examples():
    d = TensorOp(2, 1, {(0, 0): Q ** -3, (1, 1): Q ** -1})
    x = standard_rhat(2)
    assert weighted_partial_trace(x, identity_op(2, 1), {2}) == partial_trace(x, {2})
    assert weighted_partial_trace(identity_op(2, 1), d, {1}) == d.trace()


@given(sparse_ops(k=3))
def test_weighted_trace_matches_dense_oracle(x):
    w = TensorOp(2, 1, {(0, 0): Fraction(2), (0, 1): Fraction(-1, 3), (1, 1): Fraction(5)})
    got = weighted_partial_trace(x, w, {1, 3})
    # dense oracle: sum over traced digits of (W_1 W_3 x)
    full = embed(w, 1, 3) @ embed(w, 3, 3) @ x
    dense = full.to_dense()
    for a in range(2):
        for b in range(2):
            want = sum(dense[from_digits((i, a, j), 2)][from_digits((i, b, j), 2)] for i in range(2) for j in range(2))
            assert got[(a, b)] == want


@given(sparse_ops(k=3), st.sampled_from([({1}, {3}), ({2}, {1}), ({3}, {1, 2})]))
def test_partial_traces_commute(x, sets):
    a, b = sets
    rest = sorted(set(range(1, 4)) - a)
    b_after = {rest.index(p) + 1 for p in b}
    one = partial_trace(partial_trace(x, a), b_after)
    rest_b = sorted(set(range(1, 4)) - b)
    a_after = {rest_b.index(p) + 1 for p in a}
    two = partial_trace(partial_trace(x, b), a_after)
    assert one == two == partial_trace(x, a | b)


@given(sparse_ops(symbolic=True), sparse_ops(symbolic=True))
def test_trace_cyclicity(x, y):
    assert partial_trace(x @ y, {1, 2}) == partial_trace(y @ x, {1, 2})


@given(sparse_ops(), sparse_ops(), sparse_ops())
def test_compose_associative_and_linear(x, y, z):
    assert (x @ y) @ z == x @ (y @ z)
    assert x @ (y + z) == x @ y + x @ z


def test_generic_rank_examples():
    assert generic_rank(identity_op(2, 2), [Fraction(2)]) == 4
    assert generic_rank(zero_op(2, 2), [Fraction(2)]) == 0
    classical = antisymmetrizer(permutation_op(2, Fraction(1)), 2, Fraction(1))
    assert generic_rank(classical, [Fraction(1)]) == 1
    pole = TensorOp(1, 1, {(0, 0): 1 / (Q - 2)})
    skipped = []
    assert generic_rank(pole, [Fraction(2), Fraction(3)], skipped) == 1
    assert skipped == [Fraction(2)]
    with pytest.raises(PoleError):
        generic_rank(pole, [Fraction(2)])


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[Fraction(1, 2), 0], [0, Fraction(1, 3)]]) == 2
    assert exact_rank([]) == 0


@given(sparse_ops(symbolic=True))
def test_json_round_trip(x):
    text = x.dumps()
    data = json.loads(text)
    assert data["index_convention"]
    assert TensorOp.loads(text) == x
