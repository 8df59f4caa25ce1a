import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qchn.chn import (
    FAMILIES,
    algebra,
    ch_residual,
    chn_residual,
    commutativity_residual,
    identity_id,
    inverse_residual,
    newton_residual,
    qdet_residual,
    re_chn_residual,
    residual,
    verify,
)
from qchn.classical import classical_symfun, matpow, random_matrix, specialize_quantum
from qchn.qma import InsufficientSamplesError, NCPoly, generator_matrix
from qchn.rmatrix import HeckeData
from qchn.scalars import Q, sample_points
from qchn.tensorspace import TensorOp

SAMPLES = sample_points(3, seed=0)
HD = {n: HeckeData.standard(n) for n in (1, 2, 3)}
T1 = NCPoly.word([0])


def rtt(n):
    return algebra(HD[n], "rtt")


def re(n):
    return algebra(HD[n], "re")


def mtrace(m: TensorOp) -> NCPoly:
    return sum((m[(i, i)] for i in range(m.dim) if (i, i) in m.entries), NCPoly())


def is_free_zero(res) -> bool:
    if isinstance(res, NCPoly):
        return not res
    return res.is_zero()


# -- ingredients ----------------------------------------------------------


def test_n1_hand_values():
    a = rtt(1)
    for k in range(1, 5):
        assert a.power_sum(k) == NCPoly.word([0] * k, Q ** (k - 1))
    assert a.elem_sym(1) == NCPoly.word([0], Q)
    assert a.compl_sym(1) == NCPoly.word([0], Q ** -1)
    assert a.elem_sym(0) == a.compl_sym(0) == a.power_sum(0) == NCPoly.const(1)
    assert re(1).elem_sym(1) == T1


def test_elem_sym_vanishes_above_height():
    for n in (1, 2):
        assert not rtt(n).elem_sym(n + 1)
        assert rtt(n).wedge_power(n + 1, "under").is_zero()
        assert rtt(n).wedge_power(n + 1, "over").is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_power_definitions(n):
    a = rtt(n)
    t = generator_matrix(n)
    for side in ("under", "over"):
        assert a.mat_power(1, side) == t
        assert a.wedge_power(1, side) == t
        assert a.sym_power(1, side) == t
    for k in (1, 2, 3):
        assert mtrace(a.mat_power(k, "under")) == a.power_sum(k)
        assert mtrace(a.mat_power(k, "over")) == a.power_sum(k)
        assert mtrace(a.wedge_power(k, "under")) == Q ** -k * a.elem_sym(k)
        assert mtrace(a.sym_power(k, "under")) == Q ** k * a.compl_sym(k)
        for side in ("under", "over"):
            for build in (a.mat_power, a.wedge_power, a.sym_power):
                m = build(k, side)
                assert all(p.is_homogeneous(k) for p in m.entries.values())


def test_re_ingredients_low_degree():
    b = re(2)
    assert b.wedge_power(1) == b.sym_power(1) == b.power(1) == generator_matrix(2)
    assert b.power(3) == b.power(1) @ b.power(1) @ b.power(1)
    assert mtrace(b.wedge_power(2)) != 0


# -- free-algebra zeros ------------------------------------------------------


@pytest.mark.parametrize("variant", FAMILIES["rtt"]["chn"])
def test_chn_degree_one_is_free_zero(variant):
    assert chn_residual(rtt(2), 1, variant).is_zero()
    assert inverse_residual(rtt(2), 1, "inv" + {"le": "1", "le2": "2", "le3": "3", "le4": "4"}[variant]).is_zero()


def test_n1_free_zero_identities():
    a, b = rtt(1), re(1)
    assert chn_residual(a, 2, "le").is_zero()
    assert not newton_residual(a, 1, "qNewton")
    for v in ("hc1", "hc2"):
        assert ch_residual(a, v).is_zero()
    assert qdet_residual(a).is_zero()
    for v in ("wedge", "sym"):
        assert re_chn_residual(b, 1, v).is_zero()
        assert re_chn_residual(b, 2, v).is_zero()


def test_commute_same_degree_is_free_zero():
    for k in (1, 2, 3):
        assert not commutativity_residual(rtt(2), k, k)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_residuals_are_homogeneous(j):
    a = rtt(2)
    for fam in ("chn", "inverse"):
        for v in FAMILIES["rtt"][fam]:
            res = residual(a, fam, v, j)
            assert all(p.is_homogeneous(j) for p in res.entries.values())
    for v in FAMILIES["rtt"]["newton"]:
        assert newton_residual(a, j, v).is_homogeneous(j)


# -- trace compatibility and symmetry ----------------------------------------


@pytest.mark.parametrize("n,j", [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_trace_of_chn_residual_is_newton_residual(n, j):
    a = rtt(n)
    assert mtrace(chn_residual(a, j, "le")) == newton_residual(a, j, "qNewton")


def test_symbolic_route_spot_check():
    a = rtt(2)
    gq = a.relations().quotient()
    for j in (2, 3):
        for v in FAMILIES["rtt"]["chn"]:
            res = chn_residual(a, j, v)
            assert all(gq.contains(p.terms) for p in res.entries.values())
    bad = chn_residual(a, 2, "le", flip_side=True)
    assert not all(gq.contains(p.terms) for p in bad.entries.values())


# -- classical specialization -------------------------------------------------


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_specialization_functor(seed):
    rng = random.Random(seed)
    n = 2
    x = random_matrix(n, rng)
    a = algebra(HeckeData.classical(n), "rtt")
    s, e, h = classical_symfun(x, 3)
    for k in (1, 2, 3):
        assert specialize_quantum(a.power_sum(k), x) == s[k]
        assert specialize_quantum(a.elem_sym(k), x) == e[k]
        assert specialize_quantum(a.compl_sym(k), x) == h[k]
        for side in ("under", "over"):
            assert specialize_quantum(a.mat_power(k, side), x) == matpow(x, k)
    zero = [[0] * n for _ in range(n)]
    for fam, variants in FAMILIES["rtt"].items():
        for v in variants:
            for j in (1, 2, 3):
                res = residual(a, fam, v, j, 1 if fam == "commute" else None)
                if fam == "qdet":
                    assert all(specialize_quantum(p, x) == 0 for p in res.entries.values())
                else:
                    got = specialize_quantum(res, x)
                    assert got == (0 if isinstance(res, NCPoly) else zero)
    b = algebra(HeckeData.classical(n), "re")
    for v in ("wedge", "sym"):
        for j in (1, 2, 3):
            assert specialize_quantum(re_chn_residual(b, j, v), x) == zero


def test_qdet_classical_specialization():
    a = algebra(HeckeData.classical(2), "rtt")
    x = [[Fraction(2), Fraction(3)], [Fraction(-1), Fraction(5, 2)]]
    res = qdet_residual(a)
    for p in res.entries.values():
        assert specialize_quantum(p, x) == 0
    assert specialize_quantum(a.elem_sym(2), x) == Fraction(2 * 5, 2) + 3


def test_specialize_rejects_generic_q():
    with pytest.raises(ValueError):
        specialize_quantum(T1, [[1]], q0=2)


# -- certificates ---------------------------------------------------------------


def test_flagship():
    cert = verify(HD[2], "rtt", "chn", "le", 2, SAMPLES)
    assert cert.holds
    assert cert.identity == "standard-2/rtt/chn/le/j=2"
    assert cert.params["j"] == 2 and cert.params["n"] == 2
    assert len(cert.samples) == 3


def test_wrong_side_fails_with_coordinates():
    cert = verify(HD[2], "rtt", "chn", "le", 2, SAMPLES, flip_side=True)
    assert cert.verdict == "fails"
    assert cert.identity.endswith("/flip_side")
    assert {tuple(f["entry"]) for f in cert.failures} <= {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert cert.failures


@pytest.mark.parametrize("variant", FAMILIES["rtt"]["inverse"])
def test_dropped_q_power_fails(variant):
    assert verify(HD[2], "rtt", "inverse", variant, 2, SAMPLES, drop_q_power=True).verdict == "fails"


@pytest.mark.parametrize("n", [2, 3])
def test_swapped_d_fails(n):
    for v in ("hc1", "hc2"):
        assert verify(HD[n], "rtt", "ch", v, samples=SAMPLES, swap_d=True).verdict == "fails"


def test_re_wrong_side_still_holds():
    # sigma_k(L) is central in the RE algebra, so the side does not matter there
    assert verify(HD[2], "re", "chn", "wedge", 2, SAMPLES, flip_side=True).holds


def test_too_few_samples():
    with pytest.raises(InsufficientSamplesError):
        verify(HD[2], "rtt", "chn", "le", 2, SAMPLES[:2])


def test_unknown_identity():
    with pytest.raises(ValueError):
        verify(HD[2], "re", "newton", "qNewton", 1, SAMPLES)


def test_identity_ids():
    assert identity_id("rtt", "chn", "le", 2, flip_side=True) == "rtt/chn/le/j=2/flip_side"
    assert identity_id("rtt", "commute", "commute", 1, 2) == "rtt/commute/commute/k=1,l=2"
    assert identity_id("rtt", "ch", "hc1", None) == "rtt/ch/hc1"
