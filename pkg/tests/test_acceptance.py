"""Acceptance criteria 1-11, exact arithmetic, with wall-clock limits.

Run under pytest (a summary line per criterion is printed at the end) or
directly with ``python tests/test_acceptance.py``.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qchn.chn import FAMILIES, algebra, chn_residual, newton_residual, verify
from qchn.classical import classical_demo
from qchn.qma import NCPoly
from qchn.cli import perturbed_standard
from qchn.projectors import antisymmetrizer, clear_cache, resolvent_check, symmetrizer
from qchn.rmatrix import HeckeData, check_hecke, check_ybe, permutation_op, standard_rhat
from qchn.scalars import Q, qnum, sample_points, specialize
from qchn.tensorspace import generic_rank, identity_op

ONE = Fraction(1)
SAMPLES = sample_points(3, seed=0)
RANK_SAMPLES = sample_points(3, seed=1)
RESULTS: dict = {}


def holds(hd, kind, family, variant, j=1, l=None, **controls):
    cert = verify(hd, kind, family, variant, j, SAMPLES, l=l, **controls)
    assert len(cert.samples) >= 3
    return cert.holds


def c1():
    for n in (1, 2, 3):
        r = standard_rhat(n)
        assert check_ybe(r).is_zero()
        assert check_hecke(r).is_zero()
        assert r.map(specialize(1)) == permutation_op(n, ONE)


def c2():
    for n in (2, 3):
        r = standard_rhat(n)
        for k in range(1, n + 2):
            a, s = antisymmetrizer(r, k), symmetrizer(r, k)
            assert a @ a == a and s @ s == s
            if k >= 2:
                assert (a @ s).is_zero()
        top = antisymmetrizer(r, n)
        assert top.trace() == 1
        assert generic_rank(top, RANK_SAMPLES) == 1
        assert antisymmetrizer(r, n + 1).is_zero()
        for k in range(1, n + 1):
            assert resolvent_check(r, k).is_zero()


def c3():
    for n in (2, 3):
        d_r, d_l = HeckeData.standard(n).ensure_d()
        want = qnum(n) * Q ** -n
        assert d_r.trace() == want and d_l.trace() == want
        d_r, d_l = HeckeData.classical(n).ensure_d()
        assert d_r == d_l == identity_op(n, 1, ONE)


def c4_n2():
    hd = HeckeData.standard(2)
    assert all(holds(hd, "rtt", "chn", v, j) for v in FAMILIES["rtt"]["chn"] for j in (1, 2, 3))


def c4_n3():
    hd = HeckeData.standard(3)
    assert all(holds(hd, "rtt", "chn", v, j) for v in FAMILIES["rtt"]["chn"] for j in (1, 2, 3))


def c5():
    for n, top in ((2, 4), (3, 3)):
        hd = HeckeData.standard(n)
        assert all(holds(hd, "rtt", "newton", v, j) for v in FAMILIES["rtt"]["newton"] for j in range(1, top + 1))
        alg = algebra(hd, "rtt")
        for j in range(1, top + 1):
            res = chn_residual(alg, j, "le")
            tr = sum((res[(i, i)] for i in range(n) if (i, i) in res.entries), NCPoly())
            assert tr == newton_residual(alg, j, "qNewton")


def c6():
    for n in (2, 3):
        hd = HeckeData.standard(n)
        assert holds(hd, "rtt", "ch", "hc1") and holds(hd, "rtt", "ch", "hc2")
        assert holds(hd, "rtt", "qdet", "qdet")


def c7():
    hd = HeckeData.standard(2)
    assert all(holds(hd, "rtt", "inverse", v, j) for v in FAMILIES["rtt"]["inverse"] for j in (1, 2, 3))


def c8():
    hd = HeckeData.standard(2)
    assert all(holds(hd, "re", "chn", v, j) for v in ("wedge", "sym") for j in (1, 2, 3))


def c9():
    hd = HeckeData.standard(2)
    assert all(holds(hd, "rtt", "commute", "commute", k, l) for k in (1, 2, 3) for l in (1, 2, 3))


def c10():
    rep = classical_demo(4, 200, seed=0)
    assert rep["verdict"] == "holds"
    assert all(v == "0" for r in rep["results"] for v in r["residuals"].values())
    assert all(r["e_k_match"] for r in rep["results"])


def c11():
    hd = HeckeData.standard(2)
    assert not holds(hd, "rtt", "chn", "le", 2, flip_side=True)
    assert not holds(hd, "rtt", "inverse", "inv1", 2, drop_q_power=True)
    assert not holds(perturbed_standard(2), "rtt", "chn", "le", 3)


CRITERIA = [
    ("1", "R-matrix certification", c1, 5),
    ("2", "projector tower", c2, 60),
    ("3", "D-matrices", c3, 60),
    ("4a", "CHN identities, n = 2", c4_n2, 60),
    ("4b", "CHN identities, n = 3", c4_n3, 600),
    ("5", "Newton identities and trace compatibility", c5, 600),
    ("6", "Cayley-Hamilton and quantum determinant", c6, 600),
    ("7", "inverse formulas", c7, 600),
    ("8", "RE-algebra CHN", c8, 600),
    ("9", "commutativity of power sums", c9, 600),
    ("10", "classical CHN on 200 random matrices", c10, 60),
    ("11", "negative controls fail", c11, 600),
]


def run_one(check, limit):
    clear_cache()  # time each criterion from cold projector towers
    start = time.perf_counter()
    check()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    return elapsed


@pytest.mark.parametrize("cid,title,check,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title, check, limit):
    RESULTS[cid] = (title, False, None)
    elapsed = run_one(check, limit)
    RESULTS[cid] = (title, True, elapsed)


if __name__ == "__main__":
    failed = 0
    for cid, title, check, limit in CRITERIA:
        try:
            elapsed = run_one(check, limit)
            print(f"criterion {cid:>3}: PASS ({elapsed:.2f}s) {title}")
        except AssertionError as exc:
            failed += 1
            print(f"criterion {cid:>3}: FAIL {title} {exc}")
    sys.exit(1 if failed else 0)
