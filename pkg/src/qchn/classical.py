"""Classical-limit oracle: matrices with commuting rational entries.

Independent of the quantum pipeline.  Elementary symmetric functions come
from the Faddeev-LeVerrier recursion, complete ones from the Newton
recursion, and wedge/symmetric powers from traces of the classical
antisymmetrizer and symmetrizer ``(1/j!) sum_pi chi(pi) P_pi``.  Those
traces reduce to determinants and permanents of small index submatrices.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from fractions import Fraction
from typing import Sequence

from .qma import NCPoly, gen_pair
from .scalars import ScalarQ
from .tensorspace import TensorOp

__all__ = [
    "as_matrix",
    "identity",
    "matmul",
    "matpow",
    "trace",
    "faddeev_leverrier",
    "classical_symfun",
    "tensor_power",
    "elem_from_traces",
    "classical_chn_check",
    "classical_newton_check",
    "specialize_quantum",
    "random_matrix",
    "classical_demo",
]


def as_matrix(rows: Sequence[Sequence]) -> list:
    m = [[Fraction(v) for v in row] for row in rows]
    if any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square")
    return m


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int) -> list:
    return [[Fraction(0)] * n for _ in range(n)]


def matmul(a: list, b: list) -> list:
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def matpow(x: list, k: int) -> list:
    out = identity(len(x))
    for _ in range(k):
        out = matmul(out, x)
    return out


def trace(x: list) -> Fraction:
    return sum((x[i][i] for i in range(len(x))), Fraction(0))


def _axpy(a: Fraction, x: list, y: list) -> list:
    """a*x + y."""
    return [[a * xv + yv for xv, yv in zip(xr, yr)] for xr, yr in zip(x, y)]


def faddeev_leverrier(x: list) -> list:
    """Coefficients ``[c_0, ..., c_n]`` of det(t I - X) = sum c_k t^k."""
    n = len(x)
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    m = zeros(n)
    for k in range(1, n + 1):
        m = _axpy(c[n - k + 1], identity(n), matmul(x, m))
        c[n - k] = -trace(matmul(x, m)) / k
    return c


def classical_symfun(x: list, bound: int | None = None) -> tuple:
    """``(s, e, h)`` lists indexed 0..bound: power sums, elementary, complete."""
    x = as_matrix(x)
    n = len(x)
    bound = n if bound is None else bound
    if bound > 2 * n:
        raise ValueError("bound must not exceed 2n")
    s = [Fraction(n)] + [trace(matpow(x, k)) for k in range(1, bound + 1)]
    c = faddeev_leverrier(x)
    e = [(-1) ** k * c[n - k] if k <= n else Fraction(0) for k in range(bound + 1)]
    h = [Fraction(1)]
    for k in range(1, bound + 1):
        h.append(sum((s[i] * h[k - i] for i in range(1, k + 1)), Fraction(0)) / k)
    return s, e, h


def _det(m: list) -> Fraction:
    m = [[Fraction(v) for v in row] for row in m]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, size):
            f = m[r][col] / p
            if f:
                for cc in range(col, size):
                    m[r][cc] -= f * m[col][cc]
    return det


def _perm(m: list):
    # dp over subsets of used columns, one row at a time
    size = len(m)
    dp = {0: 1}
    for r in range(size):
        nxt: dict = {}
        for mask, val in dp.items():
            for cc in range(size):
                if not mask >> cc & 1 and m[r][cc]:
                    key = mask | 1 << cc
                    nxt[key] = nxt.get(key, 0) + val * m[r][cc]
        dp = nxt
    return dp.get((1 << size) - 1, 0)


def tensor_power(x: list, j: int, kind: str = "wedge", side: str = "under") -> list:
    """``Tr_(traced)(P X_1 ... X_j)`` for the classical (anti)symmetrizer P.

    ``side='under'`` leaves factor j free, ``'over'`` leaves factor 1 free.
    The summand for traced indices i is ``det`` (or ``perm``) of
    ``X[iota_a, iota'_b]`` divided by j!, where iota and iota' agree on the
    traced slots; it is symmetric in those slots, so each multiset of traced
    indices is evaluated once and weighted by its multiplicity.
    """
    x = as_matrix(x)
    n = len(x)
    if j < 1:
        raise ValueError("j must be positive")
    wedge = kind == "wedge"
    f = _det if wedge else _perm
    # work with the integer matrix D*X; each j x j minor picks up D^j
    den = math.lcm(*(v.denominator for row in x for v in row))
    x = [[int(v * den) for v in row] for row in x]
    fact = math.factorial(j) * den ** j
    out = zeros(n)
    pools = (
        itertools.combinations(range(n), j - 1)
        if wedge
        else itertools.combinations_with_replacement(range(n), j - 1)
    )
    weighted = []
    for ms in pools:
        cnt = Counter(ms)
        mult = math.factorial(j - 1)
        for v in cnt.values():
            mult //= math.factorial(v)
        weighted.append((ms, mult))
    for a in range(n):
        for b in range(n):
            total = 0
            for ms, mult in weighted:
                rows_idx = (ms + (a,)) if side == "under" else ((a,) + ms)
                cols_idx = (ms + (b,)) if side == "under" else ((b,) + ms)
                sub = [[x[r][c] for c in cols_idx] for r in rows_idx]
                total += mult * f(sub)
            out[a][b] = Fraction(total) / fact
    return out


def elem_from_traces(x: list, k: int) -> Fraction:
    """``Tr(A(k) X_1 ... X_k)`` for the classical antisymmetrizer (= e_k)."""
    x = as_matrix(x)
    if k == 0:
        return Fraction(1)
    if k > len(x):
        return Fraction(0)
    return trace(tensor_power(x, k, "wedge"))


def classical_chn_check(x: list, j: int) -> dict:
    """Residual matrices of the four classical CHN identities at degree j."""
    x = as_matrix(x)
    n = len(x)
    if not 1 <= j <= n + 1:
        raise ValueError("need 1 <= j <= n + 1")
    _, e, h = classical_symfun(x, j)
    powers = [matpow(x, k) for k in range(j + 1)]
    out = {}
    for variant in ("le", "le2", "le3", "le4"):
        wedge = variant in ("le", "le2")
        side = "under" if variant in ("le", "le3") else "over"
        res = [[j * v for v in row] for row in tensor_power(x, j, "wedge" if wedge else "sym", side)]
        for k in range(j):
            c = (-1) ** (j - k + 1) * e[k] if wedge else h[k]
            res = _axpy(-c, powers[j - k], res)
        out[variant] = res
    return out


def classical_newton_check(x: list, j: int) -> dict:
    """Residuals of the three Newton relations at q = 1."""
    s, e, h = classical_symfun(x, max(j, 1) if j <= 2 * len(x) else 2 * len(x))
    r1 = j * e[j] - sum(((-1) ** (k - 1) * e[j - k] * s[k] for k in range(1, j)), Fraction(0)) - (-1) ** (j - 1) * s[j]
    r2 = j * h[j] - sum((h[j - k] * s[k] for k in range(1, j)), Fraction(0)) - s[j]
    r3 = sum(((-1) ** k * h[j - k] * e[k] for k in range(j + 1)), Fraction(0))
    return {"qNewton": r1, "qNewton2": r2, "qNewton3": r3}


def _coeff_at(c, q0) -> Fraction:
    return c.eval_at(q0) if isinstance(c, ScalarQ) else Fraction(c)


def specialize_quantum(x, assignment: list, q0=1):
    """Substitute ``T^i_j -> X[i][j]`` (commuting) and q -> q0.

    Accepts an NCPoly or an n x n TensorOp of NCPoly.  Only q0 = 1 is
    admissible: elsewhere the letters do not commute.
    """
    if Fraction(q0) != 1:
        raise ValueError("commuting substitution is only admissible at q0 = 1")
    xm = as_matrix(assignment)
    n = len(xm)

    def ev(p: NCPoly) -> Fraction:
        total = Fraction(0)
        for word, c in p.terms.items():
            v = _coeff_at(c, q0)
            for g in word:
                i, jj = gen_pair(g, n)
                v *= xm[i - 1][jj - 1]
            total += v
        return total

    if isinstance(x, NCPoly):
        return ev(x)
    if isinstance(x, TensorOp):
        if x.k != 1 or x.n != n:
            raise ValueError("expected an n x n matrix of NCPoly")
        out = zeros(n)
        for (r, c), p in x.entries.items():
            out[r][c] = ev(p)
        return out
    raise TypeError("expected NCPoly or TensorOp")


def random_matrix(n: int, rng: random.Random, num: int = 9, den: int = 5) -> list:
    return [[Fraction(rng.randint(-num, num), rng.randint(1, den)) for _ in range(n)] for _ in range(n)]


def _is_zero(m) -> bool:
    if isinstance(m, Fraction):
        return m == 0
    return all(v == 0 for row in m for v in row)


def _max_abs(m) -> str:
    if isinstance(m, Fraction):
        return str(abs(m))
    return str(max((abs(v) for row in m for v in row), default=Fraction(0)))


def classical_demo(n: int = 4, trials: int = 200, seed: int = 0) -> dict:
    """Check every classical CHN and Newton identity on seeded random matrices.

    Trial t uses size ``1 + t % n``.  Returns a JSON-ready report.
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    rng = random.Random(seed)
    rows = []
    all_ok = True
    for t in range(trials):
        size = 1 + t % n
        x = random_matrix(size, rng)
        entry = {"trial": t, "n": size, "residuals": {}, "e_k_match": True}
        for j in range(1, size + 2):
            for variant, res in classical_chn_check(x, j).items():
                entry["residuals"][f"{variant}/j={j}"] = _max_abs(res)
                all_ok &= _is_zero(res)
            for variant, res in classical_newton_check(x, j).items():
                entry["residuals"][f"{variant}/j={j}"] = _max_abs(res)
                all_ok &= _is_zero(res)
        _, e, _ = classical_symfun(x)
        match = all(elem_from_traces(x, k) == e[k] for k in range(size + 1))
        entry["e_k_match"] = match
        all_ok &= match
        rows.append(entry)
    return {"n_max": n, "trials": trials, "seed": seed, "verdict": "holds" if all_ok else "fails", "results": rows}
