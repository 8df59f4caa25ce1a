"""Sparse linear operators on tensor powers of V = C^n.

Basis vectors of V^(x)k are indexed by integers in ``[0, n**k)`` read as
base-n numbers whose MOST significant digit is tensor factor 1.  Factor
positions in the public API are 1-based, matching the usual ``X_1 X_2 ...``
subscripts.

Entries are any ring elements supporting ``+``, ``-``, ``*`` and truthiness
for zero tests: :class:`~qchn.scalars.ScalarQ`, ``Fraction``, ``int`` or the
noncommutative polynomials of :mod:`qchn.qma`.  Products keep the order of
factors, so noncommutative entries are safe in :meth:`TensorOp.__matmul__`.
"""

from __future__ import annotations

import json
import logging
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .scalars import PoleError, ScalarQ, format_scalar, parse_scalar

log = logging.getLogger(__name__)

__all__ = [
    "TensorOp",
    "identity_op",
    "zero_op",
    "embed",
    "embed_pair",
    "partial_trace",
    "weighted_partial_trace",
    "generic_rank",
    "exact_rank",
    "digits",
    "from_digits",
]


def digits(index: int, n: int, k: int) -> tuple:
    """Base-n digits of ``index``, factor 1 first."""
    out = [0] * k
    for pos in range(k - 1, -1, -1):
        index, out[pos] = divmod(index, n)
    return tuple(out)


def from_digits(ds: Sequence[int], n: int) -> int:
    idx = 0
    for d in ds:
        idx = idx * n + d
    return idx


class TensorOp:
    """An operator on V^(x)k stored as ``{(row, col): entry}`` without zeros."""

    __slots__ = ("n", "k", "entries")

    def __init__(self, n: int, k: int, entries: dict | None = None, check: bool = True):
        if n < 1 or k < 1:
            raise ValueError("n and k must be positive")
        self.n = n
        self.k = k
        if entries is None:
            entries = {}
        if check:
            dim = n ** k
            clean = {}
            for (r, c), v in entries.items():
                if not (0 <= r < dim and 0 <= c < dim):
                    raise IndexError(f"entry ({r}, {c}) outside a {dim}x{dim} operator")
                if v:
                    clean[(r, c)] = v
            entries = clean
        self.entries = entries

    @property
    def dim(self) -> int:
        return self.n ** self.k

    def __repr__(self) -> str:
        return f"TensorOp(n={self.n}, k={self.k}, nnz={len(self.entries)})"

    def __getitem__(self, rc):
        v = self.entries.get(rc)
        return 0 if v is None else v

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self.n == other.n and self.k == other.k and self.entries == other.entries

    __hash__ = None

    def key(self) -> tuple:
        """Hashable fingerprint, for caches."""
        return (self.n, self.k, tuple(sorted(self.entries.items())))

    def _check_same(self, other: "TensorOp") -> None:
        if self.n != other.n or self.k != other.k:
            raise ValueError(
                f"dimension mismatch: (n={self.n}, k={self.k}) vs (n={other.n}, k={other.k})"
            )

    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._check_same(other)
        out = dict(self.entries)
        for rc, v in other.entries.items():
            w = out.get(rc)
            if w is None:
                out[rc] = v
            else:
                w = w + v
                if w:
                    out[rc] = w
                else:
                    del out[rc]
        return TensorOp(self.n, self.k, out, check=False)

    def __neg__(self) -> "TensorOp":
        return TensorOp(self.n, self.k, {rc: -v for rc, v in self.entries.items()}, check=False)

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        return self + (-other)

    def scale(self, c) -> "TensorOp":
        """Multiply every entry by ``c`` from the left."""
        if not c:
            return TensorOp(self.n, self.k, {}, check=False)
        out = {}
        for rc, v in self.entries.items():
            w = c * v
            if w:
                out[rc] = w
        return TensorOp(self.n, self.k, out, check=False)

    def rscale(self, c) -> "TensorOp":
        """Multiply every entry by ``c`` from the right."""
        out = {}
        for rc, v in self.entries.items():
            w = v * c
            if w:
                out[rc] = w
        return TensorOp(self.n, self.k, out, check=False)

    def __rmul__(self, c) -> "TensorOp":
        return self.scale(c)

    def __mul__(self, c) -> "TensorOp":
        if isinstance(c, TensorOp):
            return NotImplemented
        return self.rscale(c)

    def rows(self) -> dict:
        by_row: dict = {}
        for (r, c), v in self.entries.items():
            by_row.setdefault(r, []).append((c, v))
        return by_row

    def __matmul__(self, other: "TensorOp") -> "TensorOp":
        return compose(self, other)

    def map(self, f: Callable) -> "TensorOp":
        """Apply ``f`` to every entry (e.g. specialization at a sample point)."""
        out = {}
        for rc, v in self.entries.items():
            w = f(v)
            if w:
                out[rc] = w
        return TensorOp(self.n, self.k, out, check=False)

    def transpose(self) -> "TensorOp":
        return TensorOp(self.n, self.k, {(c, r): v for (r, c), v in self.entries.items()}, check=False)

    def apply_basis(self, col: int) -> dict:
        """Image of basis vector ``col`` as ``{row: entry}``."""
        return {r: v for (r, c), v in self.entries.items() if c == col}

    def to_dense(self, zero=0) -> list:
        dim = self.dim
        out = [[zero] * dim for _ in range(dim)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def trace(self):
        return partial_trace(self, range(1, self.k + 1))

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON object with scalar entries printed in the expression grammar."""
        ents = []
        for (r, c), v in sorted(self.entries.items()):
            text = format_scalar(v) if isinstance(v, ScalarQ) else str(Fraction(v))
            ents.append([r, c, text])
        return {
            "n": self.n,
            "k": self.k,
            "index_convention": "factor 1 is the most significant base-n digit",
            "entries": ents,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TensorOp":
        try:
            n = int(data["n"])
            k = int(data["k"])
            raw = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed operator JSON: {exc}") from None
        entries: dict = {}
        for item in raw:
            r, c, text = item
            val = parse_scalar(str(text))
            key = (int(r), int(c))
            entries[key] = entries[key] + val if key in entries else val
        return cls(n, k, entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "TensorOp":
        return cls.from_json_dict(json.loads(text))


def identity_op(n: int, k: int, one=None) -> TensorOp:
    one = ScalarQ(1) if one is None else one
    return TensorOp(n, k, {(i, i): one for i in range(n ** k)}, check=False)


def zero_op(n: int, k: int) -> TensorOp:
    return TensorOp(n, k, {}, check=False)


def compose(a: TensorOp, b: TensorOp) -> TensorOp:
    """Operator product ``a b`` (apply b first)."""
    a._check_same(b)
    brows = b.rows()
    acc: dict = {}
    for (i, m), x in a.entries.items():
        row = brows.get(m)
        if not row:
            continue
        for j, y in row:
            key = (i, j)
            v = acc.get(key)
            acc[key] = x * y if v is None else v + x * y
    return TensorOp(a.n, a.k, {rc: v for rc, v in acc.items() if v}, check=False)


def embed(op: TensorOp, pos: int, k_total: int) -> TensorOp:
    """``I^(pos-1) (x) op (x) I^(rest)``: op acting on factors pos .. pos+op.k-1."""
    if pos < 1 or pos + op.k - 1 > k_total:
        raise ValueError(
            f"cannot place a {op.k}-factor operator at position {pos} of {k_total} factors"
        )
    n = op.n
    left = n ** (pos - 1)
    right = n ** (k_total - pos - op.k + 1)
    block = n ** op.k
    out = {}
    for (r, c), v in op.entries.items():
        for lft in range(left):
            base = lft * block
            for rgt in range(right):
                out[((base + r) * right + rgt, (base + c) * right + rgt)] = v
    return TensorOp(n, k_total, out, check=False)


def embed_pair(op2: TensorOp, pos: int, k_total: int) -> TensorOp:
    """Two-site operator acting on factors (pos, pos+1)."""
    if op2.k != 2:
        raise ValueError("embed_pair expects an operator on V (x) V")
    if not 1 <= pos <= k_total - 1:
        raise ValueError(f"position {pos} out of range for {k_total} factors")
    return embed(op2, pos, k_total)


def _normalize_over(over: Iterable[int], k: int) -> tuple:
    s = sorted(set(over))
    for p in s:
        if not 1 <= p <= k:
            raise ValueError(f"factor {p} out of range 1..{k}")
    return tuple(s)


def partial_trace(x: TensorOp, over: Iterable[int]):
    """Trace over the listed factors.

    Returns an operator on the remaining factors (order preserved), or a
    single entry-ring element when every factor is traced.
    """
    over = _normalize_over(over, x.k)
    n, k = x.n, x.k
    keep = [p for p in range(1, k + 1) if p not in over]
    acc: dict = {}
    for (r, c), v in x.entries.items():
        rd = digits(r, n, k)
        cd = digits(c, n, k)
        if any(rd[p - 1] != cd[p - 1] for p in over):
            continue
        key = (
            from_digits([rd[p - 1] for p in keep], n),
            from_digits([cd[p - 1] for p in keep], n),
        )
        w = acc.get(key)
        acc[key] = v if w is None else w + v
    if not keep:
        total = acc.get((0, 0))
        return 0 if total is None else total
    return TensorOp(n, len(keep), {rc: v for rc, v in acc.items() if v}, check=False)


def weighted_partial_trace(x: TensorOp, weight: TensorOp, over: Iterable[int]):
    """Partial trace of ``(prod_{i in over} weight_i) x``; weight acts on one copy of V."""
    if weight.k != 1 or weight.n != x.n:
        raise ValueError("weight must be an operator on a single copy of V with matching n")
    over = _normalize_over(over, x.k)
    y = x
    for p in over:
        y = compose(embed(weight, p, x.k), y)
    return partial_trace(y, over)


# --------------------------------------------------------------------------
# exact rank


def exact_rank(rows: list) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    mat = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        den = 1
        for v in fr:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in fr]
        if any(ints):
            mat.append(ints)
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            a = mat[i][col]
            row_i = mat[i]
            row_r = mat[rank]
            mat[i] = [(p * row_i[j] - a * row_r[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(mat):
            break
    return rank


def generic_rank(x: TensorOp, samples: Sequence, skipped: list | None = None) -> int:
    """Maximum exact rank of ``x`` specialized at the given q-values.

    Samples where an entry has a pole are skipped (appended to ``skipped``
    when given).  Raises :class:`PoleError` if no sample is usable.
    """
    best = None
    for q0 in samples:
        try:
            at_q0 = x.map(lambda v: v.eval_at(q0) if isinstance(v, ScalarQ) else Fraction(v))
        except PoleError as exc:
            log.warning("rank sample q=%s skipped: %s", q0, exc)
            if skipped is not None:
                skipped.append(q0)
            continue
        r = _sparse_rank(at_q0)
        best = r if best is None else max(best, r)
    if best is None:
        raise PoleError("every rank sample hit a pole")
    return best


def _sparse_rank(x: TensorOp) -> int:
    if not x.entries:
        return 0
    rows_used = sorted({r for r, _ in x.entries})
    cols_used = sorted({c for _, c in x.entries})
    cidx = {c: i for i, c in enumerate(cols_used)}
    dense = [[0] * len(cols_used) for _ in rows_used]
    ridx = {r: i for i, r in enumerate(rows_used)}
    for (r, c), v in x.entries.items():
        dense[ridx[r]][cidx[c]] = v
    return exact_rank(dense)
