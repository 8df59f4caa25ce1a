"""Hecke R-matrices: construction, certification, height and D-matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .projectors import antisymmetrizer
from .scalars import Q, ScalarQ, qnum, specialize
from .tensorspace import (
    TensorOp,
    embed_pair,
    from_digits,
    generic_rank,
    identity_op,
    partial_trace,
)

__all__ = [
    "HeckeError",
    "HeckeData",
    "standard_rhat",
    "permutation_op",
    "check_ybe",
    "check_hecke",
    "rhat_inverse",
    "compute_height",
    "d_matrices",
    "load_rmatrix",
]

DEFAULT_MAX_K = 6


class HeckeError(ValueError):
    """The operator is not a Hecke R-matrix, or has no finite height."""


def standard_rhat(n: int, q=Q) -> TensorOp:
    """Drinfeld-Jimbo R-matrix of GL(n) in Hecke normalization.

    ``e_i (x) e_i -> q e_i (x) e_i``; for ``i < j`` the pair
    ``(e_i (x) e_j, e_j (x) e_i)`` maps to
    ``(e_j (x) e_i + (q - 1/q) e_i (x) e_j, e_i (x) e_j)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    one = q ** 0
    lam = q - one / q
    ent = {}
    for i in range(n):
        for j in range(n):
            col = from_digits((i, j), n)
            if i == j:
                ent[(col, col)] = q
            else:
                ent[(from_digits((j, i), n), col)] = one
                if i < j and lam:
                    ent[(col, col)] = lam
    return TensorOp(n, 2, ent)


def permutation_op(n: int, one=None) -> TensorOp:
    """The flip ``e_a (x) e_b -> e_b (x) e_a``."""
    one = ScalarQ(1) if one is None else one
    return TensorOp(
        n, 2, {(from_digits((b, a), n), from_digits((a, b), n)): one for a in range(n) for b in range(n)}
    )


def check_ybe(rhat: TensorOp) -> TensorOp:
    """``R1 R2 R1 - R2 R1 R2`` on V^(x)3; zero iff the braid relation holds."""
    if rhat.k != 2:
        raise ValueError("R-matrix must act on V (x) V")
    r1 = embed_pair(rhat, 1, 3)
    r2 = embed_pair(rhat, 2, 3)
    return r1 @ r2 @ r1 - r2 @ r1 @ r2


def check_hecke(rhat: TensorOp, q=Q) -> TensorOp:
    """``R^2 - I - (q - 1/q) R``; zero iff the Hecke condition holds."""
    if rhat.k != 2:
        raise ValueError("R-matrix must act on V (x) V")
    one = q ** 0
    return rhat @ rhat - identity_op(rhat.n, 2, one) - rhat.scale(q - one / q)


def rhat_inverse(rhat: TensorOp, q=Q) -> TensorOp:
    """``R - (q - 1/q) I``, valid because of the Hecke condition."""
    if not check_hecke(rhat, q).is_zero():
        raise HeckeError("Hecke condition fails; inverse formula does not apply")
    one = q ** 0
    return rhat - identity_op(rhat.n, 2, one).scale(q - one / q)


def _rank_samples(q) -> list:
    if isinstance(q, ScalarQ):
        return [Fraction(2), Fraction(3, 5), Fraction(7, 3)]
    return [q]


def compute_height(rhat: TensorOp, max_k: int = DEFAULT_MAX_K, q=Q, ranks: list | None = None) -> int:
    """Smallest h with rank A(h) = 1 and A(h+1) identically zero.

    Rank is read off the trace of the projector and confirmed by exact rank
    at sample points.  ``ranks`` (if given) collects the ranks of A(1..h).
    """
    if max_k < 1:
        raise ValueError("max_k must be positive")
    for h in range(1, max_k + 1):
        a_h = antisymmetrizer(rhat, h, q)
        tr = a_h.trace()
        if ranks is not None:
            ranks.append(tr)
        if not antisymmetrizer(rhat, h + 1, q).is_zero():
            continue
        if tr != 1:
            raise HeckeError(f"A({h + 1}) vanishes but trace A({h}) = {tr}, not 1")
        if generic_rank(a_h, _rank_samples(q)) != 1:
            raise HeckeError(f"A({h}) has trace 1 but rank != 1")
        return h
    raise HeckeError(f"R-matrix is not even up to max_k = {max_k}")


def d_matrices(rhat: TensorOp, h: int | None, q=Q) -> tuple:
    """``(D_r, D_l)``: scaled partial traces of A(h) over factors 2..h and 1..h-1."""
    if h is None:
        raise HeckeError("height unknown; compute_height first")
    a_h = antisymmetrizer(rhat, h, q)
    c = qnum(h, q) / q ** h
    if h == 1:
        return a_h.scale(c), a_h.scale(c)
    d_r = partial_trace(a_h, range(2, h + 1)).scale(c)
    d_l = partial_trace(a_h, range(1, h)).scale(c)
    return d_r, d_l


@dataclass(eq=False)
class HeckeData:
    """An R-matrix together with its parameter, height and D-matrices.

    ``q`` is the symbolic parameter for ScalarQ-valued R-matrices or a
    rational number for specialized ones.
    """

    rhat: TensorOp
    q: object = Q
    name: str = ""
    height: int | None = None
    d_right: TensorOp | None = None
    d_left: TensorOp | None = None
    cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def standard(cls, n: int, q=Q) -> "HeckeData":
        return cls(standard_rhat(n, q), q, name=f"standard-{n}")

    @classmethod
    def classical(cls, n: int) -> "HeckeData":
        """The flip at q = 1, with rational entries."""
        return cls(permutation_op(n, Fraction(1)), Fraction(1), name=f"permutation-{n}")

    @property
    def n(self) -> int:
        return self.rhat.n

    def ybe_residual(self) -> TensorOp:
        return check_ybe(self.rhat)

    def hecke_residual(self) -> TensorOp:
        return check_hecke(self.rhat, self.q)

    def is_hecke(self) -> bool:
        return self.ybe_residual().is_zero() and self.hecke_residual().is_zero()

    def inverse(self) -> TensorOp:
        inv = self.cache.get("inverse")
        if inv is None:
            inv = self.cache["inverse"] = rhat_inverse(self.rhat, self.q)
        return inv

    def ensure_height(self, max_k: int = DEFAULT_MAX_K) -> int:
        if self.height is None:
            self.height = compute_height(self.rhat, max_k, self.q)
        return self.height

    def ensure_d(self) -> tuple:
        if self.d_right is None or self.d_left is None:
            self.d_right, self.d_left = d_matrices(self.rhat, self.ensure_height(), self.q)
        return self.d_right, self.d_left

    def specialize(self, q0) -> "HeckeData":
        """Same R-matrix with q set to the rational ``q0``."""
        f = specialize(q0)
        return HeckeData(self.rhat.map(f), Fraction(q0), self.name, self.height)

    def to_json_dict(self) -> dict:
        d = self.rhat.to_json_dict()
        if self.name:
            d["name"] = self.name
        return d


def load_rmatrix(path) -> HeckeData:
    """Read an R-matrix file (operator JSON with ``"k": 2``)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    op = TensorOp.from_json_dict(data)
    if op.k != 2:
        raise ValueError(f"R-matrix file must have k = 2, got k = {op.k}")
    return HeckeData(op, Q, name=str(data.get("name", Path(path).stem)))
