"""q-antisymmetrizers and q-symmetrizers built by the inductive fusion recursion.

Level k acts on V^(x)k; the previous level is embedded on the leading factors
1..k-1 and the new strand enters through R_{k-1}:

    A(k) = A(k-1) (q^(k-1) - (k-1)_q R_{k-1}) A(k-1) / k_q
    S(k) = S(k-1) (q^(1-k) + (k-1)_q R_{k-1}) S(k-1) / k_q

Towers are cached per (R-matrix, kind, q) and extended on demand.
"""

from __future__ import annotations

import threading

from .scalars import Q, qnum
from .tensorspace import TensorOp, embed, embed_pair, identity_op

__all__ = [
    "ProjectorTower",
    "tower",
    "antisymmetrizer",
    "symmetrizer",
    "resolvent_check",
    "clear_cache",
]

ANTISYM = "antisymmetrizer"
SYM = "symmetrizer"
_KIND_ALIASES = {"antisym": ANTISYM, "a": ANTISYM, ANTISYM: ANTISYM, "sym": SYM, "s": SYM, SYM: SYM}


class ProjectorTower:
    """Levels ``[P(1), P(2), ...]`` of one projector family for a fixed R-matrix."""

    def __init__(self, rhat: TensorOp, kind: str, q=Q):
        if rhat.k != 2:
            raise ValueError("R-matrix must act on V (x) V")
        kind = _KIND_ALIASES.get(kind)
        if kind is None:
            raise ValueError("kind must be 'antisymmetrizer' or 'symmetrizer'")
        self.rhat = rhat
        self.kind = kind
        self.q = q
        self.one = q ** 0
        self.levels = [identity_op(rhat.n, 1, self.one)]
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.rhat.n

    def level(self, k: int) -> TensorOp:
        if k < 1:
            raise ValueError("projector levels start at k = 1")
        if k > len(self.levels):
            with self._lock:
                while len(self.levels) < k:
                    self.levels.append(self._next(len(self.levels) + 1))
        return self.levels[k - 1]

    __getitem__ = level

    def _next(self, k: int) -> TensorOp:
        q = self.q
        prev = embed(self.levels[-1], 1, k)
        if prev.is_zero():
            return prev
        mixed = prev @ embed_pair(self.rhat, k - 1, k)
        c = qnum(k - 1, q)
        if self.kind == ANTISYM:
            middle = prev.scale(q ** (k - 1)) - mixed.scale(c)
        else:
            middle = prev.scale(q ** (1 - k)) + mixed.scale(c)
        return (middle @ prev).scale(self.one / qnum(k, q))


_TOWERS: dict = {}
_TOWERS_LOCK = threading.Lock()


def tower(rhat: TensorOp, kind: str, q=Q) -> ProjectorTower:
    """Shared, lazily extended tower for this R-matrix."""
    key = (rhat.key(), _KIND_ALIASES.get(kind, kind), q)
    with _TOWERS_LOCK:
        t = _TOWERS.get(key)
        if t is None:
            t = _TOWERS[key] = ProjectorTower(rhat, kind, q)
    return t


def clear_cache() -> None:
    with _TOWERS_LOCK:
        _TOWERS.clear()


def antisymmetrizer(rhat: TensorOp, k: int, q=Q) -> TensorOp:
    return tower(rhat, ANTISYM, q).level(k)


def symmetrizer(rhat: TensorOp, k: int, q=Q) -> TensorOp:
    return tower(rhat, SYM, q).level(k)


def resolvent_check(rhat: TensorOp, k: int, q=Q) -> TensorOp:
    """Residual of ``q^k A(k) = (k+1)_q A(k+1) + k_q A(k) R_k A(k)`` on V^(x)(k+1)."""
    t = tower(rhat, ANTISYM, q)
    ak = embed(t.level(k), 1, k + 1)
    rk = embed_pair(rhat, k, k + 1)
    lhs = ak.scale(q ** k)
    rhs = t.level(k + 1).scale(qnum(k + 1, q)) + (ak @ rk @ ak).scale(qnum(k, q))
    return lhs - rhs
