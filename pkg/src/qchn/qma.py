"""Noncommutative polynomials, quadratic quantum matrix algebras and ideal membership.

Generators are the entries ``T^i_j`` (or ``L^i_j``) of an n x n matrix.  The
generator with 1-based indices (i, j) has integer id ``(i-1)*n + (j-1)``, so
integer order is row-major order.  A monomial is a tuple of ids and
monomials are compared by degree, then lexicographically.

Membership of a homogeneous element p of degree d in the two-sided ideal I
generated by degree-2 relations R is decided degree by degree: with A_m the
degree-m part of the quotient algebra,

    A_m = (A_{m-1} (x) V) / span{ pi(b x_a) (x) x_c : b standard in A_{m-2},
                                   sum c_ac x_a x_c in R }

which uses I_m = I_{m-1} V + V^{m-2} R.  Every step is an exact rational
row reduction, and p lies in I iff its normal form in A_d is zero.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import PoleError, ScalarQ, specialize
from .tensorspace import (
    TensorOp,
    compose,
    digits,
    embed,
    from_digits,
    partial_trace,
    weighted_partial_trace,
)

__all__ = [
    "NCPoly",
    "NCTensorOp",
    "RelationSet",
    "Certificate",
    "InsufficientSamplesError",
    "GradedQuotient",
    "gen_id",
    "gen_pair",
    "nc_chain",
    "generator_matrix",
    "nc_sandwich_trace",
    "rtt_relations",
    "re_relations",
    "ideal_member",
    "span_member",
    "nc_matrix_residual_member",
    "MIN_SAMPLES",
]

MIN_SAMPLES = 3


def gen_id(i: int, j: int, n: int) -> int:
    """Integer id of the generator with 1-based indices (i, j)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"generator ({i}, {j}) out of range for n = {n}")
    return (i - 1) * n + (j - 1)


def gen_pair(g: int, n: int) -> tuple:
    i, j = divmod(g, n)
    return i + 1, j + 1


class NCPoly:
    """Element of the free algebra: ``{word: coefficient}`` with no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "NCPoly":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def word(cls, word: Sequence[int], coeff=1) -> "NCPoly":
        return cls({tuple(word): coeff})

    @classmethod
    def const(cls, c) -> "NCPoly":
        return cls({(): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"NCPoly({len(self.terms)} terms, degrees {sorted(self.degrees())})"

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (degree is None or degree in ds)

    def homogeneous_components(self) -> dict:
        out: dict = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return {d: NCPoly._raw(t) for d, t in out.items()}

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = out.get(w)
                    out[w] = c1 * c2 if v is None else v + c1 * c2
            return NCPoly._raw({w: c for w, c in out.items() if c})
        if isinstance(other, TensorOp):
            return NotImplemented
        if not other:
            return NCPoly._raw({})
        return NCPoly._raw({w: v for w, c in self.terms.items() if (v := c * other)})

    def __rmul__(self, other):
        if not other:
            return NCPoly._raw({})
        return NCPoly._raw({w: v for w, c in self.terms.items() if (v := other * c)})

    def map_coeffs(self, f) -> "NCPoly":
        out = {}
        for w, c in self.terms.items():
            v = f(c)
            if v:
                out[w] = v
        return NCPoly._raw(out)

    def specialize(self, q0) -> "NCPoly":
        return self.map_coeffs(specialize(q0))

    def abelianize(self) -> dict:
        """Collapse words to sorted tuples, i.e. let the letters commute."""
        out: dict = {}
        for w, c in self.terms.items():
            key = tuple(sorted(w))
            out[key] = out.get(key, 0) + c
        return {k: v for k, v in out.items() if v}

    def format(self, n: int, letter: str = "T") -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            mono = "*".join(f"{letter}{i}{j}" for i, j in (gen_pair(g, n) for g in w)) or "1"
            parts.append(f"({self.terms[w]})*{mono}")
        return " + ".join(parts)


# operators on V^(x)k whose entries are NCPoly
NCTensorOp = TensorOp


def nc_chain(n: int, k: int, one=1) -> TensorOp:
    """``T_1 T_2 ... T_k`` on V^(x)k; entry (I, J) is the word T^{i1}_{j1} ... T^{ik}_{jk}."""
    if k < 1:
        raise ValueError("k must be positive")
    ent = {}
    for r in range(n ** k):
        rd = digits(r, n, k)
        for c in range(n ** k):
            cd = digits(c, n, k)
            ent[(r, c)] = NCPoly._raw({tuple(a * n + b for a, b in zip(rd, cd)): one})
    return TensorOp(n, k, ent, check=False)


def generator_matrix(n: int, one=1) -> TensorOp:
    return nc_chain(n, 1, one)


def _traced_standard_chain(op: TensorOp, over: tuple) -> object:
    # Tr_over(op T_1...T_k) without materializing the product:
    # (op T..T)[I, J] = sum_K op[I, K] word(K, J), traced where I_s = J_s.
    n, k = op.n, op.k
    keep = [p for p in range(1, k + 1) if p not in over]
    acc: dict = {}
    free = list(itertools.product(range(n), repeat=len(keep)))
    for (r, c), v in op.entries.items():
        rd = digits(r, n, k)
        kd = digits(c, n, k)
        jd = list(rd)
        row_key = from_digits([rd[p - 1] for p in keep], n)
        for fr in free:
            for p, val in zip(keep, fr):
                jd[p - 1] = val
            word = tuple(a * n + b for a, b in zip(kd, jd))
            slot = acc.setdefault((row_key, from_digits(fr, n)), {})
            w = slot.get(word)
            slot[word] = v if w is None else w + v
    ent = {}
    for rc, terms in acc.items():
        p = NCPoly._raw({w: c for w, c in terms.items() if c})
        if p:
            ent[rc] = p
    if not keep:
        return ent.get((0, 0), NCPoly._raw({}))
    return TensorOp(n, len(keep), ent, check=False)


def nc_sandwich_trace(scalar_op: TensorOp, chain: TensorOp | None = None, over: Iterable[int] = (), weight: TensorOp | None = None):
    """``Tr_over(W scalar_op chain)`` with W the product of ``weight`` on traced factors.

    ``chain=None`` means the standard chain ``T_1 ... T_k``, which is traced
    without being materialized.  Tracing every factor returns an NCPoly.
    """
    over = tuple(sorted(set(over)))
    for p in over:
        if not 1 <= p <= scalar_op.k:
            raise ValueError(f"factor {p} out of range 1..{scalar_op.k}")
    if chain is None and weight is None:
        return _traced_standard_chain(scalar_op, over)
    if chain is None:
        chain = nc_chain(scalar_op.n, scalar_op.k)
    if chain.n != scalar_op.n or chain.k != scalar_op.k:
        raise ValueError("dimension mismatch between scalar operator and chain")
    prod = compose(scalar_op, chain)
    if weight is None:
        out = partial_trace(prod, over)
    else:
        out = weighted_partial_trace(prod, weight, over)
    if isinstance(out, int) and out == 0:
        return NCPoly._raw({})
    return out


# --------------------------------------------------------------------------
# relation sets


@dataclass(eq=False)
class RelationSet:
    """Degree-2 defining relations of an RTT or RE algebra."""

    algebra_kind: str
    n: int
    relations: list
    cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def ngens(self) -> int:
        return self.n * self.n

    def specialize(self, q0) -> "RelationSet":
        f = specialize(q0)
        rels = [p.map_coeffs(f) for p in self.relations]
        return RelationSet(self.algebra_kind, self.n, [p for p in rels if p])

    def quotient(self, q0=None) -> "GradedQuotient":
        """Graded quotient engine over Q (relations specialized at ``q0`` if given)."""
        key = None if q0 is None else Fraction(q0)
        with self._lock:
            gq = self.cache.get(key)
            if gq is None:
                rels = self.relations if key is None else self.specialize(key).relations
                gq = GradedQuotient([p.terms for p in rels], self.ngens)
                self.cache[key] = gq
        return gq


def _relations_from(op: TensorOp, kind: str) -> RelationSet:
    rels = [p for _, p in sorted(op.entries.items()) if p]
    for p in rels:
        if not p.is_homogeneous(2):
            raise AssertionError("defining relations must be homogeneous of degree 2")
    return RelationSet(kind, op.n, rels)


def rtt_relations(rhat: TensorOp) -> RelationSet:
    """Entries of ``R T_1 T_2 - T_1 T_2 R``."""
    chain = nc_chain(rhat.n, 2)
    return _relations_from(compose(rhat, chain) - compose(chain, rhat), "rtt")


def re_relations(rhat: TensorOp) -> RelationSet:
    """Entries of ``R L_1 R L_1 - L_1 R L_1 R``."""
    l1 = embed(generator_matrix(rhat.n), 1, 2)
    lhs = compose(compose(compose(rhat, l1), rhat), l1)
    rhs = compose(compose(compose(l1, rhat), l1), rhat)
    return _relations_from(lhs - rhs, "re")


# --------------------------------------------------------------------------
# graded quotient


def _field(c):
    # ints would divide into floats; every other coefficient type is a field element
    return Fraction(c) if isinstance(c, int) else c


class _Echelon:
    """Row space with pivots at each row's largest key, leading coefficient 1."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict = {}

    def insert(self, vec: dict) -> bool:
        vec = dict(vec)
        rows = self.rows
        while vec:
            top = max(vec)
            row = rows.get(top)
            if row is None:
                inv = 1 / _field(vec[top])
                rows[top] = {k: v * inv for k, v in vec.items()}
                return True
            c = vec[top]
            for k, v in row.items():
                w = vec.get(k, 0) - c * v
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)
        return False

    def reduce(self, vec: dict) -> dict:
        """Normal form: eliminate every pivot coordinate (largest first)."""
        vec = dict(vec)
        rows = self.rows
        while True:
            hits = [k for k in vec if k in rows]
            if not hits:
                return vec
            top = max(hits)
            c = vec[top]
            for k, v in rows[top].items():
                w = vec.get(k, 0) - c * v
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)


class GradedQuotient:
    """Degree-by-degree normal forms in the quotient of the free algebra.

    ``relations`` are ``{word: coefficient}`` dicts of degree 2 over
    ``ngens`` generators, with coefficients in Q or in Q(q).  Standard words of degree m are the non-pivot
    coordinates of the degree-m echelon.
    """

    def __init__(self, relations: Sequence[dict], ngens: int):
        self.ngens = ngens
        self.relations = [dict(r) for r in relations if r]
        for r in self.relations:
            if any(len(w) != 2 for w in r):
                raise ValueError("relations must be homogeneous of degree 2")
        self.standard = {0: [()], 1: [(g,) for g in range(ngens)]}
        self.echelons: dict = {}
        self.system_dims: dict = {}
        self._nf: dict = {(): {(): Fraction(1)}}
        for g in range(ngens):
            self._nf[(g,)] = {(g,): Fraction(1)}
        self._lock = threading.RLock()

    def ensure(self, degree: int) -> None:
        with self._lock:
            for m in range(2, degree + 1):
                if m not in self.echelons:
                    self._build(m)

    def _build(self, m: int) -> None:
        ech = _Echelon()
        count = 0
        for b in self.standard[m - 2]:
            for rel in self.relations:
                vec: dict = {}
                for (a, c), coef in rel.items():
                    for s, x in self.nf_word(b + (a,)).items():
                        key = s + (c,)
                        w = vec.get(key, 0) + coef * x
                        if w:
                            vec[key] = w
                        else:
                            vec.pop(key, None)
                count += 1
                if vec:
                    ech.insert(vec)
        cols = len(self.standard[m - 1]) * self.ngens
        self.echelons[m] = ech
        self.system_dims[m] = (count, cols)
        self.standard[m] = [
            s + (x,) for s in self.standard[m - 1] for x in range(self.ngens) if s + (x,) not in ech.rows
        ]

    def dim(self, degree: int) -> int:
        self.ensure(degree)
        return len(self.standard[degree])

    def nf_word(self, word: tuple) -> dict:
        nf = self._nf.get(word)
        if nf is not None:
            return nf
        m = len(word)
        self.ensure(m)
        prefix = self.nf_word(word[:-1])
        x = word[-1]
        vec = {s + (x,): c for s, c in prefix.items()}
        nf = self.echelons[m].reduce(vec)
        self._nf[word] = nf
        return nf

    def normal_form(self, terms: dict) -> dict:
        """Normal form of ``{word: coefficient}`` (any mix of degrees)."""
        out: dict = {}
        for w, c in terms.items():
            c = _field(c)
            for s, x in self.nf_word(tuple(w)).items():
                v = out.get(s, 0) + c * x
                if v:
                    out[s] = v
                else:
                    out.pop(s, None)
        return out

    def contains(self, terms: dict) -> bool:
        return not self.normal_form(terms)

    def dims_upto(self, degree: int) -> list:
        return [list(self.system_dims[m]) for m in range(2, degree + 1) if m in self.system_dims]


# --------------------------------------------------------------------------
# certificates


class InsufficientSamplesError(PoleError):
    """Fewer than the minimum number of usable q-samples."""


def _fmt_q(q0) -> str:
    q0 = Fraction(q0)
    return f"{q0.numerator}/{q0.denominator}"


@dataclass
class Certificate:
    identity: str
    params: dict
    samples: list = field(default_factory=list)
    per_sample: list = field(default_factory=list)
    system_dims: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        ok = len(self.samples) >= MIN_SAMPLES and all(s == "holds" for s in self.per_sample)
        return "holds" if ok else "fails"

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json_dict(self) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "samples": [_fmt_q(s) for s in self.samples],
            "per_sample": list(self.per_sample),
            "verdict": self.verdict,
            "system_dims": [list(d) for d in self.system_dims],
        }
        if self.skipped:
            out["skipped_samples"] = [[_fmt_q(s), why] for s, why in self.skipped]
        if self.failures:
            out["failures"] = self.failures
        return out


def _record_dims(cert: Certificate, gq: GradedQuotient, degree: int) -> None:
    if not cert.system_dims:
        cert.system_dims = gq.dims_upto(degree)


def ideal_member(p: NCPoly, rel: RelationSet, samples: Sequence, identity: str = "element", params: dict | None = None) -> Certificate:
    """Decide at each sample whether ``p`` lies in the ideal generated by ``rel``."""
    cert = Certificate(identity, dict(params or {}))
    for q0 in samples:
        q0 = Fraction(q0)
        try:
            at_q0 = p.specialize(q0)
            gq = rel.quotient(q0)
        except PoleError as exc:
            cert.skipped.append((q0, str(exc)))
            continue
        degree = max(at_q0.degrees(), default=0)
        ok = gq.contains(at_q0.terms)
        cert.samples.append(q0)
        cert.per_sample.append("holds" if ok else "fails")
        _record_dims(cert, gq, degree)
    if len(cert.samples) < MIN_SAMPLES:
        raise InsufficientSamplesError(
            f"only {len(cert.samples)} usable q-samples for {identity}; need {MIN_SAMPLES}"
        )
    return cert


def span_member(p: NCPoly, rel: RelationSet, q0) -> bool:
    """Direct check: is p in span{ u r v }?  Brute force, for small cases only."""
    q0 = Fraction(q0)
    at_q0 = p.specialize(q0)
    rels = rel.specialize(q0).relations
    for d, comp in at_q0.homogeneous_components().items():
        if d < 2:
            return False
        ech = _Echelon()
        for left in range(d - 1):
            right = d - 2 - left
            for u in itertools.product(range(rel.ngens), repeat=left):
                for v in itertools.product(range(rel.ngens), repeat=right):
                    for r in rels:
                        ech.insert({u + w + v: c for w, c in r.terms.items()})
        if ech.reduce(comp.terms):
            return False
    return True


def nc_matrix_residual_member(m: TensorOp, rel: RelationSet, samples: Sequence, identity: str = "matrix", params: dict | None = None) -> Certificate:
    """Entrywise membership; holds iff every entry is in the ideal."""
    cert = Certificate(identity, dict(params or {}))
    for q0 in samples:
        q0 = Fraction(q0)
        try:
            at_q0 = m.map(lambda p: p.specialize(q0))
            gq = rel.quotient(q0)
        except PoleError as exc:
            cert.skipped.append((q0, str(exc)))
            continue
        bad = [rc for rc, p in sorted(at_q0.entries.items()) if not gq.contains(p.terms)]
        degree = max((max(p.degrees()) for p in at_q0.entries.values()), default=0)
        cert.samples.append(q0)
        cert.per_sample.append("fails" if bad else "holds")
        for rc in bad:
            cert.failures.append({"sample": _fmt_q(q0), "entry": list(rc)})
        _record_dims(cert, gq, degree)
    if len(cert.samples) < MIN_SAMPLES:
        raise InsufficientSamplesError(
            f"only {len(cert.samples)} usable q-samples for {identity}; need {MIN_SAMPLES}"
        )
    return cert
