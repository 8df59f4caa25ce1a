"""Symmetric functions, generalized matrix powers and identity residuals.

Every ``*_residual`` function returns left side minus right side of one
identity, as an NCPoly or as an n x n :class:`TensorOp` with NCPoly entries.
:func:`verify` specializes q at each sample, rebuilds the residual over the
rationals and submits it to the graded ideal-membership engine.

Conventions used throughout:

* ``under`` powers trace factors 1..k-1 (the free index sits on the last
  factor), ``over`` powers trace factors 2..k;
* in the identities with under-bar powers the symmetric-function
  coefficient multiplies from the LEFT, with over-bar powers from the RIGHT;
* ``(-T)^k`` means ``(-1)^k T^k``.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

from .projectors import antisymmetrizer, symmetrizer
from .qma import (
    MIN_SAMPLES,
    Certificate,
    InsufficientSamplesError,
    NCPoly,
    RelationSet,
    compose,
    generator_matrix,
    nc_chain,
    nc_sandwich_trace,
    re_relations,
    rtt_relations,
)
from .rmatrix import HeckeData
from .scalars import PoleError, qnum
from .tensorspace import TensorOp, embed, embed_pair, identity_op, weighted_partial_trace

log = logging.getLogger(__name__)

__all__ = [
    "RTTAlgebra",
    "REAlgebra",
    "algebra",
    "power_sum",
    "elem_sym",
    "compl_sym",
    "mat_power",
    "wedge_power",
    "sym_power",
    "chn_residual",
    "newton_residual",
    "ch_residual",
    "inverse_residual",
    "qdet_residual",
    "commutativity_residual",
    "re_ingredients",
    "re_chn_residual",
    "residual",
    "verify",
    "FAMILIES",
]

UNDER, OVER = "under", "over"


def _check_side(side: str) -> str:
    if side not in (UNDER, OVER):
        raise ValueError("side must be 'under' or 'over'")
    return side


def _lmul(p, m: TensorOp) -> TensorOp:
    return m.scale(p)


def _rmul(m: TensorOp, p) -> TensorOp:
    return m.rscale(p)


class RTTAlgebra:
    """Elements s_k, sigma_k, tau_k and the generalized powers of T."""

    kind = "rtt"

    def __init__(self, hd: HeckeData):
        self.hd = hd
        self.n = hd.n
        self.q = hd.q
        self.one = hd.q ** 0
        self._cache: dict = {}

    def _memo(self, key, build):
        val = self._cache.get(key)
        if val is None:
            val = self._cache[key] = build()
        return val

    def relations(self) -> RelationSet:
        return self._memo("relations", lambda: rtt_relations(self.hd.rhat))

    def generators(self) -> TensorOp:
        return generator_matrix(self.n, self.one)

    def rchain(self, k: int) -> TensorOp:
        """``R_1 R_2 ... R_{k-1}`` on V^(x)k."""

        def build():
            op = identity_op(self.n, k, self.one)
            for i in range(1, k):
                op = op @ embed_pair(self.hd.rhat, i, k)
            return op

        return self._memo(("rchain", k), build)

    def _projector(self, kind: str, k: int) -> TensorOp:
        if kind == "A":
            return antisymmetrizer(self.hd.rhat, k, self.q)
        return symmetrizer(self.hd.rhat, k, self.q)

    def _scalar_op(self, what: str, k: int) -> TensorOp:
        if what == "R":
            return self.rchain(k)
        return self._projector(what, k)

    def _traced(self, what: str, k: int, over: tuple):
        return self._memo(
            ("tr", what, k, over), lambda: nc_sandwich_trace(self._scalar_op(what, k), None, over)
        )

    # symmetric functions

    def power_sum(self, k: int) -> NCPoly:
        if k == 0:
            return NCPoly.const(self.one)
        return self._traced("R", k, tuple(range(1, k + 1)))

    def elem_sym(self, k: int) -> NCPoly:
        if k == 0:
            return NCPoly.const(self.one)
        return self._memo(("sigma", k), lambda: self.q ** k * self._traced("A", k, tuple(range(1, k + 1))))

    def compl_sym(self, k: int) -> NCPoly:
        if k == 0:
            return NCPoly.const(self.one)
        return self._memo(("tau", k), lambda: self.q ** (-k) * self._traced("S", k, tuple(range(1, k + 1))))

    # generalized powers

    def _power(self, what: str, k: int, side: str) -> TensorOp:
        _check_side(side)
        if k < 1:
            raise ValueError("powers start at k = 1")
        over = tuple(range(1, k)) if side == UNDER else tuple(range(2, k + 1))
        return self._traced(what, k, over)

    def mat_power(self, k: int, side: str = UNDER) -> TensorOp:
        return self._power("R", k, side)

    def wedge_power(self, k: int, side: str = UNDER) -> TensorOp:
        return self._power("A", k, side)

    def sym_power(self, k: int, side: str = UNDER) -> TensorOp:
        return self._power("S", k, side)


class REAlgebra:
    """Ingredients of the reflection-equation identities.

    ``L_bar(1) = L_1`` and ``L_bar(k) = R_{k-1} L_bar(k-1) R_{k-1}^{-1}``;
    the q-trace of a factor is the trace of ``D_r`` times it.
    """

    kind = "re"

    def __init__(self, hd: HeckeData):
        self.hd = hd
        self.n = hd.n
        self.q = hd.q
        self.one = hd.q ** 0
        self._cache: dict = {}

    _memo = RTTAlgebra._memo

    def relations(self) -> RelationSet:
        return self._memo("relations", lambda: re_relations(self.hd.rhat))

    def generators(self) -> TensorOp:
        return generator_matrix(self.n, self.one)

    @property
    def d_right(self) -> TensorOp:
        return self.hd.ensure_d()[0]

    def lbar_product(self, k: int) -> TensorOp:
        """``L_bar(1) L_bar(2) ... L_bar(k)`` on V^(x)k."""

        def build():
            rhat, rinv = self.hd.rhat, self.hd.inverse()
            cur = embed(self.generators(), 1, k)
            prod = cur
            for m in range(2, k + 1):
                cur = compose(compose(embed_pair(rhat, m - 1, k), cur), embed_pair(rinv, m - 1, k))
                prod = compose(prod, cur)
            return prod

        return self._memo(("lbar", k), build)

    def _qtraced(self, proj: TensorOp, k: int, over: tuple):
        x = compose(proj, self.lbar_product(k))
        out = weighted_partial_trace(x, self.d_right, over)
        if isinstance(out, int):
            return NCPoly.const(0) if out == 0 else out
        return out

    def wedge_power(self, k: int) -> TensorOp:
        if k == 1:
            return self.generators()
        return self._memo(
            ("wedge", k),
            lambda: self._qtraced(antisymmetrizer(self.hd.rhat, k, self.q), k, tuple(range(2, k + 1))),
        )

    def sym_power(self, k: int) -> TensorOp:
        if k == 1:
            return self.generators()
        return self._memo(
            ("sym", k),
            lambda: self._qtraced(symmetrizer(self.hd.rhat, k, self.q), k, tuple(range(2, k + 1))),
        )

    def power(self, k: int) -> TensorOp:
        """Ordinary matrix power L^k."""

        def build():
            out = self.generators()
            for _ in range(k - 1):
                out = compose(out, self.generators())
            return out

        return self._memo(("power", k), build)

    def _qtrace1(self, m: TensorOp) -> NCPoly:
        out = weighted_partial_trace(m, self.d_right, (1,))
        return out if isinstance(out, NCPoly) else NCPoly.const(0)

    def elem_sym(self, k: int) -> NCPoly:
        if k == 0:
            return NCPoly.const(self.one)
        return self._memo(("sigma", k), lambda: self.q ** k * self._qtrace1(self.wedge_power(k)))

    def compl_sym(self, k: int) -> NCPoly:
        if k == 0:
            return NCPoly.const(self.one)
        return self._memo(("tau", k), lambda: self.q ** (-k) * self._qtrace1(self.sym_power(k)))


def algebra(hd: HeckeData, kind: str = "rtt"):
    """Cached :class:`RTTAlgebra` or :class:`REAlgebra` for this R-matrix."""
    if kind not in ("rtt", "re"):
        raise ValueError("algebra kind must be 'rtt' or 're'")
    key = ("algebra", kind)
    alg = hd.cache.get(key)
    if alg is None:
        alg = hd.cache[key] = (RTTAlgebra if kind == "rtt" else REAlgebra)(hd)
    return alg


# -- thin functional surface --------------------------------------------------


def power_sum(hd: HeckeData, k: int) -> NCPoly:
    return algebra(hd).power_sum(k)


def elem_sym(hd: HeckeData, k: int) -> NCPoly:
    return algebra(hd).elem_sym(k)


def compl_sym(hd: HeckeData, k: int) -> NCPoly:
    return algebra(hd).compl_sym(k)


def mat_power(hd: HeckeData, k: int, side: str = UNDER) -> TensorOp:
    return algebra(hd).mat_power(k, side)


def wedge_power(hd: HeckeData, k: int, side: str = UNDER) -> TensorOp:
    return algebra(hd).wedge_power(k, side)


def sym_power(hd: HeckeData, k: int, side: str = UNDER) -> TensorOp:
    return algebra(hd).sym_power(k, side)


# -- residuals ----------------------------------------------------------------


def _zero_matrix(n: int) -> TensorOp:
    return TensorOp(n, 1, {}, check=False)


def chn_residual(alg: RTTAlgebra, j: int, variant: str = "le", flip_side: bool = False) -> TensorOp:
    """Cayley-Hamilton-Newton identity, left minus right.

    le:  j_q T^{wedge j, under} = sum_k (-1)^(j-k+1) sigma_k T^{j-k, under}
    le2: over-bar powers, sigma_k on the right
    le3: j_q T^{S j, under} = sum_k tau_k T^{j-k, under}
    le4: over-bar powers, tau_k on the right

    ``flip_side`` moves the coefficients to the wrong side (negative control).
    """
    if j < 1:
        raise ValueError("j must be positive")
    if variant not in ("le", "le2", "le3", "le4"):
        raise ValueError(f"unknown CHN variant {variant!r}")
    q = alg.q
    side = UNDER if variant in ("le", "le3") else OVER
    left = (side == UNDER) != flip_side
    wedge = variant in ("le", "le2")
    top = alg.wedge_power(j, side) if wedge else alg.sym_power(j, side)
    res = top.scale(qnum(j, q))
    for k in range(j):
        coeff = alg.elem_sym(k) if wedge else alg.compl_sym(k)
        if wedge:
            coeff = (-1) ** (j - k + 1) * coeff
        power = alg.mat_power(j - k, side)
        res = res - (_lmul(coeff, power) if left else _rmul(power, coeff))
    return res


def newton_residual(alg: RTTAlgebra, j: int, variant: str = "qNewton") -> NCPoly:
    """Newton relations between s_k, sigma_k and tau_k, left minus right."""
    if j < 1:
        raise ValueError("j must be positive")
    q = alg.q
    s, sig, tau = alg.power_sum, alg.elem_sym, alg.compl_sym
    if variant == "qNewton":
        res = q ** (-j) * qnum(j, q) * sig(j)
        for k in range(1, j):
            res = res - (-1) ** (k - 1) * (sig(j - k) * s(k))
        return res - (-1) ** (j - 1) * s(j)
    if variant == "qNewton2":
        res = q ** j * qnum(j, q) * tau(j)
        for k in range(1, j):
            res = res - tau(j - k) * s(k)
        return res - s(j)
    if variant == "qNewton3":
        res = NCPoly()
        for k in range(j + 1):
            res = res + (-1) ** k * q ** (2 * (j - k)) * (tau(j - k) * sig(k))
        return res
    raise ValueError(f"unknown Newton variant {variant!r}")


def ch_residual(alg: RTTAlgebra, variant: str = "hc1", swap_d: bool = False) -> TensorOp:
    """q-Cayley-Hamilton identity for an even R-matrix of height h.

    hc1: sum_{k=1}^h sigma_{h-k} (-T)^{k, under} + sigma_h D_l
    hc2: sum_{k=1}^h (-T)^{k, over} sigma_{h-k} + sigma_h D_r
    """
    if variant not in ("hc1", "hc2"):
        raise ValueError(f"unknown Cayley-Hamilton variant {variant!r}")
    h = alg.hd.ensure_height()
    d_r, d_l = alg.hd.ensure_d()
    if swap_d:
        d_r, d_l = d_l, d_r
    side = UNDER if variant == "hc1" else OVER
    res = _zero_matrix(alg.n)
    for k in range(1, h + 1):
        power = alg.mat_power(k, side).scale((-1) ** k)
        coeff = alg.elem_sym(h - k)
        res = res + (_lmul(coeff, power) if side == UNDER else _rmul(power, coeff))
    d = d_l if variant == "hc1" else d_r
    return res + d.scale(alg.elem_sym(h))


def inverse_residual(alg: RTTAlgebra, j: int, variant: str = "inv1", drop_q_power: bool = False) -> TensorOp:
    """Inverse CHN formulas expressing T^j through wedge or symmetric powers.

    inv1: T^{j, under} = sum_k (-1)^(k+1) q^(2(j-k)) k_q tau_{j-k} T^{wedge k, under}
    inv2: over-bar, tau on the right
    inv3: T^{j, under} = sum_k (-1)^(j-k) q^(-2(j-k)) k_q sigma_{j-k} T^{S k, under}
    inv4: over-bar, sigma on the right

    ``drop_q_power`` omits the q^(+-2(j-k)) factor (negative control).
    """
    if j < 1:
        raise ValueError("j must be positive")
    if variant not in ("inv1", "inv2", "inv3", "inv4"):
        raise ValueError(f"unknown inverse variant {variant!r}")
    q = alg.q
    side = UNDER if variant in ("inv1", "inv3") else OVER
    via_wedge = variant in ("inv1", "inv2")
    res = alg.mat_power(j, side)
    for k in range(1, j + 1):
        if via_wedge:
            sign = (-1) ** (k + 1)
            qp = q ** (2 * (j - k))
            coeff = alg.compl_sym(j - k)
            power = alg.wedge_power(k, side)
        else:
            sign = (-1) ** (j - k)
            qp = q ** (-2 * (j - k))
            coeff = alg.elem_sym(j - k)
            power = alg.sym_power(k, side)
        if drop_q_power:
            qp = alg.one
        c = sign * qp * qnum(k, q)
        term = _lmul(coeff, power) if side == UNDER else _rmul(power, coeff)
        res = res - term.scale(c)
    return res


def qdet_residual(alg: RTTAlgebra) -> TensorOp:
    """``A(h) T_1...T_h - A(h) q^(-h) sigma_h`` on V^(x)h."""
    h = alg.hd.ensure_height()
    a_h = antisymmetrizer(alg.hd.rhat, h, alg.q)
    det = alg.q ** (-h) * alg.elem_sym(h)
    return compose(a_h, nc_chain(alg.n, h, alg.one)) - a_h.scale(det)


def commutativity_residual(alg: RTTAlgebra, k: int, l: int) -> NCPoly:
    """``s_k s_l - s_l s_k``."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    a, b = alg.power_sum(k), alg.power_sum(l)
    return a * b - b * a


def re_ingredients(alg: REAlgebra, k: int) -> tuple:
    """``(L_bar product, L^wedge k, L^S k, L^k, sigma_k(L), tau_k(L))``."""
    return (
        alg.lbar_product(k),
        alg.wedge_power(k),
        alg.sym_power(k),
        alg.power(k),
        alg.elem_sym(k),
        alg.compl_sym(k),
    )


def re_chn_residual(alg: REAlgebra, j: int, variant: str = "wedge", flip_side: bool = False) -> TensorOp:
    """Reflection-equation CHN identity, left minus right.

    wedge: j_q L^{wedge j} = sum_k (-1)^(j-k+1) sigma_k(L) L^{j-k}
    sym:   j_q L^{S j}     = sum_k tau_k(L) L^{j-k}
    """
    if j < 1:
        raise ValueError("j must be positive")
    if variant not in ("wedge", "sym"):
        raise ValueError(f"unknown RE variant {variant!r}")
    q = alg.q
    wedge = variant == "wedge"
    top = alg.wedge_power(j) if wedge else alg.sym_power(j)
    res = top.scale(qnum(j, q))
    for k in range(j):
        coeff = alg.elem_sym(k) if wedge else alg.compl_sym(k)
        if wedge:
            coeff = (-1) ** (j - k + 1) * coeff
        power = alg.power(j - k)
        res = res - (_rmul(power, coeff) if flip_side else _lmul(coeff, power))
    return res


# -- verification driver -------------------------------------------------------

FAMILIES = {
    "rtt": {
        "chn": ("le", "le2", "le3", "le4"),
        "newton": ("qNewton", "qNewton2", "qNewton3"),
        "ch": ("hc1", "hc2"),
        "inverse": ("inv1", "inv2", "inv3", "inv4"),
        "qdet": ("qdet",),
        "commute": ("commute",),
    },
    "re": {
        "chn": ("wedge", "sym"),
    },
}

CONTROLS = ("flip_side", "drop_q_power", "swap_d")


def residual(alg, family: str, variant: str, j: int = 1, l: int | None = None, **controls):
    """Dispatch to the residual builder for one identity."""
    kind = alg.kind
    if family not in FAMILIES[kind] or variant not in FAMILIES[kind][family]:
        raise ValueError(f"unknown identity {kind}/{family}/{variant}")
    if kind == "re":
        return re_chn_residual(alg, j, variant, **controls)
    if family == "chn":
        return chn_residual(alg, j, variant, **controls)
    if family == "newton":
        return newton_residual(alg, j, variant)
    if family == "ch":
        return ch_residual(alg, variant, **controls)
    if family == "inverse":
        return inverse_residual(alg, j, variant, **controls)
    if family == "qdet":
        return qdet_residual(alg)
    return commutativity_residual(alg, j, l if l is not None else j)


def identity_id(kind: str, family: str, variant: str, j: int | None, l: int | None = None, **controls) -> str:
    parts = [kind, family, variant]
    if family == "commute":
        parts.append(f"k={j},l={l}")
    elif j is not None and family not in ("ch", "qdet"):
        parts.append(f"j={j}")
    parts += [c for c in CONTROLS if controls.get(c)]
    return "/".join(parts)


def _specialized(hd: HeckeData, q0: Fraction) -> HeckeData:
    key = ("specialized", q0)
    sub = hd.cache.get(key)
    if sub is None:
        sub = hd.cache[key] = hd.specialize(q0)
    return sub


def _entries(res) -> list:
    if isinstance(res, NCPoly):
        return [((), res)]
    return sorted(res.entries.items())


def verify(
    hd: HeckeData,
    kind: str,
    family: str,
    variant: str,
    j: int = 1,
    samples: Sequence = (),
    l: int | None = None,
    **controls,
) -> Certificate:
    """Certificate that the residual lies in the defining ideal at every sample."""
    controls = {c: True for c in CONTROLS if controls.get(c)}
    if family == "commute" and l is None:
        l = j
    if family in ("ch", "qdet"):
        jj = None
    else:
        jj = j
    ident = identity_id(kind, family, variant, jj, l, **controls)
    if hd.name:
        ident = f"{hd.name}/{ident}"
    params = {"n": hd.n, "rmatrix": hd.name, "algebra": kind, "family": family, "variant": variant}
    if jj is not None:
        params["j"] = j
    if family == "commute":
        params["l"] = l
    params.update(controls)
    cert = Certificate(ident, params)
    for q0 in samples:
        q0 = Fraction(q0)
        try:
            sub = _specialized(hd, q0)
            alg = algebra(sub, kind)
            res = residual(alg, family, variant, j, l, **controls)
            gq = alg.relations().quotient()
        except PoleError as exc:
            log.warning("sample q=%s skipped for %s: %s", q0, ident, exc)
            cert.skipped.append((q0, str(exc)))
            continue
        bad = []
        degree = 0
        for rc, p in _entries(res):
            degree = max(degree, max(p.degrees(), default=0))
            if not gq.contains(p.terms):
                bad.append(rc)
        cert.samples.append(q0)
        cert.per_sample.append("fails" if bad else "holds")
        for rc in bad:
            cert.failures.append({"sample": f"{q0.numerator}/{q0.denominator}", "entry": list(rc)})
        if not cert.system_dims:
            gq.ensure(max(degree, 2))
            cert.system_dims = gq.dims_upto(max(degree, 2))
    if len(cert.samples) < MIN_SAMPLES:
        raise InsufficientSamplesError(
            f"only {len(cert.samples)} usable q-samples for {ident}; need {MIN_SAMPLES}"
        )
    return cert
