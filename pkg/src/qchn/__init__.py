"""Exact verification of Cayley-Hamilton-Newton identities in quantum matrix algebras."""

__version__ = "0.1.0"

from .scalars import Q, LaurentPoly, PoleError, ScalarQ, parse_scalar, qnum, sample_points
from .tensorspace import TensorOp, embed, embed_pair, identity_op, partial_trace
from .rmatrix import HeckeData, HeckeError, check_hecke, check_ybe, standard_rhat
from .projectors import antisymmetrizer, symmetrizer
from .qma import Certificate, NCPoly, ideal_member, re_relations, rtt_relations
from .chn import algebra, verify
from .classical import classical_chn_check, classical_symfun, specialize_quantum

__all__ = [
    "Q",
    "LaurentPoly",
    "PoleError",
    "ScalarQ",
    "parse_scalar",
    "qnum",
    "sample_points",
    "TensorOp",
    "embed",
    "embed_pair",
    "identity_op",
    "partial_trace",
    "HeckeData",
    "HeckeError",
    "check_hecke",
    "check_ybe",
    "standard_rhat",
    "antisymmetrizer",
    "symmetrizer",
    "Certificate",
    "NCPoly",
    "ideal_member",
    "re_relations",
    "rtt_relations",
    "algebra",
    "verify",
    "classical_chn_check",
    "classical_symfun",
    "specialize_quantum",
]
