"""Recurrence stencils: transcribed tables and the operator compiler."""

from .compiler import (
    EtaOfDifference,
    EulerPoly,
    OperatorDescription,
    Stencil,
    Term,
    compile_stencil,
    loewner_operator,
)
from .params import EXTERIOR, INTERIOR, Brownian, EtaSequence, Levy, Params
from .poly import Poly
from .tables import (
    OFFSETS,
    eta_form_coefficient,
    exterior_table,
    hand_table,
    interior_table,
    levy_table,
)

__all__ = [
    "EXTERIOR",
    "INTERIOR",
    "OFFSETS",
    "Brownian",
    "EtaOfDifference",
    "EtaSequence",
    "EulerPoly",
    "Levy",
    "OperatorDescription",
    "Params",
    "Poly",
    "Stencil",
    "Term",
    "compile_stencil",
    "eta_form_coefficient",
    "exterior_table",
    "hand_table",
    "interior_table",
    "levy_table",
    "loewner_operator",
]
