"""Four-point coefficients rho_{i1,i2;j1,j2} from the compiled rank-2 stencil."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ..arith import as_rational, render
from ..errors import SingularPivotError, UsageError
from ..stencil.compiler import Stencil, compile_stencil, loewner_operator


def graded_lex(D: int) -> list[tuple[int, int, int, int]]:
    """Multi-indices (i1, i2, j1, j2) >= 1 with total degree <= D, graded-lex."""
    idx = [t for t in product(range(1, D + 1), repeat=4) if sum(t) <= D]
    idx.sort(key=lambda t: (sum(t), t))
    return idx


@dataclass
class MultiMatrix:
    q1: Fraction
    q2: Fraction
    kappa: Fraction
    D: int
    entries: dict = field(repr=False)

    def __getitem__(self, key) -> Fraction:
        key = tuple(key)
        if key in self.entries:
            return self.entries[key]
        if len(key) == 4 and min(key) >= 1 and sum(key) <= self.D:
            raise KeyError(key)
        raise KeyError(f"{key} outside the truncation (total degree <= {self.D})")

    def balanced(self) -> dict:
        """Entries with i1 + i2 = j1 + j2; at q1 = q2 = 2 these are the
        fourth moments <F_i1 F_i2 conj(F_j1) conj(F_j2)>."""
        return {k: v for k, v in self.entries.items() if k[0] + k[1] == k[2] + k[3]}

    def unbalanced(self) -> dict:
        return {k: v for k, v in self.entries.items() if k[0] + k[1] != k[2] + k[3]}

    def to_json(self) -> dict:
        return {
            "q1": render(self.q1),
            "q2": render(self.q2),
            "kappa": render(self.kappa),
            "D": self.D,
            "entries": [[*k, render(v)] for k, v in sorted(self.entries.items(),
                                                          key=lambda kv: (sum(kv[0]), kv[0]))],
        }


def four_point_stencil(q1, q2, kappa) -> Stencil:
    return compile_stencil(loewner_operator([q1, q2], kappa=kappa))


def solve_four_point(q1, q2, kappa, D: int, stencil: Stencil | None = None) -> MultiMatrix:
    """Consecutive fill over the 4-index lattice in graded-lex order.

    Every nonzero offset lowers the total degree, so each entry depends only
    on entries already computed and the truncation by total degree is exact.
    """
    q1, q2, kappa = as_rational(q1), as_rational(q2), as_rational(kappa)
    if D < 4:
        raise UsageError("total degree D must be >= 4 to contain the seed")
    st = stencil or four_point_stencil(q1, q2, kappa)
    if st.rank != 2:
        raise UsageError("four-point fill needs a rank-2 stencil")
    pivot = st.pivot_offset()
    shifts = [s for s in st.offsets if s != pivot]
    s_vals: dict[tuple, Fraction] = {}
    seed = (1, 1, 1, 1)
    for idx in graded_lex(D):
        if idx == seed:
            s_vals[idx] = Fraction(1)
            continue
        acc = Fraction(0)
        for off in shifts:
            src = (idx[0] - off[0], idx[1] - off[1], idx[2] - off[2], idx[3] - off[3])
            v = s_vals.get(src)
            if v:
                acc += st.coefficient(idx, off) * v
        piv = st.coefficient(idx, pivot)
        if piv == 0:
            raise SingularPivotError(idx)
        s_vals[idx] = -acc / piv
    entries = {k: v / (k[0] * k[1] * k[2] * k[3]) for k, v in s_vals.items()}
    return MultiMatrix(q1, q2, kappa, D, entries)
