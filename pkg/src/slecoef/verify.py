"""Self-checks runnable from the command line (``slecoef verify SUITE``)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .closed_forms import KAPPA2, KAPPA6, ClosedFormSpec, compare, expand_closed_form
from .errors import UsageError
from .expr import evaluate
from .solver import bandwidth, first_row, solve_four_point, solve_two_point
from .spectrum import (
    TridiagonalOp,
    beta_formula,
    decaying_eigenpairs,
    family_point,
    family_points,
    fit_exponent,
    hahn_spectrum,
    top_eigenvalue,
)
from .stencil import (
    EXTERIOR,
    INTERIOR,
    EtaSequence,
    Params,
    compile_stencil,
    exterior_table,
    interior_table,
    levy_table,
    loewner_operator,
)

# Interior <|F_n|^2> generalised to any q, as rho_nn(q, kappa).
INTERIOR_FORMULAS = {
    2: "2*q**2/(2+kappa)",
    3: "q**2/36*(9*kappa**2+8*(14*q+7+16*q**2)*kappa+12*(4*q+1)**2)"
       "/((2+kappa)*(1+kappa)*(6+kappa))",
    4: "q**2/72*(240*(2+3*q+4*q**2)**2+16*kappa**5"
       "+8*(744*q**4+340+1152*q+2363*q**2+1572*q**3)*kappa**2"
       "+8*(701*q**2+378*q**3+414*q+192+144*q**4)*kappa**3"
       "+32*(635*q**2+56+498*q**3+272*q**4+258*q)*kappa"
       "+(204*q+243*q**2+284)*kappa**4)"
       "/((2+kappa)**2*(1+kappa)*(6+kappa)*(2+3*kappa)*(10+kappa))",
}

# Exterior <|F_n|^2> at q = 2.
EXTERIOR_FORMULAS = {
    1: "1/(kappa+1)",
    2: "8*kappa*(6+kappa)/(9*(kappa+1)*(3*kappa+2)*(kappa+10))",
    3: "kappa*(6+kappa)*(27*kappa**3+446*kappa**2+1300*kappa+264)"
       "/(36*(kappa+1)*(kappa+3)*(3*kappa+2)*(2*kappa+1)*(kappa+10)*(kappa+14))",
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def random_rationals(rng: random.Random, count: int, num_max: int = 40, den_max: int = 12) -> list[Fraction]:
    return [Fraction(rng.randint(1, num_max), rng.randint(1, den_max)) for _ in range(count)]


def theorem1(nmax: int = 40) -> list[Check]:
    out = []
    m6 = solve_two_point(Params.brownian(2, 6), nmax)
    bad6 = [
        (i, j) for i, j, v in m6.items()
        if v != (1 if i == j else Fraction(-1, 2) if abs(i - j) == 1 else 0)
    ]
    out.append(Check(f"kappa=6 tridiagonal pattern, nmax={nmax}", not bad6, f"mismatch at {bad6[:3]}" if bad6 else ""))
    m2 = solve_two_point(Params.brownian(2, 2), nmax)

    def expect2(i, j):
        n, d = max(i, j), abs(i - j)
        return {0: Fraction(n), 1: Fraction(1 - 2 * n, 3), 2: Fraction(n - 1, 6)}.get(d, 0)

    bad2 = [(i, j) for i, j, v in m2.items() if v != expect2(i, j)]
    out.append(Check(f"kappa=2 five-diagonal pattern, nmax={nmax}", not bad2, f"mismatch at {bad2[:3]}" if bad2 else ""))
    return out


def formulas(points: int = 5, seed: int = 1) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for n, text in INTERIOR_FORMULAS.items():
        bad = []
        for q, kappa in zip(random_rationals(rng, points), random_rationals(rng, points)):
            m = solve_two_point(Params.brownian(q, kappa), n)
            if m[n, n] != evaluate(text, q=q, kappa=kappa):
                bad.append((q, kappa))
        out.append(Check(f"interior rho_{n}{n} formula at {points} points", not bad, f"fails at {bad[:2]}" if bad else ""))
    for n, text in EXTERIOR_FORMULAS.items():
        bad = []
        for kappa in random_rationals(rng, points):
            m = solve_two_point(Params.brownian(2, kappa, EXTERIOR), n)
            if m[n, n] != evaluate(text, kappa=kappa):
                bad.append(kappa)
        out.append(Check(f"exterior <|F_{n}|^2> formula at {points} points", not bad, f"fails at {bad[:2]}" if bad else ""))
    return out


FAMILY_KAPPAS = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(6), Fraction(8))


def closed_forms(nmax: int = 20) -> list[Check]:
    out = formulas()
    for spec in [KAPPA6, KAPPA2] + [ClosedFormSpec.family(k) for k in FAMILY_KAPPAS]:
        rep = compare(expand_closed_form(spec, nmax), solve_two_point(Params.brownian(spec.q, spec.kappa), nmax))
        out.append(Check(
            f"closed form a={spec.a} b={spec.b} (q={spec.q}, kappa={spec.kappa}) to nmax={nmax}",
            not rep,
            f"{len(rep)} differing entries" if rep else "",
        ))
    return out


def _stencil_mismatches(stencil, table: Callable, lo: int, hi: int) -> int:
    bad = 0
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            for n in range(3):
                for k in range(3):
                    if stencil(i, j, n, k) != table(i, j, n, k):
                        bad += 1
    return bad


def stencil_equivalence(points: int = 5, size: int = 50, seed: int = 2) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for q, kappa in zip(random_rationals(rng, points), random_rationals(rng, points)):
        pi = Params.brownian(q, kappa)
        pe = Params.brownian(q, kappa, EXTERIOR)
        eta = EtaSequence.brownian(kappa)
        cases = [
            ("interior", compile_stencil(loewner_operator([q], kappa=kappa)),
             lambda i, j, n, k: interior_table(i, j, n, k, pi), 1),
            ("exterior", compile_stencil(loewner_operator([q], kappa=kappa, mode=EXTERIOR)),
             lambda i, j, n, k: exterior_table(i, j, n, k, pe), -1),
            ("levy-brownian", compile_stencil(loewner_operator([q], eta=eta)),
             lambda i, j, n, k: levy_table(i, j, n, k, q, eta), 1),
        ]
        for label, st, table, lo in cases:
            bad = _stencil_mismatches(st, table, lo, size)
            out.append(Check(f"{label} stencil = table at q={q}, kappa={kappa}", not bad, f"{bad} mismatches" if bad else ""))
    out.extend(backend_agreement())
    return out


def backend_agreement(nmax: int = 60, rel: float = 1e-10) -> list[Check]:
    out = []
    for q, kappa in [(Fraction(7, 3), Fraction(5, 2)), (Fraction(2), Fraction(10, 9)), (Fraction(1, 2), Fraction(4))]:
        params = Params.brownian(q, kappa)
        ex = solve_two_point(params, nmax)
        fl = solve_two_point(params, nmax, "float:128")
        worst = 0.0
        for i, j, v in ex.items():
            f = fl[i, j].to_rational()
            err = abs(f - v) / abs(v) if v else abs(f)
            worst = max(worst, float(err))
        out.append(Check(f"float:128 vs exact at q={q}, kappa={kappa}, nmax={nmax}", worst < rel, f"max rel err {worst:.1e}"))
    return out


def _eta_table(head: list, rng: random.Random, length: int = 40) -> EtaSequence:
    vals = list(head) + [Fraction(rng.randint(0, 60), rng.randint(1, 5)) for _ in range(length - len(head))]
    return EtaSequence([0] + vals)


def levy(nmax: int = 20, seed: int = 3) -> list[Check]:
    rng = random.Random(seed)
    out = []
    three = [
        ("eta_n = 3 n^2", EtaSequence(stable=(3, 2))),
        ("eta_n = 3 |n|", EtaSequence(stable=(3, 1))),
        ("random table, eta_1 = 3", _eta_table([3], rng)),
    ]
    one = [
        ("eta_n = n^2", EtaSequence(stable=(1, 2))),
        ("random table, eta_1 = 1, eta_2 = 4", _eta_table([1, 4], rng)),
        ("random table, eta_1 = 1, eta_2 = 4 (second)", _eta_table([1, 4], rng)),
    ]
    for label, eta in three:
        d = solve_two_point(Params.levy(2, eta), nmax).diagonal()
        bad = [n for n, v in enumerate(d, 1) if v != 1]
        out.append(Check(f"{label}: rho_nn = 1 for n <= {nmax}", not bad, f"fails at n={bad[:3]}" if bad else ""))
    for label, eta in one:
        d = solve_two_point(Params.levy(2, eta), nmax).diagonal()
        bad = [n for n, v in enumerate(d, 1) if v != n]
        out.append(Check(f"{label}: rho_nn = n for n <= {nmax}", not bad, f"fails at n={bad[:3]}" if bad else ""))
    return out


def banded(Nmax: int = 4, nmax: int = 25) -> list[Check]:
    out = []
    for p in family_points(Nmax):
        m = solve_two_point(Params.brownian(p.q, p.kappa), nmax)
        bw = bandwidth(m)
        row = first_row(Params.brownian(p.q, p.kappa), nmax)
        tail = [j for j, v in enumerate(row, 1) if j > p.N + 1 and v != 0]
        out.append(Check(
            f"family (N={p.N}, n={p.n}): bandwidth {p.N}, first row ends at j={p.N + 1}",
            bw == p.N and not tail and row[p.N] != 0,
            f"bandwidth {bw}" + (f", nonzero tail at {tail[:3]}" if tail else ""),
        ))
    return out


SPECTRUM_POINTS = [
    (Fraction(2), Fraction(6), Fraction(3), 1e-6),
    (Fraction(2), Fraction(2), Fraction(4), 1e-6),
    (Fraction(21, 8), Fraction(1), Fraction(49, 8), 1e-4),
    (Fraction(15, 8), Fraction(4), Fraction(25, 8), 1e-4),
]


def spectrum(L: int = 100, fit_nmax: int = 400) -> list[Check]:
    out = banded()
    for q, kappa, expected, tol in SPECTRUM_POINTS:
        bf = beta_formula(q, kappa)
        be = top_eigenvalue(TridiagonalOp.brownian(q, kappa, L))
        diag = solve_two_point(Params.brownian(q, kappa), fit_nmax, "float:53").diagonal()
        bfit = fit_exponent(diag, fit_nmax // 4, fit_nmax)
        ok = bf == expected and abs(be - float(bf)) < tol and abs(bfit - float(bf)) < 0.05
        out.append(Check(
            f"beta at q={q}, kappa={kappa}",
            ok,
            f"formula {bf}, eigen {be:.8f}, fit {bfit:.6f}",
        ))
    for N in range(1, 7):
        p = family_point(N, N)
        hb = hahn_spectrum(N, N)[0]
        out.append(Check(f"Hahn j=0 equals beta formula at N={N}", hb == beta_formula(p.q, p.kappa), f"{hb}"))
    for p in family_points(2):
        eig = [e.value for e in decaying_eigenpairs(TridiagonalOp.brownian(p.q, p.kappa, L))]
        miss = [h for h in hahn_spectrum(p.N, p.n) if not any(abs(complex(e) - float(h)) < 1e-4 for e in eig)]
        out.append(Check(f"Hahn spectrum (N={p.N}, n={p.n}) among eigenvalues of R", not miss, f"missing {miss}" if miss else ""))
    return out


def fourpoint(D: int = 8, with_mc: bool = True) -> list[Check]:
    from . import mc

    out = []
    for q1, kappa in [(Fraction(2), Fraction(6)), (Fraction(7, 3), Fraction(5, 2))]:
        mm = solve_four_point(q1, 0, kappa, D)
        two = solve_two_point(Params.brownian(q1, kappa), D)
        bad = [
            k for k, v in mm.entries.items()
            if v != (two[k[0], k[2]] if k[1] == 1 and k[3] == 1 else 0)
        ]
        out.append(Check(f"q2=0 reduction at q1={q1}, kappa={kappa}, D={D}", not bad, f"{len(bad)} bad" if bad else ""))
    q1, q2, kappa = Fraction(2), Fraction(3, 2), Fraction(5, 3)
    a = solve_four_point(q1, q2, kappa, D)
    b = solve_four_point(q2, q1, kappa, D)
    bad = [k for k, v in a.entries.items() if b[(k[1], k[0], k[3], k[2])] != v]
    out.append(Check(f"point swap symmetry (q1,q2)=({q1},{q2}), D={D}", not bad, f"{len(bad)} bad" if bad else ""))
    bad = [k for k, v in a.entries.items() if a[(k[2], k[3], k[0], k[1])] != v]
    out.append(Check("conjugation symmetry", not bad, f"{len(bad)} bad" if bad else ""))
    if with_mc:
        exact = solve_four_point(2, 2, 6, D)
        est = mc.run(mc.McConfig(nmax=5, paths=10_000, seed=42, kappa=6.0, fourth_degree=D))
        worst = max(abs(e.mean - float(exact[k])) / e.stderr for k, e in est.fourth.items())
        out.append(Check(f"balanced entries vs Monte Carlo at kappa=6 ({len(est.fourth)} moments)", worst < 3,
                         f"worst deviation {worst:.2f} sigma"))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "theorem1": theorem1,
    "closed-forms": closed_forms,
    "stencil-equivalence": stencil_equivalence,
    "levy": levy,
    "spectrum": spectrum,
    "fourpoint": fourpoint,
}


def run_suite(name: str) -> list[Check]:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name]()
