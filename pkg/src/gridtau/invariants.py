"""Concordance invariants from reduced grid complexes, plus executable checks.

Gradings are carried as integers: Maslov ``m`` as is, Alexander levels and
the class grading ``k`` doubled.  The class grading of a generator in grid
Maslov grading ``m`` of an ``l``-component link is ``k = m + (l - 1)/2``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from . import algebra, chain
from .braid import (
    BraidWord,
    QuasipositiveWord,
    closure_components,
    expand_quasipositive,
    legendrian_tb_rot,
    qp_euler_characteristic,
    signature,
    to_grid,
)
from .grid import GridDiagram, components


class NotDivisible(ArithmeticError):
    """The generating polynomial is not a multiple of the stabilization factor."""


# ---------------------------------------------------------------------------
# half-integer helpers


def half(value2: int) -> Fraction:
    return Fraction(value2, 2)


def half_str(value2: int) -> int | str:
    """JSON form of a doubled value: an int when whole, else the string ``"p/2"``."""
    return value2 // 2 if value2 % 2 == 0 else f"{value2}/2"


def half_text(value2: int) -> str:
    return str(half_str(value2))


# ---------------------------------------------------------------------------
# polynomials


class BigradedPolynomial:
    """Finitely supported map ``(maslov, 2 * alexander) -> coefficient``."""

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable[tuple[int, int]] = ()):
        if isinstance(terms, Mapping):
            data = Counter({k: v for k, v in terms.items() if v})
        else:
            data = Counter(terms)
        self.terms: dict[tuple[int, int], int] = dict(sorted(data.items(), key=lambda kv: (-kv[0][0], -kv[0][1])))

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedPolynomial) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"BigradedPolynomial({self.terms})"

    def total(self) -> int:
        return sum(self.terms.values())

    def times_factor(self, power: int = 1) -> "BigradedPolynomial":
        """Multiply by ``(1 + q^-1 t^-1)^power``."""
        cur = Counter(self.terms)
        for _ in range(power):
            nxt: Counter = Counter()
            for (m, a2), c in cur.items():
                nxt[(m, a2)] += c
                nxt[(m - 1, a2 - 2)] += c
            cur = nxt
        return BigradedPolynomial(cur)

    def at_t_equals_one(self) -> dict[int, int]:
        """Specialize the Alexander variable to 1: Maslov degree -> coefficient."""
        out: Counter = Counter()
        for (m, _), c in self.terms.items():
            out[m] += c
        return dict(sorted(out.items(), reverse=True))

    def euler_characteristic(self) -> dict[int, int]:
        """Specialize ``q = -1``: doubled Alexander degree -> signed coefficient."""
        out: Counter = Counter()
        for (m, a2), c in self.terms.items():
            out[a2] += c if m % 2 == 0 else -c
        return {k: v for k, v in sorted(out.items(), reverse=True) if v}


def divide_stabilization_factor(P: BigradedPolynomial, power: int) -> BigradedPolynomial:
    """Exact quotient of ``P`` by ``(1 + q^-1 t^-1)^power``; raises NotDivisible."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    cur = dict(P.terms)
    for _ in range(power):
        quotient: dict[tuple[int, int], int] = {}
        # peel off terms from the top of each diagonal (m, a2) ~ (m - 1, a2 - 2)
        for (m, a2) in sorted(cur, key=lambda k: (-k[0], -k[1])):
            c = cur[(m, a2)] - quotient.get((m + 1, a2 + 2), 0)
            if c < 0:
                raise NotDivisible(f"negative coefficient at q^{m} t^{half_text(a2)}")
            if c:
                quotient[(m, a2)] = c
        Q = BigradedPolynomial(quotient)
        if Q.times_factor(1).terms != BigradedPolynomial(cur).terms:
            raise NotDivisible("nonzero remainder after dividing by the stabilization factor")
        cur = Q.terms
    return BigradedPolynomial(cur)


# ---------------------------------------------------------------------------
# tau function


@dataclass(frozen=True)
class TauFunction:
    """Doubled class grading ``2k`` -> sorted doubled levels."""

    components: int
    levels: dict[int, tuple[int, ...]]

    @property
    def top2(self) -> int:
        return self.levels[self.components - 1][0]

    @property
    def bottom2(self) -> int:
        return self.levels[1 - self.components][0]

    def all_levels2(self) -> list[int]:
        return [v for vals in self.levels.values() for v in vals]


def tau_function(Q: BigradedPolynomial, ell: int) -> TauFunction:
    """Read the tau function off the quotient polynomial of an ``ell``-component link."""
    levels: dict[int, list[int]] = {}
    for (m, a2), c in Q.terms.items():
        if not -(ell - 1) <= m <= 0:
            raise chain.ComplexInconsistency(f"quotient has support in Maslov grading {m}")
        levels.setdefault(2 * m + ell - 1, []).extend([a2] * c)
    for m in range(-(ell - 1), 1):
        k2 = 2 * m + ell - 1
        expected = comb(ell - 1, -m)
        got = len(levels.get(k2, []))
        if got != expected:
            raise chain.ComplexInconsistency(
                f"grading k = {half_text(k2)} carries {got} classes, expected {expected}")
    return TauFunction(ell, {k2: tuple(sorted(v)) for k2, v in sorted(levels.items(), reverse=True)})


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class InvariantReport:
    input: str
    grid_size: int
    components: int
    total_rank: int
    tau: TauFunction
    signature: int | None = None
    euler_char_bound: int | None = None
    delta2: int | None = None
    bigraded: dict[tuple[int, int], int] | None = None
    checks: list[Check] = field(default_factory=list)

    @property
    def tau_top2(self) -> int:
        return self.tau.top2

    @property
    def tau_bot2(self) -> int:
        return self.tau.bottom2

    @property
    def tau_top(self) -> Fraction:
        return half(self.tau.top2)

    @property
    def tau_bot(self) -> Fraction:
        return half(self.tau.bottom2)

    @property
    def slice_genus_lower_bound2(self) -> int:
        return max(abs(self.tau_top2), abs(self.tau_bot2))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def invariant_summary(self) -> tuple:
        """Everything that must survive a change of grid for the same link."""
        return (self.components, self.tau_top2, self.tau_bot2,
                tuple((k, v) for k, v in self.tau.levels.items()))

    def as_json(self) -> dict:
        out = {
            "input": self.input,
            "grid_size": self.grid_size,
            "components": self.components,
            "total_homology_rank": self.total_rank,
            "tau_top": half_str(self.tau_top2),
            "tau_bot": half_str(self.tau_bot2),
            "tau_function": [
                {"k": half_str(k2), "levels": [half_str(v) for v in vals]}
                for k2, vals in self.tau.levels.items()
            ],
            "signature": self.signature,
            "slice_genus_lower_bound": half_str(self.slice_genus_lower_bound2),
            "delta": None if self.delta2 is None else half_str(self.delta2),
            "checks": [c.as_json() for c in self.checks],
        }
        if self.bigraded is not None:
            out["bigraded_homology"] = [
                {"maslov": m, "alexander": half_str(a2), "rank": r}
                for (m, a2), r in self.bigraded.items()
            ]
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_json(), indent=2)

    def to_table(self) -> str:
        lines = [
            f"input                    {self.input}",
            f"grid size                {self.grid_size}",
            f"components               {self.components}",
            f"total homology rank      {self.total_rank}",
            f"tau_top                  {half_text(self.tau_top2)}",
            f"tau_bot                  {half_text(self.tau_bot2)}",
            f"signature                {'-' if self.signature is None else self.signature}",
            f"slice genus lower bound  {half_text(self.slice_genus_lower_bound2)}",
            f"delta                    {'-' if self.delta2 is None else half_text(self.delta2)}",
            "",
            f"{'k':>6}  levels",
        ]
        for k2, vals in self.tau.levels.items():
            lines.append(f"{half_text(k2):>6}  {' '.join(half_text(v) for v in vals)}")
        if self.bigraded is not None:
            lines += ["", f"{'M':>6} {'A':>6} {'rank':>6}"]
            for (m, a2), r in self.bigraded.items():
                lines.append(f"{m:>6} {half_text(a2):>6} {r:>6}")
        lines += ["", f"{'check':<28} status  detail"]
        for c in self.checks:
            lines.append(f"{c.name:<28} {c.status:<7} {c.detail}")
        return "\n".join(lines) + "\n"


def check_monotonicity(report: InvariantReport) -> Check:
    top, bot, ell = report.tau_top2, report.tau_bot2, report.components
    levels = report.tau.all_levels2()
    ok = bot <= min(levels) and max(levels) <= top <= bot + 2 * (ell - 1)
    return Check("monotonicity", ok,
                 f"tau_bot={half_text(bot)} levels in [{half_text(min(levels))}, {half_text(max(levels))}] "
                 f"tau_top={half_text(top)} l={ell}")


def check_alternating(report: InvariantReport, sigma: int, ell: int | None = None) -> Check:
    """Every level at class grading k must equal ``k - sigma/2``."""
    ell = report.components if ell is None else ell
    bad = [(k2, v) for k2, vals in report.tau.levels.items() for v in vals if v != k2 - sigma]
    ok = not bad and ell == report.components
    detail = f"sigma={sigma}" + ("" if ok else f" mismatches {[(half_text(k), half_text(v)) for k, v in bad]}")
    return Check("alternating", ok, detail)


def check_quasipositive(report: InvariantReport, qp: QuasipositiveWord) -> Check:
    chi = qp_euler_characteristic(qp)
    ok = report.tau_top2 == report.components - chi
    return Check("quasipositive", ok,
                 f"2*tau_top={report.tau_top2} l-chi={report.components - chi} (chi={chi})")


def is_positive_full(w: BraidWord) -> bool:
    return all(g > 0 for g in w.letters) and {abs(g) for g in w.letters} == set(range(1, w.strands))


def check_sqp_fibered(report: InvariantReport, w: BraidWord) -> Check:
    if not is_positive_full(w):
        return Check("sqp_fibered", False, "input is not a positive braid using every generator")
    chi = w.strands - len(w.letters)
    ok = report.tau_top2 == report.components - chi
    return Check("sqp_fibered", ok, f"2*tau_top={report.tau_top2} l-chi={report.components - chi}")


def check_bennequin(report: InvariantReport, w: BraidWord, quasipositive: bool = False) -> Check:
    tb, rot = legendrian_tb_rot(w)
    lhs = tb + rot + report.components - 1
    rhs = report.tau_top2 - 1
    ok = lhs == rhs if quasipositive else lhs <= rhs
    rel = "==" if quasipositive else "<="
    return Check("bennequin", ok, f"tb+rot+l-1={lhs} {rel} 2*tau_top-1={rhs} (tb={tb}, rot={rot})")


def check_crossing_change(minus: InvariantReport, plus: InvariantReport) -> Check:
    """tau(L-) <= tau(L+) <= tau(L-) + 1 for tau_top and tau_bot."""
    if minus.components != plus.components:
        return Check("crossing_change", False,
                     f"component counts differ ({minus.components} vs {plus.components})")
    ok = all(lo <= hi <= lo + 2 for lo, hi in ((minus.tau_top2, plus.tau_top2), (minus.tau_bot2, plus.tau_bot2)))
    return Check("crossing_change", ok,
                 f"top {half_text(minus.tau_top2)}->{half_text(plus.tau_top2)}, "
                 f"bot {half_text(minus.tau_bot2)}->{half_text(plus.tau_bot2)}")


def check_additivity(k1: InvariantReport, k2: InvariantReport, ksum: InvariantReport) -> Check:
    if not k1.components == k2.components == ksum.components == 1:
        return Check("additivity", False, "additivity is checked for knots only")
    ok = ksum.tau_top2 == k1.tau_top2 + k2.tau_top2
    return Check("additivity", ok,
                 f"{half_text(ksum.tau_top2)} vs {half_text(k1.tau_top2)} + {half_text(k2.tau_top2)}")


def check_mirror_duality(report: InvariantReport, mirrored: InvariantReport) -> Check:
    """tau_top of the mirror is -tau_top; only asserted for knots."""
    if not report.components == mirrored.components == 1:
        return Check("mirror_duality", False, "mirror duality is checked for knots only")
    ok = mirrored.tau_top2 == -report.tau_top2
    return Check("mirror_duality", ok, f"{half_text(report.tau_top2)} vs mirror {half_text(mirrored.tau_top2)}")


def check_slice_bound(report: InvariantReport, chi: int, label: str) -> Check:
    bound = report.components - chi
    worst = max(abs(v) for v in report.tau.all_levels2())
    return Check(f"slice_bound_{label}", worst <= bound, f"2|tau| max {worst} <= l-chi={bound}")


def divided_bigraded(table: Mapping[tuple[int, int], int], grid_size: int, ell: int) -> BigradedPolynomial:
    return divide_stabilization_factor(BigradedPolynomial(table), grid_size - ell)


def delta_thinness(table: Mapping[tuple[int, int], int], ell: int, sigma: int | None = None) -> tuple[int | None, Check | None]:
    """Doubled diagonal ``2(A - M)`` if the table sits on one diagonal, else None.

    ``table`` must already have the stabilization factors divided out.  With
    ``sigma`` given, the diagonal is compared with ``(l - 1)/2 - sigma/2``.
    """
    diagonals = {a2 - 2 * m for (m, a2), r in table.items() if r}
    delta2 = diagonals.pop() if len(diagonals) == 1 else None
    if sigma is None:
        return delta2, None
    expected = ell - 1 - sigma
    ok = delta2 == expected
    detail = f"2*delta={delta2} expected {expected}" if delta2 is not None else "not thin"
    return delta2, Check("delta_thin", ok, detail)


def check_knot_symmetry(table: Mapping[tuple[int, int], int]) -> Check:
    """Knot Floer symmetry rank(A, M) = rank(-A, M - 2A) on a divided table."""
    bad = [(m, a2) for (m, a2), r in table.items() if table.get((m - a2, -a2), 0) != r]
    return Check("knot_symmetry", not bad, "" if not bad else f"asymmetric at {bad[:4]}")


# ---------------------------------------------------------------------------
# pipeline


def reduced_polynomial(C: chain.FilteredComplex) -> BigradedPolynomial:
    return BigradedPolynomial(algebra.filtered_reduce(C, check=False).generators)


def compute_report(
    grid: GridDiagram,
    *,
    description: str = "grid",
    braid: BraidWord | None = None,
    qp: QuasipositiveWord | None = None,
    assoc_graded: bool = False,
    oracle: bool = False,
    alternating_sigma: int | None = None,
    max_size: int = chain.DEFAULT_MAX_SIZE,
) -> InvariantReport:
    """Run the full pipeline on a grid and evaluate every applicable check.

    Structural failures (d^2 != 0, a non-divisible polynomial, a wrong rank)
    raise; theorem checks are recorded in ``report.checks``.
    """
    n, ell = grid.size, components(grid)
    C = chain.build_filtered_complex(grid, max_size=max_size)
    C.check()
    reduced = algebra.filtered_reduce(C, check=False)
    P = BigradedPolynomial(reduced.generators)
    checks: list[Check] = [Check("d_squared_filtered", True)]
    if P.total() != 2 ** (n - 1):
        raise chain.ComplexInconsistency(f"total homology rank {P.total()} != 2^{n - 1}")
    checks.append(Check("total_rank", True, f"{P.total()} = 2^{n - 1}"))
    poincare = P.at_t_equals_one()
    expected_poincare = {-j: comb(n - 1, j) for j in range(n)}
    if poincare != expected_poincare:
        raise chain.ComplexInconsistency(f"Poincare polynomial {poincare} is not (1+q^-1)^{n - 1}")
    checks.append(Check("poincare", True, f"(1+q^-1)^{n - 1}"))
    Q = divide_stabilization_factor(P, n - ell)
    checks.append(Check("divisibility", True, f"(1+q^-1 t^-1)^{n - ell}"))
    tau = tau_function(Q, ell)

    if oracle:
        ok = algebra.tau_jump_oracle(C) == reduced.levels_by_maslov()
        checks.append(Check("oracle", ok, "reduction matches rank definition" if ok else "mismatch"))

    report = InvariantReport(description, n, ell, P.total(), tau, checks=checks)

    if braid is not None:
        report.signature = signature(braid)
        report.euler_char_bound = braid.strands - len(braid.letters)
        checks.append(check_slice_bound(report, report.euler_char_bound, "seifert"))
        checks.append(check_bennequin(report, braid, quasipositive=qp is not None))
        if is_positive_full(braid):
            checks.append(check_sqp_fibered(report, braid))
    if qp is not None:
        chi = qp_euler_characteristic(qp)
        checks.append(check_slice_bound(report, chi, "quasipositive"))
        checks.append(check_quasipositive(report, qp))
    checks.append(check_monotonicity(report))

    if assoc_graded:
        G = chain.build_graded_complex(grid, max_size=max_size)
        G.check()
        checks.append(Check("d_squared_graded", True))
        table = algebra.bigraded_homology(G)
        divided = divided_bigraded(table, n, ell).terms
        report.bigraded = divided
        sigma = alternating_sigma if alternating_sigma is not None else report.signature
        delta2, dcheck = delta_thinness(divided, ell, sigma if alternating_sigma is not None else None)
        report.delta2 = delta2
        if dcheck is not None:
            checks.append(dcheck)
        if ell == 1:
            checks.append(check_knot_symmetry(divided))
    if alternating_sigma is not None:
        checks.append(check_alternating(report, alternating_sigma))
    return report


def braid_report(w: BraidWord, **kwargs) -> InvariantReport:
    grid = to_grid(w)
    if components(grid) != closure_components(w):
        raise chain.ComplexInconsistency("grid and braid closure disagree on component count")
    kwargs.setdefault("description", f"braid {w}")
    return compute_report(grid, braid=w, **kwargs)


def quasipositive_report(qp: QuasipositiveWord, **kwargs) -> InvariantReport:
    w = expand_quasipositive(qp)
    kwargs.setdefault("description", f"quasipositive {qp}")
    return braid_report(w, qp=qp, **kwargs)
