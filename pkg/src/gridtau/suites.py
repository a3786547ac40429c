"""Seeded verification suites over fixtures, random braids and grid moves."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from . import algebra, chain
from .braid import (
    BraidWord,
    QuasipositiveWord,
    expand_quasipositive,
    random_braid,
    random_quasipositive,
    to_grid,
)
from .fixtures import all_fixtures, fixture
from .grid import (
    CORNERS,
    GridDiagram,
    commutation_move,
    commutation_problem,
    connected_sum,
    mirror,
    stabilize,
    translate,
)
from .invariants import (
    Check,
    braid_report,
    check_additivity,
    check_crossing_change,
    check_mirror_duality,
    compute_report,
    quasipositive_report,
)

SUITES = ("fixtures", "moves", "crossing", "additivity", "quasipositive",
          "bennequin", "alternating", "oracle")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 7
    max_grid: int = 7
    move_max_grid: int = 8
    qp_max_grid: int = 8
    cases: int = 25
    oracle_cases: int = 100
    move_sequences: int = 50


def _checks_of(label: str, report) -> Iterator[Check]:
    for c in report.checks:
        yield Check(f"{label}: {c.name}", c.passed, c.detail)


def _expect(label: str, got, want) -> Check:
    return Check(label, got == want, f"got {got}, expected {want}")


def fixtures_suite(cfg: SuiteConfig) -> Iterator[Check]:
    for f in all_fixtures():
        r = compute_report(f.grid, description=f.name, braid=f.braid)
        yield _expect(f"{f.name}: components", r.components, f.components)
        yield _expect(f"{f.name}: tau_top", r.tau_top, f.tau_top)
        yield _expect(f"{f.name}: tau_bot", r.tau_bot, f.tau_bot)
        yield _expect(f"{f.name}: signature", r.signature, f.signature)
        yield _expect(f"{f.name}: total rank", r.total_rank, 2 ** (f.grid.size - 1))
        yield from _checks_of(f.name, r)
        if f.components == 1:
            c = check_mirror_duality(r, compute_report(mirror(f.grid)))
            yield Check(f"{f.name}: {c.name}", c.passed, c.detail)
    braid_tref = braid_report(fixture("trefoil").braid)
    grid_tref = compute_report(fixture("trefoil").grid)
    yield _expect("trefoil: braid grid matches fixture",
                  braid_tref.invariant_summary(), grid_tref.invariant_summary())


def random_move(grid: GridDiagram, rng: random.Random, max_size: int) -> tuple[GridDiagram, str]:
    """One random stabilization, commutation or translation keeping size <= max_size."""
    n = grid.size
    options = ["translate"]
    legal = [c for c in range(n - 1) if commutation_problem(grid, c) is None]
    if legal:
        options.append("commute")
    if n < max_size:
        options.append("stabilize")
    kind = rng.choice(options)
    if kind == "translate":
        dc, dr = rng.randrange(n), rng.randrange(n)
        return translate(grid, dc, dr), f"translate({dc},{dr})"
    if kind == "commute":
        c = rng.choice(legal)
        return commutation_move(grid, c), f"commute({c})"
    c = rng.randrange(n)
    tag = f"{rng.choice('XO')}:{rng.choice(CORNERS)}"
    return stabilize(grid, c, tag), f"stabilize({c},{tag})"


def moves_suite(cfg: SuiteConfig) -> Iterator[Check]:
    rng = random.Random(cfg.seed)
    fixtures = [f for f in all_fixtures() if f.grid.size < cfg.move_max_grid]
    baseline = {f.name: compute_report(f.grid).invariant_summary() for f in fixtures}
    for k in range(cfg.move_sequences):
        f = fixtures[k % len(fixtures)]
        grid, path = f.grid, []
        for _ in range(rng.randint(1, 4)):
            grid, step = random_move(grid, rng, cfg.move_max_grid)
            path.append(step)
        got = compute_report(grid).invariant_summary()
        yield Check(f"moves {k}: {f.name} {' '.join(path)}", got == baseline[f.name],
                    f"size {grid.size}" + ("" if got == baseline[f.name] else f" got {got}"))


def random_braid_with_grid(rng: random.Random, max_grid: int, max_strands: int = 4,
                           max_len: int = 6, accept: Callable[[BraidWord], bool] | None = None) -> BraidWord:
    while True:
        w = random_braid(rng, rng.randint(2, max_strands), rng.randint(1, max_len))
        if accept is not None and not accept(w):
            continue
        if to_grid(w).size <= max_grid:
            return w


def crossing_pairs(cfg: SuiteConfig) -> list[tuple[BraidWord, BraidWord]]:
    """Braid pairs (L-, L+) differing in the sign of one letter."""
    rng = random.Random(cfg.seed)
    pairs = []
    while len(pairs) < cfg.cases:
        w = random_braid_with_grid(rng, cfg.max_grid)
        k = rng.randrange(len(w.letters))
        g = abs(w.letters[k])
        plus = BraidWord(w.strands, w.letters[:k] + (g,) + w.letters[k + 1:])
        minus = BraidWord(w.strands, w.letters[:k] + (-g,) + w.letters[k + 1:])
        if to_grid(plus).size <= cfg.max_grid and to_grid(minus).size <= cfg.max_grid:
            pairs.append((minus, plus))
    return pairs


def crossing_suite(cfg: SuiteConfig) -> Iterator[Check]:
    for minus, plus in crossing_pairs(cfg):
        c = check_crossing_change(braid_report(minus), braid_report(plus))
        yield Check(f"crossing [{minus}] -> [{plus}]", c.passed, c.detail)


def additivity_suite(cfg: SuiteConfig) -> Iterator[Check]:
    tref, mirror_tref, unknot = (fixture(n).grid for n in ("trefoil", "mirror_trefoil", "unknot"))
    reports = {name: compute_report(g) for name, g in
               (("trefoil", tref), ("mirror_trefoil", mirror_tref), ("unknot", unknot))}
    for a, b, expected in (("trefoil", "trefoil", 2), ("trefoil", "mirror_trefoil", 0), ("unknot", "trefoil", 1)):
        g = connected_sum(fixture(a).grid, fixture(b).grid)
        r = compute_report(g, description=f"{a} # {b}")
        c = check_additivity(reports[a], reports[b], r)
        yield Check(f"additivity {a} # {b} (n={g.size})", c.passed and r.tau_top == expected,
                    c.detail + f", expected {expected}")


def quasipositive_words(cfg: SuiteConfig) -> list[QuasipositiveWord]:
    rng = random.Random(cfg.seed)
    words = []
    while len(words) < cfg.cases:
        qp = random_quasipositive(rng, rng.randint(2, 3), rng.randint(0, 4), conj_len=2)
        if to_grid(expand_quasipositive(qp)).size <= cfg.qp_max_grid:
            words.append(qp)
    return words


def quasipositive_suite(cfg: SuiteConfig) -> Iterator[Check]:
    for qp in quasipositive_words(cfg):
        r = quasipositive_report(qp)
        for c in r.checks:
            if c.name in ("quasipositive", "bennequin", "monotonicity", "slice_bound_quasipositive"):
                yield Check(f"qp [{qp}]: {c.name}", c.passed, c.detail)


def bennequin_braids(cfg: SuiteConfig) -> list[BraidWord]:
    rng = random.Random(cfg.seed + 1)
    return [random_braid_with_grid(rng, cfg.max_grid) for _ in range(cfg.cases)]


def bennequin_suite(cfg: SuiteConfig) -> Iterator[Check]:
    for w in bennequin_braids(cfg):
        r = braid_report(w)
        c = next(c for c in r.checks if c.name == "bennequin")
        yield Check(f"bennequin [{w}]", c.passed, c.detail)


def alternating_suite(cfg: SuiteConfig) -> Iterator[Check]:
    for name in ("trefoil", "mirror_trefoil", "figure8", "hopf", "torus2_4", "torus2_5"):
        f = fixture(name)
        r = compute_report(f.grid, description=name, braid=f.braid,
                           assoc_graded=True, alternating_sigma=f.signature)
        for c in r.checks:
            if c.name in ("alternating", "delta_thin", "knot_symmetry", "d_squared_graded"):
                yield Check(f"{name}: {c.name}", c.passed, c.detail)


def oracle_suite(cfg: SuiteConfig) -> Iterator[Check]:
    rng = random.Random(cfg.seed)
    for k in range(cfg.oracle_cases):
        w = random_braid_with_grid(rng, cfg.max_grid)
        C = chain.build_filtered_complex(to_grid(w))
        C.check()
        fast = algebra.filtered_reduce(C, check=False).levels_by_maslov()
        slow = algebra.tau_jump_oracle(C)
        yield Check(f"oracle {k} [{w}] n={C.size}", fast == slow, "" if fast == slow else f"{fast} vs {slow}")


RUNNERS: dict[str, Callable[[SuiteConfig], Iterator[Check]]] = {
    "fixtures": fixtures_suite,
    "moves": moves_suite,
    "crossing": crossing_suite,
    "additivity": additivity_suite,
    "quasipositive": quasipositive_suite,
    "bennequin": bennequin_suite,
    "alternating": alternating_suite,
    "oracle": oracle_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    out: list[Check] = []
    for n in names:
        out.extend(RUNNERS[n](cfg))
    return out
