import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtau.braid import BraidWord, to_grid
from gridtau.fixtures import all_fixtures, fixture, fixture_names, load_grid
from gridtau.grid import (
    CORNERS,
    GridDiagram,
    GridError,
    NotAPermutationError,
    SharedCellError,
    commutation_move,
    commutation_problem,
    components,
    connected_sum,
    disjoint_union,
    format_grid,
    mirror,
    parse_grid,
    stabilize,
    translate,
)
from gridtau.invariants import compute_report

UNKNOT = GridDiagram((1, 0), (0, 1))


@st.composite
def grids(draw, max_size=7):
    n = draw(st.integers(2, max_size))
    X = draw(st.permutations(range(n)))
    O = draw(st.permutations(range(n)).filter(lambda o: all(o[i] != X[i] for i in range(n))))
    return GridDiagram(tuple(X), tuple(O))


def test_components_examples():
    assert components(UNKNOT) == 1
    assert components(disjoint_union(UNKNOT, UNKNOT)) == 2
    assert components(to_grid(BraidWord(2, (1, 1)))) == 2


def test_validation_errors_are_distinct():
    with pytest.raises(NotAPermutationError):
        GridDiagram((0, 0), (1, 0))
    with pytest.raises(NotAPermutationError):
        GridDiagram((0, 1), (1, 1))
    with pytest.raises(SharedCellError):
        GridDiagram((0, 1), (0, 1))
    with pytest.raises(NotAPermutationError):
        parse_grid("n = 2\nX = 1 1\nO = 0 1\n")
    with pytest.raises(SharedCellError):
        parse_grid("n = 2\nX = 0 1\nO = 0 1\n")
    with pytest.raises(GridError):
        parse_grid("n = 3\nX = 1 0\nO = 0 1\n")
    with pytest.raises(GridError):
        parse_grid("n = 2\nX = 1 0\n")


def test_format_round_trip():
    g = fixture("figure8").grid
    assert parse_grid(format_grid(g)) == g
    assert format_grid(UNKNOT) == "n = 2\nX = 1 0\nO = 0 1\n"


def test_repo_fixture_files_match_package_data():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "fixtures"
    for path in sorted(root.glob("*.grid")):
        assert parse_grid(path.read_text()) == load_grid(path.stem)


def test_mirror_examples():
    assert mirror(UNKNOT) == GridDiagram((0, 1), (1, 0))
    assert components(mirror(UNKNOT)) == 1
    tref = fixture("trefoil").grid
    assert compute_report(mirror(tref)).tau_top == -1
    assert mirror(mirror(tref)) == tref


def test_stabilize_examples():
    g = stabilize(UNKNOT, 0)
    assert g.size == 3 and components(g) == 1
    assert compute_report(g).tau_top == 0
    tref = fixture("trefoil").grid
    r = compute_report(stabilize(tref, 2, "O:NE"))
    assert r.tau_top == 1 and r.total_rank == 2**5
    base = compute_report(tref).invariant_summary()
    twice = stabilize(stabilize(tref, 0, "X:NW"), 4, "X:SE")
    assert compute_report(twice).invariant_summary() == base


def test_stabilize_rejects_bad_input():
    with pytest.raises(GridError):
        stabilize(UNKNOT, 2)
    with pytest.raises(GridError):
        stabilize(UNKNOT, 0, "X:UP")


def test_commutation():
    tref = fixture("trefoil").grid
    assert all(commutation_problem(tref, c) for c in range(tref.size - 1))
    g = stabilize(tref, 1, "X:SW")
    legal = [c for c in range(g.size - 1) if commutation_problem(g, c) is None]
    assert legal == [2]
    base = compute_report(tref).invariant_summary()
    assert compute_report(commutation_move(g, 2)).invariant_summary() == base
    # columns 0 and 1 of this grid have interleaved segments
    interleaved = GridDiagram((2, 3, 0, 1), (0, 1, 2, 3))
    with pytest.raises(GridError, match="interleave"):
        commutation_move(interleaved, 0)
    split = disjoint_union(UNKNOT, UNKNOT)
    assert components(commutation_move(split, 1)) == 2


def test_connected_sum_shape():
    tref = fixture("trefoil").grid
    s = connected_sum(tref, tref)
    assert s.size == 9 and components(s) == 1
    u = connected_sum(UNKNOT, UNKNOT)
    assert u.size == 3
    assert compute_report(u).tau_top == 0
    assert compute_report(connected_sum(UNKNOT, tref)).tau_top == 1
    with pytest.raises(GridError):
        connected_sum(fixture("hopf").grid, tref)


@settings(max_examples=200, deadline=None)
@given(grids(), st.data())
def test_moves_preserve_validity_and_components(g, data):
    ell = components(g)
    col = data.draw(st.integers(0, g.size - 1))
    kind = data.draw(st.sampled_from([f"{m}:{c}" for m in "XO" for c in CORNERS]))
    s = stabilize(g, col, kind)
    assert s.size == g.size + 1 and components(s) == ell
    t = translate(g, data.draw(st.integers(-10, 10)), data.draw(st.integers(-10, 10)))
    assert components(t) == ell
    for c in range(g.size - 1):
        if commutation_problem(g, c) is None:
            assert components(commutation_move(g, c)) == ell
    assert components(mirror(g)) == ell


@settings(max_examples=40, deadline=None)
@given(grids(max_size=6), st.data())
def test_random_moves_preserve_invariants(g, data):
    base = compute_report(g).invariant_summary()
    col = data.draw(st.integers(0, g.size - 1))
    kind = data.draw(st.sampled_from([f"{m}:{c}" for m in "XO" for c in CORNERS]))
    assert compute_report(stabilize(g, col, kind)).invariant_summary() == base
    shifted = translate(g, data.draw(st.integers(0, g.size - 1)), data.draw(st.integers(0, g.size - 1)))
    assert compute_report(shifted).invariant_summary() == base


def test_fixture_registry():
    names = fixture_names()
    assert {"unknot", "trefoil", "figure8", "hopf", "torus2_4", "torus2_5", "mirror_trefoil"} <= set(names)
    sizes = {f.name: f.grid.size for f in all_fixtures()}
    assert sizes["unknot"] == 2 and sizes["trefoil"] == 5 and sizes["figure8"] == 6
    assert sizes["hopf"] == 4 and sizes["torus2_4"] == 6 and sizes["torus2_5"] == 7
    with pytest.raises(KeyError):
        fixture("nope")


def test_fixture_braid_cross_check():
    rng = random.Random(3)
    for name in ("trefoil", "hopf", "figure8"):
        f = fixture(name)
        assert compute_report(to_grid(f.braid)).invariant_summary() == compute_report(f.grid).invariant_summary()
    assert rng  # seeded for reproducibility of any future sampling
