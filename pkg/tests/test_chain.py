import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtau import chain
from gridtau.chain import (
    FILTERED,
    GRADED,
    ComplexInconsistency,
    GridSizeError,
    alexander,
    all_states,
    build_filtered_complex,
    build_graded_complex,
    decode_state,
    empty_rectangles,
    encode_state,
    gradings,
    j_pairing,
    maslov,
    state_rank,
    state_unrank,
)
from gridtau.fixtures import all_fixtures, fixture
from gridtau.grid import GridDiagram, components

UNKNOT = GridDiagram((1, 0), (0, 1))


@st.composite
def grids(draw, max_size=5):
    n = draw(st.integers(2, max_size))
    X = draw(st.permutations(range(n)))
    O = draw(st.permutations(range(n)).filter(lambda o: all(o[i] != X[i] for i in range(n))))
    return GridDiagram(tuple(X), tuple(O))


def reference_arrows(grid, mode):
    """state -> {target: drop} from the plain-Python rectangle enumeration."""
    out = {}
    for x in itertools.permutations(range(grid.size)):
        tally = Counter()
        drop = {}
        for r in empty_rectangles(x, grid):
            if r.o_count or (mode == GRADED and r.x_count):
                continue
            tally[r.target] += 1
            drop[r.target] = r.x_count
        out[x] = {y: drop[y] for y, k in tally.items() if k % 2}
    return out


def compiled_arrows(C):
    states = [tuple(int(v) for v in row) for row in C.states]
    return {states[s]: {states[t]: d for t, d in C.boundary(s)} for s in range(C.num_generators)}


def test_j_pairing_examples():
    assert j_pairing([(0, 0)], [(1, 1)]) == Fraction(1, 2)
    assert j_pairing([(0, 1)], [(1, 0)]) == 0
    O = chain.marker_points(UNKNOT.O)
    assert j_pairing(O, O) == 1


def test_unknot_hand_values():
    assert maslov((0, 1), UNKNOT.O) == -1
    assert maslov((1, 0), UNKNOT.O) == 0
    assert maslov((1, 0), UNKNOT.X) == -1
    assert alexander((0, 1), UNKNOT) == -1
    assert alexander((1, 0), UNKNOT) == 0


def test_unknot_rectangles():
    rects = empty_rectangles((1, 0), UNKNOT)
    assert len(rects) == 2
    assert all(r.target == (0, 1) and (r.o_count, r.x_count) == (0, 1) for r in rects)
    # the pair cancels mod 2
    C = build_filtered_complex(UNKNOT)
    assert C.num_arrows == 0
    assert sorted(zip(C.maslov.tolist(), C.alexander2.tolist())) == [(-1, -2), (0, 0)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_state_encoding_round_trips(n):
    states = all_states(n)
    assert states.shape == (math.factorial(n), n)
    for r, row in enumerate(states):
        x = tuple(int(v) for v in row)
        assert state_rank(x) == r
        assert state_unrank(r, n) == x
        assert decode_state(encode_state(x), n) == x


def test_encoding_bound():
    with pytest.raises(GridSizeError):
        encode_state(range(17))


def test_size_limit():
    g = fixture("torus2_5").grid
    with pytest.raises(GridSizeError):
        build_filtered_complex(g, max_size=6)


@settings(max_examples=60, deadline=None)
@given(grids())
def test_compiled_gradings_match_reference(g):
    m, a2 = gradings(g)
    for s, row in enumerate(all_states(g.size)):
        x = tuple(int(v) for v in row)
        assert m[s] == maslov(x, g.O)
        assert Fraction(int(a2[s]), 2) == alexander(x, g)


@settings(max_examples=60, deadline=None)
@given(grids(max_size=4))
def test_rectangle_grading_laws(g):
    # every rectangle, not just O-free ones, shifts gradings by its marker counts
    for x in itertools.permutations(range(g.size)):
        mo, mx = maslov(x, g.O), maslov(x, g.X)
        for r in empty_rectangles(x, g):
            assert mo - maslov(r.target, g.O) == 1 - 2 * r.o_count
            assert mx - maslov(r.target, g.X) == 1 - 2 * r.x_count
            assert alexander(x, g) - alexander(r.target, g) == r.x_count - r.o_count


@settings(max_examples=40, deadline=None)
@given(grids(), st.sampled_from([FILTERED, GRADED]))
def test_compiled_arrows_match_reference(g, mode):
    C = build_filtered_complex(g) if mode == FILTERED else build_graded_complex(g)
    assert compiled_arrows(C) == reference_arrows(g, mode)


@settings(max_examples=40, deadline=None)
@given(grids(max_size=6))
def test_d_squared_and_grading_laws(g):
    for C in (build_filtered_complex(g), build_graded_complex(g)):
        C.check()
        assert C.d_squared_is_zero()


@settings(max_examples=40, deadline=None)
@given(grids(max_size=6))
def test_alexander_gradings_share_a_coset(g):
    _, a2 = gradings(g)
    assert len(set((a2 % 2).tolist())) == 1


@pytest.mark.parametrize("f", all_fixtures(), ids=lambda f: f.name)
def test_fixture_complexes_are_consistent(f):
    build_filtered_complex(f.grid).check()
    build_graded_complex(f.grid).check()


def test_check_catches_corruption():
    C = build_filtered_complex(fixture("trefoil").grid)
    bad = chain.FilteredComplex(C.grid, C.mode, C.states, C.maslov + np.arange(C.num_generators) % 2,
                                C.alexander2, C.indptr, C.indices, C.drops)
    with pytest.raises(ComplexInconsistency):
        bad.check()


def test_trefoil_top_alexander_grading():
    # the largest Alexander grading carrying homology of the associated graded complex
    from gridtau.algebra import bigraded_homology
    from gridtau.invariants import divided_bigraded

    g = fixture("trefoil").grid
    table = divided_bigraded(bigraded_homology(build_graded_complex(g)), g.size, components(g)).terms
    assert max(a2 for _, a2 in table) == 2


def test_thread_count_does_not_change_the_complex():
    g = fixture("torus2_5").grid
    chain.set_threads(1)
    a = build_filtered_complex(g)
    chain.set_threads(None)
    b = build_filtered_complex(g)
    for name in ("maslov", "alexander2", "indptr", "indices", "drops"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
