"""Grid states, gradings, empty rectangles and the grid chain complexes.

States are permutations ``x`` of ``range(n)`` read column -> row; the point
of ``x`` in column ``i`` sits on the lattice point ``(i, x[i])`` and a marker
in column ``i`` at row ``r`` sits at the cell centre ``(i + 1/2, r + 1/2)``.
All states of a grid are enumerated in lexicographic order, so a state's
index is its Lehmer rank.

Gradings are kept as exact integers: Maslov gradings are integers, Alexander
gradings are stored doubled (``2A``).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numba as nb
import numpy as np

from .grid import GridDiagram, components

DEFAULT_MAX_SIZE = 10
# a packed state uses 4 bits per entry inside one 64-bit word
STATE_BITS = 4
MAX_ENCODABLE_SIZE = 16

FILTERED = "filtered"
GRADED = "graded"


class GridSizeError(ValueError):
    """Raised when a grid is larger than the configured size limit."""


class ComplexInconsistency(RuntimeError):
    """Raised when a complex fails a structural check such as d^2 = 0."""


# ---------------------------------------------------------------------------
# plain-Python reference versions (small inputs, tests, oracles)


def j_pairing(P: Iterable[Sequence], Q: Iterable[Sequence]) -> Fraction:
    """Symmetrised south-west pairing of two planar point multisets.

    ``I(P, Q)`` counts pairs with ``p`` strictly south-west of ``q``; the
    result is ``(I(P, Q) + I(Q, P)) / 2``.
    """
    P = [(Fraction(a), Fraction(b)) for a, b in P]
    Q = [(Fraction(a), Fraction(b)) for a, b in Q]

    def sw(A, B):
        return sum(1 for (a1, a2) in A for (b1, b2) in B if a1 < b1 and a2 < b2)

    return Fraction(sw(P, Q) + sw(Q, P), 2)


def state_points(x: Sequence[int]) -> list[tuple[int, int]]:
    return [(i, int(r)) for i, r in enumerate(x)]


def marker_points(perm: Sequence[int]) -> list[tuple[Fraction, Fraction]]:
    half = Fraction(1, 2)
    return [(i + half, int(r) + half) for i, r in enumerate(perm)]


def maslov(x: Sequence[int], markers: Sequence[int]) -> int:
    """``M(x) = J(x,x) - 2J(x,M) + J(M,M) + 1`` for the marker permutation."""
    xs = state_points(x)
    ms = marker_points(markers)
    value = j_pairing(xs, xs) - 2 * j_pairing(xs, ms) + j_pairing(ms, ms) + 1
    if value.denominator != 1:
        raise ComplexInconsistency(f"non-integral Maslov grading {value}")
    return int(value)


def alexander(x: Sequence[int], grid: GridDiagram) -> Fraction:
    """Collapsed Alexander grading ``(M_O - M_X)/2 - (n - l)/2``."""
    m_o = maslov(x, grid.O)
    m_x = maslov(x, grid.X)
    return Fraction(m_o - m_x, 2) - Fraction(grid.size - components(grid), 2)


def encode_state(x: Sequence[int]) -> int:
    """Pack a state into one integer, 4 bits per column (n <= 16)."""
    if len(x) > MAX_ENCODABLE_SIZE:
        raise GridSizeError(f"states with n > {MAX_ENCODABLE_SIZE} cannot be packed")
    code = 0
    for i, r in enumerate(x):
        code |= int(r) << (STATE_BITS * i)
    return code


def decode_state(code: int, n: int) -> tuple[int, ...]:
    mask = (1 << STATE_BITS) - 1
    return tuple((code >> (STATE_BITS * i)) & mask for i in range(n))


def state_rank(x: Sequence[int]) -> int:
    """Lehmer rank of a permutation (its index in lexicographic order)."""
    n = len(x)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if x[j] < x[i])
        rank += smaller * math.factorial(n - 1 - i)
    return rank


def state_unrank(rank: int, n: int) -> tuple[int, ...]:
    pool = list(range(n))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        k, rank = divmod(rank, f)
        out.append(pool.pop(k))
    return tuple(out)


@dataclass(frozen=True)
class Rectangle:
    target: tuple[int, ...]
    o_count: int
    x_count: int
    left: int
    bottom: int
    width: int
    height: int


def empty_rectangles(x: Sequence[int], grid: GridDiagram) -> list[Rectangle]:
    """All empty rectangles on the torus starting at state ``x``.

    A rectangle from ``x`` has ``x``-points at its lower-left and upper-right
    corners; each unordered pair of columns gives two candidates.
    """
    n = grid.size
    x = tuple(int(r) for r in x)
    found = []
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            w = (b - a) % n
            h = (x[b] - x[a]) % n
            if any(0 < (x[(a + t) % n] - x[a]) % n < h for t in range(1, w)):
                continue
            cols = [(a + t) % n for t in range(w)]
            o_count = sum(1 for c in cols if (grid.O[c] - x[a]) % n < h)
            x_count = sum(1 for c in cols if (grid.X[c] - x[a]) % n < h)
            y = list(x)
            y[a], y[b] = y[b], y[a]
            found.append(Rectangle(tuple(y), o_count, x_count, a, x[a], w, h))
    return found


# ---------------------------------------------------------------------------
# compiled kernels


@nb.njit(cache=True)
def _all_states(n):
    total = 1
    for k in range(2, n + 1):
        total *= k
    out = np.empty((total, n), np.uint8)
    p = np.arange(n).astype(np.uint8)
    for r in range(total):
        out[r] = p
        i = n - 2
        while i >= 0 and p[i] > p[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while p[j] < p[i]:
            j -= 1
        t = p[i]
        p[i] = p[j]
        p[j] = t
        lo = i + 1
        hi = n - 1
        while lo < hi:
            t = p[lo]
            p[lo] = p[hi]
            p[hi] = t
            lo += 1
            hi -= 1
    return out


@nb.njit(cache=True)
def _rank(p, fact):
    n = p.shape[0]
    r = 0
    for i in range(n):
        c = 0
        for j in range(i + 1, n):
            if p[j] < p[i]:
                c += 1
        r += c * fact[n - 1 - i]
    return r


@nb.njit(cache=True, parallel=True)
def _maslov_all(states, markers):
    total, n = states.shape
    out = np.empty(total, np.int32)
    j_mm = 0
    for a in range(n):
        for b in range(a + 1, n):
            if markers[a] < markers[b]:
                j_mm += 1
    for s in nb.prange(total):
        x = states[s]
        j_xx = 0
        for a in range(n):
            for b in range(a + 1, n):
                if x[a] < x[b]:
                    j_xx += 1
        twice_j_xm = 0
        for i in range(n):
            for c in range(n):
                if i <= c and x[i] <= markers[c]:
                    twice_j_xm += 1
                if c < i and markers[c] < x[i]:
                    twice_j_xm += 1
        out[s] = j_xx - twice_j_xm + j_mm + 1
    return out


@nb.njit(cache=True)
def _valid_rect(x, a, b, n, O, X, block_x):
    """-1 if the rectangle a->b is not empty or hits a blocked marker, else #X."""
    w = (b - a) % n
    xa = np.int64(x[a])
    h = (np.int64(x[b]) - xa) % n
    for t in range(1, w):
        c = (a + t) % n
        d = (np.int64(x[c]) - xa) % n
        if d > 0 and d < h:
            return -1
    xs = 0
    for t in range(w):
        c = (a + t) % n
        if (np.int64(O[c]) - xa) % n < h:
            return -1
        if (np.int64(X[c]) - xa) % n < h:
            if block_x:
                return -1
            xs += 1
    return xs


@nb.njit(cache=True, parallel=True)
def _count_arrows(states, O, X, block_x):
    total, n = states.shape
    cnt = np.zeros(total, np.int64)
    for s in nb.prange(total):
        x = states[s]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                r1 = _valid_rect(x, i, j, n, O, X, block_x)
                r2 = _valid_rect(x, j, i, n, O, X, block_x)
                if (r1 >= 0) != (r2 >= 0):
                    k += 1
        cnt[s] = k
    return cnt


@nb.njit(cache=True, parallel=True)
def _fill_arrows(states, O, X, block_x, indptr, fact):
    total, n = states.shape
    nnz = indptr[total]
    indices = np.empty(nnz, np.int32)
    drops = np.empty(nnz, np.int8)
    for s in nb.prange(total):
        x = states[s]
        y = x.copy()
        pos = indptr[s]
        for i in range(n):
            for j in range(i + 1, n):
                r1 = _valid_rect(x, i, j, n, O, X, block_x)
                r2 = _valid_rect(x, j, i, n, O, X, block_x)
                if (r1 >= 0) != (r2 >= 0):
                    y[i] = x[j]
                    y[j] = x[i]
                    indices[pos] = _rank(y, fact)
                    drops[pos] = max(r1, r2)
                    y[i] = x[i]
                    y[j] = x[j]
                    pos += 1
        # keep each row sorted by target for deterministic downstream use
        order = np.argsort(indices[indptr[s]:pos], kind="mergesort")
        indices[indptr[s]:pos] = indices[indptr[s]:pos][order]
        drops[indptr[s]:pos] = drops[indptr[s]:pos][order]
    return indices, drops


@nb.njit(cache=True, parallel=True)
def _d_squared_defects(indptr, indices):
    total = indptr.shape[0] - 1
    bad = np.zeros(total, np.uint8)
    for s in nb.prange(total):
        lo = indptr[s]
        hi = indptr[s + 1]
        m = 0
        for k in range(lo, hi):
            y = indices[k]
            m += indptr[y + 1] - indptr[y]
        if m == 0:
            continue
        buf = np.empty(m, np.int32)
        q = 0
        for k in range(lo, hi):
            y = indices[k]
            for kk in range(indptr[y], indptr[y + 1]):
                buf[q] = indices[kk]
                q += 1
        buf.sort()
        run = 1
        for q in range(1, m + 1):
            if q < m and buf[q] == buf[q - 1]:
                run += 1
            else:
                if run % 2 == 1:
                    bad[s] = 1
                    break
                run = 1
    return bad


# ---------------------------------------------------------------------------
# complex assembly


def set_threads(threads: int | None) -> int:
    """Apply a thread count (flag value, else ``GRIDTAU_THREADS``, else all)."""
    if threads is None:
        env = os.environ.get("GRIDTAU_THREADS")
        threads = int(env) if env else nb.config.NUMBA_NUM_THREADS
    threads = max(1, min(int(threads), nb.config.NUMBA_NUM_THREADS))
    nb.set_num_threads(threads)
    return threads


@dataclass(frozen=True)
class FilteredComplex:
    """Boundary map over F_2 on all n! grid states, stored in CSR form.

    ``indices[indptr[s]:indptr[s+1]]`` are the targets of state ``s`` and
    ``drops`` the matching Alexander drops (number of X markers crossed).
    """

    grid: GridDiagram
    mode: str
    states: np.ndarray
    maslov: np.ndarray
    alexander2: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    drops: np.ndarray

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def num_generators(self) -> int:
        return self.states.shape[0]

    @property
    def num_arrows(self) -> int:
        return int(self.indices.shape[0])

    def boundary(self, s: int) -> list[tuple[int, int]]:
        lo, hi = self.indptr[s], self.indptr[s + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.drops[lo:hi].tolist()))

    def d_squared_is_zero(self) -> bool:
        return not _d_squared_defects(self.indptr, self.indices).any()

    def check(self) -> None:
        """Hard structural checks: grading laws per arrow and d^2 = 0."""
        src = np.repeat(np.arange(self.num_generators), np.diff(self.indptr))
        dst = self.indices
        if np.any(self.maslov[dst] != self.maslov[src] - 1):
            raise ComplexInconsistency("an arrow does not drop Maslov grading by one")
        if np.any(self.alexander2[src] - self.alexander2[dst] != 2 * self.drops.astype(np.int32)):
            raise ComplexInconsistency("an arrow's Alexander drop disagrees with its X count")
        if np.any(self.drops < 0):
            raise ComplexInconsistency("negative filtration drop")
        if self.mode == GRADED and np.any(self.drops != 0):
            raise ComplexInconsistency("graded complex has an X-crossing arrow")
        if not self.d_squared_is_zero():
            raise ComplexInconsistency("boundary does not square to zero")


_STATE_CACHE: dict[int, np.ndarray] = {}


def all_states(n: int) -> np.ndarray:
    """All permutations of ``range(n)`` in lexicographic order (read-only)."""
    if n not in _STATE_CACHE:
        states = _all_states(n)
        states.setflags(write=False)
        _STATE_CACHE.clear()
        _STATE_CACHE[n] = states
    return _STATE_CACHE[n]


def gradings(grid: GridDiagram) -> tuple[np.ndarray, np.ndarray]:
    """Maslov gradings and doubled Alexander gradings of every state."""
    states = all_states(grid.size)
    O = np.asarray(grid.O, dtype=np.uint8)
    X = np.asarray(grid.X, dtype=np.uint8)
    m_o = _maslov_all(states, O)
    m_x = _maslov_all(states, X)
    a2 = m_o - m_x - (grid.size - components(grid))
    return m_o, a2


def _build(grid: GridDiagram, mode: str, max_size: int) -> FilteredComplex:
    n = grid.size
    if n > max_size:
        raise GridSizeError(f"grid size {n} exceeds the configured limit {max_size}")
    if n > MAX_ENCODABLE_SIZE:
        raise GridSizeError(f"grid size {n} exceeds the state encoding bound")
    states = all_states(n)
    O = np.asarray(grid.O, dtype=np.uint8)
    X = np.asarray(grid.X, dtype=np.uint8)
    block_x = mode == GRADED
    fact = np.array([math.factorial(k) for k in range(n + 1)], dtype=np.int64)
    counts = _count_arrows(states, O, X, block_x)
    indptr = np.zeros(states.shape[0] + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices, drops = _fill_arrows(states, O, X, block_x, indptr, fact)
    m, a2 = gradings(grid)
    return FilteredComplex(grid, mode, states, m, a2, indptr, indices, drops)


def build_filtered_complex(grid: GridDiagram, max_size: int = DEFAULT_MAX_SIZE) -> FilteredComplex:
    """Rectangles avoiding every O; each arrow drops filtration by its X count."""
    return _build(grid, FILTERED, max_size)


def build_graded_complex(grid: GridDiagram, max_size: int = DEFAULT_MAX_SIZE) -> FilteredComplex:
    """Associated graded complex: rectangles avoid both O and X markers."""
    return _build(grid, GRADED, max_size)
