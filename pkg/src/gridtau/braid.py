"""Braid words, quasipositive words, Seifert matrices, signatures and grids.

A letter ``g > 0`` is the generator sigma_g and ``g < 0`` its inverse; strands
are numbered 1..b from the left.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Sequence

from .grid import GridDiagram


class BraidError(ValueError):
    """Malformed braid or quasipositive word."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(g) for g in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.strands < 1:
            raise BraidError(f"a braid needs at least one strand, got {self.strands}")
        for g in letters:
            if g == 0 or abs(g) >= self.strands:
                raise BraidError(f"letter {g} is not a generator of the {self.strands}-strand braid group")

    @property
    def positive_count(self) -> int:
        return sum(1 for g in self.letters if g > 0)

    @property
    def negative_count(self) -> int:
        return sum(1 for g in self.letters if g < 0)

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-g for g in self.letters))

    def __str__(self) -> str:
        return format_braid(self)


@dataclass(frozen=True)
class QuasipositiveWord:
    """Product of bands ``w sigma_i w^-1``; each band is ``(w, i)``."""

    strands: int
    bands: tuple[tuple[tuple[int, ...], int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        bands = tuple((tuple(int(g) for g in w), int(i)) for w, i in self.bands)
        object.__setattr__(self, "bands", bands)
        BraidWord(self.strands, tuple(g for w, _ in bands for g in w))
        for _, i in bands:
            if not 1 <= i < self.strands:
                raise BraidError(f"band generator {i} out of range for {self.strands} strands")

    @property
    def band_count(self) -> int:
        return len(self.bands)

    def __str__(self) -> str:
        parts = [f"({' '.join(map(str, w))} | {i})" if w else f"(|{i})" for w, i in self.bands]
        return f"{self.strands}: {' '.join(parts)}".rstrip()


# ---------------------------------------------------------------------------
# text formats

_BRAID_RE = re.compile(r"^\s*(\d+)\s*:(.*)$")
_BAND_RE = re.compile(r"\(([^()|]*)\|([^()|]*)\)")


def parse_braid(text: str) -> BraidWord:
    """Parse ``"b: g1 g2 ..."``, e.g. ``"2: 1 1 1"``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise BraidError(f"expected 'b: g1 g2 ...', got {text!r}")
    try:
        letters = tuple(int(t) for t in m.group(2).replace(",", " ").split())
    except ValueError:
        raise BraidError(f"braid letters must be nonzero integers: {text!r}") from None
    return BraidWord(int(m.group(1)), letters)


def format_braid(w: BraidWord) -> str:
    return f"{w.strands}: {' '.join(map(str, w.letters))}".rstrip()


def parse_quasipositive(text: str) -> QuasipositiveWord:
    """Parse ``"b: (w | i) (w | i) ..."``; ``w`` may be empty, as in ``"2: (|1)(|1)"``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise BraidError(f"expected 'b: (w | i) ...', got {text!r}")
    body = m.group(2)
    bands = []
    for bm in _BAND_RE.finditer(body):
        try:
            w = tuple(int(t) for t in bm.group(1).replace(",", " ").split())
            i = int(bm.group(2))
        except ValueError:
            raise BraidError(f"malformed band {bm.group(0)!r}") from None
        bands.append((w, i))
    if _BAND_RE.sub("", body).strip():
        raise BraidError(f"unexpected text outside bands in {text!r}")
    return QuasipositiveWord(int(m.group(1)), tuple(bands))


# ---------------------------------------------------------------------------
# basic algebra


def strand_permutation(w: BraidWord) -> list[int]:
    """``perm[p]`` is the final position of the strand starting at position p."""
    at = list(range(w.strands))  # at[position] = strand
    for g in w.letters:
        i = abs(g) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    perm = [0] * w.strands
    for pos, strand in enumerate(at):
        perm[strand] = pos
    return perm


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = []
        while not seen[s]:
            seen[s] = True
            cyc.append(s)
            s = perm[s]
        out.append(cyc)
    return out


def closure_components(w: BraidWord) -> int:
    return len(_cycles(strand_permutation(w)))


def expand_quasipositive(qp: QuasipositiveWord) -> BraidWord:
    letters: list[int] = []
    for w, i in qp.bands:
        letters.extend(w)
        letters.append(i)
        letters.extend(-g for g in reversed(w))
    return BraidWord(qp.strands, tuple(letters))


def qp_euler_characteristic(qp: QuasipositiveWord) -> int:
    """Euler characteristic ``b - m`` of the ribbon surface of the bands."""
    return qp.strands - qp.band_count


def legendrian_tb_rot(w: BraidWord) -> tuple[int, int]:
    """Thurston-Bennequin and rotation numbers of the standard Legendrian closure.

    The rotation number's sign is taken positive, so ``tb + rot`` equals
    ``n+ - n- - b``.
    """
    n_pos, n_neg = w.positive_count, w.negative_count
    return n_pos - 2 * n_neg - w.strands, n_neg


# ---------------------------------------------------------------------------
# Seifert matrix and signature


@dataclass(frozen=True)
class SeifertData:
    matrix: tuple[tuple[int, ...], ...]
    euler_char: int
    components: int

    @property
    def dimension(self) -> int:
        return len(self.matrix)


def _split_pieces(w: BraidWord) -> list[BraidWord]:
    """Split a braid at generator indices that never occur."""
    used = {abs(g) for g in w.letters}
    pieces = []
    start = 1
    for cut in range(1, w.strands + 1):
        if cut == w.strands or cut not in used:
            lo, hi = start, cut
            letters = tuple((abs(g) - lo + 1) * (1 if g > 0 else -1)
                            for g in w.letters if lo <= abs(g) < hi)
            pieces.append(BraidWord(hi - lo + 1, letters))
            start = cut + 1
    return pieces


def _connected_seifert(w: BraidWord) -> list[list[int]]:
    # one cycle per pair of consecutive occurrences of the same generator index
    cycles: list[tuple[int, int, int, int, int]] = []  # (index, start, end, sign_start, sign_end)
    for i in range(1, w.strands):
        pos = [k for k, g in enumerate(w.letters) if abs(g) == i]
        for a, b in zip(pos, pos[1:]):
            cycles.append((i, a, b, 1 if w.letters[a] > 0 else -1, 1 if w.letters[b] > 0 else -1))
    d = len(cycles)
    V = [[0] * d for _ in range(d)]
    for p, (i, a, b, ea, eb) in enumerate(cycles):
        V[p][p] = -(ea + eb) // 2
        for q, (j, c, e, _, _) in enumerate(cycles):
            if q == p:
                continue
            if j == i and c == b:
                # the next cycle on the same index shares crossing b
                if eb > 0:
                    V[p][q] = 1
                else:
                    V[q][p] = -1
            elif j == i + 1 and a < c < b < e:
                V[p][q] = -1
            elif j == i + 1 and c < a < e < b:
                V[q][p] = 1
    return V


def seifert_matrix(w: BraidWord) -> SeifertData:
    """Seifert matrix of the surface from Seifert's algorithm on the closure.

    Split closures give a block-diagonal matrix over the connected pieces.
    """
    blocks = [_connected_seifert(piece) for piece in _split_pieces(w)]
    d = sum(len(B) for B in blocks)
    V = [[0] * d for _ in range(d)]
    off = 0
    for B in blocks:
        for r, row in enumerate(B):
            V[off + r][off:off + len(row)] = row
        off += len(B)
    return SeifertData(
        tuple(tuple(row) for row in V),
        w.strands - len(w.letters),
        closure_components(w),
    )


def symmetric_signature(S: Sequence[Sequence[int]]) -> int:
    """Signature of a symmetric integer matrix by exact congruence reduction."""
    A = [[Fraction(v) for v in row] for row in S]
    n = len(A)
    for r in range(n):
        for c in range(n):
            if A[r][c] != A[c][r]:
                raise ValueError("matrix is not symmetric")
    sig = 0
    alive = list(range(n))
    while alive:
        piv = next((k for k in alive if A[k][k] != 0), None)
        if piv is None:
            pair = next(((p, q) for p in alive for q in alive if p != q and A[p][q] != 0), None)
            if pair is None:
                break
            p, q = pair
            # congruence by (row p += row q, col p += col q) makes A[p][p] = 2 A[p][q] != 0
            for k in range(n):
                A[p][k] += A[q][k]
            for k in range(n):
                A[k][p] += A[k][q]
            piv = p
        pv = A[piv][piv]
        sig += 1 if pv > 0 else -1
        alive.remove(piv)
        for r in alive:
            f = A[r][piv] / pv
            if f:
                for k in alive:
                    A[r][k] -= f * A[piv][k]
        for r in alive:
            A[r][piv] = A[piv][r] = Fraction(0)
    return sig


def signature(w: BraidWord) -> int:
    V = seifert_matrix(w).matrix
    d = len(V)
    return symmetric_signature([[V[r][c] + V[c][r] for c in range(d)] for r in range(d)])


# ---------------------------------------------------------------------------
# braid closure to grid


def _stranded_positions(w: BraidWord) -> list[int]:
    """Final positions of strands that no letter ever slides sideways."""
    at = list(range(w.strands))  # at[position] = starting position of that strand
    moved = set()
    for g in w.letters:
        i = abs(g) - 1
        moved.add(at[i] if g > 0 else at[i + 1])
        at[i], at[i + 1] = at[i + 1], at[i]
    return sorted(pos for pos, strand in enumerate(at) if strand not in moved)


def _layout(w: BraidWord, reset_order: Sequence[int]) -> GridDiagram | None:
    b = w.strands
    moves: list[tuple[int, int]] = [(p, 0) for p in reset_order]  # (position, letter or 0)
    moves += [(abs(g) - 1, g) for g in w.letters]
    moves += [(p, 0) for p in _stranded_positions(w)]
    n = len(moves)

    def step(active, p, g, t):
        if g == 0:
            mover = active[p]
            active[p] = t
        elif g > 0:
            mover = active[p]
            active[p], active[p + 1] = active[p + 1], t
        else:
            mover = active[p + 1]
            active[p + 1], active[p] = active[p], t
        return mover

    # column t is the landing column of move t and active[p] the column at
    # position p; a first pass finds the columns that wrap from bottom to top
    active = [-1] * b
    for t, (p, g) in enumerate(moves):
        step(active, p, g, t)
    depart = [0] * n
    ts: TopologicalSorter = TopologicalSorter()
    for col in range(n):
        ts.add(col)
    for t, (p, g) in enumerate(moves):
        before = active[:]
        depart[step(active, p, g, t)] = t
        for order in (before, active):
            for left, right in zip(order, order[1:]):
                ts.add(right, left)
    try:
        x_order = list(ts.static_order())
    except CycleError:
        return None
    x_of = {col: k for k, col in enumerate(x_order)}
    X = [0] * n
    O = [0] * n
    for col in range(n):
        X[x_of[col]] = n - 1 - col
        O[x_of[col]] = n - 1 - depart[col]
    return GridDiagram(tuple(X), tuple(O))


def to_grid(w: BraidWord) -> GridDiagram:
    """Grid diagram of the braid closure, strands oriented downwards.

    Every row moves one strand sideways into a new column.  The top rows hold
    one trivial move per position, each letter slides a strand under its
    neighbour, and a strand that no letter slides gets a trivial move at the
    bottom so that no column starts and ends in the same row.  Strands leave
    the bottom edge and re-enter at the top.  Columns are ordered by a
    topological sort of the left-to-right order in every row.  Positions are
    reset left to right unless that admits no such order, in which case the
    first workable reset order in lexicographic order is used.
    """
    for reset_order in itertools.permutations(range(w.strands)):
        grid = _layout(w, reset_order)
        if grid is not None:
            return grid
    raise RuntimeError(f"no consistent column order for the closure of {w}")


def random_braid(rng, strands: int, length: int) -> BraidWord:
    letters = []
    for _ in range(length):
        g = rng.randint(1, strands - 1) if strands > 1 else 0
        if g:
            letters.append(g if rng.random() < 0.5 else -g)
    return BraidWord(strands, tuple(letters))


def random_quasipositive(rng, strands: int, bands: int, conj_len: int = 2) -> QuasipositiveWord:
    out = []
    for _ in range(bands):
        w = random_braid(rng, strands, rng.randint(0, conj_len)).letters
        out.append((w, rng.randint(1, strands - 1)))
    return QuasipositiveWord(strands, tuple(out))


def as_letters(items: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(g) for g in items)
