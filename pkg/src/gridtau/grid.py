"""Grid diagrams: validation, text format, components and link-preserving moves.

A grid of size ``n`` stores two permutations ``X`` and ``O`` mapping a column
to the row of its marker.  Columns are numbered left to right and rows bottom
to top.  Each column's segment runs from its X to its O and each row's
segment from its O to its X; vertical segments pass over horizontal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

CORNERS = ("NE", "NW", "SE", "SW")


class GridError(ValueError):
    """Invalid grid data or an illegal move."""


class NotAPermutationError(GridError):
    pass


class SharedCellError(GridError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    X: tuple[int, ...]
    O: tuple[int, ...]

    def __post_init__(self):
        X = tuple(int(v) for v in self.X)
        O = tuple(int(v) for v in self.O)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "O", O)
        n = len(X)
        if n == 0:
            raise GridError("a grid needs at least one column")
        if len(O) != n:
            raise GridError(f"X has {n} entries but O has {len(O)}")
        for name, perm in (("X", X), ("O", O)):
            if sorted(perm) != list(range(n)):
                raise NotAPermutationError(f"{name} is not a permutation of 0..{n - 1}: {list(perm)}")
        for i in range(n):
            if X[i] == O[i]:
                raise SharedCellError(f"X and O share the cell in column {i}, row {X[i]}")

    @property
    def size(self) -> int:
        return len(self.X)

    def __str__(self) -> str:
        return format_grid(self)


def components(grid: GridDiagram) -> int:
    """Number of link components: cycles of ``O^-1 o X``."""
    n = grid.size
    o_inv = [0] * n
    for col, row in enumerate(grid.O):
        o_inv[row] = col
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        c = start
        while not seen[c]:
            seen[c] = True
            c = o_inv[grid.X[c]]
    return count


def format_grid(grid: GridDiagram) -> str:
    return (
        f"n = {grid.size}\n"
        f"X = {' '.join(map(str, grid.X))}\n"
        f"O = {' '.join(map(str, grid.O))}\n"
    )


def parse_grid(text: str) -> GridDiagram:
    """Parse the three-line ``n = / X = / O =`` format (blank and # lines skipped)."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in ("n", "X", "O"):
            raise GridError(f"unrecognised grid line: {raw!r}")
        if key in fields:
            raise GridError(f"duplicate {key} line")
        fields[key] = value.strip()
    missing = [k for k in ("n", "X", "O") if k not in fields]
    if missing:
        raise GridError(f"grid text is missing {', '.join(missing)}")
    try:
        n = int(fields["n"])
        X = [int(v) for v in fields["X"].split()]
        O = [int(v) for v in fields["O"].split()]
    except ValueError as exc:
        raise GridError(f"grid entries must be integers: {exc}") from None
    if len(X) != n or len(O) != n:
        raise GridError(f"n = {n} but X has {len(X)} and O has {len(O)} entries")
    return GridDiagram(tuple(X), tuple(O))


def read_grid(path: str | Path) -> GridDiagram:
    return parse_grid(Path(path).read_text())


def mirror(grid: GridDiagram) -> GridDiagram:
    """Reflect left-right, which reverses every crossing."""
    return GridDiagram(grid.X[::-1], grid.O[::-1])


def translate(grid: GridDiagram, columns: int = 0, rows: int = 0) -> GridDiagram:
    """Cyclically shift the torus by ``columns`` to the right and ``rows`` up."""
    n = grid.size
    X = [0] * n
    O = [0] * n
    for i in range(n):
        X[(i + columns) % n] = (grid.X[i] + rows) % n
        O[(i + columns) % n] = (grid.O[i] + rows) % n
    return GridDiagram(tuple(X), tuple(O))


def disjoint_union(g1: GridDiagram, g2: GridDiagram) -> GridDiagram:
    """Block-diagonal placement: a split link of the two inputs."""
    n1 = g1.size
    X = g1.X + tuple(r + n1 for r in g2.X)
    O = g1.O + tuple(r + n1 for r in g2.O)
    return GridDiagram(X, O)


def _swap_roles(grid: GridDiagram) -> GridDiagram:
    return GridDiagram(grid.O, grid.X)


def stabilize(grid: GridDiagram, column: int, kind: str = "X:SW") -> GridDiagram:
    """Split the marker of type ``kind[0]`` in ``column`` into a 2x2 block.

    ``kind`` is ``"X:<corner>"`` or ``"O:<corner>"``; the corner names the cell
    of the new block left without a marker.  The block gets two markers of the
    split type on the diagonal avoiding that corner and one of the other type
    opposite it.
    """
    marker, _, corner = kind.partition(":")
    if marker not in ("X", "O") or corner not in CORNERS:
        raise GridError(f"unknown stabilization kind {kind!r}")
    n = grid.size
    if not 0 <= column < n:
        raise GridError(f"column {column} out of range for a grid of size {n}")
    if marker == "O":
        return _swap_roles(stabilize(_swap_roles(grid), column, "X:" + corner))

    c, r = column, grid.X[column]
    # block cells as (dcol, drow) offsets from the south-west cell
    offsets = {"SW": (0, 0), "SE": (1, 0), "NW": (0, 1), "NE": (1, 1)}
    empty = offsets[corner]
    other = (1 - empty[0], 1 - empty[1])
    x_cells = [cell for cell in offsets.values() if cell not in (empty, other)]

    def rmap(v: int) -> int:
        return v if v <= r else v + 1

    X = [0] * (n + 1)
    O = [0] * (n + 1)
    for k in range(n):
        if k == c:
            continue
        kk = k if k < c else k + 1
        X[kk] = rmap(grid.X[k])
        O[kk] = rmap(grid.O[k])
    for dc, dr in x_cells:
        X[c + dc] = r + dr
    O[c + other[0]] = r + other[1]
    # the column and row of the block without an O inherit the old O markers
    free_col = c + (1 - other[0])
    O[free_col] = rmap(grid.O[c])
    old_row_o = grid.O.index(r)
    free_row = r + (1 - other[1])
    kk = old_row_o if old_row_o < c else old_row_o + 1
    O[kk] = free_row
    return GridDiagram(tuple(X), tuple(O))


def commutation_problem(grid: GridDiagram, column: int) -> str | None:
    """Why columns ``column`` and ``column + 1`` cannot commute, or None."""
    n = grid.size
    if not 0 <= column < n - 1:
        return f"column {column} has no right neighbour in a grid of size {n}"
    a = sorted((grid.X[column], grid.O[column]))
    b = sorted((grid.X[column + 1], grid.O[column + 1]))
    if set(a) & set(b):
        return f"columns {column} and {column + 1} have markers in a common row"
    disjoint = a[1] < b[0] or b[1] < a[0]
    nested = (a[0] < b[0] and b[1] < a[1]) or (b[0] < a[0] and a[1] < b[1])
    if not (disjoint or nested):
        return f"segments of columns {column} and {column + 1} interleave ({a} vs {b})"
    return None


def commutation_move(grid: GridDiagram, column: int) -> GridDiagram:
    """Swap two adjacent columns whose segments are disjoint or nested."""
    problem = commutation_problem(grid, column)
    if problem:
        raise GridError(f"illegal commutation: {problem}")
    X = list(grid.X)
    O = list(grid.O)
    X[column], X[column + 1] = X[column + 1], X[column]
    O[column], O[column + 1] = O[column + 1], O[column]
    return GridDiagram(tuple(X), tuple(O))


def connected_sum(g1: GridDiagram, g2: GridDiagram) -> GridDiagram:
    """Splice two knot grids into a grid of size ``n1 + n2 - 1``.

    ``g1`` is shifted so the O of its last column sits in its top row and
    ``g2`` so the X of its first column sits in its bottom row.  Placing them
    corner to corner and exchanging those two X markers joins the knots by a
    band; the resulting unit-length column is then removed.
    """
    for g in (g1, g2):
        if components(g) != 1:
            raise GridError("connected sum is only defined here for knots")
    n1, n2 = g1.size, g2.size
    a = translate(g1, rows=(n1 - 1) - g1.O[n1 - 1])
    b = translate(g2, rows=-g2.X[0])
    N = n1 + n2 - 1
    X = [0] * N
    O = [0] * N
    for c in range(n1 - 1):
        X[c] = a.X[c]
        O[c] = a.O[c]
    X[n1 - 1] = a.X[n1 - 1]
    O[n1 - 1] = b.O[0] + n1 - 1
    for c in range(1, n2):
        X[n1 - 1 + c] = b.X[c] + n1 - 1
        O[n1 - 1 + c] = b.O[c] + n1 - 1
    return GridDiagram(tuple(X), tuple(O))


def _as_grid(X: Sequence[int], O: Sequence[int]) -> GridDiagram:
    return GridDiagram(tuple(X), tuple(O))


def torus_2_grid(k: int) -> GridDiagram:
    """A grid of size ``k + 2`` for the positive torus link T(2, k)."""
    n = k + 2
    return _as_grid([(1 - i) % n for i in range(n)], [n - 1 - i for i in range(n)])
