"""Linear algebra over F_2 and reduction of filtered grid complexes.

``filtered_reduce`` cancels arrows in order of increasing filtration drop;
the generators that survive carry the filtration levels at which each
homology class first appears.  ``tau_jump_oracle`` computes the same levels
from ranks alone, straight from the definition, and serves as a check.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numba as nb
import numpy as np
from numba.typed import List

from .chain import GRADED, ComplexInconsistency, FilteredComplex

# ---------------------------------------------------------------------------
# dense bit matrices


@nb.njit(cache=True)
def _prefix_ranks(vec_ptr, vec_idx, width):
    """Rank of the span of the first k vectors, for every k.

    Vector k has ones at ``vec_idx[vec_ptr[k]:vec_ptr[k+1]]``.
    """
    count = vec_ptr.shape[0] - 1
    words = (width + 63) // 64
    cap = min(count, width)
    basis = np.zeros((max(cap, 1), max(words, 1)), np.uint64)
    pivot_of = np.full(max(width, 1), -1, np.int64)
    out = np.zeros(count, np.int64)
    v = np.zeros(max(words, 1), np.uint64)
    rank = 0
    for k in range(count):
        v[:] = 0
        for q in range(vec_ptr[k], vec_ptr[k + 1]):
            e = vec_idx[q]
            v[e >> 6] ^= np.uint64(1) << np.uint64(e & 63)
        w = 0
        while True:
            while w < words and v[w] == 0:
                w += 1
            if w == words:
                break
            word = v[w]
            low = 0
            while (word >> np.uint64(low)) & np.uint64(1) == 0:
                low += 1
            p = w * 64 + low
            b = pivot_of[p]
            if b < 0:
                basis[rank, :] = v
                pivot_of[p] = rank
                rank += 1
                break
            for j in range(w, words):
                v[j] ^= basis[b, j]
        out[k] = rank
    return out


def _pack_lists(vectors) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for k, vec in enumerate(vectors):
        ptr[k + 1] = ptr[k] + len(vec)
    idx = np.fromiter((e for vec in vectors for e in vec), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


def prefix_ranks(vectors, width: int) -> np.ndarray:
    """``out[k]`` is the F_2 rank of ``vectors[:k+1]`` (each a list of set positions)."""
    ptr, idx = _pack_lists(vectors)
    if len(vectors) == 0:
        return np.zeros(0, dtype=np.int64)
    return _prefix_ranks(ptr, idx, width)


class BitMatrix:
    """Dense matrix over F_2 with rows packed into 64-bit words."""

    def __init__(self, rows: np.ndarray, ncols: int):
        self.bits = np.ascontiguousarray(rows, dtype=np.uint64)
        self.nrows = self.bits.shape[0]
        self.ncols = ncols

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        nrows, ncols = a.shape
        words = max((ncols + 63) // 64, 1)
        padded = np.zeros((nrows, words * 64), dtype=np.uint8)
        padded[:, :ncols] = a
        packed = np.packbits(padded.reshape(nrows, words, 64)[:, :, ::-1], axis=2, bitorder="big")
        # packbits gives 8 bytes per word, most significant bit first
        rows = packed.reshape(nrows, words, 8).view(">u8").reshape(nrows, words).astype(np.uint64)
        return cls(rows, ncols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for c in range(self.ncols):
            out[:, c] = (self.bits[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
        return out

    def row_support(self, r: int) -> list[int]:
        return [c for c in range(self.ncols) if (int(self.bits[r, c >> 6]) >> (c & 63)) & 1]

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return int(prefix_ranks([self.row_support(r) for r in range(self.nrows)], self.ncols)[-1])

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)


# ---------------------------------------------------------------------------
# filtered cancellation


@nb.njit(cache=True)
def _sym_diff(a, b):
    out = np.empty(a.shape[0] + b.shape[0], np.int32)
    i = j = k = 0
    while i < a.shape[0] and j < b.shape[0]:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif b[j] < a[i]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < a.shape[0]:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.shape[0]:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k].copy()


@nb.njit(cache=True)
def _without(a, v):
    k = np.searchsorted(a, v)
    if k < a.shape[0] and a[k] == v:
        out = np.empty(a.shape[0] - 1, np.int32)
        out[:k] = a[:k]
        out[k:] = a[k + 1:]
        return out
    return a


@nb.njit(cache=True)
def _cancel_all(indptr, indices, a2, order):
    total = indptr.shape[0] - 1
    empty = np.zeros(0, np.int32)
    succ = List()
    for s in range(total):
        succ.append(indices[indptr[s]:indptr[s + 1]].copy())
    indeg = np.zeros(total, np.int64)
    for k in range(indices.shape[0]):
        indeg[indices[k]] += 1
    pred_arrays = List()
    for s in range(total):
        pred_arrays.append(np.empty(indeg[s], np.int32))
    fill = np.zeros(total, np.int64)
    for s in range(total):
        for k in range(indptr[s], indptr[s + 1]):
            y = indices[k]
            pred_arrays[y][fill[y]] = s
            fill[y] += 1
    pred = pred_arrays
    alive = np.ones(total, np.bool_)
    max_drop2 = a2.max() - a2.min() if total else 0
    drop2 = 0
    remaining = indices.shape[0]
    while remaining > 0 and drop2 <= max_drop2:
        progress = True
        while progress:
            progress = False
            for x in order:
                if not alive[x]:
                    continue
                sx = succ[x]
                y = -1
                for k in range(sx.shape[0]):
                    if a2[x] - a2[sx[k]] == drop2:
                        y = sx[k]
                        break
                if y < 0:
                    continue
                py = pred[y]
                # toggling succ(x) into succ(a) adds a->b and removes a->y
                for a in py:
                    if a != x:
                        succ[a] = _sym_diff(succ[a], sx)
                for b in sx:
                    if b != y:
                        pred[b] = _sym_diff(pred[b], py)
                for a in pred[x]:
                    succ[a] = _without(succ[a], x)
                for b in succ[y]:
                    pred[b] = _without(pred[b], y)
                succ[x] = empty
                pred[x] = empty
                succ[y] = empty
                pred[y] = empty
                alive[x] = False
                alive[y] = False
                progress = True
        remaining = 0
        for s in range(total):
            remaining += succ[s].shape[0]
        drop2 += 2
    return alive, remaining


@dataclass(frozen=True)
class ReducedComplex:
    """Bigradings ``(M, 2A)`` of the generators left after full cancellation."""

    generators: tuple[tuple[int, int], ...]
    states: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.generators)

    def counts(self) -> Counter:
        return Counter(self.generators)

    def levels_by_maslov(self) -> dict[int, list[int]]:
        """Maslov grading -> sorted doubled levels."""
        out: dict[int, list[int]] = {}
        for m, a2 in self.generators:
            out.setdefault(m, []).append(a2)
        return {m: sorted(v) for m, v in sorted(out.items(), reverse=True)}


def filtered_reduce(C: FilteredComplex, check: bool = True) -> ReducedComplex:
    """Cancel every arrow, lowest filtration drop first.

    Sources are visited in order of (A, M, state rank) and each takes its
    lowest-ranked target at the current drop.
    """
    if check and not C.d_squared_is_zero():
        raise ComplexInconsistency("boundary does not square to zero")
    ranks = np.arange(C.num_generators)
    order = np.lexsort((ranks, C.maslov, C.alexander2)).astype(np.int64)
    alive, remaining = _cancel_all(C.indptr, C.indices, C.alexander2.astype(np.int64), order)
    if remaining:
        raise ComplexInconsistency(f"{remaining} arrows survived cancellation")
    idx = np.flatnonzero(alive)
    gens = sorted(zip(C.maslov[idx].tolist(), C.alexander2[idx].tolist()), key=lambda g: (-g[0], g[1]))
    return ReducedComplex(tuple(gens), tuple(idx.tolist()))


# ---------------------------------------------------------------------------
# rank-based definitions


def _blocks(C: FilteredComplex) -> dict[int, np.ndarray]:
    out: dict[int, np.ndarray] = {}
    for m in np.unique(C.maslov).tolist():
        out[m] = np.flatnonzero(C.maslov == m)
    return out


def _targets(C: FilteredComplex, s: int) -> np.ndarray:
    return C.indices[C.indptr[s]:C.indptr[s + 1]]


def _sources_of(C: FilteredComplex) -> list[list[int]]:
    pred: list[list[int]] = [[] for _ in range(C.num_generators)]
    for s in range(C.num_generators):
        for y in _targets(C, s).tolist():
            pred[y].append(s)
    return pred


def tau_jump_oracle(C: FilteredComplex) -> dict[int, list[int]]:
    """Maslov grading -> sorted doubled levels at which homology classes appear.

    For a level r, the image of H_m(F_r) in H_m(C) has dimension
    ``|F_r,m| - rank(d_m on F_r) + rank(d_{m+1} read on rows above r) - rank(d_{m+1})``;
    each increase of this function in r is a jump of that size.
    """
    blocks = _blocks(C)
    pred = _sources_of(C)
    a2 = C.alexander2
    local = np.empty(C.num_generators, dtype=np.int64)
    for m, members in blocks.items():
        local[members] = np.arange(members.size)
    out: dict[int, list[int]] = {}
    for m, members in sorted(blocks.items(), reverse=True):
        below = blocks.get(m - 1, np.zeros(0, dtype=np.int64))
        above = blocks.get(m + 1, np.zeros(0, dtype=np.int64))
        # columns of d_m in increasing filtration order
        by_level = members[np.argsort(a2[members], kind="stable")]
        col_vecs = [local[_targets(C, s)].tolist() for s in by_level]
        col_ranks = prefix_ranks(col_vecs, below.size) if below.size else np.zeros(members.size, np.int64)
        # rows of d_{m+1} (indexed by members) in decreasing filtration order
        by_level_desc = by_level[::-1]
        row_vecs = [[int(local[a]) for a in pred[y]] for y in by_level_desc]
        row_ranks = prefix_ranks(row_vecs, above.size) if above.size else np.zeros(members.size, np.int64)
        full_rank_above = int(row_ranks[-1]) if row_ranks.size else 0

        levels_sorted = a2[by_level]
        dims = []
        cuts = sorted(set(levels_sorted.tolist()))
        for r2 in cuts:
            f = int(np.searchsorted(levels_sorted, r2, side="right"))
            rank_cols = int(col_ranks[f - 1]) if f else 0
            g = members.size - f  # rows with level above r
            rank_rows = int(row_ranks[g - 1]) if g else 0
            dims.append(f - rank_cols + rank_rows - full_rank_above)
        levels: list[int] = []
        prev = 0
        for r2, dim in zip(cuts, dims):
            if dim < prev:
                raise ComplexInconsistency("image dimension decreased along the filtration")
            levels.extend([r2] * (dim - prev))
            prev = dim
        if levels:
            out[m] = levels
    return out


def bigraded_homology(C: FilteredComplex) -> dict[tuple[int, int], int]:
    """Ranks of the homology of the associated graded complex, keyed by ``(M, 2A)``."""
    if C.mode != GRADED:
        raise ValueError("bigraded homology needs the associated graded complex")
    keys = list(zip(C.maslov.tolist(), C.alexander2.tolist()))
    groups: dict[tuple[int, int], list[int]] = {}
    for s, key in enumerate(keys):
        groups.setdefault(key, []).append(s)
    position = np.empty(C.num_generators, dtype=np.int64)
    for members in groups.values():
        position[members] = np.arange(len(members))
    out_rank: dict[tuple[int, int], int] = {}
    for (m, a2), members in groups.items():
        target = groups.get((m - 1, a2), [])
        if not target:
            out_rank[(m, a2)] = 0
            continue
        vecs = [position[_targets(C, s)].tolist() for s in members]
        out_rank[(m, a2)] = int(prefix_ranks(vecs, len(target))[-1])
    table: dict[tuple[int, int], int] = {}
    for (m, a2), members in groups.items():
        h = len(members) - out_rank[(m, a2)] - out_rank.get((m + 1, a2), 0)
        if h < 0:
            raise ComplexInconsistency(f"negative homology rank at {(m, a2)}")
        if h:
            table[(m, a2)] = h
    return dict(sorted(table.items(), key=lambda kv: (-kv[0][0], -kv[0][1])))
