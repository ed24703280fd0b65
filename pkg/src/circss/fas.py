"""Exact minimum feedback arc set size via dynamic programming over vertex subsets.

A digraph is acyclic iff some vertex ordering makes every edge go forward, so
the minimum feedback arc set size equals the minimum backward-edge count over
all orderings. That minimum is computed exactly with the subset recurrence

    f(empty) = 0
    f(S)     = min over v in S of  f(S \\ {v}) + |out(v) intersect (S \\ {v})|

where v is the vertex placed last among S; every edge is charged exactly once,
at the moment its source is placed. The table has 2^n entries with bitset
popcounts in the inner loop, so instances are capped (default n <= 22, about
20 MB of table state at the cap). Loops can never be made forward and are
pre-counted instead of entering the recurrence.

The n! permutation brute force is kept as a fully independent oracle for the
DP on small instances.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np
from numba import njit, prange

from .cayley import DEFAULT_EXACT_CAP, CirculantGraph, is_acyclic
from .errors import DomainError, ResourceLimitError

#: Hard ceiling for the permutation brute force.
BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class FasInstance:
    """A digraph as per-vertex out-neighbor bitsets (loops permitted)."""

    n: int
    out_masks: tuple[int, ...]

    @property
    def loop_count(self) -> int:
        return sum(1 for v in range(self.n) if self.out_masks[v] >> v & 1)

    def edge_list(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in range(self.n)
            for v in range(self.n)
            if self.out_masks[u] >> v & 1
        ]


@dataclass(frozen=True)
class FasResult:
    """Exact optimum with a checkable certificate.

    ``ordering`` is a vertex permutation whose backward edges (position of
    source >= position of target, which includes loops) are exactly
    ``removed``, and ``beta == len(removed)``; deleting them leaves an acyclic
    graph, which beta_exact verifies before returning.
    """

    beta: int
    ordering: tuple[int, ...]
    removed: tuple[tuple[int, int], ...]


def from_graph(g: CirculantGraph) -> FasInstance:
    """Bitset instance of a circulant digraph: bit (x+a) mod N set for each a."""
    n = g.n
    masks = [0] * n
    for x in range(n):
        for a in g.conn:
            masks[x] |= 1 << ((x + a) % n)
    return FasInstance(n=n, out_masks=tuple(masks))


def from_edges(n: int, edge_list: Iterable[tuple[int, int]]) -> FasInstance:
    if n < 1:
        raise DomainError(f"instance needs at least one vertex, got n = {n}")
    masks = [0] * n
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"edge ({u}, {v}) outside vertex range [0, {n})")
        masks[u] |= 1 << v
    return FasInstance(n=n, out_masks=tuple(masks))


@njit(inline="always")
def _popcount(x):
    # 64-bit SWAR popcount; inputs here never exceed 2^MAX cap bits.
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


@njit(cache=True)
def _dp_fill(n, out_masks, f, parent):
    """Fill the subset table f and the last-placed-vertex table parent.

    Subsets are visited in increasing integer order, which always visits
    S \\ {v} before S. Ties go to the smallest vertex index, making the
    reconstructed ordering deterministic.
    """
    f[0] = 0
    size = 1 << n
    for s in range(1, size):
        best = 1 << 30
        best_v = 0
        rem = s
        while rem:
            low = rem & -rem
            v = _popcount(low - 1)
            cand = f[s ^ low] + _popcount(s & out_masks[v])
            if cand < best:
                best = cand
                best_v = v
            rem ^= low
        f[s] = best
        parent[s] = best_v


@njit(cache=True, parallel=True)
def _dp_beta_batch(n, out_mask_rows):
    """Optimum backward-edge count for a batch of loop-free instances.

    Same recurrence as _dp_fill without certificate bookkeeping, parallelized
    across instances. Each worker holds one 2^n table, so callers keep n small
    enough for per-thread tables to fit comfortably (the package cap does).
    """
    count = out_mask_rows.shape[0]
    size = 1 << n
    betas = np.empty(count, dtype=np.int32)
    for idx in prange(count):
        f = np.empty(size, dtype=np.int32)
        f[0] = 0
        for s in range(1, size):
            best = 1 << 30
            rem = s
            while rem:
                low = rem & -rem
                v = _popcount(low - 1)
                cand = f[s ^ low] + _popcount(s & out_mask_rows[idx, v])
                if cand < best:
                    best = cand
                rem ^= low
            f[s] = best
        betas[idx] = f[size - 1]
    return betas


def beta_exact(inst: FasInstance, cap: int = DEFAULT_EXACT_CAP) -> FasResult:
    """Exact minimum feedback arc set size with an optimal-ordering certificate.

    Loops each force one deletion and are handled outside the DP. The returned
    certificate is re-verified here: removed edges are exactly the backward
    ones of the ordering, and deleting them leaves an acyclic graph.
    """
    n = inst.n
    if n > cap:
        raise ResourceLimitError(
            f"exact solver needs a 2^{n}-entry table; n = {n} exceeds cap {cap} "
            f"(about {(1 << n) * 5 / 2**20:.0f} MiB)"
        )
    stripped = tuple(inst.out_masks[v] & ~(1 << v) for v in range(n))
    out = np.array(stripped, dtype=np.int64)
    f = np.empty(1 << n, dtype=np.int32)
    parent = np.empty(1 << n, dtype=np.int8)
    _dp_fill(n, out, f, parent)

    s = (1 << n) - 1
    last_to_first = []
    while s:
        v = int(parent[s])
        last_to_first.append(v)
        s ^= 1 << v
    ordering = tuple(reversed(last_to_first))

    pos = [0] * n
    for i, v in enumerate(ordering):
        pos[v] = i
    removed = tuple(
        (u, v) for u, v in inst.edge_list() if pos[u] >= pos[v]
    )
    beta = int(f[(1 << n) - 1]) + inst.loop_count
    assert len(removed) == beta, (beta, removed, ordering)
    removed_set = set(removed)
    kept = [e for e in inst.edge_list() if e not in removed_set]
    assert is_acyclic(kept, n), (inst, ordering)
    return FasResult(beta=beta, ordering=ordering, removed=removed)


def beta_exact_circulant_batch(
    n: int, conn_masks: Sequence[int] | np.ndarray, cap: int = DEFAULT_EXACT_CAP
) -> np.ndarray:
    """Exact beta for many circulant instances of one modulus at once.

    ``conn_masks`` holds one bitmask per instance with bit a set for each
    connection element a (bit 0 must be clear). Returns int32 betas in input
    order. This is the bulk path behind exhaustive verification sweeps.
    """
    if n > cap:
        raise ResourceLimitError(
            f"exact solver needs 2^{n}-entry tables; n = {n} exceeds cap {cap}"
        )
    masks = np.asarray(conn_masks, dtype=np.int64)
    if masks.ndim != 1:
        raise DomainError("conn_masks must be one-dimensional")
    if np.any(masks & 1):
        raise DomainError("connection masks must not contain residue 0")
    rows = np.empty((len(masks), n), dtype=np.int64)
    full = (1 << n) - 1
    for i, amask in enumerate(masks):
        am = int(amask)
        if not 0 < am <= full:
            raise DomainError(f"connection mask {am} out of range for n = {n}")
        rows[i, 0] = am
        for x in range(1, n):
            # out-neighbors of vertex x: the set mask rotated left by x
            rows[i, x] = ((am << x) | (am >> (n - x))) & full
    return _dp_beta_batch(n, rows)


def beta_upper_by_ordering(inst: FasInstance, ordering: Sequence[int]) -> int:
    """Backward-edge count of one ordering; an upper bound on the exact beta.

    Loops count as backward under every ordering.
    """
    n = inst.n
    if sorted(ordering) != list(range(n)):
        raise DomainError(f"ordering must be a permutation of 0..{n - 1}")
    pos = [0] * n
    for i, v in enumerate(ordering):
        pos[v] = i
    count = 0
    for u, v in inst.edge_list():
        if pos[u] >= pos[v]:
            count += 1
    return count


def brute_force_beta(inst: FasInstance) -> int:
    """Independent oracle: minimum backward-edge count over all n! orderings."""
    n = inst.n
    if n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(
            f"brute force enumerates {n}! orderings; n = {n} exceeds cap {BRUTE_FORCE_CAP}"
        )
    masks = inst.out_masks
    best = None
    for perm in permutations(range(n)):
        placed = 0
        count = 0
        for v in perm:
            count += (masks[v] & placed).bit_count()
            if masks[v] >> v & 1:
                count += 1
            placed |= 1 << v
            if best is not None and count >= best:
                break
        else:
            if best is None or count < best:
                best = count
    assert best is not None
    return best
