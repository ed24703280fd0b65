"""Circulant Cayley digraphs Cay(Z/NZ, E_A) for a connection set A.

Vertices are the residues 0..N-1 and every a in A contributes the edges
(x, x+a). Short cycles, nonadjacent-pair counts and backward-edge counts under
the multiply-by-unit vertex orderings all have closed forms in terms of A, so
edges are only materialized below a configurable cap.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

from .errors import DomainError, ResourceLimitError
from .heights import canonicalize, height
from .residues import Modulus, inv, make_modulus

#: Default cap on N for anything that materializes edges or 2^N DP state.
DEFAULT_EXACT_CAP = 22


@dataclass(frozen=True)
class CirculantGraph:
    """Immutable circulant digraph: modulus N and connection set A.

    ``conn`` is strictly ascending with entries in [1, N-1]; |A| = d and the
    implied edge set has exactly d*N edges.
    """

    modulus: Modulus
    conn: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.modulus.n

    @property
    def d(self) -> int:
        return len(self.conn)


@dataclass(frozen=True)
class GraphReport:
    """Derived facts about one circulant digraph."""

    n: int
    d: int
    has_loop: bool
    has_digon: bool
    has_triangle: bool
    gamma: Optional[int]
    height_bound_beta: int
    css_fast_path: bool

    @property
    def triangle_free(self) -> bool:
        return not (self.has_loop or self.has_digon or self.has_triangle)


def circulant(n: int | Modulus, conn: Iterable[int]) -> CirculantGraph:
    """Validated constructor: conn must be distinct nonzero residues mod n."""
    m = n if isinstance(n, Modulus) else make_modulus(n)
    raw = tuple(conn)
    elems = tuple(sorted(set(raw)))
    if not elems:
        raise DomainError("connection set must be nonempty")
    if len(elems) != len(raw):
        raise DomainError("connection set entries must be distinct")
    for a in elems:
        if not 1 <= a <= m.n - 1:
            raise DomainError(
                f"connection element {a} not a nonzero residue mod {m.n}"
            )
    return CirculantGraph(modulus=m, conn=elems)


def sumset(conn: Iterable[int], l: int, m: Modulus) -> frozenset[int]:
    """l-fold sumset {a_1 + ... + a_l mod n : a_i in A}, by iterated pairwise sums."""
    if l < 1:
        raise DomainError(f"sumset length must be >= 1, got {l}")
    base = frozenset(a % m.n for a in conn)
    if not base:
        raise DomainError("sumset of an empty set")
    n = m.n
    cur = base
    for _ in range(l - 1):
        cur = frozenset((s + a) % n for s in cur for a in base)
    return cur


def has_cycle_of_length(g: CirculantGraph, l: int) -> bool:
    """A directed l-cycle exists iff 0 lies in the l-fold sumset of A."""
    return 0 in sumset(g.conn, l, g.modulus)


def cycle_certificate(g: CirculantGraph, l: int) -> Optional[tuple[int, ...]]:
    """Lexicographically first multiset of l connection elements summing to 0 mod N."""
    n = g.n
    for combo in combinations_with_replacement(g.conn, l):
        if sum(combo) % n == 0:
            return combo
    return None


def is_triangle_free(g: CirculantGraph) -> bool:
    """No loops, digons or triangles: 0 is outside A, 2A and 3A."""
    return not any(has_cycle_of_length(g, l) for l in (1, 2, 3))


def gamma(g: CirculantGraph) -> int:
    """Nonadjacent-pair count N(N-1-2d)/2 for loop- and digon-free graphs.

    With no loops or digons the d*N directed edges meet d*N distinct vertex
    pairs, so the formula is exact; otherwise the count must come from
    gamma_oracle, and this raises to say so.
    """
    if has_cycle_of_length(g, 1) or has_cycle_of_length(g, 2):
        raise DomainError(
            "gamma formula needs a loop- and digon-free graph; "
            "use gamma_oracle for this one"
        )
    n, d = g.n, g.d
    return n * (n - 1 - 2 * d) // 2


def gamma_oracle(g: CirculantGraph, cap: int = DEFAULT_EXACT_CAP) -> int:
    """Directly count unordered nonadjacent vertex pairs on materialized edges.

    Valid for any circulant digraph; used as the independent cross-check of the
    gamma formula. Materializes adjacency, hence the cap.
    """
    n = g.n
    if n > cap:
        raise ResourceLimitError(
            f"gamma_oracle materializes adjacency; N = {n} exceeds cap {cap}"
        )
    out = [0] * n
    for x in range(n):
        for a in g.conn:
            out[x] |= 1 << ((x + a) % n)
    count = 0
    for u in range(n):
        for v in range(u + 1, n):
            if not (out[u] >> v & 1 or out[v] >> u & 1):
                count += 1
    return count


def edges(g: CirculantGraph, cap: int = DEFAULT_EXACT_CAP) -> list[tuple[int, int]]:
    """Materialize the full edge list (x, x+a), x ascending then a ascending."""
    n = g.n
    if n > cap:
        raise ResourceLimitError(f"refusing to materialize {g.d * n} edges: N = {n} > cap {cap}")
    return [(x, (x + a) % n) for x in range(n) for a in g.conn]


def unit_backward_edges(g: CirculantGraph, k: int) -> list[tuple[int, int]]:
    """Edges that go backward under the multiply-by-k vertex ordering.

    Position i of the ordering holds vertex k*i mod N, so vertex x sits at
    position u*x mod N with u the inverse of k. The edge (x, x+a) is backward
    exactly when its position u*x mod N is at least N - (u*a mod N).
    """
    n = g.n
    u = inv(k, g.modulus)
    result = []
    for a in g.conn:
        r = u * a % n
        for i in range(n - r, n):
            result.append((k * i % n, k * (i + r) % n))
    return result


def unit_backward_count(g: CirculantGraph, k: int, check: bool = False) -> int:
    """|backward edges| under the multiply-by-k ordering: sum_j (u*a_j mod N).

    With ``check=True`` (test mode, N within cap) the edge set is materialized
    and the closed form is asserted against it, along with acyclicity of what
    remains after removing those edges.
    """
    n = g.n
    u = inv(k, g.modulus)
    count = sum(u * a % n for a in g.conn)
    if check:
        removed = unit_backward_edges(g, k)
        assert len(removed) == count, (g.conn, k, len(removed), count)
        kept = set(edges(g)) - set(removed)
        assert is_acyclic(sorted(kept), n), (g.conn, k)
    return count


def beta_height_bound(g: CirculantGraph) -> int:
    """Upper bound on the minimum feedback arc set size: the height of <A>.

    Every unit ordering leaves an acyclic graph once its backward edges are
    removed, and the cheapest one removes exactly height(<a_1,...,a_d>) edges.
    """
    return height(canonicalize(g.conn, g.modulus)).value


def is_acyclic(edge_list: Sequence[tuple[int, int]], n: int) -> bool:
    """True iff the digraph on vertices 0..n-1 admits a topological order.

    Iteratively peels vertices of outdegree zero; every vertex gets peeled iff
    no directed cycle exists. Loops keep their vertex's outdegree positive and
    are therefore reported as cycles.
    """
    outdeg = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"edge ({u}, {v}) outside vertex range [0, {n})")
        outdeg[u] += 1
        preds[v].append(u)
    stack = [v for v in range(n) if outdeg[v] == 0]
    peeled = 0
    while stack:
        v = stack.pop()
        peeled += 1
        for u in preds[v]:
            outdeg[u] -= 1
            if outdeg[u] == 0:
                stack.append(u)
    return peeled == n


def graph_report(g: CirculantGraph, cap: int = DEFAULT_EXACT_CAP) -> GraphReport:
    """Collect the derived facts the CLI prints for one graph.

    gamma comes from the closed form when the graph is loop- and digon-free,
    from the oracle when it is not but still fits the cap, and is None past
    the cap.
    """
    has_loop = has_cycle_of_length(g, 1)
    has_digon = has_cycle_of_length(g, 2)
    has_triangle = has_cycle_of_length(g, 3)
    if not has_loop and not has_digon:
        gamma_value: Optional[int] = gamma(g)
    elif g.n <= cap:
        gamma_value = gamma_oracle(g, cap)
    else:
        gamma_value = None
    return GraphReport(
        n=g.n,
        d=g.d,
        has_loop=has_loop,
        has_digon=has_digon,
        has_triangle=has_triangle,
        gamma=gamma_value,
        height_bound_beta=beta_height_bound(g),
        css_fast_path=4 * g.d <= g.n - 1,
    )
