"""k-uniform hypergraphs on integer vertices 0..n-1.

Edges are strictly increasing k-tuples; equality of edge sets is therefore
canonical.  An *ordered* hypergraph is the same object with the integer
order taken as the vertex order, so order-preserving isomorphism reduces to
edge-set equality of index patterns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidHypergraph, InvalidInput

Edge = tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """Immutable k-uniform hypergraph.

    Invariants: every edge is a strictly increasing k-tuple of vertices in
    range, and there are no duplicate edges (guaranteed by the frozenset).
    """

    n: int
    k: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 1:
            raise InvalidHypergraph(f"bad dimensions n={self.n} k={self.k}")
        for e in self.edges:
            if len(e) != self.k:
                raise InvalidHypergraph(f"edge {e} is not {self.k}-uniform")
            if any(e[i] >= e[i + 1] for i in range(len(e) - 1)):
                raise InvalidHypergraph(f"edge {e} is not strictly increasing")
            if e[0] < 0 or e[-1] >= self.n:
                raise InvalidHypergraph(f"edge {e} out of range [0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        """Build from unordered edge iterables; sorts each edge and rejects repeats within an edge."""
        normalised = set()
        for raw in edges:
            e = tuple(sorted(raw))
            if len(set(e)) != len(e):
                raise InvalidHypergraph(f"edge {raw} has repeated vertices")
            normalised.add(e)
        return cls(n, k, frozenset(normalised))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, edge: Sequence[int]) -> bool:
        return tuple(sorted(edge)) in self.edges

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Hypergraph":
        """Strict parser: inner lists must already be strictly increasing."""
        try:
            n, k, edges = int(obj["n"]), int(obj["k"]), obj["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidHypergraph(f"malformed hypergraph object: {exc}") from exc
        tuples = []
        for e in edges:
            t = tuple(int(v) for v in e)
            if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
                raise InvalidHypergraph(f"edge {t} is not strictly increasing")
            tuples.append(t)
        if len(set(tuples)) != len(tuples):
            raise InvalidHypergraph("duplicate edges in input")
        return cls(n, k, frozenset(tuples))


# The order of an ordered hypergraph is the integer order of its vertices;
# no extra state is needed.
OrderedHypergraph = Hypergraph


def degree_d(H: Hypergraph, S: Iterable[int]) -> int:
    """Number of edges of H containing the d-set S, 1 <= d < k."""
    s = frozenset(S)
    d = len(s)
    if not 1 <= d < H.k:
        raise InvalidInput(f"|S|={d} outside [1, {H.k - 1}]")
    if any(v < 0 or v >= H.n for v in s):
        raise InvalidInput(f"S={sorted(s)} not a subset of the vertex set")
    return sum(1 for e in H.edges if s.issubset(e))


def min_degree_d(H: Hypergraph, d: int) -> int:
    """delta_d(H): the minimum of degree_d over all d-subsets of the vertex set."""
    if not 1 <= d < H.k:
        raise InvalidInput(f"d={d} outside [1, {H.k - 1}]")
    if H.n < d:
        raise InvalidInput(f"n={H.n} smaller than d={d}")
    counts: dict[Edge, int] = {}
    for e in H.edges:
        for s in itertools.combinations(e, d):
            counts[s] = counts.get(s, 0) + 1
    if len(counts) < _ncombs(H.n, d):
        return 0  # some d-set touches no edge
    return min(counts.values())


def _ncombs(n: int, d: int) -> int:
    out = 1
    for i in range(d):
        out = out * (n - i) // (i + 1)
    return out


def induced(H: Hypergraph, U: Iterable[int]) -> Hypergraph:
    """Subhypergraph on U, re-indexed 0..|U|-1 by increasing original label."""
    verts = sorted(set(U))
    if verts and (verts[0] < 0 or verts[-1] >= H.n):
        raise InvalidInput(f"U={verts} not a subset of the vertex set")
    index = {v: i for i, v in enumerate(verts)}
    vset = set(verts)
    edges = [tuple(index[v] for v in e) for e in H.edges if vset.issuperset(e)]
    return Hypergraph(len(verts), H.k, frozenset(edges))


def ordered_isomorphic(a: OrderedHypergraph, b: OrderedHypergraph) -> bool:
    """Order-preserving isomorphism of index-normalised objects is edge-set equality."""
    return a.n == b.n and a.k == b.k and a.edges == b.edges


def complete_graph(n: int) -> Hypergraph:
    return Hypergraph(n, 2, frozenset(itertools.combinations(range(n), 2)))


def complete_uniform(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k, frozenset(itertools.combinations(range(n), k)))


def cycle_graph(n: int) -> Hypergraph:
    edges = [tuple(sorted((i, (i + 1) % n))) for i in range(n)]
    return Hypergraph(n, 2, frozenset(edges))


def neighbour_sets(H: Hypergraph) -> list[set[int]]:
    """Per-vertex neighbourhoods for k=2 graphs (fast path used by the solvers)."""
    if H.k != 2:
        raise InvalidInput("neighbour_sets requires a 2-uniform hypergraph")
    adj: list[set[int]] = [set() for _ in range(H.n)]
    for u, v in H.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def all_d_sets(n: int, d: int) -> Iterator[Edge]:
    return itertools.combinations(range(n), d)
