"""Colour-indexed hypergraph collections and transversal certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InvalidInput
from .hypergraph import Edge, Hypergraph, min_degree_d, neighbour_sets
from .links import Link, cycle_on
from .matching import maximum_bipartite_matching

# machine-readable diagnostics for verify_certificate
DUPLICATE_COLOUR = "DuplicateColour"
EDGE_NOT_IN_COLOUR = "EdgeNotInColour"
NOT_SPANNING = "NotSpanning"
NOT_CYCLE_SHAPE = "NotCycleShape"
COLOUR_OUT_OF_RANGE = "ColourOutOfRange"


@dataclass(frozen=True)
class Collection:
    """Indexed sequence of k-uniform hypergraphs on a shared vertex set."""

    n: int
    k: int
    members: tuple[Hypergraph, ...]

    def __post_init__(self) -> None:
        for i, H in enumerate(self.members):
            if H.n != self.n or H.k != self.k:
                raise InvalidInput(f"member {i} has n={H.n}, k={H.k}; expected {self.n}, {self.k}")

    @property
    def m(self) -> int:
        return len(self.members)

    def union_edges(self) -> frozenset[Edge]:
        out: set[Edge] = set()
        for H in self.members:
            out |= H.edges
        return frozenset(out)

    def colours_of(self, edge: Sequence[int]) -> list[int]:
        e = tuple(sorted(edge))
        return [i for i, H in enumerate(self.members) if e in H.edges]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "members": [H.to_json() for H in self.members],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Collection":
        members = tuple(Hypergraph.from_json(h) for h in obj["members"])
        return cls(int(obj["n"]), int(obj["k"]), members)


@dataclass(frozen=True)
class TransversalCertificate:
    """An embedded copy plus an injective edge -> colour map witnessing it."""

    target: Hypergraph
    phi: tuple[tuple[Edge, int], ...]  # (edge, colour), edges sorted

    @classmethod
    def from_mapping(cls, target: Hypergraph, mapping: dict[Edge, int]) -> "TransversalCertificate":
        if set(mapping) != set(target.edges):
            raise InvalidInput("phi domain must be exactly the target edge set")
        return cls(target, tuple(sorted(mapping.items())))

    def mapping(self) -> dict[Edge, int]:
        return dict(self.phi)

    def colours(self) -> list[int]:
        return [c for _, c in self.phi]

    def to_json(self) -> dict:
        return {
            "edges": [list(e) for e, _ in self.phi],
            "phi": [c for _, c in self.phi],
        }

    @classmethod
    def from_json(cls, obj: dict, n: int, k: int) -> "TransversalCertificate":
        edges = [tuple(int(v) for v in e) for e in obj["edges"]]
        phi = [int(c) for c in obj["phi"]]
        if len(edges) != len(phi):
            raise InvalidInput("edges and phi must be parallel arrays")
        target = Hypergraph.from_json({"n": n, "k": k, "edges": [list(e) for e in edges]})
        return cls.from_mapping(target, dict(zip(edges, phi)))


def collection_min_degree(C: Collection, d: int) -> int:
    """delta_d of the collection: the minimum over members of delta_d."""
    if C.m == 0:
        raise InvalidInput("empty collection has no minimum degree")
    return min(min_degree_d(H, d) for H in C.members)


def threshold_hypergraph(C: Collection, colours: Iterable[int], theta: int) -> Hypergraph:
    """Edges present in at least `theta` of the given colours."""
    cols = sorted(set(colours))
    if not cols:
        raise InvalidInput("colour set must be nonempty")
    if not 0 <= theta <= len(cols):
        raise InvalidInput(f"theta={theta} outside [0, {len(cols)}]")
    if theta == 0:
        return Hypergraph(
            C.n, C.k, frozenset(itertools.combinations(range(C.n), C.k))
        )
    counts: dict[Edge, int] = {}
    for i in cols:
        for e in C.members[i].edges:
            counts[e] = counts.get(e, 0) + 1
    return Hypergraph(C.n, C.k, frozenset(e for e, c in counts.items() if c >= theta))


def induced_collection(C: Collection, U: Iterable[int]) -> tuple[Collection, list[int]]:
    """Restrict every member to U.  Returns the collection plus the sorted
    original labels so callers can map re-indexed vertices back."""
    from .hypergraph import induced

    verts = sorted(set(U))
    members = tuple(induced(H, verts) for H in C.members)
    return Collection(len(verts), C.k, members), verts


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: Optional[str] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(
    C: Collection,
    cert: TransversalCertificate,
    link: Optional[Link] = None,
    n: Optional[int] = None,
) -> VerifyResult:
    """Check injectivity and colour membership; optionally check that the
    target is a spanning A-cycle for the expected link."""
    seen: set[int] = set()
    for edge, colour in cert.phi:
        if colour in seen:
            return VerifyResult(False, DUPLICATE_COLOUR, f"colour {colour} repeats")
        seen.add(colour)
        if not 0 <= colour < C.m:
            return VerifyResult(False, COLOUR_OUT_OF_RANGE, f"colour {colour}")
        if edge not in C.members[colour].edges:
            return VerifyResult(
                False, EDGE_NOT_IN_COLOUR, f"edge {edge} not in member {colour}"
            )
    if link is not None:
        host_n = n if n is not None else C.n
        covered = {v for e, _ in cert.phi for v in e}
        if cert.target.n != host_n or covered != set(range(host_n)):
            return VerifyResult(False, NOT_SPANNING, f"covers {len(covered)} of {host_n}")
        if not is_cycle_copy(cert.target, link):
            return VerifyResult(False, NOT_CYCLE_SHAPE, "no consistent cyclic labelling")
    return VerifyResult(True)


def is_cycle_copy(target: Hypergraph, link: Link) -> bool:
    """Is `target` isomorphic (unordered) to the A-cycle on its vertex count?"""
    n = target.n
    step = link.step
    if n % step != 0 or n < link.m:
        return False
    canonical = cycle_on(link, n)
    if target.num_edges != canonical.num_edges:
        return False
    if link.k == 2 and link.m == 2 and link.ell == 1:
        return _is_hamilton_cycle_graph(target)
    return _cyclic_labelling_exists(target, canonical)


def _is_hamilton_cycle_graph(target: Hypergraph) -> bool:
    if target.num_edges != target.n or target.n < 3:
        return False
    adj = neighbour_sets(target)
    if any(len(nb) != 2 for nb in adj):
        return False
    # 2-regular and connected => a single cycle
    seen = {0}
    prev, cur = None, 0
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return False
        prev, cur = cur, nxt[0]
        if cur == 0:
            break
        if cur in seen:
            return False
        seen.add(cur)
    return len(seen) == target.n


def _cyclic_labelling_exists(target: Hypergraph, canonical: Hypergraph) -> bool:
    """Backtracking search for a bijection positions -> host vertices mapping
    the canonical cycle edge set onto the target edge set."""
    n = canonical.n
    # canonical edges grouped by the position at which they complete
    by_last: list[list[Edge]] = [[] for _ in range(n)]
    for e in canonical.edges:
        by_last[max(e)].append(e)
    assignment: list[int] = [-1] * n
    used = [False] * n
    target_edges = target.edges

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        for v in range(n):
            if used[v]:
                continue
            assignment[pos] = v
            ok = True
            for e in by_last[pos]:
                host = tuple(sorted(assignment[i] for i in e))
                if host not in target_edges:
                    ok = False
                    break
            if ok:
                used[v] = True
                if extend(pos + 1):
                    return True
                used[v] = False
        assignment[pos] = -1
        return False

    return extend(0)


def rainbow_colouring(
    C: Collection, target: Hypergraph, allowed: Iterable[int]
) -> Optional[TransversalCertificate]:
    """Exact rainbow colouring of `target` from `allowed` colours, or None.

    Builds the edge/colour availability graph and runs maximum matching, so
    a None answer is a Hall-type refutation, not a heuristic miss.
    """
    cols = sorted(set(allowed))
    if any(not 0 <= c < C.m for c in cols):
        raise InvalidInput("allowed colours out of range")
    edges = target.sorted_edges()
    col_index = {c: j for j, c in enumerate(cols)}
    adj = [
        [col_index[c] for c in cols if e in C.members[c].edges]
        for e in edges
    ]
    match = maximum_bipartite_matching(adj, len(cols))
    if any(v == -1 for v in match):
        return None
    mapping = {e: cols[match[i]] for i, e in enumerate(edges)}
    return TransversalCertificate.from_mapping(target, mapping)
