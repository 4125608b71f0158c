"""l-links, A-chains, and A-cycles.

A link is an ordered hypergraph whose first-l and last-l index patterns
coincide; chains are overlapping shifted copies of the link along a line and
cycles identify the two ends.  Counting identities live here together with
the template constructions that the solvers and tests enumerate against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DivisibilityError, InvalidInput, StartEndMismatch, TooShort
from .hypergraph import (
    Edge,
    Hypergraph,
    OrderedHypergraph,
    complete_graph,
    induced,
    ordered_isomorphic,
)


@dataclass(frozen=True)
class Link:
    """Validated l-link.  `body` lives on vertices 0..m-1 in index order."""

    body: OrderedHypergraph
    ell: int

    @property
    def m(self) -> int:
        return self.body.n

    @property
    def k(self) -> int:
        return self.body.k

    @property
    def step(self) -> int:
        """Window shift m - l; the per-link vertex gain of a chain."""
        return self.m - self.ell

    def start_pattern(self) -> Hypergraph:
        return induced(self.body, range(self.ell))

    def end_pattern(self) -> Hypergraph:
        return induced(self.body, range(self.m - self.ell, self.m))

    @property
    def edges_per_link(self) -> int:
        return self.body.num_edges

    @property
    def edges_in_overlap(self) -> int:
        return self.start_pattern().num_edges

    def to_json(self) -> dict:
        return {"ell": self.ell, "body": self.body.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Link":
        return make_link(Hypergraph.from_json(obj["body"]), int(obj["ell"]))


def make_link(body: OrderedHypergraph, ell: int) -> Link:
    """Validate that the first-l and last-l windows agree and return the link."""
    if not 1 <= ell <= body.n:
        raise InvalidInput(f"ell={ell} outside [1, {body.n}]")
    link = Link(body, ell)
    if not ordered_isomorphic(link.start_pattern(), link.end_pattern()):
        raise StartEndMismatch(
            f"first-{ell} and last-{ell} windows induce different index patterns"
        )
    return link


@dataclass(frozen=True)
class ChainLayout:
    """Window decomposition S_1..S_t of a chain on (m-l)t + l indices."""

    link: Link
    t: int
    windows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.t < 1:
            raise InvalidInput("chain length t must be >= 1")

    @property
    def num_vertices(self) -> int:
        return self.link.step * self.t + self.link.ell


def chain_windows(link: Link, t: int) -> ChainLayout:
    if t < 1:
        raise InvalidInput("t must be >= 1")
    step = link.step
    windows = tuple(tuple(range(q * step, q * step + link.m)) for q in range(t))
    return ChainLayout(link, t, windows)


def chain_counts(link: Link, t: int) -> tuple[int, int]:
    """(vertex count, edge count) of the minimal A-chain of length t."""
    if t < 1:
        raise InvalidInput("t must be >= 1")
    v = link.step * t + link.ell
    e = t * (link.edges_per_link - link.edges_in_overlap) + link.edges_in_overlap
    return v, e


def cycle_counts(link: Link, n: int) -> int:
    """Edge count of the A-cycle on n vertices (exact integer arithmetic)."""
    step = link.step
    if step == 0:
        raise DivisibilityError("degenerate link with ell = m")
    if n < link.m:
        raise DivisibilityError(f"n={n} smaller than link order {link.m}")
    if n % step != 0:
        raise DivisibilityError(f"{step} does not divide n={n}")
    total = (link.edges_per_link - link.edges_in_overlap) * n
    if total % step != 0:
        raise DivisibilityError("edge count is not integral for this link")
    return total // step


def build_chain_template(link: Link, t: int) -> OrderedHypergraph:
    """Canonical minimal chain: the link pattern shifted by (m-l)(q-1) per window."""
    layout = chain_windows(link, t)
    step = link.step
    edges = set()
    for q in range(t):
        off = q * step
        for e in link.body.edges:
            edges.add(tuple(v + off for v in e))
    return Hypergraph(layout.num_vertices, link.k, frozenset(edges))


def close_cycle(template: OrderedHypergraph, link: Link, t: int) -> Hypergraph:
    """Identify the end of the chain template with its start; merge coinciding edges."""
    nverts = link.step * t
    if nverts < link.m:
        raise TooShort(f"t(m-l)={nverts} < m={link.m}: closing would collapse a window")
    if template.n != nverts + link.ell:
        raise InvalidInput("template does not match (link, t)")
    edges = set()
    for e in template.edges:
        mapped = tuple(sorted(v - nverts if v >= nverts else v for v in e))
        if len(set(mapped)) != link.k:
            raise TooShort("identification collapses an edge")
        edges.add(mapped)
    # closing merges exactly the overlap-pattern edges; any further merging
    # means the cycle is too short to keep its windows distinct
    if len(edges) != t * (link.edges_per_link - link.edges_in_overlap):
        raise TooShort("identification merges edges of distinct windows")
    return Hypergraph(nverts, link.k, frozenset(edges))


def cycle_on(link: Link, n: int) -> Hypergraph:
    """The A-cycle on n vertices (convenience wrapper over template + closing)."""
    step = link.step
    if n % step != 0 or n < link.m:
        raise DivisibilityError(f"no A-cycle on n={n} for this link")
    t = n // step
    return close_cycle(build_chain_template(link, t), link, t)


def is_chain(
    candidate: OrderedHypergraph, link: Link, mode: str = "exact"
) -> tuple[bool, Optional[ChainLayout]]:
    """Recognise candidate as an A-chain.

    `mode="exact"`: every window must induce exactly the link pattern (minimal
    chains).  `mode="contain"`: windows may carry extra host edges (embedding
    mode); the edge-coverage condition is then skipped since host edges need
    not belong to the chain.
    """
    if mode not in ("exact", "contain"):
        raise InvalidInput(f"unknown mode {mode!r}")
    if candidate.k != link.k:
        return False, None
    step = link.step
    rem = candidate.n - link.ell
    if step == 0 or rem <= 0 or rem % step != 0:
        return False, None
    t = rem // step
    layout = chain_windows(link, t)
    for window in layout.windows:
        pattern = induced(candidate, window)
        if mode == "exact":
            if pattern.edges != link.body.edges:
                return False, None
        else:
            if not pattern.edges.issuperset(link.body.edges):
                return False, None
    if mode == "exact":
        for e in candidate.edges:
            lo, hi = e[0], e[-1]
            if not any(w[0] <= lo and hi <= w[-1] for w in layout.windows):
                return False, None
    return True, layout


@dataclass(frozen=True)
class EmbeddedChain:
    """A chain realised on host vertices: chain index i sits at vertices[i]."""

    link: Link
    t: int
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        expected = self.link.step * self.t + self.link.ell
        if len(self.vertices) != expected:
            raise InvalidInput(
                f"{len(self.vertices)} vertices given, chain needs {expected}"
            )
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInput("host vertices must be injective")

    def realised_edges(self) -> list[tuple[Edge, int]]:
        """(host edge, window index) for every template edge."""
        out = []
        step = self.link.step
        for q in range(self.t):
            off = q * step
            for e in self.link.body.edges:
                host = tuple(sorted(self.vertices[v + off] for v in e))
                out.append((host, q))
        return out

    def host_edges(self) -> list[Edge]:
        return sorted({e for e, _ in self.realised_edges()})

    @property
    def start(self) -> tuple[int, ...]:
        return self.vertices[: self.link.ell]

    @property
    def end(self) -> tuple[int, ...]:
        return self.vertices[len(self.vertices) - self.link.ell :]


_EDGE_RE = re.compile(r"^edge\((\d+),\s*(\d+)\)$")
_CLIQUE_RE = re.compile(r"^clique\((\d+)\)$")


def single_edge_link(k: int, ell: int) -> Link:
    if not 1 <= ell < k:
        raise InvalidInput(f"edge link needs 1 <= ell < k, got ell={ell}, k={k}")
    body = Hypergraph(k, k, frozenset({tuple(range(k))}))
    return make_link(body, ell)


def clique_link(r: int) -> Link:
    if r < 3:
        raise InvalidInput("clique link needs r >= 3")
    return make_link(complete_graph(r), r - 1)


def triangle_link() -> Link:
    return clique_link(3)


def pillar_link() -> Link:
    body = Hypergraph.from_edges(4, 2, [(0, 1), (0, 2), (1, 3), (2, 3)])
    return make_link(body, 2)


def builtin_link(name: str) -> Link:
    """Parse a named link: edge(k,ell) | triangle | clique(r) | pillar."""
    name = name.strip()
    if name == "triangle":
        return triangle_link()
    if name == "pillar":
        return pillar_link()
    m = _EDGE_RE.match(name)
    if m:
        return single_edge_link(int(m.group(1)), int(m.group(2)))
    m = _CLIQUE_RE.match(name)
    if m:
        return clique_link(int(m.group(1)))
    raise InvalidInput(f"unknown link name {name!r}")
