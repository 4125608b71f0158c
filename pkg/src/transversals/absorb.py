"""Absorption toolbox.

Every construction here is randomised-build-then-verify: an object is only
returned after its defining property has been checked, exhaustively when the
case count is small and by sampling otherwise.  Asymptotic guarantees are
replaced by audits plus retries, so a returned object is always usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .collection import Collection, rainbow_colouring, threshold_hypergraph
from .errors import (
    InfeasibleDegrees,
    InvalidInput,
    NoCopyFound,
    AbsorberFailed,
    PartitionFailed,
    SizesMismatch,
)
from .exact import find_embedding
from .hypergraph import (
    Edge,
    Hypergraph,
    all_d_sets,
    induced,
    min_degree_d,
    neighbour_sets,
)
from .links import EmbeddedChain, Link, build_chain_template, chain_counts
from .matching import maximum_bipartite_matching
from .rng import rng_for

EXHAUSTIVE_CUTOFF = 10**5
SAMPLE_COUNT = 10**3
DEFAULT_RETRIES = 50
DEFAULT_PARTITION_SLACK = 0.4


@dataclass(frozen=True)
class BipartiteAvailability:
    """Left items (things to be assigned) against right items (resources);
    adjacency[i] is the set of right indices usable by left item i."""

    m_A: int
    n_B: int
    adjacency: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.m_A:
            raise InvalidInput("one adjacency row per left item required")
        for row in self.adjacency:
            if any(not 0 <= b < self.n_B for b in row):
                raise InvalidInput("right index out of range")

    def right_degree(self, b: int) -> int:
        return sum(1 for row in self.adjacency if b in row)


@dataclass(frozen=True)
class MatchingAbsorber:
    """B0 almost saturates the left side; B1 is a flexible pool any ell of
    which can complete it to a perfect matching."""

    B0: tuple[int, ...]
    B1: tuple[int, ...]
    ell: int


def _matchable(K: BipartiteAvailability, rights: Sequence[int]) -> bool:
    """Perfect matching of the whole left side into the given rights?"""
    pos = {b: j for j, b in enumerate(rights)}
    adj = [[pos[b] for b in row if b in pos] for row in K.adjacency]
    match = maximum_bipartite_matching(adj, len(rights))
    return all(v != -1 for v in match)


def absorber_holds(
    K: BipartiteAvailability,
    absorber: MatchingAbsorber,
    rng=None,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Check the defining property: every ell-subset U of B1 completes B0 to
    a perfect matching.  Exhaustive when the subset count is small, sampled
    otherwise (rng required then).  Returns (ok, failing U or None)."""
    b1 = list(absorber.B1)
    ell = absorber.ell
    if ell == 0:
        ok = _matchable(K, list(absorber.B0))
        return ok, None if ok else ()
    total = math.comb(len(b1), ell)
    if total <= EXHAUSTIVE_CUTOFF:
        subsets = combinations(b1, ell)
    else:
        if rng is None:
            raise InvalidInput("sampled verification needs an rng")
        subsets = (tuple(sorted(rng.sample(b1, ell))) for _ in range(SAMPLE_COUNT))
    for U in subsets:
        if not _matchable(K, list(absorber.B0) + list(U)):
            return False, U
    return True, None


def build_matching_absorber(
    K: BipartiteAvailability,
    ell: int,
    alpha: float,
    seed: int,
    retries: int = DEFAULT_RETRIES,
) -> Optional[MatchingAbsorber]:
    """Randomised construction of a MatchingAbsorber, or None after retries.

    Each attempt matches the left side into a random ordering of the rights,
    drops ell matched rights to form B0, takes the leftover rights (highest
    availability first) as B1, and then verifies; rights implicated in a
    failed check are evicted from B1 and the check restarts."""
    if ell < 0 or ell > K.m_A:
        raise InvalidInput("need 0 <= ell <= m_A")
    for i, row in enumerate(K.adjacency):
        if len(row) < ell + 1:
            raise InfeasibleDegrees(
                f"left item {i} has availability {len(row)} < ell + 1 = {ell + 1}"
            )
    if K.m_A > 0:
        min_deg = min(len(row) for row in K.adjacency)
        if min_deg < alpha * K.n_B:
            # soft precondition at desk scale; verification still gates the result
            pass
    for attempt in range(retries):
        rng = rng_for(seed, "matching-absorber", attempt)
        order = list(range(K.n_B))
        rng.shuffle(order)
        pos = {b: j for j, b in enumerate(order)}
        adj = [sorted((pos[b] for b in row)) for row in K.adjacency]
        match = maximum_bipartite_matching(adj, K.n_B)
        if any(v == -1 for v in match):
            continue
        matched = [order[j] for j in match]
        dropped = set(rng.sample(matched, ell))
        B0 = tuple(sorted(b for b in matched if b not in dropped))
        pool = [b for b in range(K.n_B) if b not in B0]
        pool.sort(key=lambda b: (-K.right_degree(b), b))
        b1 = list(pool)
        while len(b1) >= ell:
            cand = MatchingAbsorber(B0, tuple(sorted(b1)), ell)
            ok, bad = absorber_holds(K, cand, rng)
            if ok:
                return cand
            evict = min(bad, key=lambda b: (K.right_degree(b), b))
            b1.remove(evict)
    return None


@dataclass(frozen=True)
class ColourAbsorber:
    """An uncoloured copy S of a template whose edges can always be rainbow
    coloured from A plus any ell-subset of Cset."""

    template: Hypergraph
    S: tuple[int, ...]  # host vertex per template vertex
    A: frozenset[int]
    Cset: frozenset[int]
    ell: int

    def host_edges(self) -> list[Edge]:
        return sorted(
            tuple(sorted(self.S[v] for v in e)) for e in self.template.edges
        )

    def host_copy(self, n: int) -> Hypergraph:
        return Hypergraph(n, self.template.k, frozenset(self.host_edges()))


def build_colour_absorber(
    C: Collection,
    F_template: Hypergraph,
    gamma_n: int,
    alpha: float,
    seed: int,
    retries: int = DEFAULT_RETRIES,
) -> ColourAbsorber:
    """Embed the template into the well-represented edges (those lying in at
    least ceil(alpha*m) colours), then delegate the colour-side flexibility
    to a matching absorber between the copy's edges and all colours."""
    if F_template.num_edges <= gamma_n:
        raise InvalidInput("template must have more than gamma_n edges")
    theta = math.ceil(alpha * C.m)
    K_host = threshold_hypergraph(C, range(C.m), theta)
    emb = find_embedding(K_host, F_template, rng=rng_for(seed, "colour-absorber-embed"))
    if emb is None:
        raise NoCopyFound("template does not embed into the threshold hypergraph")
    hosts = [
        tuple(sorted(emb[v] for v in e)) for e in F_template.sorted_edges()
    ]
    avail = BipartiteAvailability(
        len(hosts),
        C.m,
        tuple(frozenset(C.colours_of(e)) for e in hosts),
    )
    ab = build_matching_absorber(avail, gamma_n, alpha, rng_for(seed, "colour-absorber").getrandbits(63), retries)
    if ab is None:
        raise AbsorberFailed("no verified colour absorber within the retry budget")
    return ColourAbsorber(
        F_template, tuple(emb), frozenset(ab.B0), frozenset(ab.B1), gamma_n
    )


def degree_preserving_partition(
    C: Collection,
    sizes: Sequence[int],
    alpha: float,
    seed: int,
    retries: int = DEFAULT_RETRIES,
    slack: float = DEFAULT_PARTITION_SLACK,
    d: int | None = None,
    min_size: int = 1,
    within: Optional[Sequence[int]] = None,
) -> Optional[list[list[int]]]:
    """Uniform random partition into the given part sizes, accepted only if
    every d-set keeps, in every member and into every part, at least a
    proportional share of its degree.  None after retries.

    `within` restricts the universe being partitioned (default: all of V)."""
    n = C.n
    universe = sorted(range(n) if within is None else set(within))
    if sum(sizes) != len(universe):
        raise SizesMismatch(f"sizes sum to {sum(sizes)}, need {len(universe)}")
    if any(s < min_size for s in sizes):
        raise InvalidInput(f"every part must have at least {min_size} vertices")
    k = C.k
    d = k - 1 if d is None else d
    delta = min(min_degree_d(H, d) for H in C.members)
    frac = delta / n ** (k - d) + alpha / 2 - slack
    for attempt in range(retries):
        rng = rng_for(seed, "partition", attempt)
        perm = list(universe)
        rng.shuffle(perm)
        parts: list[list[int]] = []
        at = 0
        for s in sizes:
            parts.append(sorted(perm[at : at + s]))
            at += s
        if _partition_audit(C, parts, d, frac):
            return parts
    return None


def _degree_into(H: Hypergraph, S: Edge, part: set[int]) -> int:
    Sset = set(S)
    return sum(
        1 for e in H.edges if Sset <= set(e) and set(e) - Sset <= part
    )


def _partition_audit(C: Collection, parts, d: int, frac: float) -> bool:
    k = C.k
    if k == 2 and d == 1:
        for H in C.members:
            nbrs = neighbour_sets(H)
            for part in parts:
                need = frac * len(part)
                if need <= 0:
                    continue
                part_set = set(part)
                if any(len(nbrs[v] & part_set) < need for v in range(C.n)):
                    return False
        return True
    for H in C.members:
        for part in parts:
            part_set = set(part)
            need = frac * len(part) ** (k - d)
            if need <= 0:
                continue
            for S in all_d_sets(C.n, d):
                if _degree_into(H, S, part_set - set(S)) < need:
                    return False
    return True


@dataclass(frozen=True)
class RainbowCopy:
    """One embedded copy of a link body with a rainbow edge colouring."""

    vertices: tuple[int, ...]  # host vertex per body vertex
    colouring: tuple[tuple[Edge, int], ...]  # host edge -> colour

    def host_vertices(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def colours(self) -> frozenset[int]:
        return frozenset(c for _, c in self.colouring)


@dataclass
class FactorResult:
    copies: list[RainbowCopy]
    complete: bool
    stuck_block: Optional[tuple[int, ...]] = None

    def covered(self) -> frozenset[int]:
        return frozenset(v for cp in self.copies for v in cp.vertices)


def greedy_rainbow_factor(
    C: Collection,
    colours: Sequence[int],
    link: Link,
    allowed_vertices: Optional[Sequence[int]] = None,
) -> FactorResult:
    """Partition `colours` into consecutive blocks of e(body) and greedily
    place, per block, a fresh rainbow copy of the body; first fit by lowest
    host labels.  Partial result reports the block that got stuck."""
    body = link.body
    block_size = body.num_edges
    cols = sorted(colours)
    if len(cols) % block_size != 0:
        raise InvalidInput(
            f"{len(cols)} colours not divisible by {block_size} edges per copy"
        )
    allowed = set(range(C.n)) if allowed_vertices is None else set(allowed_vertices)
    used: set[int] = set()
    copies: list[RainbowCopy] = []
    for at in range(0, len(cols), block_size):
        block = tuple(cols[at : at + block_size])
        copy = _place_rainbow_copy(C, body, block, allowed - used)
        if copy is None:
            return FactorResult(copies, False, block)
        copies.append(copy)
        used |= set(copy.vertices)
    return FactorResult(copies, True, None)


def _place_rainbow_copy(
    C: Collection, body: Hypergraph, block: tuple[int, ...], free: set[int]
) -> Optional[RainbowCopy]:
    """Lowest-label backtracking embedding of the body into free vertices
    such that its edges are rainbow colourable within the block."""
    order = sorted(free)
    body_edges = body.sorted_edges()
    by_last = [[] for _ in range(body.n)]
    for e in body_edges:
        by_last[max(e)].append(e)
    assignment = [-1] * body.n
    in_use: set[int] = set()
    union = C.union_edges()

    def colourable(hosts: list[Edge]) -> Optional[list[int]]:
        adj = [
            [j for j, c in enumerate(block) if h in C.members[c].edges]
            for h in hosts
        ]
        match = maximum_bipartite_matching(adj, len(block))
        if any(v == -1 for v in match):
            return None
        return [block[j] for j in match]

    def dfs(pos: int) -> bool:
        if pos == body.n:
            return True
        for v in order:
            if v in in_use:
                continue
            assignment[pos] = v
            ok = True
            for e in by_last[pos]:
                host = tuple(sorted(assignment[u] for u in e))
                if host not in union:
                    ok = False
                    break
            if ok:
                # partial Hall check over the edges realised so far
                done = [
                    tuple(sorted(assignment[u] for u in e))
                    for p in range(pos + 1)
                    for e in by_last[p]
                ]
                if colourable(done) is not None:
                    in_use.add(v)
                    if dfs(pos + 1):
                        return True
                    in_use.remove(v)
            assignment[pos] = -1
        return False

    if not dfs(0):
        return None
    hosts = [tuple(sorted(assignment[u] for u in e)) for e in body_edges]
    cols = colourable(hosts)
    pairing = tuple(zip(hosts, cols))
    return RainbowCopy(tuple(assignment), pairing)


@dataclass(frozen=True)
class RainbowChain:
    chain: EmbeddedChain
    colouring: tuple[tuple[Edge, int], ...]

    def colours(self) -> frozenset[int]:
        return frozenset(c for _, c in self.colouring)


@dataclass
class TilingResult:
    chains: list[RainbowChain]
    uncovered: frozenset[int]
    unused_colours: frozenset[int]


def rainbow_tiling(
    C: Collection,
    link: Link,
    T: int,
    omega: float,
    seed: int,
    alpha: float = 0.2,
    eta: float = 0.05,
    retries: int = DEFAULT_RETRIES,
    within: Optional[Sequence[int]] = None,
    pool: Optional[Sequence[int]] = None,
    slack: float = DEFAULT_PARTITION_SLACK,
) -> TilingResult:
    """Vertex-disjoint rainbow chains covering most of the vertex universe.

    The universe (all of V, or `within`) is split into T equal parts plus a
    slack part of about omega*|universe|/2 vertices that is deliberately left
    uncovered; each part gets a near-spanning chain found in its threshold
    hypergraph and coloured by an exact matching against still-unused pool
    colours of multiplicity >= eta*m."""
    n = C.n
    universe = sorted(range(n) if within is None else set(within))
    pool_cols = set(range(C.m) if pool is None else pool)
    if T < 0:
        raise InvalidInput("T must be nonnegative")
    if T == 0 or not universe:
        return TilingResult([], frozenset(universe), frozenset(pool_cols))
    part_size = math.floor((1 - omega / 2) * len(universe) / T)
    if part_size < link.m:
        raise InvalidInput("parts too small to hold a single link body")
    sizes = [part_size] * T + [len(universe) - T * part_size]
    if sizes[-1] == 0:
        sizes.pop()
        slack_part_present = False
    else:
        slack_part_present = True
    parts = degree_preserving_partition(
        C,
        sizes,
        alpha,
        rng_for(seed, "tiling-partition").getrandbits(63),
        retries,
        slack=slack,
        within=universe,
    )
    if parts is None:
        raise PartitionFailed("no acceptable tiling partition within retries")
    work_parts = parts[:T] if slack_part_present else parts
    unused = set(pool_cols)
    theta = max(1, math.ceil(eta * len(pool_cols)))
    chains: list[RainbowChain] = []
    covered: set[int] = set()
    for idx, part in enumerate(work_parts):
        rng = rng_for(seed, "tiling-part", idx)
        placed = _chain_in_part(C, link, part, unused, theta, rng)
        if placed is None:
            continue
        chains.append(placed)
        covered |= set(placed.chain.vertices)
        unused -= placed.colours()
    uncovered = frozenset(set(universe) - covered)
    return TilingResult(chains, uncovered, frozenset(unused))


def _chain_in_part(
    C: Collection,
    link: Link,
    part: list[int],
    unused: set[int],
    theta: int,
    rng,
) -> Optional[RainbowChain]:
    """Longest findable uncoloured chain in the part's threshold hypergraph,
    then an exact rainbow colouring from the unused colours."""
    K = threshold_hypergraph(C, sorted(unused), theta)
    sub = induced(K, part)
    labels = sorted(part)
    step = link.step
    t_max = (len(part) - link.ell) // step
    for t in range(t_max, 0, -1):
        template = build_chain_template(link, t)
        emb = find_embedding(sub, template, rng=rng)
        if emb is None:
            continue
        vertices = tuple(labels[v] for v in emb)
        chain = EmbeddedChain(link, t, vertices)
        target = Hypergraph(C.n, C.k, frozenset(chain.host_edges()))
        cert = rainbow_colouring(C, target, sorted(unused))
        if cert is None:
            continue
        return RainbowChain(chain, tuple(sorted(cert.mapping().items())))
    return None
