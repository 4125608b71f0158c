"""Exact backtracking oracles for transversal copies at desk scale.

Outcomes are three-valued: a verified certificate, a definitive "none"
(the search space was exhausted), or "exhausted" when the node/time budget
ran out first.  Colours are never branched on; a maintained incremental
matching prunes exactly on Hall feasibility.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .collection import Collection, TransversalCertificate, verify_certificate
from .errors import ColourCountMismatch, InvalidInput
from .hypergraph import Edge, Hypergraph
from .links import Link, cycle_counts, cycle_on
from .matching import IncrementalMatching
from .rng import rng_for

FOUND = "found"
NONE = "none"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 10**7
    time_limit: float = float("inf")
    deterministic: bool = True

    def __post_init__(self) -> None:
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise InvalidInput("budget limits must be positive")


@dataclass
class SearchResult:
    status: str
    certificate: Optional[TransversalCertificate] = None
    nodes: int = 0
    elapsed: float = 0.0

    def __bool__(self) -> bool:
        return self.status == FOUND


class _BudgetExceeded(Exception):
    pass


class _Searcher:
    """Shared backtracking core: fill positions with host vertices, complete
    structure edges as their last position is assigned, and keep the edge ->
    colour matching feasible at every step."""

    def __init__(self, C: Collection, budget: SearchBudget):
        self.C = C
        self.budget = budget
        self.nodes = 0
        self.start_time = time.monotonic()
        self.avail: dict[Edge, list[int]] = {}
        for i, H in enumerate(C.members):
            for e in H.edges:
                self.avail.setdefault(e, []).append(i)
        self.matcher = IncrementalMatching()
        self.edge_stack: list[Edge] = []

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise _BudgetExceeded
        if self.nodes % 4096 == 0:
            if time.monotonic() - self.start_time > self.budget.time_limit:
                raise _BudgetExceeded

    def complete_edges(self, hosts: list[Edge]) -> list | None:
        """Push completed host edges into the matcher; None means infeasible
        (nothing is left pushed in that case)."""
        trails = []
        for host in hosts:
            cols = self.avail.get(host)
            trail = self.matcher.push(cols) if cols else None
            if trail is None:
                self.uncomplete(trails)
                return None
            trails.append(trail)
            self.edge_stack.append(host)
        return trails

    def uncomplete(self, trails: list) -> None:
        for t in reversed(trails):
            self.matcher.pop(t)
        del self.edge_stack[len(self.edge_stack) - len(trails):]

    def certificate(self, n: int, k: int) -> TransversalCertificate:
        mapping = {
            e: colour
            for e, colour in zip(self.edge_stack, self.matcher.assignment())
        }
        target = Hypergraph(n, k, frozenset(self.edge_stack))
        return TransversalCertificate.from_mapping(target, mapping)

    def elapsed(self) -> float:
        return time.monotonic() - self.start_time


def _cycle_search(
    C: Collection,
    link: Link,
    by_last: list[list[tuple[int, ...]]],
    searcher: _Searcher,
    node_cap: int,
    order: str = "asc",
    rng=None,
) -> Optional[bool]:
    """One depth-first sweep over the cycle search space.

    Returns True (found; searcher holds the assignment), False (space
    exhausted: definitive none), or None (node_cap hit first).  Candidate
    order per position: "asc" (exhaustive default), "flex" (most colour
    options on the completed edges first), or "random" (shuffled) — the
    latter two are find-fast heuristics for the restart phase."""
    n = C.n
    step = link.step
    orient = link.k == 2 and link.m == 2 and link.ell == 1
    assignment = [-1] * n
    used = [False] * n
    cap = searcher.nodes + node_cap

    def flex_key(pos: int, v: int):
        total = 0
        for e in by_last[pos]:
            if max(e) == pos:
                host = tuple(
                    sorted(v if i == pos else assignment[i] for i in e)
                )
                total += len(searcher.avail.get(host, ()))
        return (-total, rng.random() if rng is not None else 0, v)

    def dfs(pos: int) -> bool:
        if pos == n:
            return True
        if pos == 0 and step == 1:
            # rotational symmetry: with every position an anchor, vertex 0
            # can be pinned to position 0
            cands = [0]
        else:
            cands = [v for v in range(n) if not used[v]]
            if order == "flex" and pos > 0:
                cands.sort(key=lambda v: flex_key(pos, v))
            elif order == "random":
                rng.shuffle(cands)
        for v in cands:
            if step > 1 and pos % step == 0 and pos > 0 and v < assignment[0]:
                continue  # rotation by `step` could move a smaller anchor to position 0
            if orient and pos == n - 1 and v > assignment[1]:
                continue  # reflection symmetry of the 2-uniform cycle
            if searcher.nodes >= cap:
                raise _BudgetExceeded
            searcher.tick()
            assignment[pos] = v
            used[v] = True
            hosts = [
                tuple(sorted(assignment[i] for i in e)) for e in by_last[pos]
            ]
            trails = searcher.complete_edges(hosts)
            if trails is not None:
                if dfs(pos + 1):
                    return True
                searcher.uncomplete(trails)
            used[v] = False
            assignment[pos] = -1
        return False

    try:
        return dfs(0)
    except _BudgetExceeded:
        if searcher.nodes > searcher.budget.node_limit:
            raise
        if time.monotonic() - searcher.start_time > searcher.budget.time_limit:
            raise
        # cap hit mid-descent: drop the partially pushed matching state
        searcher.matcher = IncrementalMatching()
        searcher.edge_stack = []
        return None


def find_transversal_cycle(
    C: Collection, link: Link, budget: SearchBudget = SearchBudget()
) -> SearchResult:
    """Search for a transversal Hamilton A-cycle in C.

    Runs a few flexibility-ordered restarts with growing node caps (these
    can only produce a verified certificate or a definitive exhaustion of
    the space), then sweeps the space in plain ascending order with the
    remaining budget.  found/none are definitive; exhausted means the
    budget ran out first."""
    n = C.n
    required = cycle_counts(link, n)
    if C.m != required:
        raise ColourCountMismatch(
            f"collection has {C.m} members; an A-cycle on {n} vertices has {required} edges"
        )
    canonical = cycle_on(link, n)
    by_last: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for e in canonical.edges:
        by_last[max(e)].append(e)
    searcher = _Searcher(C, budget)
    probe_budget = budget.node_limit // 2
    rng = rng_for(0x5EED, "cycle-restarts") if budget.deterministic else rng_for(
        time.monotonic_ns(), "cycle-restarts"
    )
    outcome: Optional[bool] = None
    try:
        cap = 2000
        restart = 0
        while searcher.nodes + cap <= probe_budget:
            outcome = _cycle_search(
                C,
                link,
                by_last,
                searcher,
                cap,
                order="flex" if restart % 2 == 0 else "random",
                rng=rng,
            )
            if outcome is not None:
                break
            restart += 1
            if restart % 2 == 0:
                cap *= 2
        if outcome is None:
            outcome = _cycle_search(
                C,
                link,
                by_last,
                searcher,
                budget.node_limit - searcher.nodes,
                order="asc",
            )
    except _BudgetExceeded:
        return SearchResult(EXHAUSTED, None, searcher.nodes, searcher.elapsed())
    if outcome is None:
        return SearchResult(EXHAUSTED, None, searcher.nodes, searcher.elapsed())
    if outcome:
        cert = searcher.certificate(n, C.k)
        check = verify_certificate(C, cert, link, n)
        if not check.ok:  # soundness guard; must not trigger
            raise AssertionError(f"solver produced an invalid certificate: {check.reason}")
        return SearchResult(FOUND, cert, searcher.nodes, searcher.elapsed())
    return SearchResult(NONE, None, searcher.nodes, searcher.elapsed())


def find_transversal_subgraph(
    C: Collection, F: Hypergraph, budget: SearchBudget = SearchBudget()
) -> SearchResult:
    """Exhaustive search for a transversal copy of the fixed pattern F."""
    if C.m != F.num_edges:
        raise ColourCountMismatch(
            f"collection has {C.m} members; F has {F.num_edges} edges"
        )
    if F.k != C.k:
        raise InvalidInput("pattern uniformity differs from the collection")
    order = _pattern_order(F)
    rank = {v: i for i, v in enumerate(order)}
    by_last: list[list[Edge]] = [[] for _ in range(F.n)]
    for e in F.edges:
        by_last[max(rank[v] for v in e)].append(e)
    searcher = _Searcher(C, budget)
    n = C.n
    assignment = {v: -1 for v in range(F.n)}
    used = [False] * n
    found: list[TransversalCertificate] = []

    def dfs(pos: int) -> bool:
        if pos == F.n:
            found.append(searcher.certificate(n, C.k))
            return True
        pv = order[pos]
        for v in range(n):
            if used[v]:
                continue
            searcher.tick()
            assignment[pv] = v
            used[v] = True
            hosts = [
                tuple(sorted(assignment[u] for u in e)) for e in by_last[pos]
            ]
            trails = searcher.complete_edges(hosts)
            if trails is not None:
                if dfs(pos + 1):
                    return True
                searcher.uncomplete(trails)
            used[v] = False
            assignment[pv] = -1
        return False

    try:
        hit = dfs(0)
    except _BudgetExceeded:
        return SearchResult(EXHAUSTED, None, searcher.nodes, searcher.elapsed())
    if hit:
        cert = found[0]
        check = verify_certificate(C, cert)
        if not check.ok:
            raise AssertionError(f"solver produced an invalid certificate: {check.reason}")
        return SearchResult(FOUND, cert, searcher.nodes, searcher.elapsed())
    return SearchResult(NONE, None, searcher.nodes, searcher.elapsed())


def _pattern_order(F: Hypergraph) -> list[int]:
    """Static branch order: highest-degree pattern vertices first, then by a
    connectivity-greedy sweep so edges complete early."""
    deg = {v: 0 for v in range(F.n)}
    for e in F.edges:
        for v in e:
            deg[v] += 1
    remaining = set(range(F.n))
    order: list[int] = []
    placed: set[int] = set()
    while remaining:
        scored = []
        for v in remaining:
            attached = sum(1 for e in F.edges if v in e and all(u in placed or u == v for u in e))
            scored.append((-attached, -deg[v], v))
        _, _, best = min(scored)
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def find_embedding(
    host: Hypergraph,
    pattern: Hypergraph,
    rng=None,
    node_limit: int = 10**6,
) -> Optional[list[int]]:
    """Uncoloured injective embedding of `pattern` into `host`; returns the
    host vertex per pattern vertex, or None (definitive at this node limit
    only if the limit is not reached; callers at desk scale keep it high)."""
    if pattern.k != host.k:
        raise InvalidInput("uniformity mismatch")
    order = _pattern_order(pattern)
    rank = {v: i for i, v in enumerate(order)}
    by_last: list[list[Edge]] = [[] for _ in range(pattern.n)]
    for e in pattern.edges:
        by_last[max(rank[v] for v in e)].append(e)
    base = list(range(host.n))
    if rng is not None:
        rng.shuffle(base)
    assignment = {v: -1 for v in range(pattern.n)}
    used = [False] * host.n
    nodes = 0

    def dfs(pos: int) -> bool:
        nonlocal nodes
        if pos == pattern.n:
            return True
        pv = order[pos]
        for v in base:
            if used[v]:
                continue
            nodes += 1
            if nodes > node_limit:
                raise _BudgetExceeded
            ok = True
            assignment[pv] = v
            for e in by_last[pos]:
                hostedge = tuple(sorted(assignment[u] for u in e))
                if hostedge not in host.edges:
                    ok = False
                    break
            if ok:
                used[v] = True
                if dfs(pos + 1):
                    return True
                used[v] = False
            assignment[pv] = -1
        return False

    try:
        if dfs(0):
            return [assignment[v] for v in range(pattern.n)]
    except _BudgetExceeded:
        return None
    return None
