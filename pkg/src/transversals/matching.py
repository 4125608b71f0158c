"""Exact maximum bipartite matching, batch and incremental.

Augmenting-path search is enough at the sizes this package handles; the
incremental variant keeps an undo trail so the backtracking solvers can
retract left vertices in LIFO order.
"""

from __future__ import annotations

from typing import Sequence


def maximum_bipartite_matching(
    adj: Sequence[Sequence[int]], n_right: int
) -> list[int]:
    """Maximum matching from left vertices to 0..n_right-1.

    `adj[u]` lists right neighbours of left vertex u.  Returns match_left
    with -1 for unmatched lefts.  Deterministic: lefts processed in order,
    neighbours tried in the given order.
    """
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or augment(match_right[v], seen):
                    match_right[v] = u
                    match_left[u] = v
                    return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    return match_left


def is_perfectly_matchable(adj: Sequence[Sequence[int]], n_right: int) -> bool:
    """True iff a matching saturating every left vertex exists."""
    match = maximum_bipartite_matching(adj, n_right)
    return all(v != -1 for v in match)


class IncrementalMatching:
    """Matching that grows one left vertex at a time and supports LIFO undo.

    Right vertices are arbitrary hashable keys (colour indices here).
    `push` either augments and returns an undo token, or leaves the state
    untouched and returns None.  A failed push is definitive: adding more
    left vertices can never make the current set matchable (Hall).
    """

    def __init__(self) -> None:
        self.match_right: dict[object, int] = {}
        self.match_left: list[object] = []
        self.avail: list[tuple[object, ...]] = []

    def __len__(self) -> int:
        return len(self.match_left)

    def push(self, avail: Sequence[object]) -> list[tuple[object, object]] | None:
        u = len(self.match_left)
        self.avail.append(tuple(avail))
        self.match_left.append(None)
        trail: list[tuple[object, object]] = []
        if self._augment(u, set(), trail):
            return trail
        # revert any partial rewiring (augment only mutates on success paths,
        # so trail is empty here) and drop the left vertex
        self.avail.pop()
        self.match_left.pop()
        return None

    def _augment(self, u: int, seen: set, trail: list) -> bool:
        for v in self.avail[u]:
            if v in seen:
                continue
            seen.add(v)
            holder = self.match_right.get(v)
            if holder is None or self._augment(holder, seen, trail):
                trail.append((v, holder))
                self.match_right[v] = u
                self.match_left[u] = v
                return True
        return False

    def pop(self, trail: list[tuple[object, object]]) -> None:
        """Undo the most recent successful push (LIFO discipline)."""
        for v, holder in reversed(trail):
            if holder is None:
                del self.match_right[v]
            else:
                self.match_right[v] = holder
                self.match_left[holder] = v
        self.avail.pop()
        self.match_left.pop()

    def assignment(self) -> list[object]:
        return list(self.match_left)
