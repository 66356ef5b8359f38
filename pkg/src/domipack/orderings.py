"""Elimination orders: structural certificates for the greedy solver.

A strong elimination order removes, at every step, a vertex whose remaining
closed neighborhood is a clique and whose remaining neighbors have closed
neighborhoods nested along the order. Graphs admitting one (strongly chordal
graphs: trees, interval graphs, ...) are exactly where the greedy packing
solver is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import ParseError
from .graph import Graph


class OrderKind(Enum):
    STRONG_ELIMINATION = "strong"
    MAX_NEIGHBORHOOD = "maxnbr"


@dataclass(frozen=True)
class EliminationOrder:
    order: tuple[int, ...]
    kind: OrderKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))


def _positions(g: Graph, order) -> tuple[tuple[int, ...], list[int]]:
    seq = tuple(order.order if isinstance(order, EliminationOrder) else order)
    if sorted(seq) != list(range(g.n)):
        raise ValueError(f"order is not a permutation of 0..{g.n - 1}")
    pos = [0] * g.n
    for i, v in enumerate(seq):
        pos[v] = i
    return seq, pos


def _nested(g: Graph, pos: Sequence[int], stage: int, a: int, b: int) -> bool:
    """Closed neighborhood of a within the suffix graph at `stage` is
    contained in b's."""
    if a == b:
        return True
    nb = g.neighbors(b)
    if a not in nb:
        return False
    for w in g.neighbors(a):
        if pos[w] >= stage and w != b and w not in nb:
            return False
    return True


def strong_elimination_violation(g: Graph, order) -> tuple[int, int, int] | None:
    """First triple of order positions (i, j, k) breaking the strong
    elimination conditions, or None when the order is valid.

    Checks only consecutive neighbors along the order at each stage
    (nestedness is transitive); on failure it rescans that stage pairwise to
    report the lexicographically first offending triple.
    """
    seq, pos = _positions(g, order)
    for i in range(g.n):
        vi = seq[i]
        members = [w for w in g.neighbors(vi) if pos[w] >= i]
        members.append(vi)
        members.sort(key=lambda w: pos[w])
        if all(
            _nested(g, pos, i, members[t], members[t + 1])
            for t in range(len(members) - 1)
        ):
            continue
        member_pos = sorted(pos[w] for w in members)
        for j in member_pos:
            for k in member_pos:
                if j <= k and not _nested(g, pos, i, seq[j], seq[k]):
                    return (i, j, k)
    return None


def verify_strong_elimination(g: Graph, order) -> bool:
    return strong_elimination_violation(g, order) is None


def max_neighborhood_violation(g: Graph, order) -> int | None:
    """First order position whose vertex lacks a maximum neighbor in the
    suffix graph, or None when the order is valid."""
    seq, pos = _positions(g, order)
    for i in range(g.n):
        vi = seq[i]
        members = [w for w in g.neighbors(vi) if pos[w] >= i]
        members.append(vi)
        if not any(
            all(_nested(g, pos, i, w, u) for w in members) for u in members
        ):
            return i
    return None


def verify_max_neighborhood(g: Graph, order) -> bool:
    return max_neighborhood_violation(g, order) is None


# search ------------------------------------------------------------------------

_ADVISORY_NODE_BUDGET = 500_000


def _suffix_closed(g: Graph, remaining: set[int], v: int) -> frozenset[int]:
    return frozenset(w for w in g.neighbors(v) if w in remaining) | {v}


def find_strong_elimination(
    g: Graph, search_cap: int = 10
) -> EliminationOrder | None:
    """Search for a strong elimination order by backtracking.

    At each stage the next vertex must have a remaining closed neighborhood
    that is totally ordered by inclusion with its own neighborhood at the
    bottom; strict inclusions among its neighbors fix their relative
    elimination order, which prunes later choices. Exhaustive (an exact
    not-found) for n <= search_cap; larger graphs get the same search under a
    node budget, so not-found is only advisory there.
    """
    n = g.n
    budget = None if n <= search_cap else _ADVISORY_NODE_BUDGET
    remaining = set(range(n))
    preds: dict[int, set[int]] = {v: set() for v in range(n)}
    order: list[int] = []
    nodes = 0

    def candidates() -> list[tuple[int, list[tuple[int, int]]]]:
        found = []
        for v in sorted(remaining):
            if any(p in remaining for p in preds[v]):
                continue
            members = sorted(
                (w for w in g.neighbors(v) if w in remaining), key=lambda w: w
            )
            closed = {w: _suffix_closed(g, remaining, w) for w in members}
            closed[v] = _suffix_closed(g, remaining, v)
            chain = sorted(members + [v], key=lambda w: (len(closed[w]), w))
            if any(
                not closed[chain[t]] <= closed[chain[t + 1]]
                for t in range(len(chain) - 1)
            ):
                continue
            if any(not closed[v] <= closed[w] for w in members):
                continue
            new_constraints = []
            for a in members:
                for b in members:
                    if a < b:
                        ca, cb = closed[a], closed[b]
                        if ca < cb:
                            new_constraints.append((a, b))
                        elif cb < ca:
                            new_constraints.append((b, a))
            found.append((v, new_constraints))
        return found

    def search() -> bool:
        nonlocal nodes
        if not remaining:
            return True
        for v, constraints in candidates():
            nodes += 1
            if budget is not None and nodes > budget:
                return False
            added = []
            for a, b in constraints:
                if a not in preds[b]:
                    preds[b].add(a)
                    added.append((a, b))
            remaining.discard(v)
            order.append(v)
            if search():
                return True
            order.pop()
            remaining.add(v)
            for a, b in added:
                preds[b].discard(a)
        return False

    if search():
        result = EliminationOrder(tuple(order), OrderKind.STRONG_ELIMINATION)
        assert verify_strong_elimination(g, result)
        return result
    return None


def find_max_neighborhood(
    g: Graph, search_cap: int = 10
) -> EliminationOrder | None:
    """Backtracking search for an order of maximum neighborhoods, memoized on
    the remaining vertex set. Exact for n <= search_cap, advisory beyond."""
    n = g.n
    budget = None if n <= search_cap else _ADVISORY_NODE_BUDGET
    dead: set[frozenset[int]] = set()
    nodes = 0

    def has_max_neighbor(remaining: set[int], v: int) -> bool:
        members = [w for w in g.neighbors(v) if w in remaining]
        members.append(v)
        closed = {w: _suffix_closed(g, remaining, w) for w in members}
        return any(
            all(closed[w] <= closed[u] for w in members) for u in members
        )

    def search(remaining: set[int], acc: list[int]) -> bool:
        nonlocal nodes
        if not remaining:
            return True
        key = frozenset(remaining)
        if key in dead:
            return False
        for v in sorted(remaining):
            nodes += 1
            if budget is not None and nodes > budget:
                return False
            if not has_max_neighbor(remaining, v):
                continue
            remaining.discard(v)
            acc.append(v)
            if search(remaining, acc):
                return True
            acc.pop()
            remaining.add(v)
        dead.add(key)
        return False

    acc: list[int] = []
    if search(set(range(n)), acc):
        result = EliminationOrder(tuple(acc), OrderKind.MAX_NEIGHBORHOOD)
        assert verify_max_neighborhood(g, result)
        return result
    return None


# text format --------------------------------------------------------------------


def parse_order(text: str) -> tuple[int, ...]:
    """Read a one-line ``order 3 1 2 ...`` file (1-based) into 0-based ids."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "order":
            raise ParseError(f"expected an 'order' line, got {line!r}", line_no)
        try:
            vertices = [int(p) for p in parts[1:]]
        except ValueError:
            raise ParseError("non-integer vertex in order line", line_no)
        if any(v < 1 for v in vertices):
            raise ParseError("order vertices are 1-based", line_no)
        return tuple(v - 1 for v in vertices)
    raise ParseError("missing 'order' line")


def serialize_order(order: EliminationOrder | Sequence[int]) -> str:
    seq = order.order if isinstance(order, EliminationOrder) else tuple(order)
    return "order " + " ".join(str(v + 1) for v in seq) + "\n"
