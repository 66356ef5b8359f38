"""Exact solvers.

``greedy_packing`` runs the linear-time sweep along a strong elimination
order (exact on strongly chordal graphs); domination instances are solved by
complementing the greedy answer of the dual packing instance. Everything else
falls back to ``brute_force``, the enumeration oracle that also anchors the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceededError, InfeasibleInstanceError, InvalidOrderError
from .instances import (
    Assignment,
    GenInstance,
    LabelledInstance,
    Sense,
    closed_neighborhood_sums,
    first_violation,
    normalize,
)
from .orderings import (
    EliminationOrder,
    OrderKind,
    find_strong_elimination,
    strong_elimination_violation,
)

DEFAULT_BUDGET = 10_000_000


@dataclass
class GreedyStats:
    """Work counter: one touch per closed-neighborhood member visited while
    computing a step's minimum, so a full run costs n + 2m touches."""

    touches: int = 0


@dataclass(frozen=True)
class SolveResult:
    assignment: Assignment
    value: int
    method: str  # "greedy" or "oracle"


def _order_sequence(inst: GenInstance, order) -> tuple[int, ...]:
    seq = tuple(order.order if isinstance(order, EliminationOrder) else order)
    if sorted(seq) != list(range(inst.n)):
        raise ValueError(f"order is not a permutation of 0..{inst.n - 1}")
    return seq


def greedy_packing(
    inst: GenInstance,
    order,
    *,
    verify: bool = True,
    stats: GreedyStats | None = None,
) -> Assignment:
    """Maximum packing along a strong elimination order.

    Each vertex, in order, takes the largest value its cap and the residual
    quotas of its closed neighborhood allow; neighborhood sums are maintained
    incrementally, so the sweep costs O(n + m). Exact whenever the order is a
    strong elimination order of the instance's graph.
    """
    if inst.sense is not Sense.PACK:
        raise ValueError("greedy_packing needs a packing instance")
    seq = _order_sequence(inst, order)
    if verify:
        violation = strong_elimination_violation(inst.graph, seq)
        if violation is not None:
            raise InvalidOrderError(
                f"order is not a strong elimination order: violation at "
                f"positions (i, j, k) = {violation}"
            )
    adj = inst.graph._adj
    quota = inst.quota
    cap = inst.cap
    load = [0] * inst.n
    values = [0] * inst.n
    touches = 0
    for v in seq:
        nbrs = adj[v]
        take = quota[v] - load[v]
        for w in nbrs:
            slack = quota[w] - load[w]
            if slack < take:
                take = slack
        touches += len(nbrs) + 1
        if take > cap[v]:
            take = cap[v]
        if take > 0:
            values[v] = take
            load[v] += take
            for w in nbrs:
                load[w] += take
    if stats is not None:
        stats.touches += touches
    return Assignment(tuple(values))


def solve_domination_strongly_chordal(
    inst: GenInstance, order, *, verify: bool = True
) -> Assignment:
    """Minimum domination via duality: solve the dual packing instance
    greedily and complement against the caps."""
    from .transforms import dualize

    if inst.sense is not Sense.DOMINATE:
        raise ValueError("expected a dominate instance")
    cap_sums = closed_neighborhood_sums(inst.graph, inst.cap)
    for v in range(inst.n):
        if inst.quota[v] > cap_sums[v]:
            raise InfeasibleInstanceError(v, inst.quota[v], cap_sums[v])
    reduction = dualize(inst)
    dual = normalize(reduction.output)
    packed = greedy_packing(dual, order, verify=verify)
    lifted = reduction.lift_assignment(packed)
    violation = first_violation(inst, lifted)
    if violation is not None:  # the duality proof forbids this
        raise AssertionError(f"duality lift produced an infeasible assignment: {violation}")
    return lifted


def brute_force(inst: GenInstance, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Exact optimum by enumeration over all capped assignments.

    The instance is normalized first (which both shrinks the space and
    surfaces infeasible dominate instances); the space Prod(cap(v) + 1) must
    stay within ``budget`` or the call refuses outright. Ties are broken by
    the lexicographically smallest assignment.
    """
    norm = normalize(inst)
    space = 1
    for c in norm.cap:
        space *= c + 1
    if space > budget:
        raise BudgetExceededError(space, budget)
    n = norm.n
    quota = norm.quota
    cap = norm.cap
    closed = [(v,) + norm.graph.neighbors(v) for v in range(n)]
    dominate = norm.sense is Sense.DOMINATE
    values = [0] * n
    load = [0] * n
    suffix_caps = [0] * (n + 1)
    for v in range(n - 1, -1, -1):
        suffix_caps[v] = suffix_caps[v + 1] + cap[v]
    potential = closed_neighborhood_sums(norm.graph, cap) if dominate else None
    best_values: tuple[int, ...] | None = None
    best_weight: int | None = None

    def descend(i: int, weight: int) -> None:
        nonlocal best_values, best_weight
        if i == n:
            # pruning kept every partial constraint satisfiable, so this
            # leaf is feasible; strict comparisons keep the first (lex-min).
            if best_weight is None or (
                weight < best_weight if dominate else weight > best_weight
            ):
                best_weight = weight
                best_values = tuple(values)
            return
        if best_weight is not None:
            if dominate and weight >= best_weight:
                return
            if not dominate and weight + suffix_caps[i] <= best_weight:
                return
        for val in range(cap[i] + 1):
            if dominate and best_weight is not None and weight + val >= best_weight:
                break
            values[i] = val
            feasible = True
            if dominate:
                drop = cap[i] - val
                for w in closed[i]:
                    potential[w] -= drop
                    if potential[w] < quota[w]:
                        feasible = False
                if feasible:
                    descend(i + 1, weight + val)
                for w in closed[i]:
                    potential[w] += drop
            else:
                for w in closed[i]:
                    load[w] += val
                    if load[w] > quota[w]:
                        feasible = False
                if feasible:
                    descend(i + 1, weight + val)
                for w in closed[i]:
                    load[w] -= val
                if not feasible:
                    values[i] = 0
                    break  # larger values only overload further
        values[i] = 0

    descend(0, 0)
    assert best_values is not None and best_weight is not None
    return SolveResult(Assignment(best_values), best_weight, "oracle")


def brute_force_labelled(
    L: LabelledInstance, sense: Sense, budget: int = DEFAULT_BUDGET
) -> tuple[tuple[int, ...], int] | None:
    """Definition-literal oracle for labelled instances: enumerate every
    function into the label range that honors the fixed labels, and keep the
    best feasible one (None when nothing is feasible). Values may be negative,
    so the result is a raw tuple rather than an Assignment."""
    g = L.graph
    domains = [
        (t,) if t is not None else tuple(L.label_values()) for t in L.fixed
    ]
    space = 1
    for d in domains:
        space *= len(d)
    if space > budget:
        raise BudgetExceededError(space, budget)
    best: tuple[int, tuple[int, ...]] | None = None
    values = [0] * g.n

    def descend(i: int) -> None:
        nonlocal best
        if i == g.n:
            sums = closed_neighborhood_sums(g, values)
            for v in range(g.n):
                if sense is Sense.DOMINATE and sums[v] < L.quota[v]:
                    return
                if sense is Sense.PACK and sums[v] > L.quota[v]:
                    return
            weight = sum(values)
            if best is None or (
                weight < best[0] if sense is Sense.DOMINATE else weight > best[0]
            ):
                best = (weight, tuple(values))
            return
        for val in domains[i]:
            values[i] = val
            descend(i + 1)

    descend(0)
    if best is None:
        return None
    return best[1], best[0]


def solve(
    inst: GenInstance,
    order=None,
    *,
    budget: int = DEFAULT_BUDGET,
    search_cap: int = 10,
    prefer_oracle: bool = False,
) -> SolveResult:
    """Dispatch: greedy along a supplied or discovered strong elimination
    order when possible, otherwise the enumeration oracle within budget."""
    norm = normalize(inst)
    seq = None
    if not prefer_oracle:
        if order is not None:
            seq = _order_sequence(norm, order)
            violation = strong_elimination_violation(norm.graph, seq)
            if violation is not None:
                raise InvalidOrderError(
                    f"supplied order fails verification at (i, j, k) = {violation}"
                )
        else:
            found = find_strong_elimination(norm.graph, search_cap=max(search_cap, 1))
            if found is not None:
                seq = found.order
    if seq is not None:
        if norm.sense is Sense.PACK:
            assignment = greedy_packing(norm, seq, verify=False)
        else:
            assignment = solve_domination_strongly_chordal(norm, seq, verify=False)
        return SolveResult(assignment, assignment.weight, "greedy")
    return brute_force(norm, budget=budget)
