"""Value-preserving reductions between instances.

Each public transform returns a :class:`Reduction`: the rewritten instance, a
:class:`ValueMap` tying the two optima together exactly, a vertex
correspondence, and a declarative lift that turns an optimal assignment of the
output back into one for the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotNormalizedError, UnsupportedFormError
from .graph import Graph, VertexMap
from .instances import (
    Assignment,
    GenInstance,
    LabelledInstance,
    Sense,
    ValueMap,
    closed_neighborhood_sums,
    is_normalized,
)


@dataclass(frozen=True)
class Lift:
    """Declarative rule mapping output assignments back to input assignments.

    kind:
      - "project": keep the first ``keep`` entries.
      - "complement": input value = caps[v] - output value.
      - "clique_sum": input value = sum of the output entries in groups[v].
      - "pendant_canonical": push one unit onto each zero-valued pendant from
        its anchor's neighborhood (the exchange that makes pendants saturated),
        then keep the first ``keep`` entries.
    """

    kind: str
    keep: int | None = None
    caps: tuple[int, ...] | None = None
    groups: tuple[tuple[int, ...], ...] | None = None
    anchors: tuple[tuple[int, int], ...] = ()  # (pendant, anchor) pairs

    def describe(self) -> str:
        if self.kind == "project":
            return f"project to first {self.keep} vertices"
        if self.kind == "complement":
            return "complement against caps: g(v) = u(v) - f(v)"
        if self.kind == "clique_sum":
            return "sum output values over each vertex's clique"
        if self.kind == "pendant_canonical":
            return "saturate pendants by exchange, then project"
        return self.kind

    def apply(self, output: GenInstance, a: Assignment) -> Assignment:
        values = list(a.values)
        if self.kind == "project":
            return Assignment(tuple(values[: self.keep]))
        if self.kind == "complement":
            assert self.caps is not None
            return Assignment(tuple(c - x for c, x in zip(self.caps, values)))
        if self.kind == "clique_sum":
            assert self.groups is not None
            return Assignment(tuple(sum(values[i] for i in grp) for grp in self.groups))
        if self.kind == "pendant_canonical":
            g = output.graph
            pendants = {p for p, _ in self.anchors}
            # Swap a unit in from a non-pendant neighbor of the anchor when
            # one is available (weight-preserving); otherwise the quota slack
            # left by the missing unit makes a direct bump feasible.
            for pendant, anchor in self.anchors:
                if values[pendant] > 0:
                    continue
                donor = next(
                    (
                        z
                        for z in sorted(g.closed_neighborhood(anchor))
                        if z not in pendants and values[z] > 0
                    ),
                    None,
                )
                if donor is not None:
                    values[donor] -= 1
                values[pendant] += 1
            return Assignment(tuple(values[: self.keep]))
        raise ValueError(f"unknown lift kind {self.kind!r}")


@dataclass(frozen=True)
class Reduction:
    output: GenInstance
    value_map: ValueMap
    vertex_map: VertexMap
    lift: Lift

    def lift_assignment(self, a: Assignment) -> Assignment:
        return self.lift.apply(self.output, a)


def _identity_vertex_map(n: int) -> VertexMap:
    return VertexMap(forward={v: frozenset([v]) for v in range(n)})


# duality ----------------------------------------------------------------------


def dualize(inst: GenInstance) -> Reduction:
    """Swap dominate and pack over the same graph and caps.

    The new quota is cap(N[v]) - quota(v); optima satisfy
    original = cap(V) - transformed, and complementing against the caps maps
    optimal assignments across. Requires quota(v) <= cap(N[v]) everywhere
    (guaranteed after normalize)."""
    cap_sums = closed_neighborhood_sums(inst.graph, inst.cap)
    for v in range(inst.n):
        if inst.quota[v] > cap_sums[v]:
            raise NotNormalizedError(
                f"dualize needs quota(v) <= cap(N[v]) but vertex {v} has "
                f"{inst.quota[v]} > {cap_sums[v]}; normalize the instance first"
            )
    flipped = Sense.PACK if inst.sense is Sense.DOMINATE else Sense.DOMINATE
    dual_quota = tuple(cap_sums[v] - inst.quota[v] for v in range(inst.n))
    output = GenInstance(inst.graph, dual_quota, inst.cap, flipped)
    vmap = ValueMap(
        scale=1,
        offset=inst.cap_total(),
        direction_flip=True,
        description=f"duality: {inst.sense.value} = cap(V) - {flipped.value}",
    )
    return Reduction(
        output=output,
        value_map=vmap,
        vertex_map=_identity_vertex_map(inst.n),
        lift=Lift(kind="complement", caps=inst.cap),
    )


# fixed-label elimination --------------------------------------------------------


def eliminate_fixed_labels(
    L: LabelledInstance,
) -> tuple[LabelledInstance, ValueMap]:
    """Zero out fixed labels by absorbing them into the quotas.

    Each quota drops by the fixed-label mass of its closed neighborhood
    (clamped at zero); the optimum shifts by the total fixed mass. The
    instance must already use the canonical range start=0, step=1.
    """
    if L.start != 0 or L.step != 1:
        raise UnsupportedFormError(
            "fixed-label elimination needs the canonical range start=0, step=1"
        )
    g = L.graph
    fixed_mass = [0 if t is None else t for t in L.fixed]
    mass_sums = closed_neighborhood_sums(g, fixed_mass)
    new_quota = tuple(max(0, L.quota[v] - mass_sums[v]) for v in range(g.n))
    new_fixed = tuple(None if t is None else 0 for t in L.fixed)
    zeroed = LabelledInstance(g, 0, 1, L.levels, new_fixed, new_quota)
    offset = sum(fixed_mass)
    return zeroed, ValueMap(scale=1, offset=offset, description="fixed labels absorbed")


def restore_fixed_values(L: LabelledInstance, solved: Assignment) -> Assignment:
    """Lift for :func:`eliminate_fixed_labels`: put the fixed labels back."""
    return Assignment(
        tuple(
            solved.values[v] if L.fixed[v] is None else L.fixed[v]
            for v in range(L.n)
        )
    )


# pendant constructions -----------------------------------------------------------


def free_reduction(inst: GenInstance) -> Reduction:
    """Remove zero caps from a packing instance by hanging a quota-0 pendant
    off each zero-cap vertex; the pendant forces its anchor to zero, so all
    caps can be raised to the common level. Optimum unchanged."""
    if inst.sense is not Sense.PACK:
        raise ValueError("free_reduction applies to packing instances")
    level = max(inst.cap) if any(inst.cap) else 1
    if any(c not in (0, level) for c in inst.cap):
        raise ValueError(
            f"caps must be two-valued {{0, {level}}}, got {sorted(set(inst.cap))}"
        )
    zeros = [v for v in range(inst.n) if inst.cap[v] == 0]
    if not zeros:
        return Reduction(
            output=inst,
            value_map=ValueMap(description="free reduction (no zero caps)"),
            vertex_map=_identity_vertex_map(inst.n),
            lift=Lift(kind="project", keep=inst.n),
        )
    g2, vmap = inst.graph.add_pendants({v: 1 for v in zeros})
    quota = inst.quota + (0,) * len(zeros)
    cap = (level,) * g2.n
    output = GenInstance(g2, quota, cap, Sense.PACK)
    return Reduction(
        output=output,
        value_map=ValueMap(description="free reduction via quota-0 pendants"),
        vertex_map=vmap,
        lift=Lift(kind="project", keep=inst.n),
    )


def uniformize_packing(inst: GenInstance) -> Reduction:
    """Equalize the quotas of a unit-cap packing instance.

    Every vertex below the peak quota gets that many pendant vertices, all
    quotas become the peak, and the optimum grows by exactly the number of
    pendants (each pendant saturates in some optimal solution)."""
    if inst.sense is not Sense.PACK:
        raise ValueError("uniformize_packing applies to packing instances")
    if any(c != 1 for c in inst.cap):
        raise ValueError("uniformize_packing needs all caps equal to 1")
    if not is_normalized(inst):
        raise NotNormalizedError("normalize the instance before uniformizing")
    peak = max(inst.quota)
    if all(q == peak for q in inst.quota):
        return Reduction(
            output=inst,
            value_map=ValueMap(description="uniformize (already uniform)"),
            vertex_map=_identity_vertex_map(inst.n),
            lift=Lift(kind="project", keep=inst.n),
        )
    requests = {v: peak - inst.quota[v] for v in range(inst.n) if inst.quota[v] < peak}
    g2, vmap = inst.graph.add_pendants(requests)
    added = g2.n - inst.n
    output = GenInstance(g2, (peak,) * g2.n, (1,) * g2.n, Sense.PACK)
    anchors = tuple(sorted((p, vmap.anchors[p]) for p in vmap.created))
    return Reduction(
        output=output,
        value_map=ValueMap(
            scale=1,
            offset=-added,
            description=f"uniform quota {peak}: optimum shifts by {added} pendants",
        ),
        vertex_map=vmap,
        lift=Lift(kind="pendant_canonical", keep=inst.n, anchors=anchors),
    )


# clique expansion ------------------------------------------------------------------


def flatten_capacities(inst: GenInstance, max_cap: int | None = None) -> Reduction:
    """Rewrite a dominate instance with bounded caps into one with 0/1 caps
    by exploding each positive-cap vertex into a clique of cap(v) unit-cap
    vertices that all inherit its quota. Vertex values correspond to clique
    sums; the optimum is unchanged."""
    if inst.sense is not Sense.DOMINATE:
        raise ValueError("flatten_capacities applies to dominate instances")
    if max_cap is not None and any(c > max_cap for c in inst.cap):
        raise ValueError(f"caps exceed the stated bound {max_cap}")
    groups: list[tuple[int, ...]] = []
    next_idx = 0
    for v in range(inst.n):
        size = max(1, inst.cap[v])
        groups.append(tuple(range(next_idx, next_idx + size)))
        next_idx += size
    edges: list[tuple[int, int]] = []
    for grp in groups:
        edges.extend((grp[i], grp[j]) for i in range(len(grp)) for j in range(i + 1, len(grp)))
    for u, v in inst.graph.edges():
        edges.extend((a, b) for a in groups[u] for b in groups[v])
    g2 = Graph(next_idx, edges)
    quota: list[int] = [0] * next_idx
    cap: list[int] = [0] * next_idx
    for v, grp in enumerate(groups):
        for w in grp:
            quota[w] = inst.quota[v]
            cap[w] = 0 if inst.cap[v] == 0 else 1
    output = GenInstance(g2, tuple(quota), tuple(cap), Sense.DOMINATE)
    forward = {v: frozenset(grp) for v, grp in enumerate(groups)}
    created = frozenset(w for grp in groups if len(grp) > 1 for w in grp)
    anchors = {w: v for v, grp in enumerate(groups) if len(grp) > 1 for w in grp}
    vmap = VertexMap(forward=forward, created=created, anchors=anchors)
    return Reduction(
        output=output,
        value_map=ValueMap(description="caps flattened to cliques"),
        vertex_map=vmap,
        lift=Lift(kind="clique_sum", groups=tuple(groups)),
    )
