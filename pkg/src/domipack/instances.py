"""Instance model for generalized domination/packing.

An instance is a graph plus two nonnegative integer vectors: ``quota`` bounds
what each closed neighborhood must accumulate (dominate: at least, pack: at
most) and ``cap`` bounds each vertex's own value. Classical problem variants
(domination, 2-packing, k-tuple, limited packing, {k}-functions, signed,
minus, fault-tolerant, labelled forms) all map onto this one carrier type.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import InfeasibleInstanceError, ParseError, UnsupportedFormError
from .graph import Graph, _parse_graph_lines, serialize_graph


class Sense(Enum):
    DOMINATE = "dominate"
    PACK = "pack"


FREE = None  # label marker for vertices whose value is unconstrained


def closed_neighborhood_sums(g: Graph, values: Sequence[int]) -> list[int]:
    """For each v, the sum of ``values`` over N[v]."""
    sums = list(values)
    for u, v in g.edges():
        sums[u] += values[v]
        sums[v] += values[u]
    return sums


@dataclass(frozen=True)
class GenInstance:
    """A (quota, cap) domination or packing instance on a graph."""

    graph: Graph
    quota: tuple[int, ...]
    cap: tuple[int, ...]
    sense: Sense

    def __post_init__(self) -> None:
        object.__setattr__(self, "quota", tuple(self.quota))
        object.__setattr__(self, "cap", tuple(self.cap))
        n = self.graph.n
        if len(self.quota) != n or len(self.cap) != n:
            raise ValueError(
                f"quota/cap lengths ({len(self.quota)}, {len(self.cap)}) "
                f"do not match n={n}"
            )
        if any(q < 0 for q in self.quota):
            raise ValueError("quotas must be nonnegative")
        if any(c < 0 for c in self.cap):
            raise ValueError("caps must be nonnegative")

    @property
    def n(self) -> int:
        return self.graph.n

    def cap_total(self) -> int:
        return sum(self.cap)


@dataclass(frozen=True)
class Assignment:
    """Nonnegative integer vertex valuation; weight is always recomputed."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if any(x < 0 for x in self.values):
            raise ValueError("assignment values must be nonnegative")

    @property
    def weight(self) -> int:
        return sum(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ValueMap:
    """Affine relation between a transformed instance's optimum and the
    original's: original = scale*transformed + offset, or, when
    direction_flip is set (a min/max swap), original = offset - scale*transformed.
    """

    scale: int = 1
    offset: int = 0
    direction_flip: bool = False
    description: str = ""

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise ValueError("scale must be >= 1")

    def apply(self, transformed_optimum: int) -> int:
        if self.direction_flip:
            return self.offset - self.scale * transformed_optimum
        return self.scale * transformed_optimum + self.offset

    def header(self) -> str:
        return (
            f"# valuemap scale={self.scale} offset={self.offset} "
            f"flip={1 if self.direction_flip else 0}"
        )


IDENTITY_MAP = ValueMap(description="identity")


@dataclass(frozen=True)
class LabelledInstance:
    """Per-vertex fixed-or-free labels over the range
    Y = {start + j*step : 0 <= j <= levels}, plus neighborhood quotas.

    ``fixed[v]`` is the forced value of v, or FREE (None). Quotas may be
    negative here; canonicalization clamps them.
    """

    graph: Graph
    start: int
    step: int
    levels: int
    fixed: tuple[int | None, ...]
    quota: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "fixed", tuple(self.fixed))
        object.__setattr__(self, "quota", tuple(self.quota))
        if self.step < 1:
            raise ValueError("label step must be >= 1")
        if self.levels < 1:
            raise ValueError("label range needs levels >= 1")
        n = self.graph.n
        if len(self.fixed) != n or len(self.quota) != n:
            raise ValueError("fixed/quota lengths do not match vertex count")
        for v, t in enumerate(self.fixed):
            if t is not None and not self._in_range(t):
                raise ValueError(
                    f"fixed label {t} at vertex {v} lies outside the range "
                    f"{{{self.start} + j*{self.step} : 0 <= j <= {self.levels}}}"
                )

    def _in_range(self, value: int) -> bool:
        j, r = divmod(value - self.start, self.step)
        return r == 0 and 0 <= j <= self.levels

    @property
    def n(self) -> int:
        return self.graph.n

    def label_values(self) -> list[int]:
        return [self.start + j * self.step for j in range(self.levels + 1)]

    def free_vertices(self) -> list[int]:
        return [v for v, t in enumerate(self.fixed) if t is None]

    def fixed_total(self) -> int:
        return sum(t for t in self.fixed if t is not None)


# feasibility ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    vertex: int
    kind: str  # "cap" or "quota"
    detail: str = ""


def first_violation(inst: GenInstance, a: Assignment) -> Violation | None:
    """None if feasible, else the lowest-vertex broken constraint (caps are
    checked before quotas at each vertex)."""
    if len(a.values) != inst.n:
        raise ValueError(
            f"assignment has {len(a.values)} entries for n={inst.n} vertices"
        )
    sums = closed_neighborhood_sums(inst.graph, a.values)
    for v in range(inst.n):
        if a.values[v] > inst.cap[v]:
            return Violation(v, "cap", f"f({v})={a.values[v]} > cap {inst.cap[v]}")
        if inst.sense is Sense.DOMINATE:
            if sums[v] < inst.quota[v]:
                return Violation(
                    v, "quota", f"f(N[{v}])={sums[v]} < quota {inst.quota[v]}"
                )
        else:
            if sums[v] > inst.quota[v]:
                return Violation(
                    v, "quota", f"f(N[{v}])={sums[v]} > quota {inst.quota[v]}"
                )
    return None


def is_feasible(inst: GenInstance, a: Assignment) -> bool:
    return first_violation(inst, a) is None


# normalization --------------------------------------------------------------


def normalize(inst: GenInstance) -> GenInstance:
    """Clamp quotas and caps to their effective ranges without changing the
    optimum. Dominate instances must be feasible: a quota above its closed
    neighborhood's total capacity is an error, not a sentinel.

    The two clamps feed each other, so they run to a fixpoint; the result is
    idempotent. For packing the feasible set is preserved exactly; for
    domination at least one optimal assignment always survives the cap clamp.
    """
    g = inst.graph
    quota = list(inst.quota)
    cap = list(inst.cap)
    if inst.sense is Sense.DOMINATE:
        cap_sums = closed_neighborhood_sums(g, cap)
        for v in range(g.n):
            if quota[v] > cap_sums[v]:
                raise InfeasibleInstanceError(v, quota[v], cap_sums[v])
    while True:
        changed = False
        cap_sums = closed_neighborhood_sums(g, cap)
        if inst.sense is Sense.DOMINATE:
            for v in range(g.n):
                if quota[v] > cap_sums[v]:
                    raise InfeasibleInstanceError(v, quota[v], cap_sums[v])
            new_quota = [min(quota[v], cap_sums[v]) for v in range(g.n)]
            peak = [
                max(new_quota[w] for w in g.closed_neighborhood(v))
                for v in range(g.n)
            ]
            new_cap = [min(cap[v], peak[v]) for v in range(g.n)]
        else:
            new_quota = [min(quota[v], cap_sums[v]) for v in range(g.n)]
            new_cap = [min(cap[v], new_quota[v]) for v in range(g.n)]
        if new_quota != quota or new_cap != cap:
            changed = True
            quota, cap = new_quota, new_cap
        if not changed:
            return replace(inst, quota=tuple(quota), cap=tuple(cap))


def is_normalized(inst: GenInstance) -> bool:
    return normalize(inst) == inst


# classical constructors ------------------------------------------------------


def from_domination(g: Graph) -> GenInstance:
    """Minimum dominating set as a (1, 1)-dominate instance."""
    return from_k_tuple(g, 1)


def from_two_packing(g: Graph) -> GenInstance:
    """Maximum 2-packing as a (1, 1)-pack instance."""
    return from_limited_packing(g, 1)


def from_k_tuple(g: Graph, k: int) -> GenInstance:
    """k-tuple domination: every closed neighborhood holds >= k chosen."""
    if k < 1:
        raise ValueError("k-tuple domination needs k >= 1")
    return GenInstance(g, (k,) * g.n, (1,) * g.n, Sense.DOMINATE)


def from_limited_packing(g: Graph, k: int) -> GenInstance:
    """k-limited packing: every closed neighborhood holds <= k chosen."""
    if k < 1:
        raise ValueError("limited packing needs k >= 1")
    return GenInstance(g, (k,) * g.n, (1,) * g.n, Sense.PACK)


def from_braces_k(g: Graph, k: int, sense: Sense) -> GenInstance:
    """{k}-dominating / {k}-packing functions: values in [0, k], closed
    neighborhood sums bounded by k."""
    if k < 1:
        raise ValueError("{k}-functions need k >= 1")
    return GenInstance(g, (k,) * g.n, (k,) * g.n, sense)


def from_fault_tolerant(g: Graph, k_vec: Sequence[int]) -> GenInstance:
    """Per-vertex domination demands with 0/1 membership."""
    return GenInstance(g, tuple(k_vec), (1,) * g.n, Sense.DOMINATE)


def from_signed(g: Graph) -> tuple[GenInstance, ValueMap]:
    """Signed domination over {-1, 1} as a 0/1 instance.

    Shifting f -> (f+1)/2 turns the sum condition f(N[v]) >= 1 into a
    neighborhood quota of 1 + ceil(deg(v)/2); the map 2*w - n recovers the
    signed weight.
    """
    labelled = LabelledInstance(
        g, start=-1, step=2, levels=1, fixed=(FREE,) * g.n, quota=(1,) * g.n
    )
    return from_labelled(labelled, Sense.DOMINATE)


def from_minus(g: Graph) -> tuple[GenInstance, ValueMap]:
    """Minus domination over {-1, 0, 1}; shift by one, quota deg(v) + 2."""
    labelled = LabelledInstance(
        g, start=-1, step=1, levels=2, fixed=(FREE,) * g.n, quota=(1,) * g.n
    )
    return from_labelled(labelled, Sense.DOMINATE)


def from_mdom(
    g: Graph, required: Iterable[int], k_vec: Sequence[int]
) -> tuple[GenInstance, ValueMap]:
    """Multiple domination with a forced-in vertex set (labels fixed at 1)."""
    req = set(required)
    fixed = tuple(1 if v in req else FREE for v in range(g.n))
    labelled = LabelledInstance(g, 0, 1, 1, fixed, tuple(k_vec))
    return from_labelled(labelled, Sense.DOMINATE)


def from_glp(
    g: Graph, allowed: Iterable[int], k_vec: Sequence[int]
) -> tuple[GenInstance, ValueMap]:
    """Limited packing restricted to an allowed vertex set (others fixed 0)."""
    ok = set(allowed)
    fixed = tuple(FREE if v in ok else 0 for v in range(g.n))
    labelled = LabelledInstance(g, 0, 1, 1, fixed, tuple(k_vec))
    return from_labelled(labelled, Sense.PACK)


def as_geninstance(L: LabelledInstance, sense: Sense) -> GenInstance:
    """Direct encoding of a start=0, step=1 labelled instance whose fixed
    labels are all 0: fixed vertices get cap 0, free ones cap `levels`."""
    if L.start != 0 or L.step != 1:
        raise UnsupportedFormError("direct encoding needs start=0, step=1")
    if any(t not in (None, 0) for t in L.fixed):
        raise UnsupportedFormError("direct encoding needs fixed labels of 0")
    if any(q < 0 for q in L.quota):
        raise ValueError("quotas must be nonnegative for direct encoding")
    cap = tuple(0 if t == 0 else L.levels for t in L.fixed)
    return GenInstance(L.graph, L.quota, cap, sense)


def from_labelled(L: LabelledInstance, sense: Sense) -> tuple[GenInstance, ValueMap]:
    """Reduce a labelled instance to a plain (quota, cap) instance.

    Dominate: rescale the label range onto [0, levels] (quota becomes
    ceil((k - start*(deg+1)) / step), value w maps back by step*w + start*n),
    then absorb fixed labels into quotas. Pack labellings are only defined
    for start=0, step=1 with fixed labels 0, and are rejected otherwise.
    """
    g = L.graph
    n = g.n
    if sense is Sense.PACK:
        if L.start != 0 or L.step != 1 or any(t not in (None, 0) for t in L.fixed):
            raise UnsupportedFormError(
                "packing labellings require start=0, step=1 and fixed labels in {0, free}"
            )
        if any(q < 0 for q in L.quota):
            raise ValueError("packing quotas must be nonnegative")
        return as_geninstance(L, sense), ValueMap(description="labelled packing (identity)")

    # rescale Y = {start + j*step} onto indices [0, levels]
    scaled_quota = tuple(
        max(0, -(-(L.quota[v] - L.start * (g.degree(v) + 1)) // L.step))
        for v in range(n)
    )
    scaled_fixed = tuple(
        None if t is None else (t - L.start) // L.step for t in L.fixed
    )
    canonical = LabelledInstance(g, 0, 1, L.levels, scaled_fixed, scaled_quota)

    from .transforms import eliminate_fixed_labels

    zeroed, inner = eliminate_fixed_labels(canonical)
    vmap = ValueMap(
        scale=L.step,
        offset=L.step * inner.offset + L.start * n,
        description="labelled dominate: rescale + fixed-label elimination",
    )
    return as_geninstance(zeroed, sense), vmap


# instance text format --------------------------------------------------------
#
# graph block, then per-vertex lines:
#   k default <int> / k <v> <int>
#   u default <int> / u <v> <int>
#   sense dominate|pack
# Labelled files replace the u lines with:
#   labels <start> <step> <levels>
#   t default F|<int> / t <v> F|<int>


def is_labelled_text(text: str) -> bool:
    return any(
        line.strip().startswith("labels ") for line in text.splitlines()
    )


def _fill_vector(
    n: int,
    name: str,
    default: int | None,
    explicit: dict[int, int],
    default_line: int | None,
) -> list[int]:
    out = []
    for v in range(n):
        if v in explicit:
            out.append(explicit[v])
        elif default is not None:
            out.append(default)
        else:
            raise ParseError(
                f"vertex {v + 1} has no '{name}' value and no '{name} default' line",
                default_line,
            )
    return out


def _parse_vertex_value(parts: list[str], n: int, line_no: int) -> tuple[int, int]:
    try:
        v, val = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"non-integer fields in {' '.join(parts)!r}", line_no)
    if not 1 <= v <= n:
        raise ParseError(f"vertex {v} out of range", line_no)
    return v - 1, val


def parse_instance(text: str) -> GenInstance:
    n, edges, trailing = _parse_graph_lines(text.splitlines())
    g = Graph(n, edges)
    defaults: dict[str, int] = {}
    explicit: dict[str, dict[int, int]] = {"k": {}, "u": {}}
    sense: Sense | None = None
    for line_no, parts in trailing:
        tok = parts[0]
        if tok in ("k", "u"):
            if len(parts) != 3:
                raise ParseError(f"malformed '{tok}' line", line_no)
            if parts[1] == "default":
                if tok in defaults:
                    raise ParseError(f"second '{tok} default' line", line_no)
                try:
                    defaults[tok] = int(parts[2])
                except ValueError:
                    raise ParseError(f"non-integer default in {parts!r}", line_no)
            else:
                v, val = _parse_vertex_value(parts, n, line_no)
                if v in explicit[tok]:
                    raise ParseError(f"duplicate '{tok}' line for vertex {v + 1}", line_no)
                explicit[tok][v] = val
        elif tok == "sense":
            if sense is not None:
                raise ParseError("second 'sense' line", line_no)
            if len(parts) != 2 or parts[1] not in ("dominate", "pack"):
                raise ParseError("sense must be 'dominate' or 'pack'", line_no)
            sense = Sense(parts[1])
        else:
            raise ParseError(f"unrecognized line {' '.join(parts)!r}", line_no)
    if sense is None:
        raise ParseError("missing 'sense dominate|pack' line")
    quota = _fill_vector(n, "k", defaults.get("k"), explicit["k"], None)
    cap = _fill_vector(n, "u", defaults.get("u"), explicit["u"], None)
    if any(x < 0 for x in quota) or any(x < 0 for x in cap):
        raise ParseError("k and u values must be nonnegative")
    return GenInstance(g, tuple(quota), tuple(cap), sense)


def serialize_instance(
    inst: GenInstance,
    comments: Iterable[str] = (),
    value_map: ValueMap | None = None,
) -> str:
    lines = [f"c {c}" for c in comments]
    if value_map is not None:
        lines.append(value_map.header())
    lines.append(serialize_graph(inst.graph).rstrip("\n"))
    lines.extend(f"k {v + 1} {inst.quota[v]}" for v in range(inst.n))
    lines.extend(f"u {v + 1} {inst.cap[v]}" for v in range(inst.n))
    lines.append(f"sense {inst.sense.value}")
    return "\n".join(lines) + "\n"


def parse_labelled_instance(text: str) -> tuple[LabelledInstance, Sense]:
    n, edges, trailing = _parse_graph_lines(text.splitlines())
    g = Graph(n, edges)
    header: tuple[int, int, int] | None = None
    k_default: int | None = None
    k_explicit: dict[int, int] = {}
    t_default: tuple[bool, int | None] | None = None  # (seen, value)
    t_explicit: dict[int, int | None] = {}
    sense: Sense | None = None
    for line_no, parts in trailing:
        tok = parts[0]
        if tok == "labels":
            if header is not None:
                raise ParseError("second 'labels' line", line_no)
            if len(parts) != 4:
                raise ParseError("labels line needs '<start> <step> <levels>'", line_no)
            try:
                header = (int(parts[1]), int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer labels fields", line_no)
        elif tok == "k":
            if len(parts) != 3:
                raise ParseError("malformed 'k' line", line_no)
            if parts[1] == "default":
                if k_default is not None:
                    raise ParseError("second 'k default' line", line_no)
                k_default = int(parts[2])
            else:
                v, val = _parse_vertex_value(parts, n, line_no)
                if v in k_explicit:
                    raise ParseError(f"duplicate 'k' line for vertex {v + 1}", line_no)
                k_explicit[v] = val
        elif tok == "t":
            if len(parts) != 3:
                raise ParseError("malformed 't' line", line_no)
            raw = parts[2]
            val: int | None
            if raw == "F":
                val = None
            else:
                try:
                    val = int(raw)
                except ValueError:
                    raise ParseError(f"label must be an integer or 'F', got {raw!r}", line_no)
            if parts[1] == "default":
                if t_default is not None:
                    raise ParseError("second 't default' line", line_no)
                t_default = (True, val)
            else:
                try:
                    v = int(parts[1])
                except ValueError:
                    raise ParseError(f"bad vertex in 't' line", line_no)
                if not 1 <= v <= n:
                    raise ParseError(f"vertex {v} out of range", line_no)
                if v - 1 in t_explicit:
                    raise ParseError(f"duplicate 't' line for vertex {v}", line_no)
                t_explicit[v - 1] = val
        elif tok == "sense":
            if sense is not None:
                raise ParseError("second 'sense' line", line_no)
            if len(parts) != 2 or parts[1] not in ("dominate", "pack"):
                raise ParseError("sense must be 'dominate' or 'pack'", line_no)
            sense = Sense(parts[1])
        elif tok == "u":
            raise ParseError("labelled instances carry labels, not 'u' caps", line_no)
        else:
            raise ParseError(f"unrecognized line {' '.join(parts)!r}", line_no)
    if header is None:
        raise ParseError("missing 'labels <start> <step> <levels>' line")
    if sense is None:
        raise ParseError("missing 'sense dominate|pack' line")
    quota = _fill_vector(n, "k", k_default, k_explicit, None)
    fixed: list[int | None] = []
    for v in range(n):
        if v in t_explicit:
            fixed.append(t_explicit[v])
        elif t_default is not None:
            fixed.append(t_default[1])
        else:
            raise ParseError(f"vertex {v + 1} has no 't' label and no 't default' line")
    try:
        labelled = LabelledInstance(g, header[0], header[1], header[2], tuple(fixed), tuple(quota))
    except ValueError as exc:
        raise ParseError(str(exc))
    return labelled, sense


def serialize_labelled_instance(
    L: LabelledInstance, sense: Sense, comments: Iterable[str] = ()
) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(serialize_graph(L.graph).rstrip("\n"))
    lines.append(f"labels {L.start} {L.step} {L.levels}")
    lines.extend(
        f"t {v + 1} {'F' if L.fixed[v] is None else L.fixed[v]}" for v in range(L.n)
    )
    lines.extend(f"k {v + 1} {L.quota[v]}" for v in range(L.n))
    lines.append(f"sense {sense.value}")
    return "\n".join(lines) + "\n"
