"""Extending connections by fresh loops to realize any admissible type.

`magnify_type` adds a tail to a fresh vertex plus one loop there, which
multiplies the holonomy generating set by one prescribed element without
touching any existing edge.  `realize_type` iterates this over canonical
generators of a conjugated representative to hit an exact target type while
preserving the restriction to every protected graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from gaugeorbits import connections, groups, howe, paths
from gaugeorbits.connections import Connection
from gaugeorbits.groups import (
    KIND_CENTER,
    KIND_FULL,
    KIND_TORUS,
    CircleU1Spec,
    FiniteTableSpec,
    GroupElement,
    GroupSpec,
    GroupSpecMismatch,
    ProductSpec,
    SpecialUnitary2Spec,
    SubgroupDescriptor,
)
from gaugeorbits.howe import HoweType
from gaugeorbits.paths import Edge, Graph, PathWord


class TypeNotReachable(ValueError):
    """The requested target type is not above the connection's type."""


@dataclass(frozen=True)
class ExtensionPlan:
    """A batch of fresh loops hung off one new vertex.

    The tail edge runs base -> new_vertex and carries the identity, so each
    composite loop tail * loop_j * tail^-1 has holonomy exactly elements[j].
    """

    new_vertex: str
    tail_edge: Edge
    loop_edges: tuple[Edge, ...]
    elements: tuple[GroupElement, ...]


def _fresh_names(
    taken: set[str], prefixes: Sequence[str]
) -> list[str]:
    k = 0
    while True:
        names = [f"{p}{k}" for p in prefixes]
        if all(n not in taken for n in names):
            return names
        k += 1


def plan_extension(
    c: Connection, protected: Sequence[Graph], elements: Sequence[GroupElement]
) -> ExtensionPlan:
    """Reserve fresh names, disjoint from the connection and protected graphs."""
    taken: set[str] = set(c.graph.vertices) | set(c.graph.edge_names)
    for g in protected:
        taken |= set(g.vertices) | set(g.edge_names)
    vertex, tail = _fresh_names(taken, ["v", "t"])
    taken |= {vertex, tail}
    loop_names = []
    for _ in elements:
        (name,) = _fresh_names(taken, ["f"])
        taken.add(name)
        loop_names.append(name)
    base = c.graph.base
    return ExtensionPlan(
        new_vertex=vertex,
        tail_edge=Edge(tail, base, vertex),
        loop_edges=tuple(Edge(n, vertex, vertex) for n in loop_names),
        elements=tuple(elements),
    )


def apply_extension(c: Connection, plan: ExtensionPlan) -> tuple[Connection, list[PathWord]]:
    """Extend the graph and connection; return it with the composite loops."""
    g = c.graph
    new_graph = Graph(
        g.vertices + (plan.new_vertex,),
        g.base,
        g.edges + (plan.tail_edge,) + plan.loop_edges,
    )
    values = dict(c.values)
    values[plan.tail_edge.name] = groups.identity(c.spec)
    for e, el in zip(plan.loop_edges, plan.elements):
        values[e.name] = el
    extended = Connection(c.spec, new_graph, values)
    tail = plan.tail_edge.name
    loops = [
        paths.word(new_graph, [(tail, 1), (e.name, 1), (tail, -1)], g.base)
        for e in plan.loop_edges
    ]
    return extended, loops


def magnify_type(
    c: Connection, protected: Sequence[Graph], g: GroupElement
) -> tuple[Connection, PathWord]:
    """Add one fresh loop with holonomy g.

    The returned connection restricts to every protected graph exactly as c
    does, and the centralizer of its holonomy generators is
    Z({g} + old generators).
    """
    if g.spec != c.spec:
        raise GroupSpecMismatch("element does not belong to the connection spec")
    if not paths.is_connected(c.graph):
        raise paths.GraphNotConnected("magnify_type needs a connected connection")
    plan = plan_extension(c, protected, [g])
    extended, loops = apply_extension(c, plan)
    return extended, loops[0]


# ---------------------------------------------------------------------------
# realizing a target type


def _conjugate_rep_into(
    spec: GroupSpec, rep: SubgroupDescriptor, ambient: SubgroupDescriptor
) -> SubgroupDescriptor:
    """A conjugate of rep contained in ambient; exists whenever [ambient's
    class] <= [rep's class] in the poset."""
    if isinstance(spec, FiniteTableSpec):
        for h in range(spec.order):
            m = groups.conjugate_mask(spec, rep.data, h)
            if m | ambient.data == ambient.data:
                return SubgroupDescriptor(spec, groups.KIND_MASK, m)
        raise TypeNotReachable("no conjugate of the representative fits")
    if isinstance(spec, CircleU1Spec):
        return rep
    if isinstance(spec, SpecialUnitary2Spec):
        if rep.kind == KIND_FULL:
            if ambient.kind != KIND_FULL:
                raise TypeNotReachable("full subgroup only fits in the full group")
            return rep
        if rep.kind == KIND_CENTER:
            return rep
        # torus target
        if ambient.kind == KIND_FULL:
            return rep
        if ambient.kind == KIND_TORUS:
            return SubgroupDescriptor(spec, KIND_TORUS, ambient.data)
        raise TypeNotReachable("torus does not fit in the center")
    if isinstance(spec, ProductSpec):
        parts = tuple(
            _conjugate_rep_into(f, r, a)
            for f, r, a in zip(spec.factors, rep.data, ambient.data)
        )
        return SubgroupDescriptor(spec, groups.KIND_PRODUCT, parts)
    raise TypeError(f"unknown spec {spec!r}")


def _torus_generator(spec: SpecialUnitary2Spec, axis) -> GroupElement:
    # a generic-angle rotation about the axis; any noncentral one works
    half = 0.5
    s = math.sin(half)
    return GroupElement(
        spec, (math.cos(half), s * axis[0], s * axis[1], s * axis[2])
    )


def howe_generators(spec: GroupSpec, v: SubgroupDescriptor) -> list[GroupElement]:
    """Elements u_0..u_k of Z(v) with Z({u_0..u_k}) = v.

    v must be a Howe subgroup (all enumerated representatives and their
    conjugates are).
    """
    if isinstance(spec, FiniteTableSpec):
        zv = groups.centralizer_of_subgroup(v)
        return groups.reduce_generators(spec, groups.mask_elements(spec, zv.data))
    if isinstance(spec, CircleU1Spec):
        return [groups.identity(spec)]
    if isinstance(spec, SpecialUnitary2Spec):
        if v.kind == KIND_FULL:
            return [groups.identity(spec)]
        if v.kind == KIND_TORUS:
            return [_torus_generator(spec, v.data)]
        return [
            GroupElement(spec, (0.0, 1.0, 0.0, 0.0)),
            GroupElement(spec, (0.0, 0.0, 1.0, 0.0)),
        ]
    if isinstance(spec, ProductSpec):
        out: list[GroupElement] = []
        ident = [groups.identity(f) for f in spec.factors]
        for i, (f, part) in enumerate(zip(spec.factors, v.data)):
            for u in howe_generators(f, part):
                tup = list(ident)
                tup[i] = u
                out.append(GroupElement(spec, tuple(tup)))
        return out
    raise TypeError(f"unknown spec {spec!r}")


def realize_type(
    c: Connection, protected: Sequence[Graph], t: HoweType
) -> Connection:
    """An extension of c with orbit type exactly t.

    Requires t >= orbit_type(c); the restriction of the result to every
    protected graph equals the restriction of c.
    """
    spec = c.spec
    poset = howe.enumerate_howe_types(spec)
    current = connections.orbit_type(c, poset)
    if t.spec != spec:
        raise GroupSpecMismatch("target type belongs to a different spec")
    if not poset.leq_ids(current.class_id, t.class_id):
        raise TypeNotReachable(
            f"target {t.label} is not above the connection type {current.label}"
        )
    ambient = groups.centralizer(spec, connections.holonomy_generators(c))
    v = _conjugate_rep_into(spec, t.representative, ambient)
    out = c
    for u in howe_generators(spec, v):
        out, _ = magnify_type(out, protected, u)
    return out


def nonempty_stratum_witness(spec: GroupSpec, t: HoweType) -> Connection:
    """A connection of type t, grown from the trivial one-vertex connection."""
    g = Graph(("m",), "m", ())
    return realize_type(connections.trivial_connection(spec, g), [], t)
