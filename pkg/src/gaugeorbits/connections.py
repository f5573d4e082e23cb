"""Connections on a graph: holonomy, gauge action, reduction maps, types.

A connection assigns a group element to every edge; a gauge transform
assigns one to every vertex and acts edge-wise by
``h(e: x->y) -> g_x^-1 h(e) g_y``.  Holonomies multiply left to right in
word order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from gaugeorbits import groups, howe, paths
from gaugeorbits.groups import GroupElement, GroupSpec, GroupSpecMismatch
from gaugeorbits.howe import HoweType, TypePoset
from gaugeorbits.paths import Graph, PathWord


@dataclass(frozen=True)
class Connection:
    """Edge-wise group element assignment on a graph."""

    spec: GroupSpec
    graph: Graph
    values: Mapping[str, GroupElement] = field(hash=False)

    def value(self, edge_name: str) -> GroupElement:
        try:
            return self.values[edge_name]
        except KeyError:
            raise KeyError(f"connection has no edge {edge_name!r}") from None


@dataclass(frozen=True)
class GaugeTransform:
    """Vertex-wise group element assignment on a graph."""

    spec: GroupSpec
    graph: Graph
    values: Mapping[str, GroupElement] = field(hash=False)

    def value(self, vertex: str) -> GroupElement:
        try:
            return self.values[vertex]
        except KeyError:
            raise KeyError(f"gauge transform has no vertex {vertex!r}") from None


def connection(
    spec: GroupSpec, g: Graph, values: Mapping[str, GroupElement]
) -> Connection:
    got = set(values)
    want = set(g.edge_names)
    if got != want:
        raise ValueError(
            f"connection values must cover the edges exactly; "
            f"missing {sorted(want - got)}, extra {sorted(got - want)}"
        )
    for name, el in values.items():
        if el.spec != spec:
            raise GroupSpecMismatch(f"edge {name!r} carries a foreign element")
    return Connection(spec, g, dict(values))


def trivial_connection(spec: GroupSpec, g: Graph) -> Connection:
    e = groups.identity(spec)
    return Connection(spec, g, {name: e for name in g.edge_names})


def gauge_transform(
    spec: GroupSpec, g: Graph, values: Mapping[str, GroupElement]
) -> GaugeTransform:
    if set(values) != set(g.vertices):
        raise ValueError("gauge values must cover the vertices exactly")
    for v, el in values.items():
        if el.spec != spec:
            raise GroupSpecMismatch(f"vertex {v!r} carries a foreign element")
    return GaugeTransform(spec, g, dict(values))


def identity_gauge(spec: GroupSpec, g: Graph) -> GaugeTransform:
    e = groups.identity(spec)
    return GaugeTransform(spec, g, {v: e for v in g.vertices})


def random_connection(
    g: Graph, spec: GroupSpec, rng: np.random.Generator
) -> Connection:
    """Independent Haar element per edge, in edge input order."""
    return Connection(
        spec, g, {e.name: groups.haar_sample(spec, rng) for e in g.edges}
    )


def random_gauge(
    g: Graph, spec: GroupSpec, rng: np.random.Generator
) -> GaugeTransform:
    return GaugeTransform(
        spec, g, {v: groups.haar_sample(spec, rng) for v in g.vertices}
    )


# ---------------------------------------------------------------------------
# holonomy and the gauge action


def holonomy(c: Connection, w: PathWord) -> GroupElement:
    """Ordered product of edge elements along the word; identity for empty."""
    out = groups.identity(c.spec)
    for name, sign in w.letters:
        el = c.value(name)
        out = groups.multiply(out, el if sign > 0 else groups.inverse(el))
    return out


def act(c: Connection, g: GaugeTransform) -> Connection:
    """Pointwise gauge action; satisfies act(act(c,g1),g2) = act(c, g1*g2)."""
    if c.graph != g.graph:
        raise ValueError("connection and gauge transform on different graphs")
    if c.spec != g.spec:
        raise GroupSpecMismatch("connection and gauge transform specs differ")
    new = {}
    for e in c.graph.edges:
        gx = g.value(e.src)
        gy = g.value(e.dst)
        new[e.name] = groups.multiply(
            groups.multiply(groups.inverse(gx), c.value(e.name)), gy
        )
    return Connection(c.spec, c.graph, new)


def pointwise_product(g1: GaugeTransform, g2: GaugeTransform) -> GaugeTransform:
    if g1.graph != g2.graph or g1.spec != g2.spec:
        raise ValueError("gauge transforms do not match")
    return GaugeTransform(
        g1.spec,
        g1.graph,
        {v: groups.multiply(g1.value(v), g2.value(v)) for v in g1.graph.vertices},
    )


def reduction_map(
    c: Connection, loops: Sequence[PathWord]
) -> tuple[GroupElement, ...]:
    """Holonomies of loops at the base vertex, in the given order."""
    base = c.graph.base
    for lp in loops:
        if not (lp.start == base and lp.end == base):
            raise ValueError("reduction map needs loops based at the base vertex")
    return tuple(holonomy(c, lp) for lp in loops)


def holonomy_generators(c: Connection) -> list[GroupElement]:
    """Holonomies of the fundamental loops: a generating set of the holonomy
    group of the connection."""
    return [holonomy(c, lp) for lp in paths.fundamental_loops(c.graph)]


def orbit_type(c: Connection, poset: TypePoset | None = None) -> HoweType:
    """The gauge orbit type [Z(holonomy group)] of the connection."""
    gens = holonomy_generators(c)
    reduced = groups.reduce_generators(c.spec, gens)
    return howe.type_of(c.spec, reduced, poset)


def stabilizer_transport(c: Connection, z: GroupElement) -> GaugeTransform:
    """The gauge transform fixing c with base value z.

    z must centralize the holonomy group; the other vertex values are
    transported along spanning-tree paths.
    """
    if z.spec != c.spec:
        raise GroupSpecMismatch("element does not belong to the connection spec")
    stab = groups.centralizer(c.spec, holonomy_generators(c))
    if not groups.subgroup_member(stab, z):
        raise ValueError("element is not in the holonomy centralizer")
    parent = paths.spanning_tree(c.graph)
    values = {}
    for v in c.graph.vertices:
        t = holonomy(c, paths.tree_path(c.graph, parent, v))
        values[v] = groups.multiply(groups.multiply(groups.inverse(t), z), t)
    return GaugeTransform(c.spec, c.graph, values)


def restrict(c: Connection, sub: Graph) -> Connection:
    """Project the connection onto a subgraph of its graph."""
    values = {}
    for e in sub.edges:
        if not c.graph.has_edge(e.name):
            raise ValueError(f"edge {e.name!r} is not in the connection graph")
        big = c.graph.edge(e.name)
        if (big.src, big.dst) != (e.src, e.dst):
            raise ValueError(f"edge {e.name!r} has different endpoints")
        values[e.name] = c.value(e.name)
    return Connection(c.spec, sub, values)


# ---------------------------------------------------------------------------
# file format


def connection_to_json(c: Connection) -> dict:
    return {
        "graph": c.graph.to_json(),
        "values": {
            name: groups.element_to_literal(c.value(name))
            for name in c.graph.edge_names
        },
    }


def connection_from_json(
    spec: GroupSpec, data: dict, base_dir: str | Path | None = None
) -> Connection:
    if not isinstance(data, dict) or "graph" not in data or "values" not in data:
        raise ValueError("connection object needs 'graph' and 'values' fields")
    graph_field = data["graph"]
    if isinstance(graph_field, str):
        p = Path(graph_field)
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        g = paths.load_graph(p)
    else:
        g = Graph.from_json(graph_field)
    raw = data["values"]
    if not isinstance(raw, dict):
        raise ValueError("'values' must map edge names to element literals")
    values = {}
    for name, lit in raw.items():
        values[name] = groups.element_from_literal(spec, lit)
    return connection(spec, g, values)


def load_connection(
    spec: GroupSpec, path: str | Path
) -> Connection:
    path = Path(path)
    return connection_from_json(spec, json.loads(path.read_text()), path.parent)
