"""Shared test utilities and independent oracles.

Oracles here deliberately avoid the package's own code paths: permutation
S3 arithmetic is rebuilt from scratch, finite centralizers are recomputed by
commutation scans over the table, and conjugacy is decided by explicit
conjugator search.
"""

from __future__ import annotations

import itertools

import numpy as np

from gaugeorbits import groups, paths


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


# --- independent S3 oracle -------------------------------------------------

S3_PERMS = {
    "e": (0, 1, 2),
    "(12)": (1, 0, 2),
    "(13)": (2, 1, 0),
    "(23)": (0, 2, 1),
    "(123)": (1, 2, 0),
    "(132)": (2, 0, 1),
}
S3_NAMES = {v: k for k, v in S3_PERMS.items()}


def s3_compose(a: str, b: str) -> str:
    """Product a*b with (a*b)(x) = a(b(x))."""
    pa, pb = S3_PERMS[a], S3_PERMS[b]
    return S3_NAMES[tuple(pa[pb[x]] for x in range(3))]


def s3_inverse(a: str) -> str:
    pa = S3_PERMS[a]
    inv = [0, 0, 0]
    for x in range(3):
        inv[pa[x]] = x
    return S3_NAMES[tuple(inv)]


# --- finite-table oracles ---------------------------------------------------


def table_centralizer(spec: groups.FiniteTableSpec, gens: list[int]) -> frozenset[int]:
    out = set()
    for h in range(spec.order):
        if all(spec.table[h][g] == spec.table[g][h] for g in gens):
            out.add(h)
    return frozenset(out)


def table_conjugate_set(
    spec: groups.FiniteTableSpec, members: frozenset[int], h: int
) -> frozenset[int]:
    hinv = spec.inverse_table[h]
    return frozenset(spec.table[spec.table[hinv][g]][h] for g in members)


def sets_conjugate(
    spec: groups.FiniteTableSpec, a: frozenset[int], b: frozenset[int]
) -> bool:
    return any(table_conjugate_set(spec, a, h) == b for h in range(spec.order))


def brute_force_howe_sets(spec: groups.FiniteTableSpec) -> set[frozenset[int]]:
    """Z(S) for every subset S of the group (feasible for order <= 8)."""
    out = set()
    for r in range(spec.order + 1):
        for subset in itertools.combinations(range(spec.order), r):
            out.add(table_centralizer(spec, list(subset)))
    return out


def mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    g = 0
    while mask:
        if mask & 1:
            out.add(g)
        mask >>= 1
        g += 1
    return frozenset(out)


def subgroup_closure(spec: groups.FiniteTableSpec, gens: list[int]) -> frozenset[int]:
    """The subgroup generated by gens, by saturation over the table."""
    members = {spec.identity_index}
    frontier = set(gens)
    while frontier:
        members |= frontier
        fresh = set()
        for a in members:
            for b in frontier:
                for c in (spec.table[a][b], spec.table[b][a]):
                    if c not in members:
                        fresh.add(c)
        for b in list(frontier):
            inv = spec.inverse_table[b]
            if inv not in members:
                fresh.add(inv)
        frontier = fresh - members
    return frozenset(members)


# --- graphs ------------------------------------------------------------------


def random_connected_graph(r: np.random.Generator, max_extra: int = 3) -> paths.Graph:
    n_vertices = int(r.integers(1, 4))
    vertices = [f"v{i}" for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        edges.append((f"t{i}", vertices[int(r.integers(0, i))], vertices[i]))
    for j in range(int(r.integers(1, max_extra + 1))):
        a = vertices[int(r.integers(0, n_vertices))]
        b = vertices[int(r.integers(0, n_vertices))]
        edges.append((f"e{j}", a, b))
    return paths.graph(vertices, vertices[0], edges)


def random_walk_word(
    g: paths.Graph, r: np.random.Generator, length: int
) -> tuple[list[tuple[str, int]], str]:
    incidence: dict[str, list[tuple[str, int]]] = {v: [] for v in g.vertices}
    for e in g.edges:
        incidence[e.src].append((e.name, 1))
        incidence[e.dst].append((e.name, -1))
    at = g.vertices[int(r.integers(0, len(g.vertices)))]
    start = at
    letters = []
    for _ in range(length):
        options = incidence[at]
        if not options:
            break
        letter = options[int(r.integers(0, len(options)))]
        letters.append(letter)
        e = g.edge(letter[0])
        at = e.dst if letter[1] > 0 else e.src
    return letters, start


def loop_walk_word(
    g: paths.Graph, r: np.random.Generator, tries: int = 200, length: int = 8
) -> paths.PathWord | None:
    """A random reduced loop at the base, or None."""
    for _ in range(tries):
        letters, start = random_walk_word(g, r, length)
        if start != g.base:
            continue
        w = paths.word(g, letters, start)
        if w.start == g.base and w.end == g.base:
            return w
    return None
