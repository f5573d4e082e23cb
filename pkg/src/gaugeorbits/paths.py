"""Combinatorial graphs and reduced edge words.

A path class is exactly a reduced word of signed edges; smooth-path
structure is abstracted away.  Words compose by concatenation followed by
free cancellation of adjacent ``e e^-1`` pairs, which has a unique normal
form independent of cancellation order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class GraphNotConnected(ValueError):
    """Operation requires a connected graph."""


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Graph:
    """Finite directed multigraph with a distinguished base vertex."""

    vertices: tuple[str, ...]
    base: str
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        if self.base not in vs:
            raise ValueError(f"base vertex {self.base!r} not in vertex list")
        names = set()
        for e in self.edges:
            if e.name in names:
                raise ValueError(f"duplicate edge name {e.name!r}")
            names.add(e.name)
            if e.src not in vs or e.dst not in vs:
                raise ValueError(f"edge {e.name!r} has endpoint outside the graph")

    @property
    def edge_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.edges)

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(f"no edge named {name!r}")

    def has_edge(self, name: str) -> bool:
        return any(e.name == name for e in self.edges)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "base": self.base,
            "edges": [{"name": e.name, "from": e.src, "to": e.dst} for e in self.edges],
        }

    @staticmethod
    def from_json(data: dict) -> "Graph":
        try:
            edges = tuple(
                Edge(e["name"], e["from"], e["to"]) for e in data["edges"]
            )
            return Graph(tuple(data["vertices"]), data["base"], edges)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph object: {exc}") from exc


def graph(vertices: Sequence[str], base: str, edges: Iterable[tuple[str, str, str]]) -> Graph:
    """Convenience constructor from (name, from, to) triples."""
    return Graph(tuple(vertices), base, tuple(Edge(*e) for e in edges))


def load_graph(path: str | Path) -> Graph:
    return Graph.from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# words

Letter = tuple[str, int]  # (edge name, +1 or -1)


def _letter_ends(g: Graph, letter: Letter) -> tuple[str, str]:
    e = g.edge(letter[0])
    return (e.src, e.dst) if letter[1] > 0 else (e.dst, e.src)


@dataclass(frozen=True)
class PathWord:
    """A reduced word of signed edges; empty words carry their vertex."""

    graph: Graph
    letters: tuple[Letter, ...]
    start: str

    @property
    def end(self) -> str:
        if not self.letters:
            return self.start
        return _letter_ends(self.graph, self.letters[-1])[1]

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    def vertices(self) -> list[str]:
        """The visited vertex sequence, length len(letters) + 1."""
        out = [self.start]
        for letter in self.letters:
            out.append(_letter_ends(self.graph, letter)[1])
        return out

    def __str__(self) -> str:
        return format_word(self)


def _validate_chain(g: Graph, letters: Sequence[Letter], start: str) -> None:
    if start not in g.vertices:
        raise ValueError(f"start vertex {start!r} not in graph")
    at = start
    for letter in letters:
        s, t = _letter_ends(g, letter)
        if s != at:
            raise ValueError(
                f"letters do not compose: at {at!r} but {letter} starts at {s!r}"
            )
        at = t


def _cancel(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def word(g: Graph, letters: Sequence[Letter], start: str | None = None) -> PathWord:
    """Reduce a raw composable letter sequence to its normal form."""
    letters = [(str(n), 1 if s > 0 else -1) for n, s in letters]
    if start is None:
        if not letters:
            raise ValueError("empty word needs an explicit start vertex")
        start = _letter_ends(g, letters[0])[0]
    _validate_chain(g, letters, start)
    return PathWord(g, _cancel(letters), start)


def empty_word(g: Graph, at: str | None = None) -> PathWord:
    return word(g, [], at if at is not None else g.base)


def edge_word(g: Graph, name: str, sign: int = 1) -> PathWord:
    return word(g, [(name, sign)])


reduce_word = word  # the reduction operation is the normal-form constructor


def compose(a: PathWord, b: PathWord) -> PathWord:
    if a.graph != b.graph:
        raise ValueError("words live on different graphs")
    if a.end != b.start:
        raise ValueError(f"cannot compose: {a.end!r} != {b.start!r}")
    return PathWord(a.graph, _cancel(a.letters + b.letters), a.start)


def invert(a: PathWord) -> PathWord:
    letters = tuple((n, -s) for n, s in reversed(a.letters))
    return PathWord(a.graph, letters, a.end)


def same_initial_segment(a: PathWord, b: PathWord) -> bool:
    """First-letter surrogate of the germ relation: same first signed edge."""
    if not a.letters or not b.letters:
        return False
    return a.letters[0] == b.letters[0]


def final_meets_initial(a: PathWord, b: PathWord) -> bool:
    """True iff a's final letter runs back along b's first letter."""
    if not a.letters or not b.letters:
        return False
    n, s = a.letters[-1]
    return b.letters[0] == (n, -s)


def decompose_at_vertex(a: PathWord, x: str) -> list[PathWord]:
    """Split the word at every interior visit of x; factors concatenate to a."""
    if not a.letters:
        return [a]
    visits = a.vertices()
    factors = []
    begin = 0
    for i in range(1, len(a.letters)):
        if visits[i] == x:
            factors.append(PathWord(a.graph, a.letters[begin:i], visits[begin]))
            begin = i
    factors.append(PathWord(a.graph, a.letters[begin:], visits[begin]))
    return factors


# ---------------------------------------------------------------------------
# spanning tree and fundamental loops


def _bfs_tree(g: Graph) -> dict[str, Letter | None]:
    """Parent letters of the breadth-first spanning tree from the base.

    parent[v] is the letter that moves parent-vertex -> v, None for the base.
    Edges are scanned in input order, so the tree is deterministic.
    """
    incidence: dict[str, list[Letter]] = {v: [] for v in g.vertices}
    for e in g.edges:
        incidence[e.src].append((e.name, 1))
        if e.dst != e.src:
            incidence[e.dst].append((e.name, -1))
    parent: dict[str, Letter | None] = {g.base: None}
    queue = deque([g.base])
    while queue:
        v = queue.popleft()
        for letter in incidence[v]:
            w = _letter_ends(g, letter)[1]
            if w not in parent:
                parent[w] = letter
                queue.append(w)
    return parent


def is_connected(g: Graph) -> bool:
    return len(_bfs_tree(g)) == len(g.vertices)


def tree_path(g: Graph, parent: dict[str, Letter | None], v: str) -> PathWord:
    """The tree word from the base to v."""
    letters: list[Letter] = []
    at = v
    while parent[at] is not None:
        letter = parent[at]
        letters.append(letter)
        at = _letter_ends(g, letter)[0]
    letters.reverse()
    return PathWord(g, tuple(letters), g.base)


def spanning_tree(g: Graph) -> dict[str, Letter | None]:
    parent = _bfs_tree(g)
    if len(parent) != len(g.vertices):
        missing = sorted(set(g.vertices) - set(parent))
        raise GraphNotConnected(f"unreachable vertices: {missing}")
    return parent


def fundamental_loops(g: Graph) -> list[PathWord]:
    """One reduced loop at the base per non-tree edge, in edge input order.

    Every loop at the base is a product of these words and their inverses.
    """
    parent = spanning_tree(g)
    tree_edges = {letter[0] for letter in parent.values() if letter is not None}
    loops = []
    for e in g.edges:
        if e.name in tree_edges:
            continue
        to_src = tree_path(g, parent, e.src)
        back = invert(tree_path(g, parent, e.dst))
        loop = compose(compose(to_src, PathWord(g, ((e.name, 1),), e.src)), back)
        loops.append(loop)
    return loops


# ---------------------------------------------------------------------------
# word strings: "e1 e2^-1 e3"


def format_word(a: PathWord) -> str:
    if not a.letters:
        return ""
    return " ".join(n if s > 0 else f"{n}^-1" for n, s in a.letters)


def parse_word(g: Graph, text: str, start: str | None = None) -> PathWord:
    letters: list[Letter] = []
    for token in text.split():
        if token.endswith("^-1"):
            letters.append((token[:-3], -1))
        else:
            letters.append((token, 1))
    return word(g, letters, start)
