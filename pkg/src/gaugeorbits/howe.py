"""Howe subgroup conjugacy classes and the partially ordered set of types.

A Howe subgroup is the centralizer of some subset of the group; types are
their conjugacy classes, ordered by ``t1 <= t2`` iff some representative of
t1 contains some representative of t2 (reverse containment: the whole group
is minimal, the center is maximal).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gaugeorbits import groups
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


class TypeLookupError(RuntimeError):
    """A centralizer descriptor was not found in the enumerated poset."""


@dataclass(frozen=True)
class HoweType:
    """One conjugacy class of Howe subgroups."""

    spec: GroupSpec
    class_id: int
    representative: SubgroupDescriptor
    label: str

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<type {self.class_id}:{self.label}>"


class TypePoset:
    """All Howe types of one spec with their ordering.

    Class ids are assigned by descending representative size (then by the
    lexicographically smallest representative bitmask for finite tables), so
    id 0 is always ``t_min`` = [whole group] and the last id is ``t_max`` =
    [center].
    """

    def __init__(
        self,
        spec: GroupSpec,
        types: tuple[HoweType, ...],
        leq: tuple[tuple[bool, ...], ...],
        lookup_key_to_id: dict,
    ):
        self.spec = spec
        self.types = types
        self._leq = leq
        self._lookup = lookup_key_to_id
        mins = [t for t in types if all(leq[t.class_id][j] for j in range(len(types)))]
        maxs = [t for t in types if all(leq[j][t.class_id] for j in range(len(types)))]
        if len(mins) != 1 or len(maxs) != 1:
            raise TypeLookupError(f"{spec.name}: poset lacks unique extrema")
        self.t_min = mins[0]
        self.t_max = maxs[0]

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def leq_ids(self, i: int, j: int) -> bool:
        return self._leq[i][j]

    def class_of_descriptor(self, d: SubgroupDescriptor) -> HoweType:
        key = _lookup_key(d)
        try:
            return self.types[self._lookup[key]]
        except KeyError:
            raise TypeLookupError(
                f"{self.spec.name}: descriptor {groups.subgroup_label(d)} "
                "is not a cataloged Howe subgroup"
            ) from None

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover relations (i, j) with type_i < type_j and nothing between."""
        n = len(self.types)
        edges = []
        for i in range(n):
            for j in range(n):
                if i == j or not self._leq[i][j]:
                    continue
                if any(
                    self._leq[i][k] and self._leq[k][j]
                    for k in range(n)
                    if k != i and k != j
                ):
                    continue
                edges.append((i, j))
        return edges

    def to_json(self) -> dict:
        return {
            "group": self.spec.name,
            "classes": [
                {
                    "class_id": t.class_id,
                    "label": t.label,
                    "representative": groups.subgroup_to_json(t.representative),
                }
                for t in self.types
            ],
            "hasse_edges": [list(e) for e in self.hasse_edges()],
            "t_min": self.t_min.class_id,
            "t_max": self.t_max.class_id,
        }


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _lookup_key(d: SubgroupDescriptor):
    """Hashable key identifying the conjugacy class membership of d."""
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        return d.data
    if isinstance(spec, CircleU1Spec):
        return KIND_FULL
    if isinstance(spec, SpecialUnitary2Spec):
        return d.kind  # all tori are conjugate
    if isinstance(spec, ProductSpec):
        return tuple(_lookup_key(x) for x in d.data)
    raise TypeError(f"unknown spec {spec!r}")


def _finite_howe_masks(spec: FiniteTableSpec) -> set[int]:
    """All Howe subgroups as bitmasks: single-element centralizers closed
    under intersection, plus the whole group."""
    seeds = {spec.full_mask} | set(spec.element_centralizer_masks)
    masks = set(seeds)
    frontier = set(seeds)
    while frontier:
        fresh = set()
        for m in frontier:
            for s in seeds:
                c = m & s
                if c not in masks:
                    fresh.add(c)
        masks |= fresh
        frontier = fresh
    return masks


def _finite_classes(spec: FiniteTableSpec) -> list[tuple[int, frozenset[int]]]:
    """Conjugacy classes of Howe masks as (representative, all masks)."""
    masks = _finite_howe_masks(spec)
    seen: set[int] = set()
    classes = []
    for m in sorted(masks):
        if m in seen:
            continue
        orbit = {groups.conjugate_mask(spec, m, h) for h in range(spec.order)}
        seen |= orbit
        classes.append((min(orbit), frozenset(orbit)))
    classes.sort(key=lambda c: (-_popcount(c[0]), c[0]))
    return classes


def _sort_key(d: SubgroupDescriptor):
    """Descending representative size, catalog-wise."""
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        return (-_popcount(d.data), d.data)
    if isinstance(spec, CircleU1Spec):
        return (0,)
    if isinstance(spec, SpecialUnitary2Spec):
        return ({KIND_FULL: 0, KIND_TORUS: 1, KIND_CENTER: 2}[d.kind],)
    raise TypeError(f"unexpected factor spec {spec!r}")


@lru_cache(maxsize=None)
def enumerate_howe_types(spec: GroupSpec) -> TypePoset:
    """Complete list of Howe type classes of a cataloged spec, with ordering."""
    if isinstance(spec, FiniteTableSpec):
        classes = _finite_classes(spec)
        reps = [groups.SubgroupDescriptor(spec, groups.KIND_MASK, rep) for rep, _ in classes]
        labels = [groups.subgroup_label(r) for r in reps]
        # t1 <= t2 iff some conjugate of rep2 sits inside rep1
        leq = tuple(
            tuple(
                any(m | classes[i][0] == classes[i][0] for m in classes[j][1])
                for j in range(len(classes))
            )
            for i in range(len(classes))
        )
        lookup = {}
        for cid, (_, orbit) in enumerate(classes):
            for m in orbit:
                lookup[m] = cid
        types = tuple(
            HoweType(spec, cid, reps[cid], labels[cid]) for cid in range(len(classes))
        )
        return TypePoset(spec, types, leq, lookup)

    if isinstance(spec, CircleU1Spec):
        rep = groups.full_subgroup(spec)
        types = (HoweType(spec, 0, rep, "Full"),)
        return TypePoset(spec, types, ((True,),), {KIND_FULL: 0})

    if isinstance(spec, SpecialUnitary2Spec):
        reps = (
            groups.SubgroupDescriptor(spec, KIND_FULL),
            groups.SubgroupDescriptor(spec, KIND_TORUS, (0.0, 0.0, 1.0)),
            groups.SubgroupDescriptor(spec, KIND_CENTER),
        )
        labels = ("Full", "Torus", "Center")
        leq = tuple(tuple(i <= j for j in range(3)) for i in range(3))
        types = tuple(HoweType(spec, i, reps[i], labels[i]) for i in range(3))
        return TypePoset(
            spec, types, leq, {KIND_FULL: 0, KIND_TORUS: 1, KIND_CENTER: 2}
        )

    if isinstance(spec, ProductSpec):
        factor_posets = [enumerate_howe_types(f) for f in spec.factors]
        combos: list[tuple[HoweType, ...]] = [()]
        for fp in factor_posets:
            combos = [c + (t,) for c in combos for t in fp.types]
        combos.sort(key=lambda c: tuple(_sort_key(t.representative) for t in c))
        types = []
        lookup = {}
        for cid, combo in enumerate(combos):
            rep = groups.SubgroupDescriptor(
                spec, groups.KIND_PRODUCT, tuple(t.representative for t in combo)
            )
            label = "(" + " x ".join(t.label for t in combo) + ")"
            types.append(HoweType(spec, cid, rep, label))
            lookup[tuple(_lookup_key(t.representative) for t in combo)] = cid
        leq = tuple(
            tuple(
                all(
                    factor_posets[f].leq_ids(ci[f].class_id, cj[f].class_id)
                    for f in range(len(factor_posets))
                )
                for cj in combos
            )
            for ci in combos
        )
        return TypePoset(spec, tuple(types), leq, lookup)

    raise TypeError(f"unknown spec {spec!r}")


def type_leq(t1: HoweType, t2: HoweType) -> bool:
    """The poset relation: some rep of t1 contains some conjugate rep of t2."""
    if t1.spec != t2.spec:
        raise GroupSpecMismatch("types of different specs")
    return enumerate_howe_types(t1.spec).leq_ids(t1.class_id, t2.class_id)


def type_of(
    spec: GroupSpec,
    gens: list[GroupElement] | tuple[GroupElement, ...],
    poset: TypePoset | None = None,
) -> HoweType:
    """The Howe type [Z(gens)] located in the enumerated poset."""
    if poset is None:
        poset = enumerate_howe_types(spec)
    return poset.class_of_descriptor(groups.centralizer(spec, gens))
