"""Cataloged compact groups with exact or toleranced arithmetic.

The catalog covers finite multiplication-table groups, the circle group U(1),
SU(2) as unit quaternions, and finite products of these.  Elements carry a
reference to their spec; every operation is pure and returns new values, so
specs, elements and subgroup descriptors can be shared freely between
workers.

Conventions fixed here and used throughout the package:
  * products are written left to right, `multiply(a, b) = a*b`, and for the
    built-in permutation groups `a*b` maps x to a(b(x)); this realizes
    (12)*(123) = (23) in S3,
  * `conjugate(g, h)` returns h^-1 g h,
  * SU(2) torus axes are canonicalized with the first coordinate of modulus
    above the axis tolerance made positive.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TAU_NORM = 1e-12  # quaternion unit-norm drift triggering renormalization
TAU_EQ = 1e-9     # element equality tolerance for continuous catalogs
TAU_AXIS = 1e-7   # rotation-axis coincidence tolerance

TWO_PI = 2.0 * math.pi


class GroupSpecMismatch(ValueError):
    """Operands belong to different group specs."""


class InvalidGroupTable(ValueError):
    """A finite multiplication table violates the group axioms."""


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class GroupSpec:
    """Base marker for catalog entries.  Use the concrete subclasses."""

    @property
    def name(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteTableSpec(GroupSpec):
    """A finite group given by its multiplication table.

    ``table[i][j]`` is the index of the product ``elements[i] * elements[j]``.
    Instances should be created through :func:`finite_table_spec`, which
    validates the axioms exhaustively.
    """

    label: str
    element_names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def name(self) -> str:
        return self.label

    @property
    def order(self) -> int:
        return len(self.element_names)

    @cached_property
    def identity_index(self) -> int:
        n = self.order
        for e in range(n):
            if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n)):
                return e
        raise InvalidGroupTable(f"{self.label}: no identity element")

    @cached_property
    def inverse_table(self) -> tuple[int, ...]:
        e = self.identity_index
        inv = [-1] * self.order
        for g in range(self.order):
            for h in range(self.order):
                if self.table[g][h] == e and self.table[h][g] == e:
                    inv[g] = h
                    break
            else:
                raise InvalidGroupTable(f"{self.label}: element {g} has no inverse")
        return tuple(inv)

    @cached_property
    def element_centralizer_masks(self) -> tuple[int, ...]:
        """For each g, the bitmask of all h commuting with g."""
        n = self.order
        masks = []
        for g in range(n):
            m = 0
            for h in range(n):
                if self.table[g][h] == self.table[h][g]:
                    m |= 1 << h
            masks.append(m)
        return tuple(masks)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def center_mask(self) -> int:
        m = self.full_mask
        for g in range(self.order):
            m &= self.element_centralizer_masks[g]
        return m

    def index_of(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise ValueError(f"{self.label}: unknown element name {name!r}") from None


@dataclass(frozen=True)
class CircleU1Spec(GroupSpec):
    """The circle group, elements as angles in [0, 2*pi)."""

    @property
    def name(self) -> str:
        return "U1"


@dataclass(frozen=True)
class SpecialUnitary2Spec(GroupSpec):
    """SU(2) as unit quaternions (w, x, y, z)."""

    @property
    def name(self) -> str:
        return "SU2"


@dataclass(frozen=True)
class ProductSpec(GroupSpec):
    """Ordered finite product of cataloged specs."""

    factors: tuple[GroupSpec, ...]

    def __post_init__(self) -> None:
        if len(self.factors) < 1:
            raise ValueError("product spec needs at least one factor")

    @property
    def name(self) -> str:
        return " x ".join(f.name for f in self.factors)


U1 = CircleU1Spec()
SU2 = SpecialUnitary2Spec()


def finite_table_spec(
    label: str,
    table: Sequence[Sequence[int]],
    element_names: Sequence[str] | None = None,
) -> FiniteTableSpec:
    """Validate a multiplication table exhaustively and wrap it in a spec."""
    n = len(table)
    if n == 0:
        raise InvalidGroupTable(f"{label}: empty table")
    rows = tuple(tuple(int(v) for v in row) for row in table)
    for row in rows:
        if len(row) != n or any(v < 0 or v >= n for v in row):
            raise InvalidGroupTable(f"{label}: table is not an {n}x{n} index table")
    names = tuple(element_names) if element_names is not None else tuple(
        f"g{i}" for i in range(n)
    )
    if len(names) != n or len(set(names)) != n:
        raise InvalidGroupTable(f"{label}: need {n} distinct element names")
    spec = FiniteTableSpec(label, names, rows)
    # identity and inverses
    spec.identity_index
    spec.inverse_table
    # associativity, the expensive part: O(n^3)
    for a in range(n):
        for b in range(n):
            ab = rows[a][b]
            row_a = rows[a]
            for c in range(n):
                if rows[ab][c] != row_a[rows[b][c]]:
                    raise InvalidGroupTable(
                        f"{label}: associativity fails at ({a},{b},{c})"
                    )
    return spec


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class GroupElement:
    """An element of a cataloged group.

    ``data`` is an index (finite tables), an angle (U(1)), a unit quaternion
    4-tuple (SU(2)) or a tuple of factor elements (products).
    """

    spec: GroupSpec
    data: object

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{self.spec.name}:{element_label(self)}>"


def _check_same_spec(a: GroupElement, b: GroupElement) -> None:
    if a.spec != b.spec:
        raise GroupSpecMismatch(f"mixed specs {a.spec.name} and {b.spec.name}")


def _canon_angle(theta: float) -> float:
    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    if theta >= TWO_PI:  # fmod boundary
        theta -= TWO_PI
    return theta


def _qmul(a: tuple, b: tuple) -> tuple:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def _qnormalize(q: tuple) -> tuple:
    n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]
    if abs(n2 - 1.0) <= 2.0 * TAU_NORM:
        return q
    n = math.sqrt(n2)
    if n == 0.0:
        raise ValueError("zero quaternion is not a group element")
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def identity(spec: GroupSpec) -> GroupElement:
    if isinstance(spec, FiniteTableSpec):
        return GroupElement(spec, spec.identity_index)
    if isinstance(spec, CircleU1Spec):
        return GroupElement(spec, 0.0)
    if isinstance(spec, SpecialUnitary2Spec):
        return GroupElement(spec, (1.0, 0.0, 0.0, 0.0))
    if isinstance(spec, ProductSpec):
        return GroupElement(spec, tuple(identity(f) for f in spec.factors))
    raise TypeError(f"unknown spec {spec!r}")


def finite_element(spec: FiniteTableSpec, which: int | str) -> GroupElement:
    idx = spec.index_of(which) if isinstance(which, str) else int(which)
    if not 0 <= idx < spec.order:
        raise ValueError(f"{spec.label}: element index {idx} out of range")
    return GroupElement(spec, idx)


def u1_element(theta: float) -> GroupElement:
    return GroupElement(U1, _canon_angle(float(theta)))


def su2_element(w: float, x: float, y: float, z: float) -> GroupElement:
    return GroupElement(SU2, _qnormalize((float(w), float(x), float(y), float(z))))


def product_element(spec: ProductSpec, parts: Sequence[GroupElement]) -> GroupElement:
    parts = tuple(parts)
    if len(parts) != len(spec.factors):
        raise ValueError("factor count mismatch")
    for part, factor in zip(parts, spec.factors):
        if part.spec != factor:
            raise GroupSpecMismatch("factor element does not match factor spec")
    return GroupElement(spec, parts)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same_spec(a, b)
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return GroupElement(spec, spec.table[a.data][b.data])
    if isinstance(spec, CircleU1Spec):
        return GroupElement(spec, _canon_angle(a.data + b.data))
    if isinstance(spec, SpecialUnitary2Spec):
        return GroupElement(spec, _qnormalize(_qmul(a.data, b.data)))
    if isinstance(spec, ProductSpec):
        return GroupElement(
            spec, tuple(multiply(x, y) for x, y in zip(a.data, b.data))
        )
    raise TypeError(f"unknown spec {spec!r}")


def inverse(a: GroupElement) -> GroupElement:
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return GroupElement(spec, spec.inverse_table[a.data])
    if isinstance(spec, CircleU1Spec):
        return GroupElement(spec, _canon_angle(-a.data))
    if isinstance(spec, SpecialUnitary2Spec):
        w, x, y, z = a.data
        return GroupElement(spec, (w, -x, -y, -z))
    if isinstance(spec, ProductSpec):
        return GroupElement(spec, tuple(inverse(x) for x in a.data))
    raise TypeError(f"unknown spec {spec!r}")


def conjugate(g: GroupElement, h: GroupElement) -> GroupElement:
    """Return h^-1 g h."""
    _check_same_spec(g, h)
    return multiply(multiply(inverse(h), g), h)


def element_equal(a: GroupElement, b: GroupElement) -> bool:
    _check_same_spec(a, b)
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return a.data == b.data
    if isinstance(spec, CircleU1Spec):
        d = abs(a.data - b.data)
        return min(d, TWO_PI - d) <= TAU_EQ
    if isinstance(spec, SpecialUnitary2Spec):
        return max(abs(p - q) for p, q in zip(a.data, b.data)) <= TAU_EQ
    if isinstance(spec, ProductSpec):
        return all(element_equal(x, y) for x, y in zip(a.data, b.data))
    raise TypeError(f"unknown spec {spec!r}")


def element_label(a: GroupElement) -> str:
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return spec.element_names[a.data]
    if isinstance(spec, CircleU1Spec):
        return f"{a.data:.12g}"
    if isinstance(spec, SpecialUnitary2Spec):
        return "(" + ",".join(f"{c:.6g}" for c in a.data) + ")"
    if isinstance(spec, ProductSpec):
        return "(" + ", ".join(element_label(x) for x in a.data) + ")"
    raise TypeError(f"unknown spec {spec!r}")


def haar_sample(spec: GroupSpec, rng: np.random.Generator) -> GroupElement:
    """One sample from the normalized Haar measure; deterministic given rng state."""
    if isinstance(spec, FiniteTableSpec):
        return GroupElement(spec, int(rng.integers(0, spec.order)))
    if isinstance(spec, CircleU1Spec):
        return GroupElement(spec, _canon_angle(float(rng.uniform(0.0, TWO_PI))))
    if isinstance(spec, SpecialUnitary2Spec):
        v = rng.standard_normal(4)
        n = float(np.sqrt(v @ v))
        if n < 1e-12:  # essentially impossible; keep the sampler total
            return identity(spec)
        return GroupElement(spec, (v[0] / n, v[1] / n, v[2] / n, v[3] / n))
    if isinstance(spec, ProductSpec):
        return GroupElement(spec, tuple(haar_sample(f, rng) for f in spec.factors))
    raise TypeError(f"unknown spec {spec!r}")


# ---------------------------------------------------------------------------
# subgroup descriptors

KIND_MASK = "mask"      # finite: membership bitmask
KIND_FULL = "full"      # whole group (U(1) always, SU(2) case)
KIND_TORUS = "torus"    # SU(2): maximal torus, payload = canonical unit axis
KIND_CENTER = "center"  # SU(2): the center {+-1}
KIND_PRODUCT = "product"


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Canonical form of a centralizer subgroup for one catalog entry."""

    spec: GroupSpec
    kind: str
    data: object = None

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<sub {self.spec.name}:{subgroup_label(self)}>"


def _mask_descriptor(spec: FiniteTableSpec, mask: int) -> SubgroupDescriptor:
    return SubgroupDescriptor(spec, KIND_MASK, mask)


def _canonical_axis(v: tuple[float, float, float]) -> tuple[float, float, float]:
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if n == 0.0:
        raise ValueError("zero axis")
    a = (v[0] / n, v[1] / n, v[2] / n)
    for c in a:
        if abs(c) > TAU_AXIS:
            if c < 0.0:
                return (-a[0], -a[1], -a[2])
            return a
    return a


def _axes_colinear(u: Sequence[float], v: Sequence[float]) -> bool:
    """True iff the (not necessarily unit) vectors are parallel within TAU_AXIS."""
    cx = u[1] * v[2] - u[2] * v[1]
    cy = u[2] * v[0] - u[0] * v[2]
    cz = u[0] * v[1] - u[1] * v[0]
    c2 = cx * cx + cy * cy + cz * cz
    u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
    v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
    return c2 <= (TAU_AXIS * TAU_AXIS) * u2 * v2


def _su2_vector(g: GroupElement) -> tuple[float, float, float]:
    return (g.data[1], g.data[2], g.data[3])


def _su2_is_central(g: GroupElement) -> bool:
    x, y, z = g.data[1], g.data[2], g.data[3]
    return x * x + y * y + z * z <= TAU_AXIS * TAU_AXIS


def full_subgroup(spec: GroupSpec) -> SubgroupDescriptor:
    if isinstance(spec, FiniteTableSpec):
        return _mask_descriptor(spec, spec.full_mask)
    if isinstance(spec, (CircleU1Spec, SpecialUnitary2Spec)):
        return SubgroupDescriptor(spec, KIND_FULL)
    if isinstance(spec, ProductSpec):
        return SubgroupDescriptor(
            spec, KIND_PRODUCT, tuple(full_subgroup(f) for f in spec.factors)
        )
    raise TypeError(f"unknown spec {spec!r}")


def center_subgroup(spec: GroupSpec) -> SubgroupDescriptor:
    if isinstance(spec, FiniteTableSpec):
        return _mask_descriptor(spec, spec.center_mask)
    if isinstance(spec, CircleU1Spec):
        return SubgroupDescriptor(spec, KIND_FULL)
    if isinstance(spec, SpecialUnitary2Spec):
        return SubgroupDescriptor(spec, KIND_CENTER)
    if isinstance(spec, ProductSpec):
        return SubgroupDescriptor(
            spec, KIND_PRODUCT, tuple(center_subgroup(f) for f in spec.factors)
        )
    raise TypeError(f"unknown spec {spec!r}")


def centralizer(spec: GroupSpec, gens: Iterable[GroupElement]) -> SubgroupDescriptor:
    """Canonical form of Z(gens); Z of the empty set is the whole group."""
    gens = list(gens)
    for g in gens:
        if g.spec != spec:
            raise GroupSpecMismatch("generator does not belong to the spec")
    if isinstance(spec, FiniteTableSpec):
        mask = spec.full_mask
        for g in gens:
            mask &= spec.element_centralizer_masks[g.data]
        return _mask_descriptor(spec, mask)
    if isinstance(spec, CircleU1Spec):
        return SubgroupDescriptor(spec, KIND_FULL)
    if isinstance(spec, SpecialUnitary2Spec):
        ref: tuple[float, float, float] | None = None
        for g in gens:
            if _su2_is_central(g):
                continue
            v = _su2_vector(g)
            if ref is None:
                ref = v
            elif not _axes_colinear(ref, v):
                return SubgroupDescriptor(spec, KIND_CENTER)
        if ref is None:
            return SubgroupDescriptor(spec, KIND_FULL)
        return SubgroupDescriptor(spec, KIND_TORUS, _canonical_axis(ref))
    if isinstance(spec, ProductSpec):
        parts = []
        for i, f in enumerate(spec.factors):
            parts.append(centralizer(f, [g.data[i] for g in gens]))
        return SubgroupDescriptor(spec, KIND_PRODUCT, tuple(parts))
    raise TypeError(f"unknown spec {spec!r}")


def subgroup_equal(a: SubgroupDescriptor, b: SubgroupDescriptor) -> bool:
    if a.spec != b.spec:
        raise GroupSpecMismatch("descriptors of different specs")
    if a.kind != b.kind:
        return False
    if a.kind == KIND_MASK:
        return a.data == b.data
    if a.kind == KIND_TORUS:
        return _axes_colinear(a.data, b.data)
    if a.kind == KIND_PRODUCT:
        return all(subgroup_equal(x, y) for x, y in zip(a.data, b.data))
    return True


def subgroup_contains(a: SubgroupDescriptor, b: SubgroupDescriptor) -> bool:
    """True iff b is a subset of a."""
    if a.spec != b.spec:
        raise GroupSpecMismatch("descriptors of different specs")
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return (a.data | b.data) == a.data
    if isinstance(spec, CircleU1Spec):
        return True
    if isinstance(spec, SpecialUnitary2Spec):
        if a.kind == KIND_FULL:
            return True
        if a.kind == KIND_TORUS:
            if b.kind == KIND_TORUS:
                return _axes_colinear(a.data, b.data)
            return b.kind == KIND_CENTER
        return b.kind == KIND_CENTER
    if isinstance(spec, ProductSpec):
        return all(subgroup_contains(x, y) for x, y in zip(a.data, b.data))
    raise TypeError(f"unknown spec {spec!r}")


def subgroup_intersect(
    a: SubgroupDescriptor, b: SubgroupDescriptor
) -> SubgroupDescriptor:
    if a.spec != b.spec:
        raise GroupSpecMismatch("descriptors of different specs")
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return _mask_descriptor(spec, a.data & b.data)
    if isinstance(spec, CircleU1Spec):
        return a
    if isinstance(spec, SpecialUnitary2Spec):
        if a.kind == KIND_FULL:
            return b
        if b.kind == KIND_FULL:
            return a
        if a.kind == KIND_CENTER or b.kind == KIND_CENTER:
            return SubgroupDescriptor(spec, KIND_CENTER)
        if _axes_colinear(a.data, b.data):
            return a
        return SubgroupDescriptor(spec, KIND_CENTER)
    if isinstance(spec, ProductSpec):
        return SubgroupDescriptor(
            spec,
            KIND_PRODUCT,
            tuple(subgroup_intersect(x, y) for x, y in zip(a.data, b.data)),
        )
    raise TypeError(f"unknown spec {spec!r}")


def subgroup_member(d: SubgroupDescriptor, g: GroupElement) -> bool:
    if d.spec != g.spec:
        raise GroupSpecMismatch("descriptor and element of different specs")
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        return bool(d.data >> g.data & 1)
    if isinstance(spec, CircleU1Spec):
        return True
    if isinstance(spec, SpecialUnitary2Spec):
        if d.kind == KIND_FULL:
            return True
        if _su2_is_central(g):
            return True
        if d.kind == KIND_CENTER:
            return False
        return _axes_colinear(d.data, _su2_vector(g))
    if isinstance(spec, ProductSpec):
        return all(subgroup_member(x, y) for x, y in zip(d.data, g.data))
    raise TypeError(f"unknown spec {spec!r}")


def conjugate_mask(spec: FiniteTableSpec, mask: int, h: int) -> int:
    """Bitmask of h^-1 {mask} h."""
    hinv = spec.inverse_table[h]
    out = 0
    g = 0
    m = mask
    while m:
        if m & 1:
            out |= 1 << spec.table[spec.table[hinv][g]][h]
        m >>= 1
        g += 1
    return out


def _rotate_vector_by(h: GroupElement, v: tuple[float, float, float]):
    """Vector part of h * (0,v) * h^-1, i.e. the rotation R(h) applied to v."""
    q = _qmul(_qmul(h.data, (0.0, v[0], v[1], v[2])), inverse(h).data)
    return (q[1], q[2], q[3])


def conjugate_subgroup(d: SubgroupDescriptor, h: GroupElement) -> SubgroupDescriptor:
    """Canonical form of h^-1 d h."""
    if d.spec != h.spec:
        raise GroupSpecMismatch("descriptor and element of different specs")
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        return _mask_descriptor(spec, conjugate_mask(spec, d.data, h.data))
    if isinstance(spec, CircleU1Spec):
        return d
    if isinstance(spec, SpecialUnitary2Spec):
        if d.kind != KIND_TORUS:
            return d
        axis = _rotate_vector_by(inverse(h), d.data)
        return SubgroupDescriptor(spec, KIND_TORUS, _canonical_axis(axis))
    if isinstance(spec, ProductSpec):
        return SubgroupDescriptor(
            spec,
            KIND_PRODUCT,
            tuple(conjugate_subgroup(x, y) for x, y in zip(d.data, h.data)),
        )
    raise TypeError(f"unknown spec {spec!r}")


def centralizer_of_subgroup(d: SubgroupDescriptor) -> SubgroupDescriptor:
    """Z(d) for a descriptor; used for the Howe bicommutant property."""
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        mask = spec.full_mask
        g = 0
        m = d.data
        while m:
            if m & 1:
                mask &= spec.element_centralizer_masks[g]
            m >>= 1
            g += 1
        return _mask_descriptor(spec, mask)
    if isinstance(spec, CircleU1Spec):
        return SubgroupDescriptor(spec, KIND_FULL)
    if isinstance(spec, SpecialUnitary2Spec):
        if d.kind == KIND_FULL:
            return SubgroupDescriptor(spec, KIND_CENTER)
        if d.kind == KIND_CENTER:
            return SubgroupDescriptor(spec, KIND_FULL)
        return d
    if isinstance(spec, ProductSpec):
        return SubgroupDescriptor(
            spec, KIND_PRODUCT, tuple(centralizer_of_subgroup(x) for x in d.data)
        )
    raise TypeError(f"unknown spec {spec!r}")


def subgroup_label(d: SubgroupDescriptor) -> str:
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        names = [
            spec.element_names[g] for g in range(spec.order) if d.data >> g & 1
        ]
        return "{" + ",".join(names) + "}"
    if isinstance(spec, CircleU1Spec):
        return "Full"
    if isinstance(spec, SpecialUnitary2Spec):
        if d.kind == KIND_FULL:
            return "Full"
        if d.kind == KIND_CENTER:
            return "Center"
        return "Torus[" + ",".join(f"{c:.6g}" for c in d.data) + "]"
    if isinstance(spec, ProductSpec):
        return "(" + " x ".join(subgroup_label(x) for x in d.data) + ")"
    raise TypeError(f"unknown spec {spec!r}")


def subgroup_to_json(d: SubgroupDescriptor) -> object:
    spec = d.spec
    if isinstance(spec, FiniteTableSpec):
        return {
            "kind": "mask",
            "members": [
                spec.element_names[g] for g in range(spec.order) if d.data >> g & 1
            ],
        }
    if isinstance(spec, ProductSpec):
        return {"kind": "product", "factors": [subgroup_to_json(x) for x in d.data]}
    if d.kind == KIND_TORUS:
        return {"kind": "torus", "axis": list(d.data)}
    return {"kind": d.kind}


def mask_elements(spec: FiniteTableSpec, mask: int) -> list[GroupElement]:
    return [GroupElement(spec, g) for g in range(spec.order) if mask >> g & 1]


# ---------------------------------------------------------------------------
# generator reduction


def reduce_generators(
    spec: GroupSpec, gens: Sequence[GroupElement]
) -> list[GroupElement]:
    """Greedy subsequence of ``gens`` with the same centralizer as all of them.

    Scans in input order and keeps an element exactly when it strictly
    shrinks the centralizer accumulated so far.
    """
    current = full_subgroup(spec)
    kept: list[GroupElement] = []
    for g in gens:
        if g.spec != spec:
            raise GroupSpecMismatch("generator does not belong to the spec")
        candidate = subgroup_intersect(current, centralizer(spec, [g]))
        if not subgroup_equal(candidate, current):
            kept.append(g)
            current = candidate
    return kept


# ---------------------------------------------------------------------------
# catalog by name and table files

_BUILTIN_CACHE: dict[str, GroupSpec] = {}


def _perm_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # (a*b)(x) = a(b(x))
    return tuple(a[b[x]] for x in range(len(a)))


def _build_s3() -> FiniteTableSpec:
    perms = [
        ("e", (0, 1, 2)),
        ("(12)", (1, 0, 2)),
        ("(13)", (2, 1, 0)),
        ("(23)", (0, 2, 1)),
        ("(123)", (1, 2, 0)),
        ("(132)", (2, 0, 1)),
    ]
    index = {p: i for i, (_, p) in enumerate(perms)}
    table = [
        [index[_perm_mul(pa, pb)] for _, pb in perms] for _, pa in perms
    ]
    return finite_table_spec("S3", table, [n for n, _ in perms])


def _build_q8() -> FiniteTableSpec:
    units = [
        ("1", (1, 0, 0, 0)),
        ("-1", (-1, 0, 0, 0)),
        ("i", (0, 1, 0, 0)),
        ("-i", (0, -1, 0, 0)),
        ("j", (0, 0, 1, 0)),
        ("-j", (0, 0, -1, 0)),
        ("k", (0, 0, 0, 1)),
        ("-k", (0, 0, 0, -1)),
    ]
    index = {q: i for i, (_, q) in enumerate(units)}
    table = [
        [index[_qmul(qa, qb)] for _, qb in units] for _, qa in units
    ]
    return finite_table_spec("Q8", table, [n for n, _ in units])


def _build_zn(n: int) -> FiniteTableSpec:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return finite_table_spec(f"Z{n}", table, [str(i) for i in range(n)])


def group_by_name(name: str) -> GroupSpec:
    """Resolve a built-in group name; products use ``x``, e.g. ``SU2 x Z2``."""
    key = name.strip()
    if key in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[key]
    parts = re.split(r"\s*[x×]\s*", key)
    if len(parts) > 1:
        spec: GroupSpec = ProductSpec(tuple(group_by_name(p) for p in parts))
    else:
        token = parts[0].strip()
        upper = token.upper().replace("(", "").replace(")", "").replace("_", "")
        if upper == "S3":
            spec = _build_s3()
        elif upper == "Q8":
            spec = _build_q8()
        elif upper == "U1":
            spec = U1
        elif upper == "SU2":
            spec = SU2
        elif m := re.fullmatch(r"Z(\d+)", upper):
            n = int(m.group(1))
            if n < 1:
                raise ValueError(f"bad cyclic group order in {name!r}")
            spec = _build_zn(n)
        else:
            raise ValueError(f"unknown group name {name!r}")
    _BUILTIN_CACHE[key] = spec
    return spec


def load_finite_table(path: str | Path) -> FiniteTableSpec:
    """Read a finite group from a text file.

    Format: a header line ``group <name> <order>`` followed by ``order`` rows
    of the multiplication table as whitespace-separated element indices.
    """
    path = Path(path)
    lines = [
        ln.strip()
        for ln in path.read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise InvalidGroupTable(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "group":
        raise InvalidGroupTable(f"{path}: header must be 'group <name> <order>'")
    label = header[1]
    try:
        order = int(header[2])
    except ValueError:
        raise InvalidGroupTable(f"{path}: bad order {header[2]!r}") from None
    rows = lines[1:]
    if len(rows) != order:
        raise InvalidGroupTable(
            f"{path}: expected {order} table rows, found {len(rows)}"
        )
    table = [[int(v) for v in row.split()] for row in rows]
    return finite_table_spec(label, table)


def element_from_literal(spec: GroupSpec, literal: object) -> GroupElement:
    """Parse an element literal: index/name, angle, 4-list or factor list."""
    if isinstance(spec, FiniteTableSpec):
        if isinstance(literal, bool) or not isinstance(literal, (int, str)):
            raise ValueError(f"{spec.label}: element literal must be index or name")
        return finite_element(spec, literal)
    if isinstance(spec, CircleU1Spec):
        if not isinstance(literal, (int, float)) or isinstance(literal, bool):
            raise ValueError("U1 element literal must be an angle")
        return u1_element(float(literal))
    if isinstance(spec, SpecialUnitary2Spec):
        if not isinstance(literal, (list, tuple)) or len(literal) != 4:
            raise ValueError("SU2 element literal must be a 4-list")
        return su2_element(*[float(v) for v in literal])
    if isinstance(spec, ProductSpec):
        if not isinstance(literal, (list, tuple)) or len(literal) != len(spec.factors):
            raise ValueError("product element literal must list one entry per factor")
        return product_element(
            spec,
            [element_from_literal(f, v) for f, v in zip(spec.factors, literal)],
        )
    raise TypeError(f"unknown spec {spec!r}")


def element_to_literal(a: GroupElement) -> object:
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return spec.element_names[a.data]
    if isinstance(spec, CircleU1Spec):
        return a.data
    if isinstance(spec, SpecialUnitary2Spec):
        return list(a.data)
    if isinstance(spec, ProductSpec):
        return [element_to_literal(x) for x in a.data]
    raise TypeError(f"unknown spec {spec!r}")
