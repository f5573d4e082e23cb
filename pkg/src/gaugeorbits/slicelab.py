"""Equivariant retraction onto a conjugation orbit in LG^n and slice checks.

The retraction sends a tuple x near the orbit of a base tuple to the orbit
point minimizing the summed squared bi-invariant distance.  For finite
tables the metric is discrete and the minimization is an exhaustive scan;
for U(1)/SU(2) it is the geodesic angle and the minimizer is found by
multi-start gradient-free coordinate descent.

The SU(2) distance arccos|<p,q>| is constant on the center's cosets (it
cannot see the sign of a quaternion); all residual comparisons here use the
same sign-blind convention, which keeps retraction and equivariance checks
consistent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gaugeorbits import groups, howe
from gaugeorbits.connections import Connection, holonomy, holonomy_generators, reduction_map
from gaugeorbits.census import perturb_element
from gaugeorbits.groups import (
    TWO_PI,
    CircleU1Spec,
    FiniteTableSpec,
    GroupElement,
    GroupSpec,
    ProductSpec,
    SpecialUnitary2Spec,
    SubgroupDescriptor,
)
from gaugeorbits import paths

TRUST_SAMPLE_CONJUGATORS = 64
DESCENT_TOL = 1e-10
DESCENT_MAX_EVALS = 200000


class TrustRegionExceeded(RuntimeError):
    """The point is too far from the orbit for an unambiguous projection."""


class DescentDidNotConverge(RuntimeError):
    """The coordinate descent hit its evaluation budget."""


# ---------------------------------------------------------------------------
# metric


def element_distance(a: GroupElement, b: GroupElement) -> float:
    """Bi-invariant distance; discrete for finite tables, geodesic angle for
    U(1), arccos|<p,q>| for SU(2) (sign-blind), l2-combined for products."""
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return 0.0 if a.data == b.data else 1.0
    if isinstance(spec, CircleU1Spec):
        d = abs(a.data - b.data)
        return min(d, TWO_PI - d)
    if isinstance(spec, SpecialUnitary2Spec):
        return _su2_angle(a.data, b.data)
    if isinstance(spec, ProductSpec):
        return math.sqrt(
            sum(element_distance(x, y) ** 2 for x, y in zip(a.data, b.data))
        )
    raise TypeError(f"unknown spec {spec!r}")


def _su2_angle(p: tuple, q: tuple) -> float:
    """arccos|<p,q>| evaluated through the chord length, which stays accurate
    down to ~1e-16 where the direct arccos loses half its digits."""
    minus = 0.0
    plus = 0.0
    for a, b in zip(p, q):
        minus += (a - b) * (a - b)
        plus += (a + b) * (a + b)
    half = 0.5 * math.sqrt(min(minus, plus))
    return 2.0 * math.asin(half if half < 1.0 else 1.0)


def tuple_distance(
    x: Sequence[GroupElement], y: Sequence[GroupElement]
) -> float:
    return math.sqrt(sum(element_distance(a, b) ** 2 for a, b in zip(x, y)))


def _element_residual(a: GroupElement, b: GroupElement) -> float:
    """Fine-grained sign-blind comparison, resolving far below the arccos
    metric's rounding floor near zero."""
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return 0.0 if a.data == b.data else 1.0
    if isinstance(spec, CircleU1Spec):
        d = abs(a.data - b.data)
        return min(d, TWO_PI - d)
    if isinstance(spec, SpecialUnitary2Spec):
        plus = max(abs(p + q) for p, q in zip(a.data, b.data))
        minus = max(abs(p - q) for p, q in zip(a.data, b.data))
        return min(plus, minus)
    if isinstance(spec, ProductSpec):
        return max(_element_residual(x, y) for x, y in zip(a.data, b.data))
    raise TypeError(f"unknown spec {spec!r}")


def point_residual(x: Sequence[GroupElement], y: Sequence[GroupElement]) -> float:
    if len(x) == 0:
        return 0.0
    return max(_element_residual(a, b) for a, b in zip(x, y))


def act_tuple(
    x: Sequence[GroupElement], h: GroupElement
) -> tuple[GroupElement, ...]:
    """Componentwise conjugation x -> h^-1 x h (the diagonal adjoint action)."""
    return tuple(groups.conjugate(a, h) for a in x)


# ---------------------------------------------------------------------------
# orbit points


@dataclass(frozen=True)
class OrbitPoint:
    """A base tuple in LG^n with its stabilizer and trust radius."""

    spec: GroupSpec
    base: tuple[GroupElement, ...]
    stabilizer: SubgroupDescriptor
    trust_radius: float


def orbit_point(spec: GroupSpec, base: Sequence[GroupElement]) -> OrbitPoint:
    base = tuple(base)
    for el in base:
        if el.spec != spec:
            raise groups.GroupSpecMismatch("component of a different spec")
    stab = groups.centralizer(spec, base)
    return OrbitPoint(spec, base, stab, _trust_radius(spec, base))


def _orbit_conjugators(spec: GroupSpec, rng: np.random.Generator) -> list[GroupElement]:
    if isinstance(spec, FiniteTableSpec):
        return [groups.finite_element(spec, g) for g in range(spec.order)]
    out = [groups.identity(spec)]
    for _ in range(TRUST_SAMPLE_CONJUGATORS - 1):
        out.append(groups.haar_sample(spec, rng))
    return out


def _trust_radius(spec: GroupSpec, base: tuple[GroupElement, ...]) -> float:
    """A quarter of the smallest nonzero pairwise distance between sampled
    orbit points; infinite when the orbit degenerates to a point."""
    rng = np.random.default_rng(np.random.SeedSequence((0xA5C3, 0)))
    pts = [act_tuple(base, h) for h in _orbit_conjugators(spec, rng)]
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = tuple_distance(pts[i], pts[j])
            if d > 1e-6 and d < best:
                best = d
    return math.inf if math.isinf(best) else best / 4.0


# ---------------------------------------------------------------------------
# projection


@dataclass(frozen=True)
class ProjectionResult:
    point: tuple[GroupElement, ...]
    conjugator: GroupElement  # determined up to the stabilizer
    distance: float


def _su2_conj_vec(g: tuple, b: tuple) -> tuple:
    """Quaternion g^-1 b g."""
    ginv = (g[0], -g[1], -g[2], -g[3])
    return groups._qmul(groups._qmul(ginv, b), g)


def _su2_objective(g: tuple, bases: list[tuple], targets: list[tuple]) -> float:
    total = 0.0
    for b, t in zip(bases, targets):
        d = _su2_angle(_su2_conj_vec(g, b), t)
        total += d * d
    return total


def _su2_exp(v: tuple[float, float, float]) -> tuple:
    angle = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if angle < 1e-300:
        return (1.0, 0.0, 0.0, 0.0)
    s = math.sin(angle) / angle
    return (math.cos(angle), s * v[0], s * v[1], s * v[2])


def _davenport_start(bases: list[tuple], targets: list[tuple]) -> tuple | None:
    """Closed-form alignment of the quaternion vector parts (conjugation
    rotates them), used as the primary descent start."""
    B = np.zeros((3, 3))
    weight = 0.0
    for b, t in zip(bases, targets):
        vb = np.array(b[1:])
        vt = np.array(t[1:])
        B += np.outer(vb, vt)
        weight += float(vb @ vb)
    if weight < 1e-20:
        return None
    sigma = np.trace(B)
    z = np.array([B[1, 2] - B[2, 1], B[2, 0] - B[0, 2], B[0, 1] - B[1, 0]])
    K = np.empty((4, 4))
    K[0, 0] = sigma
    K[0, 1:] = z
    K[1:, 0] = z
    K[1:, 1:] = B + B.T - sigma * np.eye(3)
    vals, vecs = np.linalg.eigh(K)
    q = vecs[:, -1]
    n = float(np.sqrt(q @ q))
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


_FIXED_STARTS = (
    (1.0, 0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 1.0),
    (0.5, 0.5, 0.5, 0.5),
    (0.5, -0.5, 0.5, -0.5),
    (0.5, 0.5, -0.5, -0.5),
    (0.5, -0.5, -0.5, 0.5),
)


def _su2_descent(bases: list[tuple], targets: list[tuple]) -> tuple[tuple, float]:
    """Best conjugator over 8 starts of compass coordinate descent."""
    starts: list[tuple] = []
    davenport = _davenport_start(bases, targets)
    if davenport is not None:
        starts.append(davenport)
    starts.extend(_FIXED_STARTS[: 8 - len(starts)])
    best_g: tuple | None = None
    best_f = math.inf
    evals = 0
    for start in starts:
        g = start
        f = _su2_objective(g, bases, targets)
        evals += 1
        step = 0.5
        while step >= DESCENT_TOL:
            improved = False
            for d in range(3):
                for sign in (1.0, -1.0):
                    v = [0.0, 0.0, 0.0]
                    v[d] = sign * step
                    cand = groups._qnormalize(groups._qmul(g, _su2_exp(tuple(v))))
                    fc = _su2_objective(cand, bases, targets)
                    evals += 1
                    if evals > DESCENT_MAX_EVALS:
                        raise DescentDidNotConverge(
                            "projection descent exceeded its evaluation budget"
                        )
                    if fc < f:
                        g, f = cand, fc
                        improved = True
            if not improved:
                step *= 0.5
        if f < best_f:
            best_g, best_f = g, f
    assert best_g is not None
    return best_g, best_f


def _project_components(
    spec: GroupSpec,
    base: list[GroupElement],
    x: list[GroupElement],
) -> GroupElement:
    """Conjugator minimizing the summed squared distance, factor-recursive."""
    if isinstance(spec, FiniteTableSpec):
        best_g = None
        best = math.inf
        for gi in range(spec.order):
            g = groups.finite_element(spec, gi)
            mismatch = sum(
                1.0
                for b, t in zip(base, x)
                if groups.conjugate(b, g).data != t.data
            )
            if mismatch < best:
                best, best_g = mismatch, g
        assert best_g is not None
        return best_g
    if isinstance(spec, CircleU1Spec):
        return groups.identity(spec)
    if isinstance(spec, SpecialUnitary2Spec):
        bases = [b.data for b in base]
        targets = [t.data for t in x]
        g, _ = _su2_descent(bases, targets)
        return GroupElement(spec, g)
    if isinstance(spec, ProductSpec):
        parts = []
        for i, f in enumerate(spec.factors):
            parts.append(
                _project_components(
                    f, [b.data[i] for b in base], [t.data[i] for t in x]
                )
            )
        return GroupElement(spec, tuple(parts))
    raise TypeError(f"unknown spec {spec!r}")


def orbit_project(
    base: OrbitPoint, x: Sequence[GroupElement]
) -> ProjectionResult:
    """Retract x onto the orbit of the base tuple.

    Raises TrustRegionExceeded when the retracted point is farther from x
    than the base point's trust radius.
    """
    x = tuple(x)
    if len(x) != len(base.base):
        raise ValueError("tuple length does not match the base point")
    for el in x:
        if el.spec != base.spec:
            raise groups.GroupSpecMismatch("component of a different spec")
    g = _project_components(base.spec, list(base.base), list(x))
    point = act_tuple(base.base, g)
    dist = tuple_distance(point, x)
    if dist > base.trust_radius:
        raise TrustRegionExceeded(
            f"distance {dist:.6g} exceeds trust radius {base.trust_radius:.6g}"
        )
    return ProjectionResult(point, g, dist)


def slice_membership(base: OrbitPoint, x: Sequence[GroupElement]) -> bool:
    """True iff the retraction maps x to the base point itself."""
    result = orbit_project(base, x)
    tol = 0.0 if isinstance(base.spec, FiniteTableSpec) else 1e-8
    return point_residual(result.point, base.base) <= tol


# ---------------------------------------------------------------------------
# property verification


@dataclass(frozen=True)
class SliceReport:
    group: str
    mode: str  # "exhaustive" or "sampled"
    points_checked: int
    retraction_max: float
    equivariance_max: float
    membership_ok: bool
    stabilizer_ok: bool
    openness_radius: float
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "mode": self.mode,
            "points_checked": self.points_checked,
            "retraction_max": self.retraction_max,
            "equivariance_max": self.equivariance_max,
            "membership_ok": self.membership_ok,
            "stabilizer_ok": self.stabilizer_ok,
            "openness_radius": self.openness_radius,
            "violations": list(self.violations),
            "passed": self.passed,
        }


def _stabilizer_monotone(
    spec: GroupSpec, x: Sequence[GroupElement], p: Sequence[GroupElement]
) -> bool:
    zx = groups.centralizer(spec, x)
    zp = groups.centralizer(spec, p)
    return groups.subgroup_contains(zp, zx)


def _all_tuples(spec: FiniteTableSpec, n: int):
    if n == 0:
        yield ()
        return
    for rest in _all_tuples(spec, n - 1):
        for g in range(spec.order):
            yield rest + (groups.finite_element(spec, g),)


def _openness_radius(
    base: OrbitPoint, noise_cap: float, trials: int, rng: np.random.Generator
) -> float:
    """Largest probe scale (by bisection under the cap) at which random
    perturbations never drop the type below the base type."""
    spec = base.spec
    poset = howe.enumerate_howe_types(spec)
    t0 = poset.class_of_descriptor(base.stabilizer)

    def scale_ok(delta: float) -> bool:
        for _ in range(trials):
            moved = tuple(perturb_element(el, delta, rng) for el in base.base)
            t1 = howe.type_of(spec, list(moved), poset)
            if not poset.leq_ids(t0.class_id, t1.class_id):
                return False
        return True

    hi = noise_cap
    if scale_ok(hi):
        return hi
    lo = 0.0
    for _ in range(20):
        mid = 0.5 * (lo + hi)
        if scale_ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def verify_slice_properties(
    base: OrbitPoint,
    trials: int = 100,
    noise: float = 1e-3,
    seed: int = 0,
    exhaustive_budget: int = 4096,
) -> SliceReport:
    """Check retraction, equivariance, slice membership and stabilizer
    monotonicity around the orbit; report residuals and the openness radius.
    """
    spec = base.spec
    n = len(base.base)
    poset = howe.enumerate_howe_types(spec)
    violations: list[str] = []
    retraction_max = 0.0
    equivariance_max = 0.0
    membership_ok = True
    stabilizer_ok = True
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x51C3)))

    finite = isinstance(spec, FiniteTableSpec)
    if finite and spec.order**n <= exhaustive_budget:
        mode = "exhaustive"
        points = list(_all_tuples(spec, n))
        checked = 0
        for x in points:
            try:
                result = orbit_project(base, x)
            except TrustRegionExceeded:
                continue  # outside the slice domain
            checked += 1
            r = point_residual(result.point, x)
            retraction_max = max(retraction_max, r)
            if r > 0.0:
                violations.append(f"retraction moved the on-orbit point {x}")
            for hi in range(spec.order):
                h = groups.finite_element(spec, hi)
                moved = orbit_project(base, act_tuple(x, h))
                e = point_residual(moved.point, act_tuple(result.point, h))
                equivariance_max = max(equivariance_max, e)
                if e > 0.0:
                    violations.append("equivariance failed on the orbit")
                    break
            member = slice_membership(base, x)
            expected = point_residual(x, base.base) == 0.0
            if member != expected:
                membership_ok = False
                violations.append("slice membership differs from the base point")
            if not _stabilizer_monotone(spec, x, result.point):
                stabilizer_ok = False
                violations.append("stabilizer monotonicity failed")
        openness = _openness_radius(base, base.trust_radius, trials, rng)
    else:
        mode = "sampled"
        checked = trials
        for _ in range(trials):
            h = groups.haar_sample(spec, rng)
            on_orbit = act_tuple(base.base, h)
            result = orbit_project(base, on_orbit)
            r = point_residual(result.point, on_orbit)
            retraction_max = max(retraction_max, r)
            if r > 1e-6:
                violations.append(f"retraction residual {r:.3g} on the orbit")

            x = tuple(perturb_element(el, noise, rng) for el in on_orbit)
            try:
                px = orbit_project(base, x)
            except TrustRegionExceeded:
                violations.append("perturbed point left the trust region")
                continue
            h2 = groups.haar_sample(spec, rng)
            moved = orbit_project(base, act_tuple(x, h2))
            e = point_residual(moved.point, act_tuple(px.point, h2))
            equivariance_max = max(equivariance_max, e)
            if e > 1e-6:
                violations.append(f"equivariance residual {e:.3g}")
            if not _stabilizer_monotone(spec, x, px.point):
                stabilizer_ok = False
                violations.append("stabilizer monotonicity failed")
            t_x = howe.type_of(spec, list(x), poset)
            t_p = poset.class_of_descriptor(
                groups.conjugate_subgroup(base.stabilizer, px.conjugator)
            )
            if not poset.leq_ids(t_p.class_id, t_x.class_id):
                violations.append("projection raised the type")
        cap = base.trust_radius if math.isfinite(base.trust_radius) else 0.5
        openness = _openness_radius(base, cap, max(10, trials // 5), rng)

    if openness <= 0.0:
        violations.append("openness probe found no positive radius")
    return SliceReport(
        spec.name,
        mode,
        checked,
        retraction_max,
        equivariance_max,
        membership_ok,
        stabilizer_ok,
        openness,
        tuple(violations),
    )


# ---------------------------------------------------------------------------
# the lifted containment behind the slice theorem (finite brute force)


def lifted_containment_counterexamples(
    c: Connection, loops: Sequence[paths.PathWord]
) -> list[dict]:
    """Search all connections agreeing with c on the given loops' holonomies
    and on all spanning-tree transports, and report any whose holonomy
    centralizer is not contained in c's.

    Only finite-table specs; the graph must be small enough to enumerate.
    """
    spec = c.spec
    if not isinstance(spec, FiniteTableSpec):
        raise TypeError("brute-force search needs a finite spec")
    g = c.graph
    edge_names = list(g.edge_names)
    if spec.order ** len(edge_names) > 200000:
        raise ValueError("graph too large for brute force")
    parent = paths.spanning_tree(g)
    tree_words = {v: paths.tree_path(g, parent, v) for v in g.vertices}
    ref_loops = reduction_map(c, loops)
    ref_tree = {v: holonomy(c, w) for v, w in tree_words.items()}
    z_ref = groups.centralizer(spec, holonomy_generators(c))
    bad = []
    for assignment in itertools.product(range(spec.order), repeat=len(edge_names)):
        values = {
            name: groups.finite_element(spec, idx)
            for name, idx in zip(edge_names, assignment)
        }
        c2 = Connection(spec, g, values)
        if any(
            holonomy(c2, w).data != e.data
            for w, e in zip(loops, ref_loops)
        ):
            continue
        if any(
            holonomy(c2, tree_words[v]).data != ref_tree[v].data
            for v in g.vertices
        ):
            continue
        z2 = groups.centralizer(spec, holonomy_generators(c2))
        if not groups.subgroup_contains(z_ref, z2):
            bad.append({"values": {k: v.data for k, v in values.items()}})
    return bad
