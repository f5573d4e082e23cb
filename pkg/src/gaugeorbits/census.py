"""Exact and Monte Carlo measurement of stratum sizes under product Haar.

Sampling is chunked; every chunk derives an independent RNG stream from
(seed, chunk index) and chunk counts merge by summation, so results are
bit-identical for a fixed (seed, chunk_size) regardless of worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from gaugeorbits import _kernels, construct, groups, howe
from gaugeorbits.connections import orbit_type, restrict
from gaugeorbits.groups import (
    TAU_AXIS,
    CircleU1Spec,
    FiniteTableSpec,
    GroupElement,
    GroupSpec,
    ProductSpec,
    SpecialUnitary2Spec,
    SubgroupDescriptor,
)
from gaugeorbits.howe import TypePoset

DEFAULT_BUDGET = 10_000_000
DEFAULT_CHUNK = 8192


class CensusBudgetExceeded(RuntimeError):
    """The exact enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class CensusEntry:
    class_id: int
    label: str
    count: int
    value: float
    fraction: Fraction | None  # exact mode only
    stderr: float | None       # mc mode only


@dataclass(frozen=True)
class CensusReport:
    group: str
    n_loops: int
    mode: str  # "exact" or "mc"
    total: int
    seed: int | None
    chunk_size: int | None
    entries: tuple[CensusEntry, ...]

    def entry(self, class_id: int) -> CensusEntry:
        return self.entries[class_id]

    def value_sum(self) -> float:
        return float(sum(e.value for e in self.entries))

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "loops": self.n_loops,
            "mode": self.mode,
            "total": self.total,
            "seed": self.seed,
            "chunk_size": self.chunk_size,
            "classes": [
                {
                    "class_id": e.class_id,
                    "label": e.label,
                    "count": e.count,
                    "value": e.value,
                    "fraction": (
                        [e.fraction.numerator, e.fraction.denominator]
                        if e.fraction is not None
                        else None
                    ),
                    "stderr": e.stderr,
                }
                for e in self.entries
            ],
        }

    def csv_rows(self) -> list[list[object]]:
        rows: list[list[object]] = [
            ["class_id", "label", "count", "value", "stderr"]
        ]
        for e in self.entries:
            rows.append([e.class_id, e.label, e.count, e.value, e.stderr])
        return rows


def _require_small_finite(spec: FiniteTableSpec) -> None:
    if spec.order > 64:
        raise ValueError("finite census kernels support order <= 64")


def _cent_mask_array(spec: FiniteTableSpec) -> np.ndarray:
    return np.array(spec.element_centralizer_masks, dtype=np.uint64)


# ---------------------------------------------------------------------------
# exact census


def exact_census(
    spec: GroupSpec, n_loops: int, budget: int = DEFAULT_BUDGET
) -> CensusReport:
    """Exact rational fraction of n-tuples per orbit type, by counting all
    |G|^n configurations (merged over equal centralizer masks)."""
    if not isinstance(spec, FiniteTableSpec):
        raise TypeError("exact_census needs a finite multiplication-table spec")
    if n_loops < 0:
        raise ValueError("loop count must be >= 0")
    _require_small_finite(spec)
    total = spec.order**n_loops
    if total > budget:
        raise CensusBudgetExceeded(
            f"{spec.order}^{n_loops} = {total} exceeds the budget {budget}"
        )
    poset = howe.enumerate_howe_types(spec)
    cent = _cent_mask_array(spec)
    masks = np.array([spec.full_mask], dtype=np.uint64)
    counts = np.array([1], dtype=np.int64)
    for _ in range(n_loops):
        expanded = (masks[:, None] & cent[None, :]).ravel()
        weights = np.repeat(counts, spec.order)
        masks, inverse = np.unique(expanded, return_inverse=True)
        counts = np.zeros(len(masks), dtype=np.int64)
        np.add.at(counts, inverse, weights)
    per_class = [0] * len(poset)
    for m, c in zip(masks.tolist(), counts.tolist()):
        t = poset.class_of_descriptor(
            SubgroupDescriptor(spec, groups.KIND_MASK, int(m))
        )
        per_class[t.class_id] += c
    entries = tuple(
        CensusEntry(
            t.class_id,
            t.label,
            per_class[t.class_id],
            float(Fraction(per_class[t.class_id], total)),
            Fraction(per_class[t.class_id], total),
            None,
        )
        for t in poset
    )
    return CensusReport(spec.name, n_loops, "exact", total, None, None, entries)


# ---------------------------------------------------------------------------
# Monte Carlo census


@lru_cache(maxsize=None)
def _product_class_lut(spec: ProductSpec) -> np.ndarray:
    """Linear index over factor class ids -> product class id."""
    poset = howe.enumerate_howe_types(spec)
    factor_posets = [howe.enumerate_howe_types(f) for f in spec.factors]
    shape = tuple(len(fp) for fp in factor_posets)
    lut = np.empty(shape, dtype=np.int64)
    for multi in np.ndindex(shape):
        rep = SubgroupDescriptor(
            spec,
            groups.KIND_PRODUCT,
            tuple(fp.types[i].representative for fp, i in zip(factor_posets, multi)),
        )
        lut[multi] = poset.class_of_descriptor(rep).class_id
    return lut.ravel()


@lru_cache(maxsize=None)
def _finite_mask_to_class(spec: FiniteTableSpec) -> dict[int, int]:
    poset = howe.enumerate_howe_types(spec)
    out = {}
    for m in howe._finite_howe_masks(spec):
        t = poset.class_of_descriptor(SubgroupDescriptor(spec, groups.KIND_MASK, m))
        out[m] = t.class_id
    return out


@lru_cache(maxsize=None)
def _su2_kind_lut(spec: SpecialUnitary2Spec) -> np.ndarray:
    poset = howe.enumerate_howe_types(spec)
    by_kind = {t.representative.kind: t.class_id for t in poset}
    return np.array(
        [by_kind[groups.KIND_FULL], by_kind[groups.KIND_TORUS], by_kind[groups.KIND_CENTER]],
        dtype=np.int64,
    )


def _sample_class_ids(
    spec: GroupSpec, n: int, m: int, rng: np.random.Generator
) -> np.ndarray:
    """Orbit-type class id of each of m Haar-random n-tuples."""
    if isinstance(spec, FiniteTableSpec):
        _require_small_finite(spec)
        idx = rng.integers(0, spec.order, size=(m, n), dtype=np.int64)
        masks = _kernels.tuple_masks(_cent_mask_array(spec), idx, spec.full_mask)
        mask_to_class = _finite_mask_to_class(spec)
        uniq, inverse = np.unique(masks, return_inverse=True)
        ids = np.array([mask_to_class[int(u)] for u in uniq], dtype=np.int64)
        return ids[inverse]
    if isinstance(spec, SpecialUnitary2Spec):
        q = rng.standard_normal((m, n, 4))
        n2 = (q * q).sum(axis=2)
        tiny = n2 < 1e-300
        if tiny.any():  # essentially impossible, keeps normalization total
            q[tiny] = np.array([1.0, 0.0, 0.0, 0.0])
            n2 = (q * q).sum(axis=2)
        q /= np.sqrt(n2)[:, :, None]
        kinds = _kernels.su2_classify(q, TAU_AXIS)
        return _su2_kind_lut(spec)[kinds]
    if isinstance(spec, CircleU1Spec):
        return np.zeros(m, dtype=np.int64)
    if isinstance(spec, ProductSpec):
        factor_posets = [howe.enumerate_howe_types(f) for f in spec.factors]
        shape = tuple(len(fp) for fp in factor_posets)
        linear = np.zeros(m, dtype=np.int64)
        for f, fp in zip(spec.factors, factor_posets):
            linear = linear * len(fp) + _sample_class_ids(f, n, m, rng)
        return _product_class_lut(spec)[linear]
    raise TypeError(f"unknown spec {spec!r}")


def _chunk_spans(samples: int, chunk_size: int) -> list[int]:
    spans = []
    left = samples
    while left > 0:
        take = min(chunk_size, left)
        spans.append(take)
        left -= take
    return spans


def _mc_chunk_counts(args: tuple) -> np.ndarray:
    spec, n_loops, size, seed, chunk_index, n_classes = args
    rng = np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))
    ids = _sample_class_ids(spec, n_loops, size, rng)
    return np.bincount(ids, minlength=n_classes)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("GAUGEORBITS_WORKERS")
    return max(1, int(env)) if env else 1


def mc_census(
    spec: GroupSpec,
    n_loops: int,
    samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int | None = None,
) -> CensusReport:
    """Haar Monte Carlo frequency per orbit type with binomial standard errors."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if n_loops < 0:
        raise ValueError("loop count must be >= 0")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    poset = howe.enumerate_howe_types(spec)
    n_classes = len(poset)
    spans = _chunk_spans(samples, chunk_size)
    jobs = [
        (spec, n_loops, size, seed, index, n_classes)
        for index, size in enumerate(spans)
    ]
    nworkers = _worker_count(workers)
    counts = np.zeros(n_classes, dtype=np.int64)
    if nworkers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for chunk_counts in pool.map(_mc_chunk_counts, jobs):
                counts += chunk_counts
    else:
        for job in jobs:
            counts += _mc_chunk_counts(job)
    entries = []
    for t in poset:
        c = int(counts[t.class_id])
        freq = c / samples
        stderr = math.sqrt(freq * (1.0 - freq) / samples)
        entries.append(CensusEntry(t.class_id, t.label, c, freq, None, stderr))
    return CensusReport(
        spec.name, n_loops, "mc", samples, seed, chunk_size, tuple(entries)
    )


# ---------------------------------------------------------------------------
# non-complete connections: the avoidance law


@dataclass(frozen=True)
class AvoidanceResult:
    """Measured mass of {all k holonomies avoid U} against (1 - mu(U))^k."""

    measured: float
    measured_fraction: Fraction | None
    expected: float
    stderr: float | None
    k: int
    samples: int | None
    seed: int | None


def noncomplete_measure(
    spec: GroupSpec,
    in_u: Callable[[GroupElement], bool],
    mu_u: float | Fraction,
    k: int,
    samples: int | None = None,
    seed: int | None = None,
    chunk_size: int = DEFAULT_CHUNK,
) -> AvoidanceResult:
    """Measure of the k-loop connections whose holonomies all avoid U."""
    mu = Fraction(mu_u) if isinstance(mu_u, (int, Fraction)) else float(mu_u)
    if not 0.0 < float(mu) <= 1.0:
        raise ValueError("need mu(U) in (0, 1]")
    if k < 0:
        raise ValueError("loop count must be >= 0")
    expected = float((1 - Fraction(mu)) ** k) if isinstance(mu, Fraction) else (
        (1.0 - mu) ** k
    )
    if samples is None:
        if not isinstance(spec, FiniteTableSpec):
            raise TypeError("exact avoidance needs a finite spec; pass samples")
        avoid = sum(
            0 if in_u(groups.finite_element(spec, g)) else 1
            for g in range(spec.order)
        )
        frac = Fraction(avoid, spec.order) ** k
        return AvoidanceResult(float(frac), frac, expected, None, k, None, None)
    if seed is None:
        raise ValueError("Monte Carlo avoidance needs a seed")
    hits = 0
    for index, size in enumerate(_chunk_spans(samples, chunk_size)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
        for _ in range(size):
            elements = [groups.haar_sample(spec, rng) for _ in range(k)]
            if all(not in_u(el) for el in elements):
                hits += 1
    freq = hits / samples
    stderr = math.sqrt(freq * (1.0 - freq) / samples)
    return AvoidanceResult(freq, None, expected, stderr, k, samples, seed)


# ---------------------------------------------------------------------------
# stratification axioms on finite data


def perturb_element(
    a: GroupElement, delta: float, rng: np.random.Generator
) -> GroupElement:
    """Tangent-space Gaussian noise of magnitude delta; finite parts unchanged."""
    spec = a.spec
    if isinstance(spec, FiniteTableSpec):
        return a
    if isinstance(spec, CircleU1Spec):
        return groups.u1_element(a.data + delta * float(rng.standard_normal()))
    if isinstance(spec, SpecialUnitary2Spec):
        v = delta * rng.standard_normal(3)
        angle = float(np.sqrt(v @ v))
        if angle < 1e-300:
            return a
        s = math.sin(angle) / angle
        step = (math.cos(angle), s * v[0], s * v[1], s * v[2])
        return groups.multiply(a, GroupElement(spec, step))
    if isinstance(spec, ProductSpec):
        return GroupElement(
            spec, tuple(perturb_element(x, delta, rng) for x in a.data)
        )
    raise TypeError(f"unknown spec {spec!r}")


def _has_continuous_factor(spec: GroupSpec) -> bool:
    if isinstance(spec, (CircleU1Spec, SpecialUnitary2Spec)):
        return True
    if isinstance(spec, ProductSpec):
        return any(_has_continuous_factor(f) for f in spec.factors)
    return False


@dataclass(frozen=True)
class StratificationReport:
    group: str
    countable: bool
    covering_ok: bool
    disjoint_ok: bool
    closure_ok: bool
    regularity_ok: bool
    probe_ok: bool | None
    probe_scales: tuple[float, ...]
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (
            self.countable
            and self.covering_ok
            and self.disjoint_ok
            and self.closure_ok
            and self.regularity_ok
            and self.probe_ok is not False
        )

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "countable": self.countable,
            "covering_ok": self.covering_ok,
            "disjoint_ok": self.disjoint_ok,
            "closure_ok": self.closure_ok,
            "regularity_ok": self.regularity_ok,
            "probe_ok": self.probe_ok,
            "probe_scales": list(self.probe_scales),
            "violations": list(self.violations),
            "passed": self.passed,
        }


def _reachability_checks(poset: TypePoset, violations: list[str]) -> bool:
    """Realize-oracle surrogate of the closure law: a type-t_from witness can
    be extended (restrictions untouched) to type t_to iff t_from <= t_to."""
    ok = True
    for t_from in poset:
        witness = construct.nonempty_stratum_witness(poset.spec, t_from)
        base_restriction = restrict(witness, witness.graph)
        for t_to in poset:
            expected = poset.leq_ids(t_from.class_id, t_to.class_id)
            try:
                bigger = construct.realize_type(witness, [witness.graph], t_to)
                reached = True
            except construct.TypeNotReachable:
                reached = False
            if reached != expected:
                ok = False
                violations.append(
                    f"closure: reach({t_from.label}->{t_to.label}) = {reached}, "
                    f"poset says {expected}"
                )
                continue
            if reached:
                got = orbit_type(bigger, poset)
                if got.class_id != t_to.class_id:
                    ok = False
                    violations.append(
                        f"closure: realized type {got.label} != {t_to.label}"
                    )
                kept = restrict(bigger, witness.graph)
                if any(
                    not groups.element_equal(
                        kept.value(n), base_restriction.value(n)
                    )
                    for n in witness.graph.edge_names
                ):
                    ok = False
                    violations.append(
                        f"closure: restriction changed for {t_from.label}->{t_to.label}"
                    )
    return ok


def _probe_points(
    spec: GroupSpec, n_loops: int, rng: np.random.Generator
) -> list[tuple[GroupElement, ...]]:
    points = [
        tuple(groups.haar_sample(spec, rng) for _ in range(n_loops)),
        tuple(groups.identity(spec) for _ in range(n_loops)),
    ]
    if isinstance(spec, SpecialUnitary2Spec) and n_loops >= 1:
        # all components rotate about the x axis: a torus-type point
        points.append(tuple(
            GroupElement(spec, (math.cos(0.2 * (i + 1)),
                                math.sin(0.2 * (i + 1)), 0.0, 0.0))
            for i in range(n_loops)
        ))
    return points


def _openness_probe(
    poset: TypePoset,
    n_loops: int,
    seed: int,
    trials: int,
    scales: Sequence[float],
    violations: list[str],
) -> bool:
    """Perturbing a type-t tuple at small scales must only yield types >= t."""
    spec = poset.spec
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x9E3779B9)))
    ok = True
    for point in _probe_points(spec, n_loops, rng):
        t0 = howe.type_of(spec, list(point), poset)
        for delta in scales:
            for _ in range(trials):
                moved = tuple(perturb_element(x, delta, rng) for x in point)
                t1 = howe.type_of(spec, list(moved), poset)
                if not poset.leq_ids(t0.class_id, t1.class_id):
                    ok = False
                    violations.append(
                        f"probe: type {t1.label} < {t0.label} at scale {delta}"
                    )
    return ok


def check_stratification(
    report: CensusReport,
    poset: TypePoset,
    seed: int = 0,
    probe_trials: int = 20,
    probe_scales: Sequence[float] = (1e-2, 1e-4, 1e-6),
) -> StratificationReport:
    """Verify the stratification axioms on the finite data of a census."""
    violations: list[str] = []
    countable = True  # every catalog poset is finite
    seen_ids = [e.class_id for e in report.entries]
    disjoint_ok = len(seen_ids) == len(set(seen_ids)) and set(seen_ids) == {
        t.class_id for t in poset
    }
    if not disjoint_ok:
        violations.append("cells do not match the poset classes one-to-one")
    if report.mode == "exact":
        covering_ok = (
            sum(e.fraction for e in report.entries) == 1
            and sum(e.count for e in report.entries) == report.total
        )
    else:
        covering_ok = abs(report.value_sum() - 1.0) <= 1e-12
    if not covering_ok:
        violations.append("cell measures do not sum to one")
    closure_ok = _reachability_checks(poset, violations)
    regularity_ok = True
    for t1 in poset:
        for t2 in poset:
            if t1.class_id == t2.class_id:
                continue
            if poset.leq_ids(t2.class_id, t1.class_id) and poset.leq_ids(
                t1.class_id, t2.class_id
            ):
                regularity_ok = False
                violations.append(
                    f"regularity: {t1.label} and {t2.label} mutually below"
                )
    probe_ok: bool | None = None
    if _has_continuous_factor(poset.spec):
        probe_ok = _openness_probe(
            poset, report.n_loops, seed, probe_trials, probe_scales, violations
        )
    return StratificationReport(
        report.group,
        countable,
        covering_ok,
        disjoint_ok,
        closure_ok,
        regularity_ok,
        probe_ok,
        tuple(probe_scales),
        tuple(violations),
    )
