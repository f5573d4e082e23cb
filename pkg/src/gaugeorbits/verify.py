"""Runtime invariant suites for every module, per group.

`run_group_suite` executes randomized but seed-fixed checks of the package
invariants for one cataloged group and returns machine-readable results;
the CLI `verify` subcommand wraps it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gaugeorbits import census, connections, construct, groups, howe, paths, slicelab
from gaugeorbits.groups import FiniteTableSpec, GroupSpec


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "name": self.name,
            "ok": self.ok,
            "detail": self.detail,
        }


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, salt)))


def _random_elements(spec, rng, count):
    return [groups.haar_sample(spec, rng) for _ in range(count)]


def _random_graph(rng: np.random.Generator) -> paths.Graph:
    n_vertices = int(rng.integers(1, 4))
    vertices = [f"v{i}" for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        edges.append((f"t{i}", vertices[int(rng.integers(0, i))], vertices[i]))
    for j in range(int(rng.integers(1, 4))):
        a = vertices[int(rng.integers(0, n_vertices))]
        b = vertices[int(rng.integers(0, n_vertices))]
        edges.append((f"e{j}", a, b))
    return paths.graph(vertices, vertices[0], edges)


def _random_word(g: paths.Graph, rng: np.random.Generator, length: int):
    """A random composable raw letter walk, possibly cancelling."""
    incidence = {v: [] for v in g.vertices}
    for e in g.edges:
        incidence[e.src].append((e.name, 1))
        incidence[e.dst].append((e.name, -1))
    at = g.vertices[int(rng.integers(0, len(g.vertices)))]
    letters = []
    start = at
    for _ in range(length):
        options = incidence[at]
        if not options:
            break
        letter = options[int(rng.integers(0, len(options)))]
        letters.append(letter)
        e = g.edge(letter[0])
        at = e.dst if letter[1] > 0 else e.src
    return letters, start


# ---------------------------------------------------------------------------
# per-module suites


def check_group_core(spec: GroupSpec, seed: int) -> list[CheckResult]:
    rng = _rng(seed, 1)
    out = []
    ident = groups.identity(spec)
    ok = True
    for _ in range(50):
        a, b, c = _random_elements(spec, rng, 3)
        if not groups.element_equal(
            groups.multiply(groups.multiply(a, b), c),
            groups.multiply(a, groups.multiply(b, c)),
        ):
            ok = False
        if not groups.element_equal(groups.multiply(a, ident), a):
            ok = False
        if not groups.element_equal(
            groups.multiply(a, groups.inverse(a)), ident
        ):
            ok = False
    out.append(CheckResult("group-core", "group axioms on random triples", ok))

    full = groups.full_subgroup(spec)
    center = groups.center_subgroup(spec)
    ok = groups.subgroup_equal(groups.centralizer(spec, []), full)
    out.append(CheckResult("group-core", "Z(empty) is the whole group", ok))

    ok = True
    for _ in range(30):
        gens = _random_elements(spec, rng, int(rng.integers(0, 4)))
        z = groups.centralizer(spec, gens)
        extra = groups.haar_sample(spec, rng)
        shrunk = groups.centralizer(spec, gens + [extra])
        if not groups.subgroup_contains(z, shrunk):
            ok = False
        if not groups.subgroup_contains(z, center):
            ok = False
        h = groups.haar_sample(spec, rng)
        conj_gens = [groups.conjugate(g, h) for g in gens]
        if not groups.subgroup_equal(
            groups.centralizer(spec, conj_gens), groups.conjugate_subgroup(z, h)
        ):
            ok = False
    out.append(
        CheckResult(
            "group-core", "centralizer monotonicity and conjugation covariance", ok
        )
    )

    ok = True
    for _ in range(30):
        gens = _random_elements(spec, rng, int(rng.integers(0, 7)))
        kept = groups.reduce_generators(spec, gens)
        if not groups.subgroup_equal(
            groups.centralizer(spec, kept), groups.centralizer(spec, gens)
        ):
            ok = False
        chain = groups.full_subgroup(spec)
        for u in kept:
            nxt = groups.subgroup_intersect(chain, groups.centralizer(spec, [u]))
            if groups.subgroup_equal(nxt, chain):
                ok = False
            chain = nxt
    out.append(
        CheckResult("group-core", "generator reduction preserves the centralizer", ok)
    )
    return out


def check_howe(spec: GroupSpec, seed: int) -> list[CheckResult]:
    rng = _rng(seed, 2)
    out = []
    poset = howe.enumerate_howe_types(spec)
    ok = all(
        groups.subgroup_equal(
            groups.centralizer_of_subgroup(
                groups.centralizer_of_subgroup(t.representative)
            ),
            t.representative,
        )
        for t in poset
    )
    out.append(CheckResult("howe-poset", "representatives are bicommutants", ok))

    ok = all(
        poset.leq_ids(poset.t_min.class_id, t.class_id)
        and poset.leq_ids(t.class_id, poset.t_max.class_id)
        for t in poset
    )
    out.append(CheckResult("howe-poset", "t_min <= t <= t_max", ok))

    ok = True
    for _ in range(20):
        gens = _random_elements(spec, rng, int(rng.integers(0, 3)))
        t = howe.type_of(spec, gens, poset)
        h = groups.haar_sample(spec, rng)
        t2 = howe.type_of(spec, [groups.conjugate(g, h) for g in gens], poset)
        if t.class_id != t2.class_id:
            ok = False
    out.append(CheckResult("howe-poset", "type is conjugation invariant", ok))

    if isinstance(spec, FiniteTableSpec) and spec.order <= 8:
        import itertools

        brute = set()
        elements = list(range(spec.order))
        for r in range(spec.order + 1):
            for subset in itertools.combinations(elements, r):
                d = groups.centralizer(
                    spec, [groups.finite_element(spec, i) for i in subset]
                )
                brute.add(d.data)
        enumerated = set(howe._finite_howe_masks(spec))
        out.append(
            CheckResult(
                "howe-poset",
                "enumeration matches the all-subsets oracle",
                brute == enumerated,
                f"{len(brute)} Howe subgroups",
            )
        )
    return out


def check_paths(seed: int) -> list[CheckResult]:
    rng = _rng(seed, 3)
    out = []
    ok_reduce = True
    ok_loops = True
    for _ in range(40):
        g = _random_graph(rng)
        letters, start = _random_word(g, rng, int(rng.integers(0, 12)))
        w = paths.word(g, letters, start)
        # random-order cancellation must give the same normal form
        raw = list(letters)
        while True:
            pairs = [
                i
                for i in range(len(raw) - 1)
                if raw[i][0] == raw[i + 1][0] and raw[i][1] == -raw[i + 1][1]
            ]
            if not pairs:
                break
            i = pairs[int(rng.integers(0, len(pairs)))]
            del raw[i : i + 2]
        if tuple(raw) != w.letters:
            ok_reduce = False
        if paths.word(g, w.letters, w.start).letters != w.letters:
            ok_reduce = False
        if paths.is_connected(g):
            loops = paths.fundamental_loops(g)
            if any(not lp.is_loop or lp.start != g.base for lp in loops):
                ok_loops = False
    out.append(CheckResult("path-groupoid", "reduction is order independent", ok_reduce))
    out.append(CheckResult("path-groupoid", "fundamental words are loops at the base", ok_loops))

    ok = True
    for _ in range(30):
        g = _random_graph(rng)
        la, sa = _random_word(g, rng, 8)
        a = paths.word(g, la, sa)
        b = None
        for _try in range(10):
            lb, sb = _random_word(g, rng, 8)
            if sb == a.end:
                b = paths.word(g, lb, sb)
                break
        if b is None:
            continue
        left = paths.compose(a, b)
        if paths.compose(left, paths.invert(b)).letters != a.letters:
            ok = False
        if paths.compose(a, paths.invert(a)).letters != ():
            ok = False
    out.append(CheckResult("path-groupoid", "composition and inversion laws", ok))
    return out


def check_connections(spec: GroupSpec, seed: int) -> list[CheckResult]:
    rng = _rng(seed, 4)
    out = []
    poset = howe.enumerate_howe_types(spec)
    ok_hom = True
    ok_action = True
    ok_equiv = True
    ok_type = True
    ok_minor = True
    ok_stab = True
    for _ in range(25):
        g = _random_graph(rng)
        if not paths.is_connected(g):
            continue
        c = connections.random_connection(g, spec, rng)
        loops = paths.fundamental_loops(g)
        # homomorphism along composable words
        la, sa = _random_word(g, rng, 6)
        a = paths.word(g, la, sa)
        for _try in range(10):
            lb, sb = _random_word(g, rng, 6)
            if sb == a.end:
                b = paths.word(g, lb, sb)
                both = paths.compose(a, b)
                if not groups.element_equal(
                    connections.holonomy(c, both),
                    groups.multiply(
                        connections.holonomy(c, a), connections.holonomy(c, b)
                    ),
                ):
                    ok_hom = False
                break
        gauge = connections.random_gauge(g, spec, rng)
        acted = connections.act(c, gauge)
        gauge2 = connections.random_gauge(g, spec, rng)
        lhs = connections.act(acted, gauge2)
        rhs = connections.act(c, connections.pointwise_product(gauge, gauge2))
        if any(
            not groups.element_equal(lhs.value(n), rhs.value(n))
            for n in g.edge_names
        ):
            ok_action = False
        if loops:
            gm = gauge.value(g.base)
            phi_acted = connections.reduction_map(acted, loops)
            phi = connections.reduction_map(c, loops)
            if any(
                not groups.element_equal(x, groups.conjugate(y, gm))
                for x, y in zip(phi_acted, phi)
            ):
                ok_equiv = False
        t = connections.orbit_type(c, poset)
        if connections.orbit_type(acted, poset).class_id != t.class_id:
            ok_type = False
        subset = [lp for lp in loops if rng.random() < 0.5]
        t_red = howe.type_of(spec, list(connections.reduction_map(c, subset)), poset)
        if not howe.type_leq(t_red, t):
            ok_minor = False
        stab = groups.centralizer(spec, connections.holonomy_generators(c))
        z = next(
            (el for el in _random_elements(spec, rng, 5)
             if groups.subgroup_member(stab, el)),
            groups.identity(spec),
        )
        fix = connections.stabilizer_transport(c, z)
        fixed = connections.act(c, fix)
        if any(
            not groups.element_equal(fixed.value(n), c.value(n))
            for n in g.edge_names
        ):
            ok_stab = False
    out.append(CheckResult("lattice-connection", "holonomy is a homomorphism", ok_hom))
    out.append(CheckResult("lattice-connection", "gauge action composes", ok_action))
    out.append(
        CheckResult("lattice-connection", "reduction map is equivariant", ok_equiv)
    )
    out.append(
        CheckResult("lattice-connection", "orbit type is gauge invariant", ok_type)
    )
    out.append(
        CheckResult("lattice-connection", "reduction maps are type-minorifying", ok_minor)
    )
    out.append(
        CheckResult("lattice-connection", "stabilizer transport fixes the connection", ok_stab)
    )
    return out


def check_construct(spec: GroupSpec, seed: int) -> list[CheckResult]:
    rng = _rng(seed, 5)
    out = []
    poset = howe.enumerate_howe_types(spec)
    ok = True
    for t in poset:
        w = construct.nonempty_stratum_witness(spec, t)
        if connections.orbit_type(w, poset).class_id != t.class_id:
            ok = False
    out.append(
        CheckResult("type-constructor", "every stratum has a witness", ok)
    )

    ok = True
    for _ in range(10):
        g = _random_graph(rng)
        if not paths.is_connected(g):
            continue
        c = connections.random_connection(g, spec, rng)
        t0 = connections.orbit_type(c, poset)
        targets = [t for t in poset if poset.leq_ids(t0.class_id, t.class_id)]
        t = targets[int(rng.integers(0, len(targets)))]
        bigger = construct.realize_type(c, [g], t)
        if connections.orbit_type(bigger, poset).class_id != t.class_id:
            ok = False
        back = connections.restrict(bigger, g)
        if any(
            not groups.element_equal(back.value(n), c.value(n))
            for n in g.edge_names
        ):
            ok = False
    out.append(
        CheckResult(
            "type-constructor", "realized types are exact and restrictions kept", ok
        )
    )
    return out


def check_census(spec: GroupSpec, seed: int) -> list[CheckResult]:
    out = []
    poset = howe.enumerate_howe_types(spec)
    if isinstance(spec, FiniteTableSpec):
        exact = census.exact_census(spec, 2)
        mc = census.mc_census(spec, 2, 20000, seed=seed)
        ok = True
        for e_exact, e_mc in zip(exact.entries, mc.entries):
            sigma = math.sqrt(
                float(e_exact.fraction)
                * (1.0 - float(e_exact.fraction))
                / mc.total
            )
            if abs(e_mc.value - float(e_exact.fraction)) > 3.0 * sigma + 1e-12:
                ok = False
        out.append(
            CheckResult("measure-census", "exact and MC censuses agree to 3 sigma", ok)
        )
        report = exact
    else:
        report = census.mc_census(spec, 2, 5000, seed=seed)
        ok = abs(report.value_sum() - 1.0) <= 1e-12
        out.append(CheckResult("measure-census", "MC frequencies sum to one", ok))

    strat = census.check_stratification(report, poset, seed=seed)
    out.append(
        CheckResult(
            "measure-census",
            "stratification axioms",
            strat.passed,
            "; ".join(strat.violations[:3]),
        )
    )

    if isinstance(spec, FiniteTableSpec):
        target = groups.finite_element(spec, spec.order - 1)
        res = census.noncomplete_measure(
            spec,
            lambda el: el.data == target.data,
            Fraction(1, spec.order),
            2,
        )
        expected = Fraction(spec.order - 1, spec.order) ** 2
        ok = res.measured_fraction == expected
        out.append(
            CheckResult("measure-census", "avoidance law is exact", ok)
        )
    return out


def check_slicelab(spec: GroupSpec, seed: int) -> list[CheckResult]:
    rng = _rng(seed, 6)
    out = []
    base_tuple = [groups.haar_sample(spec, rng) for _ in range(2)]
    base = slicelab.orbit_point(spec, base_tuple)
    rep = slicelab.verify_slice_properties(base, trials=25, noise=1e-3, seed=seed)
    out.append(
        CheckResult(
            "slice-lab",
            "retraction, equivariance, membership, monotonicity",
            rep.passed,
            "; ".join(rep.violations[:3]),
        )
    )
    if isinstance(spec, FiniteTableSpec) and spec.order <= 8:
        g = paths.graph(
            ["m", "v"], "m", [("t", "m", "v"), ("a", "m", "m"), ("b", "v", "v")]
        )
        c = connections.random_connection(g, spec, rng)
        loops = paths.fundamental_loops(g)
        gens = connections.holonomy_generators(c)
        kept = groups.reduce_generators(spec, gens)
        chosen = [
            lp
            for lp, gen in zip(loops, gens)
            if any(gen.data == k.data for k in kept)
        ]
        bad = slicelab.lifted_containment_counterexamples(c, chosen)
        out.append(
            CheckResult(
                "slice-lab",
                "lifted stabilizer containment has no counterexample",
                not bad,
                f"{len(bad)} counterexamples",
            )
        )
    return out


def run_group_suite(group_name: str, seed: int = 0) -> list[CheckResult]:
    spec = groups.group_by_name(group_name)
    results: list[CheckResult] = []
    results.extend(check_group_core(spec, seed))
    results.extend(check_howe(spec, seed))
    results.extend(check_paths(seed))
    results.extend(check_connections(spec, seed))
    results.extend(check_construct(spec, seed))
    results.extend(check_census(spec, seed))
    results.extend(check_slicelab(spec, seed))
    return results
