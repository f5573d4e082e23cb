"""Group catalog arithmetic, Haar sampling, centralizers, generator reduction."""

from __future__ import annotations

import math

import numpy as np
import pytest

from gaugeorbits import groups as G
from helpers import (
    S3_PERMS,
    mask_to_set,
    rng,
    s3_compose,
    s3_inverse,
    table_centralizer,
)

S3 = G.group_by_name("S3")
Q8 = G.group_by_name("Q8")
Z4 = G.group_by_name("Z4")


# ---------------------------------------------------------------------------
# multiply / conjugate


def test_s3_multiply_matches_permutation_oracle():
    for a in S3_PERMS:
        for b in S3_PERMS:
            got = G.multiply(G.finite_element(S3, a), G.finite_element(S3, b))
            assert G.element_label(got) == s3_compose(a, b)


def test_s3_pinned_product():
    got = G.multiply(G.finite_element(S3, "(12)"), G.finite_element(S3, "(123)"))
    assert G.element_label(got) == "(23)"


def test_identity_law_all_catalogs():
    r = rng(0)
    for spec in [S3, Q8, G.U1, G.SU2, G.group_by_name("SU2 x Z2")]:
        for _ in range(5):
            g = G.haar_sample(spec, r)
            assert G.element_equal(G.multiply(g, G.identity(spec)), g)
            assert G.element_equal(G.multiply(G.identity(spec), g), g)


def test_u1_angle_addition_wraps():
    got = G.multiply(G.u1_element(1.0), G.u1_element(5.5))
    assert math.isclose(got.data, 6.5 - 2 * math.pi, abs_tol=1e-12)


def test_multiply_spec_mismatch():
    with pytest.raises(G.GroupSpecMismatch):
        G.multiply(G.finite_element(S3, "e"), G.finite_element(Z4, 0))


def test_conjugate_by_identity():
    r = rng(1)
    for spec in [S3, G.SU2, G.U1]:
        g = G.haar_sample(spec, r)
        assert G.element_equal(G.conjugate(g, G.identity(spec)), g)


def test_s3_pinned_conjugation():
    got = G.conjugate(G.finite_element(S3, "(123)"), G.finite_element(S3, "(12)"))
    assert G.element_label(got) == "(132)"


def test_conjugate_matches_oracle():
    # h^-1 g h over the independent permutation composition
    for g in S3_PERMS:
        for h in S3_PERMS:
            got = G.conjugate(G.finite_element(S3, g), G.finite_element(S3, h))
            want = s3_compose(s3_compose(s3_inverse(h), g), h)
            assert G.element_label(got) == want


def test_conjugate_by_central_element():
    minus_one = G.finite_element(Q8, "-1")
    for name in Q8.element_names:
        g = G.finite_element(Q8, name)
        assert G.element_equal(G.conjugate(g, minus_one), g)


# ---------------------------------------------------------------------------
# group axioms


@pytest.mark.parametrize("spec", [S3, Q8, Z4, G.group_by_name("Z2")])
def test_finite_axioms_exhaustive(spec):
    n = spec.order
    e = spec.identity_index
    for a in range(n):
        assert spec.table[a][e] == a and spec.table[e][a] == a
        inv = spec.inverse_table[a]
        assert spec.table[a][inv] == e and spec.table[inv][a] == e
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert (
                    spec.table[spec.table[a][b]][c] == spec.table[a][spec.table[b][c]]
                )


def test_continuous_axioms_random_triples():
    r = rng(2)
    for spec in [G.U1, G.SU2]:
        for _ in range(200):
            a, b, c = (G.haar_sample(spec, r) for _ in range(3))
            lhs = G.multiply(G.multiply(a, b), c)
            rhs = G.multiply(a, G.multiply(b, c))
            assert G.element_equal(lhs, rhs)
            assert G.element_equal(G.multiply(a, G.inverse(a)), G.identity(spec))


def test_bad_table_rejected():
    with pytest.raises(G.InvalidGroupTable):
        G.finite_table_spec("bad", [[0, 1], [1, 1]])


def test_quaternion_norm_stays_unit():
    r = rng(3)
    g = G.haar_sample(G.SU2, r)
    acc = g
    for _ in range(1000):
        acc = G.multiply(acc, g)
    norm = math.sqrt(sum(c * c for c in acc.data))
    assert abs(norm - 1.0) <= 10 * G.TAU_NORM


# ---------------------------------------------------------------------------
# haar sampling


def test_haar_finite_frequencies():
    r = rng(4)
    n = 40000
    counts = np.zeros(4)
    for _ in range(n):
        counts[G.haar_sample(Z4, r).data] += 1
    sigma = math.sqrt(0.25 * 0.75 / n)
    assert np.all(np.abs(counts / n - 0.25) <= 3 * sigma)


def test_haar_su2_component_means():
    r = rng(5)
    n = 40000
    acc = np.zeros(4)
    for _ in range(n):
        acc += np.array(G.haar_sample(G.SU2, r).data)
    sigma = 0.5 / math.sqrt(n)  # component variance on the 3-sphere is 1/4
    assert np.all(np.abs(acc / n) <= 3 * sigma)


def test_haar_u1_cosine_mean():
    r = rng(6)
    n = 40000
    acc = sum(math.cos(G.haar_sample(G.U1, r).data) for _ in range(n))
    sigma = math.sqrt(0.5 / n)
    assert abs(acc / n) <= 3 * sigma


def test_haar_deterministic_under_seed():
    a = [G.haar_sample(G.SU2, rng(7)).data for _ in range(3)]
    b = [G.haar_sample(G.SU2, rng(7)).data for _ in range(3)]
    assert a == b


# ---------------------------------------------------------------------------
# centralizers


def test_centralizer_empty_is_full():
    for spec in [S3, Q8, G.U1, G.SU2, G.group_by_name("SU2 x Z2")]:
        assert G.subgroup_equal(G.centralizer(spec, []), G.full_subgroup(spec))


def test_centralizer_s3_transposition():
    z = G.centralizer(S3, [G.finite_element(S3, "(12)")])
    assert mask_to_set(z.data) == table_centralizer(S3, [S3.index_of("(12)")])
    assert G.subgroup_label(z) == "{e,(12)}"


def test_centralizer_su2_two_axes_is_center():
    z = G.centralizer(
        G.SU2, [G.su2_element(0, 1, 0, 0), G.su2_element(0, 0, 1, 0)]
    )
    assert z.kind == G.KIND_CENTER
    # sampled commutation check: nothing noncentral commutes with both
    r = rng(8)
    for _ in range(200):
        g = G.haar_sample(G.SU2, r)
        commutes = G.element_equal(
            G.multiply(g, G.su2_element(0, 1, 0, 0)),
            G.multiply(G.su2_element(0, 1, 0, 0), g),
        ) and G.element_equal(
            G.multiply(g, G.su2_element(0, 0, 1, 0)),
            G.multiply(G.su2_element(0, 0, 1, 0), g),
        )
        central = abs(abs(g.data[0]) - 1.0) <= 1e-9
        assert commutes == central


def test_centralizer_monotone_and_contains_center():
    r = rng(9)
    for spec in [S3, Q8, G.SU2, G.group_by_name("SU2 x Z2")]:
        center = G.center_subgroup(spec)
        for _ in range(30):
            gens = [G.haar_sample(spec, r) for _ in range(int(r.integers(0, 4)))]
            z = G.centralizer(spec, gens)
            assert G.subgroup_contains(z, center)
            more = gens + [G.haar_sample(spec, r)]
            assert G.subgroup_contains(z, G.centralizer(spec, more))


def test_centralizer_permutation_invariant():
    r = rng(10)
    for spec in [S3, G.SU2]:
        gens = [G.haar_sample(spec, r) for _ in range(4)]
        z = G.centralizer(spec, gens)
        perm = [gens[i] for i in r.permutation(4)]
        assert G.subgroup_equal(z, G.centralizer(spec, perm))


def test_centralizer_conjugation_covariance():
    r = rng(11)
    for spec in [S3, Q8, G.SU2]:
        for _ in range(20):
            gens = [G.haar_sample(spec, r) for _ in range(int(r.integers(0, 4)))]
            h = G.haar_sample(spec, r)
            lhs = G.centralizer(spec, [G.conjugate(g, h) for g in gens])
            rhs = G.conjugate_subgroup(G.centralizer(spec, gens), h)
            assert G.subgroup_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# reduce_generators


def test_reduce_central_input_gives_empty():
    gens = [G.identity(S3)] * 3
    assert G.reduce_generators(S3, gens) == []
    q8_center = [G.finite_element(Q8, "1"), G.finite_element(Q8, "-1")]
    assert G.reduce_generators(Q8, q8_center) == []


def test_reduce_s3_all_elements_greedy_trace():
    all_elements = [G.finite_element(S3, i) for i in range(6)]
    kept = G.reduce_generators(S3, all_elements)
    # independent greedy trace over the table
    current = frozenset(range(6))
    expected = []
    for i in range(6):
        cand = current & table_centralizer(S3, [i])
        if cand != current:
            expected.append(i)
            current = cand
    assert [g.data for g in kept] == expected
    assert len(kept) == 2
    assert mask_to_set(G.centralizer(S3, kept).data) == {S3.identity_index}


def test_reduce_su2_same_axis_keeps_first():
    g = G.su2_element(math.cos(0.7), math.sin(0.7), 0.0, 0.0)
    powers = [g, G.multiply(g, g), G.multiply(G.multiply(g, g), g)]
    kept = G.reduce_generators(G.SU2, powers)
    assert kept == [g]


def test_reduce_preserves_centralizer_randomized():
    r = rng(12)
    for spec in [S3, Q8, G.group_by_name("Z4 x Z2"), G.SU2]:
        for _ in range(50):
            gens = [G.haar_sample(spec, r) for _ in range(int(r.integers(0, 7)))]
            kept = G.reduce_generators(spec, gens)
            assert G.subgroup_equal(
                G.centralizer(spec, kept), G.centralizer(spec, gens)
            )


def test_reduce_chain_bound_su2():
    r = rng(13)
    for _ in range(50):
        gens = [G.haar_sample(G.SU2, r) for _ in range(6)]
        assert len(G.reduce_generators(G.SU2, gens)) <= 2


# ---------------------------------------------------------------------------
# subgroup descriptors


def test_contains_reflexive():
    r = rng(14)
    for spec in [S3, G.SU2, G.U1]:
        gens = [G.haar_sample(spec, r) for _ in range(2)]
        z = G.centralizer(spec, gens)
        assert G.subgroup_contains(z, z)


def test_su2_torus_contains_center():
    torus = G.centralizer(G.SU2, [G.su2_element(0, 1, 0, 0)])
    center = G.center_subgroup(G.SU2)
    assert G.subgroup_contains(torus, center)
    # membership oracle: -1 is in every torus
    assert G.subgroup_member(torus, G.su2_element(-1, 0, 0, 0))
    assert not G.subgroup_contains(center, torus)


def test_s3_transposition_group_does_not_contain_a3():
    small = G.centralizer(S3, [G.finite_element(S3, "(12)")])
    a3 = G.centralizer(S3, [G.finite_element(S3, "(123)")])
    assert not G.subgroup_contains(small, a3)
    assert not G.subgroup_contains(a3, small)


def test_conjugate_subgroup_identity_and_full():
    z = G.centralizer(S3, [G.finite_element(S3, "(12)")])
    assert G.subgroup_equal(G.conjugate_subgroup(z, G.identity(S3)), z)
    full = G.full_subgroup(S3)
    h = G.finite_element(S3, "(123)")
    assert G.subgroup_equal(G.conjugate_subgroup(full, h), full)


def test_conjugate_torus_rotation_oracle():
    torus_x = G.centralizer(G.SU2, [G.su2_element(0, 1, 0, 0)])
    h = G.su2_element(math.cos(math.pi / 4), 0, 0, math.sin(math.pi / 4))
    rotated = G.conjugate_subgroup(torus_x, h)
    assert rotated.kind == G.KIND_TORUS
    axis = rotated.data
    assert abs(abs(axis[1]) - 1.0) <= 1e-9 and abs(axis[0]) <= 1e-9


def test_mask_conjugation_matches_set_oracle():
    from helpers import table_conjugate_set

    r = rng(15)
    for _ in range(30):
        gens = [int(r.integers(0, 6)) for _ in range(2)]
        z = table_centralizer(S3, gens)
        h = int(r.integers(0, 6))
        mask = 0
        for g in z:
            mask |= 1 << g
        got = G.conjugate_mask(S3, mask, h)
        assert mask_to_set(got) == table_conjugate_set(S3, z, h)


# ---------------------------------------------------------------------------
# catalog names and table files


def test_group_names():
    assert G.group_by_name("Z4").order == 4
    assert G.group_by_name("Z_4").order == 4
    assert G.group_by_name("U(1)") == G.U1
    assert G.group_by_name("SU(2)") == G.SU2
    product = G.group_by_name("SU2 x Z2")
    assert isinstance(product, G.ProductSpec)
    assert product.name == "SU2 x Z2"
    with pytest.raises(ValueError):
        G.group_by_name("E8")


def test_load_finite_table(tmp_path):
    lines = ["group K4 4"]
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    lines += [" ".join(str(v) for v in row) for row in table]
    path = tmp_path / "k4.txt"
    path.write_text("\n".join(lines) + "\n")
    spec = G.load_finite_table(path)
    assert spec.order == 4 and spec.label == "K4"
    assert spec.identity_index == 0
    # abelian: every centralizer is everything
    assert G.centralizer(spec, [G.finite_element(spec, 3)]).data == spec.full_mask


def test_load_finite_table_rejects_nongroup(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("group bad 2\n0 1\n1 1\n")
    with pytest.raises(G.InvalidGroupTable):
        G.load_finite_table(path)


def test_element_literals_round_trip():
    r = rng(16)
    for spec in [S3, G.U1, G.SU2, G.group_by_name("SU2 x Z2")]:
        for _ in range(5):
            g = G.haar_sample(spec, r)
            lit = G.element_to_literal(g)
            back = G.element_from_literal(spec, lit)
            assert G.element_equal(g, back)
