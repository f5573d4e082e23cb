"""Parity of the compiled kernels with the numpy fallback."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from gaugeorbits import _kernels
from gaugeorbits._kernels import fallback
from gaugeorbits import groups as G
from helpers import rng

try:
    from gaugeorbits._kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")


def _random_mask_inputs(r, samples, n, order):
    cent = r.integers(0, 1 << order, size=order, dtype=np.uint64)
    idx = r.integers(0, order, size=(samples, n), dtype=np.int64)
    full = np.uint64((1 << order) - 1)
    return cent, idx, full


def _random_quats(r, samples, n):
    q = r.standard_normal((samples, n, 4))
    q /= np.sqrt((q * q).sum(axis=2))[:, :, None]
    return q


def test_backend_reports_a_name():
    assert _kernels.BACKEND in {"cython", "python"}


@needs_core
def test_tuple_masks_parity():
    r = rng(101)
    for samples, n, order in [(1000, 3, 6), (500, 1, 8), (64, 0, 4), (2000, 5, 24)]:
        cent, idx, full = _random_mask_inputs(r, samples, n, order)
        a = _core.tuple_masks(cent, idx, full)
        b = fallback.tuple_masks(cent, idx, full)
        assert np.array_equal(a, b)


@needs_core
def test_su2_classify_parity_random():
    r = rng(102)
    for samples, n in [(2000, 1), (2000, 2), (500, 4), (64, 0)]:
        q = _random_quats(r, samples, n)
        a = _core.su2_classify(q, G.TAU_AXIS)
        b = fallback.su2_classify(q, G.TAU_AXIS)
        assert np.array_equal(a, b)


@needs_core
def test_su2_classify_parity_engineered():
    # central entries, exactly shared axes, and opposite axes
    i = np.array([0.0, 1.0, 0.0, 0.0])
    rot = np.array([np.cos(0.3), np.sin(0.3), 0.0, 0.0])
    rot_neg = np.array([np.cos(0.3), -np.sin(0.3), 0.0, 0.0])
    one = np.array([1.0, 0.0, 0.0, 0.0])
    minus = -one
    j = np.array([0.0, 0.0, 1.0, 0.0])
    cases = np.stack(
        [
            np.stack([one, minus]),       # all central -> 0
            np.stack([one, i]),           # central + axis -> 1
            np.stack([rot, rot_neg]),     # same axis up to sign -> 1
            np.stack([i, j]),             # different axes -> 2
            np.stack([rot, j]),           # different axes -> 2
        ]
    )
    a = _core.su2_classify(cases, G.TAU_AXIS)
    b = fallback.su2_classify(cases, G.TAU_AXIS)
    assert np.array_equal(a, b)
    assert list(b) == [0, 1, 1, 2, 2]


def test_classify_matches_scalar_centralizer():
    r = rng(103)
    q = _random_quats(r, 300, 2)
    classes = _kernels.su2_classify(q, G.TAU_AXIS)
    kind_by_class = {0: G.KIND_FULL, 1: G.KIND_TORUS, 2: G.KIND_CENTER}
    for row, cls in zip(q, classes):
        gens = [G.GroupElement(G.SU2, tuple(c)) for c in row]
        z = G.centralizer(G.SU2, gens)
        assert z.kind == kind_by_class[int(cls)]


def test_tuple_masks_matches_scalar_centralizer():
    r = rng(104)
    spec = G.group_by_name("S3")
    cent = np.array(spec.element_centralizer_masks, dtype=np.uint64)
    idx = r.integers(0, spec.order, size=(200, 2), dtype=np.int64)
    masks = _kernels.tuple_masks(cent, idx, spec.full_mask)
    for row, mask in zip(idx, masks):
        gens = [G.finite_element(spec, int(i)) for i in row]
        assert G.centralizer(spec, gens).data == int(mask)


def test_pure_env_selects_fallback():
    code = (
        "from gaugeorbits import _kernels; print(_kernels.BACKEND)"
    )
    env = dict(os.environ, GAUGEORBITS_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@needs_core
def test_census_results_backend_independent():
    from gaugeorbits import census as X

    env = dict(os.environ, GAUGEORBITS_PURE="1")
    code = (
        "import json\n"
        "from gaugeorbits import census, groups\n"
        "r = census.mc_census(groups.group_by_name('S3'), 2, 20000, seed=4)\n"
        "print(json.dumps(r.to_json()))\n"
    )
    pure = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    import json

    here = X.mc_census(G.group_by_name("S3"), 2, 20000, seed=4).to_json()
    assert json.loads(pure.stdout) == here

    code_su2 = code.replace("'S3'", "'SU2'")
    pure2 = subprocess.run(
        [sys.executable, "-c", code_su2], env=env, capture_output=True, text=True
    )
    here2 = X.mc_census(G.SU2, 2, 20000, seed=4).to_json()
    assert json.loads(pure2.stdout) == here2
