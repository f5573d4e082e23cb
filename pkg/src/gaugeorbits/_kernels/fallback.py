"""Pure numpy implementations of the census hot kernels.

Semantics are kept bit-identical with the compiled module `_core`: same
integer arithmetic, same IEEE double expressions in the same association
order, same first-noncentral reference rule for the shared-axis test.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def tuple_masks(cent_masks: np.ndarray, idx: np.ndarray, full_mask: int) -> np.ndarray:
    """AND-reduce per-element centralizer bitmasks over each index row.

    ``cent_masks`` is uint64 of shape (order,), ``idx`` int64 of shape
    (samples, n).  Rows with n = 0 yield ``full_mask``.
    """
    samples, n = idx.shape
    out = np.full(samples, np.uint64(full_mask), dtype=np.uint64)
    for col in range(n):
        out &= cent_masks[idx[:, col]]
    return out


def su2_classify(quats: np.ndarray, tol_axis: float) -> np.ndarray:
    """Centralizer class of each row of unit quaternion tuples.

    ``quats`` has shape (samples, n, 4).  Returns int8 classes:
    0 all components central (full centralizer), 1 shared axis (torus),
    2 otherwise (center).
    """
    samples, n, _ = quats.shape
    tol2 = tol_axis * tol_axis
    vx = quats[:, :, 1]
    vy = quats[:, :, 2]
    vz = quats[:, :, 3]
    v2 = (vx * vx + vy * vy) + vz * vz
    noncentral = v2 > tol2
    any_nc = noncentral.any(axis=1)
    out = np.zeros(samples, dtype=np.int8)
    if not any_nc.any():
        return out
    ref = np.argmax(noncentral, axis=1)
    rows = np.arange(samples)
    rx = vx[rows, ref]
    ry = vy[rows, ref]
    rz = vz[rows, ref]
    r2 = v2[rows, ref]
    cx = ry[:, None] * vz - rz[:, None] * vy
    cy = rz[:, None] * vx - rx[:, None] * vz
    cz = rx[:, None] * vy - ry[:, None] * vx
    c2 = (cx * cx + cy * cy) + cz * cz
    off_axis = noncentral & (c2 > (tol2 * r2[:, None]) * v2)
    out[any_nc] = 1
    out[off_axis.any(axis=1)] = 2
    return out
