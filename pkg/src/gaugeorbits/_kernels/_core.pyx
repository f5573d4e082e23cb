# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled census hot kernels; see `fallback` for the reference semantics."""

import numpy as np

BACKEND_NAME = "cython"


def tuple_masks(cent_masks, idx, full_mask):
    """AND-reduce per-element centralizer bitmasks over each index row."""
    cdef unsigned long long[::1] masks = np.ascontiguousarray(cent_masks, dtype=np.uint64)
    cdef long long[:, ::1] rows = np.ascontiguousarray(idx, dtype=np.int64)
    cdef Py_ssize_t samples = rows.shape[0]
    cdef Py_ssize_t n = rows.shape[1]
    cdef unsigned long long full = full_mask
    out_arr = np.empty(samples, dtype=np.uint64)
    cdef unsigned long long[::1] out = out_arr
    cdef Py_ssize_t s, col
    cdef unsigned long long acc
    for s in range(samples):
        acc = full
        for col in range(n):
            acc &= masks[rows[s, col]]
        out[s] = acc
    return out_arr


def su2_classify(quats, tol_axis):
    """Centralizer class per unit-quaternion tuple row.

    0 all central (full), 1 shared axis (torus), 2 otherwise (center).
    """
    cdef double[:, :, ::1] q = np.ascontiguousarray(quats, dtype=np.float64)
    cdef Py_ssize_t samples = q.shape[0]
    cdef Py_ssize_t n = q.shape[1]
    cdef double tol2 = tol_axis * tol_axis
    out_arr = np.zeros(samples, dtype=np.int8)
    cdef signed char[::1] out = out_arr
    cdef Py_ssize_t s, l
    cdef double vx, vy, vz, v2, rx, ry, rz, r2, cx, cy, cz, c2
    cdef signed char cls
    cdef bint have_ref
    for s in range(samples):
        cls = 0
        have_ref = False
        rx = ry = rz = r2 = 0.0
        for l in range(n):
            vx = q[s, l, 1]
            vy = q[s, l, 2]
            vz = q[s, l, 3]
            v2 = (vx * vx + vy * vy) + vz * vz
            if v2 <= tol2:
                continue
            if not have_ref:
                have_ref = True
                rx = vx
                ry = vy
                rz = vz
                r2 = v2
                cls = 1
                continue
            cx = ry * vz - rz * vy
            cy = rz * vx - rx * vz
            cz = rx * vy - ry * vx
            c2 = (cx * cx + cy * cy) + cz * cz
            if c2 > (tol2 * r2) * v2:
                cls = 2
                break
        out[s] = cls
    return out_arr
