# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the simulation hot loops.

Semantics match the pure-Python twin in ``_pyloop``; keep both in sync.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF VAR_FLOOR = 1e-12

GATE_FULL = 0
GATE_HYSTERESIS_ONLY = 1
GATE_NONE = 2

PROV_GATE_BLOCKED = 0
PROV_NETWORK = 1


def ar1_scan(scaled_noise, rho):
    """First-order recursion out[k] = rho[k]*out[k-1] + scaled_noise[k].

    out[0] = scaled_noise[0]; rho[0] is ignored.
    """
    cdef double[::1] x = np.ascontiguousarray(scaled_noise, dtype=np.float64)
    cdef double[::1] r = np.ascontiguousarray(rho, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double s = x[0]
    cdef Py_ssize_t k
    out[0] = s
    for k in range(1, n):
        s = r[k] * s + x[k]
        out[k] = s
    return out_arr


def rolling_ols_fit(u, y, window, min_samples):
    """Fitted value at each index from OLS over the trailing window.

    Indices below min_samples-1 emit y raw (warm-up). A degenerate window
    reuses the previous fit; with no previous fit the raw value is emitted.
    """
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] yy = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0]
    cdef Py_ssize_t w = window
    cdef Py_ssize_t warm = min_samples - 1
    out_arr = np.array(yy, dtype=np.float64, copy=True)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, lo, m
    cdef double su, sy, mu, my, du, var_u, cov
    cdef double slope = 0.0
    cdef double intercept = 0.0
    cdef bint have_fit = False
    for i in range(warm, n):
        lo = i - w + 1
        if lo < 0:
            lo = 0
        m = i - lo + 1
        su = 0.0
        sy = 0.0
        for j in range(lo, i + 1):
            su += uu[j]
            sy += yy[j]
        mu = su / m
        my = sy / m
        var_u = 0.0
        cov = 0.0
        for j in range(lo, i + 1):
            du = uu[j] - mu
            var_u += du * du
            cov += du * (yy[j] - my)
        var_u /= m
        cov /= m
        if var_u >= VAR_FLOOR:
            slope = cov / var_u
            intercept = my - slope * mu
            have_fit = True
        if have_fit:
            out[i] = intercept + slope * uu[i]
    return out_arr


def decision_scan(est_a, est_b, threshold, hysteresis, gate_mode,
                  decide_tbl, start_serving):
    """Walk the trajectory applying gate + quantised-level network decisions.

    est_a/est_b are the estimated RSS traces of the two base stations.
    decide_tbl[role, rss_s_level, rss_t_level] is 1 for handoff, 0 otherwise,
    with role the index of the currently serving base station and RSS levels
    0 = low (<= threshold), 1 = high. A handoff swaps the roles in place.

    Returns (decisions, provenance, serving, handoff_count, first_ho_index).
    """
    cdef double[::1] a = np.ascontiguousarray(est_a, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(est_b, dtype=np.float64)
    cdef signed char[:, :, ::1] tbl = np.ascontiguousarray(decide_tbl, dtype=np.int8)
    cdef double thr = threshold
    cdef double hyst = hysteresis
    cdef int mode = gate_mode
    cdef Py_ssize_t n = a.shape[0]
    decisions_arr = np.zeros(n, dtype=np.int8)
    provenance_arr = np.zeros(n, dtype=np.int8)
    serving_arr = np.empty(n, dtype=np.int8)
    cdef signed char[::1] decisions = decisions_arr
    cdef signed char[::1] provenance = provenance_arr
    cdef signed char[::1] serving = serving_arr
    cdef int cur = start_serving
    cdef long count = 0
    cdef Py_ssize_t first = -1
    cdef Py_ssize_t i
    cdef double rss_s, rss_t
    cdef bint passed
    cdef int ls, lt
    for i in range(n):
        serving[i] = <signed char> cur
        if cur == 0:
            rss_s = a[i]
            rss_t = b[i]
        else:
            rss_s = b[i]
            rss_t = a[i]
        if mode == 0:
            passed = rss_s < thr and rss_t - rss_s >= hyst
        elif mode == 1:
            passed = rss_t - rss_s >= hyst
        else:
            passed = True
        if not passed:
            continue
        provenance[i] = 1
        ls = 0 if rss_s <= thr else 1
        lt = 0 if rss_t <= thr else 1
        if tbl[cur, ls, lt]:
            decisions[i] = 1
            count += 1
            if first < 0:
                first = i
            cur ^= 1
    return decisions_arr, provenance_arr, serving_arr, int(count), int(first)
