"""Pure-Python/numpy implementation of the simulation hot loops.

This is the fallback twin of the compiled ``_fastloop`` extension; both
expose the same three kernels with identical semantics.
"""

import numpy as np

# Regressor variance below this is treated as degenerate (hold last fit).
VAR_FLOOR = 1e-12

GATE_FULL = 0
GATE_HYSTERESIS_ONLY = 1
GATE_NONE = 2

PROV_GATE_BLOCKED = 0
PROV_NETWORK = 1


def ar1_scan(scaled_noise, rho):
    """First-order recursion out[k] = rho[k]*out[k-1] + scaled_noise[k].

    out[0] = scaled_noise[0]; rho[0] is ignored.
    """
    scaled_noise = np.ascontiguousarray(scaled_noise, dtype=np.float64)
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    out = np.empty_like(scaled_noise)
    s = scaled_noise[0]
    out[0] = s
    for k in range(1, scaled_noise.shape[0]):
        s = rho[k] * s + scaled_noise[k]
        out[k] = s
    return out


def _ols_window(u, y, uq):
    """Two-pass OLS of y against u; returns (slope, intercept, fitted at uq).

    Returns None when the regressor is degenerate.
    """
    mu = u.mean()
    my = y.mean()
    du = u - mu
    var_u = np.mean(du * du)
    if var_u < VAR_FLOOR:
        return None
    slope = np.mean(du * (y - my)) / var_u
    intercept = my - slope * mu
    return slope, intercept, intercept + slope * uq


def rolling_ols_fit(u, y, window, min_samples):
    """Fitted value at each index from OLS over the trailing window.

    Indices below min_samples-1 emit y raw (warm-up). A degenerate window
    reuses the previous fit; with no previous fit the raw value is emitted.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = u.shape[0]
    out = y.copy()
    last = None  # (slope, intercept)

    # growing-window region until the full window length is reached
    for i in range(min_samples - 1, min(window - 1, n)):
        fit = _ols_window(u[: i + 1], y[: i + 1], u[i])
        if fit is not None:
            last = fit[:2]
            out[i] = fit[2]
        elif last is not None:
            out[i] = last[1] + last[0] * u[i]
    if n < window:
        return out

    # full windows, vectorised
    uw = np.lib.stride_tricks.sliding_window_view(u, window)
    yw = np.lib.stride_tricks.sliding_window_view(y, window)
    mu = uw.mean(axis=1)
    my = yw.mean(axis=1)
    du = uw - mu[:, None]
    var_u = np.mean(du * du, axis=1)
    valid = var_u >= VAR_FLOOR
    if valid.all():
        slope = np.mean(du * (yw - my[:, None]), axis=1) / var_u
        intercept = my - slope * mu
        out[window - 1:] = intercept + slope * u[window - 1:]
        return out

    # rare path: some window is degenerate, walk sequentially so the
    # hold-last-fit rule threads through in order
    for j in range(valid.size):
        i = j + window - 1
        if valid[j]:
            slope = np.mean(du[j] * (yw[j] - my[j])) / var_u[j]
            intercept = my[j] - slope * mu[j]
            last = (slope, intercept)
            out[i] = intercept + slope * u[i]
        elif last is not None:
            out[i] = last[1] + last[0] * u[i]
    return out


def decision_scan(est_a, est_b, threshold, hysteresis, gate_mode,
                  decide_tbl, start_serving):
    """Walk the trajectory applying gate + quantised-level network decisions.

    est_a/est_b are the estimated RSS traces of the two base stations.
    decide_tbl[role, rss_s_level, rss_t_level] is 1 for handoff, 0 otherwise,
    with role the index of the currently serving base station and RSS levels
    0 = low (<= threshold), 1 = high. A handoff swaps the roles in place.

    Returns (decisions, provenance, serving, handoff_count, first_ho_index).
    """
    est_a = np.ascontiguousarray(est_a, dtype=np.float64)
    est_b = np.ascontiguousarray(est_b, dtype=np.float64)
    tbl = np.ascontiguousarray(decide_tbl, dtype=np.int8)
    n = est_a.shape[0]
    decisions = np.zeros(n, dtype=np.int8)
    provenance = np.zeros(n, dtype=np.int8)
    serving = np.empty(n, dtype=np.int8)
    cur = int(start_serving)
    count = 0
    first = -1
    for i in range(n):
        serving[i] = cur
        if cur == 0:
            rss_s = est_a[i]
            rss_t = est_b[i]
        else:
            rss_s = est_b[i]
            rss_t = est_a[i]
        if gate_mode == GATE_FULL:
            passed = rss_s < threshold and rss_t - rss_s >= hysteresis
        elif gate_mode == GATE_HYSTERESIS_ONLY:
            passed = rss_t - rss_s >= hysteresis
        else:
            passed = True
        if not passed:
            continue
        provenance[i] = PROV_NETWORK
        ls = 0 if rss_s <= threshold else 1
        lt = 0 if rss_t <= threshold else 1
        if tbl[cur, ls, lt]:
            decisions[i] = 1
            count += 1
            if first < 0:
                first = i
            cur ^= 1
    return decisions, provenance, serving, count, first
