"""Sliding-window least-squares smoothing of RSS traces.

The fit regresses RSS (dB) against u = 10*log10(distance), so the slope is
minus the path-loss exponent and the intercept is the reference power.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import MIN_DISTANCE_M


class NotEnoughSamples(ValueError):
    pass


class DegenerateRegressor(ValueError):
    """All window distances coincide; the slope is unidentifiable."""


@dataclass(frozen=True)
class EstimatorConfig:
    window_len: int = 50
    min_samples: int = 10

    def __post_init__(self):
        if int(self.min_samples) != self.min_samples or self.min_samples < 2:
            raise ValueError("min_samples must be an integer >= 2")
        if int(self.window_len) != self.window_len \
                or self.window_len < self.min_samples:
            raise ValueError("window_len must be an integer >= min_samples")


@dataclass(frozen=True)
class PathLossFit:
    gamma_hat: float
    p_ref_hat_dbm: float
    fitted_rss_dbm: float
    residual_rms_db: float


def log_regressor(d):
    return 10.0 * np.log10(d)


def fit_window(samples, d_query, min_samples=2) -> PathLossFit:
    """Ordinary least squares over one window of (distance_m, rss_dbm) pairs,
    evaluated at d_query."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (distance_m, rss_dbm) pairs")
    if arr.shape[0] < min_samples:
        raise NotEnoughSamples(
            f"need at least {min_samples} samples, got {arr.shape[0]}")
    d = arr[:, 0]
    y = arr[:, 1]
    if np.any(d < MIN_DISTANCE_M):
        raise ValueError("all distances must be >= 1 m")
    u = log_regressor(d)
    mu = u.mean()
    my = y.mean()
    du = u - mu
    var_u = np.mean(du * du)
    if var_u < _kernels.VAR_FLOOR:
        raise DegenerateRegressor("window distances are all identical")
    slope = np.mean(du * (y - my)) / var_u
    intercept = my - slope * mu
    fitted = intercept + slope * log_regressor(float(d_query))
    resid = y - (intercept + slope * u)
    return PathLossFit(gamma_hat=float(-slope),
                       p_ref_hat_dbm=float(intercept),
                       fitted_rss_dbm=float(fitted),
                       residual_rms_db=float(np.sqrt(np.mean(resid * resid))))


def estimate_arrays(distances, rss, config: EstimatorConfig) -> np.ndarray:
    """Array form of estimate_stream used by the simulation hot path."""
    distances = np.asarray(distances, dtype=np.float64)
    rss = np.asarray(rss, dtype=np.float64)
    if distances.size == 0:
        raise ValueError("trace must not be empty")
    u = log_regressor(np.maximum(distances, MIN_DISTANCE_M))
    return _kernels.rolling_ols_fit(u, rss, config.window_len,
                                    config.min_samples)


def estimate_stream(trace, config: EstimatorConfig):
    """Smoothed RSS at each trace sample from the trailing window fit.

    The first min_samples-1 entries emit the raw RSS (warm-up) so the
    decision pipeline has input at every position.
    """
    if len(trace) == 0:
        raise ValueError("trace must not be empty")
    distances = np.array([s.distance_m for s in trace])
    rss = np.array([s.rss_dbm for s in trace])
    est = estimate_arrays(distances, rss, config)
    return list(zip(distances.tolist(), est.tolist()))


def write_estimate_csv(path, distances, rss_raw_dbm, rss_est_dbm):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["distance_m", "rss_raw_dbm", "rss_est_dbm"])
        for d, raw, est in zip(distances, rss_raw_dbm, rss_est_dbm):
            writer.writerow([repr(float(d)), repr(float(raw)), repr(float(est))])
