"""Received-signal-strength generation for a mobile moving past base stations.

The model combines, per sample and in the dB domain:

  mean RSS      p_ref - 10*gamma*log10(d)        (log-distance decay)
  shadowing     N(0, sigma^2), optionally correlated along the path via
                s_k = rho*s_{k-1} + sqrt(1-rho^2)*N(0, sigma^2),
                rho = exp(-delta_d / decorrelation_distance)
  fast fading   10*log10(g), g exponential with unit mean (Rayleigh power)
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

GAMMA_MIN = 2.0
GAMMA_MAX = 6.0
MIN_DISTANCE_M = 1.0

# floor on the fading power gain so the dB conversion stays finite
_GAIN_FLOOR = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class PropagationParams:
    p_ref_dbm: float = -5.0
    gamma: float = 3.0
    shadow_sigma_db: float = 8.0
    shadow_decorr_m: float = 20.0
    rayleigh_enabled: bool = True
    shadowing_enabled: bool = True

    def __post_init__(self):
        if not math.isfinite(self.p_ref_dbm):
            raise ValueError("p_ref_dbm must be finite")
        if not GAMMA_MIN <= self.gamma <= GAMMA_MAX:
            raise ValueError(
                f"gamma must lie in [{GAMMA_MIN}, {GAMMA_MAX}], got {self.gamma}")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be >= 0")
        if self.shadow_decorr_m < 0:
            raise ValueError("shadow_decorr_m must be >= 0")


@dataclass(frozen=True)
class SignalSample:
    """One RSS observation; rss_dbm = path_loss_dbm + shadow_db + fading_db."""

    distance_m: float
    rss_dbm: float
    path_loss_dbm: float
    shadow_db: float
    fading_db: float

    @property
    def components(self):
        return (self.path_loss_dbm, self.shadow_db, self.fading_db)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by (seed, stream_id)."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(seq)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


def mean_rss(d, params: PropagationParams):
    """Deterministic mean RSS in dBm at distance d (meters, clamped to 1 m)."""
    d = np.asarray(d, dtype=np.float64)
    if not np.all(np.isfinite(d)):
        raise ValueError("distance must be finite")
    clamped = np.maximum(d, MIN_DISTANCE_M)
    out = params.p_ref_dbm - 10.0 * params.gamma * np.log10(clamped)
    return float(out) if out.ndim == 0 else out


def sample_rss(d, params: PropagationParams, rng, prev_shadow=None,
               delta_d_m=None) -> SignalSample:
    """Draw one stochastic RSS sample at distance d.

    When prev_shadow and delta_d_m are given (and correlation is enabled)
    the shadowing term continues the spatial AR recursion from prev_shadow;
    otherwise an independent N(0, sigma^2) value is drawn.
    """
    gen = _as_generator(rng)
    mean = mean_rss(float(d), params)
    shadow = 0.0
    if params.shadowing_enabled and params.shadow_sigma_db > 0:
        z = gen.standard_normal()
        correlated = (prev_shadow is not None and delta_d_m is not None
                      and params.shadow_decorr_m > 0)
        if correlated:
            rho = math.exp(-abs(delta_d_m) / params.shadow_decorr_m)
            shadow = rho * prev_shadow + math.sqrt(1.0 - rho * rho) \
                * params.shadow_sigma_db * z
        else:
            shadow = params.shadow_sigma_db * z
    fading = 0.0
    if params.rayleigh_enabled:
        g = max(gen.standard_exponential(), _GAIN_FLOOR)
        fading = 10.0 * math.log10(g)
    return SignalSample(distance_m=float(d), rss_dbm=mean + shadow + fading,
                        path_loss_dbm=mean, shadow_db=shadow, fading_db=fading)


def trace_components(distances, moved, params: PropagationParams,
                     gen: np.random.Generator):
    """Vectorised trace generation; returns (mean, shadow, fading) arrays.

    moved[k] is the path length travelled between samples k-1 and k
    (moved[0] is ignored). Draw order is fixed (shadowing normals first,
    then fading exponentials) so traces are reproducible per stream.
    """
    distances = np.asarray(distances, dtype=np.float64)
    n = distances.shape[0]
    mean = params.p_ref_dbm - 10.0 * params.gamma \
        * np.log10(np.maximum(distances, MIN_DISTANCE_M))
    if params.shadowing_enabled and params.shadow_sigma_db > 0:
        z = gen.standard_normal(n)
        sigma = params.shadow_sigma_db
        if params.shadow_decorr_m > 0 and n > 1:
            moved = np.asarray(moved, dtype=np.float64)
            rho = np.exp(-np.abs(moved) / params.shadow_decorr_m)
            rho[0] = 0.0
            scaled = sigma * np.sqrt(1.0 - rho * rho) * z
            scaled[0] = sigma * z[0]
            shadow = _kernels.ar1_scan(scaled, rho)
        else:
            shadow = sigma * z
    else:
        shadow = np.zeros(n)
    if params.rayleigh_enabled:
        g = np.maximum(gen.standard_exponential(n), _GAIN_FLOOR)
        fading = 10.0 * np.log10(g)
    else:
        fading = np.zeros(n)
    return mean, shadow, fading


def generate_trace(trajectory, bs_position_m, params: PropagationParams,
                   rng) -> list[SignalSample]:
    """RSS samples seen from one base station along a trajectory of
    positions (meters along the path), with shadowing correlation threaded
    through consecutive samples."""
    positions = np.asarray(trajectory, dtype=np.float64)
    if positions.size == 0:
        raise ValueError("trajectory must not be empty")
    if not np.all(np.isfinite(positions)):
        raise ValueError("trajectory positions must be finite")
    gen = _as_generator(rng)
    distances = np.abs(positions - float(bs_position_m))
    moved = np.empty_like(positions)
    moved[0] = 0.0
    if positions.size > 1:
        moved[1:] = np.abs(np.diff(positions))
    mean, shadow, fading = trace_components(distances, moved, params, gen)
    rss = mean + shadow + fading
    return [
        SignalSample(distance_m=float(max(d, MIN_DISTANCE_M)), rss_dbm=float(r),
                     path_loss_dbm=float(m), shadow_db=float(s),
                     fading_db=float(f))
        for d, r, m, s, f in zip(distances, rss, mean, shadow, fading)
    ]


def write_trace_csv(path, distances, rss_serving_dbm, rss_target_dbm):
    """Plot-ready CSV of the two raw RSS traces against distance."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["distance_m", "rss_serving_dbm", "rss_target_dbm"])
        for d, s, t in zip(distances, rss_serving_dbm, rss_target_dbm):
            writer.writerow([repr(float(d)), repr(float(s)), repr(float(t))])
