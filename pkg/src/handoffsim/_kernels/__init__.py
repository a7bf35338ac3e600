"""Kernel backend selection: compiled extension if built, numpy fallback.

Set HANDOFFSIM_PURE_PYTHON=1 to force the fallback. ``use_backend`` rebinds
the kernels at runtime (used by the benchmark and the equivalence tests);
callers must access them through this module for the switch to take effect.
"""

import os

from . import _pyloop
from ._pyloop import (GATE_FULL, GATE_HYSTERESIS_ONLY, GATE_NONE,
                      PROV_GATE_BLOCKED, PROV_NETWORK, VAR_FLOOR)

_BACKENDS = {"python": _pyloop}
try:
    from . import _fastloop
    _BACKENDS["cython"] = _fastloop
except ImportError:
    _fastloop = None

_active = "python"

ar1_scan = _pyloop.ar1_scan
rolling_ols_fit = _pyloop.rolling_ols_fit
decision_scan = _pyloop.decision_scan


def available_backends():
    return sorted(_BACKENDS)


def active_backend():
    return _active


def use_backend(name):
    global _active, ar1_scan, rolling_ols_fit, decision_scan
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; "
                         f"available: {available_backends()}")
    mod = _BACKENDS[name]
    ar1_scan = mod.ar1_scan
    rolling_ols_fit = mod.rolling_ols_fit
    decision_scan = mod.decision_scan
    _active = name


if os.environ.get("HANDOFFSIM_PURE_PYTHON") == "1" or _fastloop is None:
    use_backend("python")
else:
    use_backend("cython")
