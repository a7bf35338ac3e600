"""Two-cell handoff simulation toolkit: fading channel, least-squares RSS
estimation, a backpropagation decision network, threshold/hysteresis gating
and Monte Carlo trajectory experiments."""

__version__ = "0.1.0"

from ._kernels import active_backend, available_backends  # noqa: F401
