"""Runtime knobs.

Nothing in here changes mathematical results -- only precision targets,
iteration caps and parallelism.  Numerical defaults were tuned on the
test suite; loosen them at your own risk.
"""

import os
from dataclasses import dataclass


def thread_count() -> int:
    """Worker count for the embarrassingly parallel steps.

    Controlled by the DYNATOMIC_THREADS environment variable; defaults to 1
    (the test suite must be reproducible on one core).
    """
    raw = os.environ.get("DYNATOMIC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


@dataclass(frozen=True)
class RaySchedule:
    """Step schedule for dynamical/parameter ray tracing."""

    start_potential: float = 18.0     # G = start_potential gives |z| ~ e^18/d-adjusted
    steps_per_level: int = 24         # potential subdivisions per halving level
    landing_levels: int = 200         # clamp: deepest potential is start/2^this
    newton_tol: float = 1e-13
    newton_maxit: int = 60
    bifurcation_tol: float = 1e-5     # orbit-min (relative to 1+|c|) that counts as hitting 0
    max_subdivisions: int = 42        # dyadic rung-splitting depth before NewtonDivergence
    extrap_points: int = 8            # sample budget for the landing extrapolation


@dataclass(frozen=True)
class MonodromySchedule:
    """Step schedule for numerical continuation of periodic points."""

    base_steps: int = 64              # minimum steps per closed loop
    max_refine: int = 14              # dyadic step-halving depth on failure
    match_factor: float = 0.3         # step accepted if |z - pred| < factor * min gap
    newton_tol: float = 1e-11


DEFAULT_RAY_SCHEDULE = RaySchedule()
DEFAULT_MONODROMY_SCHEDULE = MonodromySchedule()

# Seed for every stochastic test helper (sampling random angles, parameters).
DEFAULT_SEED = 0
