"""Power-optimal transmitter placement.

Thin wrappers over the C++ core: scenarios are JSON documents (passed as
dicts or pre-serialized strings) with the same schema the CLI reads.
"""
import json as _json

from ._core import enclosing_ball as _enclosing_ball
from ._core import objective as _objective
from ._core import solve as _solve
from ._core import verify as _verify

__all__ = ["solve", "verify", "objective", "enclosing_ball"]


def _as_text(scenario):
    return scenario if isinstance(scenario, str) else _json.dumps(scenario)


def solve(scenario, method="auto", tol=1e-10, max_iters=10000):
    """Solve a scenario; returns a dict mirroring the CLI solve output."""
    return _solve(_as_text(scenario), method, tol, max_iters)


def verify(scenario, point, tol=1e-8):
    """Optimality certificate for a candidate point, with hull membership."""
    return _verify(_as_text(scenario), list(point), tol)


def objective(scenario, point):
    """Total transmit power at a candidate location."""
    return _objective(_as_text(scenario), list(point))


def enclosing_ball(scenario):
    """Smallest ball containing the user locations."""
    return _enclosing_ball(_as_text(scenario))
