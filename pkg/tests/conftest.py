"""Shared geometry builders for the phase and acceptance tests."""

import numpy as np

from acmoment.phase import PolylinePath


def regular_polygon(n, radius=1.0, center=(0.0, 0.0), ccw=True):
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    if not ccw:
        theta = theta[::-1]
    vertices = np.stack(
        [center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)],
        axis=1,
    )
    return PolylinePath(vertices, closed=True)


def ring_loop(rng, winding, center=(0.0, 0.0), r_lo=1.2, r_hi=2.0, n_per_turn=36):
    """Closed polyline that winds `winding` times around `center`.

    Radii stay within [r_lo, r_hi] (ratio small enough that no chord
    cuts inside r_lo / 2), so any charge well inside r_lo keeps the
    constructed winding number and a safe clearance.
    """
    turns = max(1, abs(int(winding)))
    n = n_per_turn * turns
    sign = 1.0 if winding >= 0 else -1.0
    theta = sign * (
        np.linspace(0.0, 2.0 * np.pi * turns, n, endpoint=False)
        + rng.uniform(-0.05, 0.05, n)
    )
    radius = rng.uniform(r_lo, r_hi, n)
    vertices = np.stack(
        [center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)],
        axis=1,
    )
    return PolylinePath(vertices, closed=True)


def half_circle_arm(upper, n=33):
    """Open half-circle from (1, 0) to (-1, 0); exact shared endpoints."""
    theta = np.linspace(0.0, np.pi, n)
    sign = 1.0 if upper else -1.0
    v = np.stack([np.cos(theta), sign * np.sin(theta)], axis=1)
    v[0] = [1.0, 0.0]
    v[-1] = [-1.0, 0.0]
    return PolylinePath(v, closed=False)
