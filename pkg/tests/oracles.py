"""Independent reference implementations used to cross-check the package.

Everything here is written along a different route than the library
code: direct summation with closed-form weights instead of a linear
filter, closed-form similarity solutions instead of numerics, dense
scans instead of root finding. Agreement between the two routes is what
the tests assert.
"""

from __future__ import annotations

import numpy as np

# largest magnitude fed to exp(); below exp(-750) every weight underflows
# to a value irrelevant at the 1e-12 comparison scale
_EXP_CUTOFF = 750.0


def w_weights(s: float, count: int) -> np.ndarray:
    """Closed-form kernel weights for cells at offsets 0..count-1.

    Integrating (1/eta) exp((x - y)/eta) over the cell that starts
    m cells right of the evaluation point x gives
    exp(-s m) - exp(-s (m + 1)) with s = dx/eta.
    """
    m = np.arange(count, dtype=float)
    return np.exp(-s * m) - np.exp(-s * (m + 1.0))


def w_edges_direct_sum(v_values, q_values, dx: float, eta: float) -> np.ndarray:
    """Brute-force look-ahead average: explicit weighted sum per edge.

    Quadratic work in the number of cells (weights are cut off once they
    underflow), no recurrence involved.
    """
    g = np.asarray(v_values, dtype=float) * np.asarray(q_values, dtype=float)
    n = g.size
    s = dx / eta
    count = min(n, int(np.ceil(_EXP_CUTOFF / s)) + 1)
    wts = w_weights(s, count)
    w = np.zeros(n + 1)
    gpad = np.concatenate([g, np.zeros(count)])
    # w[k] = sum_m wts[m] * g[k + m]
    w[:n] = np.correlate(gpad, wts, mode="valid")[:n]
    return w


def w_edges_double_loop(v_values, q_values, dx: float, eta: float) -> np.ndarray:
    """Same sum as :func:`w_edges_direct_sum` written as a plain loop.

    Kept for small grids where the scalar arithmetic is affordable; it
    shares no numpy vectorization with either other route.
    """
    g = [float(a) * float(b) for a, b in zip(v_values, q_values)]
    n = len(g)
    s = dx / eta
    w = [0.0] * (n + 1)
    for k in range(n):
        acc = 0.0
        for m in range(n - k):
            if s * m > _EXP_CUTOFF:
                break
            acc += (np.exp(-s * m) - np.exp(-s * (m + 1))) * g[k + m]
        w[k] = acc
    return np.asarray(w)


def w_continuum_quad(v_spec, q_spec, x: float, eta: float, x_right: float) -> float:
    """Adaptive quadrature of the defining integral, truncated at x_right.

    Valid for piecewise constant specs; the breakpoints are passed to the
    integrator so the kinks do not degrade accuracy.
    """
    from scipy.integrate import quad

    pts = sorted({*v_spec.breakpoints, *q_spec.breakpoints})
    pts = [p for p in pts if x < p < x_right]

    def integrand(y):
        return np.exp((x - y) / eta) / eta * float(v_spec(y)) * float(q_spec(y))

    val, _ = quad(integrand, x, x_right, points=pts or None, limit=200)
    return val


# ---------------------------------------------------------------------------
# Riemann problems for f(u) = u * (1 - u^2) on [0, 3/4] (concave there)

RIEMANN_LEFT_SHOCK = 0.0
RIEMANN_RIGHT_SHOCK = 0.5
# Jump ratio of flux to state: (f(1/2) - f(0)) / (1/2 - 0) = 3/4. The
# chord of a concave flux under an upward jump lies below the graph, so
# this discontinuity is the admissible shock (speeds decrease across it:
# f'(0) = 1 > 3/4 > f'(1/2) = 1/4).
RIEMANN_SHOCK_SPEED = 0.75


def riemann_shock(x, t: float) -> np.ndarray:
    """States 0 (left) and 1/2 (right): a single shock at x = 3t/4."""
    x = np.asarray(x, dtype=float)
    return np.where(x < RIEMANN_SHOCK_SPEED * t, RIEMANN_LEFT_SHOCK,
                    RIEMANN_RIGHT_SHOCK)


def riemann_rarefaction(x, t: float) -> np.ndarray:
    """States 1/2 (left) and 0 (right): a centered fan.

    The self-similar profile inverts f'(u) = 1 - 3 u^2 = x/t, giving
    u = sqrt((1 - x/t) / 3) for x/t between f'(1/2) = 1/4 and f'(0) = 1,
    with the constant states outside.
    """
    if t <= 0:
        raise ValueError("rarefaction profile needs t > 0")
    xi = np.asarray(x, dtype=float) / t
    inner = np.sqrt(np.maximum((1.0 - xi) / 3.0, 0.0))
    return np.where(xi <= 0.25, 0.5, np.where(xi >= 1.0, 0.0, inner))


def godunov_flux_scan(f, left: float, right: float, samples: int = 4001) -> float:
    """Godunov interface value by dense scan of f over the state interval."""
    lo, hi = (left, right) if left <= right else (right, left)
    u = np.linspace(lo, hi, samples)
    vals = f(u)
    return float(np.min(vals)) if left <= right else float(np.max(vals))


def beta_for_quadratic_speed(u) -> np.ndarray:
    """Entropy flux for alpha(u) = u^2 and f(u) = u (1 - u^2).

    beta' = 2 u f'(u) = 2u - 6u^3, so beta(u) = u^2 - (3/2) u^4.
    """
    u = np.asarray(u, dtype=float)
    return u**2 - 1.5 * u**4


def front_position(x: np.ndarray, values: np.ndarray, level: float) -> float:
    """Linear interpolation of the first upward crossing of ``level``."""
    above = values >= level
    if not np.any(above):
        raise ValueError("profile never reaches the requested level")
    i = int(np.argmax(above))
    if i == 0:
        return float(x[0])
    x0, x1 = x[i - 1], x[i]
    y0, y1 = values[i - 1], values[i]
    return float(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
