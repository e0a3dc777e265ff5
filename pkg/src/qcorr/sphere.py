"""Brute-force maximization over measurement directions on the unit sphere."""
import math

import numpy as np
from scipy.optimize import minimize

GRID_POINTS = 2000
REFINE_ITERATIONS = 200
REFINE_TOL = 1e-10


def fibonacci_sphere(n):
    """``n`` nearly uniform unit vectors on the golden-angle spiral."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(1.0 - z * z)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def direction(theta, phi):
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def maximize_on_sphere(objective, n_points=GRID_POINTS, maxiter=REFINE_ITERATIONS, tol=REFINE_TOL):
    """Maximize ``objective(dirs) -> values`` over unit vectors.

    Coarse Fibonacci grid, then Nelder-Mead on (theta, phi) from the best
    grid point. Returns ``(value, direction)``.
    """
    grid = fibonacci_sphere(n_points)
    vals = objective(grid)
    k = int(np.argmax(vals))
    best_val, best_dir = float(vals[k]), grid[k]

    x0 = np.array([math.acos(max(-1.0, min(1.0, best_dir[2]))), math.atan2(best_dir[1], best_dir[0])])
    res = minimize(
        lambda x: -float(objective(direction(x[0], x[1])[None, :])[0]),
        x0,
        method="Nelder-Mead",
        options={"xatol": tol, "fatol": tol, "maxiter": maxiter},
    )
    if -res.fun > best_val:
        best_val, best_dir = float(-res.fun), direction(*res.x)
    return best_val, best_dir
