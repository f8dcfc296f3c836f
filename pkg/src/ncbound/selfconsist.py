"""Self-consistent determination of eta = 1 - epsilon for hydrogenic levels.

For a level (n, l) and combined coupling g = Omega * (alpha Z)**6 the fixed
point condition reads

    eta = S_nl * int x^(2l+2) exp(-x - g / (eta^8 n^4 x^4)) F^2 dx.

The right-hand side rises monotonically from 0 to 1 as eta goes from 0 to 1,
so below a critical coupling the curve crosses the diagonal twice, touches it
at the critical coupling and misses it above.  The physical root is the one
nearer to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import optimize

from ncbound import observables
from ncbound.errors import DomainError, NoSolution, NonConvergence
from ncbound.quad import DEFAULT_SPEC, QuadratureSpec, integrate_selfconsistency, integrate_selfconsistency_many
from ncbound.radial import QuantumNumbers

OMEGA_C = 0.40765

ETA_MIN = 1e-3
GRID_SIZE = 2000
ETA_TOL = 1e-8
G_TOL = 1e-5
# Omega_c is published to five digits; that rounding alone moves the maximum
# of rhs - eta by about 1e-6 for the ground state, so a maximum this close to
# zero is accepted as a tangential (double) root.
TANGENCY_TOL = 2e-6


@dataclass(frozen=True)
class Coupling:
    alpha_z: float
    omega: float = OMEGA_C

    def __post_init__(self):
        if not self.alpha_z > 0:
            raise DomainError(f"alpha_z must be positive, got {self.alpha_z}")
        if not self.omega >= 0:
            raise DomainError(f"omega must be non-negative, got {self.omega}")

    @property
    def g(self) -> float:
        return self.omega * self.alpha_z**6


@dataclass(frozen=True)
class SelfConsistentSolution:
    qn: QuantumNumbers
    coupling: Coupling
    eta: float
    epsilon: float
    energy: float
    mean_distance: float
    residual: float
    iterations: int
    branch: Literal["upper", "lower", "double"]


@dataclass(frozen=True)
class CriticalPoint:
    qn: QuantumNumbers
    g_critical: float
    alpha_z_critical: float
    eta_critical: float


def _check_g(g):
    if not (g >= 0 and math.isfinite(g)):
        raise DomainError(f"g must be finite and non-negative, got {g}")


def _c_values(qn, g, eta):
    return g / (np.asarray(eta, dtype=float) ** 8 * qn.n**4)


def rhs(qn: QuantumNumbers, g: float, eta: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Right-hand side of the fixed-point equation at a single eta."""
    _check_g(g)
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    return integrate_selfconsistency(qn, float(_c_values(qn, g, eta)), spec)


def rhs_many(qn: QuantumNumbers, g: float, etas, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    _check_g(g)
    etas = np.asarray(etas, dtype=float)
    if np.any(etas <= 0):
        raise DomainError("eta values must be positive")
    return integrate_selfconsistency_many(qn, _c_values(qn, g, etas), spec)


def rhs_curve(qn: QuantumNumbers, g: float, eta_grid, spec: QuadratureSpec = DEFAULT_SPEC):
    """Tabulate (eta, rhs) pairs, e.g. for plotting against the diagonal."""
    eta_grid = np.asarray(eta_grid, dtype=float)
    if np.any(eta_grid <= 0) or np.any(eta_grid > 1):
        raise DomainError("eta grid values must lie in (0, 1]")
    values = rhs_many(qn, g, eta_grid, spec)
    return [(float(e), float(v)) for e, v in zip(eta_grid, values)]


def eta_grid(size: int = GRID_SIZE) -> np.ndarray:
    return np.linspace(ETA_MIN, 1.0, size)


def _gap(qn, g, spec):
    return lambda eta: rhs(qn, g, eta, spec) - eta


def maximize_gap(qn: QuantumNumbers, g: float, grid=None, spec: QuadratureSpec = DEFAULT_SPEC):
    """Maximum of h(eta) = rhs(eta) - eta and its location.

    A grid scan locates the maximum, then a bounded scalar search refines it
    between the neighbouring grid points.
    """
    grid = eta_grid(200) if grid is None else np.asarray(grid, dtype=float)
    h = rhs_many(qn, g, grid, spec) - grid
    k = int(np.argmax(h))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    gap = _gap(qn, g, spec)
    res = optimize.minimize_scalar(
        lambda e: -gap(e), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10}
    )
    if -res.fun >= h[k]:
        return float(res.x), float(-res.fun)
    return float(grid[k]), float(h[k])


def find_roots(qn: QuantumNumbers, g: float, grid=None, tol: float = ETA_TOL, spec: QuadratureSpec = DEFAULT_SPEC):
    """All sign-change roots of rhs - eta on the grid, refined by bracketing.

    Returns a list of (eta, function_evaluations), ascending in eta.
    """
    grid = eta_grid() if grid is None else np.asarray(grid, dtype=float)
    h = rhs_many(qn, g, grid, spec) - grid
    gap = _gap(qn, g, spec)
    roots = []
    for i in range(grid.size - 1):
        if h[i] == 0.0:
            roots.append((float(grid[i]), 0))
        elif h[i] * h[i + 1] < 0:
            try:
                eta, info = optimize.brentq(
                    gap, grid[i], grid[i + 1], xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps,
                    maxiter=200, full_output=True,
                )
            except RuntimeError as exc:
                raise NonConvergence(str(exc)) from exc
            roots.append((float(eta), info.function_calls))
    if abs(h[-1]) <= tol and not h[-2] * h[-1] < 0:
        roots.append((float(grid[-1]), 0))
    return roots


def count_crossings(qn: QuantumNumbers, g: float, h_tol: float, grid=None, spec: QuadratureSpec = DEFAULT_SPEC) -> int:
    """Number of distinct solutions of rhs(eta) = eta on the scan grid.

    Grid values with |h| <= h_tol are treated as zero; a run of such values
    flanked by the same sign on both sides is one tangential (double) root.
    """
    grid = eta_grid() if grid is None else np.asarray(grid, dtype=float)
    eta_star, _ = maximize_gap(qn, g, spec=spec)
    grid = np.unique(np.append(grid, eta_star))
    h = rhs_many(qn, g, grid, spec) - grid
    signs = np.where(np.abs(h) <= h_tol, 0, np.sign(h)).astype(int)
    runs = [s for i, s in enumerate(signs) if i == 0 or s != signs[i - 1]]
    count = 0
    for i, s in enumerate(runs):
        if s == 0:
            count += 1
        elif i > 0 and runs[i - 1] == -s:
            count += 1
    return count


def solve_level(
    qn: QuantumNumbers,
    coupling: Coupling,
    tol: float = ETA_TOL,
    spec: QuadratureSpec = DEFAULT_SPEC,
    tangency_tol: float = TANGENCY_TOL,
) -> SelfConsistentSolution:
    """Physical (upper-branch) solution of the fixed-point equation.

    Raises NoSolution when rhs - eta stays negative on (0, 1] by more than
    ``tangency_tol``; a maximum within that band is returned as the double
    root at the tangency point with ``branch="double"``.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    g = coupling.g
    roots = find_roots(qn, g, tol=tol, spec=spec)
    if roots:
        eta, calls = roots[-1]
        branch = "upper"
    else:
        eta, h_max = maximize_gap(qn, g, spec=spec)
        if h_max < -tangency_tol:
            raise NoSolution(
                f"no bound state: g > g_critical for n={qn.n}, l={qn.l} (g={g:.6g})",
                n=qn.n, l=qn.l, g=g,
            )
        calls = 0
        branch = "double"
    residual = abs(rhs(qn, g, eta, spec) - eta)
    return SelfConsistentSolution(
        qn=qn,
        coupling=coupling,
        eta=eta,
        epsilon=1.0 - eta,
        energy=observables.energy_level(qn, coupling.alpha_z, eta),
        mean_distance=observables.mean_distance(qn, coupling.alpha_z, eta),
        residual=residual,
        iterations=calls,
        branch=branch,
    )


def critical_g(
    qn: QuantumNumbers,
    tol: float = G_TOL,
    omega: float = OMEGA_C,
    spec: QuadratureSpec = DEFAULT_SPEC,
    max_iter: int = 200,
) -> CriticalPoint:
    """Largest g for which the level still has a fixed point.

    Bisection on g over the predicate max_eta(rhs - eta) >= 0.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")

    def exists(g):
        return maximize_gap(qn, g, spec=spec)[1] >= 0.0

    lo, hi = 0.0, 0.1
    for _ in range(max_iter):
        if not exists(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NonConvergence("failed to bracket the critical coupling")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
    else:
        raise NonConvergence(f"critical_g bisection did not reach tol={tol}")
    g_c = 0.5 * (lo + hi)
    eta_c, _ = maximize_gap(qn, g_c, spec=spec)
    return CriticalPoint(
        qn=qn,
        g_critical=g_c,
        alpha_z_critical=(g_c / omega) ** (1.0 / 6.0),
        eta_critical=eta_c,
    )
