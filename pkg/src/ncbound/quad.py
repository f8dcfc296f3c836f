"""Moments of hydrogenic densities against the weight exp(-x - c/x**4).

The factor exp(-c/x**4) vanishes faster than any power at the origin and
switches on across a layer of width ~c**(1/4).  The domain is therefore split
at x* = max(c**(1/4), 1): below x* an adaptive Gauss-Legendre bisection
resolves the switch-on, above it fixed Gauss-Legendre panels cover the
exponential tail.

All entry points accept a batch of ``c`` values and refine every member of
the batch in the same vectorized sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ncbound.errors import DomainError, NonConvergence
from ncbound.radial import QuantumNumbers, hypergeometric_polynomial, selfconsistency_prefactor

# Width of the tail panels; the tail integrand varies on a scale of order one.
_PANEL_WIDTH = 2.0
# Dyadic levels in the initial partition of [0, x*].
_HEAD_LEVELS = 8
# log(1e-20): integrand values below this fraction of the tail peak are dropped.
_TAIL_LOG_CUTOFF = -46.0
# Absolute error floor; keeps the relative budget out of the subnormal range.
_ABS_FLOOR = 1e-280


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tolerance: float = 1e-10
    max_subdivisions: int = 200_000
    node_count: int = 16

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise DomainError(f"rel_tolerance must be positive, got {self.rel_tolerance}")
        if self.node_count < 16:
            raise DomainError(f"node_count must be at least 16, got {self.node_count}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=None)
def _gauss_legendre(m: int):
    nodes, weights = np.polynomial.legendre.leggauss(m)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _integrand(qn, power, x, c):
    """x**p exp(-x - c/x**4) F(x)**2 with p = 2l+2+power; zero at x = 0."""
    p = 2 * qn.l + 2 + power
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        safe = np.where(x > 0, x, 1.0)
        log_w = p * np.log(safe) - safe - c / safe**4
        w = np.exp(log_w)
        f2 = hypergeometric_polynomial(qn, safe) ** 2
        val = np.where((x > 0) & (w > 0), w * f2, 0.0)
    return val


def _panel_sums(qn, power, a, b, c, nodes, weights):
    """Gauss-Legendre estimate on each [a_i, b_i] with its own c_i."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    vals = _integrand(qn, power, x, c[:, None])
    return half * (vals @ weights)


def _tail_length(q: int, xstar: np.ndarray) -> np.ndarray:
    """Distance beyond x* after which x**q e**-x is negligible."""
    x0 = np.maximum(float(q), xstar)
    peak = q * np.log(x0) - x0
    length = np.full_like(xstar, 10.0)
    while True:
        x = xstar + length
        done = q * np.log(x) - x < peak + _TAIL_LOG_CUTOFF
        if np.all(done):
            return length
        length = np.where(done, length, length + 10.0)


def _initial_head_partition(c, xstar):
    """Breakpoints on [0, x*]: dyadic fractions of x* plus points near c**(1/4)."""
    edges = []
    for ci, xs in zip(c, xstar):
        pts = {0.0, xs}
        pts.update(xs * 2.0**-k for k in range(1, _HEAD_LEVELS + 1))
        scale = ci**0.25
        if 0 < scale < xs:
            pts.update(s for s in (0.5 * scale, scale, 2.0 * scale) if s < xs)
        edges.append(np.array(sorted(pts)))
    return edges


def _moment_batch(qn: QuantumNumbers, c, power: int, spec: QuadratureSpec) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if np.any(~np.isfinite(c)) or np.any(c < 0):
        raise DomainError("c must be finite and non-negative")
    if power < -1:
        raise DomainError(f"power must be >= -1, got {power}")
    nodes, weights = _gauss_legendre(spec.node_count)
    m = c.size
    xstar = np.maximum(c**0.25, 1.0)

    # Tail: identical panel count for every batch member.
    q = 2 * qn.l + 2 + power + 2 * qn.degree
    length = _tail_length(q, xstar)
    n_panels = int(math.ceil(float(length.max()) / _PANEL_WIDTH))
    offsets = np.arange(n_panels) * _PANEL_WIDTH
    ta = (xstar[:, None] + offsets[None, :]).ravel()
    tb = ta + _PANEL_WIDTH
    tc = np.repeat(c, n_panels)
    tail = _panel_sums(qn, power, ta, tb, tc, nodes, weights).reshape(m, n_panels).sum(axis=1)

    # Head: adaptive bisection started from a fixed partition.
    edges = _initial_head_partition(c, xstar)
    owner = np.concatenate([np.full(len(e) - 1, i) for i, e in enumerate(edges)])
    a = np.concatenate([e[:-1] for e in edges])
    b = np.concatenate([e[1:] for e in edges])
    est = _panel_sums(qn, power, a, b, c[owner], nodes, weights)

    scale = np.abs(tail) + np.bincount(owner, weights=np.abs(est), minlength=m)
    budget = np.maximum(spec.rel_tolerance * scale, _ABS_FLOOR)
    head = np.zeros(m)
    splits = np.zeros(m, dtype=int)
    while a.size:
        mid = 0.5 * (a + b)
        aa = np.concatenate([a, mid])
        bb = np.concatenate([mid, b])
        oo = np.concatenate([owner, owner])
        halves = _panel_sums(qn, power, aa, bb, c[oo], nodes, weights)
        left, right = halves[: a.size], halves[a.size :]
        fine = left + right
        err = np.abs(fine - est)
        allowed = budget[owner] * (b - a) / xstar[owner]
        ok = err <= allowed
        head += np.bincount(owner[ok], weights=fine[ok], minlength=m)
        bad = ~ok
        splits += np.bincount(owner[bad], minlength=m)
        if splits.max() > spec.max_subdivisions:
            raise NonConvergence(
                f"adaptive quadrature exceeded {spec.max_subdivisions} subdivisions "
                f"for n={qn.n}, l={qn.l}"
            )
        a = np.concatenate([a[bad], mid[bad]])
        b = np.concatenate([mid[bad], b[bad]])
        est = np.concatenate([left[bad], right[bad]])
        owner = np.concatenate([owner[bad], owner[bad]])

    return selfconsistency_prefactor(qn) * (head + tail)


def integrate_selfconsistency(qn: QuantumNumbers, c: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """S_nl * integral of x^(2l+2) exp(-x - c/x^4) F^2 over (0, inf)."""
    return float(_moment_batch(qn, c, 0, spec)[0])


def integrate_selfconsistency_many(qn: QuantumNumbers, cs, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Vectorized :func:`integrate_selfconsistency` over an array of ``c``."""
    return _moment_batch(qn, cs, 0, spec)


def integrate_moment(qn: QuantumNumbers, c: float, power: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Same weight as the self-consistency integral with x^power inserted.

    With c = 0 and power = 1 this is the mean of x = 2*kappa*r over chi**2.
    """
    return float(_moment_batch(qn, c, power, spec)[0])
