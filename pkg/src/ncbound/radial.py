"""Hydrogenic radial functions with the Bohr radius rescaled by eta = 1 - epsilon.

Lengths are in units of hbar/(mu c).  With a0 = hbar/(mu c alpha) the
combination Z/a0 becomes alpha*Z, so the decay constant of a level is
kappa = alpha*Z / (eta * n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ncbound.errors import DomainError

N_MAX = 20

# n + l <= 2*N_MAX - 1 < 40
_FACTORIAL = np.array([math.factorial(k) for k in range(41)], dtype=float)


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.l) != self.l:
            raise DomainError(f"quantum numbers must be integers, got n={self.n}, l={self.l}")
        if not 1 <= self.n <= N_MAX:
            raise DomainError(f"n must lie in [1, {N_MAX}], got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise DomainError(f"l must lie in [0, n-1], got l={self.l} for n={self.n}")

    @property
    def degree(self) -> int:
        """Degree n - l - 1 of the hypergeometric polynomial."""
        return self.n - self.l - 1


@dataclass(frozen=True)
class RadialState:
    qn: QuantumNumbers
    eta: float
    alpha_z: float

    def __post_init__(self):
        _check_eta(self.eta)
        if not self.alpha_z > 0:
            raise DomainError(f"alpha_z must be positive, got {self.alpha_z}")

    @property
    def length_scale(self) -> float:
        """Effective Bohr radius eta * n * a0 / Z, in hbar/(mu c)."""
        return self.eta * self.qn.n / self.alpha_z


def _check_eta(eta):
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")


def hypergeometric_polynomial(qn: QuantumNumbers, x):
    """Evaluate F(-n+l+1, 2l+2, x), a polynomial of degree n-l-1.

    The series is accumulated with the exact term ratio
    (a+k) x / ((b+k)(k+1)), so no factorials appear.  Accepts scalars or
    arrays.
    """
    x = np.asarray(x, dtype=float)
    a = -qn.degree
    b = 2 * qn.l + 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(qn.degree):
        term = term * ((a + k) / ((b + k) * (k + 1))) * x
        total = total + term
    return total if total.ndim else float(total)


def selfconsistency_prefactor(qn: QuantumNumbers) -> float:
    """S_nl = (n+l)! / ((2l+1)!**2 * 2n * (n-l-1)!)."""
    n, l = qn.n, qn.l
    return _FACTORIAL[n + l] / (_FACTORIAL[2 * l + 1] ** 2 * 2 * n * _FACTORIAL[n - l - 1])


def normalization_constant(qn: QuantumNumbers, eta: float, alpha_z: float) -> float:
    _check_eta(eta)
    if not alpha_z > 0:
        raise DomainError(f"alpha_z must be positive, got {alpha_z}")
    n, l = qn.n, qn.l
    two_kappa = 2.0 * alpha_z / (eta * n)
    root = math.sqrt(_FACTORIAL[n + l] / (2 * n * _FACTORIAL[n - l - 1]))
    return root / _FACTORIAL[2 * l + 1] * two_kappa ** (l + 1.5)


def radial_wavefunction(state: RadialState, r):
    """chi_nl(r) = N r^(l+1) F(-n+l+1, 2l+2, 2 kappa r) exp(-kappa r).

    The exponential decays; a growing exponential cannot satisfy the unit
    normalization of chi**2.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r must be non-negative")
    qn = state.qn
    kappa = state.alpha_z / (state.eta * qn.n)
    norm = normalization_constant(qn, state.eta, state.alpha_z)
    chi = (
        norm
        * r ** (qn.l + 1)
        * hypergeometric_polynomial(qn, 2.0 * kappa * r)
        * np.exp(-kappa * r)
    )
    return chi if np.ndim(chi) else float(chi)
