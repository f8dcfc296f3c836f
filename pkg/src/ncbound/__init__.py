"""Two-body bound states with noncommuting inter-particle coordinates and momenta.

Natural units throughout the numerical core: hbar = c = 1, energies in units
of mu*c**2 and lengths in units of hbar/(mu*c), with mu the reduced mass.
"""

from ncbound.errors import (
    DomainError,
    NoSolution,
    NonConvergence,
    RepresentationMismatch,
)
from ncbound.radial import QuantumNumbers, RadialState
from ncbound.selfconsist import (
    OMEGA_C,
    Coupling,
    CriticalPoint,
    SelfConsistentSolution,
    critical_g,
    rhs,
    solve_level,
)

__all__ = [
    "OMEGA_C",
    "Coupling",
    "CriticalPoint",
    "DomainError",
    "NoSolution",
    "NonConvergence",
    "QuantumNumbers",
    "RadialState",
    "RepresentationMismatch",
    "SelfConsistentSolution",
    "critical_g",
    "rhs",
    "solve_level",
]

__version__ = "0.1.0"
