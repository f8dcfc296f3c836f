"""Energies, mean inter-particle distances and measurement-impact estimates.

Level quantities are in natural units (mu c^2, hbar/(mu c)).  The
measurement estimates work in MeV, cm and s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ncbound.errors import DomainError
from ncbound.radial import QuantumNumbers

HBAR_C_MEV_CM = 1.9733e-11
HBAR_MEV_S = 6.582119569e-22


@dataclass(frozen=True)
class ParticleSpec:
    rest_energy: float  # MeV
    name: str = ""

    def __post_init__(self):
        if not self.rest_energy > 0:
            raise DomainError(f"rest_energy must be positive, got {self.rest_energy}")


ELECTRON = ParticleSpec(0.5110, "electron")
PROTON = ParticleSpec(938.27, "proton")


@dataclass(frozen=True)
class EnergyComparison:
    qn: QuantumNumbers
    alpha_z: float
    schrodinger: float
    dirac: float
    noncommutative: float


def _check_eta(eta):
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")


def energy_level(qn: QuantumNumbers, alpha_z: float, eta: float) -> float:
    """-(alpha Z)^2 / (2 n^2 eta^2)."""
    _check_eta(eta)
    return -(alpha_z**2) / (2.0 * qn.n**2 * eta**2)


def mean_distance(qn: QuantumNumbers, alpha_z: float, eta: float) -> float:
    """Mean of |r2 - r1| for the level.

    The wavefunction scale contributes one power of eta and the map
    r2 - r1 = eta * r another, giving eta^2 (3n^2 - l(l+1)) / (2 alpha Z).
    """
    _check_eta(eta)
    if not alpha_z > 0:
        raise DomainError(f"alpha_z must be positive, got {alpha_z}")
    n, l = qn.n, qn.l
    return eta**2 * (3 * n * n - l * (l + 1)) / (2.0 * alpha_z)


def schrodinger_energy(qn: QuantumNumbers, alpha_z: float) -> float:
    return -(alpha_z**2) / (2.0 * qn.n**2)


def dirac_ground_energy(alpha_z: float) -> float:
    if not 0 < alpha_z <= 1:
        raise DomainError(f"Dirac ground energy needs 0 < alpha_z <= 1, got {alpha_z}")
    # -1 + sqrt(1 - a^2) without cancellation at small a
    return -(alpha_z**2) / (1.0 + math.sqrt(1.0 - alpha_z**2))


def dirac_energy(n: int, j: float, alpha_z: float) -> float:
    """Point-Coulomb Dirac level E(n, j) - mu c^2, in mu c^2."""
    if not 0 < alpha_z <= 1:
        raise DomainError(f"Dirac energies need 0 < alpha_z <= 1, got {alpha_z}")
    k = j + 0.5
    if k != int(k) or not 1 <= k <= n:
        raise DomainError(f"invalid j={j} for n={n}")
    d = n - k + math.sqrt(k * k - alpha_z**2)
    # [1 + (aZ/d)^2]^(-1/2) - 1 rewritten to stay finite at d = 0 and exact at small aZ
    h = math.hypot(d, alpha_z)
    return -(alpha_z**2) / (h * (d + h))


def compare_energies(qn: QuantumNumbers, alpha_z: float, eta: float) -> EnergyComparison:
    """Reference energies next to the solved one; the Dirac level uses j = l + 1/2."""
    dirac = dirac_ground_energy(alpha_z) if qn.n == 1 else dirac_energy(qn.n, qn.l + 0.5, alpha_z)
    return EnergyComparison(
        qn=qn,
        alpha_z=alpha_z,
        schrodinger=schrodinger_energy(qn, alpha_z),
        dirac=dirac,
        noncommutative=energy_level(qn, alpha_z, eta),
    )


def _check_velocity(v_over_c):
    if not 0 <= v_over_c < 1:
        raise DomainError(f"v/c must lie in [0, 1), got {v_over_c}")


def compton_wavelength(p: ParticleSpec) -> float:
    """h / (m c) in cm."""
    return 2.0 * math.pi * HBAR_C_MEV_CM / p.rest_energy


def position_accuracy(p: ParticleSpec, v_over_c: float = 0.0) -> float:
    """Best attainable position resolution (h/mc) sqrt(1 - v^2/c^2), in cm."""
    _check_velocity(v_over_c)
    return compton_wavelength(p) * math.sqrt(1.0 - v_over_c**2)


def measurement_duration(p: ParticleSpec, v_over_c: float = 0.0) -> float:
    """(h / m c^2) sqrt(1 - v^2/c^2), in s."""
    _check_velocity(v_over_c)
    return 2.0 * math.pi * HBAR_MEV_S / p.rest_energy * math.sqrt(1.0 - v_over_c**2)


def position_impact_force(delta_x: float) -> float:
    """hbar c / (2 dx^2) in MeV/cm, for dx in cm."""
    if not delta_x > 0:
        raise DomainError(f"delta_x must be positive, got {delta_x}")
    return HBAR_C_MEV_CM / (2.0 * delta_x**2)


def momentum_impact_force(delta_p: float) -> float:
    """2 c dp^2 / hbar in MeV/cm, for dp in MeV/c."""
    if not delta_p > 0:
        raise DomainError(f"delta_p must be positive, got {delta_p}")
    return 2.0 * delta_p**2 / HBAR_C_MEV_CM
