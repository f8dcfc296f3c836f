"""Operator algebra of the noncommuting two-body representation and the
N-body kinetic form it induces.

The two-body check works on the space of polynomials in the relative
coordinate x and the centre-of-mass coordinate X, stored as coefficient
arrays ``P[a, b]`` for x**a X**b.  Multiplication by x or X and the partial
derivatives act exactly there, so commutators of the degree-one operators are
obtained without round-off beyond the arithmetic on their coefficients.
hbar = 1 throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ncbound.errors import DomainError, RepresentationMismatch

TEST_DEGREE = 6


@dataclass(frozen=True)
class TwoBodyRep:
    m1: float
    m2: float
    epsilon: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise DomainError("masses must be positive")
        if not 0 <= self.epsilon < 1:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon}")

    @property
    def total_mass(self) -> float:
        return self.m1 + self.m2


class EpsilonMatrix:
    """Symmetric, zero-diagonal matrix of pairwise noncommutativity parameters."""

    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 2:
            raise DomainError("epsilon matrix must be square with N >= 2")
        if not np.array_equal(values, values.T):
            raise DomainError("epsilon matrix must be symmetric")
        if np.any(np.diag(values) != 0):
            raise DomainError("epsilon matrix must have a zero diagonal")
        if np.any(values < 0) or np.any(values >= 1):
            raise DomainError("epsilon entries must lie in [0, 1)")
        values.flags.writeable = False
        self.values = values

    @classmethod
    def uniform(cls, size: int, eps: float) -> "EpsilonMatrix":
        return cls(eps * (np.ones((size, size)) - np.eye(size)))

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __repr__(self):
        return f"EpsilonMatrix({self.values.tolist()!r})"


@dataclass(frozen=True)
class KineticCoefficients:
    A: np.ndarray
    B: np.ndarray  # upper triangle holds B_ik for i < k; the rest is zero


# -- polynomial operators ------------------------------------------------------

class _Op:
    """Linear combination of the elementary maps on coefficient arrays."""

    def __init__(self, terms):
        self.terms = terms  # list of (coefficient, elementary map)

    def __call__(self, poly):
        out = np.zeros_like(poly)
        for coeff, fn in self.terms:
            out = out + coeff * fn(poly)
        return out

    def __add__(self, other):
        return _Op(self.terms + other.terms)

    def __rmul__(self, scalar):
        return _Op([(scalar * c, fn) for c, fn in self.terms])


def _mul(axis):
    def fn(p):
        out = np.zeros_like(p)
        if axis == 0:
            out[1:, :] = p[:-1, :]
        else:
            out[:, 1:] = p[:, :-1]
        return out
    return _Op([(1.0, fn)])


def _diff(axis):
    def fn(p):
        out = np.zeros_like(p)
        k = np.arange(1, p.shape[axis])
        if axis == 0:
            out[:-1, :] = k[:, None] * p[1:, :]
        else:
            out[:, :-1] = k[None, :] * p[:, 1:]
        return out
    return _Op([(1.0, fn)])


def representation(rep: TwoBodyRep):
    """The operators x1, x2, p1, p2 (one Cartesian component each)."""
    M = rep.total_mass
    s = 1.0 - rep.epsilon
    x, X = _mul(0), _mul(1)
    dx, dX = _diff(0), _diff(1)
    x1 = (-s * rep.m2 / M) * x + X
    x2 = (s * rep.m1 / M) * x + X
    p1 = 1j * dx + (-1j * rep.m1 / M) * dX
    p2 = (-1j) * dx + (-1j * rep.m2 / M) * dX
    return x1, x2, p1, p2


def commutator_scalar(A, B, degree: int = TEST_DEGREE) -> complex:
    """The c-number c with [A, B] = c * identity on polynomials of degree <= ``degree``.

    Raises RepresentationMismatch if [A, B] is not a multiple of the identity.
    """
    size = degree + 2
    value = None
    for a, b in itertools.product(range(degree + 1), repeat=2):
        if a + b > degree:
            continue
        basis = np.zeros((size, size), dtype=complex)
        basis[a, b] = 1.0
        image = A(B(basis)) - B(A(basis))
        lam = image[a, b]
        rest = image.copy()
        rest[a, b] = 0.0
        if np.max(np.abs(rest)) > 1e-13:
            raise RepresentationMismatch(f"commutator moves x^{a} X^{b} off its own span")
        if value is None:
            value = lam
        elif abs(lam - value) > 1e-13:
            raise RepresentationMismatch("commutator eigenvalue differs between basis monomials")
    return complex(value)


COMMUTATOR_LABELS = ("[x1,p1]", "[x2,p2]", "[x1,p2]", "[x2,p1]", "[x1,x2]", "[p1,p2]")


def commutator_table(rep: TwoBodyRep) -> tuple[float, ...]:
    """The six commutators, position-momentum ones in units of i*hbar.

    The result doubles as the table of quantum Poisson brackets.
    """
    x1, x2, p1, p2 = representation(rep)
    mixed = [commutator_scalar(a, b) / 1j for a, b in ((x1, p1), (x2, p2), (x1, p2), (x2, p1))]
    same = [commutator_scalar(x1, x2), commutator_scalar(p1, p2)]
    values = mixed + same
    for v in values:
        if abs(v.imag) > 1e-13:
            raise RepresentationMismatch(f"unexpected phase in commutator value {v}")
    return tuple(float(v.real) for v in values)


def expected_commutators(rep: TwoBodyRep) -> tuple[float, ...]:
    M, e = rep.total_mass, rep.epsilon
    return (1 - rep.m2 * e / M, 1 - rep.m1 * e / M, rep.m2 * e / M, rep.m1 * e / M, 0.0, 0.0)


# -- epsilon kernel ------------------------------------------------------------

def epsilon_kernel(force_squared: float, mu: float, omega: float, hbar_c: float = 1.0) -> float:
    """1 - exp(-omega * (hbar c)^2 / (16 (mu c^2)^4) * F^2).

    ``mu`` is the pair's reduced rest energy mu c^2, in the same energy unit
    as ``hbar_c`` and ``force_squared``.
    """
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if force_squared < 0 or omega < 0:
        raise DomainError("force_squared and omega must be non-negative")
    return -np.expm1(-omega * hbar_c**2 / (16.0 * mu**4) * force_squared)


# -- N-body kinetic form -------------------------------------------------------

def _check_masses(masses, eps: EpsilonMatrix):
    masses = np.asarray(masses, dtype=float)
    if masses.ndim != 1 or masses.size != eps.size:
        raise DomainError(f"got {masses.size} masses for a {eps.size}x{eps.size} epsilon matrix")
    if np.any(masses <= 0):
        raise DomainError("masses must be positive")
    return masses


def kinetic_coefficients(masses, eps: EpsilonMatrix) -> KineticCoefficients:
    m = _check_masses(masses, eps)
    E = eps.values
    M = m.sum()
    w = m / M
    s = E @ w  # s_i = sum_q (m_q/M) eps_iq
    A = (1.0 - s) ** 2 + (m / M**2) * (E**2 @ m)
    B = (2.0 - (s[:, None] + s[None, :])) * E + (E * w) @ E.T
    return KineticCoefficients(A=A, B=np.triu(B, k=1))


def kinetic_matrix(masses, eps: EpsilonMatrix) -> np.ndarray:
    """Symmetric K with T = -(hbar^2/2) sum_ik K_ik grad_i . grad_k."""
    m = _check_masses(masses, eps)
    coeffs = kinetic_coefficients(m, eps)
    upper = coeffs.B / m.sum()
    return np.diag(coeffs.A / m) + upper + upper.T


def jacobi_matrix(masses) -> np.ndarray:
    """Rows 0..N-2: normed Jacobi coordinates; row N-1: the centre of mass.

    q_k = sqrt(mu_k / m_ref) (R_k - r_{k+1}) with R_k the centre of mass of the
    first k particles, mu_k = M_k m_{k+1} / M_{k+1} and m_ref = M / N, which
    reduces to the usual normed coordinates for identical masses.
    """
    m = np.asarray(masses, dtype=float)
    N = m.size
    M = m.sum()
    m_ref = M / N
    J = np.zeros((N, N))
    for k in range(1, N):
        Mk = m[:k].sum()
        mu_k = Mk * m[k] / (Mk + m[k])
        J[k - 1, :k] = m[:k] / Mk
        J[k - 1, k] = -1.0
        J[k - 1] *= np.sqrt(mu_k / m_ref)
    J[N - 1] = m / M
    return J


def com_separation_check(masses, eps: EpsilonMatrix, atol: float = 1e-12):
    """Kinetic form in Jacobi coordinates.

    Returns (com_coefficient, relative_block, decoupled): the coefficient of
    the centre-of-mass Laplacian (1/M when separation holds), the (N-1)x(N-1)
    block acting on relative coordinates, and whether the mixed entries vanish
    to ``atol``.
    """
    m = _check_masses(masses, eps)
    K = kinetic_matrix(m, eps)
    J = jacobi_matrix(m)
    T = J @ K @ J.T
    mixed = T[-1, :-1]
    return float(T[-1, -1]), T[:-1, :-1], bool(np.all(np.abs(mixed) <= atol))


def kinetic_energy_bound_check(masses, eps: EpsilonMatrix, atol: float = 1e-12) -> bool:
    """True when the relative kinetic form does not exceed its eps = 0 value."""
    m = _check_masses(masses, eps)
    _, rel, _ = com_separation_check(m, eps)
    _, rel0, _ = com_separation_check(m, EpsilonMatrix(np.zeros((m.size, m.size))))
    return bool(np.all(np.linalg.eigvalsh(rel0 - rel) >= -atol))
