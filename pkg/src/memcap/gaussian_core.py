"""
Covariance matrices of one- and two-mode Gaussian states.

Conventions: hbar = 1, so the vacuum has quadrature variance 1/2 and a
pure state has symplectic value 1/2. Entropies are in bits. Two-mode
matrices use the quadrature ordering [q1, p1, q2, p2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, PhysicalityError

EPS_CLIP = 1e-9
_LN2 = math.log(2.0)
_SPLITTER = 134217729.0  # 2**27 + 1
DISCRIMINANT_TOL = 1e-12

# Single-mode symplectic form; the two-mode form is J (+) J.
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
J4 = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])


@dataclass(frozen=True)
class MonoCovariance:
    """Second moments of a single mode: var(q), var(p) and the symmetrized q-p term."""

    vqq: float
    vpp: float
    vqp: float = 0.0

    @classmethod
    def vacuum(cls) -> MonoCovariance:
        return cls(0.5, 0.5, 0.0)

    @classmethod
    def thermal(cls, n: float) -> MonoCovariance:
        return cls(n + 0.5, n + 0.5, 0.0)

    @classmethod
    def from_matrix(cls, m) -> MonoCovariance:
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0]), float(m[1, 1]), 0.5 * float(m[0, 1] + m[1, 0]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.vqq, self.vqp], [self.vqp, self.vpp]])

    @property
    def det(self) -> float:
        return self.vqq * self.vpp - self.vqp * self.vqp

    def __add__(self, other: MonoCovariance) -> MonoCovariance:
        return MonoCovariance(self.vqq + other.vqq, self.vpp + other.vpp, self.vqp + other.vqp)


@dataclass(frozen=True)
class BimodalCovariance:
    """
    Two-mode covariance matrix stored in block form.

    ``sigma12`` holds the cross block row-major as
    ``(<q1 q2>, <q1 p2>, <p1 q2>, <p1 p2>)``. The 4x4 matrix returned by
    :meth:`matrix` is a derived view.
    """

    gamma1: MonoCovariance
    gamma2: MonoCovariance
    sigma12: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.sigma12) != 4:
            raise DomainError("sigma12 must have four entries")
        object.__setattr__(self, "sigma12", tuple(float(s) for s in self.sigma12))

    @classmethod
    def product(cls, gamma1: MonoCovariance, gamma2: MonoCovariance) -> BimodalCovariance:
        return cls(gamma1, gamma2)

    @classmethod
    def from_matrix(cls, m, atol: float = 1e-12) -> BimodalCovariance:
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.allclose(m, m.T, rtol=0.0, atol=atol * max(1.0, np.abs(m).max())):
            raise DomainError("covariance matrix is not symmetric")
        m = 0.5 * (m + m.T)
        c = m[:2, 2:]
        return cls(
            MonoCovariance.from_matrix(m[:2, :2]),
            MonoCovariance.from_matrix(m[2:, 2:]),
            (c[0, 0], c[0, 1], c[1, 0], c[1, 1]),
        )

    def cross_block(self) -> np.ndarray:
        return np.array(self.sigma12).reshape(2, 2)

    def matrix(self) -> np.ndarray:
        c = self.cross_block()
        return np.block([[self.gamma1.matrix(), c], [c.T, self.gamma2.matrix()]])

    def __add__(self, other: BimodalCovariance) -> BimodalCovariance:
        return BimodalCovariance(
            self.gamma1 + other.gamma1,
            self.gamma2 + other.gamma2,
            tuple(a + b for a, b in zip(self.sigma12, other.sigma12)),
        )


class SymplecticPair(NamedTuple):
    lambda_plus: float
    lambda_minus: float


class PhysicalityCheck(NamedTuple):
    physical: bool
    margin: float


def thermal_entropy(x: float) -> float:
    """
    Entropy in bits of a thermal state with mean photon number `x`.

    Arguments in ``[-1e-9, 0]`` are treated as zero.
    """
    if x < -EPS_CLIP or math.isnan(x):
        raise DomainError(f"thermal_entropy: mean photon number {x!r} is negative")
    if x <= 0.0:
        return 0.0
    if x < 1.0:
        return ((x + 1.0) * math.log1p(x) - x * math.log(x)) / _LN2
    # same function; avoids cancelling two terms of size x log x
    return (math.log1p(x) + x * math.log1p(1.0 / x)) / _LN2


def symplectic_value_mono(gamma: MonoCovariance) -> float:
    d = gamma.det
    if not d > 0.0 or gamma.vqq <= 0.0:
        raise PhysicalityError(f"single-mode covariance is not positive definite (det={d!r})")
    return math.sqrt(d)


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _two_product(a: float, b: float) -> tuple[float, float]:
    """Dekker's error-free product: a * b == hi + lo exactly."""
    hi = a * b
    t = _SPLITTER * a
    a_hi = t - (t - a)
    a_lo = a - a_hi
    t = _SPLITTER * b
    b_hi = t - (t - b)
    b_lo = b - b_hi
    lo = ((a_hi * b_hi - hi) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return hi, lo


def _exact_sum_of_products(pairs) -> float:
    """Correctly rounded sum of products a*b."""
    terms = []
    for a, b in pairs:
        terms.extend(_two_product(a, b))
    return math.fsum(terms)


def symplectic_values_bimodal(cov: BimodalCovariance) -> SymplecticPair:
    """
    Symplectic values of a two-mode covariance from its biquadratic.

    The squared values are the roots of
    ``t**2 - (det A + det B + 2 det C) t + det(Gamma) = 0`` where A, B are
    the diagonal blocks and C the cross block. The discriminant is
    evaluated as ``(det A - det B)**2 + 4 det(A J C + C J B)``, which is
    algebraically identical to ``Delta**2 - 4 det(Gamma)`` but vanishes
    exactly for the doubly degenerate states produced by the channel
    model instead of leaving sqrt(eps)-sized noise.
    """
    a = cov.gamma1.matrix()
    b = cov.gamma2.matrix()
    c = cov.cross_block()
    det_a, det_b, det_c = cov.gamma1.det, cov.gamma2.det, _det2(c)
    g1, g2, (c11, c12, c21, c22) = cov.gamma1, cov.gamma2, cov.sigma12
    # Delta cancels heavily for strongly entangled states; sum it exactly.
    delta = _exact_sum_of_products(
        [
            (g1.vqq, g1.vpp), (-g1.vqp, g1.vqp),
            (g2.vqq, g2.vpp), (-g2.vqp, g2.vqp),
            (2.0 * c11, c22), (-2.0 * c12, c21),
        ]
    )
    full = cov.matrix()
    det_full = float(np.linalg.det(full))
    if not _is_positive_definite(full) or not det_full > 0.0 or not delta > 0.0:
        raise PhysicalityError(
            f"two-mode covariance is not positive definite (det={det_full!r}, delta={delta!r})"
        )
    disc = (det_a - det_b) ** 2 + 4.0 * _det2(a @ J2 @ c + c @ J2 @ b)
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL * max(1.0, delta * delta):
            raise PhysicalityError(f"biquadratic discriminant is negative ({disc!r})")
        disc = 0.0
    root = math.sqrt(disc)
    plus_sq = 0.5 * (delta + root)
    if root <= 0.5 * delta:
        minus_sq = 0.5 * (delta - root)
    else:
        # Vieta avoids cancellation when the two values are far apart.
        minus_sq = det_full / plus_sq
    return SymplecticPair(math.sqrt(plus_sq), math.sqrt(minus_sq))


def entropy_of_state(lambdas: Union[SymplecticPair, float]) -> float:
    """
    Von Neumann entropy (bits) from symplectic values: sum of g(lambda - 1/2).

    Values within 1e-9 of 1/2 on either side count as pure.
    """
    values = (lambdas,) if isinstance(lambdas, (int, float)) else tuple(lambdas)
    total = 0.0
    for lam in values:
        if lam < 0.5 - EPS_CLIP or math.isnan(lam):
            raise PhysicalityError(f"symplectic value {lam!r} is below the vacuum bound 1/2")
        excess = lam - 0.5
        if excess > EPS_CLIP:
            total += thermal_entropy(excess)
    return total


def _is_positive_definite(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return True


def is_physical(cov: Union[MonoCovariance, BimodalCovariance]) -> PhysicalityCheck:
    """Uncertainty-principle check; ``margin`` is min(lambda) - 1/2 (``-inf`` if not positive definite)."""
    if not _is_positive_definite(cov.matrix()):
        return PhysicalityCheck(False, -math.inf)
    try:
        if isinstance(cov, MonoCovariance):
            lam_min = symplectic_value_mono(cov)
        else:
            lam_min = symplectic_values_bimodal(cov).lambda_minus
    except PhysicalityError:
        return PhysicalityCheck(False, -math.inf)
    margin = lam_min - 0.5
    return PhysicalityCheck(margin >= -EPS_CLIP, margin)
