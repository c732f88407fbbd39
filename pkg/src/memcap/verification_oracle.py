"""
Brute-force cross-checks that share no code path with the closed forms.

* :func:`numeric_symplectic_spectrum` factors Gamma = L L^T, forms the
  antisymmetric M = L^T Omega L and diagonalizes the symmetric M^T M with
  cyclic Jacobi rotations. M^T M is similar to -Omega Gamma Omega Gamma,
  whose eigenvalues are the squared symplectic values (each twice).
* :func:`monte_carlo_channel_moments` samples the noise displacements.
* :func:`grid_search_optimum` scans the (y, eta) box exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity_opt import transmission_rate
from .errors import ConvergenceError, DomainError, PhysicalityError
from .gaussian_core import J4, BimodalCovariance, SymplecticPair
from .memory_channel import ChannelSpec, InputStrategy, apply_channel, noise_covariance

JACOBI_MAX_SWEEPS = 50
JACOBI_TOL = 1e-14
MC_MIN_SAMPLES = 10_000
MC_SHARD_SIZE = 1 << 18


@dataclass(frozen=True)
class MonteCarloReport:
    sample_count: int
    seed: int
    empirical_covariance: BimodalCovariance
    max_abs_deviation: float


def _cholesky(a: list[list[float]], semidefinite: bool = False) -> list[list[float]]:
    """Lower Cholesky factor; with `semidefinite`, zero pivots yield zero columns."""
    n = len(a)
    low = [[0.0] * n for _ in range(n)]
    for j in range(n):
        pivot = a[j][j] - sum(low[j][k] ** 2 for k in range(j))
        scale = max(abs(a[i][i]) for i in range(n)) or 1.0
        if pivot <= 1e-14 * scale:
            if semidefinite and pivot > -1e-12 * scale:
                continue
            raise PhysicalityError("covariance matrix is not positive definite")
        d = math.sqrt(pivot)
        low[j][j] = d
        for i in range(j + 1, n):
            low[i][j] = (a[i][j] - sum(low[i][k] * low[j][k] for k in range(j))) / d
    return low


def jacobi_eigenvalues(s: list[list[float]], max_sweeps: int = JACOBI_MAX_SWEEPS) -> list[float]:
    """
    Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.

    An off-diagonal entry is zeroed once it falls below JACOBI_TOL times the
    geometric mean of its two diagonal entries. Exact machine epsilon would
    stall on degenerate pairs, where each rotation recreates an eps-sized entry.
    """
    a = [row[:] for row in s]
    n = len(a)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) <= JACOBI_TOL * math.sqrt(abs(a[p][p] * a[q][q])):
                    a[p][q] = a[q][p] = 0.0
                    continue
                rotated = True
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - sn * akq
                    a[k][q] = sn * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - sn * aqk
                    a[q][k] = sn * apk + c * aqk
        if not rotated:
            return sorted(a[i][i] for i in range(n))
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def numeric_symplectic_spectrum(cov: BimodalCovariance) -> SymplecticPair:
    g = cov.matrix().tolist()
    low = _cholesky(g)
    omega = J4.tolist()
    n = 4
    # M = L^T Omega L
    om_l = [[sum(omega[i][k] * low[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    m = [[sum(low[k][i] * om_l[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    mtm = [[sum(m[k][i] * m[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ev = jacobi_eigenvalues(mtm)
    minus_sq = 0.5 * (ev[0] + ev[1])
    plus_sq = 0.5 * (ev[2] + ev[3])
    if minus_sq <= 0.0:
        raise PhysicalityError("non-positive squared symplectic value")
    return SymplecticPair(math.sqrt(plus_sq), math.sqrt(minus_sq))


def monte_carlo_channel_moments(
    cov_in: BimodalCovariance, channel: ChannelSpec, samples: int = 1_000_000, seed: int = 0
) -> MonteCarloReport:
    """
    Estimate the output covariance by sampling noise displacements.

    Displacements are zero-mean Gaussian with the noise covariance, drawn
    as L z with L its (semidefinite) Cholesky factor. Samples are drawn in
    fixed-size shards, each from its own PCG64 stream spawned from `seed`,
    so results depend only on (samples, seed).
    """
    if samples < MC_MIN_SAMPLES:
        raise DomainError(f"samples must be >= {MC_MIN_SAMPLES}, got {samples}")
    low = np.array(_cholesky(noise_covariance(channel).matrix().tolist(), semidefinite=True))
    n_shards = -(-samples // MC_SHARD_SIZE)
    streams = np.random.SeedSequence(seed).spawn(n_shards)
    second = np.zeros((4, 4))
    remaining = samples
    for stream in streams:
        size = min(MC_SHARD_SIZE, remaining)
        z = np.random.Generator(np.random.PCG64(stream)).standard_normal((size, 4))
        d = z @ low.T
        second += d.T @ d
        remaining -= size
    second /= samples
    second = 0.5 * (second + second.T)
    empirical = BimodalCovariance.from_matrix(cov_in.matrix() + second)
    analytic = apply_channel(cov_in, channel)
    deviation = float(np.max(np.abs(empirical.matrix() - analytic.matrix())))
    return MonteCarloReport(samples, seed, empirical, deviation)


def grid_search_optimum(nbar: float, channel: ChannelSpec, resolution: int = 201) -> tuple[float, float, float]:
    """Best (eta, y, R) on a uniform resolution x resolution grid over [0,1] x [-1,1]."""
    if resolution < 11:
        raise DomainError(f"resolution must be >= 11, got {resolution}")
    best = (0.0, 0.0, -math.inf)
    ys = np.linspace(-1.0, 1.0, resolution)
    for eta in np.linspace(0.0, 1.0, resolution):
        for y in ys:
            r = transmission_rate(InputStrategy(nbar, float(eta), float(y)), channel).rate
            if r > best[2]:
                best = (float(eta), float(y), r)
    return best


def random_symplectic(rng: np.random.Generator, max_squeeze: float = 1.0) -> np.ndarray:
    """Random two-mode symplectic matrix: rotations, single-mode squeezers and a beam splitter."""

    def rotation(phi):
        c, s = math.cos(phi), math.sin(phi)
        return np.array([[c, -s], [s, c]])

    def local(a, b):
        out = np.zeros((4, 4))
        out[:2, :2], out[2:, 2:] = a, b
        return out

    def squeezers():
        r1, r2 = rng.uniform(-max_squeeze, max_squeeze, 2)
        return local(np.diag([math.exp(-r1), math.exp(r1)]), np.diag([math.exp(-r2), math.exp(r2)]))

    theta = rng.uniform(0.0, 2.0 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    splitter = np.block([[c * np.eye(2), -s * np.eye(2)], [s * np.eye(2), c * np.eye(2)]])
    phases = rng.uniform(0.0, 2.0 * math.pi, 4)
    return (
        local(rotation(phases[0]), rotation(phases[1]))
        @ squeezers()
        @ splitter
        @ squeezers()
        @ local(rotation(phases[2]), rotation(phases[3]))
    )


def random_physical_covariance(rng: np.random.Generator, max_squeeze: float = 1.0, noise_scale: float = 1.0) -> BimodalCovariance:
    """Pure Gaussian state S S^T / 2 plus a random positive semidefinite term."""
    s = random_symplectic(rng, max_squeeze)
    b = rng.normal(size=(4, 4)) * rng.uniform(0.0, noise_scale)
    return BimodalCovariance.from_matrix(0.5 * s @ s.T + b @ b.T, atol=1e-9)
