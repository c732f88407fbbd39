"""
Additive thermal-noise channel with memory between two consecutive uses.

The noise added to the q quadratures of the two uses is anticorrelated and
the noise on the p quadratures is correlated, both with coefficient ``x``.
Inputs are two-mode squeezed vacua carrying a fraction ``eta`` of the
photon budget, displaced by a Gaussian modulation carrying the rest, with
classical correlation ``+y`` on q and ``-y`` on p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, PhysicalityError
from .gaussian_core import EPS_CLIP, BimodalCovariance, MonoCovariance, _two_product

UV_TOL = 1e-12


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ChannelSpec:
    """Thermal noise photons per mode and memory coefficient in [0, 1]."""

    noise: float
    memory: float = 0.0

    def __post_init__(self):
        _check_finite("noise", self.noise)
        _check_finite("memory", self.memory)
        if self.noise < 0.0:
            raise DomainError(f"noise photon number must be >= 0, got {self.noise!r}")
        if not 0.0 <= self.memory <= 1.0:
            raise DomainError(f"memory coefficient must lie in [0, 1], got {self.memory!r}")


@dataclass(frozen=True)
class InputStrategy:
    """Photon budget per mode, entanglement fraction and classical correlation."""

    nbar: float
    eta: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        for name in ("nbar", "eta", "y"):
            _check_finite(name, getattr(self, name))
        if self.nbar <= 0.0:
            raise DomainError(f"photon budget nbar must be > 0, got {self.nbar!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"entanglement fraction eta must lie in [0, 1], got {self.eta!r}")
        if not -1.0 <= self.y <= 1.0:
            raise DomainError(f"classical correlation y must lie in [-1, 1], got {self.y!r}")

    @property
    def squeezing_photons(self) -> float:
        """Mean photons per mode spent on squeezing, sinh(r)**2."""
        return self.eta * self.nbar

    @property
    def modulation_variance(self) -> float:
        return (1.0 - self.eta) * self.nbar


class UVParameters(NamedTuple):
    u_out: float
    v_out: float
    u_bar: float
    v_bar: float
    lambda_out: float
    lambda_bar: float


def noise_covariance(channel: ChannelSpec) -> BimodalCovariance:
    n, xn = channel.noise, channel.memory * channel.noise
    return BimodalCovariance(
        MonoCovariance(n, n, 0.0), MonoCovariance(n, n, 0.0), (-xn, 0.0, 0.0, xn)
    )


def tmsv_input_covariance(eta: float, nbar: float) -> BimodalCovariance:
    """
    Two-mode squeezed vacuum with ``sinh(r)**2 = eta * nbar``.

    Uses cosh(2r) = 1 + 2 sinh(r)**2 and sinh(2r) = 2 sqrt(m (1 + m)) so no
    hyperbolic functions of large arguments are evaluated. The cross term is
    corrected to the double nearest sqrt(diag**2 - 1/4), which keeps the
    stored matrix as close to pure as float64 allows. For very strong
    squeezing that floor exceeds the clip tolerance; the cross term is then
    rounded down so the stored state never falls below the vacuum bound.
    """
    _check_finite("eta", eta)
    _check_finite("nbar", nbar)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"entanglement fraction eta must lie in [0, 1], got {eta!r}")
    if nbar <= 0.0:
        raise DomainError(f"photon budget nbar must be > 0, got {nbar!r}")
    m = eta * nbar
    diag = 0.5 + m
    cross = math.sqrt(m * (1.0 + m))
    if cross > 0.0:
        residual = math.fsum([*_two_product(diag, diag), -0.25, *_two_product(-cross, cross)])
        cross += residual / (2.0 * cross)
        while math.fsum([*_two_product(diag, diag), -0.25, *_two_product(-cross, cross)]) < -EPS_CLIP:
            cross = math.nextafter(cross, 0.0)
    mode = MonoCovariance(diag, diag, 0.0)
    return BimodalCovariance(mode, mode, (-cross, 0.0, 0.0, cross))


def apply_channel(cov_in: BimodalCovariance, channel: ChannelSpec) -> BimodalCovariance:
    return cov_in + noise_covariance(channel)


def modulated_mixture_covariance(strategy: InputStrategy, channel: ChannelSpec) -> BimodalCovariance:
    """Covariance of the ensemble average of channel outputs (block form)."""
    out = apply_channel(tmsv_input_covariance(strategy.eta, strategy.nbar), channel)
    mod = strategy.modulation_variance
    ym = strategy.y * mod
    modulation = BimodalCovariance(
        MonoCovariance(mod, mod, 0.0), MonoCovariance(mod, mod, 0.0), (ym, 0.0, 0.0, -ym)
    )
    return out + modulation


def uv_parameters(strategy: InputStrategy, channel: ChannelSpec) -> UVParameters:
    """
    Closed-form parameters of the doubly degenerate output and mixture states.

    Each symplectic value is sqrt(u**2 - v**2), evaluated as
    sqrt((u - v) * (u + v)) with ``u - v`` rewritten so every term is
    non-negative; ``1/2 + m - sqrt(m (1 + m))`` equals
    ``1/4 / (1/2 + m + sqrt(m (1 + m)))``.
    """
    nbar, eta, y = strategy.nbar, strategy.eta, strategy.y
    n, x = channel.noise, channel.memory
    m = eta * nbar
    s = math.sqrt(m * (1.0 + m))
    mod = (1.0 - eta) * nbar

    u_out = 0.5 + m + n
    v_out = s + x * n
    u_bar = 0.5 + nbar + n
    v_bar = s + x * n - y * mod

    out_minus = 0.25 / (0.5 + m + s) + n * (1.0 - x)  # u_out - v_out
    out_plus = u_out + v_out
    out_sq = out_minus * out_plus
    bar_sq = (out_minus + mod * (1.0 + y)) * (out_plus + mod * (1.0 - y))
    if out_sq < 0.25 - UV_TOL or bar_sq < 0.25 - UV_TOL:
        raise PhysicalityError(
            f"u/v parameters violate the uncertainty bound (out={out_sq!r}, mixture={bar_sq!r})"
        )
    return UVParameters(u_out, v_out, u_bar, v_bar, math.sqrt(out_sq), math.sqrt(bar_sq))
