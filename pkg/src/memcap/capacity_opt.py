"""
Transmission rates and their optimization over (y, eta).

The search over the feasible box [-1, 1] x [0, 1] starts from a coarse
grid, then refines with golden-section searches: the inner search solves
for y at fixed eta, the outer search moves eta along the resulting
profile. The inner problem is solved to full tolerance at every outer
step, so a single outer pass is a converged coordinate-wise ascent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError
from .gaussian_core import EPS_CLIP, thermal_entropy
from .memory_channel import ChannelSpec, InputStrategy, uv_parameters

GRID_POINTS = 41
PARAM_TOL = 1e-9
RATE_TIE_TOL = 1e-12
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RateReport:
    lambda_out: float
    lambda_bar: float
    s_out: float
    s_bar: float
    rate: float


@dataclass(frozen=True)
class Optimum:
    eta_star: float
    y_star: float
    capacity: float
    squeezing_db: float
    gain: float


class ScalarMax(NamedTuple):
    argmax: float
    value: float


def memoryless_capacity(nbar: float, noise: float) -> float:
    """One-shot capacity g(nbar + N) - g(N) of the memoryless thermal channel, in bits per use."""
    if not nbar > 0.0:
        raise DomainError(f"photon budget nbar must be > 0, got {nbar!r}")
    if noise < 0.0:
        raise DomainError(f"noise photon number must be >= 0, got {noise!r}")
    return thermal_entropy(nbar + noise) - thermal_entropy(noise)


def _clamp_rate(rate: float) -> float:
    return 0.0 if -EPS_CLIP <= rate < 0.0 else rate


def transmission_rate(strategy: InputStrategy, channel: ChannelSpec) -> RateReport:
    uv = uv_parameters(strategy, channel)
    s_out = thermal_entropy(max(uv.lambda_out - 0.5, 0.0))
    s_bar = thermal_entropy(max(uv.lambda_bar - 0.5, 0.0))
    return RateReport(uv.lambda_out, uv.lambda_bar, s_out, s_bar, _clamp_rate(s_bar - s_out))


def _rate(y: float, eta: float, nbar: float, channel: ChannelSpec) -> float:
    return transmission_rate(InputStrategy(nbar, eta, y), channel).rate


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float = PARAM_TOL, max_iter: int = 200
) -> ScalarMax:
    """
    Maximize a unimodal scalar function on [lo, hi].

    The interval endpoints are evaluated too, so maxima on the boundary
    are returned exactly rather than to within `tol`.
    """
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    best = ScalarMax(x1, f1) if f1 >= f2 else ScalarMax(x2, f2)
    for edge in (lo, hi):
        value = f(edge)
        if value > best.value:
            best = ScalarMax(edge, value)
    return best


def optimal_y(eta: float, nbar: float, channel: ChannelSpec) -> ScalarMax:
    """Best classical correlation at fixed entanglement fraction; returns (y*, R(y*, eta))."""
    if eta >= 1.0:
        return ScalarMax(0.0, _rate(0.0, 1.0, nbar, channel))
    return golden_section_max(lambda y: _rate(y, eta, nbar, channel), -1.0, 1.0)


def squeezing_db(eta: float, nbar: float) -> float:
    """Two-mode squeezing in dB, 10 log10(exp(2r)) with sinh(r)**2 = eta * nbar."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"entanglement fraction eta must lie in [0, 1], got {eta!r}")
    if not nbar > 0.0:
        raise DomainError(f"photon budget nbar must be > 0, got {nbar!r}")
    r = math.asinh(math.sqrt(eta * nbar))
    return 20.0 * r * math.log10(math.e)


def _grid_best(nbar: float, channel: ChannelSpec, points: int = GRID_POINTS) -> tuple[float, float, float]:
    best = (0.0, 0.0, -math.inf)
    for eta in np.linspace(0.0, 1.0, points):
        for y in np.linspace(-1.0, 1.0, points):
            r = _rate(float(y), float(eta), nbar, channel)
            if r > best[2]:
                best = (float(eta), float(y), r)
    return best


@lru_cache(maxsize=4096)
def _optimize(nbar: float, channel: ChannelSpec) -> tuple[float, float, float]:
    eta0, _, _ = _grid_best(nbar, channel)
    step = 1.0 / (GRID_POINTS - 1)
    lo, hi = max(0.0, eta0 - step), min(1.0, eta0 + step)
    eta_star, rate_star = golden_section_max(lambda e: optimal_y(e, nbar, channel).value, lo, hi)

    y_zero, rate_zero = optimal_y(0.0, nbar, channel)
    if rate_zero >= rate_star - RATE_TIE_TOL:
        return 0.0, y_zero, rate_zero
    return eta_star, optimal_y(eta_star, nbar, channel).argmax, rate_star


def optimal_strategy(nbar: float, channel: ChannelSpec) -> Optimum:
    """Maximize the rate over (y, eta); also reports squeezing and entanglement gain."""
    if not nbar > 0.0:
        raise DomainError(f"photon budget nbar must be > 0, got {nbar!r}")
    eta_star, y_star, capacity = _optimize(float(nbar), channel)
    baseline = optimal_y(0.0, nbar, channel).value
    return Optimum(eta_star, y_star, capacity, squeezing_db(eta_star, nbar), _gain(capacity, baseline))


def _gain(capacity: float, baseline: float) -> float:
    if not baseline > 0.0:
        raise DomainError("unentangled rate is zero; gain is undefined")
    return capacity / baseline


def capacity_gain(nbar: float, channel: ChannelSpec) -> float:
    """Ratio of the (y, eta)-optimized rate to the best unentangled (eta = 0) rate."""
    return optimal_strategy(nbar, channel).gain
