"""Classical capacity of bosonic Gaussian channels with correlated thermal noise."""

from .capacity_opt import (
    Optimum,
    RateReport,
    capacity_gain,
    memoryless_capacity,
    optimal_strategy,
    optimal_y,
    squeezing_db,
    transmission_rate,
)
from .errors import ConvergenceError, DomainError, MemcapError, PhysicalityError
from .gaussian_core import (
    BimodalCovariance,
    MonoCovariance,
    SymplecticPair,
    entropy_of_state,
    is_physical,
    symplectic_value_mono,
    symplectic_values_bimodal,
    thermal_entropy,
)
from .memory_channel import (
    ChannelSpec,
    InputStrategy,
    apply_channel,
    modulated_mixture_covariance,
    noise_covariance,
    tmsv_input_covariance,
    uv_parameters,
)

__version__ = "0.1.0"
