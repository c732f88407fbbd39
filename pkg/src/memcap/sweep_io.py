"""
Parameter sweeps for the four figure presets and their CSV/JSON emission.

Figure 1: y-optimized rate against eta at fixed nbar and N.
Figures 2-4: eta*, y* and the gain G against nbar at fixed nbar/N.
Each preset yields one series per memory coefficient x.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .capacity_opt import optimal_strategy, optimal_y
from .errors import DomainError, MemcapError
from .memory_channel import ChannelSpec

DEFAULT_MEMORIES = (0.0, 0.3, 0.5, 0.7, 1.0)
FIG1_NBAR = 1.0
FIG1_NOISE = 1.0 / 3.0
DEFAULT_SNR = 3.0
SIG_DIGITS = 12

ABSCISSA_LABELS = {1: "eta", 2: "nbar", 3: "nbar", 4: "nbar"}
ORDINATE_NAMES = {1: "R", 2: "eta_star", 3: "y_star", 4: "G"}


def default_axis(figure: int) -> tuple[float, ...]:
    if figure == 1:
        return tuple(float(v) for v in np.linspace(0.0, 1.0, 101))
    return tuple(float(v) for v in np.logspace(-2.0, 3.0, 26))


@dataclass(frozen=True)
class SweepSpec:
    """
    One sweep: preset number, axis values and the fixed parameters.

    Figure 1 holds ``nbar`` and ``noise`` fixed; figures 2-4 hold the
    signal-to-noise ratio ``snr = nbar / N`` fixed.
    """

    figure: int
    axis_values: tuple[float, ...] = ()
    memories: tuple[float, ...] = DEFAULT_MEMORIES
    nbar: float = FIG1_NBAR
    noise: float = FIG1_NOISE
    snr: float = DEFAULT_SNR
    output_format: str = "csv"

    def __post_init__(self):
        if self.figure not in ABSCISSA_LABELS:
            raise DomainError(f"figure must be one of 1, 2, 3, 4, got {self.figure!r}")
        if not self.axis_values:
            object.__setattr__(self, "axis_values", default_axis(self.figure))
        values = tuple(float(v) for v in self.axis_values)
        object.__setattr__(self, "axis_values", values)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("axis values must be strictly increasing")
        if self.figure == 1 and not all(0.0 <= v <= 1.0 for v in values):
            raise DomainError("figure 1 sweeps eta, which must lie in [0, 1]")
        if self.figure != 1 and not all(v > 0.0 for v in values):
            raise DomainError(f"figure {self.figure} sweeps nbar, which must be > 0")
        if not self.memories:
            raise DomainError("at least one memory coefficient is required")
        for x in self.memories:
            ChannelSpec(0.0, x)
        if self.snr <= 0.0:
            raise DomainError(f"snr must be > 0, got {self.snr!r}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"output format must be csv or json, got {self.output_format!r}")

    @property
    def abscissa_label(self) -> str:
        return ABSCISSA_LABELS[self.figure]

    def series_label(self, memory: float) -> str:
        return f"{ORDINATE_NAMES[self.figure]}[x={memory:g}]"


@dataclass(frozen=True)
class SweepRow:
    abscissa: float
    series: dict[str, float] = field(default_factory=dict)


def _check_row(spec: SweepSpec, row: SweepRow) -> SweepRow:
    for label, value in row.series.items():
        if not math.isfinite(value):
            raise MemcapError(f"non-finite ordinate {label}={value!r} at {row.abscissa!r}")
    return row


def sweep_row(spec: SweepSpec, value: float) -> SweepRow:
    """Evaluate every series of `spec` at one abscissa value."""
    series = {}
    for x in spec.memories:
        if spec.figure == 1:
            ordinate = optimal_y(value, spec.nbar, ChannelSpec(spec.noise, x)).value
        else:
            opt = optimal_strategy(value, ChannelSpec(value / spec.snr, x))
            ordinate = {2: opt.eta_star, 3: opt.y_star, 4: opt.gain}[spec.figure]
        series[spec.series_label(x)] = ordinate
    return _check_row(spec, SweepRow(value, series))


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    return [sweep_row(spec, v) for v in spec.axis_values]


def _preset(figure: int, spec: Optional[SweepSpec]) -> SweepSpec:
    spec = spec or SweepSpec(figure)
    if spec.figure != figure:
        raise DomainError(f"expected a figure {figure} sweep spec, got figure {spec.figure}")
    return spec


def figure1_sweep(spec: Optional[SweepSpec] = None) -> list[SweepRow]:
    """Rows of (eta, max_y R) per memory coefficient at fixed nbar and N."""
    return run_sweep(_preset(1, spec))


def figure2_sweep(spec: Optional[SweepSpec] = None) -> list[SweepRow]:
    """Rows of (nbar, eta*) per memory coefficient at fixed nbar/N."""
    return run_sweep(_preset(2, spec))


def figure3_sweep(spec: Optional[SweepSpec] = None) -> list[SweepRow]:
    """Rows of (nbar, y*) per memory coefficient at fixed nbar/N."""
    return run_sweep(_preset(3, spec))


def figure4_sweep(spec: Optional[SweepSpec] = None) -> list[SweepRow]:
    """Rows of (nbar, G) per memory coefficient at fixed nbar/N."""
    return run_sweep(_preset(4, spec))


FIGURES = {1: figure1_sweep, 2: figure2_sweep, 3: figure3_sweep, 4: figure4_sweep}


def format_number(value: float) -> str:
    return f"{value:.{SIG_DIGITS}g}"


def _header(rows: Sequence[SweepRow], abscissa_label: str) -> list[str]:
    return [abscissa_label, *rows[0].series.keys()]


def to_csv(rows: Sequence[SweepRow], abscissa_label: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = _header(rows, abscissa_label)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(row.abscissa)] + [format_number(row.series[k]) for k in header[1:]])
    return buf.getvalue()


def to_json(rows: Sequence[SweepRow], abscissa_label: str) -> str:
    header = _header(rows, abscissa_label)
    records = [dict(zip(header, [row.abscissa] + [row.series[k] for k in header[1:]])) for row in rows]
    return json.dumps(records, indent=2) + "\n"


def emit(
    rows: Sequence[SweepRow],
    fmt: str = "csv",
    destination: Union[str, Path, None] = None,
    abscissa_label: str = "abscissa",
) -> str:
    """
    Serialize sweep rows; write them to `destination` if given.

    CSV values carry 12 significant digits. JSON keeps full float
    precision so that parsing it back reproduces every value exactly.
    """
    if not rows:
        raise DomainError("nothing to emit: no rows")
    if fmt == "csv":
        text = to_csv(rows, abscissa_label)
    elif fmt == "json":
        text = to_json(rows, abscissa_label)
    else:
        raise DomainError(f"unknown output format {fmt!r}")
    if destination is not None:
        path = Path(destination)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text
