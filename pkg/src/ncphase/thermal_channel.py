"""Markovian thermal diffusion of one mode, composed with the NC unitary flow.

Only mode 1 couples to the bath; mode 2 is traced out before the channel
acts, so the reduced state is diffused in closed form at every time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import metrics
from .errors import InvalidArgumentError
from .gaussian_core import GaussianState, make_initial_state, reduce_to_mode, thermal_state
from .nc_dynamics import Gauge, NCParams, coefficients, evolve_unitary, params_from_b0, params_from_theta_zeta, propagator


class CMScaling(str, Enum):
    PHYSICAL = "physical"
    LITERAL = "literal"


@dataclass(frozen=True)
class ChannelParams:
    Gamma: float = 0.1
    m_bar: float = 2.0

    def __post_init__(self):
        if not math.isfinite(self.Gamma) or self.Gamma <= 0:
            raise InvalidArgumentError(f"decay rate must be finite and positive, got {self.Gamma}")
        if not math.isfinite(self.m_bar) or self.m_bar < 0:
            raise InvalidArgumentError(f"environment occupancy must be finite and nonnegative, got {self.m_bar}")


def _envelope(sigma0, d0, channel: ChannelParams, t: float, scale: float = 1.0):
    decay = math.exp(-channel.Gamma * t)
    sigma = scale * decay * np.asarray(sigma0) + (1.0 - decay) * (2.0 * channel.m_bar + 1.0) * np.eye(2)
    d = math.exp(-0.5 * channel.Gamma * t) * np.asarray(d0)
    return GaussianState(d, sigma)


def diffuse(state: GaussianState, channel: ChannelParams, t: float) -> GaussianState:
    """Closed-form thermal-diffusion map applied for a time ``t``.

    ``sigma -> e^{-Gamma t} sigma + (1 - e^{-Gamma t})(2 m_bar + 1) I`` and
    ``d -> e^{-Gamma t / 2} d``.
    """
    if state.modes != 1:
        raise InvalidArgumentError("thermal diffusion acts on one-mode states")
    if not t >= 0:
        raise InvalidArgumentError(f"time must be nonnegative, got {t}")
    return _envelope(state.sigma, state.d, channel, t)


@dataclass(frozen=True)
class TrajectoryConfig:
    """Everything needed to generate a composed trajectory.

    Exactly one of ``B0`` or the ``(theta, zeta)`` pair selects the
    noncommutative parameters; with neither, ``B0 = 0``. ``units`` is
    ``(m, omega, hbar, q)``.
    """

    initial: tuple[float, float, float, float] = (1.0, 0.0, 1.0, 0.0)
    n_bar: float = 4.0
    channel: ChannelParams = field(default_factory=ChannelParams)
    B0: float | None = None
    gauge: Gauge = Gauge.POSITION_ONLY
    t_max: float = 100.0
    dt: float = 0.05
    cm_scaling: CMScaling = CMScaling.PHYSICAL
    theta: float | None = None
    zeta: float | None = None
    units: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "gauge", Gauge(self.gauge))
        object.__setattr__(self, "cm_scaling", CMScaling(self.cm_scaling))
        object.__setattr__(self, "initial", tuple(float(v) for v in self.initial))
        if len(self.initial) != 4:
            raise InvalidArgumentError("initial must be (x0, y0, px0, py0)")
        if not math.isfinite(self.n_bar) or self.n_bar < 0:
            raise InvalidArgumentError(f"system occupancy must be finite and nonnegative, got {self.n_bar}")
        if not (self.dt > 0 and self.t_max > 0 and self.dt < self.t_max):
            raise InvalidArgumentError(f"need 0 < dt < t_max, got dt={self.dt}, t_max={self.t_max}")
        if (self.theta is None) != (self.zeta is None):
            raise InvalidArgumentError("theta and zeta must be given together")
        if self.theta is not None and self.B0 is not None:
            raise InvalidArgumentError("give either B0 or (theta, zeta), not both")
        if any(u <= 0 for u in self.units):
            raise InvalidArgumentError(f"unit constants must be positive, got {self.units}")

    def nc_params(self) -> NCParams:
        m, omega, hbar, q = self.units
        if self.theta is not None:
            return params_from_theta_zeta(self.theta, self.zeta, m, omega, hbar, q)
        B0 = 0.0 if self.B0 is None else self.B0
        return params_from_b0(B0, self.gauge, m, omega, hbar, q)

    def times(self) -> np.ndarray:
        n = int(math.floor(self.t_max / self.dt + 1e-9))
        return np.arange(n + 1) * self.dt


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    state: GaussianState
    fidelity: float = float("nan")
    dfdt: float = float("nan")


def composed_trajectory(config: TrajectoryConfig) -> list[TrajectoryPoint]:
    """Reduced mode-1 state on the time grid, with fidelity to the asymptotic thermal state.

    At each time the two-mode initial state is carried by the exact NC
    propagator, reduced to mode 1 and passed through the diffusion envelope.
    Under ``physical`` scaling the initial covariance is ``(2 n_bar + 1) I``;
    under ``literal`` it is the unit-width ``I`` and the decaying term carries
    an extra factor ``n_bar``.
    """
    coeffs = coefficients(config.nc_params())
    base = make_initial_state(*config.initial)
    if config.cm_scaling is CMScaling.PHYSICAL:
        initial = GaussianState(base.d, (2.0 * config.n_bar + 1.0) * base.sigma)
        scale = 1.0
    else:
        initial = base
        scale = config.n_bar
    reference = thermal_state(config.channel.m_bar)

    states = []
    times = config.times()
    for t in times:
        reduced = reduce_to_mode(evolve_unitary(initial, propagator(coeffs, t)), 0)
        states.append(_envelope(reduced.sigma, reduced.d, config.channel, t, scale))
    return _annotate(times, states, reference)


def diffuse_trajectory(state: GaussianState, channel: ChannelParams, times) -> list[TrajectoryPoint]:
    """Channel-only evolution of a one-mode state, no unitary part."""
    times = np.asarray(times, dtype=float)
    states = [diffuse(state, channel, t) for t in times]
    return _annotate(times, states, thermal_state(channel.m_bar))


def _annotate(times, states, reference) -> list[TrajectoryPoint]:
    points = [TrajectoryPoint(float(t), s) for t, s in zip(times, states)]
    series = metrics.fidelity_series(points, reference)
    dfdt = metrics.numerical_derivative(series) if len(points) >= 3 else np.full(len(points), np.nan)
    return [
        TrajectoryPoint(p.t, p.state, float(f), float(g)) for p, f, g in zip(points, series.F, dfdt)
    ]
