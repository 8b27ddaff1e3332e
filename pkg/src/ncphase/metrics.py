"""Fidelity between one-mode Gaussian states and a fidelity-decrease witness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidStateError
from .gaussian_core import GaussianState

DELTA_CLAMP = 1e-9
DEFAULT_WITNESS_TOL = 1e-6


def gaussian_fidelity(d1, sigma1, d2, sigma2) -> float:
    r"""Fidelity of two one-mode Gaussian states given as raw moments.

    .. math::

        F = \frac{2}{\sqrt{\Delta + \delta} - \sqrt{\delta}}
            \exp\left[-\mathbf{d}^T (\sigma_1 + \sigma_2)^{-1} \mathbf{d}\right]

    with :math:`\Delta = \det(\sigma_1 + \sigma_2)` and
    :math:`\delta = (\det\sigma_1 - 1)(\det\sigma_2 - 1)`. Covariances use the
    vacuum-equals-identity convention, so for pure states this reduces to
    :math:`|\langle\psi_1|\psi_2\rangle|^2` (e.g. :math:`e^{-|\alpha - \beta|^2}`
    for coherent states).

    Raises:
        InvalidStateError: if ``delta`` is negative beyond round-off
    """
    d = np.asarray(d1, dtype=float) - np.asarray(d2, dtype=float)
    s1 = np.asarray(sigma1, dtype=float)
    s2 = np.asarray(sigma2, dtype=float)
    if s1.shape != (2, 2) or s2.shape != (2, 2) or d.shape != (2,):
        raise InvalidArgumentError("fidelity formula is for one-mode states only")
    splus = s1 + s2
    Delta = np.linalg.det(splus)
    delta = (np.linalg.det(s1) - 1.0) * (np.linalg.det(s2) - 1.0)
    if delta < -DELTA_CLAMP:
        raise InvalidStateError(f"delta = {delta:.3e} < 0: input covariance matrix is not bona fide")
    delta = max(delta, 0.0)
    # 1/(sqrt(D + d) - sqrt(d)) rewritten to avoid cancellation for mixed states
    prefactor = 2.0 * (math.sqrt(Delta + delta) + math.sqrt(delta)) / Delta
    return prefactor * math.exp(-float(d @ np.linalg.solve(splus, d)))


def fidelity(s1: GaussianState, s2: GaussianState) -> float:
    if s1.modes != 1 or s2.modes != 1:
        raise InvalidArgumentError("fidelity is implemented for one-mode states only")
    return gaussian_fidelity(s1.d, s1.sigma, s2.d, s2.sigma)


@dataclass(frozen=True, eq=False)
class FidelitySeries:
    t: np.ndarray
    F: np.ndarray
    reference: GaussianState

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        F = np.asarray(self.F, dtype=float)
        if t.shape != F.shape or t.ndim != 1:
            raise InvalidArgumentError("time and fidelity arrays must be 1-D and of equal length")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "F", F)


def fidelity_series(traj, reference: GaussianState) -> FidelitySeries:
    """Fidelity of every trajectory point's state against a fixed reference."""
    if len(traj) == 0:
        raise InvalidArgumentError("trajectory is empty")
    t = np.array([p.t for p in traj])
    F = np.array([fidelity(p.state, reference) for p in traj])
    return FidelitySeries(t, F, reference)


def _uniform_step(t: np.ndarray) -> float:
    steps = np.diff(t)
    dt = float(steps.mean())
    if not dt > 0 or not np.allclose(steps, dt, rtol=1e-6, atol=0.0):
        raise InvalidArgumentError("time grid is not uniform")
    return dt


def numerical_derivative(series: FidelitySeries) -> np.ndarray:
    """dF/dt by central differences, second-order one-sided at the ends."""
    if series.t.size < 3:
        raise InvalidArgumentError("need at least three points for a second-order derivative")
    dt = _uniform_step(series.t)
    return np.gradient(series.F, dt, edge_order=2)


@dataclass(frozen=True)
class WitnessReport:
    intervals: list[tuple[float, float]] = field(default_factory=list)
    measure: float = 0.0
    tol: float = DEFAULT_WITNESS_TOL

    @property
    def detected(self) -> bool:
        return bool(self.intervals)


def nonmarkov_witness(series: FidelitySeries, tol: float = DEFAULT_WITNESS_TOL) -> WitnessReport:
    """Collect maximal time intervals over which the fidelity decreases.

    A step ``[t_k, t_{k+1}]`` counts as decreasing when its slope
    ``(F_{k+1} - F_k) / (t_{k+1} - t_k)`` is below ``-tol``; adjacent
    decreasing steps are merged. The measure is the total fidelity lost
    over those intervals.
    """
    if not tol >= 0:
        raise InvalidArgumentError(f"tol must be nonnegative, got {tol}")
    t, F = series.t, series.F
    if t.size < 2:
        return WitnessReport([], 0.0, tol)
    slopes = np.diff(F) / np.diff(t)
    falling = slopes < -tol
    intervals = []
    measure = 0.0
    k = 0
    while k < falling.size:
        if not falling[k]:
            k += 1
            continue
        start = k
        while k < falling.size and falling[k]:
            k += 1
        intervals.append((float(t[start]), float(t[k])))
        measure += float(F[start] - F[k])
    return WitnessReport(intervals, measure, tol)
