r"""Noncommutative oscillator mapped onto standard phase space.

The deformed algebra ``[q_i, q_j] = i theta eps_ij``, ``[p_i, p_j] = i zeta eps_ij``
is realised on canonical variables by the linear map

    q_i = nu Q_i - theta/(2 nu hbar) eps_ij P_j
    p_i = mu P_i + zeta/(2 mu hbar) eps_ij Q_j

which exists whenever ``theta zeta = 4 hbar^2 mu nu (1 - mu nu)`` has a real
solution. After the map the isotropic 2D oscillator becomes

    H = alpha^2 Q^2 + beta^2 P^2 + gamma (P_1 Q_2 - P_2 Q_1),

i.e. an oscillator at frequency ``Omega = 2 alpha beta`` in a rotating frame
with angular velocity ``gamma``, the same structure as a charged oscillator in
a perpendicular magnetic field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateCoefficientsError,
    InvalidArgumentError,
    NoRealGaugeError,
)
from .gaussian_core import GaussianState, symplectic_form

CONSTRAINT_TOL = 1e-10


class Gauge(str, Enum):
    POSITION_ONLY = "position_only"
    SYMMETRIC = "symmetric"


def solve_gauge(theta: float, zeta: float, hbar: float = 1.0) -> tuple[float, float]:
    """Symmetric solution ``mu = nu`` of the gauge constraint.

    Takes the ``+`` root of ``k^2 - k + theta zeta / (4 hbar^2) = 0`` for
    ``k = mu nu`` so that theta = zeta = 0 gives the identity map.

    Raises:
        NoRealGaugeError: if ``theta * zeta > hbar**2``
    """
    if theta < 0 or zeta < 0:
        raise InvalidArgumentError(f"theta and zeta must be nonnegative, got ({theta}, {zeta})")
    if hbar <= 0:
        raise InvalidArgumentError(f"hbar must be positive, got {hbar}")
    disc = 1.0 - theta * zeta / hbar**2
    if disc < 0:
        raise NoRealGaugeError(
            f"theta*zeta = {theta * zeta:g} exceeds hbar^2 = {hbar**2:g}; no real gauge parameters exist"
        )
    k = 0.5 * (1.0 + math.sqrt(disc))
    mu = math.sqrt(k)
    return mu, mu


@dataclass(frozen=True)
class NCParams:
    theta: float
    zeta: float
    mu: float
    nu: float
    m: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        for name in ("theta", "zeta", "mu", "nu", "m", "omega", "hbar", "q"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidArgumentError(f"{name} must be finite, got {v}")
        if self.theta < 0 or self.zeta < 0:
            raise InvalidArgumentError("theta and zeta must be nonnegative")
        for name in ("mu", "nu", "m", "omega", "hbar", "q"):
            if getattr(self, name) <= 0:
                raise InvalidArgumentError(f"{name} must be positive, got {getattr(self, name)}")
        if self.constraint_residual() >= CONSTRAINT_TOL:
            raise InvalidArgumentError(
                f"gauge constraint violated (residual {self.constraint_residual():.3e})"
            )

    def constraint_residual(self) -> float:
        k = self.mu * self.nu
        return abs(self.theta * self.zeta - 4.0 * self.hbar**2 * k * (1.0 - k))


def params_from_theta_zeta(theta: float, zeta: float, m=1.0, omega=1.0, hbar=1.0, q=1.0) -> NCParams:
    mu, nu = solve_gauge(theta, zeta, hbar)
    return NCParams(theta, zeta, mu, nu, m, omega, hbar, q)


def params_from_b0(B0: float, gauge: Gauge | str = Gauge.POSITION_ONLY, m=1.0, omega=1.0, hbar=1.0, q=1.0) -> NCParams:
    """Noncommutative parameters producing the effective field ``B0``.

    ``position_only`` puts the whole field into theta (zeta = 0);
    ``symmetric`` splits it equally between the theta and zeta terms.
    """
    gauge = Gauge(gauge)
    if not math.isfinite(B0) or B0 < 0:
        raise InvalidArgumentError(f"B0 must be finite and nonnegative, got {B0}")
    if gauge is Gauge.POSITION_ONLY:
        theta = B0 * q * hbar / (m**2 * omega**2)
        zeta = 0.0
    else:
        theta = 0.5 * B0 * q * hbar / (m**2 * omega**2)
        zeta = 0.5 * B0 * q * hbar
    return params_from_theta_zeta(theta, zeta, m, omega, hbar, q)


@dataclass(frozen=True)
class DerivedCoeffs:
    alpha2: float
    beta2: float
    gamma: float
    xi: float
    Omega: float
    B0: float

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha2)

    @property
    def beta(self) -> float:
        return math.sqrt(self.beta2)


def coefficients(params: NCParams) -> DerivedCoeffs:
    """Coefficients of the mapped Hamiltonian, oscillation frequency and effective field."""
    p = params
    alpha2 = p.nu**2 * p.m * p.omega**2 / 2 + p.zeta**2 / (8 * p.m * p.mu**2 * p.hbar**2)
    beta2 = p.mu**2 / (2 * p.m) + p.m * p.omega**2 * p.theta**2 / (8 * p.nu**2 * p.hbar**2)
    gamma = p.theta * p.m * p.omega**2 / (2 * p.hbar) + p.zeta / (2 * p.m * p.hbar)
    xi = (p.m * p.omega * p.theta + p.zeta / (p.m * p.omega)) / (2 * p.hbar)
    Omega = p.omega * math.sqrt((2 * p.mu * p.nu - 1) ** 2 + xi**2)
    B0 = p.m**2 * p.omega**2 * p.theta / (p.q * p.hbar) + p.zeta / (p.q * p.hbar)
    return DerivedCoeffs(alpha2, beta2, gamma, xi, Omega, B0)


@dataclass(frozen=True, eq=False)
class Propagator:
    S: np.ndarray
    t: float


def propagator_matrix(coeffs: DerivedCoeffs, t: float) -> np.ndarray:
    """4x4 map from initial to time-t values of (Q1, P1, Q2, P2).

    The flow factorises into a rotation of the (mode 1, mode 2) plane by
    ``gamma t`` and, within each mode, the oscillator map
    ``[[cos, (beta/alpha) sin], [-(alpha/beta) sin, cos]]`` at angle ``Omega t``.
    """
    if not coeffs.alpha2 > 0 or not coeffs.beta2 > 0:
        raise DegenerateCoefficientsError(
            f"alpha^2 and beta^2 must be positive, got ({coeffs.alpha2}, {coeffs.beta2})"
        )
    r = coeffs.beta / coeffs.alpha
    c, s = math.cos(coeffs.Omega * t), math.sin(coeffs.Omega * t)
    cg, sg = math.cos(coeffs.gamma * t), math.sin(coeffs.gamma * t)
    osc = np.array([[c, r * s], [-s / r, c]])
    rot = np.array([[cg, sg], [-sg, cg]])
    return np.kron(rot, osc)


def propagator(coeffs: DerivedCoeffs, t: float) -> Propagator:
    if not t >= 0:
        raise InvalidArgumentError(f"time must be nonnegative, got {t}")
    S = propagator_matrix(coeffs, t)
    S.setflags(write=False)
    return Propagator(S, float(t))


def symplectic_residual(S) -> float:
    """``max |S^T Omega S - Omega|``; zero for an exactly symplectic matrix."""
    S = np.asarray(S)
    J = symplectic_form(S.shape[0] // 2)
    return float(np.max(np.abs(S.T @ J @ S - J)))


def evolve_unitary(state: GaussianState, prop: Propagator) -> GaussianState:
    S = np.asarray(prop.S)
    if state.modes != 2 or S.shape != (4, 4):
        raise InvalidArgumentError(
            f"unitary evolution needs a two-mode state and a 4x4 propagator, got {state.modes} modes and {S.shape}"
        )
    sigma = S @ state.sigma @ S.T
    return GaussianState(S @ state.d, 0.5 * (sigma + sigma.T))
