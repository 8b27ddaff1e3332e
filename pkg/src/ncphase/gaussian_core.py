r"""Gaussian states in the (Q_1, P_1, ..., Q_n, P_n) ordering.

Units have :math:`\hbar = 1` and the vacuum covariance matrix is the identity,
so the covariance matrix is :math:`\sigma_{AB} = \langle AB + BA\rangle - 2\langle A\rangle\langle B\rangle`
and pure states have :math:`\det\sigma = 1`. The Wigner function in this
convention is

.. math::

    W(R) = \frac{\exp[-(R - d)^T \sigma^{-1} (R - d)]}{\pi^n \sqrt{\det\sigma}}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericalDegeneracyError

SYMMETRY_TOL = 1e-12
BONA_FIDE_TOL = 1e-9


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with 2x2 blocks ``[[0, 1], [-1, 0]]``."""
    if modes < 1:
        raise InvalidArgumentError(f"mode count must be positive, got {modes}")
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _as_sigma(sigma) -> np.ndarray:
    sigma = np.array(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise InvalidArgumentError(f"covariance matrix must be square with even dimension, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise InvalidArgumentError("covariance matrix has non-finite entries")
    if np.max(np.abs(sigma - sigma.T)) > SYMMETRY_TOL:
        raise InvalidArgumentError("covariance matrix is not symmetric")
    return sigma


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Positive spectrum of ``i Omega sigma``, sorted ascending."""
    sigma = _as_sigma(sigma)
    n = sigma.shape[0] // 2
    if n == 1:
        det = np.linalg.det(sigma)
        return np.array([math.sqrt(det) if det > 0 else 0.0])
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ sigma).real
    return np.sort(ev)[n:]


def check_bona_fide(sigma) -> tuple[np.ndarray, bool]:
    """Return the symplectic eigenvalues of ``sigma`` and whether it is physical.

    A covariance matrix is bona fide when every symplectic eigenvalue is at
    least one (up to ``BONA_FIDE_TOL``), i.e. ``sigma + i Omega >= 0``.
    """
    nus = symplectic_eigenvalues(sigma)
    return nus, bool(np.all(nus >= 1.0 - BONA_FIDE_TOL))


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First moments ``d`` and covariance matrix ``sigma`` of an n-mode state.

    Arrays are copied and made read-only on construction.
    """

    d: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float).reshape(-1)
        sigma = _as_sigma(self.sigma)
        if d.size != sigma.shape[0]:
            raise InvalidArgumentError(
                f"first moments have length {d.size} but covariance matrix is {sigma.shape[0]}x{sigma.shape[0]}"
            )
        if not np.all(np.isfinite(d)):
            raise InvalidArgumentError("first moments have non-finite entries")
        nus, ok = check_bona_fide(sigma)
        if not ok:
            raise InvalidArgumentError(f"covariance matrix is not bona fide (symplectic eigenvalues {nus})")
        d.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma", sigma)

    @property
    def modes(self) -> int:
        return self.d.size // 2

    def __repr__(self):
        return f"GaussianState(d={self.d.tolist()}, sigma={self.sigma.tolist()})"


def make_initial_state(x0: float, y0: float, px0: float, py0: float) -> GaussianState:
    """Unit-width two-mode product Gaussian centred at ``(x0, px0, y0, py0)``."""
    vals = (x0, y0, px0, py0)
    if not all(math.isfinite(v) for v in vals):
        raise InvalidArgumentError(f"initial parameters must be finite, got {vals}")
    return GaussianState(np.array([x0, px0, y0, py0], dtype=float), np.eye(4))


def thermal_state(m_bar: float) -> GaussianState:
    """One-mode thermal state with mean occupancy ``m_bar``: ``d = 0``, ``sigma = (2 m_bar + 1) I``."""
    if not math.isfinite(m_bar) or m_bar < 0:
        raise InvalidArgumentError(f"mean occupancy must be finite and nonnegative, got {m_bar}")
    return GaussianState(np.zeros(2), (2.0 * m_bar + 1.0) * np.eye(2))


def reduce_to_mode(state: GaussianState, mode: int) -> GaussianState:
    """Partial trace keeping only ``mode``; exact for Gaussian states."""
    if not 0 <= mode < state.modes:
        raise InvalidArgumentError(f"mode {mode} out of range for a {state.modes}-mode state")
    sl = slice(2 * mode, 2 * mode + 2)
    return GaussianState(state.d[sl], state.sigma[sl, sl])


def wigner_density(d, sigma, R) -> np.ndarray:
    """Gaussian Wigner function evaluated at one point or a stack of points.

    Args:
        d (array): first moments, length 2n
        sigma (array): covariance matrix, 2n x 2n
        R (array): phase-space point(s) with trailing dimension 2n

    Returns:
        float or array: density value(s)
    """
    d = np.asarray(d, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    R = np.asarray(R, dtype=float)
    dim = d.size
    if R.shape[-1] != dim:
        raise InvalidArgumentError(f"phase-space point has dimension {R.shape[-1]}, expected {dim}")
    det = np.linalg.det(sigma)
    if not det > 0 or not np.isfinite(det):
        raise NumericalDegeneracyError(f"covariance matrix is singular (det = {det})")
    inv = np.linalg.inv(sigma)
    x = R - d
    quad = np.einsum("...i,ij,...j->...", x, inv, x)
    return np.exp(-quad) / (np.pi ** (dim // 2) * math.sqrt(det))


def wigner_eval(state: GaussianState, R) -> float:
    return float(wigner_density(state.d, state.sigma, np.asarray(R, dtype=float).reshape(-1)))
