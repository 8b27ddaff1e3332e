"""Brute-force cross-checks that share no code path with the closed forms.

Two independent routes are provided:

* trapezoidal quadrature of the Gaussian Wigner function on a tensor grid
  (moments, marginals, overlaps);
* displaced thermal density matrices in a truncated number basis, with the
  Uhlmann fidelity computed by matrix square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import GridResolutionError, InvalidArgumentError, TruncationError, UnsupportedStateError
from .gaussian_core import GaussianState, wigner_density

NORM_TOL = 1e-4
DEFAULT_BOUND = 10.0
# 257^4 points is out of reach, so two-mode grids default coarser
DEFAULT_POINTS = {2: 257, 4: 64}
MIN_POINTS = 64
DEFAULT_CUTOFF = 80
DEFAULT_MAX_DEFICIT = 1e-5


@dataclass(frozen=True)
class GridSpec:
    bounds: tuple[tuple[float, float], ...]
    points: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        points = tuple(int(n) for n in self.points)
        if len(bounds) != len(points):
            raise InvalidArgumentError("bounds and points must have one entry per axis")
        for (lo, hi), n in zip(bounds, points):
            if not lo < hi:
                raise InvalidArgumentError(f"grid bounds must satisfy min < max, got ({lo}, {hi})")
            if n < MIN_POINTS:
                raise InvalidArgumentError(f"need at least {MIN_POINTS} points per axis, got {n}")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "points", points)

    @classmethod
    def uniform(cls, dim: int, bound: float = DEFAULT_BOUND, points: int | None = None) -> "GridSpec":
        if points is None:
            points = DEFAULT_POINTS.get(dim, MIN_POINTS)
        return cls(((-bound, bound),) * dim, (points,) * dim)

    @property
    def dim(self) -> int:
        return len(self.points)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.bounds, self.points)]

    def weights(self) -> list[np.ndarray]:
        out = []
        for x in self.axes():
            w = np.full(x.size, x[1] - x[0])
            w[0] = w[-1] = 0.5 * (x[1] - x[0])
            out.append(w)
        return out


def _grid_for(state: GaussianState, grid: GridSpec | None) -> GridSpec:
    if grid is None:
        grid = GridSpec.uniform(2 * state.modes)
    if grid.dim != 2 * state.modes:
        raise InvalidArgumentError(f"grid has {grid.dim} axes but state needs {2 * state.modes}")
    return grid


def _slices(grid: GridSpec, lead_axis: int = 0):
    """Yield ``(index, points, lead_weight, rest_weights)`` per hyperplane orthogonal to ``lead_axis``."""
    axes, weights = grid.axes(), grid.weights()
    rest = [k for k in range(grid.dim) if k != lead_axis]
    if rest:
        mesh = np.meshgrid(*(axes[k] for k in rest), indexing="ij")
        wmesh = np.meshgrid(*(weights[k] for k in rest), indexing="ij")
        rest_pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        rest_w = np.prod(np.stack([w.reshape(-1) for w in wmesh], axis=-1), axis=-1)
    else:
        rest_pts = np.zeros((1, 0))
        rest_w = np.ones(1)
    pts = np.empty((rest_pts.shape[0], grid.dim))
    pts[:, rest] = rest_pts
    for i, (x, w) in enumerate(zip(axes[lead_axis], weights[lead_axis])):
        pts[:, lead_axis] = x
        yield i, pts, w, rest_w


def _check_norm(norm: float):
    if abs(norm - 1.0) > NORM_TOL:
        raise GridResolutionError(f"grid normalization is {norm:.8f}; refine or enlarge the grid")


def grid_moments(state: GaussianState, grid: GridSpec | None = None) -> tuple[np.ndarray, np.ndarray]:
    """First moments and covariance matrix of ``state`` by quadrature of its Wigner function.

    Returns:
        tuple: ``(d, sigma)`` with ``sigma = 2 (<R R^T> - <R><R>^T)``
    """
    grid = _grid_for(state, grid)
    dim = grid.dim
    norm = 0.0
    first = np.zeros(dim)
    second = np.zeros((dim, dim))
    for _, pts, lead_w, rest_w in _slices(grid):
        ww = lead_w * rest_w * wigner_density(state.d, state.sigma, pts)
        norm += ww.sum()
        first += ww @ pts
        second += (pts * ww[:, None]).T @ pts
    _check_norm(norm)
    first /= norm
    second /= norm
    sigma = 2.0 * (second - np.outer(first, first))
    return first, 0.5 * (sigma + sigma.T)


def grid_marginal(state: GaussianState, axis: int, grid: GridSpec | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Probability density along one phase-space axis, all other axes integrated out.

    Returns:
        tuple: ``(x, p)`` sample points and density values
    """
    grid = _grid_for(state, grid)
    if not 0 <= axis < grid.dim:
        raise InvalidArgumentError(f"axis {axis} out of range for a {grid.dim}-axis grid")
    x = grid.axes()[axis]
    p = np.zeros(x.size)
    for i, pts, _, rest_w in _slices(grid, axis):
        p[i] = rest_w @ wigner_density(state.d, state.sigma, pts)
    _check_norm(float(grid.weights()[axis] @ p))
    return x, p


def overlap(s1: GaussianState, s2: GaussianState, grid: GridSpec | None = None) -> float:
    """``Tr[rho_1 rho_2] = (2 pi)^n \\int W_1 W_2`` by quadrature."""
    if s1.modes != s2.modes:
        raise InvalidArgumentError("states must have the same number of modes")
    grid = _grid_for(s1, grid)
    total = 0.0
    n1 = n2 = 0.0
    for _, pts, lead_w, rest_w in _slices(grid):
        w = lead_w * rest_w
        w1 = wigner_density(s1.d, s1.sigma, pts)
        w2 = wigner_density(s2.d, s2.sigma, pts)
        total += w @ (w1 * w2)
        n1 += w @ w1
        n2 += w @ w2
    _check_norm(n1)
    _check_norm(n2)
    return float((2 * np.pi) ** s1.modes * total)


@dataclass(frozen=True, eq=False)
class FockDensity:
    cutoff: int
    matrix: np.ndarray
    trace_deficit: float

    def __post_init__(self):
        rho = self.matrix
        if rho.shape != (self.cutoff, self.cutoff):
            raise InvalidArgumentError("density matrix shape does not match cutoff")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise InvalidArgumentError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(rho).min() < -1e-9:
            raise InvalidArgumentError("density matrix is not positive semidefinite")


def displacement_matrix(alpha: complex, rows: int, cols: int | None = None) -> np.ndarray:
    r"""Number-basis elements :math:`\langle m|D(\alpha)|n\rangle` (Cahill-Glauber).

    For :math:`m \ge n`:
    :math:`\sqrt{n!/m!}\,\alpha^{m-n} e^{-|\alpha|^2/2} L_n^{(m-n)}(|\alpha|^2)`,
    and :math:`\langle m|D(\alpha)|n\rangle = \overline{\langle n|D(-\alpha)|m\rangle}` otherwise.
    """
    cols = rows if cols is None else cols
    x = abs(alpha) ** 2
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    lo = np.minimum(m, n)
    hi = np.maximum(m, n)
    k = hi - lo
    base = np.where(m >= n, alpha, -np.conj(alpha))
    mag = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - 0.5 * x)
    return mag * base**k * eval_genlaguerre(lo, k, x)


def displaced_thermal_density(state: GaussianState, cutoff: int = DEFAULT_CUTOFF,
                              max_deficit: float = DEFAULT_MAX_DEFICIT) -> FockDensity:
    """Truncated number-basis density matrix of an isotropic one-mode Gaussian state.

    Raises:
        UnsupportedStateError: if the covariance matrix is not proportional to the identity
        TruncationError: if the truncated trace falls short of one by more than ``max_deficit``
    """
    if state.modes != 1:
        raise UnsupportedStateError("number-basis oracle handles one-mode states only")
    s = state.sigma
    if abs(s[0, 1]) > 1e-12 or abs(s[0, 0] - s[1, 1]) > 1e-12 * max(1.0, s[0, 0]):
        raise UnsupportedStateError("number-basis oracle handles displaced thermal states only")
    if cutoff < 1:
        raise InvalidArgumentError(f"cutoff must be at least 1, got {cutoff}")
    n_bar = max(0.5 * (s[0, 0] - 1.0), 0.0)
    alpha = (state.d[0] + 1j * state.d[1]) / math.sqrt(2.0)
    # thermal weights summed well past the cutoff so kept entries are not truncated
    inner = 2 * cutoff
    k = np.arange(inner)
    if n_bar > 0:
        weights = np.exp(k * math.log(n_bar) - (k + 1) * math.log1p(n_bar))
    else:
        weights = (k == 0).astype(float)
    D = displacement_matrix(alpha, cutoff, inner)
    rho = (D * weights) @ D.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    deficit = float(1.0 - np.trace(rho).real)
    if deficit > max_deficit:
        raise TruncationError(f"cutoff {cutoff} leaves trace deficit {deficit:.3e} > {max_deficit:.1e}")
    return FockDensity(cutoff, rho, max(deficit, 0.0))


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def uhlmann_fidelity(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """``(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2``."""
    r = _psd_sqrt(rho1)
    w = np.linalg.eigvalsh(r @ rho2 @ r)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def fock_fidelity(s1: GaussianState, s2: GaussianState, cutoff: int = DEFAULT_CUTOFF,
                  max_deficit: float = DEFAULT_MAX_DEFICIT) -> float:
    rho1 = displaced_thermal_density(s1, cutoff, max_deficit).matrix
    rho2 = displaced_thermal_density(s2, cutoff, max_deficit).matrix
    return uhlmann_fidelity(rho1, rho2)


def fock_purity(state: GaussianState, cutoff: int = DEFAULT_CUTOFF) -> float:
    rho = displaced_thermal_density(state, cutoff).matrix
    return float(np.trace(rho @ rho).real)
