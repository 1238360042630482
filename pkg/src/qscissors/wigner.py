"""Wigner function, its marginals and the Wigner phase distribution.

Quadratures follow ``X = (a + a^dag)/2`` and ``P = (a - a^dag)/(2i)`` so the
vacuum has ``W(0, 0) = 2/pi`` and quadrature variance 1/4. A coherent state
``|beta>`` is centred at ``(Re beta, Im beta)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .fock import DensityOperator, PureState

__all__ = [
    "PhaseSpaceGrid",
    "QuadratureRule",
    "laguerre_table",
    "wigner_at",
    "wigner",
    "wigner_marginals",
    "quadrature_distribution",
    "wigner_phase_distribution",
    "integrate_grid",
    "negativity",
    "MARGINAL_AXES",
]

MARGINAL_AXES = ("X_at_P0", "P_at_X0", "integrate_P", "integrate_X")


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_min: float = -4.0
    x_max: float = 4.0
    p_min: float = -4.0
    p_max: float = 4.0
    nx: int = 201
    np: int = 201

    def __post_init__(self):
        bounds = (self.x_min, self.x_max, self.p_min, self.p_max)
        if not all(math.isfinite(b) for b in bounds):
            raise UsageError("grid bounds must be finite")
        if self.x_min >= self.x_max or self.p_min >= self.p_max:
            raise UsageError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.np < 2:
            raise UsageError("grid needs at least two points per axis")

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def p(self):
        return np.linspace(self.p_min, self.p_max, self.np)

    def mesh(self):
        return np.meshgrid(self.x, self.p, indexing="ij")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre radial nodes on ``[0, r_max]`` plus a uniform angle grid."""

    nodes: np.ndarray
    weights: np.ndarray
    n_theta: int = 360

    def __post_init__(self):
        if np.any(np.asarray(self.weights) <= 0):
            raise UsageError("quadrature weights must be positive")
        if self.n_theta < 2:
            raise UsageError("n_theta must be >= 2")

    @classmethod
    def gauss_legendre(cls, n_max, n_nodes=200, n_theta=360, r_max=None):
        # W decays like polynomial * exp(-2 r^2); past sqrt(n/2) + 4 the tail is < 1e-10
        if r_max is None:
            r_max = math.sqrt(n_max / 2.0) + 4.0
        u, w = np.polynomial.legendre.leggauss(n_nodes)
        return cls(0.5 * r_max * (u + 1.0), 0.5 * r_max * w, n_theta)

    @property
    def theta(self):
        return np.linspace(0.0, 2.0 * np.pi, self.n_theta, endpoint=False)


def _as_matrix(rho):
    if isinstance(rho, PureState):
        rho = rho.density()
    if isinstance(rho, DensityOperator):
        if rho.mode_count != 1:
            raise UsageError("Wigner functions are computed for single-mode states only")
        return rho.matrix
    mat = np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise UsageError("expected a square density matrix")
    return mat


def laguerre_table(n_top, k, y):
    """``L_n^{(k)}(y)`` for ``n = 0 .. n_top`` by the upward three-term recurrence."""
    y = np.asarray(y, dtype=float)
    out = np.empty((n_top + 1,) + y.shape)
    out[0] = 1.0
    if n_top >= 1:
        out[1] = 1.0 + k - y
    for j in range(1, n_top):
        out[j + 1] = ((2 * j + 1 + k - y) * out[j] - (j + k) * out[j - 1]) / (j + 1)
    return out


def wigner_at(rho, X, P):
    """Wigner function at arbitrary (broadcastable) quadrature points."""
    mat = _as_matrix(rho)
    X, P = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(P, dtype=float))
    dim = mat.shape[0]
    r2 = X**2 + P**2
    r = np.sqrt(r2)
    phase = np.exp(-1j * np.arctan2(P, X))
    gauss = np.exp(-2.0 * r2)
    lf = [math.lgamma(j + 1) for j in range(dim)]
    total = np.zeros(X.shape, dtype=complex)
    with np.errstate(divide="ignore"):
        log_r = np.log(r)
    for k in range(dim):
        lag = laguerre_table(dim - 1 - k, k, 4.0 * r2)
        # radial prefactor 2^(k+1) r^k kept in log space; r = 0 only matters for k = 0
        radial = np.exp((k + 1) * math.log(2.0) + k * log_r) if k else 2.0 * np.ones_like(r)
        ang = phase**k
        for n in range(dim - k):
            m = n + k
            elem = (-1) ** n * radial * math.exp(0.5 * (lf[n] - lf[m])) * ang * gauss * lag[n]
            total += mat[m, n] * elem
            if k:
                total += mat[n, m] * elem.conj()
    residue = np.max(np.abs(total.imag)) if total.size else 0.0
    if residue > 1e-10 * max(1.0, np.max(np.abs(total.real))):
        raise ValueError(f"Wigner function has imaginary residue {residue:.3e}; is rho Hermitian?")
    return total.real / np.pi


def wigner(rho, grid=None):
    """``W[i, j] = W(grid.x[i], grid.p[j])``."""
    grid = grid or PhaseSpaceGrid()
    X, P = grid.mesh()
    return wigner_at(rho, X, P)


def _hermite_functions(dim, x):
    # quadrature wavefunctions <X|n> for X = (a + a^dag)/2
    u = math.sqrt(2.0) * np.asarray(x, dtype=float)
    h = np.empty((dim,) + u.shape)
    h[0] = np.pi**-0.25 * np.exp(-0.5 * u**2)
    if dim > 1:
        h[1] = math.sqrt(2.0) * u * h[0]
    for n in range(1, dim - 1):
        h[n + 1] = math.sqrt(2.0 / (n + 1)) * u * h[n] - math.sqrt(n / (n + 1)) * h[n - 1]
    return 2**0.25 * h


def quadrature_distribution(rho, x, theta=0.0):
    """Probability density of ``X_theta = (a e^{-i theta} + a^dag e^{i theta})/2``."""
    mat = _as_matrix(rho)
    dim = mat.shape[0]
    levels = np.arange(dim)
    rotated = mat * np.exp(-1j * theta * (levels[:, None] - levels[None, :]))
    psi = _hermite_functions(dim, x)
    return np.einsum("m...,mn,n...->...", psi, rotated, psi).real


def wigner_marginals(rho, axis, grid=None):
    """One-dimensional cuts or projections of W.

    ``X_at_P0`` and ``P_at_X0`` are cross sections; ``integrate_P`` (a function
    of X) and ``integrate_X`` (a function of P) are marginal densities,
    evaluated exactly from the quadrature wavefunctions. Returns the abscissa
    and the curve.
    """
    grid = grid or PhaseSpaceGrid()
    if axis == "X_at_P0":
        return grid.x, wigner_at(rho, grid.x, 0.0)
    if axis == "P_at_X0":
        return grid.p, wigner_at(rho, 0.0, grid.p)
    if axis == "integrate_P":
        return grid.x, quadrature_distribution(rho, grid.x, 0.0)
    if axis == "integrate_X":
        return grid.p, quadrature_distribution(rho, grid.p, np.pi / 2)
    raise UsageError(f"unknown marginal {axis!r}; choose from {MARGINAL_AXES}")


def wigner_phase_distribution(rho, rule=None):
    """``P(theta) = int_0^inf W(r cos theta, r sin theta) r dr`` on ``rule.theta``."""
    mat = _as_matrix(rho)
    rule = rule or QuadratureRule.gauss_legendre(mat.shape[0])
    theta = rule.theta
    R, T = np.meshgrid(rule.nodes, theta, indexing="ij")
    W = wigner_at(mat, R * np.cos(T), R * np.sin(T))
    return theta, np.einsum("i,i,ij->j", rule.weights, rule.nodes, W)


def integrate_grid(values, grid):
    return float(np.trapezoid(np.trapezoid(values, grid.p, axis=1), grid.x))


def negativity(values, grid):
    """Minimum of W on the grid and the integral of its negative part."""
    neg = np.minimum(values, 0.0)
    return float(values.min()), float(integrate_grid(neg, grid))
