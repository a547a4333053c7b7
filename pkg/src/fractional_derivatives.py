"""Fractional integrals and derivatives of functions sampled on uniform grids.

Time operators act on grids starting at ``t = 0``:

* ``rl_integral``: product-trapezoidal rule for the Riemann-Liouville integral;
* ``caputo_derivative``: the L1 scheme, of order ``2 - q``;
* ``rl_derivative``: Caputo plus the initial-value term ``t**-q f(0) / Gamma(1 - q)``.

The Riesz derivative acts on periodic grids through the Fourier multiplier
``-|omega|**q``. All discrete sums are convolutions with fixed weights.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from fracq_errors import DomainError, ParamError

logger = logging.getLogger(__name__)

MIN_NODES = 4
UNIFORM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class FracOrder:
    """Order ``q`` of a fractional operator."""

    q: float

    def require_integral(self) -> float:
        if not self.q < 0.0:
            raise DomainError(f"fractional integrals take q < 0, got {self.q}")
        return self.q

    def require_derivative(self) -> float:
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"fractional derivatives take q in (0, 1), got {self.q}")
        return self.q

    def require_riesz(self) -> float:
        if not 0.0 < self.q <= 2.0:
            raise DomainError(f"the Riesz derivative takes q in (0, 2], got {self.q}")
        return self.q


Order = Union[float, FracOrder]


def _order(q: Order) -> FracOrder:
    return q if isinstance(q, FracOrder) else FracOrder(float(q))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function on a uniform grid.

    Periodic samples cover one cell ``[x0, x0 + period)`` without repeating
    the endpoint.
    """

    grid: np.ndarray
    values: np.ndarray
    periodic: bool = False

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ParamError(f"grid and values must be 1-D of equal length, got {grid.shape} and {values.shape}")
        if grid.size < MIN_NODES:
            raise ParamError(f"at least {MIN_NODES} nodes are required, got {grid.size}")
        steps = np.diff(grid)
        if np.any(steps <= 0.0):
            raise ParamError("grid must be strictly increasing")
        scale = max(1.0, float(np.max(np.abs(grid))))
        if np.max(np.abs(steps - steps.mean())) > UNIFORM_TOLERANCE * scale:
            raise ParamError("grid must be uniform")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @classmethod
    def sample(cls, func: Callable[[np.ndarray], np.ndarray], grid: np.ndarray, periodic: bool = False) -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(func(grid), dtype=complex), periodic)

    def with_values(self, values: np.ndarray) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.periodic)


def time_grid(t_end: float, count: int) -> np.ndarray:
    """Uniform grid ``0, h, ..., t_end`` with ``count`` nodes."""

    return np.linspace(0.0, t_end, count)


def _require_time_grid(f: SampledFunction) -> None:
    if f.periodic or f.grid[0] != 0.0:
        raise DomainError("time operators need a non-periodic grid starting at t = 0")


def rl_integral(f: SampledFunction, q: Order) -> SampledFunction:
    """Riemann-Liouville integral of order ``-q`` by the product trapezoidal rule."""

    nu = -_order(q).require_integral()
    _require_time_grid(f)
    h, size = f.step, f.values.size

    j = np.arange(1, size, dtype=float)
    weights = np.empty(size - 1)
    weights[0] = 1.0
    weights[1:] = (j[1:] + 1.0) ** (nu + 1) - 2.0 * j[1:] ** (nu + 1) + (j[1:] - 1.0) ** (nu + 1)
    start = (j - 1.0) ** (nu + 1) - (j - 1.0 - nu) * j**nu

    result = np.zeros(size, dtype=complex)
    history = np.convolve(weights, f.values[1:])[: size - 1]
    result[1:] = h**nu / math.gamma(nu + 2.0) * (start * f.values[0] + history)
    return f.with_values(result)


def caputo_derivative(f: SampledFunction, q: Order) -> SampledFunction:
    """Caputo derivative of order ``q`` in (0, 1) by the L1 scheme."""

    q = _order(q).require_derivative()
    _require_time_grid(f)
    h, size = f.step, f.values.size

    k = np.arange(size - 1, dtype=float)
    weights = (k + 1.0) ** (1.0 - q) - k ** (1.0 - q)

    result = np.zeros(size, dtype=complex)
    history = np.convolve(weights, np.diff(f.values))[: size - 1]
    result[1:] = h**-q / math.gamma(2.0 - q) * history
    return f.with_values(result)


def rl_derivative(f: SampledFunction, q: Order) -> SampledFunction:
    """Riemann-Liouville derivative of order ``q`` in (0, 1).

    The node ``t = 0`` holds a signed infinity when ``f(0) != 0``.
    """

    q = _order(q).require_derivative()
    caputo = caputo_derivative(f, q).values
    f0 = complex(f.values[0])

    result = caputo.copy()
    result[1:] += f.grid[1:] ** -q * f0 / math.gamma(1.0 - q)
    if f0 != 0:
        result[0] = complex(
            math.copysign(math.inf, f0.real) if f0.real else 0.0,
            math.copysign(math.inf, f0.imag) if f0.imag else 0.0,
        )
    return f.with_values(result)


def riesz_derivative(f: SampledFunction, q: Order) -> SampledFunction:
    """Riesz derivative of order ``q`` in (0, 2] on a periodic grid."""

    q = _order(q).require_riesz()
    if not f.periodic:
        raise DomainError("the Riesz derivative needs periodic samples")
    if f.values.size % 2:
        raise DomainError(f"the Riesz derivative needs an even node count, got {f.values.size}")

    omega = 2.0 * np.pi * np.fft.fftfreq(f.values.size, d=f.step)
    spectrum = np.fft.fft(f.values)
    return f.with_values(np.fft.ifft(-np.abs(omega) ** q * spectrum))


def first_derivative(f: SampledFunction) -> SampledFunction:
    """Centered differences inside the grid, one-sided at the ends."""

    return f.with_values(np.gradient(f.values, f.step))


def composition_identity_residual(f: SampledFunction, alpha: float) -> float:
    """Max residual of ``f' = D_RL^{1-alpha} [D_C^alpha f]`` over the interior nodes."""

    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    inner = caputo_derivative(f, alpha)
    outer = rl_derivative(inner, 1.0 - alpha).values
    derivative = first_derivative(f).values
    residual = float(np.max(np.abs(derivative[1:-1] - outer[1:-1])))
    logger.debug("composition residual alpha=%s h=%s: %.3e", alpha, f.step, residual)
    return residual
