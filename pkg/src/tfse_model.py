"""Separable solutions of the time-fractional Schrödinger equation in a box.

The time factor of mode ``n`` is ``T(t) = E_alpha(lambda_n i**alpha t**alpha)``
with ``lambda_n = -D_alpha (n pi / a)**2``. The module computes the wave
function, the decaying total probability and energy, the complex effective
potential that reproduces ``T`` in ordinary Schrödinger form, and the
product form of ``T`` built from that potential.
"""

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from scipy import integrate

from fox_h import RLDerivativeParams, h_rl_derivative_params, ml_params
from fracq_errors import DomainError, ParamError, QuadratureError, SingularityError
from fractional_derivatives import SampledFunction, caputo_derivative, time_grid
from mittag_leffler import AsymptoticForm, Convention, ml, time_argument
from special_functions import i_pow, recip_gamma

logger = logging.getLogger(__name__)

SINGULARITY_TOLERANCE = 1e-13
QUADRATURE_TOLERANCE = 1e-6
LARGE_TIME_THRESHOLD = 10.0


class VeffForm(enum.Enum):
    """Small-time expansion of the effective potential."""

    PRINTED = "printed"
    """Carries the constant ``hbar**2 lambda / (2 m D)`` in both parts."""
    CORRECTED = "corrected"
    """Direct expansion of the exact potential; no constant in the imaginary part."""


@dataclass(frozen=True)
class BoxModel:
    """Infinite well of width ``a`` in mode ``n``, in units where ``hbar = 1`` by default."""

    a: float
    n: int
    alpha: float
    d_alpha: float = 1.0
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise ParamError(f"well width must be positive, got {self.a}")
        if int(self.n) != self.n or self.n < 1:
            raise ParamError(f"quantum number must be a positive integer, got {self.n}")
        if not 0.0 < self.alpha <= 1.0:
            raise ParamError(f"alpha must lie in (0, 1], got {self.alpha}")
        for name in ("d_alpha", "hbar", "mass"):
            if not getattr(self, name) > 0.0:
                raise ParamError(f"{name} must be positive, got {getattr(self, name)}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def classical(cls, a: float, n: int, hbar: float = 1.0, mass: float = 0.5) -> "BoxModel":
        """The ``alpha = 1`` model with ``D_1 = hbar / (2 m)``."""

        return cls(a=a, n=n, alpha=1.0, d_alpha=hbar / (2.0 * mass), hbar=hbar, mass=mass)

    @property
    def wavenumber(self) -> float:
        return self.n * math.pi / self.a

    @property
    def energy_scale(self) -> float:
        """``hbar pi**2 n**2 D_alpha / a**2``, the energy at ``t = 0``."""

        return self.hbar * self.d_alpha * self.wavenumber**2

    @property
    def potential_offset(self) -> float:
        """Constant ``hbar**2 lambda_n / (2 m D_alpha)`` of the effective potential."""

        return self.hbar**2 * box_eigenvalue(self) / (2.0 * self.mass * self.d_alpha)


class EffectivePotentialSample(NamedTuple):
    t: float
    v_r: float
    v_i: float


def box_eigenvalue(model: BoxModel) -> float:
    return -model.d_alpha * model.wavenumber**2


def time_factor(model: BoxModel, t: float, convention: Convention = Convention.I_POW) -> complex:
    """``E_alpha(lambda_n (+-i)**alpha t**alpha)``."""

    return ml(model.alpha, time_argument(model.alpha, box_eigenvalue(model), t, convention))


def box_wavefunction(model: BoxModel, x: float, t: float) -> complex:
    """``sqrt(2/a) sin(n pi x / a) T(t)``, exactly zero on the walls."""

    if not 0.0 <= x <= model.a:
        raise DomainError(f"x={x} lies outside the well [0, {model.a}]")
    if x == 0.0 or x == model.a:
        return 0j
    return math.sqrt(2.0 / model.a) * math.sin(model.wavenumber * x) * time_factor(model, t)


# {{{ probability and energy


def total_probability(model: BoxModel, t: float) -> float:
    return abs(time_factor(model, t)) ** 2


def total_probability_small_t(model: BoxModel, t: float) -> float:
    """Two-term law ``1 - 2 cos(alpha pi/2) |lambda| t**alpha / (alpha Gamma(alpha))``.

    Valid while ``|lambda| t**alpha`` is small.
    """

    alpha = model.alpha
    deviation = 2.0 * math.cos(0.5 * alpha * math.pi) * abs(box_eigenvalue(model)) * t**alpha
    return 1.0 - deviation / (alpha * math.gamma(alpha))


def total_probability_large_t(model: BoxModel, t: float, form: AsymptoticForm = AsymptoticForm.STANDARD) -> float:
    """Leading power law of ``|T|**2`` once ``|lambda| t**alpha >= 10``.

    The standard law is ``1 / (Gamma(1 - alpha)**2 lambda**2 t**(2 alpha))``;
    the printed law drops the gamma factor.
    """

    lam = box_eigenvalue(model)
    scaled = abs(lam) * t**model.alpha
    if scaled < LARGE_TIME_THRESHOLD:
        raise DomainError(f"|lambda| t**alpha = {scaled:.3g} is below the large-time threshold")
    law = 1.0 / scaled**2
    if form is AsymptoticForm.STANDARD:
        law *= abs(recip_gamma(1.0 - model.alpha)) ** 2
    return law


def energy_expectation(model: BoxModel, t: float) -> float:
    """Expectation of ``-(hbar / i**alpha) d**alpha/dt**alpha``, real and non-negative."""

    return model.energy_scale * total_probability(model, t)


def energy_operator_numerical(model: BoxModel, t_end: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Energy from the L1 Caputo derivative of the sampled time factor.

    Returns the grid and ``-(hbar / i**alpha) conj(T) D**alpha T``, which should
    match ``energy_expectation`` to the scheme's accuracy away from ``t = 0``.
    """

    grid = time_grid(t_end, count)
    samples = SampledFunction(grid, np.array([time_factor(model, t) for t in grid]))
    if model.alpha == 1.0:
        derivative = np.gradient(samples.values, samples.step)
    else:
        derivative = caputo_derivative(samples, model.alpha).values
    energy = -(model.hbar / i_pow(model.alpha)) * np.conj(samples.values) * derivative
    return grid, energy.real


# }}}

# {{{ effective potential


def _potential_ratio(model: BoxModel, t: float) -> complex:
    """``E_{alpha,alpha}(z) / E_alpha(z)`` at ``z = lambda i**alpha t**alpha``."""

    z = time_argument(model.alpha, box_eigenvalue(model), t)
    denominator = ml(model.alpha, z)
    if abs(denominator) < SINGULARITY_TOLERANCE:
        raise SingularityError(f"E_alpha vanishes at t={t} (|E| = {abs(denominator):.3e})")
    return ml(model.alpha, z, beta=model.alpha) / denominator


def v_eff(model: BoxModel, t: float) -> EffectivePotentialSample:
    """Complex effective potential ``i**(1+alpha) hbar lambda t**(alpha-1) E_{a,a}/E_a + hbar**2 lambda/(2 m D)``."""

    if not t > 0.0:
        raise DomainError(f"the effective potential is defined for t > 0, got {t}")
    lam = box_eigenvalue(model)
    value = cmath.exp(0.5j * math.pi * (1.0 + model.alpha)) * model.hbar * lam * t ** (model.alpha - 1.0)
    value = value * _potential_ratio(model, t) + model.potential_offset
    return EffectivePotentialSample(t, value.real, value.imag)


def v_eff_series_small_t(model: BoxModel, t: float, order: int = 2, form: VeffForm = VeffForm.PRINTED) -> EffectivePotentialSample:
    """Small-time expansion of ``v_eff`` through the ``t**(2 alpha - 1)`` terms.

    ``order`` 0 keeps the constants, 1 adds the ``t**(alpha-1)`` terms and 2 the
    ``t**(2 alpha - 1)`` terms.
    """

    if not t > 0.0:
        raise DomainError(f"the effective potential is defined for t > 0, got {t}")
    if order not in (0, 1, 2):
        raise ParamError(f"order must be 0, 1 or 2, got {order}")

    alpha, hbar, lam = model.alpha, model.hbar, box_eigenvalue(model)
    offset = model.potential_offset
    v_r = offset
    v_i = offset if form is VeffForm.PRINTED else 0.0
    if order >= 1:
        leading = hbar * lam * t ** (alpha - 1.0) / math.gamma(alpha)
        v_r -= leading * math.sin(0.5 * alpha * math.pi)
        v_i += leading * math.cos(0.5 * alpha * math.pi)
    if order >= 2:
        kernel = recip_gamma(2.0 * alpha).real - 1.0 / (math.gamma(alpha) * math.gamma(1.0 + alpha))
        second = hbar * lam**2 * kernel * t ** (2.0 * alpha - 1.0)
        v_r -= second * math.sin(alpha * math.pi)
        v_i += second * math.cos(alpha * math.pi)
    return EffectivePotentialSample(t, v_r, v_i)


def v_eff_numerator_params(model: BoxModel) -> RLDerivativeParams:
    """H-function parameters of the numerator ``t**(alpha-1) E_{alpha,alpha}`` of the potential.

    Obtained as the order ``1 - alpha`` derivative of ``E_alpha(c t**alpha)``.
    """

    c = -box_eigenvalue(model) * i_pow(model.alpha)
    return h_rl_derivative_params(ml_params(model.alpha), 0.0, model.alpha, 1.0 - model.alpha, c=c)


def _integrated_potential(model: BoxModel, t: float) -> Tuple[float, float]:
    """``(int_0^t V_R, int_0^t V_I)`` after the substitution ``u = t'**alpha``."""

    alpha = model.alpha
    scale = cmath.exp(0.5j * math.pi * (1.0 + alpha)) * model.hbar * box_eigenvalue(model) / alpha

    def integrand(u: float) -> np.ndarray:
        value = scale * _potential_ratio(model, u ** (1.0 / alpha)) if u > 0.0 else scale / math.gamma(alpha)
        return np.array([value.real, value.imag])

    result, error = integrate.quad_vec(integrand, 0.0, t**alpha, epsabs=1e-10, epsrel=1e-10)
    if error > QUADRATURE_TOLERANCE:
        raise QuadratureError(f"potential integral error {error:.3e} exceeds {QUADRATURE_TOLERANCE} at t={t}")
    logger.debug("integrated potential t=%s: %s (error %.2e)", t, result, error)
    return model.potential_offset * t + float(result[0]), float(result[1])


def t_product_form(model: BoxModel, t: float) -> complex:
    """``T = exp(int V_I / hbar) exp(i (hbar**2 lambda t / (2 m D) - int V_R) / hbar)``."""

    if not t > 0.0:
        raise DomainError(f"the product form is defined for t > 0, got {t}")
    int_r, int_i = _integrated_potential(model, t)
    phase = model.potential_offset * t - int_r
    return cmath.exp(int_i / model.hbar) * cmath.exp(1j * phase / model.hbar)


def t_small_time_product(model: BoxModel, t: float) -> complex:
    """Lowest-order product of a decaying and an oscillating exponential in ``t**alpha``."""

    alpha, lam = model.alpha, box_eigenvalue(model)
    scale = lam * t**alpha / (alpha * math.gamma(alpha))
    decay = math.exp(scale * math.cos(0.5 * alpha * math.pi))
    return decay * cmath.exp(1j * scale * math.sin(0.5 * alpha * math.pi))


def energy_product_form(model: BoxModel, t: float) -> float:
    """``hbar pi**2 D n**2 / a**2 * exp(2/hbar int_0^t V_I)``."""

    if not t > 0.0:
        raise DomainError(f"the product form is defined for t > 0, got {t}")
    _, int_i = _integrated_potential(model, t)
    return model.energy_scale * math.exp(2.0 * int_i / model.hbar)


# }}}
