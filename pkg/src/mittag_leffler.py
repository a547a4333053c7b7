"""Mittag-Leffler functions ``E_{alpha,beta}(z)`` for complex arguments.

Three strategies cover the plane:

* Taylor summation for ``|z| <= taylor_radius(alpha)``;
* the pole-plus-cut-integral representation for intermediate moduli;
* the optimally truncated asymptotic series plus the exponential term
  for ``|z| >= 15``, falling back to the integral representation when its
  error estimate is too large for the target accuracy.

``ml_eval`` picks the strategy; the individual strategies are public so that
their overlap can be tested.
"""

import cmath
import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Tuple

from scipy import integrate, special

from fracq_errors import ConvergenceError, DomainError, NumericalError, ParamError, QuadratureError
from special_functions import i_pow, recip_gamma

logger = logging.getLogger(__name__)

TAYLOR_LIMIT = 5.0
ASYMPTOTIC_RADIUS = 15.0
SERIES_MAX_RADIUS = 10.0
ASYMPTOTIC_MIN_RADIUS = 10.0
MAX_SERIES_TERMS = 10_000
MAX_ASYMPTOTIC_TERMS = 64
SMALL_TERM_RUN = 3
DEFAULT_SERIES_TOL = 1e-15
TARGET_RELATIVE_ERROR = 1e-11
STOKES_TOLERANCE = 1e-12
CUT_TAIL = 50.0


class Regime(enum.Enum):
    EXPONENTIAL = "exponential"
    TAYLOR = "taylor"
    INTEGRAL = "integral"
    ASYMPTOTIC = "asymptotic"


class AsymptoticForm(enum.Enum):
    """Which large-argument series ``ml_asymptotic`` sums."""

    STANDARD = "standard"
    """``-sum_{k>=1} z**-k / Gamma(beta - alpha k)``."""
    PRINTED = "printed"
    """``-sum_{nu>=0} z**-(1+nu) / Gamma(1 - nu alpha)``, defined for ``beta == 1``."""


class Convention(enum.Enum):
    """Phase convention of the time-factor argument ``lambda * (+-i)**alpha * t**alpha``."""

    I_POW = "i"
    MINUS_I_POW = "-i"


@dataclass(frozen=True)
class MLQuery:
    """Arguments of one evaluation of ``E_{alpha,beta}(z)``."""

    alpha: float
    beta: float = 1.0
    z: complex = 0j

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ParamError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.beta > 0.0:
            raise ParamError(f"beta must be positive, got {self.beta}")
        object.__setattr__(self, "z", complex(self.z))


class MLDecomposition(NamedTuple):
    e_r: float
    e_i: float


class SeriesSum(NamedTuple):
    value: complex
    terms: int


def taylor_radius(alpha: float) -> float:
    """Largest modulus summed by the Taylor series in double precision."""

    return min(TAYLOR_LIMIT, 12.0**alpha)


def time_argument(alpha: float, lam: float, t: float, convention: Convention = Convention.I_POW) -> complex:
    """Argument ``lambda * i**alpha * t**alpha`` of the separable time factor."""

    if t < 0.0:
        raise DomainError(f"time must be non-negative, got {t}")
    phase = i_pow(alpha)
    if convention is Convention.MINUS_I_POW:
        phase = phase.conjugate()
    return lam * phase * t**alpha


# {{{ Taylor series


def ml_series(query: MLQuery, tol: float = DEFAULT_SERIES_TOL) -> SeriesSum:
    """Sum ``z**k / Gamma(alpha k + beta)`` until three consecutive terms are small.

    Terms are formed in log space so that ``z**k`` and the gamma value never
    overflow separately.

    Raises:
        DomainError: If ``|z| > 10`` or ``tol < 1e-15``.
        ConvergenceError: If 10 000 terms do not satisfy the stopping rule.
    """

    alpha, beta, z = query.alpha, query.beta, query.z
    if abs(z) > SERIES_MAX_RADIUS:
        raise DomainError(f"Taylor series requires |z| <= {SERIES_MAX_RADIUS}, got {abs(z)}")
    if tol < 1e-15:
        raise DomainError(f"series tolerance must be at least 1e-15, got {tol}")
    if z == 0:
        return SeriesSum(complex(recip_gamma(beta)), 1)

    log_z = cmath.log(z)
    total = 0j
    small = 0
    for k in range(MAX_SERIES_TERMS):
        term = cmath.exp(k * log_z - math.lgamma(alpha * k + beta))
        total += term
        if abs(term) < tol * abs(total):
            small += 1
            if small >= SMALL_TERM_RUN:
                return SeriesSum(total, k + 1)
        else:
            small = 0

    raise ConvergenceError(
        f"Mittag-Leffler series did not converge for alpha={alpha}, beta={beta}, z={z}",
        terms=MAX_SERIES_TERMS,
    )


# }}}

# {{{ integral representation


def _safe_exp(w: complex) -> complex:
    try:
        return cmath.exp(w)
    except OverflowError as exc:
        raise NumericalError(f"exp({w}) overflows double precision") from exc


def _pole_value(alpha: float, beta: float, radius: float, theta: float) -> complex:
    """``(1/alpha) z**((1-beta)/alpha) exp(z**(1/alpha))`` for ``z = radius * exp(i theta)``."""

    w = radius ** (1.0 / alpha) * cmath.exp(1j * theta / alpha)
    prefactor = radius ** ((1.0 - beta) / alpha) * cmath.exp(1j * theta * (1.0 - beta) / alpha)
    return prefactor * _safe_exp(w) / alpha


def _quad_complex(func: Callable[[float], complex], lower: float, upper: float, points: List[float]) -> Tuple[complex, float]:
    options = {"limit": 200, "epsabs": 1e-14, "epsrel": 1e-12}
    if points:
        options["points"] = points
    re, re_err, *_ = integrate.quad(lambda u: func(u).real, lower, upper, full_output=1, **options)
    im, im_err, *_ = integrate.quad(lambda u: func(u).imag, lower, upper, full_output=1, **options)
    return complex(re, im), re_err + im_err


def ml_integral_representation(query: MLQuery) -> complex:
    """Pole term plus cut integral, valid for every ``z``.

    On the Stokes lines ``|arg z| = alpha pi`` the pole term is halved and
    the cut integral taken as a principal value. Roots of the kernel
    denominator close to the integration path are subtracted and integrated
    analytically.
    """

    alpha, beta, z = query.alpha, query.beta, query.z
    if z == 0:
        return complex(recip_gamma(beta))
    if beta >= 1.0 + alpha:
        # E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z keeps the kernel integrable at u = 0
        shifted = ml_integral_representation(replace(query, beta=beta - alpha))
        return (shifted - recip_gamma(beta - alpha)) / z

    radius, theta = abs(z), cmath.phase(z)
    on_line = abs(abs(theta) - alpha * math.pi) <= STOKES_TOLERANCE

    if on_line:
        sides = [s for s in (theta, theta - math.copysign(2.0 * math.pi, theta)) if abs(s) <= alpha * math.pi + STOKES_TOLERANCE]
        pole = 0.5 * sum(_pole_value(alpha, beta, radius, s) for s in sides)
    elif alpha == 1.0 or abs(theta) < alpha * math.pi:
        pole = _pole_value(alpha, beta, radius, theta)
    else:
        pole = 0j

    upper = CUT_TAIL**alpha
    sin_beta = math.sin(math.pi * beta)

    if alpha == 1.0:
        if sin_beta == 0.0:
            return pole

        def numerator(u: complex) -> complex:
            return u ** (1.0 - beta) * _safe_exp(-u) * sin_beta / math.pi

        roots = [complex(radius, 0.0) if on_line else -z]

        def kernel(u: float) -> complex:
            return numerator(u) / (u - roots[0])

        def residue(k: int) -> complex:
            return numerator(roots[k])
    else:
        sin_shift = math.sin(math.pi * (alpha - beta))
        r_plus = z * cmath.exp(1j * math.pi * alpha)
        r_minus = z * cmath.exp(-1j * math.pi * alpha)
        if on_line:
            if abs(r_plus.imag) < abs(r_minus.imag):
                r_plus = complex(radius, 0.0)
            else:
                r_minus = complex(radius, 0.0)
        roots = [r_plus, r_minus]

        def numerator(u: complex) -> complex:
            weight = u ** ((1.0 - beta) / alpha) * _safe_exp(-(u ** (1.0 / alpha)))
            return weight * (u * sin_beta + z * sin_shift) / (alpha * math.pi)

        def kernel(u: float) -> complex:
            return numerator(u) / ((u - r_plus) * (u - r_minus))

        def residue(k: int) -> complex:
            return numerator(roots[k]) / (roots[k] - roots[1 - k])

    # exp(-r**(1/alpha)) decays only for near roots; far roots are never evaluated
    near, far_points = [], []
    for k, r in enumerate(roots):
        if abs(cmath.phase(r)) < 0.5 * alpha * math.pi:
            near.append((r, residue(k)))
        elif 0.0 < r.real < upper:
            far_points.append(r.real)
    far_points.sort()

    def remainder(u: float) -> complex:
        value = kernel(u)
        for r, res in near:
            d = u - r
            if d == 0:
                d = complex(u * 1e-12, 0.0)
            value -= res / d
        return value

    cut, abserr = _quad_complex(remainder, 0.0, upper, far_points)
    for r, res in near:
        if r.imag == 0.0:
            cut += res * (math.log(abs(upper - r.real)) - math.log(r.real))
        else:
            cut += res * (cmath.log(upper - r) - cmath.log(-r))

    total = pole + cut
    if abserr > 1e-9 * (1.0 + abs(total)):
        raise QuadratureError(f"cut integral error {abserr:.3e} for alpha={alpha}, beta={beta}, z={z}")
    logger.debug("integral representation z=%s pole=%s cut=%s abserr=%.2e", z, pole, cut, abserr)
    return total


# }}}

# {{{ asymptotic series


def ml_asymptotic(query: MLQuery, n_terms: int, form: AsymptoticForm = AsymptoticForm.STANDARD) -> complex:
    """Algebraic part of the large-argument expansion with a fixed number of terms.

    Terms whose reciprocal gamma factor vanishes contribute zero.

    Raises:
        DomainError: If ``|z| < 10`` or ``n_terms`` is outside
            ``[1, floor(1/alpha) + 5]``.
    """

    alpha, beta, z = query.alpha, query.beta, query.z
    if abs(z) < ASYMPTOTIC_MIN_RADIUS:
        raise DomainError(f"asymptotic series requires |z| >= {ASYMPTOTIC_MIN_RADIUS}, got {abs(z)}")
    max_terms = math.floor(1.0 / alpha) + 5
    if not 1 <= n_terms <= max_terms:
        raise DomainError(f"n_terms must lie in [1, {max_terms}], got {n_terms}")

    if form is AsymptoticForm.PRINTED:
        if beta != 1.0:
            raise ParamError("the printed asymptotic form is defined for beta = 1 only")
        return -sum(z ** -(1 + nu) * recip_gamma(1.0 - nu * alpha) for nu in range(n_terms))
    return -sum(z**-k * recip_gamma(beta - alpha * k) for k in range(1, n_terms + 1))


def _optimal_asymptotic_sum(alpha: float, beta: float, z: complex) -> Tuple[complex, float]:
    """Standard series truncated before its smallest non-zero term; returns (sum, error estimate)."""

    total = 0j
    previous = math.inf
    for k in range(1, MAX_ASYMPTOTIC_TERMS + 1):
        term = -(z**-k) * recip_gamma(beta - alpha * k)
        magnitude = abs(term)
        if magnitude == 0.0:
            continue
        if magnitude > previous:
            return total, previous
        total += term
        previous = magnitude
    return total, previous if previous < math.inf else 0.0


def _stokes_multiplier(alpha: float, radius: float, theta: float) -> float:
    """Smoothed switching factor of the exponential across ``|arg z| = alpha pi``."""

    singulant = radius ** (1.0 / alpha)
    return 0.5 * float(special.erfc((abs(theta) / alpha - math.pi) * math.sqrt(0.5 * singulant)))


def _ml_large(alpha: float, beta: float, z: complex) -> Tuple[complex, bool]:
    """Asymptotic value and whether its error estimate meets the target."""

    series, error = _optimal_asymptotic_sum(alpha, beta, z)
    radius, theta = abs(z), cmath.phase(z)
    multiplier = _stokes_multiplier(alpha, radius, theta)
    exponential = 0j
    uncertain = 0.0
    if multiplier > 0.0:
        pole = _pole_value(alpha, beta, radius, theta)
        exponential = multiplier * pole
        uncertain = min(multiplier, 1.0 - multiplier) * abs(pole)

    total = series + exponential
    accepted = error + uncertain <= TARGET_RELATIVE_ERROR * abs(total)
    return total, accepted


# }}}

# {{{ evaluation


def ml_regime(query: MLQuery) -> Regime:
    """Strategy ``ml_eval`` starts from for this query."""

    if query.alpha == 1.0 and query.beta == 1.0:
        return Regime.EXPONENTIAL
    modulus = abs(query.z)
    if modulus <= taylor_radius(query.alpha):
        return Regime.TAYLOR
    if modulus < ASYMPTOTIC_RADIUS:
        return Regime.INTEGRAL
    return Regime.ASYMPTOTIC


def ml_eval(query: MLQuery) -> complex:
    """Evaluate ``E_{alpha,beta}(z)`` with relative error around ``1e-10``.

    Examples:
        >>> ml_eval(MLQuery(alpha=1.0, z=1j * math.pi))
        (-1+1.2246467991473532e-16j)

    Raises:
        NumericalError: If the value or an intermediate overflows double precision.
    """

    try:
        return _ml_dispatch(query)
    except (OverflowError, ZeroDivisionError) as exc:
        raise NumericalError(f"{type(exc).__name__} evaluating {query}: {exc}") from exc


def _ml_dispatch(query: MLQuery) -> complex:
    regime = ml_regime(query)
    if regime is Regime.EXPONENTIAL:
        return _safe_exp(query.z)
    if regime is Regime.TAYLOR:
        return ml_series(query).value
    if regime is Regime.ASYMPTOTIC:
        value, accepted = _ml_large(query.alpha, query.beta, query.z)
        if accepted:
            return value
        logger.debug("asymptotic estimate rejected for %s, using the cut integral", query)
    return ml_integral_representation(query)


def ml(alpha: float, z: complex, beta: float = 1.0) -> complex:
    """Shorthand for ``ml_eval(MLQuery(alpha, beta, z))``."""

    return ml_eval(MLQuery(alpha=alpha, beta=beta, z=z))


def ml_real_imag(alpha: float, lam: float, t: float) -> MLDecomposition:
    """Real and imaginary parts of ``E_alpha(lambda i**alpha t**alpha)``."""

    value = ml(alpha, time_argument(alpha, lam, t))
    return MLDecomposition(value.real, value.imag)


def ml_half_closed_form(z: complex) -> complex:
    """``E_{1/2}(z) = exp(z**2) erfc(-z)``, evaluated through the Faddeeva function."""

    return complex(special.wofz(-1j * complex(z)))


# }}}
