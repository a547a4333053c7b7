"""Independent reference computations for the time factor.

* ``ml_highprec``: Taylor summation in mpmath extended precision;
* ``bromwich_invert``: fixed-Talbot inversion of the Laplace transform
  ``s**(alpha-1) / (s**alpha - i**alpha lambda)``;
* ``f_alpha_quadrature``: the cut integral left after removing the pole of
  that transform, by adaptive quadrature;
* ``f_alpha_series``: the same quantity assembled from the pole term and the
  Mittag-Leffler function.

Each call builds its own ``mpmath.MPContext`` so that precision settings are
never shared between threads.
"""

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import mpmath
from scipy import integrate

from fracq_errors import (
    ContourError,
    ConvergenceError,
    DomainError,
    ParamError,
    PoleOnPathError,
    QuadratureError,
)
from mittag_leffler import MLDecomposition, MLQuery, ml_eval, ml_series
from special_functions import BranchConvention, LambdaRootRule, i_pow, warn_if_excluded_alpha

logger = logging.getLogger(__name__)

MIN_DIGITS = 50
MAX_DIGITS = 500
MAX_HIGHPREC_RADIUS = 30.0
MAX_GUARD_DIGITS = 10_000
HIGHPREC_SMALL_RUN = 10
HIGHPREC_MAX_TERMS = 1_000_000
DEFAULT_NODES = 48
CONTOUR_CLEARANCE = 1e-3
TAIL_CUTOFF = 40.0
PATH_TOLERANCE = 1e-12
QUADRATURE_ACCURACY = 1e-9


class ContourMethod(enum.Enum):
    DEFORMED_CONTOUR = "talbot"


class FSign(enum.Enum):
    """Sign in front of the pole term of ``F = +-e^{s t}/alpha - E_alpha``."""

    MINUS = "minus"
    """``F = e^{s t}/alpha - E``, the resolved sign."""
    PLUS = "plus"
    """``F = -e^{s t}/alpha - E``, kept for comparison only."""


# {{{ extended-precision Taylor


def _highprec_sum(alpha: float, beta: float, z: complex, digits: int) -> Tuple[mpmath.MPContext, object]:
    if not MIN_DIGITS <= digits <= MAX_DIGITS:
        raise DomainError(f"digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {digits}")
    if abs(z) > MAX_HIGHPREC_RADIUS:
        raise DomainError(f"extended-precision Taylor requires |z| <= {MAX_HIGHPREC_RADIUS}, got {abs(z)}")

    guard = int(abs(z) ** (1.0 / alpha) / math.log(10.0)) + 10
    if guard > MAX_GUARD_DIGITS:
        raise ConvergenceError(f"cancellation would need {guard} guard digits for alpha={alpha}, |z|={abs(z)}")

    ctx = mpmath.MPContext()
    ctx.dps = digits + guard
    a, b, w = ctx.mpf(alpha), ctx.mpf(beta), ctx.mpc(z)
    threshold = ctx.mpf(10) ** (-digits)

    total = ctx.mpc(0)
    power = ctx.mpc(1)
    small = 0
    for k in range(HIGHPREC_MAX_TERMS):
        term = power * ctx.rgamma(a * k + b)
        total += term
        if abs(term) < threshold * abs(total):
            small += 1
            if small >= HIGHPREC_SMALL_RUN:
                logger.debug("extended Taylor: %d terms at %d+%d digits", k + 1, digits, guard)
                return ctx, total
        else:
            small = 0
        power *= w
    raise ConvergenceError(f"extended-precision series did not converge for z={z}", terms=HIGHPREC_MAX_TERMS)


def ml_highprec(alpha: float, beta: float, z: complex, digits: int = 200) -> complex:
    """``E_{alpha,beta}(z)`` summed with ``digits`` significant digits, rounded to double."""

    _, total = _highprec_sum(alpha, beta, complex(z), digits)
    return complex(total)


def ml_highprec_text(alpha: float, beta: float, z: complex, digits: int) -> Tuple[str, str]:
    """Real and imaginary parts of ``ml_highprec`` printed to ``digits`` digits."""

    ctx, total = _highprec_sum(alpha, beta, complex(z), digits)
    return ctx.nstr(total.real, digits), ctx.nstr(total.imag, digits)


def time_factor_real_imag_highprec(alpha: float, lam: float, t: float, digits: int = 50, terms: int = 100) -> MLDecomposition:
    """Sum the cosine and sine series of ``E_alpha(lambda i**alpha t**alpha)`` term by term."""

    if t < 0.0:
        raise DomainError(f"time must be non-negative, got {t}")
    ctx = mpmath.MPContext()
    ctx.dps = digits
    a, x = ctx.mpf(alpha), ctx.mpf(lam) * ctx.mpf(t) ** ctx.mpf(alpha)
    e_r = e_i = ctx.mpf(0)
    for nu in range(terms):
        weight = x**nu * ctx.rgamma(1 + a * nu)
        angle = nu * a * ctx.pi / 2
        e_r += weight * ctx.cos(angle)
        e_i += weight * ctx.sin(angle)
    return MLDecomposition(float(e_r), float(e_i))


# }}}

# {{{ Laplace inversion


@dataclass(frozen=True)
class BromwichConfig:
    """Fixed-Talbot inversion settings.

    ``gamma_abscissa`` sets the crossing ``r / t`` of the contour with the
    real axis and must exceed ``|lambda|**(1/alpha)``; ``None`` picks
    ``1 + |lambda|**(1/alpha)``.
    """

    gamma_abscissa: Optional[float] = None
    nodes: int = DEFAULT_NODES
    method: ContourMethod = ContourMethod.DEFORMED_CONTOUR

    def __post_init__(self) -> None:
        if self.nodes < 8:
            raise ParamError(f"at least 8 contour nodes are required, got {self.nodes}")
        if self.gamma_abscissa is not None and not self.gamma_abscissa > 0.0:
            raise ParamError(f"gamma_abscissa must be positive, got {self.gamma_abscissa}")

    def abscissa(self, alpha: float, lam: float) -> float:
        pole_radius = abs(lam) ** (1.0 / alpha)
        if self.gamma_abscissa is None:
            return 1.0 + pole_radius
        if self.gamma_abscissa <= pole_radius:
            raise ParamError(f"gamma_abscissa={self.gamma_abscissa} does not clear the pole radius {pole_radius}")
        return self.gamma_abscissa

    def degree(self, alpha: float, lam: float, t: float) -> int:
        """Node count of the contour through ``abscissa * t``; never below ``nodes``."""

        return max(self.nodes, math.ceil(2.5 * self.abscissa(alpha, lam) * t))

    def radius(self, alpha: float, lam: float, t: float) -> float:
        # fixed-Talbot weights assume r = 2M/5, so r only grows through the degree
        return 0.4 * self.degree(alpha, lam, t)


def _talbot_nodes(r: float, t: float, nodes: int) -> List[complex]:
    points = [complex(r / t, 0.0)]
    for k in range(1, nodes):
        theta = k * math.pi / nodes
        points.append(r / t * theta * complex(1.0 / math.tan(theta), 1.0))
    return points


def _check_contour(poles: List[complex], r: float, t: float, nodes: int) -> None:
    contour = _talbot_nodes(r, t, nodes)
    contour += [p.conjugate() for p in contour]
    for pole in poles:
        distance = min(abs(pole - p) for p in contour)
        if distance < CONTOUR_CLEARANCE:
            raise ContourError(f"pole {pole} lies {distance:.2e} from the contour nodes")
        theta = abs(pole.imag) * t / r
        if theta >= math.pi or pole.real >= r / t * (theta / math.tan(theta) if theta else 1.0):
            raise ContourError(f"pole {pole} lies outside the Talbot contour (r={r}, t={t})")


def bromwich_invert(cfg: BromwichConfig, alpha: float, lam: float, t: float) -> complex:
    """Invert ``s**(alpha-1) / (s**alpha - i**alpha lambda)`` at time ``t``.

    The transform is not conjugate-symmetric, so the real and imaginary
    parts of the time function are inverted separately.

    Raises:
        ContourError: If the pole of the transform lies within ``1e-3`` of a
            contour node or outside the contour.
    """

    if not t > 0.0:
        raise DomainError(f"Laplace inversion needs t > 0, got {t}")
    sigma = lam * i_pow(alpha)
    pole = BranchConvention(alpha).pole(lam)
    degree = cfg.degree(alpha, lam, t)
    r = cfg.radius(alpha, lam, t)
    if pole is not None:
        _check_contour([pole, pole.conjugate()], r, t, degree)

    ctx = mpmath.MPContext()
    ctx.dps = max(30, degree)
    a = ctx.mpf(alpha)
    s_plus, s_minus = ctx.mpc(sigma), ctx.mpc(sigma.conjugate())

    def transform(s, shift):
        return s ** (a - 1) / (s**a - shift)

    def real_part(s):
        return (transform(s, s_plus) + transform(s, s_minus)) / 2

    def imag_part(s):
        return (transform(s, s_plus) - transform(s, s_minus)) / ctx.mpc(0, 2)

    options = {"method": cfg.method.value, "degree": degree, "r": r}
    re = ctx.invertlaplace(real_part, t, **options)
    im = ctx.invertlaplace(imag_part, t, **options)
    return complex(float(re), float(im))


# }}}

# {{{ cut integral


@dataclass(frozen=True)
class FAlphaQuery:
    alpha: float
    lam: float
    t: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ParamError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.lam < 0.0:
            raise ParamError(f"lambda must be negative, got {self.lam}")
        if not self.t > 0.0:
            raise ParamError(f"t must be positive, got {self.t}")

    @property
    def sigma(self) -> complex:
        return self.lam * i_pow(self.alpha)


def f_alpha_quadrature(query: FAlphaQuery) -> complex:
    """Cut integral ``(sigma sin(alpha pi)/pi) int_0^inf x**(alpha-1) e^{-xt} / (x**(2 alpha) - 2 sigma cos(alpha pi) x**alpha + sigma**2) dx``.

    Integrated in ``u = x**alpha`` up to ``x t = 40``.

    Raises:
        PoleOnPathError: If the denominator nearly vanishes on the real axis.
        QuadratureError: If the absolute error exceeds ``1e-9``.
    """

    alpha, t, sigma = query.alpha, query.t, query.sigma
    warn_if_excluded_alpha(alpha)
    if alpha == 1.0:
        # no branch cut
        return 0j
    prefactor = sigma * math.sin(alpha * math.pi) / (alpha * math.pi)

    roots = [sigma * cmath.exp(1j * math.pi * alpha), sigma * cmath.exp(-1j * math.pi * alpha)]
    upper = (TAIL_CUTOFF / t) ** alpha
    cos_term = 2.0 * sigma * math.cos(alpha * math.pi)

    def denominator(u: float) -> complex:
        return u * u - cos_term * u + sigma * sigma

    points = sorted(r.real for r in roots if 0.0 < r.real < upper)
    for point in points:
        if abs(denominator(point)) < PATH_TOLERANCE:
            raise PoleOnPathError(f"denominator vanishes near u={point} for alpha={alpha}, lambda={query.lam}")

    def integrand(u: float) -> complex:
        return math.exp(-(u ** (1.0 / alpha)) * t) / denominator(u)

    options = {"limit": 200, "epsabs": 1e-13, "epsrel": 1e-12}
    if points:
        options["points"] = points
    re, re_err, *_ = integrate.quad(lambda u: integrand(u).real, 0.0, upper, full_output=1, **options)
    im, im_err, *_ = integrate.quad(lambda u: integrand(u).imag, 0.0, upper, full_output=1, **options)

    error = abs(prefactor) * (re_err + im_err)
    if error > QUADRATURE_ACCURACY:
        raise QuadratureError(f"cut integral error {error:.3e} exceeds {QUADRATURE_ACCURACY}")
    logger.debug("F_alpha quadrature %s: error %.2e", query, error)
    return prefactor * complex(re, im)


def f_alpha_series(
    query: FAlphaQuery,
    tol: float = 1e-15,
    sign: FSign = FSign.MINUS,
    rule: LambdaRootRule = LambdaRootRule.PRINCIPAL,
) -> complex:
    """``F = e^{s t}/alpha - E_alpha(sigma t**alpha)`` with the pole ``s`` chosen by ``rule``."""

    pole_term = BranchConvention(query.alpha, rule).pole_term(query.lam, query.t)
    ml_query = MLQuery(alpha=query.alpha, z=query.sigma * query.t**query.alpha)
    value = ml_series(ml_query, tol).value if abs(ml_query.z) <= 1.0 else ml_eval(ml_query)
    if sign is FSign.PLUS:
        pole_term = -pole_term
    return pole_term - value


def t_via_pole_plus_integral(alpha: float, lam: float, t: float, rule: LambdaRootRule = LambdaRootRule.PRINCIPAL) -> complex:
    """Time factor as the pole contribution minus the cut integral."""

    query = FAlphaQuery(alpha, lam, t)
    pole_term = BranchConvention(alpha, rule).pole_term(lam, t)
    return pole_term - f_alpha_quadrature(query)


# }}}
