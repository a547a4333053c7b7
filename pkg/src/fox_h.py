"""Fox H-functions described by their Mellin-Barnes parameters.

``HFunctionParams`` holds the order ``(m, n, p, q)`` together with the upper
pairs ``(a_j, A_j)`` and lower pairs ``(b_j, B_j)``. Evaluation sums residues,
either over the poles of ``Gamma(b_j + B_j s)`` (``h_series_expansion_I``,
a power series in ``z``) or over those of ``Gamma(1 - a_j - A_j s)``
(``h_series_expansion_II``, a series in ``1/z``). Gamma factors in the
denominator go through their reciprocal so that a pole there removes the
term instead of raising.

The parameter transforms (argument inversion, Riemann-Liouville derivative
and Laplace transform) only rearrange pairs and accept coefficients of
either sign; the evaluators require positive coefficients.
"""

import cmath
import enum
import logging
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, List, NamedTuple, NoReturn, Optional, Sequence, Tuple

from fracq_errors import (
    ConvergenceError,
    DomainError,
    ParamError,
    ParamParseError,
    RegionError,
    UnsupportedError,
)
from special_functions import is_gamma_pole, log_gamma_complex

logger = logging.getLogger(__name__)

Pair = Tuple[complex, float]

COINCIDENCE_TOLERANCE = 1e-10
COINCIDENCE_DEPTH = 50
MU_TOLERANCE = 1e-12
RING_TOLERANCE = 1e-6
MAX_TERMS = 10_000
SMALL_TERM_RUN = 3
DEFAULT_TOL = 1e-15


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class Verdict(enum.Enum):
    ALL_Z = "AllZ"
    DISK_ONLY = "DiskOnly"
    EXTERIOR_ONLY = "ExteriorOnly"
    INDETERMINATE = "Indeterminate"


def _as_pairs(pairs: Iterable[Sequence[complex]]) -> Tuple[Pair, ...]:
    normalized = []
    for pair in pairs:
        value, coefficient = pair
        if isinstance(coefficient, complex):
            if coefficient.imag != 0.0:
                raise ParamError(f"gamma coefficients must be real, got {coefficient}")
            coefficient = coefficient.real
        coefficient = float(coefficient)
        if not math.isfinite(coefficient) or coefficient == 0.0:
            raise ParamError(f"gamma coefficients must be finite and non-zero, got {coefficient}")
        normalized.append((complex(value), coefficient))
    return tuple(normalized)


@dataclass(frozen=True)
class HFunctionParams:
    """Order and gamma pairs of ``H^{m,n}_{p,q}(z | (a_j, A_j); (b_j, B_j))``."""

    m: int
    n: int
    p: int
    q: int
    upper: Tuple[Pair, ...] = ()
    lower: Tuple[Pair, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", _as_pairs(self.upper))
        object.__setattr__(self, "lower", _as_pairs(self.lower))
        if min(self.m, self.n, self.p, self.q) < 0:
            raise ParamError(f"orders must be non-negative, got {(self.m, self.n, self.p, self.q)}")
        if len(self.upper) != self.p:
            raise ParamError(f"expected p={self.p} upper pairs, got {len(self.upper)}")
        if len(self.lower) != self.q:
            raise ParamError(f"expected q={self.q} lower pairs, got {len(self.lower)}")
        if self.n > self.p:
            raise ParamError(f"n={self.n} exceeds p={self.p}")
        if self.m > self.q:
            raise ParamError(f"m={self.m} exceeds q={self.q}")

    @property
    def has_positive_coefficients(self) -> bool:
        return all(A > 0.0 for _, A in self.upper) and all(B > 0.0 for _, B in self.lower)

    def require_positive(self) -> None:
        if not self.has_positive_coefficients:
            raise ParamError("the evaluator requires positive coefficients A_j and B_j")

    def to_text(self) -> str:
        """Serialize as ``H[m,n,p,q] upper=(a,A);... lower=(b,B);...``."""

        upper = ";".join(f"({_format_number(a)},{A!r})" for a, A in self.upper)
        lower = ";".join(f"({_format_number(b)},{B!r})" for b, B in self.lower)
        return f"H[{self.m},{self.n},{self.p},{self.q}] upper={upper} lower={lower}"

    @classmethod
    def from_text(cls, text: str) -> "HFunctionParams":
        return _ParamsParser(text).parse()

    def __str__(self) -> str:
        return self.to_text()


class HConvergenceClass(NamedTuple):
    mu: float
    beta_star: float
    verdict: Verdict


class RLDerivativeParams(NamedTuple):
    params: HFunctionParams
    prefactor_exponent: float
    argument_scale: complex


# {{{ text format


def _format_number(value: complex) -> str:
    if value.imag == 0.0:
        return repr(value.real)
    sign = "-" if value.imag < 0.0 else "+"
    return f"{value.real!r}{sign}{abs(value.imag)!r}j"


_HEADER = re.compile(r"\s*H\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


class _ParamsParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def fail(self, message: str) -> NoReturn:
        raise ParamParseError(message, self.text, self.pos)

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, literal: str) -> None:
        self.skip_space()
        if not self.text.startswith(literal, self.pos):
            self.fail(f"expected {literal!r}")
        self.pos += len(literal)

    def number(self, terminator: str, real: bool) -> complex:
        self.skip_space()
        start = self.pos
        end = self.text.find(terminator, start)
        if end < 0:
            self.fail(f"expected {terminator!r}")
        token = self.text[start:end].strip()
        try:
            value = float(token) if real else complex(token.replace(" ", ""))
        except ValueError:
            self.fail(f"invalid number {token!r}")
        self.pos = end
        return value

    def pairs(self, section: str) -> List[Tuple[complex, float]]:
        self.expect(f"{section}=")
        result: List[Tuple[complex, float]] = []
        self.skip_space()
        if self.pos >= len(self.text) or self.text[self.pos] != "(":
            return result
        while True:
            self.expect("(")
            value = self.number(",", real=False)
            self.expect(",")
            coefficient = self.number(")", real=True)
            self.expect(")")
            result.append((value, coefficient))
            self.skip_space()
            if self.pos < len(self.text) and self.text[self.pos] == ";":
                self.pos += 1
                continue
            return result

    def parse(self) -> HFunctionParams:
        match = _HEADER.match(self.text)
        if match is None:
            self.fail("expected header 'H[m,n,p,q]'")
        self.pos = match.end()
        m, n, p, q = (int(group) for group in match.groups())
        upper = self.pairs("upper")
        lower = self.pairs("lower")
        self.skip_space()
        if self.pos != len(self.text):
            self.fail("unexpected trailing text")
        try:
            return HFunctionParams(m, n, p, q, tuple(upper), tuple(lower))
        except ParamParseError:
            raise
        except ParamError as exc:
            raise ParamParseError(str(exc), self.text, self.pos) from exc


# }}}

# {{{ factories


def ml_params(alpha: float) -> HFunctionParams:
    """Parameters with ``H(-z) = E_alpha(z)``."""

    return HFunctionParams(1, 1, 1, 2, ((0, 1.0),), ((0, 1.0), (0, alpha)))


def exp_params() -> HFunctionParams:
    """Parameters with ``H(z) = exp(-z)``."""

    return HFunctionParams(1, 0, 0, 1, (), ((0, 1.0),))


def rational_kernel_params(alpha: float) -> HFunctionParams:
    """Mellin pairs of the rational kernel behind the cut integral.

    Carries the coefficient ``-1`` and is only meant for the structural
    transforms below.
    """

    pairs = ((0, 1.0 / alpha), (alpha, -1.0))
    return HFunctionParams(1, 1, 2, 2, pairs, pairs)


# }}}

# {{{ classification


def h_classify(params: HFunctionParams) -> HConvergenceClass:
    """Convergence indices ``mu``, ``beta*`` and the region where a series converges.

    The verdict is ``Indeterminate`` when the series the indices call for
    has coincident poles on its side.
    """

    params.require_positive()
    mu = sum(B for _, B in params.lower) - sum(A for _, A in params.upper)
    log_beta = sum(A * math.log(A) for _, A in params.upper) - sum(B * math.log(B) for _, B in params.lower)
    beta_star = math.exp(log_beta)

    if abs(mu) <= MU_TOLERANCE:
        mu = 0.0
        verdict = Verdict.DISK_ONLY
        simple = h_check_simple_poles(params, Side.LOWER) or h_check_simple_poles(params, Side.UPPER)
    elif mu > 0.0:
        verdict = Verdict.ALL_Z
        simple = h_check_simple_poles(params, Side.LOWER)
    else:
        verdict = Verdict.EXTERIOR_ONLY
        simple = h_check_simple_poles(params, Side.UPPER)

    if not simple:
        verdict = Verdict.INDETERMINATE
    logger.debug("classified %s: mu=%s beta*=%s %s", params, mu, beta_star, verdict.value)
    return HConvergenceClass(mu, beta_star, verdict)


def _lattices_coincide(first: Pair, second: Pair) -> bool:
    (x, X), (y, Y) = first, second
    for lam in range(COINCIDENCE_DEPTH + 1):
        for nu in range(COINCIDENCE_DEPTH + 1):
            if abs(Y * (x + lam) - X * (y + nu)) <= COINCIDENCE_TOLERANCE:
                return True
    return False


def h_check_simple_poles(params: HFunctionParams, side: Side) -> bool:
    """True iff the poles summed on ``side`` are simple up to the scan depth."""

    if side is Side.LOWER:
        pairs = params.lower[: params.m]
        shifted = list(pairs)
    else:
        pairs = params.upper[: params.n]
        shifted = [(1.0 - a, A) for a, A in pairs]
    for h in range(len(shifted)):
        for j in range(h + 1, len(shifted)):
            if _lattices_coincide(shifted[j], shifted[h]):
                return False
    return True


def h_check_separation(params: HFunctionParams) -> bool:
    """True iff no pole of ``Gamma(b_h + B_h s)`` meets one of ``Gamma(1 - a_j - A_j s)``."""

    for a, A in params.upper[: params.n]:
        for b, B in params.lower[: params.m]:
            for nu in range(COINCIDENCE_DEPTH + 1):
                for lam in range(COINCIDENCE_DEPTH + 1):
                    if abs(A * (b + nu) - B * (a - lam - 1)) <= COINCIDENCE_TOLERANCE:
                        return False
    return True


# }}}

# {{{ residue series


def _sum_residues(
    params: HFunctionParams,
    log_z: complex,
    poles: Sequence[Pair],
    term_at: Callable[[int, int, complex], complex],
    tol: float,
) -> complex:
    total = 0j
    for h, (_, coefficient) in enumerate(poles):
        partial = 0j
        small = 0
        for nu in range(MAX_TERMS):
            term = term_at(h, nu, log_z)
            partial += term
            if abs(term) < tol * abs(partial) or term == 0:
                small += 1
                if small >= SMALL_TERM_RUN:
                    break
            else:
                small = 0
        else:
            raise ConvergenceError(f"H-function series for {params} did not converge", terms=MAX_TERMS)
        logger.debug("pole family %d summed to %s after %d terms", h, partial, nu + 1)
        total += partial
    return total


def _gamma_ratio(numerators: Iterable[complex], denominators: Iterable[complex]) -> Optional[complex]:
    """Log of the gamma ratio, or ``None`` when a denominator gamma sits on a pole."""

    denominators = list(denominators)
    if any(is_gamma_pole(d) for d in denominators):
        return None
    return sum(log_gamma_complex(x) for x in numerators) - sum(log_gamma_complex(d) for d in denominators)


def _exp_term(log_term: complex, nu: int) -> complex:
    try:
        value = cmath.exp(log_term)
    except OverflowError as exc:
        raise ConvergenceError(f"H-function series term overflows (log {log_term})") from exc
    return -value if nu % 2 else value


def _validate(params: HFunctionParams, z: complex) -> None:
    if z == 0:
        raise DomainError("H-function series are evaluated for z != 0 only")
    params.require_positive()
    if not h_check_separation(params):
        raise ParamError(f"pole families of {params} are not separated")


def h_series_expansion_I(params: HFunctionParams, z: complex, tol: float = DEFAULT_TOL) -> complex:
    """Residue sum over the poles of ``Gamma(b_h + B_h s)``, a power series in ``z``.

    Raises:
        RegionError: If the indices do not place ``z`` inside the region of
            convergence.
        UnsupportedError: If those poles are not simple.
    """

    z = complex(z)
    _validate(params, z)
    cls = h_classify(params)
    if cls.mu < 0.0 or (cls.mu == 0.0 and abs(z) * cls.beta_star >= 1.0):
        raise RegionError(f"series I diverges for mu={cls.mu}, |z| beta*={abs(z) * cls.beta_star}")
    if not h_check_simple_poles(params, Side.LOWER):
        raise UnsupportedError(f"poles of the lower gamma factors of {params} are not simple")

    lower_m, lower_rest = params.lower[: params.m], params.lower[params.m :]
    upper_n, upper_rest = params.upper[: params.n], params.upper[params.n :]

    def term_log(h: int, nu: int, log_z: complex) -> complex:
        b_h, B_h = lower_m[h]
        s = (b_h + nu) / B_h
        ratio = _gamma_ratio(
            [b - B * s for j, (b, B) in enumerate(lower_m) if j != h] + [1.0 - a + A * s for a, A in upper_n],
            [1.0 - b + B * s for b, B in lower_rest] + [a - A * s for a, A in upper_rest],
        )
        if ratio is None:
            return 0j
        return _exp_term(ratio + s * log_z - math.lgamma(nu + 1) - math.log(B_h), nu)

    return _sum_residues(params, cmath.log(z), lower_m, term_log, tol)


def h_series_expansion_II(params: HFunctionParams, z: complex, tol: float = DEFAULT_TOL) -> complex:
    """Residue sum over the poles of ``Gamma(1 - a_h - A_h s)``, a series in ``1/z``.

    Returns zero when ``n == 0``.
    """

    z = complex(z)
    _validate(params, z)
    cls = h_classify(params)
    if cls.mu > 0.0 or (cls.mu == 0.0 and abs(z) * cls.beta_star <= 1.0):
        raise RegionError(f"series II diverges for mu={cls.mu}, |z| beta*={abs(z) * cls.beta_star}")
    if not h_check_simple_poles(params, Side.UPPER):
        raise UnsupportedError(f"poles of the upper gamma factors of {params} are not simple")

    lower_m, lower_rest = params.lower[: params.m], params.lower[params.m :]
    upper_n, upper_rest = params.upper[: params.n], params.upper[params.n :]

    def term_log(h: int, nu: int, log_z: complex) -> complex:
        a_h, A_h = upper_n[h]
        s = (1.0 - a_h + nu) / A_h
        ratio = _gamma_ratio(
            [b + B * s for b, B in lower_m] + [1.0 - a - A * s for j, (a, A) in enumerate(upper_n) if j != h],
            [1.0 - b - B * s for b, B in lower_rest] + [a + A * s for a, A in upper_rest],
        )
        if ratio is None:
            return 0j
        return _exp_term(ratio - s * log_z - math.lgamma(nu + 1) - math.log(A_h), nu)

    return _sum_residues(params, cmath.log(z), upper_n, term_log, tol)


def h_eval(params: HFunctionParams, z: complex) -> complex:
    """Evaluate the H-function through whichever residue series converges at ``z``.

    Outside the disk the function is evaluated as series I of the inverted
    parameters at ``1/z``.

    Raises:
        UnsupportedError: On the ring ``|z| beta* = 1`` when ``mu == 0``, or
            when the required poles are not simple.
    """

    z = complex(z)
    if z == 0:
        raise DomainError("h_eval requires z != 0")
    cls = h_classify(params)
    if cls.mu > 0.0:
        inside = True
    elif cls.mu < 0.0:
        inside = False
    else:
        ring = abs(z) * cls.beta_star
        if abs(ring - 1.0) <= RING_TOLERANCE:
            raise UnsupportedError(f"no convergent expansion on the ring |z| beta* = {ring}")
        inside = ring < 1.0

    if inside:
        return h_series_expansion_I(params, z)
    if params.n == 0:
        return 0j
    return h_series_expansion_I(h_invert_argument(params), 1.0 / z)


# }}}

# {{{ parameter transforms


def h_invert_argument(params: HFunctionParams) -> HFunctionParams:
    """Parameters of the same function written in the argument ``1/z``."""

    return HFunctionParams(
        params.n,
        params.m,
        params.q,
        params.p,
        tuple((1.0 - b, B) for b, B in params.lower),
        tuple((1.0 - a, A) for a, A in params.upper),
    )


def h_rl_derivative_params(
    params: HFunctionParams, a_exp: float, b_exp: float, beta_ord: float, c: complex = 1.0
) -> RLDerivativeParams:
    """Order-``beta_ord`` Riemann-Liouville derivative of ``t**a_exp H(c t**b_exp)``.

    The result is ``t**(a_exp - beta_ord)`` times an H-function of
    ``c t**b_exp`` with one more pair on each side.
    """

    if b_exp <= 0.0:
        raise ParamError(f"b_exp must be positive, got {b_exp}")
    if params.m > 0:
        lowest = min((b / B).real for b, B in params.lower[: params.m])
        if a_exp + b_exp * lowest <= -1.0:
            raise ParamError("t**a_exp H(c t**b_exp) is not integrable at the origin")
    derived = HFunctionParams(
        params.m,
        params.n + 1,
        params.p + 1,
        params.q + 1,
        ((-a_exp, b_exp),) + params.upper,
        params.lower + ((beta_ord - a_exp, b_exp),),
    )
    return RLDerivativeParams(derived, a_exp - beta_ord, complex(c))


def h_laplace_params(params: HFunctionParams, rho: float, sigma: float) -> HFunctionParams:
    """Parameters of the Laplace transform of ``x**(rho-1) H(a x**sigma)``.

    The transform equals ``s**-rho`` times this H-function of ``a s**-sigma``.
    """

    if sigma <= 0.0:
        raise ParamError(f"sigma must be positive, got {sigma}")
    return HFunctionParams(
        params.m,
        params.n + 1,
        params.p + 1,
        params.q,
        ((1.0 - rho, sigma),) + params.upper,
        params.lower,
    )


# }}}
