"""
Golden-section argmins of the closed-form risks.

The objectives are evaluated with 40 significant digits: near a flat minimum
the double-precision risk is noisy at the 1e-16 level, which would cap the
argmin accuracy near 1e-8.
"""

import math
from decimal import Decimal, localcontext
from typing import Callable

from model.errors import PreconditionError

INV_PHI = (math.sqrt(5) - 1) / 2       # 1/phi
INV_PHI_SQ = (3 - math.sqrt(5)) / 2    # 1/phi^2
DIGITS = 40


def golden_section(obj: Callable[[float], object], a: float, b: float, tol: float = 1e-10) -> float:
    """
    Golden-section search for the minimum of a unimodal function on [a, b].

    Args:
        obj: objective; any totally ordered return type works
        a: lower end of the bracket
        b: upper end of the bracket
        tol: absolute width of the final bracket

    Returns:
        the midpoint of the final bracket
    """
    # a. distance
    dist = b - a
    if dist <= tol:
        return (a + b) / 2

    # b. number of iterations
    n = int(math.ceil(math.log(tol / dist) / math.log(INV_PHI)))

    # c. interior points
    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = obj(c)
    yd = obj(d)

    # d. loop
    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = obj(c)
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = obj(d)

    # e. return
    if yc < yd:
        return (a + d) / 2
    return (c + b) / 2


def affine_risk_precise(c: float, n_i: float, m: int, p: float) -> Decimal:
    """n_i/(n_i-p) (1-pc)^(-m) - p/n_i - pcm - 1 at 40 digits."""
    with localcontext() as ctx:
        ctx.prec = DIGITS
        c, n_i, p = Decimal(c), Decimal(n_i), Decimal(p)
        base = 1 - p * c
        if base <= 0:
            raise PreconditionError(f"moment generating function diverges for c*p >= 1 (c={c}, p={p})")
        mgf = n_i / (n_i - p) * (-m * base.ln()).exp()
        return +(mgf - p / n_i - p * c * m - 1)


def shift_risk_precise(alpha: float, n_i: float, sigma_i: float, p: float) -> Decimal:
    """e^{p alpha/sigma} n_i/(n_i-p) - p alpha/sigma - p/n_i - 1 at 40 digits."""
    with localcontext() as ctx:
        ctx.prec = DIGITS
        alpha, n_i, sigma_i, p = Decimal(alpha), Decimal(n_i), Decimal(sigma_i), Decimal(p)
        z = p * alpha / sigma_i
        return +(z.exp() * n_i / (n_i - p) - z - p / n_i - 1)


def minimize_affine_risk(n_i: float, m: int, p: float, tol: float = 1e-10) -> float:
    """Numeric argmin over c of the exact risk of X_(1) + c T, T ~ Gamma(m, sigma)."""
    if not n_i > p:
        raise PreconditionError(f"affine risk requires n_i > p (n_i={n_i}, p={p})")
    if p == 0:
        raise PreconditionError("Linex shape p must be nonzero")

    # c*p < 1 bounds the bracket on one side
    edge = 1.0 / p
    margin = 1e-9 * abs(edge)
    if p > 0:
        lower, upper = -10.0, min(edge - margin, 10.0)
    else:
        lower, upper = max(-10.0, edge + margin), 10.0

    return golden_section(lambda c: affine_risk_precise(c, n_i, m, p), lower, upper, tol)


def minimize_shift_risk(n_i: float, sigma_i: float, p: float, tol: float = 1e-10) -> float:
    """Numeric argmin over alpha of the exact risk of X_(1) + alpha under the scaled loss."""
    if not n_i > p:
        raise PreconditionError(f"shift risk requires n_i > p (n_i={n_i}, p={p})")

    return golden_section(lambda a: shift_risk_precise(a, n_i, sigma_i, p),
                          -10.0 * sigma_i, 10.0 * sigma_i, tol)


def minimize_quadratic_affine_risk(n_i: float, m: int, tol: float = 1e-10) -> float:
    """
    Argmin of the squared-error risk of X_(1) + c T in units of sigma^2,
    E[(E/n_i + c G)^2] with E ~ Exp(1), G ~ Gamma(m, 1): the p -> 0 limit.
    """
    def risk(c):
        return 2.0 / n_i ** 2 + 2.0 * c * m / n_i + c * c * m * (m + 1)

    return golden_section(risk, -10.0, 10.0, tol)
