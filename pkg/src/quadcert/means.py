"""Special means and the two bound applications to f(t) = t^(s+1).

For 0 < a < b the rule error of f(t) = t^(s+1) is expressible entirely in
weighted arithmetic means and the p-logarithmic mean, which gives two
closed-form inequalities between means; ``proposition1_check`` and
``proposition2_check`` evaluate both sides numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import _pow, rhs_sconvex_powermean
from .errors import DomainError
from .moments import CaseBranch, RuleParams, branch_select, epsilon_coeffs

_PROP_SLACK = 1e-9


def weighted_arith_mean(a: float, b: float, alpha: float) -> float:
    """alpha*a + (1-alpha)*b."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError("alpha must lie in [0, 1]")
    return alpha * a + (1.0 - alpha) * b


def arith_mean(a: float, b: float) -> float:
    return weighted_arith_mean(a, b, 0.5)


def log_mean(a: float, b: float) -> float:
    """(b - a) / (ln|b| - ln|a|)."""
    if a * b == 0.0 or abs(a) == abs(b):
        raise DomainError("log mean needs ab != 0 and |a| != |b|")
    return (b - a) / (math.log(abs(b)) - math.log(abs(a)))


def p_log_mean(a: float, b: float, p: float) -> float:
    """((b^(p+1) - a^(p+1)) / ((p+1)(b-a)))^(1/p)."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError("p-logarithmic mean needs a, b > 0")
    if a == b:
        raise DomainError("p-logarithmic mean needs a != b")
    if p in (-1.0, 0.0):
        raise DomainError("p must avoid {-1, 0}")
    return ((b ** (p + 1.0) - a ** (p + 1.0))
            / ((p + 1.0) * (b - a))) ** (1.0 / p)


@dataclass(frozen=True)
class PropositionResult:
    lhs: float
    rhs: float
    holds: bool


def _mean_rule_error(a: float, b: float, alpha: float, lam: float,
                     s: float) -> float:
    """|rule - mean integral| of t^(s+1), all in closed means."""
    rule = (lam * weighted_arith_mean(a ** (s + 1.0), b ** (s + 1.0), alpha)
            + (1.0 - lam) * weighted_arith_mean(a, b, alpha) ** (s + 1.0))
    return abs(rule - p_log_mean(a, b, s + 1.0) ** (s + 1.0))


def _check_prop_domain(a, b, alpha, lam, q, s):
    if not 0.0 < a < b:
        raise DomainError("need 0 < a < b")
    if not 0.0 <= alpha <= 1.0 or not 0.0 <= lam <= 1.0:
        raise DomainError("alpha, lambda must lie in [0, 1]")
    if not 0.0 < s < 1.0 / q:
        raise DomainError("need s in (0, 1/q)")


def proposition1_check(a: float, b: float, alpha: float, lam: float,
                       q: float, s: float) -> PropositionResult:
    """Power-mean route applied to f(t) = t^(s+1), q >= 1.

    |f'|^q = (s+1)^q t^(qs) is s-convex in the second sense with parameter
    q*s, so the RHS is the power-modulus bound at exponent q*s, scaled by
    (s+1).
    """
    if q < 1.0:
        raise DomainError("need q >= 1")
    _check_prop_domain(a, b, alpha, lam, q, s)
    lhs = _mean_rule_error(a, b, alpha, lam, s)
    rp = RuleParams(alpha, lam, q)
    inner = rhs_sconvex_powermean(rp, q * s, b - a,
                                  d_a=a ** s, d_b=b ** s)
    rhs = (s + 1.0) * inner.value
    return PropositionResult(lhs, rhs, lhs <= rhs + _PROP_SLACK * (1.0 + rhs))


def proposition2_check(a: float, b: float, alpha: float, lam: float,
                       p: float, q: float, s: float) -> PropositionResult:
    """Hoelder route applied to f(t) = t^(s+1), conjugate p, q > 1.

    theta1 = A_alpha(a,b)^(sq) + a^(sq) and theta2 with b enter through
    their q-th roots, matching the general Hoelder bound evaluated on
    t^(s+1).
    """
    if q <= 1.0 or p <= 1.0 or abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
        raise DomainError("need conjugate p, q > 1")
    _check_prop_domain(a, b, alpha, lam, q, s)
    lhs = _mean_rule_error(a, b, alpha, lam, s)
    rp = RuleParams(alpha, lam, q, p)
    theta1 = weighted_arith_mean(a, b, alpha) ** (s * q) + a ** (s * q)
    theta2 = weighted_arith_mean(a, b, alpha) ** (s * q) + b ** (s * q)
    e1, e2, e3, e4 = epsilon_coeffs(rp)
    branch = branch_select(rp)
    if branch is CaseBranch.MID_ORDER:
        eps_c, eps_d = e1, e3
    elif branch is CaseBranch.RIGHT_OF_UPPER:
        eps_c, eps_d = e1, e4
    else:
        eps_c, eps_d = e2, e3
    pref = (b - a) * (1.0 / (p + 1.0)) ** (1.0 / p) \
        * _pow(s + 1.0, 1.0 - 1.0 / q)
    rhs = pref * ((1.0 - alpha) ** (1.0 / q) * eps_c ** (1.0 / p)
                  * theta1 ** (1.0 / q)
                  + alpha ** (1.0 / q) * eps_d ** (1.0 / p)
                  * theta2 ** (1.0 / q))
    return PropositionResult(lhs, rhs, lhs <= rhs + _PROP_SLACK * (1.0 + rhs))
