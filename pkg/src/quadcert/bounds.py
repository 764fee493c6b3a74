"""Right-hand sides of every certified error bound.

Three general bounds (power-mean and Hoelder routes for h-convex weights,
Hoelder route for h-concave weights), the power-modulus specialization, and
the previously published fixed-parameter bounds used for comparison.

Low-level ``rhs_*`` evaluators take the interval width and the needed
|f'| magnitudes directly so parameter grids can be swept without building
function objects; the ``bound_*`` wrappers consume a TestFunction and check
its certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from .classes import ClassKind, HKind, HModulus, TestFunction, h_eval, h_integral_01
from .errors import ClassMismatch, DegenerateModulus, DomainError, ParamMismatch
from .moments import (CaseBranch, RuleParams, Side, branch_select,
                      epsilon_coeffs, gamma_coeffs, mu_eta_star,
                      upsilon_coeffs, weighted_moment)


class BoundKind(Enum):
    POWER_MEAN_HCONVEX = "power_mean_hconvex"
    HOLDER_HCONVEX = "holder_hconvex"
    HOLDER_HCONCAVE = "holder_hconcave"
    # prior fixed-parameter bounds, named by rule and estimation route
    PRIOR_GENERAL_CONVEX = "prior_general_convex"          # any (alpha, lambda), h(t)=t
    PRIOR_MIDPOINT_POWER_MEAN = "prior_midpoint_power_mean"
    PRIOR_MIDPOINT_HOLDER = "prior_midpoint_holder"
    PRIOR_SIMPSON_HOLDER = "prior_simpson_holder"
    PRIOR_TRAPEZOID_HOLDER = "prior_trapezoid_holder"
    CLASSICAL_SIMPSON = "classical_simpson"


@dataclass(frozen=True)
class BoundResult:
    """One evaluated bound: RHS value, governing branch, and diagnostics."""

    value: float
    branch: Optional[CaseBranch]
    components: Dict[str, float]


def _pow(x: float, e: float) -> float:
    # x**0 := 1 even at x = 0, so q = 1 degrades to the q=1 corollary.
    if e == 0.0:
        return 1.0
    return x ** e


def _branch_gamma_upsilon(rp: RuleParams):
    branch = branch_select(rp)
    g1, g2 = gamma_coeffs(rp)
    v1, v2 = upsilon_coeffs(rp)
    if branch is CaseBranch.MID_ORDER:
        gc, uc = g2, v2
    elif branch is CaseBranch.RIGHT_OF_UPPER:
        gc, uc = g2, v1
    else:
        gc, uc = g1, v2
    # the active-branch coefficients are nonnegative; clamp roundoff
    return branch, max(gc, 0.0), max(uc, 0.0)


def _branch_epsilons(rp: RuleParams):
    branch = branch_select(rp)
    e1, e2, e3, e4 = epsilon_coeffs(rp)
    if branch is CaseBranch.MID_ORDER:
        return branch, e1, e3
    if branch is CaseBranch.RIGHT_OF_UPPER:
        return branch, e1, e4
    return branch, e2, e3


def rhs_power_mean(h: HModulus, rp: RuleParams, width: float,
                   d_a: float, d_b: float) -> BoundResult:
    """Power-mean route RHS from the endpoint derivative magnitudes."""
    q = rp.q
    mo_l = weighted_moment(h, rp, Side.LEFT, reflected=False)
    mo_lr = weighted_moment(h, rp, Side.LEFT, reflected=True)
    mo_r = weighted_moment(h, rp, Side.RIGHT, reflected=False)
    mo_rr = weighted_moment(h, rp, Side.RIGHT, reflected=True)
    big_a = d_b ** q * mo_l + d_a ** q * mo_lr
    big_b = d_b ** q * mo_r + d_a ** q * mo_rr
    branch, gc, uc = _branch_gamma_upsilon(rp)
    value = width * (_pow(gc, 1.0 - 1.0 / q) * big_a ** (1.0 / q)
                     + _pow(uc, 1.0 - 1.0 / q) * big_b ** (1.0 / q))
    return BoundResult(value, branch, {
        "A": big_a, "B": big_b, "gamma": gc, "upsilon": uc})


def bound_power_mean(tf: TestFunction, rp: RuleParams) -> BoundResult:
    cert = tf.certificate
    if cert.class_kind is not ClassKind.H_CONVEX:
        raise ClassMismatch("power-mean bound needs an h-convex certificate")
    if abs(cert.exponent_q - rp.q) > 1e-12:
        raise ParamMismatch("rule q disagrees with the certificate exponent")
    d_a = abs(tf.f_prime(tf.a))
    d_b = abs(tf.f_prime(tf.b))
    return rhs_power_mean(cert.h, rp, tf.width, d_a, d_b)


def rhs_sconvex_powermean(rp: RuleParams, s: float, width: float,
                          d_a: float, d_b: float) -> BoundResult:
    """Power-mean RHS assembled from the t^s closed-form moment family."""
    q = rp.q
    me = mu_eta_star(rp, s)
    branch = branch_select(rp)
    g1, g2 = gamma_coeffs(rp)
    v1, v2 = upsilon_coeffs(rp)
    if branch is CaseBranch.MID_ORDER:
        gc, mu_b, mu_a, uc, eta_b, eta_a = g2, me.mu1, me.mu2, v2, me.eta3, me.eta4
    elif branch is CaseBranch.RIGHT_OF_UPPER:
        gc, mu_b, mu_a, uc, eta_b, eta_a = g2, me.mu1, me.mu2, v1, me.eta1, me.eta2
    else:
        gc, mu_b, mu_a, uc, eta_b, eta_a = g1, me.mu3, me.mu4, v2, me.eta3, me.eta4
    # the active-branch coefficients are nonnegative; clamp roundoff
    gc, uc = max(gc, 0.0), max(uc, 0.0)
    big_a = max(mu_b * d_b ** q + mu_a * d_a ** q, 0.0)
    big_b = max(eta_b * d_b ** q + eta_a * d_a ** q, 0.0)
    value = width * (_pow(gc, 1.0 - 1.0 / q) * big_a ** (1.0 / q)
                     + _pow(uc, 1.0 - 1.0 / q) * big_b ** (1.0 / q))
    return BoundResult(value, branch, {
        "A": big_a, "B": big_b, "gamma": gc, "upsilon": uc})


def bound_sconvex_powermean(tf: TestFunction, rp: RuleParams,
                            s: float) -> BoundResult:
    cert = tf.certificate
    if cert.class_kind is not ClassKind.H_CONVEX or cert.h.kind is not HKind.POWER:
        raise ClassMismatch("needs an h-convex certificate with a power modulus")
    if abs(cert.h.s_param - s) > 1e-12:
        raise ParamMismatch("s disagrees with the certificate modulus")
    d_a = abs(tf.f_prime(tf.a))
    d_b = abs(tf.f_prime(tf.b))
    return rhs_sconvex_powermean(rp, s, tf.width, d_a, d_b)


def rhs_holder_hconvex(h: HModulus, rp: RuleParams, width: float,
                       d_node: float, d_a: float, d_b: float) -> BoundResult:
    """Hoelder route RHS; d_node is |f'| at the interior node (1-a)b+aa."""
    p = rp.require_p()
    q = rp.q
    h_int = h_integral_01(h)  # raises NotIntegrable for 1/t moduli
    alpha = rp.alpha
    big_c = (1.0 - alpha) * (d_node ** q + d_a ** q)
    big_d = alpha * (d_node ** q + d_b ** q)
    branch, eps_c, eps_d = _branch_epsilons(rp)
    pref = width * (1.0 / (p + 1.0)) ** (1.0 / p) * h_int ** (1.0 / q)
    value = pref * (eps_c ** (1.0 / p) * big_c ** (1.0 / q)
                    + eps_d ** (1.0 / p) * big_d ** (1.0 / q))
    return BoundResult(value, branch, {
        "C": big_c, "D": big_d, "eps_C": eps_c, "eps_D": eps_d,
        "h_integral": h_int})


def bound_holder_hconvex(tf: TestFunction, rp: RuleParams) -> BoundResult:
    cert = tf.certificate
    if cert.class_kind is not ClassKind.H_CONVEX:
        raise ClassMismatch("Hoelder bound needs an h-convex certificate")
    if abs(cert.exponent_q - rp.q) > 1e-12:
        raise ParamMismatch("rule q disagrees with the certificate exponent")
    node = (1.0 - rp.alpha) * tf.b + rp.alpha * tf.a
    return rhs_holder_hconvex(cert.h, rp, tf.width,
                              abs(tf.f_prime(node)),
                              abs(tf.f_prime(tf.a)), abs(tf.f_prime(tf.b)))


def rhs_holder_hconcave(h: HModulus, rp: RuleParams, width: float,
                        d_mid_left: float, d_mid_right: float) -> BoundResult:
    """Concave-route RHS; the d's are |f'| at the two subinterval midpoints."""
    p = rp.require_p()
    q = rp.q
    h_half = h_eval(h, 0.5)
    if h_half == 0.0:
        raise DegenerateModulus("h(1/2) = 0")
    alpha = rp.alpha
    big_e = (1.0 - alpha) * d_mid_left ** q
    big_f = alpha * d_mid_right ** q
    branch, eps_e, eps_f = _branch_epsilons(rp)
    pref = width * (1.0 / (2.0 * h_half)) ** (1.0 / q) \
        * (1.0 / (p + 1.0)) ** (1.0 / p)
    value = pref * (eps_e ** (1.0 / p) * big_e ** (1.0 / q)
                    + eps_f ** (1.0 / p) * big_f ** (1.0 / q))
    return BoundResult(value, branch, {
        "E": big_e, "F": big_f, "eps_E": eps_e, "eps_F": eps_f,
        "h_half": h_half})


def bound_holder_hconcave(tf: TestFunction, rp: RuleParams) -> BoundResult:
    cert = tf.certificate
    if cert.class_kind is not ClassKind.H_CONCAVE:
        raise ClassMismatch("this route needs an h-concave certificate")
    if abs(cert.exponent_q - rp.q) > 1e-12:
        raise ParamMismatch("rule q disagrees with the certificate exponent")
    alpha = rp.alpha
    m_left = ((1.0 - alpha) * tf.b + (1.0 + alpha) * tf.a) / 2.0
    m_right = ((2.0 - alpha) * tf.b + alpha * tf.a) / 2.0
    return rhs_holder_hconcave(cert.h, rp, tf.width,
                               abs(tf.f_prime(m_left)),
                               abs(tf.f_prime(m_right)))


# ---------------------------------------------------------------------------
# Prior published bounds, as printed.

def rhs_general_convex(rp: RuleParams, width: float,
                       d_a: float, d_b: float) -> BoundResult:
    """Earlier general (alpha, lambda) bound for |f'|^q plain convex.

    Independent coding of the published cubic coefficient table; the
    power-mean route with the identity modulus must reproduce it.
    """
    alpha, lam, q = rp.alpha, rp.lam, rp.q
    w = alpha * lam
    u = 1.0 - alpha
    lu = lam * u
    hi = 1.0 - lu
    g1, g2 = gamma_coeffs(rp)
    v1, v2 = upsilon_coeffs(rp)
    mu1 = (w ** 3 + u ** 3) / 3.0 - w * u * u / 2.0
    mu2 = (1.0 + alpha ** 3 + (1.0 - w) ** 3) / 3.0 \
        - (1.0 - w) * (1.0 + alpha * alpha) / 2.0
    mu3 = w * u * u / 2.0 - u ** 3 / 3.0
    mu4 = (w - 1.0) * (1.0 - alpha * alpha) / 2.0 + (1.0 - alpha ** 3) / 3.0
    eta1 = (1.0 - u ** 3) / 3.0 - hi / 2.0 * alpha * (2.0 - alpha)
    eta2 = lu * alpha * alpha / 2.0 - alpha ** 3 / 3.0
    eta3 = hi ** 3 / 3.0 - hi / 2.0 * (1.0 + u * u) + (1.0 + u ** 3) / 3.0
    eta4 = lu ** 3 / 3.0 - lu * alpha * alpha / 2.0 + alpha ** 3 / 3.0
    branch = branch_select(rp)
    if branch is CaseBranch.MID_ORDER:
        gc, ma, mb, uc, ea, eb = g2, mu1, mu2, v2, eta3, eta4
    elif branch is CaseBranch.RIGHT_OF_UPPER:
        gc, ma, mb, uc, ea, eb = g2, mu1, mu2, v1, eta1, eta2
    else:
        gc, ma, mb, uc, ea, eb = g1, mu3, mu4, v2, eta3, eta4
    big_a = max(ma * d_b ** q + mb * d_a ** q, 0.0)
    big_b = max(ea * d_b ** q + eb * d_a ** q, 0.0)
    value = width * (_pow(gc, 1.0 - 1.0 / q) * big_a ** (1.0 / q)
                     + _pow(uc, 1.0 - 1.0 / q) * big_b ** (1.0 / q))
    return BoundResult(value, branch, {"A": big_a, "B": big_b})


def rhs_midpoint_power_mean(s: float, q: float, width: float,
                            d_a: float, d_b: float) -> BoundResult:
    """Published midpoint bound for s-convex |f'|^q, q >= 1."""
    c_hi = 2.0 ** (1.0 - s) + 1.0
    c_lo = 2.0 ** (1.0 - s)
    pref = width / 8.0 * (2.0 / ((s + 1.0) * (s + 2.0))) ** (1.0 / q)
    value = pref * ((c_hi * d_b ** q + c_lo * d_a ** q) ** (1.0 / q)
                    + (c_hi * d_a ** q + c_lo * d_b ** q) ** (1.0 / q))
    return BoundResult(value, None, {})


def rhs_midpoint_holder(s: float, p: float, q: float, width: float,
                        d_a: float, d_b: float) -> BoundResult:
    """Published midpoint bound for s-convex |f'|^q via conjugate exponents."""
    c_hi = 2.0 ** (1.0 - s) + s + 1.0
    c_lo = 2.0 ** (1.0 - s)
    pref = (width / 4.0) * (1.0 / (p + 1.0)) ** (1.0 / p) \
        * (1.0 / (s + 1.0)) ** (2.0 / q)
    value = pref * ((c_hi * d_a ** q + c_lo * d_b ** q) ** (1.0 / q)
                    + (c_hi * d_b ** q + c_lo * d_a ** q) ** (1.0 / q))
    return BoundResult(value, None, {})


def rhs_simpson_holder(s: float, p: float, q: float, width: float,
                       d_mid: float, d_a: float, d_b: float) -> BoundResult:
    """Published Simpson bound for s-convex |f'|^q via conjugate exponents."""
    pref = width / 12.0 * ((1.0 + 2.0 ** (p + 1.0)) / (3.0 * (p + 1.0))) ** (1.0 / p)
    value = pref * (((d_mid ** q + d_a ** q) / (s + 1.0)) ** (1.0 / q)
                    + ((d_mid ** q + d_b ** q) / (s + 1.0)) ** (1.0 / q))
    return BoundResult(value, None, {})


def rhs_trapezoid_holder(s: float, q: float, width: float,
                         d_mid: float, d_a: float, d_b: float) -> BoundResult:
    """Published trapezoid bound for s-convex |f'|^q, q > 1.

    Stated for s in (0, 1); s = 1 is allowed here since the formula is
    continuous in s.
    """
    if q <= 1.0:
        raise DomainError("this bound needs q > 1")
    pref = width / 2.0 * ((q - 1.0) / (2.0 * (2.0 * q - 1.0))) ** ((q - 1.0) / q) \
        * (1.0 / (s + 1.0)) ** (1.0 / q)
    value = pref * ((d_mid ** q + d_a ** q) ** (1.0 / q)
                    + (d_mid ** q + d_b ** q) ** (1.0 / q))
    return BoundResult(value, None, {})


def rhs_classical_simpson(sup_f4: float, width: float) -> BoundResult:
    """Classical fourth-derivative Simpson estimate, as printed.

    Note: the printed factor is (b-a)^2; the textbook mean-form constant is
    (b-a)^4/2880.  On unit-width intervals the two agree.
    """
    if sup_f4 < 0.0:
        raise DomainError("sup |f''''| must be nonnegative")
    return BoundResult(sup_f4 * width ** 2 / 2880.0, None, {})


_SIMPSON_PARAMS = (0.5, 1.0 / 3.0)
_MIDPOINT_PARAMS = (0.5, 0.0)
_TRAPEZOID_PARAMS = (0.5, 1.0)


def _require_params(rp: RuleParams, fixed, kind: BoundKind):
    if abs(rp.alpha - fixed[0]) > 1e-12 or abs(rp.lam - fixed[1]) > 1e-12:
        raise ParamMismatch(
            f"{kind.value} is fixed at alpha={fixed[0]}, lambda={fixed[1]}")


def bound_prior(tf: TestFunction, rp: RuleParams, kind: BoundKind,
                s: Optional[float] = None,
                sup_f4: Optional[float] = None) -> BoundResult:
    """Evaluate one of the previously published bounds on this function."""
    width = tf.width
    d_a = abs(tf.f_prime(tf.a))
    d_b = abs(tf.f_prime(tf.b))
    d_mid = abs(tf.f_prime(0.5 * (tf.a + tf.b)))
    if kind is BoundKind.PRIOR_GENERAL_CONVEX:
        return rhs_general_convex(rp, width, d_a, d_b)
    if kind is BoundKind.PRIOR_MIDPOINT_POWER_MEAN:
        _require_params(rp, _MIDPOINT_PARAMS, kind)
        return rhs_midpoint_power_mean(_need_s(s), rp.q, width, d_a, d_b)
    if kind is BoundKind.PRIOR_MIDPOINT_HOLDER:
        _require_params(rp, _MIDPOINT_PARAMS, kind)
        return rhs_midpoint_holder(_need_s(s), rp.require_p(), rp.q,
                                   width, d_a, d_b)
    if kind is BoundKind.PRIOR_SIMPSON_HOLDER:
        _require_params(rp, _SIMPSON_PARAMS, kind)
        return rhs_simpson_holder(_need_s(s), rp.require_p(), rp.q,
                                  width, d_mid, d_a, d_b)
    if kind is BoundKind.PRIOR_TRAPEZOID_HOLDER:
        _require_params(rp, _TRAPEZOID_PARAMS, kind)
        return rhs_trapezoid_holder(_need_s(s), rp.q, width, d_mid, d_a, d_b)
    if kind is BoundKind.CLASSICAL_SIMPSON:
        _require_params(rp, _SIMPSON_PARAMS, kind)
        if sup_f4 is None:
            raise ParamMismatch("classical Simpson needs sup |f''''|")
        return rhs_classical_simpson(sup_f4, width)
    raise ParamMismatch(f"{kind} is not a prior bound")


def _need_s(s: Optional[float]) -> float:
    if s is None:
        raise ParamMismatch("this bound needs the class parameter s")
    if not 0.0 < s <= 1.0:
        raise DomainError("s must lie in (0, 1]")
    return s
