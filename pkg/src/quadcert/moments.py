"""Coefficient families and weighted moment integrals.

Everything here is a closed form for an integral of the shape
``int |t - w| * h(.) dt`` or ``int |t - w|^p dt`` over one of the two kernel
subintervals [0, 1-alpha] and [1-alpha, 1], with the kink at w = alpha*lambda
on the left and at 1 - lambda*(1-alpha) on the right.  Custom moduli fall
back to adaptive quadrature split at the kink.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .classes import HKind, HModulus, h_eval
from .errors import ConjugateMissing, DomainError, NotIntegrable

_CONJ_TOL = 1e-14


@dataclass(frozen=True)
class RuleParams:
    """Quadrature-rule parameters (alpha, lambda) with exponent q.

    The conjugate p (1/p + 1/q = 1) is required only by the Hoelder paths
    and may be omitted otherwise.
    """

    alpha: float
    lam: float
    q: float
    p: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError("lambda must lie in [0, 1]")
        if self.q < 1.0:
            raise DomainError("q must be >= 1")
        if self.p is not None:
            if self.p <= 1.0:
                raise DomainError("conjugate p must exceed 1")
            if abs(1.0 / self.p + 1.0 / self.q - 1.0) > _CONJ_TOL:
                raise DomainError("p and q are not conjugate")
        # algebraic identity: alpha*lam + lam*(1-alpha) = lam <= 1
        assert self.alpha * self.lam <= 1.0 - self.lam * (1.0 - self.alpha) + 1e-15

    @classmethod
    def with_conjugate(cls, alpha: float, lam: float, q: float) -> "RuleParams":
        if q <= 1.0:
            raise DomainError("conjugate pair needs q > 1")
        return cls(alpha, lam, q, q / (q - 1.0))

    def require_p(self) -> float:
        if self.p is None:
            raise ConjugateMissing("this bound needs the conjugate exponent p")
        return self.p


class CaseBranch(Enum):
    """Ordering of 1-alpha against [alpha*lam, 1 - lam*(1-alpha)]."""

    MID_ORDER = "mid_order"            # alpha*lam <= 1-alpha <= 1-lam*(1-alpha)
    RIGHT_OF_UPPER = "right_of_upper"  # alpha*lam <= 1-lam*(1-alpha) <= 1-alpha
    LEFT_OF_LOWER = "left_of_lower"    # 1-alpha <= alpha*lam <= 1-lam*(1-alpha)


def branch_select(rp: RuleParams) -> CaseBranch:
    """Classify 1-alpha against the two kink positions.

    Ties go to MID_ORDER first, then RIGHT_OF_UPPER; at a tie the adjacent
    branch formulas agree, so the choice only needs to be deterministic.
    """
    u = 1.0 - rp.alpha
    lo = rp.alpha * rp.lam
    hi = 1.0 - rp.lam * (1.0 - rp.alpha)
    if lo <= u <= hi:
        return CaseBranch.MID_ORDER
    if hi <= u:
        return CaseBranch.RIGHT_OF_UPPER
    return CaseBranch.LEFT_OF_LOWER


def gamma_coeffs(rp: RuleParams):
    """(gamma1, gamma2): branch values of int_0^{1-alpha} |t - alpha*lam| dt.

    gamma2 is the value when alpha*lam <= 1-alpha, gamma1 when >=; the
    inactive one may be negative.
    """
    u = 1.0 - rp.alpha
    w = rp.alpha * rp.lam
    g1 = u * (w - u / 2.0)
    g2 = w * w - g1
    return g1, g2


def upsilon_coeffs(rp: RuleParams):
    """(upsilon1, upsilon2): branch values of the right-side plain moment.

    upsilon1 applies when 1-lam*(1-alpha) <= 1-alpha, upsilon2 when >=.
    """
    alpha, lam = rp.alpha, rp.lam
    u = 1.0 - alpha
    hi = 1.0 - lam * u
    # (1 - u^2)/2 factored as alpha*(1 + u)/2 to avoid cancellation when
    # alpha is tiny
    v1 = alpha * ((1.0 + u) / 2.0 - hi)
    v2 = (1.0 + u * u) / 2.0 - (lam + 1.0) * u * hi
    return v1, v2


def epsilon_coeffs(rp: RuleParams):
    """(eps1..eps4): the p-power moment numerators, eps_i/(p+1) per branch."""
    p = rp.require_p()
    alpha, lam = rp.alpha, rp.lam
    w = alpha * lam
    u = 1.0 - alpha
    lu = lam * u
    e1 = w ** (p + 1.0) + abs(u - w) ** (p + 1.0)
    e2 = w ** (p + 1.0) - abs(w - u) ** (p + 1.0)
    e3 = lu ** (p + 1.0) + abs(alpha - lu) ** (p + 1.0)
    e4 = lu ** (p + 1.0) - abs(lu - alpha) ** (p + 1.0)
    return e1, e2, e3, e4


class MuEtaStar(NamedTuple):
    mu1: float
    mu2: float
    mu3: float
    mu4: float
    eta1: float
    eta2: float
    eta3: float
    eta4: float


def _mu_eta(rp: RuleParams, s: float) -> MuEtaStar:
    alpha, lam = rp.alpha, rp.lam
    w = alpha * lam
    u = 1.0 - alpha
    lu = lam * u
    hi = 1.0 - lu
    s1, s2 = s + 1.0, s + 2.0
    c = 2.0 / (s1 * s2)
    mu1 = w ** s2 * c - w * u ** s1 / s1 + u ** s2 / s2
    mu2 = ((1.0 - w) ** s2 * c
           - (1.0 - w) * (1.0 + alpha ** s1) / s1
           + (1.0 + alpha ** s2) / s2)
    mu3 = w * u ** s1 / s1 - u ** s2 / s2
    mu4 = (w - 1.0) * (1.0 - alpha ** s1) / s1 + (1.0 - alpha ** s2) / s2
    eta1 = (1.0 - u ** s2) / s2 - hi * (1.0 - u ** s1) / s1
    eta2 = lu * alpha ** s1 / s1 - alpha ** s2 / s2
    eta3 = (hi ** s2 * c
            - (1.0 + u ** s1) * hi / s1
            + (1.0 + u ** s2) / s2)
    eta4 = lu ** s2 * c - lu * alpha ** s1 / s1 + alpha ** s2 / s2
    return MuEtaStar(mu1, mu2, mu3, mu4, eta1, eta2, eta3, eta4)


def mu_eta_star(rp: RuleParams, s: float) -> MuEtaStar:
    """The eight power-modulus moment closed forms, h(t) = t^s, s in (0, 1].

    mu1/mu3 are the two branch values of the left moment with weight h(t),
    mu2/mu4 the reflected-weight h(1-t) pair; eta3/eta1 and eta4/eta2 are
    the right-side analogues.
    """
    if not 0.0 < s <= 1.0:
        raise DomainError("s must lie in (0, 1]")
    return _mu_eta(rp, s)


class Side(Enum):
    LEFT = "left"    # integral over [0, 1-alpha], kink at alpha*lam
    RIGHT = "right"  # integral over [1-alpha, 1], kink at 1-lam*(1-alpha)


def weighted_moment(h: HModulus, rp: RuleParams, side: Side,
                    reflected: bool) -> float:
    """int |t - kink| * h(t) dt (or h(1-t) if reflected) over one side.

    Closed form for the identity/power/constant kinds; adaptive quadrature
    split at the interior kink otherwise.  Raises NotIntegrable when a
    reciprocal modulus makes the moment diverge.
    """
    alpha, lam = rp.alpha, rp.lam
    u = 1.0 - alpha
    if side is Side.LEFT and u == 0.0:
        return 0.0
    if side is Side.RIGHT and u == 1.0:
        return 0.0

    if h.kind in (HKind.IDENTITY, HKind.POWER):
        s = 1.0 if h.kind is HKind.IDENTITY else h.s_param
        me = _mu_eta(rp, s)
        w = alpha * lam
        hi = 1.0 - lam * u
        if side is Side.LEFT:
            if not reflected:
                val = me.mu1 if w <= u else me.mu3
            else:
                val = me.mu2 if w <= u else me.mu4
        else:
            if not reflected:
                val = me.eta3 if u <= hi else me.eta1
            else:
                val = me.eta4 if u <= hi else me.eta2
        return _clamp_moment(val)

    if h.kind is HKind.CONSTANT:
        w = alpha * lam
        hi = 1.0 - lam * u
        if side is Side.LEFT:
            g1, g2 = gamma_coeffs(rp)
            return _clamp_moment(g2 if w <= u else g1)
        v1, v2 = upsilon_coeffs(rp)
        return _clamp_moment(v2 if u <= hi else v1)

    if h.kind is HKind.RECIPROCAL:
        _check_reciprocal_divergence(rp, side, reflected)
    return _numeric_moment(h, rp, side, reflected)


def _clamp_moment(val: float) -> float:
    # Active-branch moments are >= 0; absorb cancellation-level negatives.
    if val < 0.0:
        if val < -1e-13:
            raise AssertionError(f"active moment branch came out negative: {val!r}")
        return 0.0
    return val


def _check_reciprocal_divergence(rp: RuleParams, side: Side, reflected: bool):
    alpha, lam = rp.alpha, rp.lam
    u = 1.0 - alpha
    if side is Side.LEFT:
        if not reflected:
            # 1/t blows up at 0 unless the weight |t - alpha*lam| vanishes there
            if alpha * lam > 0.0:
                raise NotIntegrable("left moment of 1/t diverges at 0")
        elif u == 1.0:
            raise NotIntegrable("reflected left moment of 1/t diverges at 1")
    else:
        if not reflected:
            if u == 0.0:
                raise NotIntegrable("right moment of 1/t diverges at 0")
        elif lam * u > 0.0:
            raise NotIntegrable("reflected right moment of 1/t diverges at 1")


def _numeric_moment(h: HModulus, rp: RuleParams, side: Side,
                    reflected: bool) -> float:
    from .oracle import integrate_adaptive  # local import to avoid a cycle
    alpha, lam = rp.alpha, rp.lam
    u = 1.0 - alpha
    if side is Side.LEFT:
        lo, hi_lim = 0.0, u
        kink = alpha * lam
    else:
        lo, hi_lim = u, 1.0
        kink = 1.0 - lam * u

    def integrand(t):
        arg = 1.0 - t if reflected else t
        if arg <= 0.0 or arg >= 1.0:
            return 0.0  # measure-zero endpoint of the modulus domain
        return abs(t - kink) * h_eval(h, arg)

    total = 0.0
    pieces = [(lo, kink), (kink, hi_lim)] if lo < kink < hi_lim \
        else [(lo, hi_lim)]
    for plo, phi in pieces:
        total += integrate_adaptive(integrand, plo, phi, 1e-12).value
    return total


def abs_moment_p(rp: RuleParams, side: Side) -> float:
    """int |t - kink|^p dt over one side; closed piecewise form."""
    p = rp.require_p()
    e1, e2, e3, e4 = epsilon_coeffs(rp)
    alpha, lam = rp.alpha, rp.lam
    u = 1.0 - alpha
    if side is Side.LEFT:
        if u == 0.0:
            return 0.0
        w = alpha * lam
        return (e1 if w <= u else e2) / (p + 1.0)
    if u == 1.0:
        return 0.0
    hi = 1.0 - lam * u
    return (e3 if u <= hi else e4) / (p + 1.0)
