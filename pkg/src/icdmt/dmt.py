"""Closed-form SNR exponents (DMT) of the two-user interference channel.

All functions take multiplexing rates and return exponents d with
P(error) ~ snr^-d. +inf is a legal exponent (an event that cannot occur).

Han-Kobayashi terms follow two conventions (see zero-rate notes in README):

* a term whose outage event targets an aggregate rate of exactly 0 is +inf;
* s_i = 0 means user i sends no private layer, so the private-error events
  d_i1, d_i4 are +inf and the private interference power seen at the other
  receiver is absent (p_i acts as -inf in that receiver's branch tests).

If every term of a breakdown is +inf (both rates zero) the overall exponent is
reported as 1, the r -> 0 limit of the single-user exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, OutOfRegimeError, ValidationError
from .model import PowerSplit, RatePair, SplitVector, TimeShare

INF = float("inf")
BTOL = 1e-9  # branch boundaries and zero tests
ZERO_RATE_LIMIT = 1.0

TIAN_NOTE = "derived, oracle-validated (not stated in closed form by the source analysis)"


def pos(x):
    return np.maximum(x, 0.0)


@dataclass(frozen=True)
class DmtBreakdown:
    overall: float
    terms: tuple
    active_label: str
    notes: tuple = ()
    extras: dict = field(default_factory=dict)

    def term(self, label: str) -> float:
        return dict(self.terms)[label]

    def as_dict(self) -> dict:
        return dict(self.terms)


def _breakdown(terms, notes=(), extras=None) -> DmtBreakdown:
    terms = tuple((lab, float(v)) for lab, v in terms)
    vals = [v for _, v in terms]
    best = min(vals)
    notes = tuple(notes)
    if best == INF:
        return DmtBreakdown(ZERO_RATE_LIMIT, terms, "", notes + ("all terms infinite: zero-rate limit 1 reported",), extras or {})
    active = next(lab for lab, v in terms if v == best)
    return DmtBreakdown(best, terms, active, notes, extras or {})


def d_jd(r: RatePair, alpha: float) -> DmtBreakdown:
    """Joint decoding of both messages at each receiver."""
    r1, r2 = r
    return _breakdown([
        ("d1", pos(1 - r1)),
        ("d2", pos(1 - r2)),
        ("d3", pos(1 - r1 - r2) + pos(alpha - r1 - r2)),
    ])


# --- Han-Kobayashi ---------------------------------------------------------
#
# Every HK term at receiver i is a function of one aggregate rate x and of a
# "lead" exponent (p_i for events with a private error, 1 otherwise):
#   single(x): d_i1 (x = s_i, lead p_i), d_i2 (x = t_i), d_i3 (x = r_i)
#   joint(x):  d_i4 (x = s_i + t_j, lead p_i), d_i5 (x = t_1 + t_2), d_i6 (x = r_i + t_j)
# hi_j marks p_j >= 1 - alpha (private interference above the noise floor).

def _ge(pj, thr, priv_j):
    return priv_j & (pj >= thr - BTOL)


def hk_single(x, lead, pj, alpha, priv_j=True):
    hi = _ge(pj, 1 - alpha, priv_j)
    return np.where(hi, pos(1 - alpha - pj + lead - x), pos(lead - x))


def hk_joint(x, lead, pj, alpha, priv_j=True):
    hi = _ge(pj, 1 - alpha, priv_j)
    above = _ge(pj, 1 - x, priv_j)
    return np.where(~above, pos(lead - x) + pos(alpha - x),
                    np.where(~hi, pos(lead - x), pos(1 - alpha - pj + lead - x)))


def _zero(x):
    return np.abs(x) <= BTOL


def hk_receiver_terms(ri, si, pi, rj, sj, pj, alpha):
    """The six exponents d_i1..d_i6 at receiver i (numpy broadcasting)."""
    ti = ri - si
    tj = rj - sj
    priv_i = ~_zero(si)
    priv_j = ~_zero(sj)
    a = si + tj
    c = ti + tj
    e = ri + tj
    d1 = np.where(priv_i, hk_single(si, pi, pj, alpha, priv_j), INF)
    d2 = np.where(_zero(ti), INF, hk_single(ti, 1.0, pj, alpha, priv_j))
    d3 = np.where(_zero(ri), INF, hk_single(ri, 1.0, pj, alpha, priv_j))
    d4 = np.where(priv_i & ~_zero(a), hk_joint(a, pi, pj, alpha, priv_j), INF)
    d5 = np.where(_zero(c), INF, hk_joint(c, 1.0, pj, alpha, priv_j))
    d6 = np.where(_zero(e), INF, hk_joint(e, 1.0, pj, alpha, priv_j))
    return d1, d2, d3, d4, d5, d6


HK_LABELS = tuple(f"d{i}{l}" for i in (1, 2) for l in range(1, 7))
REDUCED_LABELS = tuple(f"d{i}{l}" for i in (1, 2) for l in (1, 3, 4, 6))


def hk_min_array(r1, r2, s1, s2, p1, p2, alpha, reduced=False):
    """Elementwise HK minimum over broadcast parameter arrays."""
    t1 = hk_receiver_terms(r1, s1, p1, r2, s2, p2, alpha)
    t2 = hk_receiver_terms(r2, s2, p2, r1, s1, p1, alpha)
    keep = (0, 2, 3, 5) if reduced else range(6)
    out = None
    for k in keep:
        for t in (t1[k], t2[k]):
            out = t if out is None else np.minimum(out, t)
    return np.where(np.isinf(out), ZERO_RATE_LIMIT, out)


def d_hk_terms(r: RatePair, s: SplitVector, p: PowerSplit, alpha: float) -> DmtBreakdown:
    """All twelve HK exponents for fixed rate split s and power split p."""
    s.check(r)
    t1 = hk_receiver_terms(r.r1, s.s1, p.p1, r.r2, s.s2, p.p2, alpha)
    t2 = hk_receiver_terms(r.r2, s.s2, p.p2, r.r1, s.s1, p.p1, alpha)
    terms = list(zip(HK_LABELS, [float(v) for v in t1 + t2]))
    notes = []
    if any(abs(v) <= BTOL for v in (*s, r.r1 - s.s1, r.r2 - s.s2)):
        notes.append("zero-rate convention applied")
    return _breakdown(terms, notes)


def d_hk_given(r: RatePair, s: SplitVector, p: PowerSplit, alpha: float) -> float:
    return d_hk_terms(r, s, p, alpha).overall


def d_mac(r: RatePair, alpha: float) -> DmtBreakdown:
    """Each receiver decodes both messages and both errors count."""
    r1, r2 = r
    joint = pos(1 - r1 - r2) + pos(alpha - r1 - r2)
    return _breakdown([
        ("d11", pos(1 - r1)), ("d12", pos(alpha - r2)), ("d13", joint),
        ("d21", pos(1 - r2)), ("d22", pos(alpha - r1)), ("d23", joint),
    ])


def ts_user_exponent(ri, thetai):
    if thetai <= BTOL:
        return INF if ri <= BTOL else 0.0
    return float(pos(1 - ri / thetai))


def d_ts(r: RatePair, theta: TimeShare) -> DmtBreakdown:
    """Orthogonal time sharing with fractions theta."""
    return _breakdown([("d1", ts_user_exponent(r.r1, theta.theta1)),
                       ("d2", ts_user_exponent(r.r2, theta.theta2))])


def d_tian(r: RatePair, alpha: float) -> DmtBreakdown:
    """Single-user decoding with interference treated as Gaussian noise."""
    return _breakdown([("d1", pos(1 - alpha - r.r1)), ("d2", pos(1 - alpha - r.r2))], notes=(TIAN_NOTE,))


@dataclass(frozen=True)
class EtwTermSet:
    d11: float
    d12: float
    d13: float
    d14: float

    def min(self) -> float:
        return min(self.d11, self.d12, self.d13, self.d14)

    def as_tuple(self):
        return (self.d11, self.d12, self.d13, self.d14)


def d_etw_terms(r: RatePair, s2: float, alpha: float) -> EtwTermSet:
    """Exponents of the outer bound built on the ETW capacity outer region."""
    r1, r2 = r
    if s2 < -BTOL or s2 > r2 + BTOL:
        raise ValidationError(f"s2={s2} outside [0, r2={r2}]")
    if abs(s2) <= BTOL:
        d14 = 1.0
    elif alpha < 1:
        d14 = float(pos(1 - alpha - s2))
    else:
        d14 = 0.0
    return EtwTermSet(float(pos(1 - r1)), float(pos(1 - r2)),
                      float(pos(1 - r1 - r2 + s2) + pos(alpha - r1 - r2 + s2)), d14)


def d_strip(r: RatePair, alpha: float) -> DmtBreakdown:
    """Stripping decoder (decode interferer first) in very strong interference."""
    if alpha < 2:
        raise OutOfRegimeError(f"stripping decoder exponent holds for alpha >= 2, got {alpha}")
    r1, r2 = r
    direct = (float(pos(1 - r1)), float(pos(1 - r2)))
    cross = (float(pos(alpha - 1 - r2)), float(pos(alpha - 1 - r1)))  # receiver i decodes message j
    upper = (min(direct[0], cross[0]), min(direct[1], cross[1]))
    return _breakdown([("direct1", direct[0]), ("direct2", direct[1])],
                      extras={"cross1": cross[0], "cross2": cross[1], "per_user_upper": upper})


def d_very_strong_outer(r: RatePair) -> float:
    return float(min(pos(1 - r.r1), pos(1 - r.r2)))


def d_overall_achievable(d_hk_opt: float, d_jd_value: float) -> float:
    if d_hk_opt < 0 or d_jd_value < 0:
        raise InvalidParameterError("exponents must be nonnegative")
    return max(d_hk_opt, d_jd_value)
