"""Independent checks of outage exponents.

Each outage event is stored declaratively as

    log2(1 + num / (1 + den)) + offset < rate * log2(snr)   [and conditions]

where num, den are sums of monomials snr^a * prod |h|^(2 k). The same
description is evaluated two ways:

* asymptotically, with |h|^2 = snr^-u and log2(1 + sum snr^a) -> (max a)^+,
  and the exponent found by minimizing sum(u) over a grid of the outage region;
* at finite snr, by Monte Carlo over Rayleigh draws from model.channel_block.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats

from . import dmt
from .errors import InsufficientDataError, InvalidParameterError
from .model import CHUNK, PowerSplit, RatePair, SplitVector, channel_block

KINDS = ("p2p", "jd1", "jd2", "hk1", "hk2", "hk3", "hk4", "hk5", "hk6", "mac1", "mac2", "mac3",
         "etw1", "etw2", "etw3", "etw4", "strip_cross", "strip_direct", "tian", "ts")
HK_KINDS = KINDS[3:9]
ETW_KINDS = ("etw1", "etw2", "etw3", "etw4")
ITOL = 1e-9
MIN_HITS = 50


@dataclass(frozen=True)
class Mono:
    exp: float
    coefs: tuple  # ((name, power), ...)


@dataclass(frozen=True)
class Inequality:
    names: tuple  # coefficient order of the exponent vector
    num: tuple
    den: tuple
    rate: float  # multiplexing units
    offset: float = 0.0  # bits, finite snr only
    conditions: tuple = ()  # monomials that must be >= 1
    empty: bool = False


@dataclass(frozen=True)
class EventSpec:
    """One outage event at receiver `user`.

    r is always required. hk kinds need s and p; etw kinds read s2 from s;
    ts reads theta (the time share of `user`).
    """

    kind: str
    user: int
    r: RatePair
    alpha: float = 0.0
    s: SplitVector | None = None
    p: PowerSplit | None = None
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown event kind {self.kind!r}")
        if self.user not in (1, 2):
            raise InvalidParameterError("user must be 1 or 2")
        if self.alpha < 0:
            raise InvalidParameterError("alpha must be >= 0")
        hk = self.kind in HK_KINDS
        if hk and (self.s is None or self.p is None):
            raise InvalidParameterError(f"{self.kind} needs s and p")
        if not hk and self.p is not None:
            raise InvalidParameterError(f"{self.kind} takes no power split")
        if self.s is not None and not (hk or self.kind in ETW_KINDS):
            raise InvalidParameterError(f"{self.kind} takes no rate split")
        if self.kind in ETW_KINDS and self.s is None:
            raise InvalidParameterError(f"{self.kind} needs s (s2 is used)")
        if self.s is not None:
            self.s.check(self.r)
        if self.kind == "ts" and (self.theta is None or not 0 <= self.theta <= 1):
            raise InvalidParameterError("ts needs theta in [0, 1]")

    @property
    def dim(self) -> int:
        return len(self.inequality().names)

    def inequality(self) -> Inequality:
        return _build(self)


def _zero(x):
    return abs(x) <= dmt.BTOL


def _build(ev: EventSpec) -> Inequality:
    i = ev.user
    j = 3 - i
    a = ev.alpha
    hd = f"h{i}{i}"  # direct link into receiver i
    hc = f"h{j}{i}"  # cross link from transmitter j into receiver i
    ri, rj = ev.r[i - 1], ev.r[j - 1]
    k = ev.kind
    direct = Mono(1.0, ((hd, 1),))
    cross = Mono(a, ((hc, 1),))

    if k in ("p2p", "jd1", "mac1", "strip_direct"):
        return Inequality((hd,), (direct,), (), ri)
    if k == "ts":
        th = ev.theta
        if _zero(th):
            return Inequality((hd,), (direct,), (), np.inf, empty=_zero(ri))
        return Inequality((hd,), (direct,), (), ri / th)
    if k in ("jd2", "mac3"):
        return Inequality((hd, hc), (direct, cross), (), ev.r.r1 + ev.r.r2)
    if k == "mac2":
        return Inequality((hc,), (cross,), (), rj)
    if k == "tian":
        return Inequality((hd, hc), (direct,), (cross,), ri)
    if k == "strip_cross":
        return Inequality((hd, hc), (cross,), (direct,), rj)

    if k in HK_KINDS:
        si, sj = ev.s[i - 1], ev.s[j - 1]
        pi, pj = ev.p[i - 1], ev.p[j - 1]
        ti, tj = ri - si, rj - sj
        # private layer of j present only if it carries rate
        den = () if _zero(sj) else (Mono(a + pj - 1, ((hc, 1),)),)
        priv = Mono(pi, ((hd, 1),))
        l = int(k[2])
        num, rate = {
            1: ((priv,), si),
            2: ((direct,), ti),
            3: ((direct,), ri),
            4: ((priv, cross), si + tj),
            5: ((direct, cross), ti + tj),
            6: ((direct, cross), ri + tj),
        }[l]
        empty = _zero(rate) or (l in (1, 4) and _zero(si))
        return Inequality((hd, hc), num, den, rate, empty=empty)

    # outer-bound events, written for receiver 1 regardless of `user`
    s2 = ev.s[1]
    r1, r2 = ev.r
    abar = (Mono(a, (("h21", 1),)),)  # snr^a |h21|^2 >= 1
    if k == "etw1":
        return Inequality(("h11",), (Mono(1.0, (("h11", 1),)),), (), r1, offset=1.0)
    if k == "etw2":
        return Inequality(("h22",), (Mono(1.0, (("h22", 1),)),), (), r2, offset=1.0)
    if k == "etw3":
        return Inequality(("h11", "h21"), (Mono(1.0, (("h11", 1),)), Mono(a, (("h21", 1),))), (),
                          r1 + r2 - s2, offset=1.0, conditions=abar)
    # etw4: ratio snr^(1-a) |h22|^2 / |h21|^2 against the private rate of user 2
    return Inequality(("h22", "h21"), (Mono(1 - a, (("h22", 1), ("h21", -1))),), (), s2,
                      offset=1.0, conditions=abar, empty=_zero(s2))


# --- asymptotic ------------------------------------------------------------

def _order(m: Mono, u: dict):
    out = m.exp
    for name, k in m.coefs:
        out = out - k * u[name]
    return out


def _log_order(monos, u, like):
    out = np.zeros_like(like)
    for m in monos:
        out = np.maximum(out, _order(m, u))
    return out


def _indicator(ineq: Inequality, u: dict, like, cond_tol=ITOL):
    den = _log_order(ineq.den, u, like)
    lhs = np.maximum(_log_order(ineq.num + ineq.den, u, like), den) - den
    ok = lhs <= ineq.rate + ITOL
    for c in ineq.conditions:
        ok = ok & (_order(c, u) >= -cond_tol)
    return ok


def asymptotic_outage_indicator(ev: EventSpec, u) -> bool:
    """Whether fading exponents u (one per coefficient of the event) lie in the outage region.

    The order of u is ev.inequality().names: for receiver-i events (direct, cross).
    """
    ineq = ev.inequality()
    u = np.asarray(u, dtype=float).ravel()
    if u.size != len(ineq.names):
        raise InvalidParameterError(f"{ev.kind} needs {len(ineq.names)} exponents, got {u.size}")
    if np.any(u < 0):
        raise InvalidParameterError("fading exponents must be >= 0")
    if ineq.empty:
        return False
    return bool(_indicator(ineq, dict(zip(ineq.names, u)), np.float64(0.0)))


@lru_cache(maxsize=16)
def _mesh(dim: int, u_max: float, step: float):
    n = int(round(u_max / step))
    axis = np.arange(n + 1) * step
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    flat = tuple(g.ravel() for g in grids)
    total = sum(flat)
    return flat, total


def outage_exponent(ev: EventSpec, u_max: float = 3.0, step: float = 0.01) -> float:
    """min sum(u) over the grid [0, u_max]^dim intersected with the outage region."""
    if u_max < 2 or not 0 < step <= 0.05:
        raise InvalidParameterError("need u_max >= 2 and 0 < step <= 0.05")
    ineq = ev.inequality()
    if ineq.empty:
        return np.inf
    flat, total = _mesh(len(ineq.names), float(u_max), float(step))
    # conditions get one step of slack: at zero rate the conditioned region can
    # shrink to the single point v = alpha, which need not be a grid point
    hit = _indicator(ineq, dict(zip(ineq.names, flat)), total, cond_tol=step)
    if not hit.any():
        return np.inf
    cost = np.where(hit, total, np.inf)
    k = int(np.argmin(cost))
    if any(f[k] >= u_max - step / 2 for f in flat):
        warnings.warn(f"{ev.kind}: exponent minimizer on the grid boundary u_max={u_max}", RuntimeWarning)
    return float(cost[k])


def closed_form(ev: EventSpec) -> float:
    """The closed-form exponent of the event from module dmt."""
    k, i, r, a = ev.kind, ev.user, ev.r, ev.alpha
    if k in ("p2p", "jd1"):
        return dmt.d_jd(r, a).term(f"d{i}")
    if k == "jd2":
        return dmt.d_jd(r, a).term("d3")
    if k in HK_KINDS:
        return dmt.d_hk_terms(r, ev.s, ev.p, a).term(f"d{i}{k[2]}")
    if k.startswith("mac"):
        return dmt.d_mac(r, a).term(f"d{i}{k[3]}")
    if k in ETW_KINDS:
        return dmt.d_etw_terms(r, ev.s[1], a).as_tuple()[int(k[3]) - 1]
    if k == "strip_direct":
        return dmt.d_strip(r, a).term(f"direct{i}")
    if k == "strip_cross":
        return dmt.d_strip(r, a).extras[f"cross{i}"]
    if k == "tian":
        return dmt.d_tian(r, a).term(f"d{i}")
    return dmt.ts_user_exponent(r[i - 1], ev.theta)


# --- Monte Carlo -----------------------------------------------------------

def _finite_value(m: Mono, g: dict, snr: float):
    out = snr ** m.exp
    for name, k in m.coefs:
        out = out * g[name] ** k
    return out


def _finite_hits(ineq: Inequality, snr: float, seed: int, chunk: int, n: int) -> int:
    h = channel_block(seed, chunk)
    g = {name: np.abs(h[name][:n]) ** 2 for name in ineq.names}
    z = np.zeros(n)
    num = sum((_finite_value(m, g, snr) for m in ineq.num), z)
    den = sum((_finite_value(m, g, snr) for m in ineq.den), z)
    lhs = np.log1p(num / (1 + den)) / np.log(2) + ineq.offset
    hit = lhs < ineq.rate * np.log2(snr)
    for c in ineq.conditions:
        hit &= _finite_value(c, g, snr) >= 1
    return int(np.count_nonzero(hit))


def mc_outage(ev: EventSpec, snr: float, trials: int, seed: int, workers: int = 1):
    """Monte Carlo outage probability at finite snr: (probability, stderr, hits).

    Trial k uses channel realization k of stream `seed`, so the hit count does
    not depend on how chunks are spread over workers.
    """
    if trials < 1 or not snr > 1:
        raise InvalidParameterError("need trials >= 1 and snr > 1")
    ineq = ev.inequality()
    if ineq.empty:
        return 0.0, 0.0, 0
    sizes = [min(CHUNK, trials - c * CHUNK) for c in range(-(-trials // CHUNK))]
    jobs = [(c, n) for c, n in enumerate(sizes)]
    run = lambda cn: _finite_hits(ineq, snr, seed, cn[0], cn[1])  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(run, jobs))
    else:
        hits = sum(map(run, jobs))
    p = hits / trials
    return p, float(np.sqrt(p * (1 - p) / trials)), hits


@dataclass(frozen=True)
class ExponentEstimate:
    slope: float
    stderr: float
    points: tuple  # (snr_db, probability, trials, hits)


def fit_exponent(snr_db, prob) -> tuple[float, float]:
    """Least-squares slope of -log10(prob) against log10(snr) and its standard error."""
    x = np.asarray(snr_db, dtype=float) / 10
    y = -np.log10(np.asarray(prob, dtype=float))
    if x.size < 3:
        raise InsufficientDataError(f"need >= 3 usable points, got {x.size}")
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)


def mc_exponent_fit(ev: EventSpec, snr_db_list, trials: int, seed: int, workers: int = 1) -> ExponentEstimate:
    """Fit the outage exponent from Monte Carlo points with at least MIN_HITS hits."""
    dbs = [float(d) for d in snr_db_list]
    if len(dbs) < 3 or max(dbs) - min(dbs) < 20:
        raise InvalidParameterError("need >= 3 snr points spanning >= 20 dB")
    points = []
    for db in dbs:
        p, _, hits = mc_outage(ev, 10 ** (db / 10), trials, seed, workers)
        points.append((db, p, trials, hits))
    use = [(db, p) for db, p, _, hits in points if hits >= MIN_HITS]
    if len(use) < 3:
        raise InsufficientDataError(f"only {len(use)} points with >= {MIN_HITS} hits")
    slope, se = fit_exponent(*zip(*use))
    return ExponentEstimate(slope, se, tuple(points))
