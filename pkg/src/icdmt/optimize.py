"""Max-min grid searches over rate splits, power splits and time shares."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dmt
from .errors import InvalidParameterError, OutOfRegimeError
from .model import PowerSplit, RatePair, SplitVector, TimeShare

TIE = 1e-12


@dataclass(frozen=True)
class GridSpec:
    step: float
    p_max: float | None = None  # defaults to 1 - step

    def __post_init__(self):
        if not 0 < self.step <= 0.1:
            raise InvalidParameterError(f"grid step must lie in (0, 0.1], got {self.step}")
        if self.p_max is not None and not 0 <= self.p_max < 1:
            raise InvalidParameterError(f"p_max must lie in [0, 1), got {self.p_max}")

    @property
    def pmax(self) -> float:
        return 1 - self.step if self.p_max is None else self.p_max


@dataclass(frozen=True)
class HkOptimum:
    value: float
    s_star: SplitVector
    p_star: PowerSplit


def _multiples(stop: float, step: float) -> np.ndarray:
    """{0, step, 2 step, ...} up to stop, built as k*step to avoid drift."""
    k = int(np.floor(stop / step + 1e-9))
    return np.arange(k + 1) * step


def split_grid(r: float, step: float) -> np.ndarray:
    """{0, step, ..., r} with the endpoint r always present exactly."""
    g = _multiples(r, step)
    g = g[g < r - 1e-9]
    return np.append(g, r)


def power_grid(grid: GridSpec) -> np.ndarray:
    return _multiples(grid.pmax, grid.step)


def optimize_hk(r: RatePair, alpha: float, grid: GridSpec) -> HkOptimum:
    """Exhaustive search of max over (s, p) of the HK exponent.

    Ties go to the lexicographically smallest (s1, s2, p1, p2).
    """
    S1 = split_grid(r.r1, grid.step)
    S2 = split_grid(r.r2, grid.step)[:, None, None]
    P = power_grid(grid)
    P1 = P[None, :, None]
    P2 = P[None, None, :]
    best, arg = -1.0, None
    # one s1 slice at a time keeps memory flat; C order within a slice is lexicographic
    for s1 in S1:
        v = dmt.hk_min_array(r.r1, r.r2, s1, S2, P1, P2, alpha)
        v = np.broadcast_to(v, (S2.shape[0], P.size, P.size))
        m = v.max()
        if m > best + TIE:
            k = int(np.argmax(v >= m - TIE))
            i2, j1, j2 = np.unravel_index(k, v.shape)
            best, arg = float(m), (float(s1), float(S2[i2, 0, 0]), float(P[j1]), float(P[j2]))
    s = SplitVector(arg[0], arg[1])
    p = PowerSplit(arg[2], arg[3])
    return HkOptimum(dmt.d_hk_given(r, s, p, alpha), s, p)


def etw_objective(r: RatePair, s2: float, alpha: float) -> float:
    return dmt.d_etw_terms(r, s2, alpha).min()


def optimize_etw(r: RatePair, alpha: float, grid: GridSpec) -> tuple[float, float]:
    """max over s2 in [0, r2] of the ETW outer-bound exponent; smallest maximizer."""
    best, arg = -1.0, 0.0
    for s2 in split_grid(r.r2, grid.step):
        v = etw_objective(r, float(s2), alpha)
        if v > best + TIE:
            best, arg = v, float(s2)
    return best, arg


def optimize_ts(r: RatePair, grid: GridSpec) -> tuple[float, TimeShare]:
    """max over theta1 of min_i (1 - r_i/theta_i)^+ with theta2 = 1 - theta1."""
    n = round(1 / grid.step)
    if abs(n * grid.step - 1) < 1e-9:
        th = np.arange(n + 1) / n
    else:
        th = np.append(split_grid(1.0, grid.step), 1.0)
    best, arg = -1.0, 0.0
    for t in th:
        v = min(dmt.ts_user_exponent(r.r1, t), dmt.ts_user_exponent(r.r2, 1 - t))
        if v == dmt.INF:
            v = dmt.ZERO_RATE_LIMIT
        if v > best + TIE:
            best, arg = v, float(t)
    return best, TimeShare(arg, 1 - arg)


def symmetric_hk_recipe(r: float, alpha: float):
    """Closed-form symmetric optimizer for 2/3 <= alpha <= 1.

    Below r = alpha/2 the joint decoder (no private layer) is optimal; above it
    the private power is set to the noise floor at the other receiver
    (p = 1 - alpha) and the private rate to s = r - alpha/2.
    """
    if not 2 / 3 - 1e-12 <= alpha <= 1 + 1e-12:
        raise OutOfRegimeError(f"symmetric recipe holds for 2/3 <= alpha <= 1, got {alpha}")
    if not 0 <= r <= 1:
        raise InvalidParameterError(f"rate must lie in [0, 1], got {r}")
    if r < alpha / 2:
        return SplitVector(0.0, 0.0), PowerSplit(0.0, 0.0), True
    s = r - alpha / 2
    p = 1 - alpha
    return SplitVector(s, s), PowerSplit(p, p), False


def reduced_hk_min(r: RatePair, s: SplitVector, p: PowerSplit, alpha: float) -> float:
    """HK exponent with the redundant d_i2, d_i5 terms dropped."""
    s.check(r)
    return float(dmt.hk_min_array(r.r1, r.r2, s.s1, s.s2, p.p1, p.p2, alpha, reduced=True))
