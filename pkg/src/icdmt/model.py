"""Channel model of the two-user single-antenna Rayleigh interference channel.

    y1 = sqrt(snr) h11 x1 + sqrt(snr^alpha) h21 x2 + z1
    y2 = sqrt(snr^alpha) h12 x1 + sqrt(snr) h22 x2 + z2

h_ji is the gain from transmitter j to receiver i. Rates are multiplexing
rates r (R = r log2 snr bits per channel use).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError, ValidationError

TOL = 1e-12

# trials per random stream; stream c holds sample indices [c*CHUNK, (c+1)*CHUNK)
CHUNK = 1 << 16


def interference_band(alpha: float) -> str:
    """Name of the interference regime containing alpha."""
    if alpha < 0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")
    if alpha >= 2:
        return "very strong"
    if alpha >= 1:
        return "strong"
    if alpha >= 2 / 3:
        return "moderate"
    return "weak"


def _check_alpha(alpha):
    if not np.isfinite(alpha) or alpha < 0:
        raise InvalidParameterError(f"alpha must be a finite value >= 0, got {alpha}")


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    def __post_init__(self):
        for v in (self.r1, self.r2):
            if not (-TOL <= v <= 1 + TOL):
                raise InvalidParameterError(f"multiplexing rates must lie in [0, 1], got {v}")

    def __iter__(self):
        return iter((self.r1, self.r2))

    def __getitem__(self, i):
        return (self.r1, self.r2)[i]


@dataclass(frozen=True)
class SplitVector:
    """Private rates s; the public rates are t = r - s."""

    s1: float
    s2: float

    def __iter__(self):
        return iter((self.s1, self.s2))

    def __getitem__(self, i):
        return (self.s1, self.s2)[i]

    def check(self, r: RatePair) -> None:
        for s, rr in zip(self, r):
            if s < -TOL or s > rr + TOL:
                raise ValidationError(f"split s={s} inconsistent with rate r={rr}")

    def public(self, r: RatePair) -> tuple[float, float]:
        self.check(r)
        return (max(r.r1 - self.s1, 0.0), max(r.r2 - self.s2, 0.0))


@dataclass(frozen=True)
class PowerSplit:
    """Private power exponents: the private layer of user i has power snr^(p_i - 1)."""

    p1: float
    p2: float

    def __post_init__(self):
        for v in (self.p1, self.p2):
            if not (-TOL <= v < 1):
                raise InvalidParameterError(f"power split exponents must lie in [0, 1), got {v}")

    def __iter__(self):
        return iter((self.p1, self.p2))

    def __getitem__(self, i):
        return (self.p1, self.p2)[i]


@dataclass(frozen=True)
class TimeShare:
    theta1: float
    theta2: float

    def __post_init__(self):
        if min(self.theta1, self.theta2) < -TOL or abs(self.theta1 + self.theta2 - 1) > 1e-9:
            raise InvalidParameterError(f"time shares must be >= 0 and sum to 1, got {self.theta1}, {self.theta2}")

    def __iter__(self):
        return iter((self.theta1, self.theta2))

    def __getitem__(self, i):
        return (self.theta1, self.theta2)[i]


@dataclass(frozen=True)
class ChannelRealization:
    h11: complex
    h12: complex
    h21: complex
    h22: complex
    snr: float
    alpha: float

    def __post_init__(self):
        if not self.snr > 0:
            raise InvalidParameterError(f"snr must be positive, got {self.snr}")
        _check_alpha(self.alpha)


@lru_cache(maxsize=8)
def _block(seed: int, chunk: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(chunk)]))
    g = rng.standard_normal((4, 2, CHUNK))
    h = (g[:, 0] + 1j * g[:, 1]) / np.sqrt(2.0)
    h.setflags(write=False)
    return h


def channel_block(seed: int, chunk: int) -> dict[str, np.ndarray]:
    """All CHUNK realizations of stream (seed, chunk), keyed by coefficient name.

    Row order is h11, h12, h21, h22. The block is cached and read-only.
    """
    if seed < 0 or chunk < 0:
        raise InvalidParameterError("seed and chunk index must be nonnegative")
    h = _block(seed, chunk)
    return {"h11": h[0], "h12": h[1], "h21": h[2], "h22": h[3]}


def sample_channel(seed: int, index: int, snr: float, alpha: float) -> ChannelRealization:
    """Realization number `index` of the stream keyed by `seed`.

    Identical to entry index % CHUNK of channel_block(seed, index // CHUNK), so
    batch Monte Carlo and single draws see the same channels.
    """
    if not snr > 0:
        raise InvalidParameterError(f"snr must be positive, got {snr}")
    _check_alpha(alpha)
    if index < 0:
        raise InvalidParameterError("index must be nonnegative")
    blk = channel_block(seed, index // CHUNK)
    k = index % CHUNK
    return ChannelRealization(*(complex(blk[n][k]) for n in ("h11", "h12", "h21", "h22")), snr=snr, alpha=alpha)


def apply_channel(ch: ChannelRealization, x1, x2, noise1, noise2):
    """Channel outputs (y1, y2) for inputs x1, x2 and the given noise vectors."""
    x1, x2, z1, z2 = (np.atleast_1d(np.asarray(a, dtype=complex)) for a in (x1, x2, noise1, noise2))
    n = x1.shape[0]
    if n < 1 or any(a.ndim != 1 or a.shape[0] != n for a in (x2, z1, z2)):
        raise InvalidParameterError("inputs and noise must be vectors of one common length N >= 1")
    for name, x in (("x1", x1), ("x2", x2)):
        if np.vdot(x, x).real > n * (1 + 1e-9):
            raise ValidationError(f"{name} violates the power constraint |x|^2 <= N")
    a = np.sqrt(ch.snr)
    b = np.sqrt(ch.snr ** ch.alpha)
    y1 = a * ch.h11 * x1 + b * ch.h21 * x2 + z1
    y2 = b * ch.h12 * x1 + a * ch.h22 * x2 + z2
    return y1, y2


def p2p_outage_exact(snr: float, rate_bits: float) -> float:
    """Exact outage probability P(log2(1 + snr|h|^2) < R) for h ~ CN(0, 1)."""
    if not snr > 0:
        raise InvalidParameterError(f"snr must be positive, got {snr}")
    if rate_bits < 0:
        raise InvalidParameterError(f"rate must be nonnegative, got {rate_bits}")
    return float(-np.expm1(-np.expm1(rate_bits * np.log(2.0)) / snr))
