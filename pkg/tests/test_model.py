import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icdmt.errors import InvalidParameterError, ValidationError
from icdmt.model import (CHUNK, ChannelRealization, PowerSplit, RatePair, SplitVector, TimeShare,
                         apply_channel, channel_block, interference_band, p2p_outage_exact, sample_channel)


def test_bands():
    assert interference_band(0.5) == "weak"
    assert interference_band(2 / 3) == "moderate"
    assert interference_band(0.99) == "moderate"
    assert interference_band(1.0) == "strong"
    assert interference_band(1.99) == "strong"
    assert interference_band(2.0) == "very strong"
    with pytest.raises(InvalidParameterError):
        interference_band(-0.1)


def test_type_invariants():
    with pytest.raises(InvalidParameterError):
        RatePair(1.2, 0.0)
    with pytest.raises(InvalidParameterError):
        PowerSplit(1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        TimeShare(0.3, 0.3)
    with pytest.raises(ValidationError):
        SplitVector(0.5, 0.0).check(RatePair(0.4, 0.4))
    assert SplitVector(0.1, 0.3).public(RatePair(0.4, 0.4)) == pytest.approx((0.3, 0.1))


def test_sample_channel_deterministic():
    a = sample_channel(1, 0, 100.0, 1.0)
    b = sample_channel(1, 0, 100.0, 1.0)
    assert a == b
    assert sample_channel(1, 1, 100.0, 1.0) != a
    assert sample_channel(2, 0, 100.0, 1.0) != a


def test_sample_channel_matches_block_stream():
    blk = channel_block(3, 1)
    ch = sample_channel(3, CHUNK + 17, 10.0, 0.5)
    assert ch.h21 == blk["h21"][17]
    assert ch.h12 == blk["h12"][17]


def test_sample_channel_errors():
    with pytest.raises(InvalidParameterError):
        sample_channel(1, 0, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        sample_channel(1, 0, 10.0, -1.0)


def test_channel_statistics():
    # 10^6 draws of |h11|^2 from 16 streams
    g = np.concatenate([np.abs(channel_block(11, c)["h11"]) ** 2 for c in range(16)])[:10**6]
    assert abs(g.mean() - 1.0) < 0.01
    # |CN(0,1)|^2 is Exp(1): P(< 0.1) = 1 - e^-0.1
    assert abs(np.mean(g < 0.1) - (1 - math.exp(-0.1))) < 0.002


def test_apply_channel_examples():
    ch = ChannelRealization(1, 1, 1, 1, snr=1.0, alpha=1.0)
    y1, y2 = apply_channel(ch, [1], [1], [0], [0])
    assert np.allclose(y1, [2]) and np.allclose(y2, [2])

    z1, z2 = np.array([0.1 + 0.2j, -0.3j]), np.array([0.5, 0.25])
    ch = sample_channel(5, 3, 50.0, 0.7)
    y1, y2 = apply_channel(ch, [0, 0], [0, 0], z1, z2)
    assert np.array_equal(y1, z1) and np.array_equal(y2, z2)

    ch = ChannelRealization(0.3 - 1j, 0, 0, 2j, snr=9.0, alpha=1.3)
    x1 = np.array([1, -1j]) / np.sqrt(2)
    y1, _ = apply_channel(ch, x1, [1, 0], z1, z2)
    assert np.allclose(y1, 3 * (0.3 - 1j) * x1 + z1)


def test_apply_channel_errors():
    ch = ChannelRealization(1, 1, 1, 1, snr=1.0, alpha=1.0)
    with pytest.raises(InvalidParameterError):
        apply_channel(ch, [1, 0], [1], [0, 0], [0, 0])
    with pytest.raises(ValidationError):
        apply_channel(ch, [2], [0], [0], [0])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 1e4), st.floats(0, 3), st.floats(-2, 2), st.floats(-2, 2))
def test_apply_channel_linear(index, snr, alpha, a, b):
    ch = sample_channel(9, index, snr, alpha)
    rng = np.random.default_rng(index)
    v = [(rng.standard_normal(3) + 1j * rng.standard_normal(3)) / 4 for _ in range(8)]
    x1, x2, z1, z2, x1b, x2b, z1b, z2b = v
    lhs = apply_channel(ch, a * x1 + b * x1b, a * x2 + b * x2b, a * z1 + b * z1b, a * z2 + b * z2b) \
        if max(abs(a), abs(b)) <= 1 else None
    if lhs is None:
        return
    y = apply_channel(ch, x1, x2, z1, z2)
    yb = apply_channel(ch, x1b, x2b, z1b, z2b)
    for k in range(2):
        assert np.allclose(lhs[k], a * y[k] + b * yb[k], rtol=1e-9, atol=1e-9 * (1 + snr ** max(alpha, 1)))


def test_p2p_outage_exact():
    assert p2p_outage_exact(10.0, 0.0) == 0.0
    assert p2p_outage_exact(100.0, math.log2(11)) == pytest.approx(1 - math.exp(-0.1), rel=1e-12)
    vals = [p2p_outage_exact(10 ** (db / 10), 2.0) for db in range(0, 80, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(InvalidParameterError):
        p2p_outage_exact(10.0, -1.0)
