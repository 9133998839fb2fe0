import itertools
import json
import math
from pathlib import Path

import numpy as np
import pytest

from icdmt import dmt
from icdmt.dmt import (d_etw_terms, d_hk_given, d_hk_terms, d_jd, d_mac, d_overall_achievable, d_strip, d_tian,
                       d_ts, d_very_strong_outer)
from icdmt.errors import OutOfRegimeError, ValidationError
from icdmt.model import PowerSplit, RatePair, SplitVector, TimeShare
from icdmt.oracle import EventSpec, closed_form

FROZEN = json.loads((Path(__file__).parent / "data" / "oracle_exponents.json").read_text())
INF = math.inf


def test_d_jd_examples():
    b = d_jd(RatePair(0, 0), 0.5)
    assert b.overall == 1 and b.as_dict() == {"d1": 1, "d2": 1, "d3": 1.5}
    b = d_jd(RatePair(0.5, 0.5), 2)
    assert b.overall == 0.5 and b.term("d3") == 1
    b = d_jd(RatePair(0.4, 0.4), 1)
    assert b.overall == pytest.approx(0.4) and b.active_label == "d3"


def test_d_hk_terms_worked_example():
    b = d_hk_terms(RatePair(0.5, 0.5), SplitVector(1 / 6, 1 / 6), PowerSplit(1 / 3, 1 / 3), 2 / 3)
    want = {1: 1 / 6, 2: 2 / 3, 3: 1 / 2, 4: 1 / 6, 5: 1 / 3, 6: 1 / 6}
    for i in (1, 2):
        for l, v in want.items():
            assert b.term(f"d{i}{l}") == pytest.approx(v, abs=1e-12)
    assert b.overall == pytest.approx(1 / 6, abs=1e-12)
    assert d_hk_given(RatePair(0.5, 0.5), SplitVector(1 / 6, 1 / 6), PowerSplit(1 / 3, 1 / 3), 2 / 3) == \
        pytest.approx(1 / 6, abs=1e-12)


def test_d_hk_terms_private_power_below_rate():
    b = d_hk_terms(RatePair(0.4, 0.4), SplitVector(0.2, 0.2), PowerSplit(0, 0), 0.5)
    assert b.term("d11") == 0 and b.overall == 0


def test_d_hk_zero_split_is_joint_decoding():
    grid = np.round(np.arange(0, 1.0001, 0.05), 10)
    for a in (0.0, 0.3, 0.5, 2 / 3, 1.0, 1.5, 2.0):
        for r1, r2 in itertools.product(grid[::2], grid[::2]):
            r = RatePair(r1, r2)
            want = d_jd(r, a).overall
            for p1, p2 in itertools.product(grid[:-1:3], grid[:-1:3]):
                assert d_hk_given(r, SplitVector(0, 0), PowerSplit(p1, p2), a) == pytest.approx(want, abs=1e-12)


def test_d_hk_zero_rate_terms_are_infinite():
    b = d_hk_terms(RatePair(0.4, 0.3), SplitVector(0.4, 0.0), PowerSplit(0.2, 0.2), 0.8)
    assert b.term("d12") == INF  # t1 = 0
    assert b.term("d21") == INF and b.term("d24") == INF  # no private layer for user 2
    assert math.isfinite(b.term("d11"))
    assert "zero-rate convention applied" in b.notes


def test_d_hk_inconsistent_split():
    with pytest.raises(ValidationError):
        d_hk_terms(RatePair(0.2, 0.2), SplitVector(0.3, 0), PowerSplit(0, 0), 1)


def test_d_mac_examples():
    b = d_mac(RatePair(0.3, 0.3), 0.5)
    assert b.overall == pytest.approx(0.2) and b.active_label in ("d12", "d22")
    assert d_mac(RatePair(0.5, 0.5), 2).overall == 0.5
    assert d_mac(RatePair(0, 0), 0.4).overall == 0.4
    assert d_mac(RatePair(0, 0), 3).overall == 1


def test_d_ts_examples():
    assert d_ts(RatePair(0.3, 0.3), TimeShare(0.5, 0.5)).overall == pytest.approx(0.4)
    assert d_ts(RatePair(0.3, 0.2), TimeShare(0.3, 0.7)).term("d1") == 0
    b = d_ts(RatePair(0, 0.4), TimeShare(0, 1))
    assert b.term("d1") == INF and b.overall == pytest.approx(0.6)
    assert d_ts(RatePair(0.1, 0.4), TimeShare(0, 1)).overall == 0


def test_d_tian_examples():
    assert d_tian(RatePair(0.3, 0.6), 0).overall == pytest.approx(0.4)
    assert d_tian(RatePair(0.2, 0.2), 0.5).overall == pytest.approx(0.3)
    assert d_tian(RatePair(0.1, 0.2), 1.0).overall == 0
    assert dmt.TIAN_NOTE in d_tian(RatePair(0.1, 0.2), 1.0).notes


def test_d_etw_terms_examples():
    assert d_etw_terms(RatePair(0.5, 0.5), 0, 1.5).as_tuple() == (0.5, 0.5, 0.5, 1)
    t = d_etw_terms(RatePair(0.5, 0.5), 1 / 6, 2 / 3)
    assert t.as_tuple() == pytest.approx((0.5, 0.5, 1 / 6, 1 / 6))
    for r in ((0.1, 0.2), (0.9, 0.5)):
        assert d_etw_terms(RatePair(*r), 0.01, 1.0).d14 == 0
    with pytest.raises(ValidationError):
        d_etw_terms(RatePair(0.2, 0.2), 0.3, 1.0)


def test_d_strip_examples():
    assert d_strip(RatePair(0.5, 0.3), 2).overall == 0.5
    b = d_strip(RatePair(0.35, 0.35), 2)
    assert b.extras["per_user_upper"] == pytest.approx((0.65, 0.65))
    assert d_strip(RatePair(1, 1), 2.5).overall == 0
    with pytest.raises(OutOfRegimeError):
        d_strip(RatePair(0.1, 0.1), 1.9)


def test_outer_and_overall():
    assert d_very_strong_outer(RatePair(0, 0)) == 1
    assert d_very_strong_outer(RatePair(0.5, 0.3)) == 0.5
    assert d_very_strong_outer(RatePair(1, 0)) == 0
    assert d_overall_achievable(0.2, 0.4) == 0.4
    assert d_overall_achievable(0.3, 0.3) == 0.3


def test_properties_on_grid():
    g = np.round(np.arange(0, 1.0001, 0.1), 10)
    for a in (0.3, 0.5, 0.8, 1.0, 2.0, 2.5):
        for r1, r2 in itertools.product(g, g):
            r = RatePair(r1, r2)
            jd = d_jd(r, a).overall
            assert d_mac(r, a).overall <= jd + 1e-12
            if a >= 2 and r1 + r2 <= 1:
                assert jd == pytest.approx(d_very_strong_outer(r))
            if a >= 1:
                assert d_etw_terms(r, 0, a).min() == pytest.approx(jd)
            # nonincreasing in r1
            if r1 < 1:
                up = RatePair(min(r1 + 0.1, 1), r2)
                assert d_jd(up, a).overall <= jd + 1e-12
                assert d_mac(up, a).overall <= d_mac(r, a).overall + 1e-12


def test_hk_monotone_in_rate():
    rng = np.random.default_rng(4)
    for _ in range(300):
        a = rng.uniform(0, 2.5)
        r1, r2 = rng.uniform(0, 0.9, 2)
        s1, s2 = rng.uniform(0, 1, 2) * (r1, r2)
        p = PowerSplit(*rng.uniform(0, 0.95, 2))
        base = d_hk_given(RatePair(r1, r2), SplitVector(s1, s2), p, a)
        # raise r1 by raising its public part (s fixed)
        up = d_hk_given(RatePair(r1 + 0.1, r2), SplitVector(s1, s2), p, a)
        assert up <= base + 1e-12


def test_all_exponents_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(300):
        a = rng.uniform(0, 3)
        r = RatePair(*rng.uniform(0, 1, 2))
        s = SplitVector(*(rng.uniform(0, 1, 2) * tuple(r)))
        p = PowerSplit(*rng.uniform(0, 0.99, 2))
        vals = [v for _, v in d_hk_terms(r, s, p, a).terms] + [v for _, v in d_jd(r, a).terms]
        vals += list(d_etw_terms(r, s.s2, a).as_tuple())
        assert min(vals) >= 0


@pytest.mark.parametrize("rec", FROZEN["records"], ids=lambda d: f"{d['kind']}-{d['alpha']}")
def test_closed_form_matches_frozen_oracle(rec):
    ev = EventSpec(rec["kind"], rec["user"], RatePair(*rec["r"]), rec["alpha"],
                   SplitVector(*rec["s"]) if rec["s"] else None, PowerSplit(*rec["p"]) if rec["p"] else None,
                   rec["theta"])
    want = rec["exponent"]
    got = closed_form(ev)
    if math.isinf(want):
        assert math.isinf(got)
    else:
        assert got == pytest.approx(want, abs=2 * FROZEN["step"])
