"""Regenerate tests/data/oracle_exponents.json.

Each record is an outage event and the exponent found by brute-force grid
minimization of the fading-exponent cost (step 0.005). Closed forms are
tested against these frozen numbers; rerun only when an event definition
changes on purpose.
"""

import json
from pathlib import Path

import numpy as np

from icdmt.model import PowerSplit, RatePair, SplitVector
from icdmt.oracle import EventSpec, outage_exponent

STEP = 0.005
OUT = Path(__file__).resolve().parents[1] / "data" / "oracle_exponents.json"


def events():
    rng = np.random.default_rng(20240601)
    yield from (
        ("jd1", 1, (0.4, 0.4), 1.0, None, None, None),
        ("jd2", 1, (0.4, 0.4), 1.0, None, None, None),
        ("tian", 1, (0.2, 0.2), 0.5, None, None, None),
        ("strip_cross", 1, (0.4, 0.4), 2.0, None, None, None),
        ("mac2", 1, (0.3, 0.3), 0.5, None, None, None),
        ("etw3", 1, (0.5, 0.5), 2 / 3, (0.0, 1 / 6), None, None),
        ("etw4", 1, (0.5, 0.5), 2 / 3, (0.0, 1 / 6), None, None),
    )
    for l in range(1, 7):
        yield (f"hk{l}", 1, (0.5, 0.5), 2 / 3, (1 / 6, 1 / 6), (1 / 3, 1 / 3), None)
    for _ in range(40):
        a = float(np.round(rng.uniform(0, 2.5), 3))
        r = tuple(float(v) for v in np.round(rng.uniform(0, 1, 2), 3))
        s = tuple(float(v) for v in np.round(rng.uniform(0, 1, 2) * r, 3))
        p = tuple(float(v) for v in np.round(rng.uniform(0, 0.95, 2), 3))
        u = int(rng.integers(1, 3))
        kind = str(rng.choice(["jd1", "jd2", "mac1", "mac2", "mac3", "tian", "ts", "etw3", "etw4",
                               "hk1", "hk2", "hk3", "hk4", "hk5", "hk6"]))
        if kind.startswith("hk"):
            yield (kind, u, r, a, s, p, None)
        elif kind.startswith("etw"):
            yield (kind, 1, r, a, s, None, None)
        elif kind == "ts":
            yield (kind, u, r, a, None, None, float(np.round(rng.uniform(0.05, 1), 3)))
        else:
            yield (kind, u, r, a, None, None, None)


def main():
    out = []
    for kind, u, r, a, s, p, th in events():
        ev = EventSpec(kind, u, RatePair(*r), a, SplitVector(*s) if s else None, PowerSplit(*p) if p else None, th)
        out.append({"kind": kind, "user": u, "r": r, "alpha": a, "s": s, "p": p, "theta": th,
                    "exponent": outage_exponent(ev, 3.0, STEP)})
    OUT.write_text(json.dumps({"step": STEP, "records": out}, indent=1) + "\n")
    print(f"wrote {len(out)} records to {OUT}")


if __name__ == "__main__":
    main()
