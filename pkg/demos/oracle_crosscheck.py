"""
Checking closed forms against a brute-force exponent search
===========================================================

Every outage event is an inequality on the fading exponents u (|h|^2 = snr^-u).
Its SNR exponent is the smallest sum(u) inside the event, which the oracle
finds on a grid. Here we line those numbers up next to the closed forms.
"""

# %%
import numpy as np

from icdmt.model import PowerSplit, RatePair, SplitVector
from icdmt.oracle import EventSpec, closed_form, outage_exponent

r, s, p, alpha = RatePair(0.5, 0.5), SplitVector(1 / 6, 1 / 6), PowerSplit(1 / 3, 1 / 3), 2 / 3

# %%
for kind in ("hk1", "hk2", "hk3", "hk4", "hk5", "hk6"):
    ev = EventSpec(kind, 1, r, alpha, s, p)
    print(f"{kind}: closed={closed_form(ev):.4f} oracle={outage_exponent(ev, step=0.005):.4f}")

# %%
# a random sweep, the same idea as acceptance criterion 1 on a smaller scale
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(50):
    a = rng.uniform(0, 2.5)
    rr = RatePair(*rng.uniform(0, 1, 2))
    ev = EventSpec(str(rng.choice(["jd1", "jd2", "mac2", "tian"])), 1, rr, a)
    worst = max(worst, abs(closed_form(ev) - outage_exponent(ev)))
print("largest gap over 50 random events:", round(worst, 4))
