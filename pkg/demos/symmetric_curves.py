"""
Symmetric-rate DMT curves
=========================

Walks through the achievable and outer-bound exponents at equal rates
r1 = r2 = r for a few interference levels, printing the table that the
`icdmt curve` command writes as CSV.
"""

# %%
import numpy as np

from icdmt import dmt
from icdmt.model import RatePair, interference_band
from icdmt.optimize import GridSpec, optimize_etw, optimize_hk, symmetric_hk_recipe

grid = GridSpec(1 / 24)
rs = np.arange(0, 1.0001, 0.1)

# %%
# weak interference, alpha = 1/2: the HK scheme tracks the outer bound only at low rates
alpha = 0.5
print(f"alpha={alpha} ({interference_band(alpha)})")
print("   r    jd     hk    etw    gap")
for r in rs:
    rp = RatePair(r, r)
    jd = dmt.d_jd(rp, alpha).overall
    hk = optimize_hk(rp, alpha, grid).value
    etw = optimize_etw(rp, alpha, grid)[0]
    print(f"{r:4.1f} {jd:6.3f} {hk:6.3f} {etw:6.3f} {etw - max(hk, jd):6.3f}")

# %%
# moderate interference: the closed-form split reaches the bound at every rate
alpha = 0.8
for r in (0.2, 0.4, 0.6):
    s, p, jd_only = symmetric_hk_recipe(r, alpha)
    val = dmt.d_hk_given(RatePair(r, r), s, p, alpha)
    how = "joint decoding" if jd_only else f"s={s.s1:.3f} p={p.p1:.3f}"
    print(f"alpha={alpha} r={r}: {how} -> d={val:.4f}")

# %%
# strong and very strong: the outer bound is the joint-decoding exponent itself
for alpha in (1.5, 2.0, 2.5):
    rp = RatePair(0.3, 0.3)
    print(alpha, dmt.d_jd(rp, alpha).overall, optimize_etw(rp, alpha, grid)[0])
