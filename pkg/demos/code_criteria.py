"""
Code design targets and a codebook check
========================================

A criterion asks that a codeword-difference quantity (a squared distance or
the smallest nonzero Gram eigenvalue of two differences) stays above
snr^(-x + eps). We compute the targets x and check a few small codebooks.
"""

# %%
import math

import numpy as np

from icdmt.codes import (check_criteria, design_targets, gen_superposition_codebook, min_sq_distance,
                         psk_codebook)
from icdmt.model import PowerSplit, RatePair, SplitVector

t = design_targets("jd", RatePair(0.5, 0.5), alpha=2.0)
print("d* =", t.d_star)
for th in t.thresholds:
    print(f"  {th.label:22s} x={th.x:.4f}")

# %%
# scalar PSK: the chord distance is 4 sin^2(pi/M)
for m in (4, 10, 100):
    print(m, min_sq_distance(psk_codebook(m, 1e4)), 4 * math.sin(math.pi / m) ** 2)

tgt = design_targets("strip", RatePair(0.5, 0.5), epsilon=0.05)
for m in (10, 100):
    rep = check_criteria("strip", (psk_codebook(m, 1e4, 0.5),) * 2, tgt)
    print("\n".join(rep.lines()))

# %%
# random superposition books at the moderate-interference operating point
r, s, p = RatePair(0.5, 0.5), SplitVector(1 / 6, 1 / 6), PowerSplit(1 / 3, 1 / 3)
books = tuple(gen_superposition_codebook(2, 1 / 6, 1 / 3, 1 / 3, 16.0, seed=k) for k in (1, 2))
rep = check_criteria("hk", books, design_targets("hk", r, s, p, 2 / 3))
passed = np.mean([c.passed for c in rep.results])
print(f"hk: {passed:.0%} of {len(rep.results)} criteria pass at snr=16")
