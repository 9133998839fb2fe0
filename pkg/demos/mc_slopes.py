"""
Outage slopes from simulation
=============================

Monte Carlo outage probabilities at 20-50 dB and the fitted slope of
-log10(P) against log10(snr), next to the asymptotic exponent.
Trials are reduced here to keep the run short; the acceptance suite uses 10^6.
"""

# %%
import math

from icdmt.model import RatePair, p2p_outage_exact
from icdmt.oracle import EventSpec, closed_form, mc_exponent_fit, mc_outage

events = {
    "p2p r=0.4": EventSpec("p2p", 1, RatePair(0.4, 0.0)),
    "jd2 alpha=1": EventSpec("jd2", 1, RatePair(0.4, 0.4), 1.0),
    "strip_cross alpha=2": EventSpec("strip_cross", 1, RatePair(0.4, 0.4), 2.0),
    "tian alpha=0.5": EventSpec("tian", 1, RatePair(0.2, 0.2), 0.5),
}

# %%
for name, ev in events.items():
    est = mc_exponent_fit(ev, [20, 30, 40, 50], 200_000, seed=1, workers=4)
    print(f"{name:22s} slope={est.slope:.3f} +- {est.stderr:.3f}  exponent={closed_form(ev):.3f}")

# %%
# the point-to-point case has an exact answer to compare with
ev = events["p2p r=0.4"]
for db in (20, 30, 40):
    snr = 10 ** (db / 10)
    p, se, _ = mc_outage(ev, snr, 200_000, seed=2)
    exact = p2p_outage_exact(snr, 0.4 * math.log2(snr))
    print(db, "dB", f"mc={p:.5f} exact={exact:.5f} z={(p - exact) / se:+.2f}")
