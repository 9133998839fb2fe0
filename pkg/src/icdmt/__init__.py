"""Diversity-multiplexing tradeoff toolkit for the two-user fading interference channel."""

from .dmt import (DmtBreakdown, EtwTermSet, d_etw_terms, d_hk_given, d_hk_terms, d_jd, d_mac,
                  d_overall_achievable, d_strip, d_tian, d_ts, d_very_strong_outer)
from .model import (ChannelRealization, PowerSplit, RatePair, SplitVector, TimeShare, apply_channel,
                    interference_band, p2p_outage_exact, sample_channel)
from .optimize import (GridSpec, HkOptimum, optimize_etw, optimize_hk, optimize_ts, reduced_hk_min,
                       symmetric_hk_recipe)
from .oracle import (EventSpec, ExponentEstimate, asymptotic_outage_indicator, closed_form, mc_exponent_fit,
                     mc_outage, outage_exponent)

__version__ = "0.1.0"
