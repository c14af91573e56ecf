"""
Which priors would give evidence for an effect?
===============================================

Turn the question around: for each prior sd, find the range of prior means
whose Bayes factor reaches a threshold gamma. A wide range means the data
could support benefit under many priors; a narrow one means they can only do
so for a prior that already expects almost exactly the observed effect.
"""

import math

import numpy as np

from trialbf import ConfidenceInterval, EffectSummary, benefit_truncation, log_transform, rb_region
from trialbf.reverse import verdict

screening = log_transform(
    EffectSummary("screening", 0.96, "HR", ConfidenceInterval(0.92, 1.00), 0.045, "below_one", 0.7),
    "prefer_p",
)
ecpr = log_transform(
    EffectSummary("ecpr", 1.63, "OR", ConfidenceInterval(0.93, 2.85), 0.09, "above_one")
)

taus = np.linspace(0.0, 1.0, 6)
for effect in (screening, ecpr):
    scale = effect.summary.scale.value
    for gamma in (1.0, 3.0):
        region = rb_region(effect, taus, gamma, benefit_truncation(effect))
        print(f"{effect.label}, BF10 >= {gamma:g}:")
        for tau, iv in zip(region.tau_axis, region.intervals):
            if iv is None:
                print(f"  sd {tau:.1f}: none")
            else:
                print(f"  sd {tau:.1f}: {scale} {math.exp(iv[0]):.4f} to {math.exp(iv[1]):.4f}")
        print("  " + verdict(region))
