"""
Recovering a log effect and its standard error
==============================================

A trial report usually gives a ratio estimate with a 95% confidence interval
and a p-value. Everything downstream works with the log of the ratio and a
normal likelihood, so the first step is to get (theta_hat, sigma).
"""

import math

from trialbf import ConfidenceInterval, EffectSummary, log_transform, se_from_ci, se_from_p

# A screening trial reporting a hazard ratio. Benefit means HR below one.
screening = EffectSummary(
    "screening", 0.96, "HR", ConfidenceInterval(0.92, 1.00), p_two_sided=0.045,
    benefit_direction="below_one", design_effect=0.7,
)

# The interval and the p-value imply slightly different standard errors,
# mostly because both are rounded in the report.
for pref in ("prefer_ci", "prefer_p"):
    e = log_transform(screening, pref)
    print(f"{pref:10s} theta_hat={e.theta_hat:+.5f} sigma={e.sigma:.5f} z={e.z:+.3f} "
          f"source={e.se_source.value} best possible BF10={e.max_bf:.3f}")

# The helpers can be used directly as well.
print("from the CI:", se_from_ci(0.92, 1.00))
print("from p:     ", se_from_p(math.log(0.96), 0.045))

# Only the ratio scale is given; a missing SE source falls back to the other one.
ecpr = EffectSummary("ecpr", 1.63, "OR", ConfidenceInterval(0.93, 2.85), benefit_direction="above_one")
e = log_transform(ecpr, "prefer_p")
print(f"ecpr: sigma={e.sigma:.5f}, source {e.se_source.value} (no p-value given)")
