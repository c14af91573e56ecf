"""
Bayes factors for a single prior
================================

With a normal likelihood for the log effect, the Bayes factor against "no
effect" has a closed form for a normal prior, a sign-truncated normal prior
and a point prior. The quadrature oracle integrates the same model numerically
and should agree to many digits.
"""

import math

from trialbf import (
    ConfidenceInterval,
    EffectSummary,
    PriorSpec,
    Truncation,
    bayes_factor,
    bf_quadrature_oracle,
    bf_unit_information,
    classify_evidence,
    log_transform,
)

ecpr = log_transform(
    EffectSummary("ecpr", 1.63, "OR", ConfidenceInterval(0.93, 2.85), benefit_direction="above_one")
)
screening = log_transform(
    EffectSummary("screening", 0.96, "HR", ConfidenceInterval(0.92, 1.00), 0.045, "below_one", 0.7),
    "prefer_p",
)

# A prior centred on no effect with sd 1 on the log-odds scale, then the same
# prior restricted to beneficial effects.
for trunc in (Truncation.NONE, Truncation.POSITIVE_ONLY):
    prior = PriorSpec(0.0, 1.0, trunc)
    res = bayes_factor(ecpr, prior)
    print(f"{res.kind.value:10s} BF={res.bf:.6f} quadrature={bf_quadrature_oracle(ecpr, prior):.6f} "
          f"-> {classify_evidence(res.bf).category.value}")

# The effect assumed in the power calculation, HR 0.7, as a point prior.
# The factor underflows a double's comfortable range, so read the log.
res = bayes_factor(screening, PriorSpec(math.log(0.7)))
print(f"point prior at HR 0.7: log BF={res.log_bf:.2f}, BF={res.bf:.3g}, "
      f"{classify_evidence(res.bf).category.value}")

# Unit-information priors need the effective sample size behind the estimate,
# which summary reports rarely state. The factor rises, peaks at n = z^2 - 1
# and then decays like 1/sqrt(n).
for n in (1, 3, 10, 100, 1000, 10000):
    r = bf_unit_information(screening, n)
    print(f"n={n:6d} BF={r.bf:.4f}")
