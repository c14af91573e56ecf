"""
A batch evidence report
=======================

Many trials at once from a CSV file. Each row gets its recovered log effect,
the best Bayes factor on its default grid, the factors for a few fixed priors
and the point-prior reverse-Bayes interval. Bad rows are reported in place.
"""

import tempfile
from pathlib import Path

from trialbf import read_batch
from trialbf.export import dumps
from trialbf.report import UserPrior, build_report, report_to_table

rows = """\
label,estimate,scale,ci_lower,ci_upper,ci_level,p,direction,design_effect,se_from
screening,0.96,HR,0.92,1.00,0.95,0.045,below_one,0.7,p
ecpr,1.63,OR,0.93,2.85,0.95,0.09,above_one,,ci
typo,-1.2,HR,0.8,1.1,0.95,,below_one,,
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "trials.csv"
    path.write_text(rows)
    doc = build_report(
        read_batch(path),
        effective_n=500,
        user_priors=(UserPrior(1.0, 1.0, "benefit"),),
    )

print(report_to_table(doc))

# The machine-readable form keeps full precision and a schema version.
print(dumps(doc["trials"][0]["max_bf"]))
