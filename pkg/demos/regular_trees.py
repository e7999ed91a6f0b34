"""
Bounds for the full automorphism group of a regular tree
=========================================================

"""

# The full group of a d-regular tree: its canonical Cayley-Abels graph is the tree itself
from tdlc.models import FullAut
from tdlc.report import RunConfig, run_report

for d in (3, 4, 5, 6):
    res = run_report(RunConfig({"family": "full_aut", "d": d}), "md-bounds")["result"]
    print(d, res["verdict"], [(b["bound"], b["value"]) for b in res["lower_bounds"]])

# degree 5 stops at 4..5: the local factors are only C2 and C3, and no computed bound reaches 5
res = run_report(RunConfig({"family": "full_aut", "d": 5}), "md-bounds")["result"]
print(res["notes"])

# the scale of a translation of length l is (d-1)^l
from tdlc.scale import orbit_growth, scale_estimate
from tdlc.trees import WordMap
m = FullAut(4)
for l in (1, 2):
    s = orbit_growth(m, WordMap.translation(4, l), None, 5)
    print(l, s.sizes, scale_estimate(s).value)
