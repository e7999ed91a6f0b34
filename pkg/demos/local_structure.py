"""
Composition factors along an exhaustion
=======================================

"""

from tdlc.localstructure import local_simple_content, md_lower_bound_lsc
from tdlc.models import BMUniversal
from tdlc.perm import named_group

# U(F) for a few local actions; the stable factors come from point stabilizers of F
for name in ("S4", "A4", "S5", "A5"):
    rep = local_simple_content(BMUniversal(named_group(name), name), depth=3)
    print(name, sorted(map(str, rep.stable_factors)), md_lower_bound_lsc(rep).value)

# the brute-force oracle agrees
from tdlc.oracles import point_stabilizer_factors
F = named_group("A5")
print({str(k): v for k, v in point_stabilizer_factors(F.generators, F.degree).items()})
