"""
Modular function on non-unimodular examples
============================================

"""

# End stabilizers: every arc label is a power of (d-1)(d2-1)
from tdlc.lattice import QPlusLattice
from tdlc.modular import arc_labelling, md_lower_bound_modular
from tdlc.models import DirectedTree, EndStab

m = EndStab(3, 3)
lab = arc_labelling(m, m.canonical_cayley_abels(2))
H = QPlusLattice.generated_by(lab.labels.values())
print(H, md_lower_bound_modular(H).value)

# The red-blue tree has a rank-2 image, so it maps onto the directed Z^2 grid
from tdlc.propertyz import verify_z_morphism, z_morphism
rb = DirectedTree.red_blue(2, 3)
for r in (3, 4, 5):
    ball = rb.canonical_cayley_abels(r)
    chk = verify_z_morphism(z_morphism(rb, ball), ball)
    print(r, chk.is_morphism, chk.collapse_is_property_z, chk.base_fibre)
