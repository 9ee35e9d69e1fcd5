"""
Two closed points glued along the generic one
=============================================

A sheaf on the two-point chain eta < s1 whose closed stalk {a, b} maps onto
the single generic element x. It is representable but not separated.
"""

from starsheaf import star as S
from starsheaf.fixtures import double_origin
from starsheaf.gset import label_str

ctx, D = double_origin()
print(D)

# the classification report: both ladders and the summary flags
r = S.classify(ctx, D)
print("et:", r.is_et, " set:", r.is_set, " loc:", r.is_loc)
print("ladder3:", r.ladder3)
print("ladder4:", r.ladder4)

# the set part collapses the two branches, the et part keeps them apart
Dset, _ = S.set_part(ctx, D)
Det, _ = S.et_part(ctx, D)
print("set part at s1:", [label_str(x) for x in Dset.stalks["s1"].points])
print("et part at s1: ", [label_str(x) for x in Det.stalks["s1"].points])

# maximal orbit sections: one over the whole chain for each branch
for m in S.maximal_orbit_sections(D):
    print("maximal orbit section over", sorted(m.open), "labelled", m.label)

# the total space has two closed points over s1 and one generic point
E = S.espace_etale(D)
print("total space:", E.points, " local iso:", E.is_local_isomorphism())
