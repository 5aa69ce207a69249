"""
Reductions of the subgroup poset
================================

Restrict to intersections of maximal subgroups, check Hall's vanishing,
delete removable points, and build a complement wedge model.
"""

# %%
from ordercomplex.groups import elementary_abelian, symmetric4
from ordercomplex.lattice import all_subgroups
from ordercomplex.topology import closure_properties, hall_check, mobius, quillen_reduce

L = all_subgroups(symmetric4())
reduced, log = quillen_reduce(L)
print(f"{log.before} proper nontrivial subgroups -> {log.after} maximal intersections")
print(closure_properties(L))
print(hall_check(L, mobius(L), reduced).to_json())

# %%
# Greedy removal of points whose upper or lower interval is contractible.
from ordercomplex.homology import homology_of, order_complex
from ordercomplex.topology import iterate_reductions

final, rlog = iterate_reductions(reduced, L)
print(rlog.verdict, len(final), "points left; homology", homology_of(order_complex(final)).nonzero())

# %%
# For C_5 x C_5 the complements of one C_5 are the other five, an antichain,
# and the wedge model has five points of reduced homology in degree 0.
from ordercomplex.homology import wedge_model_complex
from ordercomplex.topology import bjorner_walker

E = all_subgroups(elementary_abelian(5))
wm = bjorner_walker(E, 1)
print(len(wm.complements), "complements;", homology_of(wedge_model_complex(wm, E)).nonzero())
