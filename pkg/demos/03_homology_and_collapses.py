"""
Integral homology and elementary collapses
==========================================

Smith normal form on sparse boundary matrices, and collapse certificates
that can be replayed step by step.
"""

# %%
from ordercomplex.snf import SparseIntMatrix, smith_normal_form

M = SparseIntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
print("invariant factors and rank:", smith_normal_form(M))

# %%
# A six-vertex projective plane has 2-torsion in degree 1.
from ordercomplex.homology import SimplicialComplexData, elementary_collapse, homology_of, replay_collapse

rp2 = SimplicialComplexData.from_faces(range(6), [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)])
print(homology_of(rp2).to_json())

# %%
# The proper part of A_5's lattice is a wedge of 60 circles.
from ordercomplex.fields import gf_make
from ordercomplex.groups import build_psl2
from ordercomplex.homology import order_complex
from ordercomplex.lattice import all_subgroups

L = all_subgroups(build_psl2(gf_make(2, 2)))
K = order_complex(L.proper_part())
cert, rest = elementary_collapse(K)
print("simplices", K.counts(), "-> after collapsing", rest.counts())
print("homology of the remainder", homology_of(rest).to_json())

# %%
# Replaying checks every pair is (free face, unique coface) in order.
replay_collapse(K, cert)
print(len(cert.pairs), "collapse pairs replayed")

# %%
# Q_8 has a nontrivial Frattini subgroup, so its complex collapses to a point.
from ordercomplex.groups import quaternion

LQ = all_subgroups(quaternion())
cq, tq = elementary_collapse(order_complex(LQ.proper_part()))
print("Q8 terminal complex", cq.terminal_counts, "contractible:", cq.contractible)
