"""
Finite fields and projective linear groups
==========================================

Build GF(9), let PGL_2(9) act on the ten points of the projective line and
read off its involution classes.
"""

# %%
# GF(9) is stored as the integers 0..8, read as base-3 digit vectors
# (lowest degree first).  The modulus is the least monic irreducible quadratic.
from ordercomplex.fields import gf_make

F = gf_make(3, 2)
print(F.describe(), "modulus coefficients", F.modulus)
print("primitive element", F.primitive_element, "with order", F.mult_order(F.primitive_element))
print("nonzero squares", sorted(F.squares))

# %%
# PGL_2(9) is the closure of x+1, λx and 1/x acting on 0..8 and ∞ (index 9).
from ordercomplex.groups import build_pgl2, build_psl2, centralizer

G = build_pgl2(F)
print(G, "socle order", G.socle.order)

# %%
# Class labels put the socle classes first within each element order, so 2A
# sits inside PSL_2(9) and 2B is the outer involution class.
for c in G.classes:
    inside = "socle" if c.representative in G.socle else "outer"
    print(f"{c.label:>4}  size {c.size:>3}  |C| = {c.centralizer_order:>3}  {inside}")

# %%
# The centralizer of an outer involution is dihedral of order 2(q+1).
x = next(c for c in G.classes if c.label == "2B").representative
print("|C_G(x)| =", centralizer(G, x).order)
print("PSL_2(9) has order", build_psl2(F).order)
