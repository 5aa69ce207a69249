"""
Subgroup lattices and the Möbius function
=========================================

Enumerate every subgroup of A_5, compute μ(·, G) and compare μ(1, G) + 1
with the Euler characteristic of the order complex.
"""

# %%
from ordercomplex.fields import gf_make
from ordercomplex.groups import build_psl2
from ordercomplex.lattice import all_subgroups, frattini, maximal_subgroups

A5 = build_psl2(gf_make(2, 2))
L = all_subgroups(A5)
print(len(L), "subgroups,", len(L.covers), "cover relations")

# %%
# Subgroups are bitsets over element indices; node order is (order, bits).
from collections import Counter

print(sorted(Counter(int(o) for o in L.orders).items()))
print("maximal subgroup orders", sorted(L.nodes[m].order for m in maximal_subgroups(L)))
print("Frattini subgroup order", frattini(L).order)

# %%
from ordercomplex.homology import count_chains
from ordercomplex.topology import euler_check, mobius

mu = mobius(L)
chains = count_chains(L.proper_part())
chi = sum((-1) ** d * n for d, n in enumerate(chains))
print("mu(1, G) =", mu[L.bottom], " chains per dimension", chains)
print(euler_check(L, mu, chi).to_json())

# %%
# The lattice is the hand-off format between CLI stages; DOT gives the Hasse diagram.
import json
import tempfile
from pathlib import Path

from ordercomplex.lattice import Lattice

path = Path(tempfile.mkdtemp()) / "a5.json"
L.dump(path)
print(path.stat().st_size, "bytes;", Lattice.load(path).covers == L.covers)
print("\n".join(L.to_dot().splitlines()[:6]))
print(json.dumps(L.to_json()["nodes"][:3]))
