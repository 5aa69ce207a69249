"""Poset homotopy tools on subgroup lattices.

Contractibility is only ever certified here, never decided: every positive
answer carries a cone apex or a replayable collapse sequence, and a refusal
just means no certificate was found.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Mismatch, NotAntichain
from .homology import elementary_collapse, order_complex
from .lattice import Lattice, Poset, interval, maximal_subgroups, subposet


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.details}


@dataclass
class MobiusTable:
    """μ(H, G) for every node H; the upper endpoint is always the top node."""

    values: dict
    reference: str = "upper endpoint G"

    def __getitem__(self, node: int) -> int:
        return self.values[node]


def mobius(l: Lattice) -> MobiusTable:
    """μ(·, G) by downward recursion from the top node."""
    n = len(l)
    above = [np.flatnonzero(l.leq[i]).tolist() for i in range(n)]
    mu = [0] * n
    mu[l.top] = 1
    for h in range(n - 2, -1, -1):
        mu[h] = -sum(mu[k] for k in above[h] if k != h)
    return MobiusTable(dict(enumerate(mu)))


def mobius_resum_ok(l: Lattice, m: MobiusTable) -> bool:
    """Σ_{H ≤ K ≤ G} μ(K, G) vanishes for every H < G."""
    for h in range(len(l)):
        s = sum(m[k] for k in np.flatnonzero(l.leq[h]).tolist())
        if s != (1 if h == l.top else 0):
            return False
    return True


def euler_check(l: Lattice, m: MobiusTable, complex_chi: int, strict: bool = True) -> Check:
    """Rota's identity μ(1, G) + 1 = χ(Δ(L̂(G)))."""
    mu1 = m[l.bottom]
    ok = mu1 + 1 == complex_chi
    chk = Check("rota", ok, {"mu_1_G": mu1, "chi": complex_chi})
    if strict and not ok:
        raise Mismatch(f"μ(1,G)+1 = {mu1 + 1} but χ = {complex_chi}", mu=mu1, chi=complex_chi)
    return chk


@dataclass
class ReductionLog:
    steps: list = field(default_factory=list)
    before: int = 0
    after: int = 0
    verdict: str | None = None

    def to_json(self) -> dict:
        return {"steps": self.steps, "before": self.before, "after": self.after, "verdict": self.verdict}


def maximal_closure(l: Lattice) -> list[int]:
    """Node id of ∩{M maximal : M ⊇ H} for every node H (the top maps to itself)."""
    maxes = maximal_subgroups(l)
    out = []
    for h in range(len(l)):
        bits = l.nodes[l.top].bits
        for mx in maxes:
            if l.leq[h, mx]:
                bits &= l.nodes[mx].bits
        out.append(l.index[bits])
    return out


def quillen_reduce(l: Lattice) -> tuple[Poset, ReductionLog]:
    """Restrict the proper part to intersections of maximal subgroups.

    H ↦ ∩{maximals containing H} is a closure operator on the proper part, so
    its image is homotopy equivalent to the whole proper part.  The trivial
    subgroup is left out even when it is such an intersection.
    """
    f = maximal_closure(l)
    keep = [h for h in range(len(l)) if h not in (l.bottom, l.top) and f[h] == h]
    log = ReductionLog(before=len(l) - 2 if len(l) > 1 else 0, after=len(keep))
    log.steps.append({
        "kind": "quillen",
        "nodes": [h for h in range(len(l)) if h not in (l.bottom, l.top) and f[h] != h],
        "certificate": {"closure": "intersection of maximal subgroups containing H"},
    })
    return subposet(l, keep), log


def closure_properties(l: Lattice) -> dict:
    """Idempotent, inflationary, order-preserving checks for the maximal closure."""
    f = maximal_closure(l)
    n = len(l)
    idem = all(f[f[h]] == f[h] for h in range(n))
    infl = all(l.leq[h, f[h]] for h in range(n))
    a, b = np.nonzero(l.leq)
    mono = bool(all(l.leq[f[i], f[j]] for i, j in zip(a.tolist(), b.tolist())))
    return {"idempotent": idem, "inflationary": infl, "order_preserving": mono}


def hall_check(l: Lattice, m: MobiusTable, reduced: Poset, strict: bool = True) -> Check:
    """μ(H, G) = 0 for every proper nontrivial H outside the reduced poset."""
    kept = set(reduced.labels)
    bad = [h for h in range(len(l)) if h not in (l.bottom, l.top) and h not in kept and m[h] != 0]
    chk = Check("hall", not bad, {"violations": bad, "checked": len(l) - 2 - len(kept)})
    if strict and bad:
        raise Mismatch(f"nonzero μ outside the maximal-intersection poset at nodes {bad}", nodes=bad)
    return chk


def complements(l: Lattice, s: int) -> list[int]:
    return [x for x in range(len(l)) if l.meet(x, s) == l.bottom and l.join(x, s) == l.top]


def is_antichain(p, nodes) -> bool:
    """True iff no two of ``nodes`` are comparable (``p`` a Poset or Lattice)."""
    nodes = list(nodes)
    if isinstance(p, Lattice):
        rel = p.lt
        idx = nodes
    else:
        rel = p.less
        idx = [p.index[v] for v in nodes]
    sub = rel[np.ix_(idx, idx)]
    return not sub.any()


@dataclass
class WedgeModel:
    """Summands of ⋁_{x ⊥ s} Σ((0̂, x) * (x, 1̂)) for one lattice element ``s``."""

    s: int
    complements: list
    lower: dict  # complement -> node ids of the open interval (0̂, x)
    upper: dict  # complement -> node ids of the open interval (x, 1̂)

    @property
    def expression(self) -> str:
        return "wedge over x in complements(s) of Susp(Delta(0,x) * Delta(x,1))"

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "expression": self.expression,
            "summands": [
                {"x": x, "lower": self.lower[x], "upper": self.upper[x]} for x in self.complements
            ],
        }


def bjorner_walker(l: Lattice, s: int) -> WedgeModel:
    """Wedge decomposition for an element whose complements form an antichain.

    For ``s`` the bottom or top the only complement is the other bound, which
    is not part of the proper part; an empty model is returned.
    """
    comps = [x for x in complements(l, s) if x not in (l.bottom, l.top)]
    if not is_antichain(l, comps):
        raise NotAntichain(f"complements of node {s} are not an antichain")
    lower = {x: list(interval(l, l.bottom, x).labels) for x in comps}
    upper = {x: list(interval(l, x, l.top).labels) for x in comps}
    return WedgeModel(s, comps, lower, upper)


# ---------------------------------------------------------------------------
# contractibility certificates and removals


def cone_apex(p: Poset):
    """A point comparable to every other point, or None (the empty poset is no cone)."""
    if not len(p):
        return None
    full = p.comparable().all(axis=1)
    hits = np.flatnonzero(full)
    return p.labels[hits[0]] if len(hits) else None


def certify_contractible(p: Poset, restarts: int = 8, seed: int = 0) -> dict | None:
    """A cone or collapse certificate that Δ(p) is contractible, or None."""
    apex = cone_apex(p)
    if apex is not None:
        return {"method": "cone", "apex": apex, "size": len(p)}
    if not len(p):
        return None
    c = order_complex(p)
    cert, _ = elementary_collapse(c, restarts=restarts, seed=seed)
    if cert.contractible:
        return {"method": "collapse", "size": len(p), "collapse": cert.to_json(c)}
    return None


def kt_removable(p, h, restarts: int = 8, seed: int = 0) -> dict | None:
    """Certificate that the element ``h`` can be deleted without changing homotopy type.

    ``p`` is a Poset, or a Lattice (meaning its proper part, so the two
    candidate intervals are (h, G) and (1, h)).  The upper set is tried
    before the lower one, and a cone before a collapse.
    """
    if isinstance(p, Lattice):
        p = p.proper_part()
    sides = [("upper", p.above(h)), ("lower", p.below(h))]
    for side, sub in sides:
        apex = cone_apex(sub)
        if apex is not None:
            return {"interval": side, "method": "cone", "apex": apex, "size": len(sub)}
    for side, sub in sides:
        if len(sub) > 1:
            cert = certify_contractible(sub, restarts=restarts, seed=seed)
            if cert is not None:
                return {"interval": side, **cert}
    return None


def iterate_reductions(p: Poset, l: Lattice | None = None, restarts: int = 8,
                       seed: int = 0) -> tuple[Poset, ReductionLog]:
    """Remove certified-removable elements in node order, rescanning after each removal.

    A refusal is remembered against the exact upper and lower sets it was
    computed for, so rescans only revisit elements whose neighbourhood changed.
    """
    log = ReductionLog(before=len(p))
    refused: dict = {}
    cur = p
    while True:
        if cone_apex(cur) is not None:
            break
        removed = False
        for h in cur.labels:
            i = cur.index[h]
            key = (h, frozenset(cur.labels[j] for j in np.flatnonzero(cur.less[i])),
                   frozenset(cur.labels[j] for j in np.flatnonzero(cur.less[:, i])))
            if key in refused:
                continue
            cert = kt_removable(cur, h, restarts=restarts, seed=seed)
            if cert is None:
                refused[key] = True
                continue
            log.steps.append({"kind": "kt_removal", "nodes": [h], "certificate": cert})
            cur = cur.remove(h)
            removed = True
            break
        if not removed:
            break
    log.after = len(cur)
    apex = cone_apex(cur)
    if apex is not None:
        log.steps.append({"kind": "cone", "nodes": [apex], "certificate": {"apex": apex}})
        log.verdict = "contractible"
    elif not len(cur):
        log.verdict = "empty"
    else:
        log.verdict = "undetermined"
    return cur, log
