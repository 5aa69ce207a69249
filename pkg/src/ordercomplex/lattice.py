"""Subgroup lattices: enumeration, Hasse diagram, intervals and export."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NodeLimit, NotComparable
from .groups import GroupTable, SubgroupSet, bits_to_mask, mask_to_bits

DEFAULT_NODE_CAP = 200000
LATTICE_FORMAT_VERSION = 1


def cyclic_subgroups(g: GroupTable) -> set[SubgroupSet]:
    """All cyclic subgroups <x>, deduplicated."""
    seen: dict[int, SubgroupSet] = {}
    covered = np.zeros(g.order, dtype=bool)
    # an element already seen as a generator of a known cyclic subgroup gives the same subgroup
    for x in range(g.order):
        if covered[x]:
            continue
        mask = g.generate([x])
        h = SubgroupSet.from_mask(mask)
        seen[h.bits] = h
        # every generator of <x> has the same cyclic closure
        el = np.flatnonzero(mask)
        covered[el[g.element_orders[el] == h.order]] = True
    return set(seen.values())


def join(g: GroupTable, a: SubgroupSet, b: SubgroupSet) -> SubgroupSet:
    """Smallest subgroup containing both ``a`` and ``b``."""
    if b <= a:
        return a
    if a <= b:
        return b
    start = a.mask(g.order) | b.mask(g.order)
    gens = np.flatnonzero(start)
    return SubgroupSet.from_mask(g.generate(gens, start=start))


@dataclass(frozen=True)
class Poset:
    """A finite poset on labelled points.

    ``labels[i]`` names point ``i`` (a lattice node id, or any hashable for
    abstract posets) and ``less[i, j]`` is the strict order.  Points are kept
    in a linear extension, so every chain is an increasing index sequence.
    """

    labels: tuple
    less: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        less = np.asarray(self.less, dtype=bool).reshape(n, n)
        if n and np.tril(less).any():
            raise ValueError("points must be listed in a linear extension")
        object.__setattr__(self, "less", less)

    @classmethod
    def from_relation(cls, labels, pairs) -> "Poset":
        """Build from labels and (lower, upper) pairs; transitively closed, sorted."""
        labels = list(labels)
        pos = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        rel = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            rel[pos[a], pos[b]] = True
        while True:  # transitive closure
            step = rel | ((rel.astype(np.int64) @ rel.astype(np.int64)) > 0)
            if (step == rel).all():
                break
            rel = step
        if (rel & rel.T).any() or rel.diagonal().any():
            raise ValueError("relation is not antisymmetric")
        order = _linear_extension(rel)
        return cls(tuple(labels[i] for i in order), rel[np.ix_(order, order)])

    def __len__(self):
        return len(self.labels)

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def comparable(self) -> np.ndarray:
        return self.less | self.less.T | np.eye(len(self), dtype=bool)

    def restrict(self, keep) -> "Poset":
        """Induced subposet on the given labels (order preserved)."""
        keep = set(keep)
        idx = [i for i, lab in enumerate(self.labels) if lab in keep]
        return Poset(tuple(self.labels[i] for i in idx), self.less[np.ix_(idx, idx)])

    def remove(self, label) -> "Poset":
        return self.restrict(set(self.labels) - {label})

    def above(self, label) -> "Poset":
        i = self.index[label]
        return self.restrict(self.labels[j] for j in np.flatnonzero(self.less[i]))

    def below(self, label) -> "Poset":
        i = self.index[label]
        return self.restrict(self.labels[j] for j in np.flatnonzero(self.less[:, i]))

    def dual(self) -> "Poset":
        n = len(self)
        rev = list(range(n - 1, -1, -1))
        return Poset(tuple(self.labels[i] for i in rev), self.less.T[np.ix_(rev, rev)])

    def maximal(self) -> list:
        return [self.labels[i] for i in range(len(self)) if not self.less[i].any()]

    def minimal(self) -> list:
        return [self.labels[i] for i in range(len(self)) if not self.less[:, i].any()]


def _linear_extension(rel: np.ndarray) -> list[int]:
    n = len(rel)
    indeg = rel.sum(axis=0)
    out, ready = [], [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        for j in np.flatnonzero(rel[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, int(j))
    return out


class Lattice:
    """The subgroup lattice of a group, with nodes in canonical order.

    Nodes are sorted by (order, bit string read from element 0 upward), so the
    trivial subgroup is node 0 and the whole group is the last node.
    """

    def __init__(self, nodes, n_elements: int, group: dict | None = None, covers=None):
        nodes = sorted(set(nodes), key=lambda h: (h.order, _bitstring(h.bits, n_elements)))
        self.nodes: list[SubgroupSet] = nodes
        self.n_elements = n_elements
        self.group = group or {}
        self.bottom = 0
        self.top = len(nodes) - 1
        self.index = {h.bits: i for i, h in enumerate(nodes)}
        M = np.array([bits_to_mask(h.bits, n_elements) for h in nodes], dtype=np.float32)
        inter = M @ M.T  # |H_a ∩ H_b|
        orders = np.array([h.order for h in nodes])
        self.orders = orders
        # leq[a, b]: node a is contained in node b
        self.leq = np.isclose(inter, orders[:, None])
        self._mask_matrix = M
        self.covers = covers if covers is not None else self._compute_covers()

    def _compute_covers(self) -> list[tuple[int, int]]:
        lt = self.leq & ~np.eye(len(self.nodes), dtype=bool)
        # a < b is a cover iff no c with a < c < b
        lt_f = lt.astype(np.float32)
        between = (lt_f @ lt_f) > 0.5
        cov = lt & ~between
        a, b = np.nonzero(cov)
        return sorted(zip(a.tolist(), b.tolist()))

    def __len__(self):
        return len(self.nodes)

    @property
    def lt(self) -> np.ndarray:
        return self.leq & ~np.eye(len(self.nodes), dtype=bool)

    def node_of(self, h: SubgroupSet) -> int:
        return self.index[h.bits]

    def meet(self, a: int, b: int) -> int:
        bits = self.nodes[a].bits & self.nodes[b].bits
        return self.index[bits]

    def join(self, a: int, b: int) -> int:
        """Least node containing both (exists because the node set is the whole lattice)."""
        both = np.flatnonzero(self.leq[a] & self.leq[b])
        return int(both[np.argmin(self.orders[both])])

    def cover_lists(self):
        up: list[list[int]] = [[] for _ in self.nodes]
        for lo, hi in self.covers:
            up[lo].append(hi)
        return up

    def proper_part(self) -> Poset:
        return interval(self, self.bottom, self.top, open=True)

    def to_json(self) -> dict:
        return {
            "format_version": LATTICE_FORMAT_VERSION,
            "group": self.group,
            "n_elements": self.n_elements,
            "nodes": [{"id": i, "order": h.order, "bits": h.hex()} for i, h in enumerate(self.nodes)],
            "covers": [list(c) for c in self.covers],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Lattice":
        if doc.get("format_version") != LATTICE_FORMAT_VERSION:
            raise ValueError(f"unsupported lattice format version {doc.get('format_version')}")
        n = doc["n_elements"]
        nodes = [SubgroupSet(int(nd["bits"], 16), nd["order"]) for nd in doc["nodes"]]
        lat = cls(nodes, n, group=doc.get("group"))
        if [list(c) for c in lat.covers] != [list(c) for c in doc["covers"]]:
            raise ValueError("stored covers do not match the node set")
        if any(lat.nodes[nd["id"]].bits != int(nd["bits"], 16) for nd in doc["nodes"]):
            raise ValueError("stored node ids are not in canonical order")
        return lat

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path) -> "Lattice":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_dot(self, name: str = "hasse") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, fontsize=9];"]
        for i, h in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{h.order}"];')
        for lo, hi in self.covers:
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bitstring(bits: int, n: int) -> str:
    return format(bits, f"0{n}b")[::-1]


def conjugates(g: GroupTable, h: SubgroupSet) -> list[SubgroupSet]:
    """The distinct subgroups g H g^-1, g in G, in first-seen order of g."""
    n = g.order
    el = h.elements(n)
    images = g.mult[g.mult[:, el], g.inv[:, None]]  # row r: r H r^-1
    masks = np.zeros((n, n), dtype=bool)
    masks[np.arange(n)[:, None], images] = True
    packed = np.packbits(masks, axis=1, bitorder="little")
    _, first = np.unique(packed, axis=0, return_index=True)
    out = []
    for r in sorted(first.tolist()):
        out.append(SubgroupSet(int.from_bytes(packed[r].tobytes(), "little"), h.order))
    return out


def all_subgroups(g: GroupTable, node_cap: int = DEFAULT_NODE_CAP) -> Lattice:
    """Every subgroup of ``g``, as the fixpoint of joins with cyclic subgroups.

    Joining only with cyclic subgroups of prime-power order suffices, since a
    cyclic group is the join of its Sylow subgroups.  The worklist holds one
    representative per conjugacy class: <gHg^-1, x> = g<H, g^-1 x g>g^-1, so
    joining a representative with every cyclic subgroup reaches a conjugate of
    every join with every member of its class.  All conjugates are stored.
    """
    n = g.order
    cyclics = sorted(cyclic_subgroups(g), key=lambda h: (h.order, h.bits))
    joiners = []
    for h in cyclics:
        if _is_prime_power(h.order):
            el = h.elements(n)
            joiners.append(int(el[np.argmax(g.element_orders[el] == h.order)]))

    found: dict[int, SubgroupSet] = {}
    worklist: list[tuple[SubgroupSet, tuple[int, ...]]] = []

    def add_class(h: SubgroupSet, gens: tuple[int, ...]):
        for c in conjugates(g, h):
            found[c.bits] = c
        if len(found) > node_cap:
            raise NodeLimit(f"more than {node_cap} subgroups")
        worklist.append((h, gens))

    for h in cyclics:
        if h.bits not in found:
            el = h.elements(n)
            gen = int(el[np.argmax(g.element_orders[el] == h.order)])
            add_class(h, (gen,) if h.order > 1 else ())
    while worklist:
        h, gens = worklist.pop(0)
        hmask = h.mask(n)
        for x in joiners:
            if hmask[x]:
                continue
            kgens = gens + (x,)
            mask = g.generate(kgens, start=hmask)
            kbits = mask_to_bits(mask)
            if kbits not in found:
                add_class(SubgroupSet(kbits, int(mask.sum())), kgens)
    return Lattice(found.values(), n, group=dict(g.descriptor, order=n))


def _is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while m % p:
        p += 1
    while m % p == 0:
        m //= p
    return m == 1


def maximal_subgroups(l: Lattice) -> list[int]:
    return [lo for lo, hi in l.covers if hi == l.top]


def frattini(l: Lattice) -> SubgroupSet:
    bits = l.nodes[l.top].bits
    for m in maximal_subgroups(l):
        bits &= l.nodes[m].bits
    return SubgroupSet(bits, bits.bit_count())


def interval(l: Lattice, a: int, b: int, open: bool = True) -> Poset:
    """Nodes between ``a`` and ``b`` (strictly if ``open``)."""
    if not l.leq[a, b]:
        raise NotComparable(f"node {a} is not below node {b}")
    sel = l.leq[a] & l.leq[:, b]
    if open:
        sel[a] = sel[b] = False
    idx = np.flatnonzero(sel)
    return Poset(tuple(idx.tolist()), l.lt[np.ix_(idx, idx)])


def subposet(l: Lattice, node_ids) -> Poset:
    idx = np.array(sorted(node_ids), dtype=np.int64)
    return Poset(tuple(idx.tolist()), l.lt[np.ix_(idx, idx)])
