"""Finite permutation groups stored as full multiplication tables.

Every group here is small enough that the Cayley table fits in memory, so
all later algorithms work on element indices.  Element 0 is always the
identity.  The product ``i * j`` is the composition "apply ``j`` first, then
``i``", i.e. ``perm[i][perm[j]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from collections import deque

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InputRejected, NonPrime, NotKlein, SizeLimit
from .fields import FieldSpec, gf_make, is_prime

DEFAULT_ELEMENT_CAP = 20000


# --------------------------------------------------------------------------
# bit vectors

def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(bool), bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


def bits_to_indices(bits: int, n: int) -> np.ndarray:
    return np.flatnonzero(bits_to_mask(bits, n))


@dataclass(frozen=True)
class SubgroupSet:
    """A subgroup as a bit vector over element indices (bit 0 is the identity)."""

    bits: int
    order: int

    @classmethod
    def from_mask(cls, mask) -> "SubgroupSet":
        mask = np.asarray(mask, dtype=bool)
        return cls(mask_to_bits(mask), int(mask.sum()))

    @classmethod
    def from_elements(cls, g: "GroupTable", elements, verify: bool = True) -> "SubgroupSet":
        mask = np.zeros(g.order, dtype=bool)
        mask[np.asarray(list(elements), dtype=np.int64)] = True
        if verify:
            idx = np.flatnonzero(mask)
            if not mask[0]:
                raise ValueError("subgroup must contain the identity")
            if not mask[g.mult[np.ix_(idx, idx)]].all() or not mask[g.inv[idx]].all():
                raise ValueError("element set is not closed under multiplication and inverses")
        return cls.from_mask(mask)

    def __contains__(self, i: int) -> bool:
        return bool((self.bits >> int(i)) & 1)

    def __le__(self, other: "SubgroupSet") -> bool:
        return self.bits & other.bits == self.bits

    def __lt__(self, other: "SubgroupSet") -> bool:
        return self.bits != other.bits and self <= other

    def __and__(self, other: "SubgroupSet") -> "SubgroupSet":
        b = self.bits & other.bits
        return SubgroupSet(b, b.bit_count())

    def mask(self, n: int) -> np.ndarray:
        return bits_to_mask(self.bits, n)

    def elements(self, n: int) -> np.ndarray:
        return bits_to_indices(self.bits, n)

    def hex(self) -> str:
        return format(self.bits, "x")


# --------------------------------------------------------------------------
# group tables

@dataclass(frozen=True)
class ConjClass:
    label: str
    member_indices: frozenset
    centralizer_order: int
    element_order: int
    representative: int

    @property
    def size(self) -> int:
        return len(self.member_indices)


def _closure(gens, cap, payload=None, payload_mul=None):
    """Breadth-first closure of permutation generators; identity first."""
    degree = len(gens[0])
    ident = np.arange(degree)
    elems = [ident]
    loads = [payload[1]] if payload is not None else None
    seen = {ident.tobytes(): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for k, s in enumerate(gens):
            new = elems[i][s]
            key = new.tobytes()
            if key not in seen:
                if len(elems) >= cap:
                    raise SizeLimit(f"group exceeds element cap {cap}")
                seen[key] = len(elems)
                elems.append(new)
                if loads is not None:
                    loads.append(payload_mul(loads[i], payload[0][k]))
                queue.append(len(elems) - 1)
    return np.array(elems), loads


class GroupTable:
    """Multiplication table of a finite permutation group.

    ``perms[i]`` is the permutation of element ``i``; ``mult[i, j]`` is the
    index of ``i * j``; ``inv[i]`` the index of the inverse.
    """

    def __init__(self, perms, name: str = "G", descriptor: dict | None = None, generators=None):
        perms = np.asarray(perms, dtype=np.int64)
        if perms.ndim != 2 or not (perms[0] == np.arange(perms.shape[1])).all():
            raise ValueError("first permutation must be the identity")
        self.perms = perms
        self.name = name
        self.descriptor = descriptor or {"family": "custom", "name": name}
        self.order = len(perms)
        self.degree = perms.shape[1]
        self.mult = self._build_table()
        self.inv = np.argmax(self.mult == 0, axis=1)
        if not (self.mult[np.arange(self.order), self.inv] == 0).all():
            raise ValueError("element set is not a group")
        self.generators = list(generators) if generators is not None else self._find_generators()
        self._spot_check_associativity()

    # -- construction helpers

    def _build_table(self) -> np.ndarray:
        perms, n = self.perms, self.order
        # shortest prefix of points whose images separate all elements
        for b in range(1, self.degree + 1):
            if len(np.unique(perms[:, :b], axis=0)) == n:
                break
        base = perms[:, :b]
        weights = self.degree ** np.arange(b, dtype=np.int64)
        if self.degree**b >= 2**62:
            raise ValueError("degree too large for key encoding")
        keys = base @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            prod_keys = perms[i][base] @ weights  # (perm_i o perm_j) on the base, all j
            pos = np.searchsorted(sorted_keys, prod_keys)
            if (pos >= n).any() or (sorted_keys[np.minimum(pos, n - 1)] != prod_keys).any():
                raise ValueError("element set is not closed under composition")
            table[i] = order[pos]
        return table

    def _find_generators(self) -> list[int]:
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        for i in range(1, self.order):
            if not mask[i]:
                gens.append(i)
                mask = self.generate(gens)
                if mask.all():
                    break
        return gens

    def _spot_check_associativity(self, trials: int = 64):
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, self.order, size=(3, trials))
        m = self.mult
        if not (m[m[a, b], c] == m[a, m[b, c]]).all():
            raise ValueError("multiplication is not associative")

    # -- basic queries

    def mul(self, i: int, j: int) -> int:
        return int(self.mult[i, j])

    def conj(self, g: int, x):
        """``g x g^-1`` (vectorised over x)."""
        return self.mult[self.mult[g, x], self.inv[g]]

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        k = 1
        while (orders == 0).any():
            orders[(cur == 0) & (orders == 0)] = k
            cur = self.mult[cur, np.arange(n)]
            k += 1
        return orders

    def order_of(self, i: int) -> int:
        return int(self.element_orders[i])

    def generate(self, gens, start=None) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``gens`` (and ``start``)."""
        mask = np.zeros(self.order, dtype=bool)
        if start is not None:
            mask |= start
        mask[0] = True
        gens = np.asarray(list(gens), dtype=np.int64)
        if len(gens) == 0:
            return mask
        frontier = np.flatnonzero(mask)
        while len(frontier):
            new = self.mult[np.ix_(frontier, gens)].ravel()
            new = np.unique(new[~mask[new]])
            mask[new] = True
            frontier = new
        return mask

    def subgroup(self, gens) -> SubgroupSet:
        return SubgroupSet.from_mask(self.generate(gens))

    def whole(self) -> SubgroupSet:
        return SubgroupSet.from_mask(np.ones(self.order, dtype=bool))

    def trivial(self) -> SubgroupSet:
        return SubgroupSet(1, 1)

    @cached_property
    def socle(self) -> SubgroupSet:
        """The derived subgroup; equals the socle for the almost simple groups built here."""
        return commutator_subgroup(self)

    @cached_property
    def classes(self) -> list[ConjClass]:
        return conjugacy_classes(self)

    def class_of(self, i: int) -> ConjClass:
        for c in self.classes:
            if i in c.member_indices:
                return c
        raise KeyError(i)

    def __repr__(self):
        return f"GroupTable({self.name}, order={self.order})"


# --------------------------------------------------------------------------
# structural operations

def conjugacy_classes(g: GroupTable) -> list[ConjClass]:
    """Conjugacy classes labelled ``nA, nB, ...``.

    Within one element order, classes inside the derived subgroup (the socle
    for the almost simple groups here) are labelled first, then the outer
    classes; each block is sorted by descending centralizer order, ties by
    least member index.
    """
    n = g.order
    rows, cols = [], []
    for s in g.generators:
        rows.append(np.arange(n))
        cols.append(g.conj(s, np.arange(n)))
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    by_label: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        by_label.setdefault(int(lab), []).append(i)
    socle = commutator_subgroup(g)
    raw = []
    for members in by_label.values():
        rep = min(members)
        raw.append((g.order_of(rep), rep not in socle, -(n // len(members)), rep, members))
    raw.sort()
    out = []
    letter_idx: dict[int, int] = {}
    for elt_order, _, neg_c, rep, members in raw:
        k = letter_idx.get(elt_order, 0)
        letter_idx[elt_order] = k + 1
        out.append(ConjClass(f"{elt_order}{_letters(k)}", frozenset(members), -neg_c, elt_order, rep))
    return out


def _letters(k: int) -> str:
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(ord("A") + r) + s
    return s


def centralizer(g: GroupTable, x: int) -> SubgroupSet:
    return SubgroupSet.from_mask(g.mult[x, :] == g.mult[:, x])


def commutator_subgroup(g: GroupTable) -> SubgroupSet:
    """Normal closure of the commutators of a generating set."""
    gens = g.generators
    inv, m = g.inv, g.mult
    comms = []
    for a in gens:
        for b in gens:
            c = int(m[m[inv[a], inv[b]], m[a, b]])
            if c != 0 and c not in comms:
                comms.append(c)
    mask = g.generate(comms)
    changed = True
    while changed:
        changed = False
        for s in gens:
            conj = g.conj(s, np.array(comms, dtype=np.int64)) if comms else np.zeros(0, dtype=np.int64)
            for c in conj:
                if not mask[c]:
                    comms.append(int(c))
                    mask = g.generate(comms)
                    changed = True
    return SubgroupSet.from_mask(mask)


def is_cyclic(g: GroupTable, h: SubgroupSet) -> bool:
    el = h.elements(g.order)
    return bool((g.element_orders[el] == h.order).any())


def is_dihedral(g: GroupTable, h: SubgroupSet) -> bool:
    """Order 2m with a cyclic subgroup of order m inverted by an element outside it."""
    if h.order % 2 or h.order < 4:
        return False
    m = h.order // 2
    el = h.elements(g.order)
    orders = g.element_orders[el]
    for r in el[orders == m]:
        rot = g.generate([r])
        outside = el[~rot[el]]
        if (g.conj(outside, r) == g.inv[r]).any():
            return True
    return False


def rotation_subgroup(g: GroupTable, h: SubgroupSet) -> SubgroupSet | None:
    """The cyclic index-2 subgroup of a dihedral group (the first one found)."""
    m = h.order // 2
    el = h.elements(g.order)
    for r in el[g.element_orders[el] == m]:
        return g.subgroup([int(r)])
    return None


def is_klein_four(g: GroupTable, h: SubgroupSet) -> bool:
    el = h.elements(g.order)
    return h.order == 4 and bool((g.element_orders[el[1:]] == 2).all())


def klein_shape_tag(g: GroupTable, h: SubgroupSet) -> str:
    """Class-membership tag of a Klein four-group, e.g. ``"2A1B2"`` or ``"2A3"``."""
    if not is_klein_four(g, h):
        raise NotKlein(f"subgroup of order {h.order} is not a Klein four-group")
    counts: dict[str, int] = {}
    for e in h.elements(g.order)[1:]:
        letter = g.class_of(int(e)).label[1:]
        counts[letter] = counts.get(letter, 0) + 1
    return "2" + "".join(f"{k}{counts[k]}" for k in sorted(counts))


# --------------------------------------------------------------------------
# families

def _mobius_perm(F: FieldSpec, a, b, c, d) -> np.ndarray:
    """Permutation of the projective line (point q is infinity) for x -> (ax+b)/(cx+d)."""
    q = F.q
    img = np.empty(q + 1, dtype=np.int64)
    for x in range(q):
        num = F.add(F.mul(a, x), b)
        den = F.add(F.mul(c, x), d)
        img[x] = q if den == 0 else F.mul(num, F.inv(den))
    img[q] = q if c == 0 else F.mul(a, F.inv(c))
    return img


def _matmul2(F: FieldSpec, A, B):
    (a, b, c, d), (e, f, g, h) = A, B
    return (
        F.add(F.mul(a, e), F.mul(b, g)),
        F.add(F.mul(a, f), F.mul(b, h)),
        F.add(F.mul(c, e), F.mul(d, g)),
        F.add(F.mul(c, f), F.mul(d, h)),
    )


def _check_cap(n: int, cap: int):
    if n > cap:
        raise SizeLimit(f"group order {n} exceeds element cap {cap}")


def _pgl2_with_matrices(field: FieldSpec, cap: int):
    q = field.q
    _check_cap(q * (q * q - 1), cap)
    lam = field.primitive_element
    mats = [(1, 1, 0, 1), (lam, 0, 0, 1), (0, 1, 1, 0)]
    gens = [_mobius_perm(field, *m) for m in mats]
    perms, loads = _closure(gens, cap, payload=(mats, (1, 0, 0, 1)),
                            payload_mul=lambda A, B: _matmul2(field, A, B))
    assert len(perms) == q * (q * q - 1)
    return perms, loads


def build_pgl2(field: FieldSpec, cap: int = DEFAULT_ELEMENT_CAP) -> GroupTable:
    """PGL_2(q) acting on the q+1 points of the projective line."""
    perms, _ = _pgl2_with_matrices(field, cap)
    return GroupTable(perms, name=f"PGL2({field.q})",
                      descriptor={"family": "pgl2", "p": field.p, "k": field.k},
                      generators=[1, 2, 3])


def build_psl2(field: FieldSpec, cap: int = DEFAULT_ELEMENT_CAP) -> GroupTable:
    """PSL_2(q): the Möbius maps with square determinant (all of PGL_2(q) when q is even)."""
    q = field.q
    if field.p == 2:
        g = build_pgl2(field, cap)
        g.name = f"PSL2({q})"
        g.descriptor = {"family": "psl2", "p": field.p, "k": field.k}
        return g
    _check_cap(q * (q * q - 1) // 2, cap)
    perms, mats = _pgl2_with_matrices(field, 2 * cap)
    squares = field.squares
    keep = [i for i, (a, b, c, d) in enumerate(mats) if field.sub(field.mul(a, d), field.mul(b, c)) in squares]
    return GroupTable(perms[keep], name=f"PSL2({q})",
                      descriptor={"family": "psl2", "p": field.p, "k": field.k})


def build_psl2_8_ext3() -> GroupTable:
    """PSL_2(8):3, the extension of PSL_2(8) by the Frobenius x -> x^2 on P^1(GF(8))."""
    F = gf_make(2, 3)
    q = F.q
    lam = F.primitive_element
    gens = [_mobius_perm(F, *m) for m in [(1, 1, 0, 1), (lam, 0, 0, 1), (0, 1, 1, 0)]]
    gens.append(np.append(F.frobenius, q))
    perms, _ = _closure(gens, 10**6)
    assert len(perms) == 1512
    return GroupTable(perms, name="PSL2(8):3", descriptor={"family": "psl2_8_ext3"})


def cyclic(n: int) -> GroupTable:
    gen = np.roll(np.arange(n), -1) if n > 1 else np.arange(1)
    perms, _ = _closure([gen], 10**6)
    return GroupTable(perms, name=f"C{n}", descriptor={"family": "cyclic", "n": n})


def elementary_abelian(p: int, rank: int = 2) -> GroupTable:
    """(C_p)^rank acting on rank disjoint p-cycles."""
    gens = []
    for r in range(rank):
        g = np.arange(p * rank)
        g[r * p:(r + 1) * p] = np.roll(g[r * p:(r + 1) * p], -1)
        gens.append(g)
    perms, _ = _closure(gens, 10**6)
    return GroupTable(perms, name=f"C{p}^{rank}", descriptor={"family": "elem_abelian", "p": p, "rank": rank})


def dihedral(m: int) -> GroupTable:
    """Dihedral group of order 2m acting on the m-gon (m >= 3)."""
    r = np.roll(np.arange(m), -1)
    s = (-np.arange(m)) % m
    perms, _ = _closure([r, s], 10**6)
    return GroupTable(perms, name=f"D{2 * m}", descriptor={"family": "dihedral", "m": m})


def quaternion() -> GroupTable:
    """Q_8 in its regular representation."""
    # basis units 1, i, j, k with sign: element index = 4*sign + unit
    table = {  # unit products (u, v) -> (sign, unit)
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }

    def left(x):
        sx, ux = divmod(x, 4)
        img = np.empty(8, dtype=np.int64)
        for y in range(8):
            sy, uy = divmod(y, 4)
            s, u = table[(ux, uy)]
            img[y] = 4 * ((sx + sy + s) % 2) + u
        return img

    perms, _ = _closure([left(1), left(2)], 100)
    return GroupTable(perms, name="Q8", descriptor={"family": "q8"})


def symmetric4() -> GroupTable:
    perms, _ = _closure([np.array([1, 0, 2, 3]), np.array([1, 2, 3, 0])], 100)
    return GroupTable(perms, name="S4", descriptor={"family": "s4"})


def alternating5() -> GroupTable:
    perms, _ = _closure([np.array([1, 2, 0, 3, 4]), np.array([1, 2, 3, 4, 0])], 100)
    return GroupTable(perms, name="A5", descriptor={"family": "a5"})


def build_group(family: str, p: int | None = None, k: int | None = None,
                n: int | None = None, cap: int = DEFAULT_ELEMENT_CAP) -> GroupTable:
    """Build a group from a family descriptor (as used by the command line)."""
    family = family.lower()
    needs = {"pgl2": p, "psl2": p, "elem_abelian": p, "cyclic": n, "dihedral": n}
    if family in needs and needs[family] is None:
        raise InputRejected(f"family {family} needs {'--n' if family in ('cyclic', 'dihedral') else '--p'}")
    if n is not None and n < 1 and family in ("cyclic", "dihedral"):
        raise InputRejected("n must be positive")
    if family == "pgl2":
        return build_pgl2(gf_make(p, k or 1), cap)
    if family == "psl2":
        return build_psl2(gf_make(p, k or 1), cap)
    if family == "psl2_8_ext3":
        return build_psl2_8_ext3()
    if family == "cyclic":
        _check_cap(n, cap)
        return cyclic(n)
    if family == "elem_abelian":
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        _check_cap(p ** (k or 2), cap)
        return elementary_abelian(p, k or 2)
    if family == "dihedral":
        return dihedral(n)
    if family == "q8":
        return quaternion()
    if family == "s4":
        return symmetric4()
    if family == "a5":
        return alternating5()
    raise InputRejected(f"unknown group family {family!r}")
