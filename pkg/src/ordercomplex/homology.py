"""Order complexes, reduced integral homology, and elementary collapses."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import SimplexLimit
from .lattice import Lattice, Poset, interval
from .snf import SparseIntMatrix, rank_mod_p, smith_normal_form

DEFAULT_SIMPLEX_CAP = 5_000_000
CHECK_PRIMES = (2_147_483_647, 1_000_003)


@dataclass
class SimplicialComplexData:
    """A simplicial complex on ``vertices`` (labels).

    ``simplices[d]`` lists the d-simplices as ascending tuples of vertex
    positions, sorted lexicographically.
    """

    vertices: tuple
    simplices: list

    def __post_init__(self):
        self.simplices = [sorted(set(map(tuple, s))) for s in self.simplices]
        while self.simplices and not self.simplices[-1]:
            self.simplices.pop()
        self.index = [{s: i for i, s in enumerate(layer)} for layer in self.simplices]

    @classmethod
    def from_faces(cls, vertices, faces) -> "SimplicialComplexData":
        """Downward closure of a collection of faces (vertex positions)."""
        layers: list[set] = []
        for f in faces:
            f = tuple(sorted(f))
            d = len(f) - 1
            while len(layers) <= d:
                layers.append(set())
            layers[d].add(f)
        for d in range(len(layers) - 1, 0, -1):
            for s in layers[d]:
                for i in range(d + 1):
                    layers[d - 1].add(s[:i] + s[i + 1:])
        return cls(tuple(vertices), [sorted(x) for x in layers])

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> list[int]:
        return [len(x) for x in self.simplices]

    def size(self) -> int:
        return sum(self.counts())

    def euler_characteristic(self) -> int:
        """Non-reduced Euler characteristic (0 for the empty complex)."""
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def is_point(self) -> bool:
        return self.counts() == [1]

    def all_simplices(self):
        for layer in self.simplices:
            yield from layer

    def labelled(self, s) -> list:
        return [self.vertices[v] for v in s]

    def to_json(self) -> dict:
        return {
            "vertices": [_jsonable(v) for v in self.vertices],
            "dims": self.counts(),
            "simplices": [[_jsonable(v) for v in self.labelled(s)] for s in self.all_simplices()],
        }


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def count_chains(p: Poset) -> list[int]:
    """Number of chains of each size (1, 2, ...) by dynamic programming."""
    less = p.less
    n = len(p)
    preds = [np.flatnonzero(less[:, j]).tolist() for j in range(n)]
    cur = [1] * n
    out = []
    while any(cur):
        out.append(sum(cur))
        cur = [sum(cur[i] for i in preds[j]) for j in range(n)]
    return out


def order_complex(p: Poset, simplex_cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplexData:
    """All chains of ``p``; vertex positions follow the poset's linear extension."""
    total = sum(count_chains(p))
    if total > simplex_cap:
        raise SimplexLimit(f"order complex has {total} simplices (cap {simplex_cap})")
    n = len(p)
    succ = [np.flatnonzero(p.less[i]).tolist() for i in range(n)]
    layers: list[list] = []

    def extend(chain):
        d = len(chain) - 1
        while len(layers) <= d:
            layers.append([])
        layers[d].append(tuple(chain))
        for j in succ[chain[-1]]:
            chain.append(j)
            extend(chain)
            chain.pop()

    for i in range(n):
        extend([i])
    return SimplicialComplexData(p.labels, layers)


def boundary_matrices(c: SimplicialComplexData) -> list[SparseIntMatrix]:
    """``[∂_1, ..., ∂_dim]``; ∂_d has the (d-1)-simplices as rows."""
    out = []
    for d in range(1, len(c.simplices)):
        lower = c.index[d - 1]
        entries = {}
        for j, s in enumerate(c.simplices[d]):
            for i in range(d + 1):
                entries[(lower[s[:i] + s[i + 1:]], j)] = -1 if i % 2 else 1
        out.append(SparseIntMatrix(len(c.simplices[d - 1]), len(c.simplices[d]), entries))
    return out


def augmentation(c: SimplicialComplexData) -> SparseIntMatrix:
    n0 = len(c.simplices[0]) if c.simplices else 0
    return SparseIntMatrix(1, n0, {(0, j): 1 for j in range(n0)})


@dataclass
class HomologyResult:
    """Betti numbers and torsion by dimension, starting at dimension -1 if reduced."""

    betti: dict
    torsion: dict
    reduced: bool = True

    def is_acyclic(self) -> bool:
        return not any(self.betti.values()) and not any(self.torsion.values())

    def nonzero(self) -> dict:
        return {d: b for d, b in self.betti.items() if b}

    def euler(self) -> int:
        return sum((-1) ** d * b for d, b in self.betti.items())

    def betti_list(self, top: int | None = None) -> list[int]:
        """Betti numbers in dimensions 0, 1, ..., top."""
        top = max([0] + list(self.betti)) if top is None else top
        return [self.betti.get(d, 0) for d in range(top + 1)]

    def to_json(self) -> dict:
        return {
            "reduced": self.reduced,
            "betti": {str(d): b for d, b in sorted(self.betti.items())},
            "torsion": {str(d): t for d, t in sorted(self.torsion.items()) if t},
        }


def homology_of(c: SimplicialComplexData, reduced: bool = True, check_primes: bool = True) -> HomologyResult:
    """Homology straight from the boundary matrices (no collapsing)."""
    mats = boundary_matrices(c)
    if reduced:
        mats = [augmentation(c)] + mats
        dims = list(range(-1, len(c.simplices)))
        sizes = [1] + c.counts()
    else:
        dims = list(range(len(c.simplices)))
        sizes = c.counts()
    # mats[k] maps chains in dims[k+1] to dims[k]
    ranks, factors = [], []
    for m in mats:
        f, r = smith_normal_form(m)
        ranks.append(r)
        factors.append([x for x in f if x > 1])
        if check_primes:
            for p in CHECK_PRIMES:
                rp = rank_mod_p(m, p)
                if r - rp != sum(1 for x in f if x % p == 0):
                    raise AssertionError(f"rank mod {p} inconsistent with integer invariant factors")
    betti, torsion = {}, {}
    for k, d in enumerate(dims):
        rk_out = ranks[k - 1] if k >= 1 else 0  # boundary leaving dimension d
        rk_in = ranks[k] if k < len(ranks) else 0  # boundary arriving at dimension d
        betti[d] = sizes[k] - rk_out - rk_in
        torsion[d] = factors[k] if k < len(factors) else []
    if not c.simplices and reduced:
        betti = {-1: 1}
        torsion = {-1: []}
    res = HomologyResult(betti, torsion, reduced)
    expect = c.euler_characteristic() - (1 if reduced else 0)
    if res.euler() != expect:
        raise AssertionError("Euler characteristic does not match Betti numbers")
    return res


def reduced_homology(c: SimplicialComplexData, collapse_first: bool = True,
                     restarts: int = 0, seed: int = 0) -> HomologyResult:
    """Reduced integral homology; by default computed on a collapsed complex."""
    if collapse_first and c.simplices:
        _, c = elementary_collapse(c, restarts=restarts, seed=seed)
    return homology_of(c, reduced=True)


# ---------------------------------------------------------------------------
# elementary collapses


@dataclass
class CollapseCertificate:
    """Removal pairs (free face, its unique coface), in order, and the result."""

    pairs: list = field(default_factory=list)
    terminal_counts: list = field(default_factory=list)
    seed: int | None = None

    @property
    def contractible(self) -> bool:
        return self.terminal_counts == [1]

    def to_json(self, c: SimplicialComplexData | None = None) -> dict:
        def lab(s):
            return [_jsonable(v) for v in (c.labelled(s) if c is not None else s)]

        return {
            "pairs": [[lab(f), lab(t)] for f, t in self.pairs],
            "terminal": {"dims": self.terminal_counts},
            "seed": self.seed,
        }


def _collapse_once(c: SimplicialComplexData, key):
    alive = {s: True for s in c.all_simplices()}
    ncof = {s: 0 for s in alive}
    for s in alive:
        if len(s) > 1:
            for i in range(len(s)):
                ncof[s[:i] + s[i + 1:]] += 1
    cofacets: dict = {}
    for d in range(1, len(c.simplices)):
        for t in c.simplices[d]:
            for i in range(d + 1):
                cofacets.setdefault(t[:i] + t[i + 1:], []).append(t)
    heap = [(key(s), s) for s, k in ncof.items() if k == 1]
    heapq.heapify(heap)
    pairs = []
    while heap:
        _, s = heapq.heappop(heap)
        if not alive[s] or ncof[s] != 1:
            continue
        t = next(u for u in cofacets[s] if alive[u])
        alive[s] = alive[t] = False
        pairs.append((s, t))
        for face in (t, s):
            if len(face) > 1:
                for i in range(len(face)):
                    f = face[:i] + face[i + 1:]
                    if alive[f]:
                        ncof[f] -= 1
                        if ncof[f] == 1:
                            heapq.heappush(heap, (key(f), f))
    terminal = [[s for s in layer if alive[s]] for layer in c.simplices]
    return pairs, SimplicialComplexData(c.vertices, terminal)


def elementary_collapse(c: SimplicialComplexData, restarts: int = 8, seed: int = 0):
    """Greedy free-face collapsing.

    The first run scans free faces lexicographically; if it does not reach a
    point, ``restarts`` further runs use seeded random priorities.  The
    smallest terminal complex wins, ties going to the earliest run.
    Returns ``(certificate, terminal complex)``.
    """
    pairs, term = _collapse_once(c, key=lambda s: s)
    best = (term.size(), 0, pairs, term, None)
    if not term.is_point():
        for r in range(restarts):
            rng = np.random.default_rng([seed, r])
            prio = {s: float(x) for s, x in zip(c.all_simplices(), rng.random(c.size()))}
            pairs, term = _collapse_once(c, key=prio.__getitem__)
            if term.size() < best[0]:
                best = (term.size(), r + 1, pairs, term, seed)
            if term.is_point():
                break
    _, run, pairs, term, used_seed = best
    cert = CollapseCertificate(pairs, term.counts(), None if run == 0 else [used_seed, run - 1])
    return cert, term


def replay_collapse(c: SimplicialComplexData, cert: CollapseCertificate) -> SimplicialComplexData:
    """Apply a certificate to ``c``, checking every step; returns the terminal complex."""
    alive = set(c.all_simplices())
    cofaces: dict = {}
    for s in alive:
        for i in range(len(s)):
            if len(s) > 1:
                cofaces.setdefault(s[:i] + s[i + 1:], set()).add(s)
    for f, t in cert.pairs:
        f, t = tuple(f), tuple(t)
        if f not in alive or t not in alive:
            raise ValueError(f"step {f} -> {t} uses a removed simplex")
        up = [u for u in cofaces.get(f, ()) if u in alive]
        if up != [t]:
            raise ValueError(f"{f} is not a free face of {t}")
        if any(u in alive for u in cofaces.get(t, ())):
            raise ValueError(f"{t} is not maximal")
        alive.discard(f)
        alive.discard(t)
    layers = [[s for s in layer if s in alive] for layer in c.simplices]
    term = SimplicialComplexData(c.vertices, layers)
    if term.counts() != cert.terminal_counts:
        raise ValueError("replay does not reach the recorded terminal complex")
    return term


# ---------------------------------------------------------------------------
# Björner–Walker wedge model


def join_suspension_summand(lower: Poset, upper: Poset, tag) -> list[tuple]:
    """Faces of Δ(lower) * Δ(upper) * S^0 with vertex labels tagged by ``tag``.

    The two suspension points are ``("N", tag)`` and ``("S", tag)``.
    """
    def chains(p: Poset):
        out = [()]
        succ = [np.flatnonzero(p.less[i]).tolist() for i in range(len(p))]

        def ext(ch):
            out.append(tuple(ch))
            for j in succ[ch[-1]]:
                ext(ch + [j])

        for i in range(len(p)):
            ext([i])
        return out

    lo = [tuple(("lo", tag, int(lower.labels[i])) for i in ch) for ch in chains(lower)]
    up = [tuple(("up", tag, int(upper.labels[i])) for i in ch) for ch in chains(upper)]
    faces = []
    for a in lo:
        for b in up:
            for s in ((), (("N", tag),), (("S", tag),)):
                f = a + b + s
                if f:
                    faces.append(f)
    return faces


def wedge_model_complex(w, l: Lattice) -> SimplicialComplexData:
    """Explicit model of ⋁_x Σ(Δ(0̂,x) * Δ(x,1̂)); every north pole is the shared basepoint."""
    base = ("*",)
    faces = [(base,)]
    for x in w.complements:
        lower = interval(l, l.bottom, x, open=True)
        upper = interval(l, x, l.top, open=True)
        for f in join_suspension_summand(lower, upper, x):
            faces.append(tuple(base if v == ("N", x) else v for v in f))
    labels = sorted({v for f in faces for v in f}, key=_vertex_key)
    pos = {v: i for i, v in enumerate(labels)}
    return SimplicialComplexData.from_faces(
        tuple("/".join(map(str, v)) for v in labels),
        [tuple(pos[v] for v in f) for f in faces],
    )


def summand_complex(l: Lattice, x: int, upper: Poset | None = None) -> SimplicialComplexData:
    """The single summand Σ(Δ(0̂,x) * Δ(x,1̂)) (optionally with a replaced upper poset)."""
    lower = interval(l, l.bottom, x, open=True)
    upper = interval(l, x, l.top, open=True) if upper is None else upper
    faces = join_suspension_summand(lower, upper, x)
    labels = sorted({v for f in faces for v in f}, key=_vertex_key)
    pos = {v: i for i, v in enumerate(labels)}
    return SimplicialComplexData.from_faces(
        tuple("/".join(map(str, v)) for v in labels),
        [tuple(pos[v] for v in f) for f in faces],
    )


def _vertex_key(v):
    rank = {"*": 0, "lo": 1, "up": 2, "N": 3, "S": 4}[v[0]]
    return (rank, v[1:]) if v[0] in ("lo", "up") else (rank, (v[1],) if len(v) > 1 else ())
