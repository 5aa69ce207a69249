"""Smith normal form of sparse integer matrices.

The sparse phase eliminates unit pivots (boundary matrices are mostly ±1)
with a Markowitz-style choice of the shortest row; whatever is left without
a unit entry is handed to a dense elimination over Python integers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd

REPLAY_THRESHOLD = 24

@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (row, col) -> nonzero int

    def __post_init__(self):
        self.entries = {k: int(v) for k, v in self.entries.items() if v != 0}

    @classmethod
    def from_dense(cls, a) -> "SparseIntMatrix":
        a = [[int(x) for x in row] for row in a]
        r = len(a)
        c = len(a[0]) if r else 0
        return cls(r, c, {(i, j): v for i, row in enumerate(a) for j, v in enumerate(row) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def triples(self):
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, out)

# ---------------------------------------------------------------------------
# dense Smith normal form

def dense_snf(a, track: bool = False):
    """Invariant factors of a dense integer matrix (list of lists).

    Pivot: entry of least absolute value, ties broken by (row, col).  With
    ``track`` also returns unimodular ``U, V`` and the diagonal ``D`` with
    ``U A V = D``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [[int(x) for x in row] for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        if track:
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        if track:
            for row in V:
                row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    if track:
        return diag, U, V, A
    return diag

def _matmul_dense(X, Y):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*Y)] for row in X]

def _det(M) -> int:
    # Bareiss fraction-free elimination
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1

# ---------------------------------------------------------------------------
# sparse elimination

class _Elim:
    """Row/column adjacency for in-place sparse elimination."""

    def __init__(self, m: SparseIntMatrix, modulus: int | None = None):
        self.p = modulus
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (i, j), v in m.entries.items():
            if modulus:
                v %= modulus
                if not v:
                    continue
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, set()).add(i)

    def is_unit(self, v) -> bool:
        return v != 0 if self.p else abs(v) == 1

    def pivot(self, r: int, c: int):
        """Eliminate column c using row r, then drop row r and column c."""
        prow = self.rows.pop(r)
        pv = prow[c]
        if self.p:
            pinv = pow(pv, -1, self.p)
        for i in list(self.cols[c]):
            if i == r:
                continue
            row = self.rows[i]
            f = row[c] * pinv % self.p if self.p else row[c] // pv  # pv is a unit over Z
            for j, w in prow.items():
                v = row.get(j, 0) - f * w
                if self.p:
                    v %= self.p
                if v:
                    if j not in row:
                        self.cols[j].add(i)
                    row[j] = v
                elif j in row:
                    del row[j]
                    self.cols[j].discard(i)
        for j in prow:
            self.cols[j].discard(r)
        del self.cols[c]
        return [j for j in prow if j != c]

    def run_units(self) -> int:
        """Eliminate unit pivots, shortest column first; returns the count."""
        count = 0
        progressed = True
        while progressed:
            progressed = False
            heap = [(len(s), j) for j, s in self.cols.items() if s]
            heapq.heapify(heap)
            while heap:
                ln, c = heapq.heappop(heap)
                s = self.cols.get(c)
                if not s:
                    continue
                if ln != len(s):
                    heapq.heappush(heap, (len(s), c))
                    continue
                best = None
                for i in s:
                    if self.is_unit(self.rows[i][c]):
                        key = (len(self.rows[i]), i)
                        if best is None or key < best:
                            best = key
                if best is None:
                    continue
                # columns touched by the pivot row change, so they are queued again
                for j in self.pivot(best[1], c):
                    if self.cols.get(j):
                        heapq.heappush(heap, (len(self.cols[j]), j))
                count += 1
                progressed = True
        return count

    def remainder_dense(self):
        rows = sorted(i for i, r in self.rows.items() if r)
        cols = sorted(j for j, s in self.cols.items() if s)
        cpos = {j: k for k, j in enumerate(cols)}
        dense = [[0] * len(cols) for _ in rows]
        for a, i in enumerate(rows):
            for j, v in self.rows[i].items():
                dense[a][cpos[j]] = v
        return dense

def smith_normal_form(m: SparseIntMatrix, check: bool = True) -> tuple[list[int], int]:
    """Invariant factors ``d1 | d2 | ... | dr`` (all positive) and the rank."""
    e = _Elim(m)
    units = e.run_units()
    rest = dense_snf(e.remainder_dense())
    factors = [1] * units + _normalize(rest)
    if check and max(m.rows, m.cols) <= REPLAY_THRESHOLD:
        _replay(m, factors)
    return factors, len(factors)

def _normalize(diag: list[int]) -> list[int]:
    """Turn any nonzero diagonal into invariant factor form."""
    d = sorted(abs(x) for x in diag if x)
    # repeatedly replace (a, b) by (gcd, lcm) until the divisibility chain holds
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d

def _replay(m: SparseIntMatrix, factors: list[int]):
    dense = m.to_dense()
    diag, U, V, D = dense_snf(dense, track=True)
    if dense and dense[0]:
        if _matmul_dense(_matmul_dense(U, dense), V) != D:
            raise AssertionError("SNF transform replay failed")
        if abs(_det(U)) != 1 or abs(_det(V)) != 1:
            raise AssertionError("SNF transforms are not unimodular")
    if _normalize(diag) != factors:
        raise AssertionError(f"sparse SNF {factors} disagrees with dense replay {_normalize(diag)}")

def rank_mod_p(m: SparseIntMatrix, p: int) -> int:
    e = _Elim(m, modulus=p)
    r = e.run_units()
    if any(e.rows.values()):
        raise AssertionError("nonzero entries left over a field")
    return r

def rank_over_z(m: SparseIntMatrix) -> int:
    return smith_normal_form(m, check=False)[1]
