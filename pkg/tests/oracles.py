"""Independent reference implementations used only by the tests."""

import itertools
from math import gcd


def naive_snf(a):
    """Invariant factors by the textbook algorithm.

    Move a nonzero entry to the corner, clear its row and column with
    extended-gcd (Bezout) row and column operations, repeat until the corner
    divides the rest, recurse.
    """
    A = [list(map(int, r)) for r in a]
    m = len(A)
    n = len(A[0]) if m else 0
    out = []
    top = 0
    while top < min(m, n):
        nz = [(i, j) for i in range(top, m) for j in range(top, n) if A[i][j]]
        if not nz:
            break
        i, j = nz[0]
        A[top], A[i] = A[i], A[top]
        for r in A:
            r[top], r[j] = r[j], r[top]
        while True:
            done = True
            for i in range(top + 1, m):
                if A[i][top]:
                    a_, b_ = A[top][top], A[i][top]
                    g, x, y = _bezout(a_, b_)
                    u, v = a_ // g, b_ // g
                    r1 = [x * p + y * q for p, q in zip(A[top], A[i])]
                    r2 = [-v * p + u * q for p, q in zip(A[top], A[i])]
                    A[top], A[i] = r1, r2
            for j in range(top + 1, n):
                if A[top][j]:
                    a_, b_ = A[top][top], A[top][j]
                    g, x, y = _bezout(a_, b_)
                    u, v = a_ // g, b_ // g
                    for r in A:
                        p, q = r[top], r[j]
                        r[top], r[j] = x * p + y * q, -v * p + u * q
                    done = False
            if any(A[i][top] for i in range(top + 1, m)):
                done = False
            if done:
                d = A[top][top]
                bad = next(((i, j) for i in range(top + 1, m) for j in range(top + 1, n) if A[i][j] % d), None)
                if bad is None:
                    break
                A[top] = [p + q for p, q in zip(A[top], A[bad[0]])]
        out.append(abs(A[top][top]))
        top += 1
    return out


def _bezout(a, b):
    # plain elimination when a | b, so the step never degenerates into a swap
    if b % a == 0:
        return a, 1, 0
    return _egcd(a, b)


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def determinantal_factors(a):
    """Invariant factors as ratios of gcds of k x k minors (tiny matrices only)."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, _det([[a[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        d.append(g)
    return [d[k] // d[k - 1] for k in range(1, len(d))]


def _det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(len(M)))
