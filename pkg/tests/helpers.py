"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the library internals:
the Smith oracle works from minor gcds, the chain enumerator walks the
poset directly, and the rank-2 generator builds matrices from explicit
tropical segments.
"""

import math
from fractions import Fraction
from itertools import combinations

from barvinok2.tree_complex import Bipartition
from barvinok2.trop import RationalMatrix, TropPoint, sweep_point


def det_exact(rows):
    """Determinant of a square int/Fraction matrix by exact elimination."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def snf_by_minor_gcds(dense):
    """Smith invariant factors from gcds of k x k minors.

    d_k = gcd of all k x k minors; the k-th invariant factor is
    d_k / d_{k-1}.  Exponentially slow, so only usable as an oracle on
    small matrices -- which is exactly the point.
    """
    nrows = len(dense)
    ncols = len(dense[0]) if nrows else 0
    factors = []
    prev = 1
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rs in combinations(range(nrows), k):
            for cs in combinations(range(ncols), k):
                sub = [[dense[r][c] for c in cs] for r in rs]
                g = math.gcd(g, int(det_exact(sub)))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return tuple(factors)


def all_bipartitions(d, n):
    """Every proper bipartition (S, T) with S < P and T < Q, both nonempty."""
    out = []
    for sk in range(1, d):
        for S in combinations(range(1, d + 1), sk):
            for tk in range(1, n):
                for T in combinations(range(1, n + 1), tk):
                    out.append(Bipartition(S, T))
    return out


def enumerate_chains(d, n):
    """All strictly increasing chains of proper bipartitions.

    Includes the empty chain.  Chains are returned as lists ordered
    bottom-up, matching the order expected by chain_to_composition.
    """
    bips = all_bipartitions(d, n)
    chains = [[]]
    stack = [[b] for b in bips]
    chains.extend([list(ch) for ch in stack])
    while stack:
        ch = stack.pop()
        top = ch[-1]
        for b in bips:
            if top != b and top.le(b):
                nch = ch + [b]
                chains.append(nch)
                stack.append(nch)
    return chains


def random_rank2_matrix(rng, d, n, spread=6):
    """Random d x n matrix whose columns all lie on one tropical segment.

    By construction the Barvinok rank is at most 2.  Column-wise offsets
    are thrown in because they do not change the projective points.
    """
    x = TropPoint((0,) + tuple(rng.randint(-spread, spread) for _ in range(d - 1)))
    y = TropPoint((0,) + tuple(rng.randint(-spread, spread) for _ in range(d - 1)))
    cols = []
    for _ in range(n):
        lam = Fraction(rng.randint(-3 * spread, 3 * spread), rng.choice((1, 1, 2, 3)))
        p = sweep_point(x, y, lam)
        off = rng.randint(-spread, spread)
        cols.append(tuple(c + off for c in p.coords))
    rows = [[cols[j][i] for j in range(n)] for i in range(d)]
    return RationalMatrix(rows)


def random_int_matrix(rng, nrows, ncols, lo=-9, hi=9, density=1.0):
    """Random dense integer matrix as a list of lists."""
    return [
        [rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(ncols)]
        for _ in range(nrows)
    ]


def simplices_from_tops(tops):
    """Downward closure of a list of top faces, grouped by dimension.

    Returns the simplices_by_dim list expected by
    simplicial_chain_complex: level k holds the sorted (k+1)-subsets.
    """
    faces = set()
    for t in tops:
        t = tuple(sorted(t))
        for k in range(1, len(t) + 1):
            faces.update(combinations(t, k))
    maxd = max(len(f) for f in faces) - 1
    out = [[] for _ in range(maxd + 1)]
    for f in sorted(faces):
        out[len(f) - 1].append(f)
    return out


# the unique 6-vertex triangulation of the projective plane (all 15
# edges of K6, ten triangles)
RP2_TOPS = [
    (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 6), (1, 5, 6),
    (2, 3, 5), (2, 3, 6), (2, 4, 6), (3, 4, 5), (4, 5, 6),
]


def drop_zeros(betti):
    """Field Betti dict without its zero entries."""
    return {k: v for k, v in betti.items() if v}
