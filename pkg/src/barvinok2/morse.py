"""Algebraic Morse reduction of chain complexes over the integers.

Given a degreewise splitting of the basis into index sets A, B, U such
that the A-component of the boundary restricted to B is a unimodular
map f : B_k -> A_{k-1}, every U-generator u has a unique correction
beta(u) in B with d(u - beta(u)) free of A-components, and the spans of
u^ = u - beta(u) form a subcomplex with the same homology as the
original.  ``morse_reduce`` computes this reduction generically;
``standard_splitting`` and the closed forms below specialize it to the
plus part of hemispherical(D) tensor a swap-structured complex, where
the reduction collapses onto two small complexes built directly from
the structure maps p and q.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .equivariant import StructuredZ2Complex, plus_tensor_hemispherical
from .errors import DomainError, InternalError, NotInvertibleError
from .homology import ChainComplex, IntMatrix

__all__ = [
    "MorseSplitting",
    "ReducedComplex",
    "morse_reduce",
    "standard_splitting",
    "beta_closed_form",
    "reduced_boundaries",
]


class MorseSplitting:
    """Per-degree partition of basis indices into A, B, U index tuples."""

    __slots__ = ("A", "B", "U")

    def __init__(self, A: dict, B: dict, U: dict):
        self.A = {int(k): tuple(v) for k, v in A.items() if len(v)}
        self.B = {int(k): tuple(v) for k, v in B.items() if len(v)}
        self.U = {int(k): tuple(v) for k, v in U.items() if len(v)}
        for k in set(self.A) | set(self.B) | set(self.U):
            parts = (
                self.A.get(k, ()),
                self.B.get(k, ()),
                self.U.get(k, ()),
            )
            combined = [i for part in parts for i in part]
            if len(set(combined)) != len(combined):
                raise DomainError("A, B, U overlap in degree %d" % k)

    def check_partition(self, C: ChainComplex):
        for k in C.degrees():
            combined = sorted(
                self.A.get(k, ()) + self.B.get(k, ()) + self.U.get(k, ())
            )
            if combined != list(range(C.rank(k))):
                raise DomainError(
                    "splitting does not partition the basis in degree %d" % k
                )


class ReducedComplex:
    """Result of a Morse reduction: the complex on the u^ generators
    plus the audit data (original U-indices and the beta corrections in
    B-coordinates)."""

    __slots__ = ("complex", "beta", "u_indices", "b_indices")

    def __init__(self, complex: ChainComplex, beta: dict, u_indices: dict, b_indices: dict):
        self.complex = complex
        self.beta = beta
        self.u_indices = u_indices
        self.b_indices = b_indices

    def to_json(self) -> str:
        payload = {
            "ranks": {str(k): r for k, r in self.complex.ranks.items()},
            "boundaries": {
                str(k): [list(t) for t in m.triplets()]
                for k, m in self.complex.boundaries.items()
            },
            "beta": {
                str(k): [list(t) for t in m.triplets()]
                for k, m in self.beta.items()
                if not m.is_zero()
            },
            "u_indices": {str(k): list(v) for k, v in self.u_indices.items()},
            "b_indices": {str(k): list(v) for k, v in self.b_indices.items()},
        }
        return json.dumps(payload, sort_keys=True)

    def __repr__(self):
        return "ReducedComplex(%r)" % (self.complex,)


def _invert_unimodular(f: IntMatrix, degree: int) -> IntMatrix:
    """Exact inverse of an integer matrix, required to be unimodular."""
    m, n = f.shape()
    if m != n:
        raise NotInvertibleError(
            "A/B mismatch: f in degree %d has shape %d x %d" % (degree, m, n),
            degree=degree,
        )
    if n == 0:
        return IntMatrix.zeros(0, 0)
    a = [[Fraction(v) for v in row] for row in f.to_dense()]
    inv = [
        [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)
    ]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            raise NotInvertibleError(
                "f in degree %d is singular" % degree, degree=degree
            )
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        inv[col] = [x / pv for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col]:
                fac = a[i][col]
                a[i] = [x - fac * y for x, y in zip(a[i], a[col])]
                inv[i] = [x - fac * y for x, y in zip(inv[i], inv[col])]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = inv[i][j]
            if v.denominator != 1:
                raise NotInvertibleError(
                    "f in degree %d is invertible over the rationals but not "
                    "over the integers" % degree,
                    degree=degree,
                )
            out[i][j] = int(v)
    return IntMatrix.from_dense(out)


def morse_reduce(C: ChainComplex, S: MorseSplitting) -> ReducedComplex:
    """Reduce C along the splitting S.

    Raises NotInvertibleError (carrying the degree) if the A-component
    of the boundary restricted to B fails to be square unimodular in
    some degree.  The reduced boundary is the U-component of d(u^); the
    construction additionally verifies that d(u^) has no A-component
    and lies in the span of the u^ generators.
    """
    S.check_partition(C)
    degrees = C.degrees()
    beta = {}
    corr = {}  # degree -> columns of u^ in C_k coordinates
    for k in degrees:
        A_prev = S.A.get(k - 1, ())
        B_here = S.B.get(k, ())
        U_here = S.U.get(k, ())
        d = C.boundary(k)
        f = d.submatrix(A_prev, B_here)
        finv = _invert_unimodular(f, k)
        dU = d.submatrix(A_prev, U_here)
        bk = finv @ dU  # |B_k| x |U_k|
        beta[k] = bk
        # u^ columns: e_u - sum_b beta[b,u] e_b
        rows: dict = {}
        for t, u in enumerate(U_here):
            rows.setdefault(u, {})[t] = 1
        for bpos, row in bk.rows.items():
            b = B_here[bpos]
            for t, v in row.items():
                acc = rows.setdefault(b, {})
                nv = acc.get(t, 0) - v
                if nv:
                    acc[t] = nv
                elif t in acc:
                    del acc[t]
        corr[k] = IntMatrix(C.rank(k), len(U_here), rows)
    ranks = {k: len(S.U.get(k, ())) for k in degrees if S.U.get(k, ())}
    boundaries = {}
    for k in degrees:
        U_here = S.U.get(k, ())
        if not U_here or k - 1 not in corr:
            continue
        A_prev = S.A.get(k - 1, ())
        B_prev = S.B.get(k - 1, ())
        U_prev = S.U.get(k - 1, ())
        Y = C.boundary(k) @ corr[k]
        if not Y.submatrix(A_prev, range(len(U_here))).is_zero():
            raise InternalError(
                "d(u^) has a nonzero A-component in degree %d" % k
            )
        dhat = Y.submatrix(U_prev, range(len(U_here)))
        expect_B = (beta[k - 1] @ dhat).scale(-1)
        if Y.submatrix(B_prev, range(len(U_here))) != expect_B:
            raise InternalError(
                "d(u^) leaves the span of the u^ generators in degree %d" % k
            )
        if not dhat.is_zero():
            boundaries[k] = dhat
    reduced = ChainComplex(ranks, boundaries)
    return ReducedComplex(
        reduced,
        {k: beta[k] for k in beta if not beta[k].is_zero() or S.U.get(k, ())},
        {k: S.U[k] for k in S.U},
        {k: S.B[k] for k in S.B},
    )


def _check_support(S: StructuredZ2Complex, D: int):
    bad = [j for j in S.L if not 0 <= j <= D]
    if bad:
        raise DomainError(
            "structure has nonzero modules outside degrees 0..%d: %s"
            % (D, sorted(bad))
        )


def standard_splitting(D: int, S: StructuredZ2Complex) -> MorseSplitting:
    """The canonical splitting of the basis of the plus part of
    hemispherical(D) tensor the structured complex:

        a(i, j) with 0 <= i <= D-1  -> A
        b(i, j) with 1 <= i <= D    -> B
        a(D, j)                     -> U   (the top row)
        b(0, j)                     -> U   (the bottom row)

    Requires L_j = 0 outside 0 <= j <= D; without that support bound
    the u^ spans fail to close under the boundary.
    """
    _check_support(S, D)
    _, layout = plus_tensor_hemispherical(D, S)
    A: dict = {}
    B: dict = {}
    U: dict = {}
    for k, basis in layout.items():
        for idx, (kind, i, _j, _l) in enumerate(basis):
            if kind == "a":
                (U if i == D else A).setdefault(k, []).append(idx)
            else:
                (U if i == 0 else B).setdefault(k, []).append(idx)
    return MorseSplitting(A, B, U)


def _iterate_q(S: StructuredZ2Complex, k: int, w, steps: int):
    """Apply q steps times starting from a vector in L_k; returns the
    resulting coefficient tuple in L_{k-steps} (or None if it leaves
    the support)."""
    vec = list(w)
    level = k
    for _ in range(steps):
        if S.rank(level - 1) == 0:
            return None
        q = S.q_map(level)
        out = [0] * S.rank(level - 1)
        for r, row in q.rows.items():
            out[r] = sum(v * vec[c] for c, v in row.items())
        vec = out
        level -= 1
    return tuple(vec)


def beta_closed_form(S: StructuredZ2Complex, D: int, u) -> dict:
    """Closed-form correction beta(u) for the standard splitting.

    ``u`` is ("a", j, w) for the generator w a(D, j), or ("b", k, w)
    for w b(0, k), with w a coefficient tuple over the L-basis.  The
    result maps (i, j) to the coefficient tuple of the b(i, j) component
    of beta(u):

        beta(w a(D, j)) = (-1)^D w b(D, j)
        beta(w b(0, k)) = - sum_{i=1..D} q^i(w) b(i, k-i)

    so that u - beta(u) reproduces exactly what the generic reduction
    computes.
    """
    S.validate_relations()
    kind, j, w = u
    w = tuple(int(x) for x in w)
    if kind == "a":
        if len(w) != S.rank(j):
            raise DomainError("coefficient vector has wrong length")
        if D == 0:
            return {}  # no B-generators at all; u is already reduced
        sign = -1 if D % 2 else 1
        vec = tuple(sign * x for x in w)
        return {(D, j): vec} if any(vec) else {}
    if kind == "b":
        k = j
        if len(w) != S.rank(k):
            raise DomainError("coefficient vector has wrong length")
        out = {}
        for i in range(1, D + 1):
            vec = _iterate_q(S, k, w, i)
            if vec is None or k - i < 0:
                break
            vec = tuple(-x for x in vec)
            if any(vec):
                out[(i, k - i)] = vec
        return out
    raise DomainError("u must be an ('a', j, w) or ('b', k, w) generator")


def reduced_boundaries(S: StructuredZ2Complex, D: int):
    """The two complexes the standard reduction collapses onto.

    Returns ``(upper, lower)``:

    * ``upper`` lives on the a(D, j) corrections in degrees D + j with
      boundary (-1)^D (p + (-1)^(D+1) q) — for odd D a sign-flipped
      copy of p + q, for even D the map p - q;
    * ``lower`` lives on the b(0, j) corrections in degrees j with
      boundary p + q.

    Their direct sum has the homology of the plus part of
    hemispherical(D) tensor the structured complex.
    """
    _check_support(S, D)
    S.validate_relations()
    sgn_outer = -1 if D % 2 else 1
    sgn_inner = 1 if D % 2 else -1
    upper_ranks = {D + j: r for j, r in S.L.items()}
    upper_bnd = {}
    lower_ranks = dict(S.L)
    lower_bnd = {}
    for j in S.degrees():
        if S.rank(j - 1) == 0 or j < 1:
            continue
        p = S.p_map(j)
        q = S.q_map(j)
        upper = (p + q.scale(sgn_inner)).scale(sgn_outer)
        if not upper.is_zero():
            upper_bnd[D + j] = upper
        lower = p + q
        if not lower.is_zero():
            lower_bnd[j] = lower
    return (
        ChainComplex(upper_ranks, upper_bnd),
        ChainComplex(lower_ranks, lower_bnd),
    )
