"""Chain complexes with a Z/2 action: involutions, quotient complexes,
tensor products, and sphere models.

The involution ``iota`` acts degreewise, squares to the identity, and
commutes with the boundary.  The quotient ("plus part") identifies each
chain with its image under the involution; over the integers it is
computed as the coinvariant quotient by the relation submodule spanned
by ``x - iota(x)``, with an integer basis extracted from the Smith normal
form of the relation matrix.  The "minus part" quotients by
``x + iota(x)`` instead.

A recurring special structure: modules of the form W_j = L_j x L_j with
the swap involution and boundary ``(w0, w1) -> (p(w0) + q(w1), p(w1) +
q(w0))`` for anticommuting maps p, q with ``p^2 + q^2 = 0``.  The
hemispherical sphere model is the rank-one instance.
"""

from __future__ import annotations

import json

from .errors import (
    DomainError,
    InternalError,
    InvalidCharacteristic,
    NotAComplexError,
    RelationError,
)
from .homology import (
    ChainComplex,
    IntMatrix,
    homology_field,
    smith_with_transform,
    tensor_basis,
    tensor_complexes,
)

__all__ = [
    "Z2ChainComplex",
    "StructuredZ2Complex",
    "hemispherical",
    "hemispherical_structured",
    "tensor",
    "plus_part",
    "minus_part",
    "structured_to_z2",
    "plus_tensor_hemispherical",
    "split_decomposition_check",
]


class Z2ChainComplex:
    """A chain complex with a degreewise involution.

    ``involution[k]`` is a square integer matrix of size ``ranks[k]``;
    construction checks that it squares to the identity and commutes
    with the boundary in every degree.
    """

    __slots__ = ("base", "involution")

    def __init__(self, base: ChainComplex, involution: dict):
        self.base = base
        self.involution = {}
        for k in base.degrees():
            iota = involution.get(k)
            if iota is None:
                raise NotAComplexError("missing involution in degree %d" % k)
            r = base.rank(k)
            if iota.shape() != (r, r):
                raise NotAComplexError(
                    "involution in degree %d has shape %s, expected (%d, %d)"
                    % (k, iota.shape(), r, r)
                )
            if (iota @ iota) != IntMatrix.identity(r):
                raise NotAComplexError(
                    "involution in degree %d does not square to identity" % k
                )
            self.involution[k] = iota
        for k in base.boundaries:
            d = base.boundary(k)
            up = self.involution.get(k)
            down = self.involution.get(k - 1)
            if up is None or down is None:
                continue
            if (down @ d) != (d @ up):
                raise NotAComplexError(
                    "involution does not commute with the boundary in degree %d" % k
                )

    def iota(self, k: int) -> IntMatrix:
        iota = self.involution.get(k)
        if iota is None:
            r = self.base.rank(k)
            iota = IntMatrix.identity(r)
        return iota

    def __repr__(self):
        return "Z2ChainComplex(%r)" % (self.base,)

    def to_json(self) -> str:
        payload = {
            "ranks": {str(k): r for k, r in self.base.ranks.items()},
            "boundaries": {
                str(k): [list(t) for t in m.triplets()]
                for k, m in self.base.boundaries.items()
            },
            "involutions": {
                str(k): [list(t) for t in m.triplets()]
                for k, m in self.involution.items()
            },
        }
        return json.dumps(payload, sort_keys=True)


def hemispherical(D: int) -> Z2ChainComplex:
    """Cellular chain complex of the D-sphere with two cells per
    dimension 0..D, upper and lower hemispheres.

    Basis order per degree: (sigma_i^+, sigma_i^-).  Boundary:
    d sigma_i^e = sigma_{i-1}^e + (-1)^i sigma_{i-1}^{-e}; the
    involution swaps the two hemispheres.
    """
    if D < 0:
        raise DomainError("sphere dimension must be nonnegative")
    ranks = {i: 2 for i in range(D + 1)}
    boundaries = {}
    for i in range(1, D + 1):
        s = -1 if i % 2 else 1
        boundaries[i] = IntMatrix.from_dense([[1, s], [s, 1]])
    swap = IntMatrix.from_dense([[0, 1], [1, 0]])
    return Z2ChainComplex(
        ChainComplex(ranks, boundaries), {i: swap for i in range(D + 1)}
    )


def tensor(V: Z2ChainComplex, W: Z2ChainComplex) -> Z2ChainComplex:
    """Tensor product with diagonal involution iota(v (x) w) = iota(v) (x) iota(w)."""
    base = tensor_complexes(V.base, W.base)
    inv = {}
    for k in base.degrees():
        layout = list(tensor_basis(V.base.ranks, W.base.ranks, k))
        pos = {key: idx for idx, key in enumerate(layout)}
        rows: dict = {}
        for (i, j, r1, r2), col in pos.items():
            iv = V.iota(i)
            iw = W.iota(j)
            for s1 in range(V.base.rank(i)):
                a = iv.get(s1, r1)
                if not a:
                    continue
                for s2 in range(W.base.rank(j)):
                    b = iw.get(s2, r2)
                    if b:
                        rows.setdefault(pos[(i, j, s1, s2)], {})[col] = a * b
        inv[k] = IntMatrix(base.rank(k), base.rank(k), rows)
    return Z2ChainComplex(base, inv)


def _quotient_part(C: Z2ChainComplex, sign: int) -> ChainComplex:
    """Quotient of the base by the submodule spanned by x - sign*iota(x).

    Per degree the relation matrix R = I - sign*iota is put in Smith
    normal form U R V = D; coordinates with invariant factor 1 are
    killed and the remaining rows of U give the quotient basis.  Any
    invariant factor > 1 would make the quotient non-free, which the
    involutions in scope (free permutation actions on cells) never
    produce; such input is rejected.
    """
    proj = {}
    sect = {}
    ranks = {}
    for k in C.base.degrees():
        r = C.base.rank(k)
        R = IntMatrix.identity(r) - C.iota(k).scale(sign)
        diag, U, Uinv = smith_with_transform(R)
        free_rows = []
        for t in range(r):
            d = diag[t] if t < len(diag) else 0
            if d == 0:
                free_rows.append(t)
            elif d != 1:
                raise RelationError(
                    "quotient in degree %d is not free (invariant factor %d)"
                    % (k, d)
                )
        ranks[k] = len(free_rows)
        all_cols = list(range(r))
        proj[k] = U.submatrix(free_rows, all_cols)
        sect[k] = Uinv.submatrix(all_cols, free_rows)
    boundaries = {}
    for k in C.base.boundaries:
        if k not in proj or (k - 1) not in proj:
            continue
        boundaries[k] = proj[k - 1] @ C.base.boundary(k) @ sect[k]
    return ChainComplex(ranks, boundaries)


def plus_part(C: Z2ChainComplex) -> ChainComplex:
    """Coinvariant quotient identifying x with iota(x)."""
    return _quotient_part(C, 1)


def minus_part(C: Z2ChainComplex) -> ChainComplex:
    """Quotient identifying x with -iota(x)."""
    return _quotient_part(C, -1)


class StructuredZ2Complex:
    """Swap-structured data: free modules L_j and maps p_j, q_j : L_j -> L_{j-1}.

    The associated Z/2 complex has W_j = L_j x L_j with the swap
    involution and boundary (w0, w1) -> (p(w0) + q(w1), p(w1) + q(w0)).
    The boundary squares to zero exactly when p^2 + q^2 = 0 and
    pq + qp = 0 as compositions across degrees; ``validate_relations``
    checks this (RelationError) and every consumer calls it.
    """

    __slots__ = ("L", "p", "q")

    def __init__(self, L: dict, p: dict, q: dict):
        self.L = {int(j): int(r) for j, r in L.items() if r}
        if any(r < 0 for r in self.L.values()):
            raise DomainError("ranks must be nonnegative")
        self.p = {}
        self.q = {}
        for name, maps, store in (("p", p, self.p), ("q", q, self.q)):
            for j, mat in maps.items():
                j = int(j)
                if mat is None or mat.is_zero():
                    continue
                expected = (self.L.get(j - 1, 0), self.L.get(j, 0))
                if mat.shape() != expected:
                    raise DomainError(
                        "%s_%d has shape %s, expected %s"
                        % (name, j, mat.shape(), expected)
                    )
                store[j] = mat

    def degrees(self):
        return sorted(self.L)

    def rank(self, j: int) -> int:
        return self.L.get(j, 0)

    def p_map(self, j: int) -> IntMatrix:
        mat = self.p.get(j)
        if mat is None:
            mat = IntMatrix.zeros(self.rank(j - 1), self.rank(j))
        return mat

    def q_map(self, j: int) -> IntMatrix:
        mat = self.q.get(j)
        if mat is None:
            mat = IntMatrix.zeros(self.rank(j - 1), self.rank(j))
        return mat

    def validate_relations(self):
        for j in self.degrees():
            if self.rank(j - 2) == 0 or self.rank(j) == 0:
                continue
            pp = self.p_map(j - 1) @ self.p_map(j)
            qq = self.q_map(j - 1) @ self.q_map(j)
            if not (pp + qq).is_zero():
                raise RelationError("p^2 + q^2 != 0 at degree %d" % j)
            pq = self.p_map(j - 1) @ self.q_map(j)
            qp = self.q_map(j - 1) @ self.p_map(j)
            if not (pq + qp).is_zero():
                raise RelationError("pq + qp != 0 at degree %d" % j)

    def max_degree(self) -> int:
        return max(self.L, default=-1)

    def __repr__(self):
        return "StructuredZ2Complex(%s)" % (
            ", ".join("%d:%d" % (j, self.L[j]) for j in self.degrees()),
        )


def hemispherical_structured(N: int) -> StructuredZ2Complex:
    """The hemispherical N-sphere in swap-structured form: L_j = Z for
    0 <= j <= N, p_j = (1), q_j = ((-1)^j)."""
    if N < 0:
        raise DomainError("sphere dimension must be nonnegative")
    L = {j: 1 for j in range(N + 1)}
    p = {j: IntMatrix.from_dense([[1]]) for j in range(1, N + 1)}
    q = {
        j: IntMatrix.from_dense([[-1 if j % 2 else 1]]) for j in range(1, N + 1)
    }
    return StructuredZ2Complex(L, p, q)


def structured_to_z2(S: StructuredZ2Complex) -> Z2ChainComplex:
    """Expand swap-structured data to an explicit Z/2 chain complex.

    Basis order in degree j: the (w, 0) copy of the L_j basis first,
    then the (0, w) copy; the boundary in block form is [[p, q], [q, p]]
    and the involution swaps the two blocks.
    """
    S.validate_relations()
    ranks = {j: 2 * r for j, r in S.L.items()}
    boundaries = {}
    involution = {}
    for j in S.degrees():
        r = S.rank(j)
        rows: dict = {}
        for a in range(r):
            rows[a] = {r + a: 1}
            rows[r + a] = {a: 1}
        involution[j] = IntMatrix(2 * r, 2 * r, rows)
        if S.rank(j - 1) == 0:
            continue
        rp = S.rank(j - 1)
        p = S.p_map(j)
        q = S.q_map(j)
        rows = {}
        for i in range(rp):
            row = {}
            for c, v in p.rows.get(i, {}).items():
                row[c] = v
            for c, v in q.rows.get(i, {}).items():
                row[r + c] = row.get(r + c, 0) + v
            if row:
                rows[i] = {c: v for c, v in row.items() if v}
        for i in range(rp):
            row = {}
            for c, v in q.rows.get(i, {}).items():
                row[c] = v
            for c, v in p.rows.get(i, {}).items():
                row[r + c] = row.get(r + c, 0) + v
            if row:
                rows[rp + i] = {c: v for c, v in row.items() if v}
        boundaries[j] = IntMatrix(2 * rp, 2 * r, rows)
    return Z2ChainComplex(ChainComplex(ranks, boundaries), involution)


def plus_tensor_hemispherical(D: int, S: StructuredZ2Complex):
    """Plus part of hemispherical(D) tensor the swap-structured complex,
    written directly in its standard basis.

    Generators in degree k: a(i, j, l) and b(i, j, l) with i + j = k,
    0 <= i <= D, l running over the L_j basis; a(i, j, l) is the class
    of sigma_i^+ (x) (e_l, 0) and b(i, j, l) of sigma_i^+ (x) (0, e_l).
    Boundaries:

        d(w a_ij) = w a_{i-1,j} + (-1)^i w b_{i-1,j}
                    + (-1)^i (p(w) a_{i,j-1} + q(w) b_{i,j-1})
        d(w b_ij) = (-1)^i w a_{i-1,j} + w b_{i-1,j}
                    + (-1)^i (q(w) a_{i,j-1} + p(w) b_{i,j-1})

    Returns ``(complex, layout)`` where ``layout[k]`` lists the degree-k
    basis as tuples ('a'|'b', i, j, l), i ascending, a before b per
    (i, j), l ascending.  The layout is the column/row index order.
    """
    if D < 0:
        raise DomainError("sphere dimension must be nonnegative")
    S.validate_relations()
    layout = {}
    pos = {}
    degrees = set()
    for j in S.degrees():
        for i in range(D + 1):
            degrees.add(i + j)
    for k in sorted(degrees):
        basis = []
        for i in range(min(D, k) + 1):
            j = k - i
            for kind in ("a", "b"):
                for l in range(S.rank(j)):
                    basis.append((kind, i, j, l))
        layout[k] = tuple(basis)
        pos[k] = {g: idx for idx, g in enumerate(basis)}
    ranks = {k: len(layout[k]) for k in layout}
    boundaries = {}
    for k in sorted(degrees):
        if k - 1 not in pos:
            continue
        lower = pos[k - 1]
        rows: dict = {}

        def put(row_gen, col, v):
            idx = lower.get(row_gen)
            if idx is None:
                raise InternalError("boundary target %s missing" % (row_gen,))
            acc = rows.setdefault(idx, {})
            nv = acc.get(col, 0) + v
            if nv:
                acc[col] = nv
            else:
                del acc[col]

        for (kind, i, j, l), col in pos[k].items():
            s = -1 if i % 2 else 1
            if i >= 1:
                if kind == "a":
                    put(("a", i - 1, j, l), col, 1)
                    put(("b", i - 1, j, l), col, s)
                else:
                    put(("a", i - 1, j, l), col, s)
                    put(("b", i - 1, j, l), col, 1)
            if S.rank(j - 1):
                p = S.p_map(j)
                q = S.q_map(j)
                first, second = ("a", "b") if kind == "a" else ("b", "a")
                for m, v in ((m, row.get(l)) for m, row in p.rows.items()):
                    if v:
                        put((first, i, j - 1, m), col, s * v)
                for m, v in ((m, row.get(l)) for m, row in q.rows.items()):
                    if v:
                        put((second, i, j - 1, m), col, s * v)
        boundaries[k] = IntMatrix(ranks[k - 1], ranks[k], rows)
    return ChainComplex(ranks, boundaries), layout


def split_decomposition_check(
    V: Z2ChainComplex, W: Z2ChainComplex, characteristic: int = 0
) -> bool:
    """Over a field with 2 invertible, the plus part of a tensor product
    splits as (V+ (x) W+) + (V- (x) W-); check rank and Betti-number
    additivity degree by degree.
    """
    if characteristic == 2:
        raise InvalidCharacteristic(
            "the splitting requires 2 to be invertible; characteristic 2 rejected"
        )
    total = plus_part(tensor(V, W))
    pp = tensor_complexes(plus_part(V), plus_part(W))
    mm = tensor_complexes(minus_part(V), minus_part(W))
    degrees = set(total.degrees()) | set(pp.degrees()) | set(mm.degrees())
    for k in degrees:
        if total.rank(k) != pp.rank(k) + mm.rank(k):
            return False
    bt = homology_field(total, characteristic)
    bp = homology_field(pp, characteristic)
    bm = homology_field(mm, characteristic)
    for k in degrees:
        if bt.get(k, 0) != bp.get(k, 0) + bm.get(k, 0):
            return False
    return True
