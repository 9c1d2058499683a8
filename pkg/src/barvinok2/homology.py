"""Exact homology of finitely generated chain complexes over Z and fields.

Boundary matrices are sparse integer matrices (:class:`IntMatrix`).
Smith normal form runs in two phases: sparse unit-pivot elimination
(see :mod:`barvinok2._kernels`) splits off an identity block, and the
small remaining core is finished by a dense textbook reduction over
arbitrary-precision integers.  Field ranks reuse the same elimination
with a prime modulus (where every nonzero entry is a unit, so the core
is empty) or, in characteristic zero, finish the core by exact rational
Gaussian elimination.

Homology bookkeeping is the classical recipe: with boundaries
``d_k : C_k -> C_{k-1}``,

    free rank of H_k   = rank C_k - rank d_k - rank d_{k+1}
    torsion of H_k     = invariant factors of d_{k+1} exceeding 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .errors import (
    DomainError,
    InternalError,
    InvalidCharacteristic,
    NotAComplexError,
)

__all__ = [
    "IntMatrix",
    "ChainComplex",
    "HomologyProfile",
    "smith_normal_form",
    "smith_with_transform",
    "rank_over_field",
    "homology_Z",
    "homology_field",
    "euler_characteristic",
    "simplicial_chain_complex",
    "tensor_basis",
    "tensor_complexes",
]


class IntMatrix:
    """A sparse integer matrix stored as dict-of-rows {row: {col: value}}."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: dict | None = None):
        if nrows < 0 or ncols < 0:
            raise DomainError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        if rows:
            for r, row in rows.items():
                if not 0 <= r < nrows:
                    raise DomainError("row index %r out of range" % (r,))
                clean = {}
                for c, v in row.items():
                    if not 0 <= c < ncols:
                        raise DomainError("col index %r out of range" % (c,))
                    v = int(v)
                    if v:
                        clean[c] = v
                if clean:
                    self.rows[r] = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def from_dense(cls, dense) -> "IntMatrix":
        dense = [list(row) for row in dense]
        nrows = len(dense)
        ncols = len(dense[0]) if dense else 0
        rows = {
            r: {c: v for c, v in enumerate(row) if v} for r, row in enumerate(dense)
        }
        return cls(nrows, ncols, rows)

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets) -> "IntMatrix":
        rows: dict = {}
        for r, c, v in triplets:
            if v:
                acc = rows.setdefault(r, {})
                acc[c] = acc.get(c, 0) + int(v)
        return cls(nrows, ncols, rows)

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls(k, k, {i: {i: 1} for i in range(k)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, {})

    # -- accessors ----------------------------------------------------
    def get(self, r: int, c: int) -> int:
        return self.rows.get(r, {}).get(c, 0)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def triplets(self):
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def copy_rows(self) -> dict:
        return {r: dict(row) for r, row in self.rows.items()}

    def max_abs(self) -> int:
        return max(
            (abs(v) for row in self.rows.values() for v in row.values()), default=0
        )

    def shape(self):
        return (self.nrows, self.ncols)

    # -- algebra ------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.shape() == other.shape()
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(self.triplets())))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape() != other.shape():
            raise DomainError("shape mismatch in addition")
        rows = self.copy_rows()
        for r, row in other.rows.items():
            acc = rows.setdefault(r, {})
            for c, v in row.items():
                nv = acc.get(c, 0) + v
                if nv:
                    acc[c] = nv
                elif c in acc:
                    del acc[c]
        return IntMatrix(self.nrows, self.ncols, rows)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, s: int) -> "IntMatrix":
        if s == 0:
            return IntMatrix.zeros(self.nrows, self.ncols)
        return IntMatrix(
            self.nrows,
            self.ncols,
            {r: {c: s * v for c, v in row.items()} for r, row in self.rows.items()},
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DomainError("shape mismatch in product")
        rows: dict = {}
        for r, arow in self.rows.items():
            acc: dict = {}
            for k, v in arow.items():
                brow = other.rows.get(k)
                if not brow:
                    continue
                for c, w in brow.items():
                    nv = acc.get(c, 0) + v * w
                    if nv:
                        acc[c] = nv
                    elif c in acc:
                        del acc[c]
            if acc:
                rows[r] = acc
        return IntMatrix(self.nrows, other.ncols, rows)

    def transpose(self) -> "IntMatrix":
        rows: dict = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return IntMatrix(self.ncols, self.nrows, rows)

    def submatrix(self, row_ids, col_ids) -> "IntMatrix":
        """Rows/columns selected and reindexed in the given order."""
        rmap = {r: i for i, r in enumerate(row_ids)}
        cmap = {c: j for j, c in enumerate(col_ids)}
        rows: dict = {}
        for r, row in self.rows.items():
            if r not in rmap:
                continue
            acc = {cmap[c]: v for c, v in row.items() if c in cmap}
            if acc:
                rows[rmap[r]] = acc
        return IntMatrix(len(rmap), len(cmap), rows)

    def __repr__(self):
        return "IntMatrix(%d x %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz())

    # -- serialization ------------------------------------------------
    def to_csv(self) -> str:
        lines = ["# %d %d" % (self.nrows, self.ncols), "row,col,value"]
        for r, c, v in self.triplets():
            lines.append("%d,%d,%d" % (r, c, v))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "IntMatrix":
        shape = None
        triplets = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and shape is None:
                    shape = (int(parts[0]), int(parts[1]))
                continue
            if line.lower().startswith("row"):
                continue
            r, c, v = line.split(",")
            triplets.append((int(r), int(c), int(v)))
        if shape is None:
            raise DomainError("missing '# nrows ncols' header line")
        return cls.from_triplets(shape[0], shape[1], triplets)


# ---------------------------------------------------------------------------
# Smith normal form

def _dense_core_snf(core: dict, npiv_hint: int = 0) -> list:
    """Exact Smith normal form of a small dict-of-rows core matrix."""
    if not core:
        return []
    col_ids = sorted({c for row in core.values() for c in row})
    cmap = {c: j for j, c in enumerate(col_ids)}
    a = [[0] * len(col_ids) for _ in core]
    for i, r in enumerate(sorted(core)):
        for c, v in core[r].items():
            a[i][cmap[c]] = v
    return _snf_dense_list(a)


def _snf_dense_list(a: list) -> list:
    """Textbook SNF on a dense list-of-lists (consumed); returns factors."""
    m = len(a)
    n = len(a[0]) if a else 0
    factors = []
    top = 0
    while top < min(m, n):
        # locate a minimal-absolute-value nonzero pivot
        pr = pc = -1
        best = None
        for i in range(top, m):
            for j in range(top, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best):
                    best, pr, pc = abs(v), i, j
        if best is None:
            break
        a[top], a[pr] = a[pr], a[top]
        for row in a:
            row[top], row[pc] = row[pc], row[top]
        while True:
            # clear column by division; smaller remainders become the new pivot
            restart = False
            for i in range(top + 1, m):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    for j in range(top, n):
                        a[i][j] -= q * a[top][j]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        restart = True
                        break
            if restart:
                continue
            for j in range(top + 1, n):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    for row in a:
                        row[j] -= q * row[top]
                    if a[top][j]:
                        for row in a:
                            row[top], row[j] = row[j], row[top]
                        restart = True
                        break
            if restart:
                continue
            # pivot must divide every remaining entry
            done = True
            for i in range(top + 1, m):
                row = a[i]
                for j in range(top + 1, n):
                    if row[j] % a[top][top]:
                        for t in range(top, n):
                            a[top][t] += row[t]
                        done = False
                        break
                if not done:
                    break
            if done:
                break
        factors.append(abs(a[top][top]))
        top += 1
    for i, f in enumerate(factors[:-1]):
        if factors[i + 1] % f:
            raise InternalError("invariant factors fail divisibility")
    return factors


def smith_normal_form(A: IntMatrix):
    """Invariant factors d_1 | d_2 | ... of an integer matrix."""
    if A.is_zero():
        return ()
    npiv, core = _kernels.eliminate_units(A.copy_rows(), A.nrows, A.ncols, 0)
    return tuple([1] * npiv + _dense_core_snf(core))


def _rank_core_q(core: dict) -> int:
    """Rank of a small dict-of-rows core over the rationals."""
    if not core:
        return 0
    col_ids = sorted({c for row in core.values() for c in row})
    cmap = {c: j for j, c in enumerate(col_ids)}
    mat = []
    for r in sorted(core):
        row = [Fraction(0)] * len(col_ids)
        for c, v in core[r].items():
            row[cmap[c]] = Fraction(v)
        mat.append(row)
    rank = 0
    ncols = len(col_ids)
    for j in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][j]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        for i in range(rank + 1, len(mat)):
            if mat[i][j]:
                f = mat[i][j] / prow[j]
                mat[i] = [x - f * y for x, y in zip(mat[i], prow)]
        rank += 1
    return rank


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def rank_over_field(A: IntMatrix, characteristic: int = 0) -> int:
    """Rank of A over Q (characteristic 0) or Z/p (p prime)."""
    if characteristic == 0:
        if A.is_zero():
            return 0
        npiv, core = _kernels.eliminate_units(A.copy_rows(), A.nrows, A.ncols, 0)
        return npiv + _rank_core_q(core)
    if not _is_prime(characteristic):
        raise InvalidCharacteristic(
            "characteristic must be 0 or a prime, got %r" % (characteristic,)
        )
    p = characteristic
    rows = {}
    for r, row in A.rows.items():
        red = {c: v % p for c, v in row.items() if v % p}
        if red:
            rows[r] = red
    if not rows:
        return 0
    npiv, core = _kernels.eliminate_units(rows, A.nrows, A.ncols, p)
    if core:
        raise InternalError("mod-p elimination left a nonempty core")
    return npiv


def smith_with_transform(A: IntMatrix):
    """Dense SNF returning row transforms: U A V = D, with U unimodular.

    Returns ``(factors, U, Uinv)`` where ``factors`` is the full diagonal
    (including trailing zeros up to min(shape)) and ``U @ A @ V`` has
    that diagonal for some unimodular ``V`` (not returned).  Row
    operations are mirrored on U and inverted on Uinv, so
    ``U @ Uinv == I``; intended for the small quotient computations.
    """
    m, n = A.nrows, A.ncols
    a = A.to_dense()
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for row in Uinv:
            row[i], row[k] = row[k], row[i]

    def row_addmul(i, k, q):
        # row_i += q * row_k
        a[i] = [x + q * y for x, y in zip(a[i], a[k])]
        U[i] = [x + q * y for x, y in zip(U[i], U[k])]
        for row in Uinv:
            row[k] -= q * row[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    def col_swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]

    def col_addmul(j, k, q):
        for row in a:
            row[j] += q * row[k]

    def col_negate(j):
        for row in a:
            row[j] = -row[j]

    top = 0
    while top < min(m, n):
        pr = pc = -1
        best = None
        for i in range(top, m):
            for j in range(top, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best):
                    best, pr, pc = abs(v), i, j
        if best is None:
            break
        if pr != top:
            row_swap(top, pr)
        if pc != top:
            col_swap(top, pc)
        while True:
            restart = False
            for i in range(top + 1, m):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    row_addmul(i, top, -q)
                    if a[i][top]:
                        row_swap(top, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(top + 1, n):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    col_addmul(j, top, -q)
                    if a[top][j]:
                        col_swap(top, j)
                        restart = True
                        break
            if restart:
                continue
            done = True
            for i in range(top + 1, m):
                for j in range(top + 1, n):
                    if a[i][j] % a[top][top]:
                        row_addmul(top, i, 1)
                        done = False
                        break
                if not done:
                    break
            if done:
                break
        if a[top][top] < 0:
            row_negate(top)
        top += 1
    diag = [a[i][i] if i < n else 0 for i in range(min(m, n))]
    for i in range(top, min(m, n)):
        diag[i] = 0
    return diag, IntMatrix.from_dense(U), IntMatrix.from_dense(Uinv)


# ---------------------------------------------------------------------------
# chain complexes

class ChainComplex:
    """Graded free Z-modules with integer boundary maps, d o d = 0.

    ``ranks`` maps degree -> rank; ``boundaries[k]`` is the matrix of
    ``d_k : C_k -> C_{k-1}`` with shape ranks[k-1] x ranks[k].  Missing
    boundaries are zero.  The d^2 = 0 law and all shapes are checked on
    construction (NotAComplexError).
    """

    __slots__ = ("ranks", "boundaries")

    def __init__(self, ranks: dict, boundaries: dict):
        self.ranks = {int(k): int(r) for k, r in ranks.items() if r}
        if any(r < 0 for r in self.ranks.values()):
            raise NotAComplexError("ranks must be nonnegative")
        self.boundaries = {}
        for k, mat in boundaries.items():
            k = int(k)
            if mat is None or mat.is_zero():
                continue
            expected = (self.ranks.get(k - 1, 0), self.ranks.get(k, 0))
            if mat.shape() != expected:
                raise NotAComplexError(
                    "boundary %d has shape %s, expected %s"
                    % (k, mat.shape(), expected)
                )
            self.boundaries[k] = mat
        for k in self.boundaries:
            if k + 1 in self.boundaries:
                if not (self.boundaries[k] @ self.boundaries[k + 1]).is_zero():
                    raise NotAComplexError("d_%d o d_%d != 0" % (k, k + 1))

    def degrees(self):
        return sorted(self.ranks)

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def boundary(self, k: int) -> IntMatrix:
        mat = self.boundaries.get(k)
        if mat is None:
            mat = IntMatrix.zeros(self.ranks.get(k - 1, 0), self.ranks.get(k, 0))
        return mat

    def shift(self, s: int) -> "ChainComplex":
        """Degree shift; boundaries carried over unchanged."""
        return ChainComplex(
            {k + s: r for k, r in self.ranks.items()},
            {k + s: m for k, m in self.boundaries.items()},
        )

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        ranks = dict(self.ranks)
        for k, r in other.ranks.items():
            ranks[k] = ranks.get(k, 0) + r
        boundaries = {}
        for k in set(self.boundaries) | set(other.boundaries):
            a = self.boundary(k)
            b = other.boundary(k)
            rows = a.copy_rows()
            roff, coff = a.nrows, a.ncols
            for r, row in b.rows.items():
                rows[r + roff] = {c + coff: v for c, v in row.items()}
            boundaries[k] = IntMatrix(
                ranks.get(k - 1, 0), ranks.get(k, 0), rows
            )
        return ChainComplex(ranks, boundaries)

    def __repr__(self):
        degs = self.degrees()
        return "ChainComplex(%s)" % (
            ", ".join("%d:%d" % (k, self.ranks[k]) for k in degs),
        )


@dataclass(frozen=True)
class HomologyProfile:
    """Per-degree free rank and torsion invariant factors.

    Degrees with trivial homology are omitted, so two profiles are equal
    iff the homology groups agree in every degree.
    """

    groups: tuple  # sorted tuple of (degree, free, torsion-tuple)

    def __init__(self, groups):
        if isinstance(groups, dict):
            items = groups.items()
        else:
            items = [(deg, (free, tor)) for deg, free, tor in groups]
        norm = []
        for deg, (free, tor) in sorted(items):
            tor = tuple(int(t) for t in tor)
            if any(t < 2 for t in tor):
                raise DomainError("torsion coefficients must be >= 2")
            for a, b in zip(tor, tor[1:]):
                if b % a:
                    raise DomainError("torsion must form a divisibility chain")
            free = int(free)
            if free < 0:
                raise DomainError("free rank must be nonnegative")
            if free or tor:
                norm.append((int(deg), free, tor))
        object.__setattr__(self, "groups", tuple(norm))

    def free(self, k: int) -> int:
        for deg, free, _ in self.groups:
            if deg == k:
                return free
        return 0

    def torsion(self, k: int) -> tuple:
        for deg, _, tor in self.groups:
            if deg == k:
                return tor
        return ()

    def degrees(self):
        return [deg for deg, _, _ in self.groups]

    def shift(self, s: int) -> "HomologyProfile":
        return HomologyProfile(
            [(deg + s, free, tor) for deg, free, tor in self.groups]
        )

    def direct_sum(self, other: "HomologyProfile") -> "HomologyProfile":
        degs = set(self.degrees()) | set(other.degrees())
        out = []
        for k in degs:
            free = self.free(k) + other.free(k)
            tor = tuple(sorted(self.torsion(k) + other.torsion(k)))
            out.append((k, free, tor))
        return HomologyProfile(out)

    def drop_degree(self, k: int) -> "HomologyProfile":
        return HomologyProfile(
            [(deg, free, tor) for deg, free, tor in self.groups if deg != k]
        )

    def reduced_from_unreduced(self) -> "HomologyProfile":
        """Remove one Z summand in degree 0 (valid for connected spaces)."""
        if self.free(0) < 1:
            raise DomainError("no Z summand in degree 0 to remove")
        out = [
            (deg, free - 1 if deg == 0 else free, tor)
            for deg, free, tor in self.groups
        ]
        return HomologyProfile(out)

    def unreduced_from_reduced(self) -> "HomologyProfile":
        out = dict((deg, (free, tor)) for deg, free, tor in self.groups)
        free, tor = out.get(0, (0, ()))
        out[0] = (free + 1, tor)
        return HomologyProfile(out)

    def to_json(self) -> str:
        payload = {
            str(deg): {"free": free, "torsion": list(tor)}
            for deg, free, tor in self.groups
        }
        return json.dumps(payload, sort_keys=True)

    def __str__(self):
        if not self.groups:
            return "0"
        parts = []
        for deg, free, tor in self.groups:
            terms = []
            if free == 1:
                terms.append("Z")
            elif free > 1:
                terms.append("Z^%d" % free)
            terms.extend("Z/%d" % t for t in tor)
            parts.append("H_%d = %s" % (deg, " + ".join(terms)))
        return ", ".join(parts)


def homology_Z(C: ChainComplex, reduced: bool = False) -> HomologyProfile:
    """Integral homology of a chain complex.

    With ``reduced=True``: if the complex carries an augmentation (a
    degree -1 of rank 1, as produced by ``simplicial_chain_complex(...,
    augmented=True)``), degree -1 is verified trivial and dropped;
    otherwise one Z summand is removed from degree 0.
    """
    snf = {k: smith_normal_form(C.boundary(k)) for k in C.boundaries}
    groups = []
    for k in C.degrees():
        rank_in = len(snf.get(k, ()))
        rank_out = len(snf.get(k + 1, ()))
        free = C.rank(k) - rank_in - rank_out
        if free < 0:
            raise InternalError("negative free rank; boundary ranks inconsistent")
        tor = tuple(f for f in snf.get(k + 1, ()) if f > 1)
        groups.append((k, free, tor))
    profile = HomologyProfile(groups)
    if not reduced:
        return profile
    if -1 in C.ranks:
        if profile.free(-1) or profile.torsion(-1):
            raise InternalError("augmented complex has nontrivial degree -1")
        return profile.drop_degree(-1)
    return profile.reduced_from_unreduced()


def homology_field(C: ChainComplex, characteristic: int = 0) -> dict:
    """Betti numbers over Q (characteristic 0) or Z/p, by degree.

    Ranks are computed by field elimination, independently of the
    integral Smith normal form route.
    """
    if characteristic != 0 and not _is_prime(characteristic):
        raise InvalidCharacteristic(
            "characteristic must be 0 or a prime, got %r" % (characteristic,)
        )
    rk = {k: rank_over_field(C.boundary(k), characteristic) for k in C.boundaries}
    return {
        k: C.rank(k) - rk.get(k, 0) - rk.get(k + 1, 0) for k in C.degrees()
    }


def euler_characteristic(C: ChainComplex) -> int:
    return sum((-1) ** (k % 2) * r for k, r in C.ranks.items())


# ---------------------------------------------------------------------------
# builders

def simplicial_chain_complex(simplices_by_dim, augmented: bool = False) -> ChainComplex:
    """Boundary matrices of a simplicial complex given per-dimension
    sorted lists of (sorted) vertex-id tuples.

    With ``augmented=True`` a rank-1 degree -1 with the all-ones
    augmentation row is included, so homology of the result is reduced
    homology in degrees >= 0.
    """
    index = []
    for dim_list in simplices_by_dim:
        index.append({s: i for i, s in enumerate(dim_list)})
    ranks = {k: len(dim_list) for k, dim_list in enumerate(simplices_by_dim)}
    boundaries = {}
    for k in range(1, len(simplices_by_dim)):
        rows: dict = {}
        lower = index[k - 1]
        for j, simplex in enumerate(simplices_by_dim[k]):
            for t in range(len(simplex)):
                face = simplex[:t] + simplex[t + 1 :]
                try:
                    i = lower[face]
                except KeyError:
                    raise DomainError(
                        "face %s of %s missing: not a simplicial complex"
                        % (face, simplex)
                    ) from None
                rows.setdefault(i, {})[j] = 1 if t % 2 == 0 else -1
        boundaries[k] = IntMatrix(ranks[k - 1], ranks[k], rows)
    if augmented:
        ranks[-1] = 1
        if ranks.get(0):
            boundaries[0] = IntMatrix(
                1, ranks[0], {0: {j: 1 for j in range(ranks[0])}}
            )
    return ChainComplex(ranks, boundaries)


def tensor_basis(ranks1: dict, ranks2: dict, k: int):
    """Deterministic basis layout of degree k of a tensor product.

    Yields ``(i, j, r1, r2)`` with i + j = k, i ascending, then r1-major
    within the (i, j) block.  The enumeration order is the index order.
    """
    for i in sorted(ranks1):
        j = k - i
        if ranks2.get(j, 0):
            for r1 in range(ranks1[i]):
                for r2 in range(ranks2[j]):
                    yield (i, j, r1, r2)


def tensor_complexes(C1: ChainComplex, C2: ChainComplex) -> ChainComplex:
    """Tensor product with the usual sign: d(v (x) w) = dv (x) w + (-1)^i v (x) dw."""
    degrees = sorted(
        {i + j for i in C1.ranks for j in C2.ranks}
    )
    ranks = {}
    offsets = {}
    for k in degrees:
        layout = list(tensor_basis(C1.ranks, C2.ranks, k))
        ranks[k] = len(layout)
        offsets[k] = {key: idx for idx, key in enumerate(layout)}
    boundaries = {}
    for k in degrees:
        if k - 1 not in ranks:
            continue
        rows: dict = {}
        lower = offsets[k - 1]
        for (i, j, r1, r2), col in offsets[k].items():
            d1 = C1.boundaries.get(i)
            if d1 is not None:
                for rr in range(C1.rank(i - 1)):
                    v = d1.get(rr, r1)
                    if v:
                        row = lower[(i - 1, j, rr, r2)]
                        rows.setdefault(row, {})[col] = v
            d2 = C2.boundaries.get(j)
            if d2 is not None:
                sign = -1 if i % 2 else 1
                for rr in range(C2.rank(j - 1)):
                    v = d2.get(rr, r2)
                    if v:
                        row = lower[(i, j - 1, r1, rr)]
                        rows.setdefault(row, {})[col] = sign * v
        mat = IntMatrix(ranks[k - 1], ranks[k], rows)
        if not mat.is_zero():
            boundaries[k] = mat
    return ChainComplex(ranks, boundaries)
