"""Caterpillar trees as balanced compositions and the quotient complex.

Vocabulary: ``P = {p_1..p_d}`` labels the rows of a matrix class and
``Q = {q_1..q_n}`` its columns.  A :class:`Bipartition` ``(S, T)`` with
``{} != S != P`` and ``{} != T != Q`` splits ``P u Q`` into ``S u T``
versus the rest; bipartitions are ordered by componentwise inclusion.
Chains in that order biject with *balanced compositions* -- ordered set
partitions of ``P u Q`` whose first and last blocks each meet both P and
Q.  A balanced composition encodes a caterpillar tree: block ``k`` is
the set of leaves hanging off the ``k``-th internal vertex of the spine.

Reading the spine from the other end reverses the composition and
complements every bipartition simultaneously; this free involution is
the one quotiented out when building the simplicial model of the space
of rank-two classes.  :func:`build_unquotiented` returns the full order
complex (topologically a product of two spheres), :func:`build_complex`
its quotient by the involution.

:func:`tree_from_matrix` realizes the geometric construction: the
columns of a rank-two canonical matrix lie on one tropical segment;
columns and kinks of the segment become internal vertices, each row
leaf ``p_i`` attaches where coordinate ``i`` is maximized (nearest the
origin), each column leaf ``q_j`` at its column's vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .canonical import CanonicalMatrix
from .errors import (
    DomainError,
    InternalError,
    NotAChainError,
    RankError,
    ResourceError,
)
from .trop import (
    TropPoint,
    barvinok_rank_le2,
    segment_contains,
    sweep_parameter,
    sweep_point,
    trop_segment,
)

__all__ = [
    "DEFAULT_SIMPLEX_CAP",
    "Leaf",
    "Bipartition",
    "BalancedComposition",
    "QuotientComplex",
    "chain_to_composition",
    "composition_to_chain",
    "canonical_orbit",
    "tree_from_matrix",
    "build_complex",
    "build_unquotiented",
    "composition_counts",
    "chain_counts",
]

DEFAULT_SIMPLEX_CAP = 5_000_000


@dataclass(frozen=True)
class Leaf:
    """A leaf label: row leaf ``p_i`` or column leaf ``q_j`` (1-based)."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("p", "q"):
            raise DomainError("leaf kind must be 'p' or 'q', got %r" % (self.kind,))
        if not isinstance(self.index, int) or self.index < 1:
            raise DomainError("leaf index must be a positive integer")

    def encode(self, d: int) -> int:
        """Total-order key used for lexicographic comparisons: p_i -> i, q_j -> d+j."""
        return self.index if self.kind == "p" else d + self.index

    def __str__(self):
        return "%s%d" % (self.kind, self.index)

    @classmethod
    def parse(cls, token: str) -> "Leaf":
        token = token.strip()
        if len(token) < 2 or token[0] not in "pq" or not token[1:].isdigit():
            raise DomainError("bad leaf token %r" % (token,))
        return cls(token[0], int(token[1:]))


@dataclass(frozen=True)
class Bipartition:
    """A pair (S, T): the block ``S u T`` against its complement in P u Q."""

    S: frozenset
    T: frozenset

    def __init__(self, S, T):
        S = frozenset(int(i) for i in S)
        T = frozenset(int(j) for j in T)
        if not S or not T:
            raise DomainError("both parts of a bipartition must be nonempty")
        if min(S) < 1 or min(T) < 1:
            raise DomainError("bipartition indices are 1-based")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)

    @property
    def key(self):
        """Deterministic sort key: the sorted index tuples."""
        return (tuple(sorted(self.S)), tuple(sorted(self.T)))

    def le(self, other: "Bipartition") -> bool:
        """Componentwise inclusion, the product partial order."""
        return self.S <= other.S and self.T <= other.T

    def complement(self, d: int, n: int) -> "Bipartition":
        self.check_proper(d, n)
        return Bipartition(
            frozenset(range(1, d + 1)) - self.S,
            frozenset(range(1, n + 1)) - self.T,
        )

    def check_proper(self, d: int, n: int) -> None:
        """Validate {} != S != P and {} != T != Q for the given (d, n)."""
        if max(self.S) > d or max(self.T) > n:
            raise DomainError("bipartition indices exceed (d, n) = (%d, %d)" % (d, n))
        if len(self.S) >= d or len(self.T) >= n:
            raise DomainError("bipartition parts must be proper subsets")

    def __str__(self):
        return "({%s},{%s})" % (
            ",".join(str(i) for i in sorted(self.S)),
            ",".join(str(j) for j in sorted(self.T)),
        )


@dataclass(frozen=True)
class BalancedComposition:
    """An ordered partition of P u Q whose end blocks meet both P and Q."""

    d: int
    n: int
    blocks: tuple

    def __init__(self, d, n, blocks):
        blocks = tuple(frozenset(b) for b in blocks)
        if d < 1 or n < 1:
            raise DomainError("need d >= 1 and n >= 1")
        if not blocks:
            raise DomainError("a composition needs at least one block")
        seen = set()
        for block in blocks:
            if not block:
                raise DomainError("blocks must be nonempty")
            for leaf in block:
                if not isinstance(leaf, Leaf):
                    raise DomainError("blocks must contain Leaf values")
                bound = d if leaf.kind == "p" else n
                if leaf.index > bound:
                    raise DomainError("leaf %s out of range" % leaf)
                if leaf in seen:
                    raise DomainError("leaf %s appears twice" % leaf)
                seen.add(leaf)
        if len(seen) != d + n:
            raise DomainError("blocks must cover all of P u Q")
        for block in (blocks[0], blocks[-1]):
            kinds = {leaf.kind for leaf in block}
            if kinds != {"p", "q"}:
                raise DomainError("first and last blocks must meet both P and Q")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", blocks)

    def encoded(self):
        """Concatenated sorted-integer form used for lexicographic comparison."""
        return tuple(
            tuple(sorted(leaf.encode(self.d) for leaf in block)) for block in self.blocks
        )

    def reverse(self) -> "BalancedComposition":
        return BalancedComposition(self.d, self.n, self.blocks[::-1])

    def __str__(self):
        d = self.d
        parts = []
        for block in self.blocks:
            leaves = sorted(block, key=lambda leaf: leaf.encode(d))
            parts.append(" ".join(str(leaf) for leaf in leaves))
        return "[%s]" % " | ".join(parts)

    @classmethod
    def parse(cls, text: str, d: int, n: int) -> "BalancedComposition":
        """Inverse of ``str``: e.g. ``"[p5 q3 | p1 | p2 q2]"`` (brackets optional)."""
        text = text.strip()
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        blocks = []
        for part in text.split("|"):
            tokens = part.split()
            if not tokens:
                raise DomainError("empty block in composition string")
            blocks.append(frozenset(Leaf.parse(tok) for tok in tokens))
        return cls(d, n, tuple(blocks))


def canonical_orbit(c: BalancedComposition) -> BalancedComposition:
    """The lexicographically smaller of ``c`` and its reverse."""
    r = c.reverse()
    return c if c.encoded() <= r.encoded() else r


def chain_to_composition(chain, d: int, n: int) -> BalancedComposition:
    """Blocks are the successive differences of the chain's leaf sets.

    The empty chain maps to the single block ``P u Q``.  Raises
    :class:`NotAChainError` if the sequence is not strictly increasing in
    the product order.
    """
    chain = list(chain)
    for bip in chain:
        bip.check_proper(d, n)
    for a, b in zip(chain, chain[1:]):
        if not (a.le(b) and a != b):
            raise NotAChainError("%s !< %s" % (a, b))
    blocks = []
    prev = frozenset()
    for bip in chain:
        cur = frozenset(Leaf("p", i) for i in bip.S) | frozenset(
            Leaf("q", j) for j in bip.T
        )
        blocks.append(cur - prev)
        prev = cur
    everything = frozenset(Leaf("p", i) for i in range(1, d + 1)) | frozenset(
        Leaf("q", j) for j in range(1, n + 1)
    )
    blocks.append(everything - prev)
    return BalancedComposition(d, n, tuple(blocks))


def composition_to_chain(c: BalancedComposition):
    """Inverse bijection: prefix unions of the blocks, last block dropped."""
    chain = []
    S_acc, T_acc = set(), set()
    for block in c.blocks[:-1]:
        for leaf in block:
            (S_acc if leaf.kind == "p" else T_acc).add(leaf.index)
        chain.append(Bipartition(S_acc, T_acc))
    return chain


def tree_from_matrix(cm: CanonicalMatrix) -> BalancedComposition:
    """The balanced composition (caterpillar tree) of a rank-<=2 class.

    Columns of ``cm`` lie on the tropical segment of some generator pair;
    the internal vertices of the tree are the distinct points among the
    columns and the segment's pseudovertices, ordered by the sweep
    parameter.  Row leaf ``p_i`` attaches to the vertex nearest the
    origin among those maximizing coordinate ``i``; column leaf ``q_j``
    attaches to the vertex its column occupies.  The result is returned
    as its canonical orbit representative.
    """
    d, n = cm.d, cm.n
    if d < 2 or n < 2:
        raise DomainError("tree construction needs d >= 2 and n >= 2")
    M = cm.as_rational_matrix()
    pair = barvinok_rank_le2(M)
    if pair is None:
        raise RankError("matrix has rank > 2; no caterpillar tree exists")
    cols = M.columns_canonical()
    x, y = cols[pair[0] - 1], cols[pair[1] - 1]
    seg = trop_segment(x, y)
    origin = TropPoint((0,) * d)
    if not segment_contains(x, y, origin):
        raise InternalError("origin is off the generating segment")
    lam0 = sweep_parameter(x, y, origin)

    vert_lambda = {}
    for pt, lam in zip(seg.pseudovertices, seg.breakparams):
        vert_lambda[pt] = lam
    for c in cols:
        lam = sweep_parameter(x, y, c)
        if sweep_point(x, y, lam) != c:
            raise InternalError("column is off the generating segment")
        if c in vert_lambda:
            if vert_lambda[c] != lam:
                raise InternalError("inconsistent sweep parameter for a column")
        else:
            vert_lambda[c] = lam
    verts = sorted(vert_lambda.items(), key=lambda item: item[1])
    points = [pt for pt, _ in verts]
    lams = [lam for _, lam in verts]

    attach = [set() for _ in verts]
    for i in range(1, d + 1):
        vals = [pt.coords[i - 1] for pt in points]
        mx = max(vals)
        idxs = [k for k, v in enumerate(vals) if v == mx]
        if idxs != list(range(idxs[0], idxs[-1] + 1)):
            raise InternalError("maximizing vertices for p%d are not contiguous" % i)
        dists = sorted(abs(lams[k] - lam0) for k in idxs)
        if len(dists) > 1 and dists[0] == dists[1]:
            raise InternalError("ambiguous nearest-origin attachment for p%d" % i)
        best = min(idxs, key=lambda k: abs(lams[k] - lam0))
        attach[best].add(Leaf("p", i))
    for j in range(1, n + 1):
        attach[points.index(cols[j - 1])].add(Leaf("q", j))
    if any(not leaves for leaves in attach):
        raise InternalError("internal vertex caught no leaves")
    comp = BalancedComposition(d, n, tuple(frozenset(s) for s in attach))
    return canonical_orbit(comp)


# ---------------------------------------------------------------------------
# counting (used for the resource cap and as an independent face-count oracle)

@lru_cache(maxsize=None)
def _surjections(k: int, r: int) -> int:
    """Ordered partitions of a k-set into r nonempty blocks."""
    return sum((-1) ** t * comb(r, t) * (r - t) ** k for t in range(r + 1))


def composition_counts(d: int, n: int) -> dict:
    """Number of balanced compositions of P u Q by block count.

    Closed-form inclusion over the contents of the first and last blocks;
    the middle blocks are a free ordered set partition.  Serves as the
    resource estimate and as an enumeration-independent face-count check.
    """
    if d < 1 or n < 1:
        raise DomainError("need d >= 1 and n >= 1")
    counts = {1: 1}
    for m in range(2, d + n + 1):
        total = 0
        for i in range(1, d):
            for i2 in range(1, d - i + 1):
                pw = comb(d, i) * comb(d - i, i2)
                for j in range(1, n):
                    for j2 in range(1, n - j + 1):
                        mid = d + n - i - j - i2 - j2
                        s = _surjections(mid, m - 2)
                        if s:
                            total += pw * comb(n, j) * comb(n - j, j2) * s
        if total:
            counts[m] = total
    return counts


def chain_counts(d: int, n: int) -> dict:
    """Number of nonempty chains of the bipartition poset, by length."""
    return {m - 1: c for m, c in composition_counts(d, n).items() if m >= 2}


# ---------------------------------------------------------------------------
# complex construction

@dataclass(frozen=True, eq=False)
class QuotientComplex:
    """A simplicial complex on bipartition(-orbit) vertices.

    ``quotiented`` complexes have one vertex per complement-orbit (the
    representative is the bipartition whose S contains 1) and each
    simplex is an orbit of chains; ``orbitreps`` maps every simplex to
    its canonical preimage chain.  Unquotiented complexes are the plain
    order complex with the identity orbit map.
    """

    d: int
    n: int
    quotiented: bool
    vertices: tuple
    simplices_by_dim: tuple
    orbitreps: dict

    @property
    def dim(self) -> int:
        return len(self.simplices_by_dim) - 1

    def face_counts(self) -> tuple:
        return tuple(len(s) for s in self.simplices_by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * len(s) for k, s in enumerate(self.simplices_by_dim))

    def has_simplex(self, vids) -> bool:
        vids = tuple(sorted(vids))
        k = len(vids) - 1
        return 0 <= k <= self.dim and vids in self.orbitreps

    def vertex_id(self, bip: Bipartition) -> int:
        table = self._vertex_table()
        if bip in table:
            return table[bip]
        if self.quotiented:
            rep = bip.complement(self.d, self.n)
            if rep in table:
                return table[rep]
        raise DomainError("%s is not a vertex of this complex" % bip)

    def _vertex_table(self):
        if not hasattr(self, "_vtable"):
            object.__setattr__(
                self, "_vtable", {bip: k for k, bip in enumerate(self.vertices)}
            )
        return self._vtable

    def involution_vertex(self, vid: int) -> int:
        """Complement involution on vertices (unquotiented complexes only)."""
        if self.quotiented:
            raise DomainError("the involution acts trivially on a quotiented complex")
        return self._vertex_table()[self.vertices[vid].complement(self.d, self.n)]

    def simplex_of_composition(self, c: BalancedComposition):
        """Vertex-id tuple of the simplex encoded by a balanced composition."""
        if (c.d, c.n) != (self.d, self.n):
            raise DomainError("composition is for a different (d, n)")
        chain = composition_to_chain(c)
        if not chain:
            raise DomainError("single-block composition encodes the empty simplex")
        return tuple(sorted(self.vertex_id(bip) for bip in chain))

    def to_json(self) -> str:
        payload = {
            "d": self.d,
            "n": self.n,
            "quotiented": self.quotiented,
            "vertices": [[sorted(b.S), sorted(b.T)] for b in self.vertices],
            "simplices_by_dim": [
                [list(s) for s in dim_list] for dim_list in self.simplices_by_dim
            ],
        }
        return json.dumps(payload, sort_keys=True)


def _superset_masks(mask: int, full: int):
    out = []
    m = mask
    while True:
        out.append(m)
        if m == full:
            return out
        m = (m + 1) | mask


def _mask_indices(mask: int):
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _build(d: int, n: int, quotient: bool, cap: int) -> QuotientComplex:
    if d < 3 or n < 3:
        raise DomainError("the complex is defined for d >= 3 and n >= 3")
    total = sum(chain_counts(d, n).values())
    estimate = total // 2 if quotient else total
    if estimate > cap:
        raise ResourceError(
            "estimated %d simplices exceeds the cap %d" % (estimate, cap)
        )

    full_d, full_n = (1 << d) - 1, (1 << n) - 1
    elems = [
        (S, T) for S in range(1, full_d) for T in range(1, full_n)
    ]
    elems.sort(key=lambda e: (_mask_indices(e[0]), _mask_indices(e[1])))
    index = {e: k for k, e in enumerate(elems)}
    nelem = len(elems)
    bips = [
        Bipartition(_mask_indices(S), _mask_indices(T)) for S, T in elems
    ]
    compl = [index[(full_d ^ S, full_n ^ T)] for S, T in elems]

    succ = []
    for S, T in elems:
        lst = []
        for S2 in _superset_masks(S, full_d):
            if S2 == full_d:
                continue
            for T2 in _superset_masks(T, full_n):
                if T2 == full_n or (S2 == S and T2 == T):
                    continue
                lst.append(index[(S2, T2)])
        lst.sort()
        succ.append(tuple(lst))

    if quotient:
        rep_ids = [k for k in range(nelem) if elems[k][0] & 1]
        vid = [0] * nelem
        for v, k in enumerate(rep_ids):
            vid[k] = v
        for k in range(nelem):
            if not elems[k][0] & 1:
                vid[k] = vid[compl[k]]
        vertices = tuple(bips[k] for k in rep_ids)
    else:
        vid = list(range(nelem))
        vertices = tuple(bips)

    sims = [dict() for _ in range(d + n - 3)]

    def visit(path):
        chain = tuple(path)
        dim = len(chain) - 1
        if quotient:
            key = tuple(sorted(vid[k] for k in chain))
            flipped = tuple(compl[k] for k in reversed(chain))
            sims[dim][key] = chain if chain <= flipped else flipped
        else:
            sims[dim][tuple(sorted(chain))] = chain

    path = []

    def dfs(k):
        path.append(k)
        visit(path)
        for s in succ[k]:
            dfs(s)
        path.pop()

    for start in range(nelem):
        dfs(start)

    if any(not layer for layer in sims):
        raise InternalError("a dimension layer came out empty")  # pragma: no cover
    simplices_by_dim = tuple(tuple(sorted(layer.keys())) for layer in sims)
    orbitreps = {}
    for layer in sims:
        for key, chain in layer.items():
            orbitreps[key] = tuple(bips[k] for k in chain)
    qc = QuotientComplex(
        d=d,
        n=n,
        quotiented=quotient,
        vertices=vertices,
        simplices_by_dim=simplices_by_dim,
        orbitreps=orbitreps,
    )
    counts = qc.face_counts()
    expected = chain_counts(d, n)
    for k, c in enumerate(counts):
        want = expected.get(k + 1, 0)
        if quotient:
            if want % 2:
                raise InternalError("odd chain count cannot halve")  # pragma: no cover
            want //= 2
        if c != want:
            raise InternalError(
                "face count mismatch in dim %d: enumerated %d, counted %d"
                % (k, c, want)
            )
    return qc


def build_complex(d: int, n: int, cap: int = DEFAULT_SIMPLEX_CAP) -> QuotientComplex:
    """The quotient of the order complex by the complement involution."""
    return _build(d, n, quotient=True, cap=cap)


def build_unquotiented(d: int, n: int, cap: int = DEFAULT_SIMPLEX_CAP) -> QuotientComplex:
    """The full order complex of the bipartition poset (a sphere product)."""
    return _build(d, n, quotient=False, cap=cap)
