"""Exact min-plus (tropical) points, segments and the rank <= 2 decision.

Conventions
-----------
The tropical semiring used throughout is (R, min, +).  Points of the
tropical projective space are vectors modulo adding a common constant to
every coordinate; the *canonical representative* of a class is the vector
whose first coordinate is 0.  All arithmetic is exact over Q via
:class:`fractions.Fraction` -- floats are rejected rather than silently
converted.

The tropical segment between canonical points ``x`` and ``y`` is the set
of classes ``min(lam + x, y)`` (coordinatewise) for ``lam`` in R, swept
from ``y`` (lam very negative) to ``x`` (lam very positive).  It is a
concatenation of at most ``d - 1`` ordinary line segments; the kinks are
the *pseudovertices*.  Membership is decided by residuation, not by
enumerating pieces: ``z`` lies on the segment iff

    min(lam* + x, mu* + y) == z   with   lam* = max(z - x),  mu* = max(z - y),

an exact coordinatewise identity.

A matrix has Barvinok rank <= 2 iff some pair of its columns spans all
the others, i.e. every column class lies on one tropical segment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "TropPoint",
    "TropSegment",
    "RationalMatrix",
    "normalize_point",
    "trop_segment",
    "sweep_point",
    "sweep_parameter",
    "segment_contains",
    "barvinok_rank_le2",
    "column_min_point",
]


def _coerce(value) -> Fraction:
    """Exact coercion to Fraction; floats are refused on purpose."""
    if isinstance(value, float):
        raise DomainError(
            "float %r rejected: pass ints, Fractions or strings like '5/2' "
            "to keep arithmetic exact" % (value,)
        )
    return Fraction(value)


@dataclass(frozen=True)
class TropPoint:
    """A point of tropical projective space, stored as one representative."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords):
        coords = tuple(_coerce(c) for c in coords)
        if not coords:
            raise DomainError("a tropical point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_canonical(self) -> bool:
        return self.coords[0] == 0

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def __repr__(self):
        return "TropPoint(%s)" % (", ".join(str(c) for c in self.coords),)


def normalize_point(p: TropPoint) -> TropPoint:
    """Canonical representative: subtract the first coordinate."""
    c0 = p.coords[0]
    if c0 == 0:
        return p
    return TropPoint(tuple(c - c0 for c in p.coords))


def _require_canonical(p: TropPoint, name: str) -> None:
    if not p.is_canonical:
        raise DomainError("%s must be canonical (first coordinate 0), got %r" % (name, p))


def _require_same_dim(*points: TropPoint) -> int:
    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise DomainError("points live in different dimensions: %s" % sorted(dims))
    return dims.pop()


@dataclass(frozen=True)
class TropSegment:
    """A tropical segment as its chain of pseudovertices.

    ``pseudovertices[k]`` is the canonical kink attained at sweep value
    ``breakparams[k]``; consecutive pseudovertices are joined by ordinary
    (Euclidean) line segments in canonical coordinates.  The sweep
    ``lam -> min(lam + x, y)`` starts at ``x`` (small ``lam``) and ends
    at ``y``, so ``pseudovertices[0] == x`` and ``pseudovertices[-1] == y``.
    """

    pseudovertices: tuple[TropPoint, ...]
    breakparams: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.pseudovertices) != len(self.breakparams):
            raise DomainError("pseudovertex and parameter counts differ")
        for a, b in zip(self.breakparams, self.breakparams[1:]):
            if not a < b:
                raise DomainError("sweep parameters must increase strictly")
        for a, b in zip(self.pseudovertices, self.pseudovertices[1:]):
            if a == b:
                raise DomainError("consecutive pseudovertices must differ")

    def __len__(self):
        return len(self.pseudovertices)


def sweep_point(x: TropPoint, y: TropPoint, lam) -> TropPoint:
    """Canonical form of ``min(lam + x, y)``, the sweep at value ``lam``."""
    lam = _coerce(lam)
    return normalize_point(
        TropPoint(tuple(min(lam + xi, yi) for xi, yi in zip(x, y)))
    )


def sweep_parameter(x: TropPoint, y: TropPoint, z: TropPoint) -> Fraction:
    """The sweep value at which ``z`` is attained on the segment from x to y.

    Computed as ``max(z - x) - max(z - y)``.  Meaningful when ``z`` lies on
    the segment; the value is then clamped to the injective range
    ``[min(y - x), max(y - x)]``.
    """
    lam_star = max(zi - xi for zi, xi in zip(z, x))
    mu_star = max(zi - yi for zi, yi in zip(z, y))
    return lam_star - mu_star


def trop_segment(x: TropPoint, y: TropPoint) -> TropSegment:
    """Pseudovertex chain of the tropical segment between canonical x, y.

    The sweep ``lam -> min(lam + x, y)`` is sampled at the sorted distinct
    values of ``y_i - x_i`` (the only places where kinks can occur); the
    sweep is injective on that closed range, so the sampled points are
    already pairwise distinct.
    """
    _require_canonical(x, "x")
    _require_canonical(y, "y")
    _require_same_dim(x, y)
    diffs = sorted({yi - xi for xi, yi in zip(x, y)})
    points = []
    for lam in diffs:
        p = sweep_point(x, y, lam)
        points.append(p)
    return TropSegment(tuple(points), tuple(diffs))


def segment_contains(x: TropPoint, y: TropPoint, z: TropPoint) -> bool:
    """Exact residuation test for ``z`` on the tropical segment [x, y].

    All three points must be canonical.  ``z`` belongs to the segment iff
    the largest tropical combination below it,
    ``min(lam* + x, mu* + y)`` with ``lam* = max(z - x)`` and
    ``mu* = max(z - y)``, equals ``z`` in every coordinate.
    """
    _require_canonical(x, "x")
    _require_canonical(y, "y")
    _require_canonical(z, "z")
    _require_same_dim(x, y, z)
    lam_star = max(zi - xi for zi, xi in zip(z, x))
    mu_star = max(zi - yi for zi, yi in zip(z, y))
    return all(
        min(lam_star + xi, mu_star + yi) == zi for xi, yi, zi in zip(x, y, z)
    )


class RationalMatrix:
    """A d x n matrix over Q, the raw input of the rank decision."""

    __slots__ = ("entries",)

    def __init__(self, rows):
        entries = tuple(tuple(_coerce(v) for v in row) for row in rows)
        if not entries or not entries[0]:
            raise DomainError("matrix must have at least one row and one column")
        widths = {len(r) for r in entries}
        if len(widths) != 1:
            raise DomainError("rows have unequal lengths: %s" % sorted(widths))
        self.entries = entries

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def column(self, j: int) -> TropPoint:
        """Column ``j`` (0-based) as a tropical point (not normalized)."""
        return TropPoint(tuple(row[j] for row in self.entries))

    def columns_canonical(self) -> list[TropPoint]:
        return [normalize_point(self.column(j)) for j in range(self.n)]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "RationalMatrix(%d x %d)" % (self.d, self.n)

    @classmethod
    def from_csv(cls, text: str) -> "RationalMatrix":
        """Parse comma-separated rational rows, e.g. ``0,5/2,-3``.

        Blank lines and lines starting with ``#`` are skipped.
        """
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([Fraction(tok.strip()) for tok in line.split(",")])
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError("line %d: %s" % (lineno, exc)) from exc
        if not rows:
            raise DomainError("no matrix rows found")
        return cls(rows)


def barvinok_rank_le2(M: RationalMatrix):
    """First column pair that tropically spans every column, or ``None``.

    Column pairs ``(i, j)`` with ``i < j`` (1-based) are scanned in
    lexicographic order; the first pair whose tropical segment contains
    every column class of ``M`` is returned.  A single-column matrix is
    spanned by its own column: ``(1, 1)``.  ``None`` means the Barvinok
    rank of ``M`` exceeds 2.
    """
    cols = M.columns_canonical()
    n = M.n
    if n == 1:
        return (1, 1)
    for i in range(n):
        for j in range(i + 1, n):
            x, y = cols[i], cols[j]
            if all(segment_contains(x, y, z) for z in cols):
                return (i + 1, j + 1)
    return None


def column_min_point(M: RationalMatrix) -> TropPoint:
    """Canonical form of the coordinatewise minimum of all columns."""
    mins = tuple(min(row) for row in M.entries)
    return normalize_point(TropPoint(mins))
