"""Canonical primitive-integer representatives of matrix classes.

Two rational matrices are *equivalent* when they differ by adding
constants to rows, adding constants to columns, and positive rational
scaling.  Each non-degenerate class contains exactly one matrix with

  (i)   first row identically zero,
  (ii)  minimum entry zero in every row,
  (iii) integer entries with overall gcd 1,

and that matrix is the :class:`CanonicalMatrix` ``G``.  The class's
representative on the unit sphere is ``G / sqrt(normsq)``; storing the
primitive integer matrix plus ``normsq`` keeps everything exact.
Classes whose normalization collapses to the zero matrix carry no
canonical form and raise :class:`~barvinok2.errors.ZeroClassError`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ZeroClassError
from .trop import RationalMatrix

__all__ = ["CanonicalMatrix", "canonicalize", "equivalent"]


@dataclass(frozen=True)
class CanonicalMatrix:
    """The primitive nonnegative-integer representative of a matrix class."""

    G: tuple[tuple[int, ...], ...]
    normsq: int

    def __post_init__(self):
        G = self.G
        if not G or not G[0]:
            raise DomainError("canonical matrix must be nonempty")
        if any(len(row) != len(G[0]) for row in G):
            raise DomainError("rows have unequal lengths")
        if any(v != 0 for v in G[0]):
            raise DomainError("first row must be zero")
        if any(min(row) != 0 for row in G):
            raise DomainError("every row must attain minimum 0")
        if any(v < 0 or v != int(v) for row in G for v in row):
            raise DomainError("entries must be nonnegative integers")
        flat = [v for row in G for v in row]
        if not any(flat):
            raise DomainError("zero matrix has no canonical form")
        if math.gcd(*flat) != 1:
            raise DomainError("entries must be coprime")
        if self.normsq != sum(v * v for v in flat):
            raise DomainError("normsq does not match the entries")

    @property
    def d(self) -> int:
        return len(self.G)

    @property
    def n(self) -> int:
        return len(self.G[0])

    def as_rational_matrix(self) -> RationalMatrix:
        return RationalMatrix(self.G)

    def unit_sphere_entries(self, digits: int = 6) -> list[list[float]]:
        """Float display of G / sqrt(normsq); convenience only."""
        norm = math.sqrt(self.normsq)
        return [[round(v / norm, digits) for v in row] for row in self.G]

    def to_json(self) -> str:
        payload = {
            "d": self.d,
            "n": self.n,
            "G": [list(row) for row in self.G],
            "normsq": self.normsq,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CanonicalMatrix":
        payload = json.loads(text)
        G = tuple(tuple(int(v) for v in row) for row in payload["G"])
        cm = cls(G=G, normsq=int(payload["normsq"]))
        if cm.d != payload["d"] or cm.n != payload["n"]:
            raise DomainError("declared shape does not match G")
        return cm


def canonicalize(M: RationalMatrix) -> CanonicalMatrix:
    """Unique canonical representative of the class of ``M``.

    Subtracts row 1 from every row (a column translation), then each
    row's minimum from that row (row translations), then rescales to the
    primitive integer matrix on the same positive ray.

    Raises :class:`ZeroClassError` if the normalization is identically
    zero, i.e. ``M`` is a sum of a row-constant and a column-constant
    matrix and represents no class.
    """
    rows = []
    first = M.entries[0]
    for row in M.entries:
        shifted = [v - f for v, f in zip(row, first)]
        m = min(shifted)
        rows.append([v - m for v in shifted])
    if all(v == 0 for row in rows for v in row):
        raise ZeroClassError("matrix class degenerates to zero")
    denom_lcm = 1
    for row in rows:
        for v in row:
            denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
    ints = [[int(v * denom_lcm) for v in row] for row in rows]
    g = math.gcd(*[v for row in ints for v in row])
    G = tuple(tuple(v // g for v in row) for row in ints)
    normsq = sum(v * v for row in G for v in row)
    return CanonicalMatrix(G=G, normsq=normsq)


def equivalent(M1: RationalMatrix, M2: RationalMatrix) -> bool:
    """True iff the two matrices lie in the same translation/scaling class."""
    return canonicalize(M1) == canonicalize(M2)
