"""Closed-form homology of the rank-two tree space and of the sphere
quotients it is built from.

For d, n >= 3 the space in question is the (d + n - 4)-manifold
(S^(d-2) x S^(n-2)) / Z_2 (simultaneous antipode in both factors).  Its
reduced integral homology is Z^f(i) + (Z/2)^t(i) with

    f(i) = 2  if i + 2 = d = n and i odd
           1  if i + 2 = n != d and i odd
           1  if i + 2 = d != n and i odd
           1  if i = d + n - 4 and i even
           0  otherwise

    t(i) = 1  if 1 <= i <= min(d, n) - 3 and i odd
           1  if max(d, n) - 2 <= i <= d + n - 5 and i even
           0  otherwise

The free part is what any coefficient field with 2 invertible sees; the
torsion comes from the projective-space pattern of the hemisphere
quotients.  These formulas serve as the independent oracle against the
matrix-based homology routes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InvalidCharacteristic
from .homology import HomologyProfile, _is_prime

__all__ = [
    "FormulaProfile",
    "homology_formula",
    "rp_homology",
    "freepart_formula",
    "torsion_formula",
    "field_betti_formula",
    "euler_characteristic_formula",
]


@dataclass(frozen=True)
class FormulaProfile:
    """A HomologyProfile together with its interpretation flags.

    ``coefficients`` is a ring descriptor ("Z", "Q", "Z/2", "R" for a
    generic field with 2 invertible); ``reduced`` records whether the
    degree-0 entry omits the ambient Z.  Torsion is always a power of
    Z/2 here.
    """

    profile: HomologyProfile
    reduced: bool
    coefficients: str

    def __post_init__(self):
        for _deg, _free, tor in self.profile.groups:
            if any(t != 2 for t in tor):
                raise DomainError("formula torsion must consist of Z/2 factors")

    def free(self, k: int) -> int:
        return self.profile.free(k)

    def torsion(self, k: int) -> tuple:
        return self.profile.torsion(k)

    def degrees(self):
        return self.profile.degrees()

    def to_json(self) -> str:
        return self.profile.to_json()

    def __str__(self):
        return str(self.profile)


def _check_dn(d: int, n: int):
    if d < 3 or n < 3:
        raise DomainError("defined for d, n >= 3, got (%d, %d)" % (d, n))


def _f(d: int, n: int, i: int) -> int:
    if i % 2 == 1:
        if i + 2 == d == n:
            return 2
        if i + 2 == n != d or i + 2 == d != n:
            return 1
    if i % 2 == 0 and i == d + n - 4:
        return 1
    return 0


def _t(d: int, n: int, i: int) -> int:
    lo, hi = min(d, n), max(d, n)
    if i % 2 == 1 and 1 <= i <= lo - 3:
        return 1
    if i % 2 == 0 and hi - 2 <= i <= d + n - 5:
        return 1
    return 0


def homology_formula(d: int, n: int) -> FormulaProfile:
    """Reduced integral homology, degree by degree, in closed form."""
    _check_dn(d, n)
    groups = []
    for i in range(0, d + n - 3):
        groups.append((i, _f(d, n, i), (2,) * _t(d, n, i)))
    return FormulaProfile(HomologyProfile(groups), reduced=True, coefficients="Z")


def rp_homology(D: int, part: str) -> FormulaProfile:
    """Unreduced homology of the two quotients of the hemispherical
    D-sphere complex: ``part="plus"`` identifies antipodal cells (real
    projective space), ``part="minus"`` identifies them with a sign.
    """
    if D < 0:
        raise DomainError("sphere dimension must be nonnegative")
    if part not in ("plus", "minus"):
        raise DomainError("part must be 'plus' or 'minus', got %r" % (part,))
    groups = []
    for i in range(0, D + 1):
        free = 0
        tor = ()
        if part == "plus":
            if i == 0:
                free += 1
            if i == D and D % 2 == 1 and D > 0:
                free += 1
            if i % 2 == 1 and i < D:
                tor = (2,)
        else:
            if i == D and D % 2 == 0:
                free += 1
            if i % 2 == 0 and i < D:
                tor = (2,)
        groups.append((i, free, tor))
    return FormulaProfile(HomologyProfile(groups), reduced=False, coefficients="Z")


def freepart_formula(d: int, n: int) -> FormulaProfile:
    """Reduced homology over any coefficient field in which 2 is
    invertible: the free part of the integral answer, torsion invisible."""
    _check_dn(d, n)
    groups = [(i, _f(d, n, i), ()) for i in range(0, d + n - 3)]
    return FormulaProfile(HomologyProfile(groups), reduced=True, coefficients="R")


def torsion_formula(d: int, n: int) -> dict:
    """Multiplicity of Z/2 in each degree of the integral homology.

    The underlying statement assumes d >= n; the arguments are swapped
    internally since the answer is symmetric.
    """
    _check_dn(d, n)
    if d < n:
        d, n = n, d
    out = {}
    for i in range(1, n - 2, 2):
        out[i] = 1
    start = d - 2 if (d - 2) % 2 == 0 else d - 1
    for i in range(start, d + n - 4, 2):
        out[i] = out.get(i, 0) + 1
    return out


def field_betti_formula(d: int, n: int, characteristic: int = 0) -> dict:
    """Reduced Betti numbers by degree over Q, F_p (p odd), or F_2.

    For 2 invertible only the free part survives; over F_2 each Z/2
    summand contributes to two adjacent degrees (universal
    coefficients): b_i = f(i) + t(i) + t(i-1).
    """
    _check_dn(d, n)
    if characteristic != 0 and not _is_prime(characteristic):
        raise InvalidCharacteristic(
            "characteristic must be 0 or a prime, got %r" % (characteristic,)
        )
    out = {}
    for i in range(0, d + n - 3):
        if characteristic == 2:
            out[i] = _f(d, n, i) + _t(d, n, i) + _t(d, n, i - 1)
        else:
            out[i] = _f(d, n, i)
    return out


def euler_characteristic_formula(d: int, n: int) -> int:
    """Unreduced Euler characteristic: 2 when d and n are both even,
    otherwise 0."""
    _check_dn(d, n)
    chi = 1  # the ambient Z in degree 0
    for i in range(0, d + n - 3):
        chi += (-1) ** (i % 2) * _f(d, n, i)
    return chi
