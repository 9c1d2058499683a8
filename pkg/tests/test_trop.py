"""Tests for exact min-plus points, segments, and the rank <= 2 decision."""

import random
from fractions import Fraction

import pytest

from barvinok2 import (
    DomainError,
    RationalMatrix,
    TropPoint,
    barvinok_rank_le2,
    column_min_point,
    normalize_point,
    segment_contains,
    sweep_parameter,
    sweep_point,
    trop_segment,
)
from helpers import random_rank2_matrix


def test_trop_point_exactness():
    with pytest.raises(DomainError):
        TropPoint((0.5, 1))
    with pytest.raises(DomainError):
        TropPoint(())
    p = TropPoint((0, "1/2", Fraction(3, 4)))
    assert p.coords == (0, Fraction(1, 2), Fraction(3, 4))
    assert p.dim == 3
    assert p.is_canonical
    assert not TropPoint((1, 2)).is_canonical


def test_normalize_point():
    assert normalize_point(TropPoint((5, 7, 9))).coords == (0, 2, 4)
    p = TropPoint((0, -3, Fraction(1, 2)))
    assert normalize_point(p) == p
    q = normalize_point(TropPoint((Fraction(1, 3), 1)))
    assert q.coords == (0, Fraction(2, 3))


def test_trop_segment_golden():
    seg = trop_segment(TropPoint((0, 0, 1)), TropPoint((0, 3, 2)))
    assert tuple(p.coords for p in seg.pseudovertices) == (
        (0, 0, 1),
        (0, 1, 2),
        (0, 3, 2),
    )
    assert seg.breakparams == (0, 1, 3)


def test_trop_segment_degenerate():
    p = TropPoint((0, 1))
    seg = trop_segment(p, p)
    assert seg.pseudovertices == (p,)
    assert seg.breakparams == (Fraction(0),)


def test_trop_segment_properties():
    rng = random.Random(20240)
    for _ in range(60):
        d = rng.randint(2, 5)
        x = TropPoint((0,) + tuple(rng.randint(-6, 6) for _ in range(d - 1)))
        y = TropPoint((0,) + tuple(rng.randint(-6, 6) for _ in range(d - 1)))
        seg = trop_segment(x, y)
        assert seg.pseudovertices[0] == x
        assert seg.pseudovertices[-1] == y
        assert all(
            a < b for a, b in zip(seg.breakparams, seg.breakparams[1:])
        ), "break parameters must be strictly increasing"
        # the number of corners is the number of distinct differences
        assert len(seg.pseudovertices) == len(set(y.coords[i] - x.coords[i] for i in range(d)))
        for lam, p in zip(seg.breakparams, seg.pseudovertices):
            assert sweep_point(x, y, lam) == p
            assert segment_contains(x, y, p)
            assert segment_contains(y, x, p)


def test_sweep_point_clamps():
    x, y = TropPoint((0, 0, 1)), TropPoint((0, 3, 2))
    assert sweep_point(x, y, -100) == x
    assert sweep_point(x, y, 100) == y


def test_sweep_parameter_recovers_interior_points():
    rng = random.Random(20241)
    for _ in range(80):
        d = rng.randint(2, 5)
        x = TropPoint((0,) + tuple(rng.randint(-6, 6) for _ in range(d - 1)))
        y = TropPoint((0,) + tuple(rng.randint(-6, 6) for _ in range(d - 1)))
        seg = trop_segment(x, y)
        lo, hi = seg.breakparams[0], seg.breakparams[-1]
        lam = lo + (hi - lo) * Fraction(rng.randint(0, 12), 12)
        z = sweep_point(x, y, lam)
        assert segment_contains(x, y, z)
        assert segment_contains(y, x, z)
        assert sweep_parameter(x, y, z) == lam


def test_segment_contains_negative():
    x, y = TropPoint((0, 0, 1)), TropPoint((0, 3, 2))
    assert not segment_contains(x, y, TropPoint((0, 1, 3)))
    assert not segment_contains(x, y, TropPoint((0, -1, 1)))
    with pytest.raises(DomainError):
        segment_contains(x, y, TropPoint((0, 1)))


def test_column_min_point():
    M = RationalMatrix([[0, 1], [2, 0], [5, 3]])
    assert column_min_point(M).coords == (0, 0, 3)
    assert M.column(0).coords == (0, 2, 5)
    assert [p.coords for p in M.columns_canonical()] == [(0, 2, 5), (0, -1, 2)]


def test_from_csv():
    M = RationalMatrix.from_csv("1/2, 3\n-2, 0\n")
    assert M.entries == ((Fraction(1, 2), 3), (-2, 0))
    assert (M.d, M.n) == (2, 2)
    # decimals are parsed exactly, not as floats
    assert RationalMatrix.from_csv("0.5,3\n-2,0\n").entries == M.entries
    for bad in ("1,2\n3\n", "a,b\n", "  \n"):
        with pytest.raises(DomainError):
            RationalMatrix.from_csv(bad)


def test_rank_le2_small_cases():
    # a single column is spanned by itself (twice)
    assert barvinok_rank_le2(RationalMatrix([[3]])) == (1, 1)
    # proportional columns: the first two span everything
    assert barvinok_rank_le2(RationalMatrix([[1, 2], [0, 1]])) == (1, 2)
    # any two distinct columns span their own segment
    assert barvinok_rank_le2(RationalMatrix([[0, 1], [5, 0]])) == (1, 2)


def test_rank_le2_three_point_configs():
    """Two three-point configurations whose hulls are genuinely planar.

    Columns (0,0,1), (0,3,2), (0,2,4) and columns (0,0,1), (0,3,2),
    (0,1,4): neither set fits on a single tropical segment, so both
    matrices have Barvinok rank 3.
    """
    left = RationalMatrix([[0, 0, 0], [0, 3, 2], [1, 2, 4]])
    right = RationalMatrix([[0, 0, 0], [0, 3, 1], [1, 2, 4]])
    assert barvinok_rank_le2(left) is None
    assert barvinok_rank_le2(right) is None


def _brute_force_pair(M):
    """First (i, j), i < j, in lexicographic order whose columns span all
    others; a lone column spans itself."""
    cols = M.columns_canonical()
    n = len(cols)
    if n == 1:
        return (1, 1)
    for i in range(n):
        for j in range(i + 1, n):
            if all(segment_contains(cols[i], cols[j], z) for z in cols):
                return (i + 1, j + 1)
    return None


def test_rank_le2_matches_brute_force():
    rng = random.Random(20242)
    for _ in range(120):
        d = rng.randint(1, 4)
        n = rng.randint(1, 4)
        M = RationalMatrix(
            [[rng.randint(-3, 3) for _ in range(n)] for _ in range(d)]
        )
        assert barvinok_rank_le2(M) == _brute_force_pair(M)


def test_rank_le2_random_rank2():
    rng = random.Random(20243)
    for _ in range(60):
        d = rng.randint(2, 5)
        n = rng.randint(2, 6)
        M = random_rank2_matrix(rng, d, n)
        pair = barvinok_rank_le2(M)
        assert pair is not None, "matrix built on a segment must have rank <= 2"
        i, j = pair
        cols = M.columns_canonical()
        assert all(segment_contains(cols[i - 1], cols[j - 1], z) for z in cols)
        assert pair == _brute_force_pair(M)
