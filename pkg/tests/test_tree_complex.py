"""Tests for bipartition chains, balanced compositions, and the built
order complexes (quotiented and not)."""

import random

import pytest

from barvinok2 import (
    BalancedComposition,
    Bipartition,
    DomainError,
    Leaf,
    NotAChainError,
    RankError,
    RationalMatrix,
    ResourceError,
    build_complex,
    build_unquotiented,
    canonical_orbit,
    canonicalize,
    chain_counts,
    chain_to_composition,
    composition_counts,
    composition_to_chain,
    tree_from_matrix,
)
from helpers import all_bipartitions, enumerate_chains, random_rank2_matrix

SMALL = [(d, n) for d in (2, 3, 4) for n in (2, 3, 4)]


def test_leaf():
    leaf = Leaf("p", 5)
    assert str(leaf) == "p5"
    assert Leaf.parse("q12") == Leaf("q", 12)
    for bad in ("r1", "p", "pq", "p0x"):
        with pytest.raises(DomainError):
            Leaf.parse(bad)


def test_bipartition_basics():
    b = Bipartition({1, 3}, {2})
    assert b.key == ((1, 3), (2,))
    assert str(b) == "({1,3},{2})"
    with pytest.raises(DomainError):
        Bipartition(set(), {1})
    with pytest.raises(DomainError):
        Bipartition({0}, {1})
    # product order
    assert b.le(Bipartition({1, 2, 3}, {1, 2}))
    assert not b.le(Bipartition({1}, {2}))
    # complement is an involution and proper parts stay proper
    c = b.complement(4, 3)
    assert c == Bipartition({2, 4}, {1, 3})
    assert c.complement(4, 3) == b
    with pytest.raises(DomainError):
        Bipartition({1, 2}, {1}).check_proper(2, 2)


def test_balanced_composition_parse_round_trip():
    text = "[p5 q3 | p1 | p2 q2 | q4 | p3 p4 | q1 | p6 q5]"
    c = BalancedComposition.parse(text, 6, 5)
    assert str(c) == text
    assert c.encoded() == ((5, 9), (1,), (2, 8), (10,), (3, 4), (7,), (6, 11))
    assert str(c.reverse()) == "[p6 q5 | q1 | p3 p4 | q4 | p2 q2 | p1 | p5 q3]"
    assert c.reverse().reverse() == c


def test_balanced_composition_validation():
    # end blocks must meet both leaf families
    with pytest.raises(DomainError):
        BalancedComposition.parse("[p1 | q1]", 1, 1)
    with pytest.raises(DomainError):
        BalancedComposition.parse("[p1 p2 q1 | q2]", 2, 2)
    # blocks must partition the full leaf set
    with pytest.raises(DomainError):
        BalancedComposition.parse("[p1 q1]", 2, 2)


def test_chain_composition_bijection():
    """chain_to_composition is a bijection between chains of proper
    bipartitions and balanced compositions, inverse to
    composition_to_chain."""
    for d, n in SMALL:
        chains = enumerate_chains(d, n)
        seen = set()
        by_blocks = {}
        for ch in chains:
            comp = chain_to_composition(ch, d, n)
            assert comp.encoded() not in seen, "must be injective"
            seen.add(comp.encoded())
            assert composition_to_chain(comp) == ch
            k = len(comp.blocks)
            assert k == len(ch) + 1
            by_blocks[k] = by_blocks.get(k, 0) + 1
        assert by_blocks == composition_counts(d, n)


def test_chain_counts_closed_form():
    for d, n in SMALL:
        chains = enumerate_chains(d, n)
        lengths = {}
        for ch in chains:
            if ch:
                lengths[len(ch)] = lengths.get(len(ch), 0) + 1
        assert lengths == chain_counts(d, n)
        # maximal chains have d + n - 3 elements
        assert max(lengths) == d + n - 3


def test_not_a_chain_rejected():
    with pytest.raises(NotAChainError):
        chain_to_composition(
            [Bipartition({1, 2}, {1}), Bipartition({1}, {1, 2})], 3, 3
        )
    with pytest.raises(NotAChainError):
        chain_to_composition([Bipartition({1}, {1})] * 2, 3, 3)


def test_build_golden_small():
    K33 = build_complex(3, 3)
    assert K33.face_counts() == (18, 54, 36)
    assert K33.euler_characteristic() == 0
    assert K33.dim == 2
    K44 = build_complex(4, 4)
    assert K44.face_counts() == (98, 1152, 3648, 4320, 1728)
    assert K44.euler_characteristic() == 2


def test_face_counts_match_chain_counts(built):
    """The quotient complex has exactly half the faces in each dimension."""
    for d, n in [(3, 3), (3, 4), (4, 3), (4, 4)]:
        K = built(d, n)
        U = built(d, n, quotient=False)
        counts = chain_counts(d, n)
        expect_unquot = tuple(counts[k] for k in sorted(counts))
        assert U.face_counts() == expect_unquot
        assert K.face_counts() == tuple(c // 2 for c in expect_unquot)
        assert U.euler_characteristic() == 2 * K.euler_characteristic()


def test_involution_is_free_and_simplicial(built):
    """Certificates that the complement action is free on the order
    complex and that its quotient is again a simplicial complex."""
    for d, n in [(3, 3), (3, 4), (4, 3), (4, 4)]:
        U = built(d, n, quotient=False)
        nv = U.face_counts()[0]
        iota = [U.involution_vertex(v) for v in range(nv)]
        assert all(iota[iota[v]] == v for v in range(nv)), "involution"
        assert all(iota[v] != v for v in range(nv)), "free on vertices"
        simplices = set()
        for dim_list in U.simplices_by_dim:
            simplices.update(dim_list)
        for s in simplices:
            image = tuple(sorted(iota[v] for v in s))
            assert image in simplices, "equivariance"
            assert not (set(s) & set(image)), "no simplex meets its image"
        edges = set(U.simplices_by_dim[1]) if U.dim >= 1 else set()
        for a, b in edges:
            twisted = tuple(sorted((a, iota[b])))
            assert twisted not in edges, "quotient would identify edges"


def test_quotient_involution_trivial(built):
    K = built(3, 3)
    with pytest.raises(DomainError):
        K.involution_vertex(0)
    b = Bipartition({1}, {1})
    assert K.vertex_id(b) == K.vertex_id(b.complement(3, 3))
    U = built(3, 3, quotient=False)
    assert U.vertex_id(b) != U.vertex_id(b.complement(3, 3))
    assert U.involution_vertex(U.vertex_id(b)) == U.vertex_id(b.complement(3, 3))


def test_canonical_orbit():
    rng = random.Random(777)
    for d, n in [(3, 3), (4, 4), (3, 4)]:
        chains = enumerate_chains(d, n)
        rng.shuffle(chains)
        for ch in chains[:200]:
            comp = chain_to_composition(ch, d, n)
            orb = canonical_orbit(comp)
            assert orb in (comp, comp.reverse())
            assert canonical_orbit(comp.reverse()) == orb
            assert canonical_orbit(orb) == orb


def test_simplex_of_composition(built):
    K = built(3, 3)
    comp = chain_to_composition([Bipartition({1}, {1})], 3, 3)
    vids = K.simplex_of_composition(canonical_orbit(comp))
    assert vids == (K.vertex_id(Bipartition({1}, {1})),)
    assert K.has_simplex(vids)
    assert not K.has_simplex(())


def test_tree_from_matrix_golden():
    M = RationalMatrix(
        [
            [6, 1, 4, 6, 3],
            [2, -3, -1, 2, -1],
            [5, -2, 0, 4, 2],
            [5, -2, 0, 4, 2],
            [0, -5, -1, 0, -3],
            [6, -2, 0, 4, 4],
        ]
    )
    comp = tree_from_matrix(canonicalize(M))
    assert str(comp) == "[p5 q3 | p1 | p2 q2 | q4 | p3 p4 | q1 | p6 q5]"
    assert comp == canonical_orbit(comp)
    # tiny cases
    assert str(tree_from_matrix(canonicalize(RationalMatrix([[0, 0], [0, 1]])))) == "[p1 q1 | p2 q2]"
    assert str(tree_from_matrix(canonicalize(RationalMatrix([[0, 1], [2, 0]])))) == "[p1 q2 | p2 q1]"


def test_tree_from_matrix_rank3_rejected():
    cm = canonicalize(RationalMatrix([[0, 0, 0], [0, 3, 2], [1, 2, 4]]))
    with pytest.raises(RankError):
        tree_from_matrix(cm)


def test_tree_from_matrix_random(built):
    rng = random.Random(910)
    for _ in range(60):
        d = rng.randint(3, 4)
        n = rng.randint(3, 4)
        M = random_rank2_matrix(rng, d, n)
        try:
            cm = canonicalize(M)
        except Exception:
            continue
        try:
            comp = tree_from_matrix(cm)
        except RankError:
            pytest.fail("segment-built matrix must have rank <= 2")
        assert comp == canonical_orbit(comp)
        assert (comp.d, comp.n) == (d, n)
        if len(comp.blocks) >= 2:
            K = built(d, n)
            assert K.has_simplex(K.simplex_of_composition(comp))


def test_resource_cap():
    with pytest.raises(ResourceError):
        build_complex(3, 3, cap=10)
    # the default cap refuses roughly 2.9e7 simplices
    total = sum(chain_counts(6, 5).values()) // 2
    assert total == 28867140
    with pytest.raises(ResourceError):
        build_complex(6, 5)
    # the complexes themselves only exist from (3, 3) upward
    with pytest.raises(DomainError):
        build_complex(2, 5)


def test_to_json_deterministic(built):
    K = built(3, 3)
    text = K.to_json()
    assert text == build_complex(3, 3).to_json()
    assert text.startswith('{"d": 3, "n": 3, "quotiented": true')
