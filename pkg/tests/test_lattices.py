"""Unit tests for the exact lattice core.

Where the expected answer is not pinned by hand it is recomputed by an
independent brute-force oracle (coordinate boxes, cofactor expansion),
never by the code path under test.
"""

import itertools
import random
from fractions import Fraction

import pytest

from cmlattices.lattices import (
    E8_GRAM,
    Embedding,
    GramLattice,
    _det_bareiss,
    _reduce_gram_basis,
    discriminant,
    embeds_in_diagonal,
    gram_of_vectors,
    indecomposable_summands,
    is_isometric,
    orthogonal_complement,
    pairing,
    short_vectors,
)

A2 = GramLattice([[-2, 1], [1, -2]])


# -- oracles -----------------------------------------------------------------


def det_cofactor(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def short_vectors_box_oracle(lattice, bound):
    """All short vectors by a plain certified coordinate box."""
    n = lattice.rank
    neg = [[-x for x in row] for row in lattice.gram]
    det = det_cofactor(neg)
    # v_i^2 <= bound * (A^{-1})_{ii} by Cauchy-Schwarz; inverse via adjugate
    radii = []
    for i in range(n):
        minor = [
            [neg[a][b] for b in range(n) if b != i] for a in range(n) if a != i
        ]
        inv_ii = Fraction(det_cofactor(minor), det)
        r = 0
        while (r + 1) ** 2 <= bound * inv_ii:
            r += 1
        radii.append(r)
    out = set()
    for v in itertools.product(*[range(-r, r + 1) for r in radii]):
        if all(x == 0 for x in v):
            continue
        q = sum(neg[i][j] * v[i] * v[j] for i in range(n) for j in range(n))
        if q <= bound:
            canon = v
            for x in v:
                if x != 0:
                    if x < 0:
                        canon = tuple(-c for c in v)
                    break
            out.add(canon)
    return out


# -- pairing and complements ---------------------------------------------------


def test_pairing_examples():
    assert pairing((1, 0), (0, 1)) == 0
    assert pairing((1, 1, 1), (1, 1, 1)) == -3
    assert pairing((1, 2, 3, 4), (1, 2, 3, 4)) == -30


def test_pairing_rank_mismatch():
    with pytest.raises(ValueError):
        pairing((1, 0), (1, 0, 0))


def test_complement_of_ones():
    emb = orthogonal_complement((1, 1, 1))
    assert emb.domain.rank == 2
    assert is_isometric(emb.domain, A2) is not None
    # brute-force span check: every small vector orthogonal to sigma lies
    # in the integer row span of the returned basis
    basis = emb.images
    members = set()
    for coeffs in itertools.product(range(-6, 7), repeat=2):
        v = tuple(
            sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(3)
        )
        members.add(v)
    for v in itertools.product(range(-3, 4), repeat=3):
        if sum(v) == 0:
            assert v in members


def test_complement_rank_one():
    with pytest.raises(ValueError):
        orthogonal_complement((0, 0))
    emb = orthogonal_complement((1,))
    assert emb.domain.rank == 0


def test_complement_1_2():
    emb = orthogonal_complement((1, 2))
    assert emb.domain.gram == ((-5,),)
    v = emb.images[0]
    assert abs(v[0]) == 2 and abs(v[1]) == 1


def test_complement_rejects_non_primitive():
    with pytest.raises(ValueError):
        orthogonal_complement((2, 4))


def test_complement_discriminant_exhaustive():
    # disc of the complement equals |<sigma, sigma>| for every primitive
    # nonnegative vector of rank <= 6 with entries <= 4
    from math import gcd

    for rank in range(1, 7):
        for sigma in itertools.product(range(5), repeat=rank):
            g = 0
            for x in sigma:
                g = gcd(g, x)
            if g != 1:
                continue
            emb = orthogonal_complement(sigma)
            assert discriminant(emb.domain) == -pairing(sigma, sigma)


# -- discriminants --------------------------------------------------------------


def test_discriminant_examples():
    assert discriminant(A2) == 3
    assert discriminant(GramLattice(())) == 1
    assert discriminant(E8_GRAM) == 1


def test_bareiss_matches_cofactor_oracle():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randrange(1, 6)
        rows = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i):
                rows[i][j] = rows[j][i]
        assert _det_bareiss(rows) == det_cofactor(rows)


def test_gram_rejects_indefinite():
    with pytest.raises(ValueError):
        GramLattice([[1]])
    with pytest.raises(ValueError):
        GramLattice([[-1, 0], [0, 1]])
    with pytest.raises(ValueError):
        GramLattice([[0]])
    with pytest.raises(ValueError):
        GramLattice([[-1, 2], [1, -1]])  # asymmetric


# -- short vectors ---------------------------------------------------------------


def test_short_vectors_rank_one():
    assert short_vectors(GramLattice([[-2]]), 2) == [(1,)]


def test_short_vectors_a2():
    vs = short_vectors(A2, 2)
    assert sorted(vs) == [(0, 1), (1, 0), (1, 1)]


def test_short_vectors_e8_roots():
    assert len(short_vectors(E8_GRAM, 2)) == 120


def test_short_vectors_match_box_oracle():
    corpus = [
        GramLattice([[-3]]),
        A2,
        GramLattice([[-2, 1], [1, -3]]),
        GramLattice.diagonal([-1, -2, -5]),
        GramLattice([[-2, 0, 1], [0, -3, 1], [1, 1, -4]]),
        orthogonal_complement((1, 1, 2, 2)).domain,
    ]
    for lattice in corpus:
        for bound in (1, 2, 4, 6):
            assert set(short_vectors(lattice, bound)) == short_vectors_box_oracle(
                lattice, bound
            )


# -- isometry ---------------------------------------------------------------------


def corpus_lattices():
    return [
        GramLattice(()),
        GramLattice([[-1]]),
        GramLattice([[-5]]),
        A2,
        GramLattice([[-2, -1], [-1, -2]]),
        GramLattice.diagonal([-1, -4]),
        GramLattice.diagonal([-2, -3]),
        E8_GRAM,
        orthogonal_complement((1, 1, 2)).domain,
        orthogonal_complement((1, 2, 2)).domain,
    ]


def check_witness(lat1, lat2, witness):
    for i in range(lat1.rank):
        for j in range(lat1.rank):
            w = sum(
                witness[i][a] * lat2.gram[a][b] * witness[j][b]
                for a in range(lat2.rank)
                for b in range(lat2.rank)
            )
            assert w == lat1.gram[i][j]


def test_isometric_reflexive_on_corpus():
    for lattice in corpus_lattices():
        witness = is_isometric(lattice, lattice)
        assert witness is not None
        check_witness(lattice, lattice, witness)


def test_isometric_sign_change():
    w = is_isometric(A2, GramLattice([[-2, -1], [-1, -2]]))
    assert w is not None


def test_not_isometric_distinct_norms():
    assert is_isometric(GramLattice([[-5]]), GramLattice([[-1]])) is None
    five_one = GramLattice([[-5]]).direct_sum(GramLattice([[-1]]))
    assert is_isometric(five_one, GramLattice.diagonal([-1, -4])) is None


def test_isometric_symmetric_and_unimodular_invariant():
    rng = random.Random(11)
    pool = corpus_lattices()
    for lattice in pool:
        n = lattice.rank
        if n == 0:
            continue
        # random determinant +-1 change of basis
        u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for _ in range(8):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = rng.choice((-2, -1, 1, 2))
                for k in range(n):
                    u[i][k] += c * u[j][k]
        assert abs(_det_bareiss(u)) == 1
        g2 = [
            [
                sum(
                    u[i][a] * lattice.gram[a][b] * u[j][b]
                    for a in range(n)
                    for b in range(n)
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        other = GramLattice(g2)
        w1 = is_isometric(lattice, other)
        w2 = is_isometric(other, lattice)
        assert w1 is not None and w2 is not None
        check_witness(lattice, other, w1)
        check_witness(other, lattice, w2)
    for a in pool:
        for b in pool:
            assert (is_isometric(a, b) is None) == (is_isometric(b, a) is None)


# -- decomposition ------------------------------------------------------------------


def test_summands_diagonal():
    for n in (1, 2, 4):
        s = indecomposable_summands(GramLattice.diagonal([-1] * n))
        assert len(s) == n
        assert all(x.gram == ((-1,),) for x in s)


def test_summands_block_sum():
    both = A2.direct_sum(GramLattice([[-2]]))
    s = indecomposable_summands(both)
    assert [x.rank for x in s] == [1, 2]
    assert [discriminant(x) for x in s] == [2, 3]


def test_summands_e8_indecomposable():
    assert len(indecomposable_summands(E8_GRAM)) == 1


def test_summands_hidden_split():
    # [[-2,2],[2,-5]] is diag(-2,-3) in disguise
    s = indecomposable_summands(GramLattice([[-2, 2], [2, -5]]))
    assert [discriminant(x) for x in s] == [2, 3]


def test_summands_partition_property():
    for lattice in corpus_lattices():
        if lattice.rank == 0:
            continue
        parts = indecomposable_summands(lattice)
        total = parts[0]
        for part in parts[1:]:
            total = total.direct_sum(part)
        assert sum(p.rank for p in parts) == lattice.rank
        prod = 1
        for p in parts:
            prod *= discriminant(p)
        assert prod == discriminant(lattice)
        assert is_isometric(total, lattice) is not None


def test_summands_rank_cap():
    with pytest.raises(ValueError):
        indecomposable_summands(GramLattice.diagonal([-1] * 17))
    assert len(indecomposable_summands(GramLattice.diagonal([-1] * 17), max_rank=20)) == 17


# -- embeddings ----------------------------------------------------------------------


def test_embedding_validates():
    with pytest.raises(ValueError):
        Embedding(A2, 3, ((1, 0, 0), (0, 1, 0)))
    emb = Embedding(A2, 3, ((1, -1, 0), (0, 1, -1)))
    assert emb.ambient_rank == 3


def test_embeds_a2_in_rank3():
    emb = embeds_in_diagonal(A2, 3)
    assert emb is not None
    assert emb.domain is A2


def test_embeds_rank0():
    emb = embeds_in_diagonal(GramLattice(()), 4)
    assert emb is not None and emb.images == ()


def test_e8_does_not_embed():
    assert embeds_in_diagonal(E8_GRAM, 8) is None


def test_embeds_rank_guard():
    with pytest.raises(ValueError):
        embeds_in_diagonal(A2, 1)


def test_reduce_preserves_lattice():
    lattice = orthogonal_complement((1, 1, 2, 3)).domain
    u, g = _reduce_gram_basis(lattice.gram)
    assert abs(_det_bareiss(u)) == 1
    assert is_isometric(GramLattice(g), lattice) is not None
