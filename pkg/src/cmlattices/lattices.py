"""Exact integer lattice computations inside negative definite forms.

Everything here is integer or rational arithmetic; there is no floating
point anywhere.  Lattices are presented by symmetric negative definite
Gram matrices, and ambient vectors live in a negative diagonal lattice
where the basis vectors e_i pair as <e_i, e_j> = -delta_ij.

The enumeration routines (short vectors, isometry testing, embeddings
into diagonal lattices) are exhaustive backtracking searches with exact
pruning bounds, so a "not found" answer is a certificate, not a guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd, isqrt

DEFAULT_MAX_RANK = 16


def pairing(v, w):
    """Pairing of two ambient vectors in the negative diagonal lattice."""
    if len(v) != len(w):
        raise ValueError(f"ambient rank mismatch: {len(v)} vs {len(w)}")
    return -sum(a * b for a, b in zip(v, w))


def _det_bareiss(rows):
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(row) for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _is_positive_definite(rows):
    # Bareiss pivots are the leading principal minors (Sylvester's criterion).
    n = len(rows)
    m = [list(row) for row in rows]
    prev = 1
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return True


@dataclass(frozen=True)
class GramLattice:
    """An integer lattice presented by a negative definite Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __init__(self, gram):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        if not _is_positive_definite([[-x for x in row] for row in gram]):
            raise ValueError("Gram matrix must be negative definite")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self):
        return len(self.gram)

    def direct_sum(self, other):
        n, m = self.rank, other.rank
        rows = []
        for i in range(n):
            rows.append(tuple(self.gram[i]) + (0,) * m)
        for j in range(m):
            rows.append((0,) * n + tuple(other.gram[j]))
        return GramLattice(rows)

    def to_rows(self):
        """Gram matrix as plain lists, the JSON wire format."""
        return [list(row) for row in self.gram]

    @classmethod
    def from_rows(cls, rows):
        return cls(rows)

    @classmethod
    def diagonal(cls, entries):
        """Diagonal lattice with the given (negative) diagonal entries."""
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __repr__(self):
        return f"GramLattice({self.to_rows()})"


ZERO_LATTICE = GramLattice(())

# The rank-8 even unimodular negative definite lattice, in a root basis
# ordered so that node 0 is the trivalent vertex of the plumbing tree.
E8_GRAM = GramLattice(
    [
        [-2, 1, 1, 0, 1, 0, 0, 0],
        [1, -2, 0, 0, 0, 0, 0, 0],
        [1, 0, -2, 1, 0, 0, 0, 0],
        [0, 0, 1, -2, 0, 0, 0, 0],
        [1, 0, 0, 0, -2, 1, 0, 0],
        [0, 0, 0, 0, 1, -2, 1, 0],
        [0, 0, 0, 0, 0, 1, -2, 1],
        [0, 0, 0, 0, 0, 0, 1, -2],
    ]
)


def gram_of_vectors(vectors):
    """Gram matrix of ambient vectors under the negative diagonal pairing."""
    return [[pairing(v, w) for w in vectors] for v in vectors]


@dataclass(frozen=True)
class Embedding:
    """A witness that `domain` embeds in the negative diagonal lattice.

    `images[i]` is the ambient image of the i-th basis vector of the
    domain; construction checks that pairwise pairings reproduce the
    domain Gram matrix exactly.
    """

    domain: GramLattice
    ambient_rank: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        images = tuple(tuple(int(x) for x in v) for v in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.domain.rank:
            raise ValueError("one image per domain basis vector required")
        for v in images:
            if len(v) != self.ambient_rank:
                raise ValueError("image has wrong ambient rank")
        for i, v in enumerate(images):
            for j, w in enumerate(images):
                if pairing(v, w) != self.domain.gram[i][j]:
                    raise ValueError("images do not realize the domain Gram matrix")


def discriminant(lattice):
    """Absolute value of the Gram determinant; 1 for the rank-0 lattice."""
    return abs(_det_bareiss(lattice.gram))


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def orthogonal_complement(sigma):
    """Saturated orthogonal complement of a primitive vector.

    Returns an Embedding whose images form a basis of
    {v : <v, sigma> = 0} inside the negative diagonal lattice.  The
    basis is produced by exact column reduction (Hermite style), so any
    ambient vector orthogonal to sigma is an integer combination of it.
    """
    sigma = tuple(int(x) for x in sigma)
    n = len(sigma)
    if n == 0 or all(x == 0 for x in sigma):
        raise ValueError("zero vector has no complement basis")
    if any(x < 0 for x in sigma):
        raise ValueError("entries must be nonnegative")
    g = 0
    for x in sigma:
        g = gcd(g, x)
    if g != 1:
        raise ValueError("vector must be primitive (gcd of entries 1)")

    s = list(sigma)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivot = None
    for j in range(n):
        if s[j] == 0:
            continue
        if pivot is None:
            pivot = j
            continue
        a, b = s[pivot], s[j]
        g, x, y = _xgcd(a, b)
        colp, colj = cols[pivot], cols[j]
        newp = [x * cp + y * cj for cp, cj in zip(colp, colj)]
        newj = [-(b // g) * cp + (a // g) * cj for cp, cj in zip(colp, colj)]
        cols[pivot], cols[j] = newp, newj
        s[pivot], s[j] = g, 0

    basis = [tuple(cols[j]) for j in range(n) if j != pivot]
    lattice = GramLattice(gram_of_vectors(basis))
    emb = Embedding(lattice, n, tuple(basis))
    # Saturation certificate: the complement of a primitive vector has
    # discriminant |<sigma, sigma>|.
    if discriminant(lattice) != -pairing(sigma, sigma):
        raise AssertionError("complement basis failed the saturation check")
    return emb


# -- exact quadratic form enumeration ---------------------------------------


@lru_cache(maxsize=None)
def _ldl(gram):
    """LDL data for the positive form -G: Q(x) = sum_i d_i (x_i + sum_{j>i} l_ij x_j)^2."""
    n = len(gram)
    a = [[Fraction(-gram[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        for j in range(i + 1, n):
            l[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= d[i] * l[i][j] * l[i][k]
    return tuple(d), tuple(tuple(row) for row in l)


def _floor_sqrt_fraction(fr):
    """Largest integer m >= 0 with m*m <= fr, or -1 if fr < 0."""
    if fr < 0:
        return -1
    num, den = fr.numerator, fr.denominator
    m = isqrt(num // den)
    while (m + 1) * (m + 1) * den <= num:
        m += 1
    return m


def _enum_ellipsoid(gram, center, bound):
    """All integer x with Q(x - center) <= bound for Q = -gram, exactly.

    `center` is a tuple of Fractions; yields tuples in no particular
    order (callers sort).  Uses the LDL decomposition level by level
    with exact interval bounds, so the enumeration is complete.
    """
    n = len(gram)
    if n == 0:
        if bound >= 0:
            yield ()
        return
    d, l = _ldl(gram)
    lnz = [
        tuple((j, l[i][j]) for j in range(i + 1, n) if l[i][j] != 0)
        for i in range(n)
    ]
    bound = Fraction(bound)
    x = [0] * n

    def rec(i, rem):
        # rem = bound minus contributions of levels > i
        t = center[i] - sum(lij * (x[j] - center[j]) for j, lij in lnz[i])
        radius = _floor_sqrt_fraction(rem / d[i])
        if radius < 0:
            return
        lo = ceil(t) - radius - 1
        hi = floor(t) + radius + 1
        for xi in range(lo, hi + 1):
            contrib = d[i] * (xi - t) ** 2
            if contrib <= rem:
                x[i] = xi
                if i == 0:
                    yield tuple(x)
                else:
                    yield from rec(i - 1, rem - contrib)
        x[i] = 0

    yield from rec(n - 1, bound)


def _qf_minimize(gram, center):
    """Exact minimum of Q(x - center) over integer x, for Q = -gram.

    Branch and bound on the LDL levels: candidates at each level are
    visited nearest-to-center first and pruned against the best value
    found so far, so the search certifies the global minimum.
    """
    n = len(gram)
    if n == 0:
        return Fraction(0), ()
    d, l = _ldl(gram)
    # off-diagonal LDL rows are sparse for chain-like forms
    lnz = [
        tuple((j, l[i][j]) for j in range(i + 1, n) if l[i][j] != 0)
        for i in range(n)
    ]
    x = [0] * n
    # seed the incumbent with the rounded center so pruning starts hot
    best_x = tuple(
        (2 * c.numerator + c.denominator) // (2 * c.denominator) for c in center
    )
    best_val = Fraction(0)
    for i in range(n):
        yi = best_x[i] - center[i] + sum(
            lij * (best_x[j] - center[j]) for j, lij in lnz[i]
        )
        best_val += d[i] * yi * yi

    def rec(i, acc):
        nonlocal best_val, best_x
        t = center[i] - sum(lij * (x[j] - center[j]) for j, lij in lnz[i])
        lo = floor(t)
        hi = lo + 1
        while True:
            # frontier candidate nearest to the center; everything not yet
            # visited on either side is at least this far away
            if t - lo <= hi - t:
                xi = lo
                lo -= 1
            else:
                xi = hi
                hi += 1
            contrib = d[i] * (xi - t) ** 2
            if acc + contrib >= best_val:
                return
            x[i] = xi
            if i == 0:
                best_val = acc + contrib
                best_x = tuple(x)
            else:
                rec(i - 1, acc + contrib)

    rec(n - 1, Fraction(0))
    return best_val, best_x


def _norm(gram, v):
    """Positive norm -<v, v> of an abstract coordinate vector."""
    n = len(v)
    return -sum(gram[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def _bilinear(gram, v, w):
    n = len(v)
    return sum(gram[i][j] * v[i] * w[j] for i in range(n) for j in range(n))


def short_vectors(lattice, bound):
    """All nonzero vectors with |<v,v>| <= bound, one per {v, -v} pair.

    Coordinates are with respect to the Gram basis.  The representative
    has positive first nonzero coordinate; output is sorted by
    (norm, coordinates).
    """
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    n = lattice.rank
    if n == 0:
        return []
    zero = (Fraction(0),) * n
    out = []
    for v in _enum_ellipsoid(lattice.gram, zero, bound):
        if all(x == 0 for x in v):
            continue
        for x in v:
            if x != 0:
                if x > 0:
                    out.append(v)
                break
    out.sort(key=lambda v: (_norm(lattice.gram, v), v))
    return out


# -- basis reduction ---------------------------------------------------------


def _reduce_gram_basis(gram):
    """Greedy exact pairwise reduction of a Gram basis.

    Returns (rows, new_gram) where `rows` expresses the new basis in
    terms of the old one.  Repeatedly replaces b_i by b_i - r*b_j when
    that strictly shrinks the norm; purely integer arithmetic.
    """
    n = len(gram)
    g = [list(row) for row in gram]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                qj = -g[j][j]
                bij = -g[i][j]
                r = (2 * bij + qj) // (2 * qj)
                if r == 0:
                    continue
                # Q(b_i - r b_j) = Q(b_i) - 2 r bij + r^2 qj
                if -2 * r * bij + r * r * qj < 0:
                    for k in range(n):
                        u[i][k] -= r * u[j][k]
                    gii = g[i][i] - 2 * r * g[i][j] + r * r * g[j][j]
                    for k in range(n):
                        if k != i:
                            g[i][k] -= r * g[j][k]
                            g[k][i] = g[i][k]
                    g[i][i] = gii
                    changed = True
    # deterministic presentation: sort by (norm, transform row)
    order = sorted(range(n), key=lambda i: (-g[i][i], u[i]))
    u = [u[i] for i in order]
    g = [[g[i][j] for j in order] for i in order]
    return u, g


# -- isometry ----------------------------------------------------------------


def _norm_counts(lattice, bound):
    counts = {}
    for v in short_vectors(lattice, bound):
        q = _norm(lattice.gram, v)
        counts[q] = counts.get(q, 0) + 1
    return counts


def is_isometric(lat1, lat2):
    """Isometry witness mapping the basis of lat1 to vectors of lat2.

    Returns a tuple of rows (the image of basis vector i of lat1 in the
    coordinates of lat2) reproducing the Gram matrix of lat1 and
    spanning lat2, or None if no isometry exists.  Backtracks over
    short vectors of matching norms in lexicographic order, so the
    witness is deterministic.
    """
    n = lat1.rank
    if n != lat2.rank:
        return None
    if discriminant(lat1) != discriminant(lat2):
        return None
    if n == 0:
        return ()
    g1, g2 = lat1.gram, lat2.gram
    maxneed = max(-g1[i][i] for i in range(n))
    if _norm_counts(lat1, maxneed) != _norm_counts(lat2, maxneed):
        return None
    pool = {}
    for v in short_vectors(lat2, maxneed):
        q = _norm(g2, v)
        pool.setdefault(q, []).append(v)
    for q in pool:
        expanded = pool[q] + [tuple(-x for x in v) for v in pool[q]]
        expanded.sort()
        pool[q] = expanded

    images = []

    def rec(k):
        for w in pool.get(-g1[k][k], ()):
            ok = True
            for j in range(k):
                if _bilinear(g2, images[j], w) != g1[j][k]:
                    ok = False
                    break
            if not ok:
                continue
            images.append(w)
            if k == n - 1:
                return True
            if rec(k + 1):
                return True
            images.pop()
        return False

    if rec(0):
        witness = tuple(images)
        # equal discriminants force the images to span lat2
        assert abs(_det_bareiss(witness)) == 1
        return witness
    return None


# -- orthogonal decomposition ------------------------------------------------


def _split_vector(gram, vec, short_pool):
    """Decompose vec into indecomposable summand vectors.

    Searches for x with 0 < Q(x) <= Q(vec)/2 and <x, vec - x> = 0; if
    one exists the two halves are split recursively, otherwise vec is
    already indecomposable.
    """
    q = _norm(gram, vec)
    half = q // 2
    for x in short_pool:
        if _norm(gram, x) > half:
            break
        for cand in (x, tuple(-c for c in x)):
            if _bilinear(gram, cand, vec) == -_norm(gram, cand):
                y = tuple(a - b for a, b in zip(vec, cand))
                return _split_vector(gram, cand, short_pool) + _split_vector(
                    gram, y, short_pool
                )
    return [tuple(vec)]


def _hnf_rows(rows, width):
    """Row Hermite form of the integer row span; returns the basis rows."""
    work = [list(r) for r in rows if any(x != 0 for x in r)]
    basis = []
    col = 0
    while work and col < width:
        nz = [r for r in work if r[col] != 0]
        zeros = [r for r in work if r[col] == 0]
        if not nz:
            work = zeros
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            survivors = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(width):
                    r[k] -= q * p[k]
                if r[col] != 0:
                    survivors.append(r)
                elif any(x != 0 for x in r):
                    zeros.append(r)
            nz = survivors
        pivot = nz[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        work = zeros
        col += 1
    # normalize entries above each pivot for a deterministic basis
    for i in reversed(range(len(basis))):
        pcol = next(k for k in range(width) if basis[i][k] != 0)
        for j in range(i):
            q = basis[j][pcol] // basis[i][pcol]
            if q:
                for k in range(width):
                    basis[j][k] -= q * basis[i][k]
    return basis


def indecomposable_summands(lattice, max_rank=DEFAULT_MAX_RANK):
    """The unique finest orthogonal decomposition of a definite lattice.

    Reduces the basis, splits every basis vector into indecomposable
    vectors, and takes connected components of the graph whose edges
    are nonzero pairings between the pieces.  Summands come back sorted
    by (rank, discriminant, Gram rows) so the output is deterministic.
    """
    n = lattice.rank
    if n > max_rank:
        raise ValueError(f"rank {n} exceeds the configured maximum {max_rank}")
    if n == 0:
        return []
    u, g = _reduce_gram_basis(lattice.gram)
    maxdiag = max(-g[i][i] for i in range(n))
    glat = GramLattice(g)
    pool = short_vectors(glat, max(1, maxdiag // 2))

    pieces = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        pieces.extend(_split_vector(g, e, pool))
    # dedupe up to sign, keeping first occurrence order
    seen = set()
    uniq = []
    for p in pieces:
        canon = p
        for x in p:
            if x != 0:
                if x < 0:
                    canon = tuple(-c for c in p)
                break
        if canon not in seen:
            seen.add(canon)
            uniq.append(canon)

    # connected components under nonzero pairing
    m = len(uniq)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(m):
        for b in range(a + 1, m):
            if _bilinear(g, uniq[a], uniq[b]) != 0:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra

    groups = {}
    for idx in range(m):
        groups.setdefault(find(idx), []).append(uniq[idx])

    summands = []
    total_rank = 0
    for group in groups.values():
        basis = _hnf_rows(group, n)
        block = [[_bilinear(g, a, b) for b in basis] for a in basis]
        _, reduced = _reduce_gram_basis(block)
        summands.append(GramLattice(reduced))
        total_rank += len(basis)
    assert total_rank == n, "decomposition must partition the rank"
    summands.sort(key=lambda s: (s.rank, discriminant(s), s.gram))
    return summands


# -- embeddings into diagonal lattices ---------------------------------------


@lru_cache(maxsize=None)
def _sphere_vectors(n, norm):
    """All w in Z^n with sum of squares equal to norm, sorted."""
    out = []
    v = [0] * n

    def rec(i, rem):
        if i == n:
            if rem == 0:
                out.append(tuple(v))
            return
        if rem < 0:
            return
        r = isqrt(rem)
        for x in range(-r, r + 1):
            v[i] = x
            rec(i + 1, rem - x * x)
        v[i] = 0

    rec(0, norm)
    out.sort()
    return tuple(out)


def embeds_in_diagonal(lattice, n):
    """Embedding of the lattice into the rank-n negative diagonal lattice.

    Backtracks over ambient vectors of each required norm; the first
    basis vector is restricted to one representative per signed
    permutation orbit, which loses no embeddings.  Returns None when
    the exhaustive search finds nothing.
    """
    if lattice.rank > n:
        raise ValueError("lattice rank exceeds the ambient rank")
    if lattice.rank == 0:
        return Embedding(ZERO_LATTICE, n, ())
    g = lattice.gram
    r = lattice.rank
    images = []

    def candidates(k):
        norm = -g[k][k]
        sphere = _sphere_vectors(n, norm)
        if k == 0:
            return [
                w
                for w in sphere
                if all(x >= 0 for x in w)
                and all(w[i] >= w[i + 1] for i in range(n - 1))
            ]
        return sphere

    def rec(k):
        for w in candidates(k):
            if any(pairing(w, images[j]) != g[j][k] for j in range(k)):
                continue
            images.append(w)
            if k == r - 1:
                return True
            if rec(k + 1):
                return True
            images.pop()
        return False

    if rec(0):
        return Embedding(lattice, n, tuple(images))
    return None
