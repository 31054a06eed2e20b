"""Negative continued fractions, lens spaces, and their linear lattices.

A lens space is stored in the canonical form L(p, q) with p > q >= 1
coprime, oriented as -p/q surgery on the unknot.  Its linear lattice is
the tridiagonal form read off the negative continued fraction
expansion; connected sums get block sums.  The realizability search
asks whether such a block sum is the orthogonal complement of a
changemaker vector, and certifies negative answers with the number of
candidates tested.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .changemakers import Changemaker, complement_lattice, enumerate_changemakers
from .lattices import DEFAULT_MAX_RANK, GramLattice, discriminant, is_isometric


def neg_cf(p, q):
    """Negative continued fraction expansion of p/q with all terms >= 2.

    Requires p > q >= 1 coprime; the expansion [x1, ..., xn] satisfies
    p/q = x1 - 1/(x2 - 1/(... - 1/xn)) and is unique.
    """
    p, q = int(p), int(q)
    if not (p > q >= 1):
        raise ValueError(f"need p > q >= 1, got {p}/{q}")
    if gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")
    terms = []
    while q > 0:
        x = -(-p // q)  # ceil(p/q)
        terms.append(x)
        p, q = q, x * q - p
    return terms


def evaluate_cf(terms):
    """Exact value of [x1, ..., xn] as a reduced fraction (p, q).

    Strict evaluator for all-integer expansions with every term >= 2;
    the plumbing module carries its own relaxed arithmetic for chains
    with arbitrary rational framings.
    """
    if not terms:
        raise ValueError("empty expansion (the rank-0 chain is the infinity filling)")
    if any(t < 2 for t in terms):
        raise ValueError("strict evaluation requires every term >= 2")
    val = Fraction(terms[-1])
    for x in reversed(terms[:-1]):
        val = x - 1 / val
    return val.numerator, val.denominator


@dataclass(frozen=True)
class LensSpace:
    """The lens space L(p, q), canonically with p > q >= 1 coprime."""

    p: int
    q: int

    def __post_init__(self):
        if not (self.p > self.q >= 1):
            raise ValueError(f"need p > q >= 1, got L({self.p},{self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"L({self.p},{self.q}) needs coprime parameters")

    @classmethod
    def from_surgery(cls, r):
        """Canonical form of the unknot filling U(r) for rational r.

        U(-p/q) = L(p, q); positive slopes go through the orientation
        reversal -L(p, q) = L(p, p - q).  Integer homology sphere
        fillings (|numerator| <= 1) and the 0-slope have no lens space
        form and raise.
        """
        r = Fraction(r)
        p, q = abs(r.numerator), r.denominator
        if p <= 1:
            raise ValueError(f"U({r}) is not a lens space with p >= 2")
        q %= p
        if r < 0:
            return cls(p, q)
        return cls(p, p - q)

    def reversed_orientation(self):
        return LensSpace(self.p, self.p - self.q)

    def __repr__(self):
        return f"L({self.p},{self.q})"


@dataclass(frozen=True)
class LensSum:
    """An ordered connected sum of lens spaces."""

    summands: tuple[LensSpace, ...]

    def __init__(self, summands):
        summands = tuple(summands)
        if not summands:
            raise ValueError("a lens sum needs at least one summand")
        if not all(isinstance(s, LensSpace) for s in summands):
            raise ValueError("summands must be LensSpace values")
        object.__setattr__(self, "summands", summands)

    @property
    def m(self):
        return len(self.summands)

    def __repr__(self):
        return "#".join(repr(s) for s in self.summands)

    def spec_text(self):
        """The CLI text syntax p1/q1+p2/q2+..."""
        return "+".join(f"{s.p}/{s.q}" for s in self.summands)

    def to_json_obj(self):
        return {"summands": [{"p": s.p, "q": s.q} for s in self.summands]}

    @classmethod
    def from_json_obj(cls, obj):
        return cls([LensSpace(d["p"], d["q"]) for d in obj["summands"]])


_SUM_TERM = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


def parse_lens_sum(text):
    """Parse the text syntax "p1/q1+p2/q2+..." into a LensSum."""
    parts = text.split("+")
    summands = []
    for part in parts:
        m = _SUM_TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse lens space term {part!r}")
        summands.append(LensSpace(int(m.group(1)), int(m.group(2))))
    return LensSum(summands)


def linear_lattice(ls):
    """Tridiagonal Gram matrix of the canonical chain plumbing for L(p, q).

    Diagonal entries are the negated continued fraction terms and the
    off-diagonal entries are 1; the discriminant works out to p and the
    lattice is indecomposable.
    """
    terms = neg_cf(ls.p, ls.q)
    n = len(terms)
    rows = [[0] * n for _ in range(n)]
    for i, x in enumerate(terms):
        rows[i][i] = -x
        if i + 1 < n:
            rows[i][i + 1] = 1
            rows[i + 1][i] = 1
    return GramLattice(rows)


def connected_sum_lattice(sum_):
    """Block sum of the summands' linear lattices."""
    lattice = linear_lattice(sum_.summands[0])
    for ls in sum_.summands[1:]:
        lattice = lattice.direct_sum(linear_lattice(ls))
    return lattice


def h1_order(sum_):
    """Order of the first homology of the connected sum: the product of p's."""
    out = 1
    for ls in sum_.summands:
        out *= ls.p
    return out


@dataclass(frozen=True)
class RealizabilityResult:
    """Outcome of a changemaker realizability search.

    A `witness` of None is a certified negative: every changemaker of
    the search rank and norm was tested (`candidates` of them).
    """

    witness: Changemaker | None
    candidates: int
    norm: int
    rank: int
    pad: int

    @property
    def realizable(self):
        return self.witness is not None


def is_changemaker_realizable(sum_, pad=0, max_rank=4 * DEFAULT_MAX_RANK):
    """Search for a changemaker whose complement is the sum's lattice.

    Scans every changemaker of ambient rank rank(sum) + 1 + pad and
    norm equal to the homology order, in lexicographic order, and
    returns the first one whose complement is isometric to the linear
    lattice of the connected sum (padded by pad diagonal <-1> summands
    when pad > 0).  The result carries the exhaustiveness certificate.
    """
    if not (0 <= pad <= 3):
        raise ValueError("pad must be between 0 and 3")
    target = connected_sum_lattice(sum_)
    for _ in range(pad):
        target = target.direct_sum(GramLattice([[-1]]))
    norm = h1_order(sum_)
    rank = target.rank + 1
    if rank > max_rank:
        raise ValueError(f"search rank {rank} exceeds the configured maximum")
    tested = 0
    found = None
    for cm in enumerate_changemakers(norm, rank):
        tested += 1
        comp = complement_lattice(cm)
        if is_isometric(comp, target) is not None:
            found = cm
            break
    return RealizabilityResult(found, tested, norm, rank, pad)
