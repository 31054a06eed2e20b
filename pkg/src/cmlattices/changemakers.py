"""Changemaker vectors and their characteristic covector arithmetic.

A changemaker is a nondecreasing nonnegative integer vector whose
subset sums realize every value from 0 up to the total.  Seen inside a
negative diagonal lattice, its orthogonal complement is the obstruction
lattice this package is built around, and the characteristic covectors
of the ambient lattice (all-odd integer vectors) carry the torsion
bookkeeping of sharp fillings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .lattices import (
    GramLattice,
    _reduce_gram_basis,
    orthogonal_complement,
    pairing,
)

# Correction term of the Poincare homology sphere, oriented so that it
# bounds a negative definite plumbing; the sharp-filling inequality uses
# 4*d = 8.  Exposed as a constant rather than computed.
POINCARE_D = Fraction(2)


class EmptyCovectorClassError(ValueError):
    """No characteristic covector of the congruence class fits in the box."""


def _check_sorted_nonnegative(sigma):
    if any(x < 0 for x in sigma):
        raise ValueError("entries must be nonnegative")
    if any(sigma[i] > sigma[i + 1] for i in range(len(sigma) - 1)):
        raise ValueError("entries must be nondecreasing")


def subset_sums_cover(tau):
    """Whether the subset sums of tau hit every integer in [0, sum(tau)].

    Bitset dynamic programming: bit k of `reach` records whether k is a
    subset sum, so the test is a single mask comparison at the end.
    """
    tau = tuple(int(x) for x in tau)
    if any(x < 0 for x in tau):
        raise ValueError("entries must be nonnegative")
    total = sum(tau)
    reach = 1
    for x in tau:
        reach |= reach << x
    return reach == (1 << (total + 1)) - 1


def is_changemaker(sigma, literal_tail_condition=False):
    """Whether a nondecreasing nonnegative vector is a changemaker.

    The working condition is sigma_i <= 1 + sum(sigma_j for j < i) for
    every i, the sum running over all earlier indices including the
    first; this is exactly equivalent to subset_sums_cover.  The
    `literal_tail_condition` flag instead starts the sum at index 1 and
    skips the i = 0 constraint; it is kept for documentation only and
    is strictly weaker (it accepts e.g. (2,) and rejects (1, 2)).
    """
    sigma = tuple(int(x) for x in sigma)
    _check_sorted_nonnegative(sigma)
    if literal_tail_condition:
        tail = 0
        for i in range(1, len(sigma)):
            if sigma[i] > tail + 1:
                return False
            tail += sigma[i]
        return True
    prefix = 0
    for x in sigma:
        if x > prefix + 1:
            return False
        prefix += x
    return True


@dataclass(frozen=True)
class Changemaker:
    """A changemaker vector together with its norm p = sum of squares."""

    sigma: tuple[int, ...]

    def __init__(self, sigma):
        sigma = tuple(int(x) for x in sigma)
        if not is_changemaker(sigma):
            raise ValueError(f"{sigma} is not a changemaker vector")
        object.__setattr__(self, "sigma", sigma)

    @property
    def norm(self):
        return sum(x * x for x in self.sigma)

    @property
    def rank(self):
        return len(self.sigma)

    def __repr__(self):
        return f"Changemaker({list(self.sigma)})"


def enumerate_changemakers(norm, rank):
    """All changemakers of the given ambient rank and norm, lexicographically.

    Leading zeros are permitted; entries are nondecreasing, so the
    lexicographic order is over the full coordinate tuples.
    """
    if norm < 1 or rank < 1:
        raise ValueError("norm and rank must be positive")
    out = []
    sigma = [0] * rank

    def rec(i, prev, prefix_sum, rem):
        if i == rank:
            if rem == 0:
                out.append(Changemaker(tuple(sigma)))
            return
        slots = rank - i
        lo = prev
        hi = prefix_sum + 1
        for val in range(lo, hi + 1):
            need = rem - val * val
            if need < 0:
                break
            # remaining entries are >= val each
            if need < (slots - 1) * val * val:
                continue
            sigma[i] = val
            rec(i + 1, val, prefix_sum + val, need)
        sigma[i] = 0

    rec(0, 0, 0, norm)
    return out


def complement_lattice(cm):
    """Gram matrix of the orthogonal complement of a changemaker.

    The complement sits in the negative diagonal lattice of the
    changemaker's ambient rank; its discriminant equals the norm.
    The returned basis is reduced, so Gram entries stay small.
    """
    if isinstance(cm, Changemaker):
        sigma = cm.sigma
    else:
        sigma = tuple(int(x) for x in cm)
    if all(x == 0 for x in sigma):
        raise ValueError("zero changemaker has no complement")
    emb = orthogonal_complement(sigma)
    _, reduced = _reduce_gram_basis(emb.domain.gram)
    return GramLattice(reduced)


def complement_embedding(cm):
    """Like complement_lattice but keeps the ambient witness basis."""
    sigma = cm.sigma if isinstance(cm, Changemaker) else tuple(int(x) for x in cm)
    return orthogonal_complement(sigma)


# -- characteristic covectors -------------------------------------------------


def is_characteristic(c):
    """Membership in Char of the negative diagonal lattice: all entries odd."""
    return all(x % 2 != 0 for x in c)


class CovectorSearch(NamedTuple):
    """Result of a congruence-class covector maximization."""

    defect: int
    witness: tuple[int, ...]
    certified: bool


def _odd_values(box):
    top = box if box % 2 == 1 else box - 1
    return tuple(range(-top, top + 1, 2))


def min_char_defect(cm, i, box=5):
    """Least-negative value of <c,c> + rank over a covector congruence class.

    Scans characteristic covectors c (all entries odd, |c_j| <= box) of
    the ambient diagonal lattice whose pairing against the changemaker
    satisfies <c, sigma> + p = 2i (mod 2p), and maximizes
    <c, c> + (n + 1), which is always <= 0.  Returns the maximum, a
    lexicographically smallest witness, and whether the box certifies
    global optimality (any covector outside the box scores at most
    1 - (box + 2)^2).
    """
    cm = cm if isinstance(cm, Changemaker) else Changemaker(cm)
    p = cm.norm
    if p < 1:
        raise ValueError("changemaker must be nonzero")
    if box < 1:
        raise ValueError("box must be positive")
    if not (0 <= 2 * i <= p):
        raise ValueError(f"spin-c index {i} out of range 0 <= i <= p/2")
    sigma = cm.sigma
    n1 = len(sigma)
    target = (2 * i - p) % (2 * p)
    values = _odd_values(box)

    # best[j][r] = max over suffix coordinates j..n of sum(-c_k^2) with
    # sum(c_k * sigma_k) = r (mod 2p); -inf when the class is empty.
    NEG = None
    best = [dict() for _ in range(n1 + 1)]
    best[n1][0] = 0
    for j in reversed(range(n1)):
        cur = best[j]
        nxt = best[j + 1]
        for r, score in nxt.items():
            for v in values:
                rr = (r + v * sigma[j]) % (2 * p)
                cand = score - v * v
                if cur.get(rr, NEG) is None or cur[rr] < cand:
                    cur[rr] = cand

    # <c, sigma> = -sum(c_j sigma_j) = 2i - p (mod 2p)
    want = (-target) % (2 * p)
    if want not in best[0]:
        raise EmptyCovectorClassError(
            f"no covector with |entries| <= {box} in class i={i} for {cm}"
        )
    total = best[0][want] + n1

    # reconstruct the lexicographically smallest witness
    witness = []
    r = want
    score_needed = best[0][want]
    for j in range(n1):
        for v in values:
            rr = (r - v * sigma[j]) % (2 * p)
            tail = best[j + 1].get(rr)
            if tail is not None and tail - v * v == score_needed:
                witness.append(v)
                r = rr
                score_needed = tail
                break
        else:
            raise AssertionError("witness reconstruction failed")
    witness = tuple(witness)
    assert pairing(witness, sigma) % (2 * p) == (2 * i - p) % (2 * p)

    certified = total > 1 - (box + 2) ** 2
    return CovectorSearch(total, witness, certified)


# -- torsion profiles ----------------------------------------------------------


@dataclass(frozen=True)
class TorsionProfile:
    """Torsion coefficients t_i for i >= 0, with their vanishing threshold.

    `t` stores the computed prefix; `value(i)` extends by zero.  `g` is
    the start of the all-zero tail and `f` the first index with t_i = 1,
    when one exists.  The shape flags record whether the sequence is
    nonincreasing and vanishes exactly from g on.
    """

    t: tuple[int, ...]
    g: int
    f: int | None
    nonincreasing: bool
    vanishes_exactly_at_g: bool

    def value(self, i):
        i = abs(i)
        return self.t[i] if i < len(self.t) else 0

    @classmethod
    def from_values(cls, values):
        values = tuple(int(v) for v in values)
        g = len(values)
        while g > 0 and values[g - 1] == 0:
            g -= 1
        f = None
        for idx, v in enumerate(values):
            if v == 1:
                f = idx
                break
        noninc = all(values[i] >= values[i + 1] for i in range(len(values) - 1))
        exact = all(v > 0 for v in values[:g])
        return cls(values, g, f, noninc, exact)


def cm_torsion_profile(cm, box=5):
    """Torsion coefficients forced on a changemaker by sharp equality.

    For odd norm p = 2g - 1 the maximal covector defect in class i pins
    t_i = (8 - defect) / 8 for 0 <= i <= (p-1)/2.  A non-integral or
    negative value cannot happen for genuine covector maxima and is
    reported as an error, as is a congruence class with no
    representative inside the box.
    """
    cm = cm if isinstance(cm, Changemaker) else Changemaker(cm)
    p = cm.norm
    if p % 2 == 0:
        raise ValueError("torsion profiles require odd norm")
    values = []
    for i in range((p - 1) // 2 + 1):
        res = min_char_defect(cm, i, box)
        num = 8 - res.defect
        if num < 0 or num % 8 != 0:
            raise ValueError(
                f"class i={i} gives defect {res.defect}, not a torsion value"
            )
        values.append(num // 8)
    values.append(0)
    profile = TorsionProfile.from_values(values)
    expected_g = (p + 1) // 2
    if profile.g != expected_g:
        raise ValueError(
            f"profile vanishes from {profile.g}, expected genus {expected_g}"
        )
    return profile
