"""Plumbing forests of unknots and their chain-reduction moves.

Diagrams are abstract forests: every component is an unknot, every edge
is a single positive clasp, and framings are exact rationals or the
infinity marker.  This is enough to model chain and star diagrams and
the two moves used to split them: the slam-dunk, which absorbs a leaf
into its neighbor's framing by f -> f - 1/r, and deletion of an
infinity-framed node, which splits its neighbors from one another.

Forests are immutable; every move returns a new forest and never
renames surviving nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattices import _det_bareiss
from .lens_spaces import LensSpace, neg_cf


class _Infinity:
    """The infinity framing marker (spelled `inf` in the text format)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Infinity()


def _is_inf(f):
    return f is INF


def _as_framing(value):
    if value is INF or isinstance(value, _Infinity):
        return INF
    return Fraction(value)


def framing_str(f):
    if _is_inf(f):
        return "inf"
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_framing(text):
    text = text.strip()
    if text == "inf":
        return INF
    return Fraction(text)


@dataclass(frozen=True)
class PlumbingForest:
    """A forest of framed unknots; nodes keep their insertion order."""

    nodes: tuple[tuple[str, object], ...]  # (id, framing)
    edges: frozenset[frozenset]

    def __init__(self, nodes, edges):
        nodes = tuple((str(i), _as_framing(f)) for i, f in nodes)
        ids = [i for i, _ in nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")
        idset = set(ids)
        edgeset = set()
        for e in edges:
            a, b = tuple(e)
            if a == b or a not in idset or b not in idset:
                raise ValueError(f"bad edge {a!r}--{b!r}")
            edgeset.add(frozenset((a, b)))
        # forest check: every component must be a tree
        if len(edgeset) != len(ids) - self._component_count(ids, edgeset):
            raise ValueError("diagram must be a forest (no cycles)")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(edgeset))

    @staticmethod
    def _component_count(ids, edges):
        parent = {i: i for i in ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in edges:
            a, b = tuple(e)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        return len({find(i) for i in ids})

    # -- basic queries --------------------------------------------------

    @property
    def ids(self):
        return [i for i, _ in self.nodes]

    def framing(self, node_id):
        for i, f in self.nodes:
            if i == node_id:
                return f
        raise KeyError(node_id)

    def neighbors(self, node_id):
        out = []
        for e in self.edges:
            a, b = tuple(e)
            if a == node_id:
                out.append(b)
            elif b == node_id:
                out.append(a)
        return sorted(out)

    def degree(self, node_id):
        return len(self.neighbors(node_id))

    def components(self):
        """Connected components as sorted id lists, in node order."""
        ids = self.ids
        seen = set()
        comps = []
        for i in ids:
            if i in seen:
                continue
            stack, comp = [i], []
            seen.add(i)
            while stack:
                cur = stack.pop()
                comp.append(cur)
                for nb in self.neighbors(cur):
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            comps.append(sorted(comp, key=ids.index))
        return comps

    def with_framing(self, node_id, framing):
        if node_id not in set(self.ids):
            raise KeyError(node_id)
        return PlumbingForest(
            [(i, framing if i == node_id else f) for i, f in self.nodes], self.edges
        )

    def without_node(self, node_id):
        return PlumbingForest(
            [(i, f) for i, f in self.nodes if i != node_id],
            [e for e in self.edges if node_id not in e],
        )

    def __repr__(self):
        return f"PlumbingForest({format_forest(self)!r})"


# -- text format ---------------------------------------------------------


def parse_forest(text):
    """Parse the line format: `id(framing)` tokens joined by `--`.

    Later lines may reference existing nodes by bare id, so trees can
    be described by several overlapping paths.
    """
    nodes = []
    framings = {}
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t.strip() for t in line.split("--")]
        prev = None
        for tok in tokens:
            if "(" in tok:
                if not tok.endswith(")"):
                    raise ValueError(f"bad node token {tok!r}")
                name, _, fr = tok[:-1].partition("(")
                name = name.strip()
                framing = parse_framing(fr)
                if name in framings:
                    raise ValueError(f"node {name!r} declared twice")
                framings[name] = framing
                nodes.append(name)
            else:
                name = tok
                if name not in framings:
                    raise ValueError(f"node {name!r} referenced before declaration")
            if prev is not None:
                edges.append((prev, name))
            prev = name
    return PlumbingForest([(i, framings[i]) for i in nodes], edges)


def format_forest(forest):
    """Write a forest in the line format, one maximal path per line."""
    remaining = {frozenset(e) for e in forest.edges}
    declared = set()
    ids = forest.ids
    lines = []

    def token(i):
        if i in declared:
            return i
        declared.add(i)
        return f"{i}({framing_str(forest.framing(i))})"

    for start in ids:
        # walk unused edges from this node as long as possible
        while True:
            nxt = [e for e in remaining if start in e]
            if not nxt:
                break
            path = [start]
            cur = start
            while True:
                usable = sorted(
                    (tuple(e - {cur})[0] for e in remaining if cur in e),
                    key=ids.index,
                )
                if not usable:
                    break
                nb = usable[0]
                remaining.discard(frozenset((cur, nb)))
                path.append(nb)
                cur = nb
            lines.append("--".join(token(i) for i in path))
    for i in ids:
        if i not in declared:
            lines.append(token(i))
    return "\n".join(lines)


# -- moves ----------------------------------------------------------------


def slam_dunk(forest, leaf):
    """Absorb a degree-one node into its neighbor: f -> f - 1/r.

    A 0-framed leaf sends the neighbor to infinity; an infinity-framed
    leaf is simply deleted.  Any other node degree is an error.
    """
    nbs = forest.neighbors(leaf)
    if len(nbs) != 1:
        raise ValueError(f"slam-dunk needs a degree-1 node, {leaf!r} has degree {len(nbs)}")
    (nb,) = nbs
    r = forest.framing(leaf)
    f = forest.framing(nb)
    if _is_inf(r):
        new_f = f
    elif r == 0:
        new_f = INF
    elif _is_inf(f):
        new_f = INF
    else:
        new_f = f - 1 / r
    return forest.without_node(leaf).with_framing(nb, new_f)


def delete_infinity(forest, node):
    """Remove an infinity-framed node; its neighbors become split."""
    if not _is_inf(forest.framing(node)):
        raise ValueError(f"{node!r} is not framed inf")
    return forest.without_node(node)


def expand_rational(forest):
    """Replace non-integral rational framings by integral chains.

    A node framed r keeps the first term of the ceiling continued
    fraction of |r| (signed like r) and grows a chain of meridians
    carrying the remaining terms, undoing a sequence of slam-dunks.
    The homology order is preserved.
    """
    out_nodes = list(forest.nodes)
    out_edges = [tuple(e) for e in forest.edges]
    used = set(forest.ids)
    for node_id, f in forest.nodes:
        if _is_inf(f) or f.denominator == 1:
            continue
        sign = 1 if f > 0 else -1
        terms = _ceil_cf(abs(f))
        # first term replaces the node's framing, the rest hang off it
        idx = next(k for k, (i, _) in enumerate(out_nodes) if i == node_id)
        out_nodes[idx] = (node_id, Fraction(sign * terms[0]))
        prev = node_id
        for k, t in enumerate(terms[1:], start=1):
            fresh = f"{node_id}~{k}"
            while fresh in used:
                fresh += "'"
            used.add(fresh)
            out_nodes.append((fresh, Fraction(sign * t)))
            out_edges.append((prev, fresh))
            prev = fresh
    return PlumbingForest(out_nodes, out_edges)


def _ceil_cf(r):
    """Ceiling continued fraction of a positive rational: r = t1 - 1/(t2 - ...).

    Every term after the first is >= 2; the first may be any integer.
    Matches neg_cf on fractions > 1.
    """
    terms = []
    while True:
        t = -(-r.numerator // r.denominator)
        terms.append(t)
        rem = t - r
        if rem == 0:
            return terms
        r = 1 / rem


def linking_matrix(forest):
    """Symmetric linking matrix: framings on the diagonal, 1 on edges."""
    for i, f in forest.nodes:
        if _is_inf(f) or f.denominator != 1:
            raise ValueError(f"node {i!r} has non-integral framing {framing_str(f)}")
    ids = forest.ids
    pos = {i: k for k, i in enumerate(ids)}
    n = len(ids)
    rows = [[0] * n for _ in range(n)]
    for k, (i, f) in enumerate(forest.nodes):
        rows[k][k] = int(f)
    for e in forest.edges:
        a, b = tuple(e)
        rows[pos[a]][pos[b]] = 1
        rows[pos[b]][pos[a]] = 1
    return rows


def h1_order(forest):
    """Order of the first homology of the surgered manifold; 0 means infinite.

    Infinity-framed nodes are deleted first (they contribute trivial
    fillings) and rational framings are expanded to integral chains, so
    the order is the absolute determinant of an integral linking matrix.
    """
    for i in list(forest.ids):
        if _is_inf(forest.framing(i)):
            forest = delete_infinity(forest, i)
    forest = expand_rational(forest)
    return abs(_det_bareiss(linking_matrix(forest)))


# -- canonical summands ----------------------------------------------------


@dataclass(frozen=True)
class CanonicalSummands:
    """Lens space summands of a split chain diagram, up to diffeomorphism.

    Lens parameters are normalized by q ~ q^{-1} mod p (chain reversal
    realizes the inverse), trivial fillings are dropped, and 0-framed
    isolated unknots are counted as s1s2 markers.
    """

    lens: tuple[LensSpace, ...]
    s1s2: int

    @staticmethod
    def normalize(ls):
        qinv = pow(ls.q, -1, ls.p)
        return LensSpace(ls.p, min(ls.q, qinv))

    def __repr__(self):
        parts = [repr(s) for s in self.lens] + ["S1xS2"] * self.s1s2
        return "#".join(parts) if parts else "S3"


def identify_summands(forest):
    """Collapse split chains to rationals and canonicalize each filling.

    Every component must be a linear chain (all degrees <= 2).  Chains
    collapse by iterated slam-dunks from one end; U(0) counts an
    S1xS2 marker, integer homology sphere fillings vanish, and the rest
    are lens spaces via U(-p/q) = L(p,q) and -L(p,q) = L(p,p-q).
    """
    lens = []
    s1s2 = 0
    for comp in forest.components():
        if any(forest.degree(i) > 2 for i in comp):
            raise ValueError("identify_summands needs split linear chains")
        sub_nodes = [(i, forest.framing(i)) for i in comp]
        sub_edges = [e for e in forest.edges if all(x in comp for x in e)]
        chain = PlumbingForest(sub_nodes, sub_edges)
        while len(chain.nodes) > 1:
            leaf = next(i for i in chain.ids if chain.degree(i) == 1)
            chain = slam_dunk(chain, leaf)
        r = chain.nodes[0][1]
        if _is_inf(r):
            continue  # trivial filling, S^3 summand
        if r == 0:
            s1s2 += 1
            continue
        if abs(r.numerator) == 1:
            continue  # +-1/k surgery on the unknot is S^3
        lens.append(CanonicalSummands.normalize(LensSpace.from_surgery(r)))
    return CanonicalSummands(tuple(sorted(lens, key=lambda s: (s.p, s.q))), s1s2)


# -- framed forest isomorphism ----------------------------------------------


def _component_signature(forest, comp):
    """Canonical encoding of one framed tree (AHU from the centers)."""
    if len(comp) == 1:
        return (framing_str(forest.framing(comp[0])),)
    adj = {i: [n for n in forest.neighbors(i) if n in comp] for i in comp}
    # peel leaves to find the 1 or 2 centers
    degree = {i: len(adj[i]) for i in comp}
    layer = [i for i in comp if degree[i] <= 1]
    removed = set()
    remaining = len(comp)
    while remaining > 2:
        nxt = []
        for leaf in layer:
            removed.add(leaf)
            remaining -= 1
            for nb in adj[leaf]:
                if nb not in removed:
                    degree[nb] -= 1
                    if degree[nb] == 1:
                        nxt.append(nb)
        layer = nxt
    centers = [i for i in comp if i not in removed]

    def encode(node, parent):
        children = sorted(
            encode(nb, node) for nb in adj[node] if nb != parent
        )
        return (framing_str(forest.framing(node)), tuple(children))

    return min(encode(c, None) for c in centers)


def forests_isomorphic(f1, f2):
    """Whether two forests agree as framed trees, ignoring node names."""
    sig1 = sorted(_component_signature(f1, c) for c in f1.components())
    sig2 = sorted(_component_signature(f2, c) for c in f2.components())
    return sig1 == sig2


# -- the built-in fiber surgery verification ---------------------------------


def fiber_surgery_diagram():
    """Star diagram: central 0-framed circle meeting F(0) and -2, 3, 5 circles."""
    return parse_forest(
        "F(0)--B(0)\n"
        "s1(-2)--B\n"
        "s2(3)--B\n"
        "s3(5)--B"
    )


def split_lens_diagram():
    """Three split unknots framed -2, 3, 5."""
    return parse_forest("s1(-2)\ns2(3)\ns3(5)")


@dataclass(frozen=True)
class DiagramReport:
    passed: bool
    moves: tuple[str, ...]
    left_h1: int
    right_h1: int
    left_summands: CanonicalSummands
    right_summands: CanonicalSummands
    failures: tuple[str, ...]


def verify_fiber_surgery(left=None, right=None):
    """Check that the star diagram reduces to the split one.

    Slam-dunks the 0-framed fiber leaf, deletes the resulting
    infinity-framed central circle, and compares the outcome with the
    split diagram as framed forests; also compares canonical summands
    and homology orders of both sides.
    """
    left = left if left is not None else fiber_surgery_diagram()
    right = right if right is not None else split_lens_diagram()
    failures = []
    moves = []

    reduced = slam_dunk(left, "F")
    moves.append("slam_dunk(F)")
    inf_nodes = [i for i in reduced.ids if _is_inf(reduced.framing(i))]
    if len(inf_nodes) != 1:
        failures.append(f"expected one infinity node after the dunk, got {inf_nodes}")
        reduced_summands = None
    else:
        reduced = delete_infinity(reduced, inf_nodes[0])
        moves.append(f"delete_infinity({inf_nodes[0]})")
        if not forests_isomorphic(reduced, right):
            failures.append("reduced diagram is not isomorphic to the split diagram")

    target = CanonicalSummands(
        (LensSpace(2, 1), LensSpace(3, 2), LensSpace(5, 4)), 0
    )
    left_h1 = h1_order(left)
    right_h1 = h1_order(right)
    right_summands = identify_summands(right)
    try:
        left_summands = identify_summands(reduced)
    except ValueError as exc:
        failures.append(str(exc))
        left_summands = CanonicalSummands((), 0)
    if left_summands != target:
        failures.append(f"left diagram gives {left_summands}, expected {target}")
    if right_summands != target:
        failures.append(f"right diagram gives {right_summands}, expected {target}")
    if left_h1 != 30:
        failures.append(f"left |H1| = {left_h1}, expected 30")
    if right_h1 != 30:
        failures.append(f"right |H1| = {right_h1}, expected 30")
    return DiagramReport(
        not failures,
        tuple(moves),
        left_h1,
        right_h1,
        left_summands,
        right_summands,
        tuple(failures),
    )
