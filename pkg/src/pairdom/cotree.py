"""Decomposition trees for complement-reducible graphs.

A cograph is built from single vertices by two operations: *union* (disjoint
union, no new edges) and *join* (disjoint union plus every cross edge).  The
build is recorded in a rooted strictly-binary tree whose leaves are the
vertices and whose internal nodes carry the operation; materializing the tree
reproduces the graph.  Equivalently, cographs are exactly the graphs with no
induced path on four vertices, and recognition below either returns such a
tree or a concrete four-vertex witness.

The tree is stored as a flat arena (parallel lists) rather than node objects
so million-leaf instances stay cheap to traverse; everything that walks it is
iterative, never recursive.
"""

from __future__ import annotations

import random
from typing import NamedTuple, Union

from .graphs import Graph, GraphError, RestrictedSet

__all__ = [
    "LEAF",
    "UNION",
    "JOIN",
    "Cotree",
    "CotreeParseError",
    "EdgeCapExceeded",
    "P4Witness",
    "parse_cotree",
    "serialize_cotree",
    "materialize",
    "recognize",
    "random_cotree",
    "random_restricted",
    "is_induced_p4",
]

# Node kinds.  Leaves store their vertex id in ``a``; internal nodes store
# child node indices in ``a`` (left) and ``b`` (right).
LEAF = 0
UNION = 1
JOIN = 2

DEFAULT_EDGE_CAP = 50_000_000


class CotreeParseError(ValueError):
    """Syntax or leaf-labeling error; ``position`` is a character offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EdgeCapExceeded(GraphError):
    """Materialization would exceed the configured edge cap."""


class P4Witness(NamedTuple):
    """Four vertices inducing a path a-b-c-d, certifying non-cographness."""

    a: int
    b: int
    c: int
    d: int


class Cotree:
    """Rooted strictly-binary union/join tree over leaves ``0..leaf_count-1``.

    ``kind[i]`` is LEAF/UNION/JOIN; for a leaf, ``a[i]`` is its vertex id and
    ``b[i]`` is -1; for an internal node, ``a[i]``/``b[i]`` are the child
    node indices.  Instances are immutable by convention after construction.
    """

    __slots__ = ("kind", "a", "b", "root", "leaf_count")

    def __init__(
        self, kind: list[int], a: list[int], b: list[int], root: int, leaf_count: int
    ) -> None:
        self.kind = kind
        self.a = a
        self.b = b
        self.root = root
        self.leaf_count = leaf_count

    @classmethod
    def single_leaf(cls) -> "Cotree":
        return cls([LEAF], [0], [-1], 0, 1)

    def node_count(self) -> int:
        return len(self.kind)

    def is_leaf(self, i: int) -> bool:
        return self.kind[i] == LEAF

    def postorder(self) -> list[int]:
        """Node indices, children before parents, left subtree first."""
        out: list[int] = []
        stack = [self.root]
        kind, a, b = self.kind, self.a, self.b
        while stack:
            i = stack.pop()
            out.append(i)
            if kind[i] != LEAF:
                stack.append(a[i])
                stack.append(b[i])
        out.reverse()
        return out

    def validate(self) -> None:
        """Check structural invariants; raises ``ValueError`` on violation."""
        seen_parent = [0] * len(self.kind)
        leaves = []
        reached = 0
        for i in self.postorder():
            reached += 1
            if self.kind[i] == LEAF:
                leaves.append(self.a[i])
                if self.b[i] != -1:
                    raise ValueError(f"leaf node {i} has a right child")
            else:
                for c in (self.a[i], self.b[i]):
                    if not 0 <= c < len(self.kind):
                        raise ValueError(f"node {i} has dangling child {c}")
                    seen_parent[c] += 1
        if reached != len(self.kind):
            raise ValueError("arena contains nodes unreachable from the root")
        if seen_parent[self.root] != 0 or any(
            c != 1 for i, c in enumerate(seen_parent) if i != self.root
        ):
            raise ValueError("tree is not single-parented")
        if sorted(leaves) != list(range(self.leaf_count)):
            raise ValueError("leaf labels are not exactly 0..leaf_count-1")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Cotree(leaves={self.leaf_count}, nodes={len(self.kind)})"


# ---------------------------------------------------------------------------
# Text format:  T ::= <int> | "(" ("+"|"*") T T+ ")"
#
# Whitespace-insensitive between tokens; n-ary nodes are allowed in text and
# are binarized by a left fold, so "(+ 0 1 2)" parses as "(+ (+ 0 1) 2)".
# Serialization always emits the binary form and round-trips exactly.
# ---------------------------------------------------------------------------


def parse_cotree(text: str) -> Cotree:
    """Parse the s-expression cotree format.

    Leaf labels must be exactly ``0..n-1`` with no repeats, where ``n`` is
    the number of leaves.  Errors report a character position.
    """
    kind: list[int] = []
    arena_a: list[int] = []
    arena_b: list[int] = []

    def new_node(k: int, a: int, b: int) -> int:
        kind.append(k)
        arena_a.append(a)
        arena_b.append(b)
        return len(kind) - 1

    # Each open frame: [op, position, child node indices...]
    frames: list[list[int]] = []
    completed_root = -1
    leaf_labels: list[int] = []

    i = 0
    length = len(text)
    while i < length:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if completed_root >= 0:
            raise CotreeParseError("trailing input after complete tree", i)
        if ch == "(":
            j = i + 1
            while j < length and text[j].isspace():
                j += 1
            if j >= length or text[j] not in "+*":
                raise CotreeParseError("expected '+' or '*' after '('", j if j < length else i)
            frames.append([UNION if text[j] == "+" else JOIN, i])
            i = j + 1
        elif ch == ")":
            if not frames:
                raise CotreeParseError("unmatched ')'", i)
            frame = frames.pop()
            children = frame[2:]
            if len(children) < 2:
                raise CotreeParseError("internal node needs at least two subtrees", i)
            acc = children[0]
            for child in children[1:]:
                acc = new_node(frame[0], acc, child)
            if frames:
                frames[-1].append(acc)
            else:
                completed_root = acc
            i += 1
        elif ch.isdigit():
            j = i
            while j < length and text[j].isdigit():
                j += 1
            label = int(text[i:j])
            leaf_labels.append(label)
            node = new_node(LEAF, label, -1)
            if frames:
                frames[-1].append(node)
            else:
                completed_root = node
            i = j
        else:
            raise CotreeParseError(f"unexpected character {ch!r}", i)

    if frames:
        raise CotreeParseError("unclosed '('", frames[-1][1])
    if completed_root < 0:
        raise CotreeParseError("empty input", 0)

    n = len(leaf_labels)
    seen = bytearray(n)
    for label in leaf_labels:
        if label >= n or seen[label]:
            raise CotreeParseError(
                f"leaf labels must be exactly 0..{n - 1} with no repeats; "
                f"offending label {label}",
                0,
            )
        seen[label] = 1
    return Cotree(kind, arena_a, arena_b, completed_root, n)


def serialize_cotree(tree: Cotree) -> str:
    """Binary s-expression text; ``parse_cotree`` round-trips it exactly."""
    kind, a, b = tree.kind, tree.a, tree.b
    parts: list[str] = []
    # Stack of either node indices (to expand) or literal tokens.
    stack: list[object] = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        i = item  # type: ignore[assignment]
        if kind[i] == LEAF:
            parts.append(str(a[i]))
        else:
            op = "+" if kind[i] == UNION else "*"
            stack.extend([")", b[i], " ", a[i], f"({op} "])
    return "".join(parts)


def materialize(tree: Cotree, edge_cap: int = DEFAULT_EDGE_CAP) -> Graph:
    """Expand the tree into an explicit graph.

    A join contributes the complete bipartite edge set between the leaf sets
    of its children; a union contributes nothing.  The edge count is computed
    first and checked against ``edge_cap`` so an accidental dense join fails
    fast instead of exhausting memory.
    """
    n = tree.leaf_count
    kind, a, b = tree.kind, tree.a, tree.b
    order = tree.postorder()

    m = 0
    size = [0] * len(kind)
    for i in order:
        if kind[i] == LEAF:
            size[i] = 1
        else:
            size[i] = size[a[i]] + size[b[i]]
            if kind[i] == JOIN:
                m += size[a[i]] * size[b[i]]
                if m > edge_cap:
                    raise EdgeCapExceeded(
                        f"materialization needs more than {edge_cap} edges"
                    )

    # Left-to-right leaf order puts every subtree's leaves in a contiguous
    # range, so each join is a cross product of two slices.
    leaf_order: list[int] = []
    lo = [0] * len(kind)
    hi = [0] * len(kind)
    for i in order:
        if kind[i] == LEAF:
            lo[i] = len(leaf_order)
            leaf_order.append(a[i])
            hi[i] = len(leaf_order)
        else:
            lo[i] = lo[a[i]]
            hi[i] = hi[b[i]]

    adj: list[list[int]] = [[] for _ in range(n)]
    for i in order:
        if kind[i] == JOIN:
            left = leaf_order[lo[a[i]] : hi[a[i]]]
            right = leaf_order[lo[b[i]] : hi[b[i]]]
            for u in left:
                adj[u].extend(right)
            for v in right:
                adj[v].extend(left)
    for row in adj:
        row.sort()
    return Graph(n, adj, m)


def is_induced_p4(graph: Graph, witness: P4Witness) -> bool:
    """True iff the witness induces a path on four distinct vertices."""
    a, b, c, d = witness
    if len({a, b, c, d}) != 4:
        return False
    return (
        graph.has_edge(a, b)
        and graph.has_edge(b, c)
        and graph.has_edge(c, d)
        and not graph.has_edge(a, c)
        and not graph.has_edge(a, d)
        and not graph.has_edge(b, d)
    )


def _components(sub: list[int], adj: list[list[int]], active: bytearray) -> list[list[int]]:
    """Connected components of the subgraph induced by ``sub``.

    ``active`` must be 1 exactly on ``sub``; it is restored before return.
    Components come out sorted by smallest contained vertex.
    """
    comp_id = {}
    comps: list[list[int]] = []
    for start in sub:
        if start in comp_id:
            continue
        comp = [start]
        comp_id[start] = len(comps)
        queue = [start]
        while queue:
            x = queue.pop()
            for w in adj[x]:
                if active[w] and w not in comp_id:
                    comp_id[w] = len(comps)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    comps.sort(key=lambda c: min(c))
    return comps


def _co_components(sub: list[int], adjset: list[set[int]]) -> list[list[int]]:
    """Connected components of the *complement* of the induced subgraph.

    Runs breadth-first search over the complement without building it: from
    each frontier vertex, every still-unvisited vertex that is NOT a
    neighbor joins the component.  Scanning the unvisited pool charges each
    survivor to a real edge, so a level costs O(n + m).
    """
    unvisited = list(sub)
    comps: list[list[int]] = []
    while unvisited:
        seed = unvisited[0]
        comp = [seed]
        queue = [seed]
        unvisited = unvisited[1:]
        while queue:
            x = queue.pop()
            nbr = adjset[x]
            kept = []
            for u in unvisited:
                if u in nbr:
                    kept.append(u)
                else:
                    comp.append(u)
                    queue.append(u)
            unvisited = kept
        comps.append(comp)
    for c in comps:
        c.sort()
    comps.sort(key=lambda c: c[0])
    return comps


def _find_p4(sub: list[int], graph: Graph, adjset: list[set[int]]) -> P4Witness:
    """Extract an induced P4 from a connected, co-connected subset.

    Any induced path a-b-c-d shows up while scanning its middle edge (b, c):
    a lies in N(b)-N[c], d in N(c)-N[b], and a, d are non-adjacent.  A
    subset on which neither decomposition step applies always contains one.
    """
    in_sub = set(sub)
    adj = graph.adj
    for b in sub:
        for c in adj[b]:
            if c not in in_sub or c < b:
                continue
            side_a = [x for x in adj[b] if x in in_sub and x != c and x not in adjset[c]]
            side_d = [x for x in adj[c] if x in in_sub and x != b and x not in adjset[b]]
            for x in side_a:
                for y in side_d:
                    if x != y and y not in adjset[x]:
                        witness = P4Witness(x, b, c, y)
                        if not is_induced_p4(graph, witness):  # pragma: no cover
                            raise AssertionError("internal error: bad P4 extraction")
                        return witness
    raise AssertionError(  # pragma: no cover - unreachable on valid input
        "no P4 found in an undecomposable subset"
    )


def recognize(graph: Graph) -> Union[Cotree, P4Witness]:
    """Decompose ``graph`` into a cotree, or return an induced-P4 witness.

    Strategy: recursively, a disconnected (sub)graph is a union of its
    components; a co-disconnected one is a join of its co-components; a
    subset that is neither (possible only on >= 4 vertices) contains an
    induced P4, which is extracted and returned as the certificate.

    Worst case O(n * (n + m)).  The returned tree's materialization is
    edge-identical to ``graph``; multiway splits are binarized left-to-right
    in ascending order of smallest contained vertex, so the result is
    deterministic.
    """
    n = graph.n
    if n == 0:
        raise GraphError("cannot decompose the empty graph")
    adj = graph.adj
    adjset = [set(row) for row in adj]
    active = bytearray(n)

    kind: list[int] = []
    arena_a: list[int] = []
    arena_b: list[int] = []

    def new_node(k: int, a: int, b: int) -> int:
        kind.append(k)
        arena_a.append(a)
        arena_b.append(b)
        return len(kind) - 1

    # Work stack of (subset, parent node, which side); parent -1 = root.
    root = -1
    stack: list[tuple[list[int], int, int]] = [(sorted(range(n)), -1, 0)]
    while stack:
        sub, parent, side = stack.pop()
        if len(sub) == 1:
            node = new_node(LEAF, sub[0], -1)
        else:
            for v in sub:
                active[v] = 1
            parts = _components(sub, adj, active)
            op = UNION
            if len(parts) == 1:
                parts = _co_components(sub, adjset)
                op = JOIN
            if len(parts) == 1:
                witness = _find_p4(sub, graph, adjset)
                return witness
            for v in sub:
                active[v] = 0
            # Left-fold chain over the parts: parts[0] op parts[1], then op
            # parts[2], ...  Chain nodes are allocated now; each part becomes
            # a pending task filling the prepared slot.
            chain = [new_node(op, -1, -1) for _ in range(len(parts) - 1)]
            for idx in range(1, len(chain)):
                arena_a[chain[idx]] = chain[idx - 1]
            node = chain[-1]
            stack.append((parts[0], chain[0], 0))
            stack.append((parts[1], chain[0], 1))
            for idx in range(2, len(parts)):
                stack.append((parts[idx], chain[idx - 1], 1))
        if parent < 0:
            root = node
        elif side == 0:
            arena_a[parent] = node
        else:
            arena_b[parent] = node

    return Cotree(kind, arena_a, arena_b, root, n)


def random_cotree(n: int, join_bias: float, seed: int) -> Cotree:
    """Seeded random tree: uniform recursive splits, biased operation choice.

    Every internal node splits its leaf budget uniformly at random, is a
    join with probability ``join_bias`` (independently), and the leaves are
    labeled by a seeded permutation of ``0..n-1`` in left-to-right order.
    Pure in ``(n, join_bias, seed)``.
    """
    if n < 1:
        raise ValueError(f"leaf count must be at least 1, got {n}")
    if not 0.0 <= join_bias <= 1.0:
        raise ValueError(f"join_bias must be in [0, 1], got {join_bias}")
    rng = random.Random(seed)
    labels = list(range(n))
    rng.shuffle(labels)

    kind: list[int] = []
    arena_a: list[int] = []
    arena_b: list[int] = []
    next_leaf = 0

    # Preorder construction, left child first, so leaf labels are consumed
    # in left-to-right order and the draw sequence is reproducible.
    root = -1
    stack: list[tuple[int, int, int]] = [(n, -1, 0)]
    while stack:
        size, parent, side = stack.pop()
        node = len(kind)
        if size == 1:
            kind.append(LEAF)
            arena_a.append(labels[next_leaf])
            arena_b.append(-1)
            next_leaf += 1
        else:
            split = rng.randint(1, size - 1)
            op = JOIN if rng.random() < join_bias else UNION
            kind.append(op)
            arena_a.append(-1)
            arena_b.append(-1)
            stack.append((size - split, node, 1))
            stack.append((split, node, 0))
        if parent < 0:
            root = node
        elif side == 0:
            arena_a[parent] = node
        else:
            arena_b[parent] = node
    return Cotree(kind, arena_a, arena_b, root, n)


def random_restricted(n: int, density: float, seed: int) -> RestrictedSet:
    """Each vertex restricted independently with probability ``density``."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    rng = random.Random(seed)
    return RestrictedSet(n, [v for v in range(n) if rng.random() < density])
