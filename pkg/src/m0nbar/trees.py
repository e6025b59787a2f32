"""Splits, split systems, and stable leaf-labeled trees.

A boundary divisor of the moduli space of stable genus-zero curves with
marked points is a 2-block partition A|B of the labels with both sides of
size at least two.  A boundary stratum is described by a set of pairwise
compatible splits, or equivalently by the leaf-labeled tree whose internal
edges induce exactly those splits.  This module stores splits canonically
(the recorded block is the side *not* containing the smallest label),
rebuilds the tree structure from a split system, and enumerates every
stable tree for small ground sets.

Label subsets are bitmasks over the sorted ground set, so containment and
compatibility checks are single word operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    GroundMismatch,
    IncompatibleSplits,
    LabelOutOfRange,
    NotInternalEdge,
    TooLarge,
    UnstableSplit,
)

# Exhaustive enumeration is meant for desk-scale verification runs.
ENUMERATION_LIMIT = 9


@dataclass(frozen=True)
class MarkedSet:
    """The ordered set of marked-point labels, canonically 1..n."""

    labels: tuple[int, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.labels))
        if len(set(ordered)) != len(ordered):
            raise ValueError(f"duplicate labels in {ordered}")
        if len(ordered) < 3:
            raise ValueError("stability needs at least 3 marked points")
        object.__setattr__(self, "labels", ordered)
        object.__setattr__(self, "_pos", {lab: i for i, lab in enumerate(ordered)})

    @classmethod
    def range(cls, n: int) -> "MarkedSet":
        """The standard ground set {1, ..., n}."""
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, labels: Iterable[int]) -> int:
        """Bitmask of a label subset; unknown labels raise LabelOutOfRange."""
        mask = 0
        pos = self._pos
        for lab in labels:
            try:
                mask |= 1 << pos[lab]
            except KeyError:
                raise LabelOutOfRange(
                    f"label {lab} is not in the ground set {self.labels}"
                ) from None
        return mask

    def labels_of(self, mask: int) -> tuple[int, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)


@dataclass(frozen=True)
class Split:
    """A boundary divisor: a 2-block partition of the ground set.

    The stored block is the side that does not contain the smallest label,
    so every divisor has exactly one representation.  Use make_split to
    build one from an arbitrary side.
    """

    ground: MarkedSet
    block_mask: int

    def __post_init__(self):
        if self.block_mask & ~self.ground.full_mask:
            raise LabelOutOfRange("block mask reaches outside the ground set")
        size = self.block_mask.bit_count()
        if not 2 <= size <= self.ground.n - 2:
            raise UnstableSplit(
                f"a split side has {size} of {self.ground.n} marked points; both need >= 2"
            )
        if self.block_mask & 1:
            raise ValueError("block contains the smallest label; use make_split")

    @property
    def block(self) -> tuple[int, ...]:
        """The canonical side (never contains the smallest label)."""
        return self.ground.labels_of(self.block_mask)

    @property
    def complement(self) -> tuple[int, ...]:
        return self.ground.labels_of(self.ground.full_mask ^ self.block_mask)

    def __str__(self):
        blk = ",".join(str(x) for x in self.block)
        rest = ",".join(str(x) for x in self.complement)
        return f"{blk}|{rest}"


def make_split(ground: MarkedSet, side: Iterable[int]) -> Split:
    """Canonical split with the given side.

    The stored block becomes whichever of side/complement avoids the
    smallest label.  Sides with fewer than two labels on either end raise
    UnstableSplit.
    """
    mask = ground.mask_of(side)
    size = mask.bit_count()
    if not 2 <= size <= ground.n - 2:
        raise UnstableSplit(
            f"a split side has {size} of {ground.n} marked points; both need >= 2"
        )
    if mask & 1:
        mask ^= ground.full_mask
    return Split(ground, mask)


def ordered_splits(splits: Iterable[Split]) -> tuple[Split, ...]:
    """Splits in the canonical display order (lexicographic by block)."""
    return tuple(sorted(splits, key=lambda s: s.block))


def _masks_compatible(a: int, b: int, full: int) -> bool:
    # Two partitions coexist in a tree iff some pair of their sides is disjoint.
    return (
        a & b == 0
        or a & ~b & full == 0
        or ~a & b & full == 0
        or (a | b) == full
    )


class StableTree:
    """A boundary stratum: a compatible split system plus its tree structure.

    Internal vertices are numbered deterministically: vertex 0 is the one
    whose side of every split contains the smallest label, and the rest
    follow in depth-first order with children visited by smallest contained
    label.  Internal edges are identified with their splits.

    Instances are built by :func:`tree_from_splits`; treat them as
    immutable.
    """

    __slots__ = ("ground", "splits", "_edges_at", "_leaves_at", "_ends",
                 "_leaf_home", "_parent", "_dim")

    def __init__(self, ground, splits, edges_at, leaves_at, ends, leaf_home, parent):
        self.ground = ground
        self.splits = splits
        self._edges_at = edges_at
        self._leaves_at = leaves_at
        self._ends = ends
        self._leaf_home = leaf_home
        self._parent = parent
        self._dim = sum(self.degree(v) - 3 for v in self.vertices)

    @property
    def num_vertices(self) -> int:
        return len(self._edges_at)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @property
    def codim(self) -> int:
        return len(self.splits)

    @property
    def dim(self) -> int:
        return self._dim

    def edges_at(self, v: int) -> tuple[Split, ...]:
        return self._edges_at[v]

    def leaves_at(self, v: int) -> tuple[int, ...]:
        return self._leaves_at[v]

    def degree(self, v: int) -> int:
        return len(self._edges_at[v]) + len(self._leaves_at[v])

    def edge_ends(self, edge: Split) -> tuple[int, int]:
        """Endpoints (parent vertex, child vertex) of an internal edge."""
        try:
            return self._ends[edge]
        except KeyError:
            raise NotInternalEdge(f"{edge} is not an internal edge of this tree") from None

    def leaf_vertex(self, label: int) -> int:
        """The internal vertex a leaf is attached to."""
        try:
            return self._leaf_home[label]
        except KeyError:
            raise LabelOutOfRange(f"no leaf labeled {label}") from None

    def leaf_path(self, a: int, b: int) -> tuple[list[int], list[Split]]:
        """Vertices and internal edges on the walk from leaf a's vertex to leaf b's.

        edges[i] joins vertices[i] and vertices[i+1].
        """
        va, vb = self.leaf_vertex(a), self.leaf_vertex(b)
        up, up_edges = [va], []
        v = va
        while self._parent[v] is not None:
            p, e = self._parent[v]
            up.append(p)
            up_edges.append(e)
            v = p
        where = {v: i for i, v in enumerate(up)}
        down = []
        v = vb
        while v not in where:
            p, e = self._parent[v]
            down.append((v, e))
            v = p
        i = where[v]
        vertices = up[: i + 1] + [w for w, _ in reversed(down)]
        edges = up_edges[:i] + [e for _, e in reversed(down)]
        return vertices, edges

    def branch(self, v: int, edge: Split) -> tuple[tuple[Split, ...], tuple[int, ...]]:
        """Internal edges and leaves strictly beyond ``edge``, seen from ``v``."""
        p, c = self.edge_ends(edge)
        if v == p:
            start = c
        elif v == c:
            start = p
        else:
            raise NotInternalEdge(f"{edge} is not incident to vertex {v}")
        edges, leaves = [], []
        stack, seen = [start], {start}
        while stack:
            u = stack.pop()
            leaves.extend(self._leaves_at[u])
            for f in self._edges_at[u]:
                if f == edge:
                    continue
                a2, b2 = self._ends[f]
                w = b2 if u == a2 else a2
                if w not in seen:
                    seen.add(w)
                    edges.append(f)
                    stack.append(w)
        return tuple(edges), tuple(sorted(leaves))

    def __eq__(self, other):
        if not isinstance(other, StableTree):
            return NotImplemented
        return self.ground == other.ground and self.splits == other.splits

    def __hash__(self):
        return hash((self.ground, self.splits))

    def __repr__(self):
        shown = "; ".join(str(s) for s in ordered_splits(self.splits))
        return f"<StableTree n={self.ground.n} codim={self.codim} [{shown}]>"


def tree_from_splits(ground: MarkedSet, splits: Iterable[Split]) -> StableTree:
    """Rebuild the unique stable tree realizing a compatible split system.

    The canonical blocks all avoid the smallest label, so a pairwise
    compatible system is a laminar family: any two blocks are nested or
    disjoint.  The family's containment order is therefore a forest, whose
    roots hang off the vertex holding the smallest label; that forest *is*
    the tree.  With no splits the result is a single internal vertex
    carrying every leaf.

    Raises IncompatibleSplits naming a failing pair when the system is not
    pairwise compatible.
    """
    ordered = ordered_splits(set(splits))
    for s in ordered:
        if s.ground != ground:
            raise GroundMismatch(f"split {s} lives on {s.ground.labels}, not {ground.labels}")
    full = ground.full_mask
    for s, t in itertools.combinations(ordered, 2):
        if not _masks_compatible(s.block_mask, t.block_mask, full):
            raise IncompatibleSplits(s, t)

    # parent block = smallest block strictly containing this one
    k = len(ordered)
    parent_idx: list[int | None] = [None] * k
    for i, s in enumerate(ordered):
        best = None
        for j, t in enumerate(ordered):
            if i == j or s.block_mask == t.block_mask:
                continue
            if s.block_mask & ~t.block_mask == 0:
                if best is None or t.block_mask.bit_count() < ordered[best].block_mask.bit_count():
                    best = j
        parent_idx[i] = best

    kids: dict[int | None, list[int]] = {None: []}
    for i in range(k):
        kids.setdefault(i, [])
        kids.setdefault(parent_idx[i], []).append(i)

    # depth-first vertex numbering; `ordered` is lexicographic by block, so
    # sibling lists already come sorted by smallest contained label
    vid_of: dict[int, int] = {}
    next_vid = 1
    stack = list(reversed(kids[None]))
    while stack:
        i = stack.pop()
        vid_of[i] = next_vid
        next_vid += 1
        stack.extend(reversed(kids[i]))

    nv = k + 1
    edges_at: list[list[Split]] = [[] for _ in range(nv)]
    leaves_at: list[list[int]] = [[] for _ in range(nv)]
    ends: dict[Split, tuple[int, int]] = {}
    parent: list[tuple[int, Split] | None] = [None] * nv

    for i, s in enumerate(ordered):
        pv = 0 if parent_idx[i] is None else vid_of[parent_idx[i]]
        cv = vid_of[i]
        ends[s] = (pv, cv)
        parent[cv] = (pv, s)

    for i, s in enumerate(ordered):
        cv = vid_of[i]
        edges_at[cv].append(s)  # edge toward the root comes first
        for j in kids[i]:
            edges_at[cv].append(ordered[j])
        child_union = 0
        for j in kids[i]:
            child_union |= ordered[j].block_mask
        leaves_at[cv] = list(ground.labels_of(s.block_mask & ~child_union))

    top_union = 0
    for j in kids[None]:
        edges_at[0].append(ordered[j])
        top_union |= ordered[j].block_mask
    leaves_at[0] = list(ground.labels_of(full & ~top_union))

    leaf_home = {lab: v for v in range(nv) for lab in leaves_at[v]}
    tree = StableTree(
        ground,
        frozenset(ordered),
        tuple(tuple(e) for e in edges_at),
        tuple(tuple(l) for l in leaves_at),
        ends,
        leaf_home,
        parent,
    )
    assert all(tree.degree(v) >= 3 for v in tree.vertices)
    return tree


def split_of_edge(tree: StableTree, edge: Split) -> Split:
    """Recompute the partition an internal edge induces, by traversal.

    Equals the stored split; kept as an honest round-trip on the rebuilt
    incidence structure rather than a dictionary lookup.
    """
    p, _ = tree.edge_ends(edge)
    _, leaves = tree.branch(p, edge)
    return make_split(tree.ground, leaves)


def tree_equal(t1: StableTree, t2: StableTree) -> bool:
    """Canonical equality: same ground set and the same split system."""
    if t1.ground != t2.ground:
        raise GroundMismatch("trees live on different ground sets")
    return t1.splits == t2.splits


def enumerate_stable_trees(n: int, codim: int | None = None) -> Iterator[StableTree]:
    """Every stable tree with leaves 1..n, each exactly once, in a fixed order.

    With ``codim`` given, only trees with exactly that many internal edges
    are produced.  Guarded at n <= 9 so exhaustive verification stays at
    desk scale; larger n raises TooLarge.
    """
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"exhaustive enumeration is guarded at n <= {ENUMERATION_LIMIT}, got {n}")
    ground = MarkedSet.range(n)

    def generate():
        space = ground.full_mask & ~1
        for family in _laminar_families(space):
            if codim is not None and len(family) != codim:
                continue
            yield tree_from_splits(ground, tuple(Split(ground, m) for m in family))

    return generate()


def _laminar_families(space: int) -> Iterator[tuple[int, ...]]:
    # Every family of blocks strictly inside `space`, each of >= 2 labels,
    # pairwise nested or disjoint.  These are exactly the canonical split
    # systems of stable trees when `space` is the ground set minus its
    # smallest label.
    for coll in _disjoint_blocks(space, space):
        yield from _refine(coll)


def _refine(blocks: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    # Attach, independently inside each maximal block, a nested family.
    if not blocks:
        yield ()
        return
    head, tail = blocks[0], blocks[1:]
    for inner in _laminar_families(head):
        front = (head,) + inner
        for rest in _refine(tail):
            yield front + rest


def _disjoint_blocks(avail: int, forbid: int) -> Iterator[tuple[int, ...]]:
    # Collections of pairwise-disjoint blocks within `avail`, each with at
    # least two labels and none equal to `forbid`.  Blocks are emitted in
    # increasing order of their lowest label, so each collection appears
    # exactly once.
    if avail == 0:
        yield ()
        return
    low = avail & -avail
    rest = avail ^ low
    yield from _disjoint_blocks(rest, forbid)  # lowest label stays uncovered
    sub = rest
    while sub:
        block = low | sub
        if block != forbid:
            for coll in _disjoint_blocks(rest ^ sub, forbid):
                yield (block,) + coll
        sub = (sub - 1) & rest
