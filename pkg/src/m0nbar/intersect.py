"""Meets of boundary strata.

Covers the compatibility predicate on divisors, the blue/red edge-coloring
procedure that inserts a divisor into a stable tree constructively,
intersections of whole collections of strata, and the conversion of a
dimension-zero product of divisor and psi powers into a decorated tree
ready for evaluation.

An empty intersection is a legitimate answer (the product is zero), so it
is reported through the EMPTY sentinel rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import (
    DegreeMismatch,
    EdgeConditionFails,
    GroundMismatch,
    IncompatibleSplits,
    NotInternalEdge,
)
from .trees import (
    MarkedSet,
    Split,
    StableTree,
    _masks_compatible,
    make_split,
    ordered_splits,
    tree_from_splits,
)

BLUE = "blue"
RED = "red"


class _EmptyIntersection:
    """Singleton marking an intersection that is empty as a variety."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Empty"

    def __bool__(self):
        return False


EMPTY = _EmptyIntersection()

MeetResult = Union[StableTree, _EmptyIntersection]


def compatible(s1: Split, s2: Split) -> bool:
    """True iff the two divisors meet.

    Holds exactly when a block of one contains, or is contained in, a block
    of the other; equivalently, when some pair of opposite sides is
    disjoint.
    """
    if s1.ground != s2.ground:
        raise GroundMismatch("splits live on different ground sets")
    return _masks_compatible(s1.block_mask, s2.block_mask, s1.ground.full_mask)


@dataclass
class Coloring:
    """Blue/red classification of a tree against a divisor.

    Blue marks everything on the side of the divisor's canonical block;
    red marks the other side.  split_vertex is the vertex at which every
    branch is monochromatic, i.e. where the divisor either inserts a new
    edge or already matches an existing one.
    """

    tree: StableTree
    edge_colors: dict[Split, str]
    leaf_colors: dict[int, str]
    split_vertex: int


def color_for_divisor(tree: StableTree, divisor: Split) -> Coloring:
    """Color the tree's edges and leaves against a compatible divisor.

    An internal edge is blue when one of its sides sits inside the
    divisor's canonical block, red when one of its sides contains that
    block; the divisor itself, if already an edge, is colored red.  A leaf
    is blue when it belongs to the block.  The split vertex is found by
    walking from the smallest blue leaf toward the smallest red leaf and
    stopping just before the first red edge; which blue/red leaves are
    chosen does not matter, and tests assert as much.

    Raises EdgeConditionFails naming a witness edge when the divisor is
    incompatible with the tree.
    """
    if tree.ground != divisor.ground:
        raise GroundMismatch("tree and divisor live on different ground sets")
    x = divisor.block_mask
    full = tree.ground.full_mask
    edge_colors: dict[Split, str] = {}
    for e in ordered_splits(tree.splits):
        b = e.block_mask
        if not _masks_compatible(b, x, full):
            raise EdgeConditionFails(e)
        if b == x:
            edge_colors[e] = RED
        elif b & ~x & full == 0 or (full ^ b) & ~x & full == 0:
            edge_colors[e] = BLUE
        else:
            edge_colors[e] = RED
    leaf_colors = {
        lab: (BLUE if x >> i & 1 else RED)
        for i, lab in enumerate(tree.ground.labels)
    }

    blue_leaf = divisor.block[0]
    red_leaf = divisor.complement[0]
    vertices, edges = tree.leaf_path(blue_leaf, red_leaf)
    vertex = vertices[-1]  # if no internal edge is red, the red leaf's own edge is
    for i, e in enumerate(edges):
        if edge_colors[e] == RED:
            vertex = vertices[i]
            break
    return Coloring(tree, edge_colors, leaf_colors, vertex)


def apply_coloring(coloring: Coloring) -> StableTree:
    """Carry out the insertion a coloring encodes.

    When exactly one branch at the split vertex differs in color, the
    divisor is already an edge and the tree is returned unchanged.
    Otherwise the vertex is doubled: blue branches stay, red branches move
    across a fresh edge.  The result's split system is read back off the
    rebuilt incidence structure by traversal, which keeps this path
    independent of plain split-set insertion.
    """
    tree = coloring.tree
    v = coloring.split_vertex
    colors = [coloring.edge_colors[e] for e in tree.edges_at(v)]
    colors += [coloring.leaf_colors[lab] for lab in tree.leaves_at(v)]
    blues = colors.count(BLUE)
    reds = len(colors) - blues
    if blues == 1 or reds == 1:
        return tree

    fresh = tree.num_vertices
    links: list[tuple[int, int]] = []
    for e in ordered_splits(tree.splits):
        p, c = tree.edge_ends(e)
        if p == v and coloring.edge_colors[e] == RED:
            p = fresh
        elif c == v and coloring.edge_colors[e] == RED:
            c = fresh
        links.append((p, c))
    leaf_at: dict[int, list[int]] = {u: [] for u in range(fresh + 1)}
    for u in tree.vertices:
        for lab in tree.leaves_at(u):
            if u == v and coloring.leaf_colors[lab] == RED:
                leaf_at[fresh].append(lab)
            else:
                leaf_at[u].append(lab)
    links.append((v, fresh))

    neighbors: dict[int, list[tuple[int, int]]] = {u: [] for u in range(fresh + 1)}
    for idx, (a, b) in enumerate(links):
        neighbors[a].append((idx, b))
        neighbors[b].append((idx, a))
    derived = []
    for idx, (a, b) in enumerate(links):
        stack, seen = [b], {b}
        side: list[int] = []
        while stack:
            u = stack.pop()
            side.extend(leaf_at[u])
            for jdx, w in neighbors[u]:
                if jdx != idx and w not in seen:
                    seen.add(w)
                    stack.append(w)
        derived.append(make_split(tree.ground, side))
    return tree_from_splits(tree.ground, derived)


def meet_divisor(tree: StableTree, divisor: Split) -> MeetResult:
    """Intersect a stratum with a divisor.

    EMPTY when some edge of the tree is incompatible with the divisor;
    otherwise the stratum whose split system is the union (the tree itself
    when the divisor is already one of its edges).
    """
    if tree.ground != divisor.ground:
        raise GroundMismatch("tree and divisor live on different ground sets")
    full = tree.ground.full_mask
    for e in tree.splits:
        if not _masks_compatible(e.block_mask, divisor.block_mask, full):
            return EMPTY
    if divisor in tree.splits:
        return tree
    return tree_from_splits(tree.ground, (*tree.splits, divisor))


def meet_all(trees: Sequence[StableTree]) -> MeetResult:
    """Intersect a collection of strata.

    EMPTY as soon as any two splits across the union are incompatible;
    otherwise the stratum realizing the union of all split systems.
    """
    if not trees:
        raise ValueError("meet_all needs at least one stratum")
    ground = trees[0].ground
    union: set[Split] = set()
    for t in trees:
        if t.ground != ground:
            raise GroundMismatch("strata live on different ground sets")
        union |= t.splits
    try:
        return tree_from_splits(ground, union)
    except IncompatibleSplits:
        return EMPTY


def flag_equivalence(t1: StableTree, t2: StableTree) -> bool:
    """True iff the two strata meet.

    By the flag property of the boundary complex this happens exactly when
    every edge of one is compatible with every edge of the other, which is
    what gets checked; meet_all on the pair agrees, and tests assert it.
    """
    if t1.ground != t2.ground:
        raise GroundMismatch("strata live on different ground sets")
    full = t1.ground.full_mask
    return all(
        _masks_compatible(a.block_mask, b.block_mask, full)
        for a in t1.splits
        for b in t2.splits
    )


@dataclass
class BoundaryProduct:
    """A formal product of boundary-divisor powers and psi-class powers."""

    ground: MarkedSet
    divisor_powers: dict[Split, int]
    psi_powers: dict[int, int]

    def __post_init__(self):
        for s, k in self.divisor_powers.items():
            if s.ground != self.ground:
                raise GroundMismatch(f"divisor {s} lives on a different ground set")
            if k < 1:
                raise ValueError("divisor exponents must be >= 1")
        for lab, k in self.psi_powers.items():
            self.ground.mask_of((lab,))
            if k < 1:
                raise ValueError("psi exponents must be >= 1")

    @property
    def total_degree(self) -> int:
        return sum(self.divisor_powers.values()) + sum(self.psi_powers.values())


@dataclass
class DecoratedTree:
    """A stratum with edge weights and psi weights: the evaluator's input.

    vertex_dim(v) is degree(v) - 3, the dimension of the moduli factor the
    vertex contributes.  Edge weights count repeated divisor factors beyond
    the first; psi weights sit on leaves.
    """

    tree: StableTree
    edge_weight: dict[Split, int]
    psi_weight: dict[int, int]

    def __post_init__(self):
        normalized = {e: 0 for e in ordered_splits(self.tree.splits)}
        for e, k in self.edge_weight.items():
            if e not in normalized:
                raise NotInternalEdge(f"{e} is not an edge of the decorated tree")
            if k < 0:
                raise ValueError("edge weights must be >= 0")
            normalized[e] = k
        self.edge_weight = normalized
        psi: dict[int, int] = {}
        for lab in sorted(self.psi_weight):
            k = self.psi_weight[lab]
            self.tree.leaf_vertex(lab)
            if k < 0:
                raise ValueError("psi weights must be >= 0")
            if k:
                psi[lab] = k
        self.psi_weight = psi

    def vertex_dim(self, v: int) -> int:
        return self.tree.degree(v) - 3

    def psi_at(self, v: int) -> tuple[tuple[int, int], ...]:
        """(leaf, weight) pairs for the psi-carrying leaves at a vertex."""
        return tuple(
            (lab, self.psi_weight[lab])
            for lab in self.tree.leaves_at(v)
            if lab in self.psi_weight
        )

    @property
    def weight_total(self) -> int:
        return sum(self.edge_weight.values()) + sum(self.psi_weight.values())


DecorationResult = Union[DecoratedTree, _EmptyIntersection]


def product_to_decorated(product: BoundaryProduct) -> DecorationResult:
    """Normalize a dimension-zero product into a decorated tree.

    The divisor support must assemble into a stratum (otherwise EMPTY);
    each edge weight is the divisor's exponent minus one, and each psi
    exponent lands on its leaf.  Products whose total degree is not n - 3
    raise DegreeMismatch, since only dimension-zero products evaluate to a
    number.
    """
    n = product.ground.n
    degree = product.total_degree
    if degree != n - 3:
        raise DegreeMismatch(
            f"total degree {degree} != n - 3 = {n - 3} (n = {n}); "
            "the product does not land in dimension zero"
        )
    try:
        tree = tree_from_splits(product.ground, product.divisor_powers.keys())
    except IncompatibleSplits:
        return EMPTY
    weights = {s: k - 1 for s, k in product.divisor_powers.items()}
    return DecoratedTree(tree, weights, dict(product.psi_powers))


def strata_product_to_decorated(trees: Sequence[StableTree]) -> DecorationResult:
    """Decorate a product of arbitrary strata.

    Each edge of the meet is weighted by the number of input strata
    containing it beyond the first.  Codimensions must sum to n - 3.
    """
    if not trees:
        raise ValueError("need at least one stratum")
    n = trees[0].ground.n
    total = sum(t.codim for t in trees)
    if total != n - 3:
        raise DegreeMismatch(
            f"codimensions sum to {total} != n - 3 = {n - 3} (n = {n})"
        )
    meet = meet_all(trees)
    if meet is EMPTY:
        return EMPTY
    weights = {
        e: sum(1 for t in trees if e in t.splits) - 1
        for e in meet.splits
    }
    return DecoratedTree(meet, weights, {})
