"""Independent brute-force verifiers.

Nothing here consults the greedy balancing step: the expansion oracle
enumerates every half-edge decomposition outright, the string-equation
recursion reduces psi integrals one forgotten point at a time, and the
flag certifier compares pairwise compatibility of strata against an
enumeration-based search for a common coarsening.  Randomized instance
generators for fuzzing live here too, so the check suites and the tests
share one source of inputs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .combinat import multinomial
from .errors import BudgetExceeded, DegreeMismatch, DimensionUnbalanced, TooLarge
from .intersect import DecoratedTree, flag_equivalence
from .trees import (
    MarkedSet,
    StableTree,
    enumerate_stable_trees,
    make_split,
    ordered_splits,
    tree_from_splits,
)

EXPANSION_BUDGET = 24
FLAG_LIMIT = 7


def surviving_decompositions(decorated: DecoratedTree) -> list[tuple[dict, int]]:
    """All per-edge weight decompositions meeting every vertex dimension.

    Each edge weight k(e) is tried as every ordered pair (a, k(e)-a); a
    tuple survives when the half-weights plus psi weights at each vertex
    total exactly the vertex dimension.  Returns (half-weight map,
    multinomial contribution) pairs.  Uniqueness of balanced weightings
    says the list never has more than one entry, and the tests verify that
    claim non-greedily.
    """
    tree = decorated.tree
    if decorated.weight_total != tree.dim:
        raise DimensionUnbalanced(
            f"edge weights + psi weights = {decorated.weight_total}, "
            f"but the stratum has dimension {tree.dim}"
        )
    k_total = sum(decorated.edge_weight.values())
    if k_total > EXPANSION_BUDGET:
        raise BudgetExceeded(
            f"total edge weight {k_total} exceeds the expansion guard {EXPANSION_BUDGET}"
        )
    edges = ordered_splits(tree.splits)
    psi_load = {v: sum(w for _, w in decorated.psi_at(v)) for v in tree.vertices}
    out = []
    for combo in itertools.product(*(range(decorated.edge_weight[e] + 1) for e in edges)):
        load = dict(psi_load)
        for e, a in zip(edges, combo):
            p, c = tree.edge_ends(e)
            load[p] += a
            load[c] += decorated.edge_weight[e] - a
        if any(load[v] != decorated.vertex_dim(v) for v in tree.vertices):
            continue
        halves = {}
        for e, a in zip(edges, combo):
            p, c = tree.edge_ends(e)
            halves[(p, e)] = a
            halves[(c, e)] = decorated.edge_weight[e] - a
        contribution = 1
        for e in edges:
            p, c = tree.edge_ends(e)
            contribution *= multinomial(
                decorated.edge_weight[e], (halves[(p, e)], halves[(c, e)])
            )
        for v in tree.vertices:
            parts = [halves[(v, e)] for e in tree.edges_at(v)]
            parts += [w for _, w in decorated.psi_at(v)]
            contribution *= multinomial(decorated.vertex_dim(v), parts)
        out.append((halves, contribution))
    return out


def expansion_eval(decorated: DecoratedTree) -> int:
    """Exact value by full expansion over per-edge decompositions."""
    k_total = sum(decorated.edge_weight.values())
    sign = -1 if k_total % 2 else 1
    return sign * sum(c for _, c in surviving_decompositions(decorated))


def string_eq_psi_integral(n: int, exponents: Mapping[int, int]) -> int:
    """Psi-monomial integral by the point-forgetting recursion.

    Since the exponents sum to n - 3 < n, some marked point always carries
    exponent zero and can be forgotten; doing so trades the integral for a
    sum over the positive exponents, each lowered by one in turn.  The base
    case n = 3 is a single point.  Agrees with the closed multinomial form,
    which the check suites confirm exhaustively.
    """
    if n < 3:
        raise ValueError(f"need n >= 3 marked points, got {n}")
    if any(k < 0 for k in exponents.values()):
        raise ValueError("psi exponents must be non-negative")
    total = sum(exponents.values())
    if total != n - 3:
        raise DegreeMismatch(f"psi degrees sum to {total}, need n - 3 = {n - 3}")
    positive = tuple(sorted(k for k in exponents.values() if k > 0))
    return _string_recursion(n, positive)


@lru_cache(maxsize=None)
def _string_recursion(n: int, exps: tuple[int, ...]) -> int:
    if n == 3:
        return 1
    total = 0
    for i, k in enumerate(exps):
        rest = exps[:i] + exps[i + 1 :]
        if k > 1:
            rest = rest + (k - 1,)
        total += _string_recursion(n - 1, tuple(sorted(rest)))
    return total


@dataclass
class FlagReport:
    """Outcome of comparing compatibility against coarsening search."""

    n: int
    pairs_checked: int
    discrepancies: tuple[tuple[StableTree, StableTree], ...]

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def flag_certify(n: int, sample_limit: int | None = None, seed: int = 0) -> FlagReport:
    """Certify that strata meet exactly when their edges are all compatible.

    Runs over unordered pairs (self-pairs included) of strata of positive
    codimension on 1..n.  For each pair, the edgewise compatibility
    predicate is compared against an independent witness: whether the union
    of the two split systems occurs among the enumerated trees.  Since the
    enumerated systems are closed under subsets, that membership test is
    equivalent to searching for any enumerated coarsening containing both.

    With ``sample_limit`` set and fewer than the full number of pairs,
    pairs are sampled reproducibly from ``seed``.  Guarded at 4 <= n <= 7.
    """
    if not 4 <= n <= FLAG_LIMIT:
        raise TooLarge(f"flag certification runs for 4 <= n <= {FLAG_LIMIT}, got {n}")
    strata = [t for t in enumerate_stable_trees(n) if t.codim >= 1]
    systems = {t.splits for t in strata}
    count = len(strata)
    total = count * (count + 1) // 2
    if sample_limit is not None and total > sample_limit:
        rng = random.Random(seed)
        pairs: Iterator = (
            (strata[rng.randrange(count)], strata[rng.randrange(count)])
            for _ in range(sample_limit)
        )
        checked = sample_limit
    else:
        pairs = itertools.combinations_with_replacement(strata, 2)
        checked = total
    discrepancies = []
    for t1, t2 in pairs:
        pairwise = flag_equivalence(t1, t2)
        realized = (t1.splits | t2.splits) in systems
        if pairwise != realized:
            discrepancies.append((t1, t2))
    return FlagReport(n, checked, tuple(discrepancies))


def compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of ``slots`` non-negative integers summing to ``total``."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, slots - 1):
            yield (first,) + rest


def random_stable_tree(n: int, rng: random.Random) -> StableTree:
    """Random stable tree on 1..n grown by sequential leaf attachment.

    Each new leaf lands on an existing internal vertex, subdivides an
    internal edge, or splits off along a leaf edge; every stable tree shape
    arises with positive probability.
    """
    ground = MarkedSet.range(n)
    leaf_node = {1: 0, 2: 0, 3: 0}
    links: list[tuple[int, int]] = []
    node_count = 1
    for leaf in range(4, n + 1):
        spots: list[tuple[str, int]] = [("v", u) for u in range(node_count)]
        spots += [("e", i) for i in range(len(links))]
        spots += [("l", m) for m in sorted(leaf_node)]
        kind, which = spots[rng.randrange(len(spots))]
        if kind == "v":
            leaf_node[leaf] = which
        elif kind == "e":
            a, b = links[which]
            w = node_count
            node_count += 1
            links[which] = (a, w)
            links.append((w, b))
            leaf_node[leaf] = w
        else:
            w = node_count
            node_count += 1
            links.append((leaf_node[which], w))
            leaf_node[which] = w
            leaf_node[leaf] = w

    adjacency: dict[int, list[tuple[int, int]]] = {u: [] for u in range(node_count)}
    for i, (a, b) in enumerate(links):
        adjacency[a].append((i, b))
        adjacency[b].append((i, a))
    splits = []
    for i, (a, b) in enumerate(links):
        stack, seen = [b], {b}
        while stack:
            u = stack.pop()
            for j, w in adjacency[u]:
                if j != i and w not in seen:
                    seen.add(w)
                    stack.append(w)
        side = [lab for lab, u in leaf_node.items() if u in seen]
        splits.append(make_split(ground, side))
    return tree_from_splits(ground, splits)


def random_decorated_tree(
    n: int, rng: random.Random, allow_psi: bool = True
) -> DecoratedTree:
    """Random decorated tree satisfying the dimension-balance identity.

    The stratum dimension is split between edge weights and (optionally)
    psi weights on arbitrary leaves, one unit at a time.
    """
    tree = random_stable_tree(n, rng)
    budget = tree.dim
    edges = ordered_splits(tree.splits)
    psi_budget = 0
    if not edges:
        psi_budget = budget
    elif allow_psi and rng.random() < 0.5:
        psi_budget = rng.randint(0, budget)
    weights = {e: 0 for e in edges}
    for _ in range(budget - psi_budget):
        weights[edges[rng.randrange(len(edges))]] += 1
    psi: dict[int, int] = {}
    labels = tree.ground.labels
    for _ in range(psi_budget):
        lab = labels[rng.randrange(len(labels))]
        psi[lab] = psi.get(lab, 0) + 1
    return DecoratedTree(tree, weights, psi)
