"""Command-line front end.

Grammar for product expressions::

    expr    := factor (("*" | WS) factor)*
    factor  := divisor | psi
    divisor := "D" "{" labels "}" ("|" "{" labels "}")? ("^" NAT)?
    psi     := "psi" NAT ("^" NAT)?
    labels  := NAT ("," NAT)*

The number of marked points is always the explicit --n flag, never
inferred, because D{1,2} names different divisors for different n.  When
the optional second block is written it must be the exact complement of
the first.

Exit codes: 0 success (a value of 0 is a success), 2 parse or usage error,
3 degree mismatch, 4 oracle discrepancy.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass

from .combinat import multinomial
from .errors import (
    DegreeMismatch,
    EdgeConditionFails,
    LabelOutOfRange,
    ParseError,
    TooLarge,
    UnstableSplit,
)
from .intersect import (
    EMPTY,
    BoundaryProduct,
    color_for_divisor,
    meet_divisor,
    product_to_decorated,
)
from .oracle import (
    compositions,
    expansion_eval,
    flag_certify,
    random_decorated_tree,
    string_eq_psi_integral,
    surviving_decompositions,
)
from .trees import MarkedSet, Split, enumerate_stable_trees, make_split, ordered_splits, tree_from_splits
from .weights import EvalResult, balance, evaluate, evaluate_ratio

_NAT = re.compile(r"[0-9]+")

_CHECK_GUARDS = {"expansion": 8, "string": 10, "flag": 7}
_FLAG_SAMPLE = 100_000
_EXPANSION_TRIALS = 300


@dataclass(frozen=True)
class Expression:
    """A parsed product: the marked-point count and the factor sequence."""

    n: int
    factors: tuple[tuple[str, object, int], ...]


def parse(text: str, n: int) -> Expression:
    """Parse an expression against the grammar above.

    Divisors are canonicalized immediately, so two spellings of the same
    divisor compare equal.  Raises ParseError with a position on grammar
    violations, LabelOutOfRange for labels outside 1..n, and UnstableSplit
    for splits with a side smaller than two.
    """
    ground = MarkedSet.range(n)
    size = len(text)
    factors: list[tuple[str, object, int]] = []

    def skip_ws(p: int) -> int:
        while p < size and text[p].isspace():
            p += 1
        return p

    def read_nat(p: int, what: str) -> tuple[int, int]:
        m = _NAT.match(text, p)
        if not m:
            raise ParseError(p, f"expected {what}")
        return int(m.group()), m.end()

    def read_block(p: int) -> tuple[list[int], int]:
        if p >= size or text[p] != "{":
            raise ParseError(p, "expected '{'")
        start = p
        p += 1
        labels = []
        lab, p = read_nat(p, "a label")
        labels.append(lab)
        while p < size and text[p] == ",":
            lab, p = read_nat(p + 1, "a label")
            labels.append(lab)
        if p >= size or text[p] != "}":
            raise ParseError(p, "expected '}' or ','")
        if len(set(labels)) != len(labels):
            raise ParseError(start, "duplicate label in block")
        for lab in labels:
            if not 1 <= lab <= n:
                raise LabelOutOfRange(f"label {lab} outside 1..{n}")
        return labels, p + 1

    def read_exponent(p: int) -> tuple[int, int]:
        if p < size and text[p] == "^":
            return read_nat(p + 1, "an exponent")
        return 1, p

    def read_factor(p: int) -> int:
        if text.startswith("psi", p):
            label, q = read_nat(p + 3, "a marked-point label after 'psi'")
            if not 1 <= label <= n:
                raise LabelOutOfRange(f"label {label} outside 1..{n}")
            exponent, q = read_exponent(q)
            factors.append(("psi", label, exponent))
            return q
        if text[p] == "D":
            side, q = read_block(p + 1)
            if q < size and text[q] == "|":
                other_start = q + 1
                other, q = read_block(other_start)
                if set(side) & set(other) or set(side) | set(other) != set(ground.labels):
                    raise ParseError(
                        other_start, "second block must be the exact complement of the first"
                    )
            exponent, q = read_exponent(q)
            factors.append(("divisor", make_split(ground, side), exponent))
            return q
        raise ParseError(p, "expected 'D{...}' or 'psiK'")

    pos = skip_ws(0)
    if pos == size:
        raise ParseError(pos, "expected a factor")
    while True:
        pos = read_factor(pos)
        after = skip_ws(pos)
        if after == size:
            break
        if text[after] == "*":
            nxt = skip_ws(after + 1)
            if nxt == size:
                raise ParseError(nxt, "expected a factor after '*'")
            pos = nxt
        elif after > pos:
            pos = after
        else:
            raise ParseError(after, "expected '*' or whitespace between factors")
    return Expression(n, tuple(factors))


def render(expr: Expression) -> str:
    """Canonical text for an expression; reparsing gives an equal Expression."""
    parts = []
    for kind, payload, exponent in expr.factors:
        if kind == "psi":
            piece = f"psi{payload}"
        else:
            piece = "D{" + ",".join(str(x) for x in payload.block) + "}"
        if exponent != 1:
            piece += f"^{exponent}"
        parts.append(piece)
    return " ".join(parts)


def to_boundary_product(expr: Expression) -> BoundaryProduct:
    """Collect the factor sequence into exponent maps; X^0 factors drop out."""
    ground = MarkedSet.range(expr.n)
    divisors: dict[Split, int] = {}
    psi: dict[int, int] = {}
    for kind, payload, exponent in expr.factors:
        if exponent == 0:
            continue
        if kind == "psi":
            psi[payload] = psi.get(payload, 0) + exponent
        else:
            divisors[payload] = divisors.get(payload, 0) + exponent
    return BoundaryProduct(ground, divisors, psi)


def _split_text(split: Split) -> str:
    return str(split)


def _evaluate_expression(expr: Expression):
    product = to_boundary_product(expr)
    decorated = product_to_decorated(product)
    if decorated is EMPTY:
        return None, EvalResult.empty_intersection()
    return decorated, evaluate(decorated)


def _text_output(n: int, decorated, result: EvalResult) -> str:
    lines = [f"n = {n}"]
    if decorated is None:
        lines.append("value = 0 (empty intersection)")
        return "\n".join(lines) + "\n"
    tree = decorated.tree
    edges = ordered_splits(tree.splits)
    lines.append(f"stratum: codim {tree.codim}, dim {tree.dim}")
    for v in tree.vertices:
        leaves = ",".join(str(x) for x in tree.leaves_at(v)) or "-"
        lines.append(f"  v{v}: leaves {leaves}  dim {decorated.vertex_dim(v)}")
    w = result.weighting
    edge_factor = dict(result.edge_factors)
    for e in edges:
        p, c = tree.edge_ends(e)
        k = decorated.edge_weight[e]
        line = f"  edge v{p}-v{c}  {_split_text(e)}  k={k}"
        if w is not None:
            line += f"  halves {w.at(p, e)}+{w.at(c, e)}  factor {edge_factor[e]}"
        lines.append(line)
    for lab in sorted(decorated.psi_weight):
        lines.append(
            f"  psi at leaf {lab} (v{tree.leaf_vertex(lab)}): weight {decorated.psi_weight[lab]}"
        )
    if w is None:
        lines.append("value = 0 (no balanced weighting)")
        return "\n".join(lines) + "\n"
    vertex_factor = dict(result.vertex_factors)
    factors = [str(f) for f in edge_factor.values()] + [str(vertex_factor[v]) for v in tree.vertices]
    lines.append(f"factors: {' * '.join(factors)}")
    lines.append(f"sign = {'+1' if result.sign > 0 else '-1'}")
    lines.append(f"value = {result.value}")
    return "\n".join(lines) + "\n"


def _json_output(n: int, decorated, result: EvalResult) -> str:
    if decorated is None:
        payload = {
            "n": n,
            "value": "0",
            "sign": 1,
            "reason": "empty",
            "stratum": None,
            "edge_weights": [],
            "vertex_dims": [],
            "balanced": [],
            "factors": {"edges": [], "vertices": []},
        }
        return json.dumps(payload) + "\n"
    tree = decorated.tree
    edges = ordered_splits(tree.splits)
    payload = {
        "n": n,
        "value": str(result.value),
        "sign": result.sign,
        "reason": result.reason,
        "stratum": {"splits": [list(e.block) for e in edges]},
        "edge_weights": [decorated.edge_weight[e] for e in edges],
        "vertex_dims": [decorated.vertex_dim(v) for v in tree.vertices],
        "balanced": [],
        "factors": {"edges": [], "vertices": []},
    }
    if result.weighting is not None:
        w = result.weighting
        balanced = []
        for e in edges:
            p, c = tree.edge_ends(e)
            balanced.append({"edge": list(e.block), "halves": [w.at(p, e), w.at(c, e)]})
        payload["balanced"] = balanced
        payload["factors"] = {
            "edges": [str(f) for _, f in result.edge_factors],
            "vertices": [str(f) for _, f in result.vertex_factors],
        }
    return json.dumps(payload) + "\n"


def _dot_output(n: int, decorated, result: EvalResult) -> str:
    lines = ["graph stratum {"]
    if decorated is None:
        lines.append('  note [shape=plaintext, label="empty intersection: value 0"];')
    else:
        tree = decorated.tree
        w = result.weighting
        lines.append("  node [shape=circle];")
        for v in tree.vertices:
            lines.append(f'  v{v} [label="{decorated.vertex_dim(v)}"];')
        for e in ordered_splits(tree.splits):
            p, c = tree.edge_ends(e)
            k = decorated.edge_weight[e]
            label = f"k={k}"
            if w is not None:
                label += f": {w.at(p, e)}+{w.at(c, e)}"
            lines.append(f'  v{p} -- v{c} [label="{label}"];')
        for v in tree.vertices:
            for lab in tree.leaves_at(v):
                lines.append(f'  leaf{lab} [shape=plaintext, label="{lab}"];')
                psi = decorated.psi_weight.get(lab, 0)
                suffix = f' [label="psi={psi}"]' if psi else ""
                lines.append(f"  v{v} -- leaf{lab}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _read_expression(args) -> Expression:
    text = args.expr if args.expr is not None else sys.stdin.read()
    return parse(text, args.n)


def _cmd_eval(args) -> int:
    expr = _read_expression(args)
    decorated, result = _evaluate_expression(expr)
    renderer = {"text": _text_output, "json": _json_output, "dot": _dot_output}[args.format]
    sys.stdout.write(renderer(args.n, decorated, result))
    return 0


def _cmd_explain(args) -> int:
    expr = _read_expression(args)
    product = to_boundary_product(expr)
    out = [f"n = {args.n}", f"product: {render(expr)}"]
    out.append(
        f"degree: {product.total_degree} (divisors "
        f"{sum(product.divisor_powers.values())} + psi {sum(product.psi_powers.values())}), "
        f"n - 3 = {args.n - 3}"
    )
    decorated = product_to_decorated(product)  # raises DegreeMismatch before any output

    if args.coloring:
        divisors = []
        for kind, payload, exponent in expr.factors:
            if kind == "divisor" and exponent > 0 and payload not in divisors:
                divisors.append(payload)
        if divisors:
            out.append("assembling the stratum one divisor at a time:")
            tree = tree_from_splits(MarkedSet.range(args.n), divisors[:1])
            out.append(f"  start with {_split_text(divisors[0])}")
            for d in divisors[1:]:
                try:
                    coloring = color_for_divisor(tree, d)
                except EdgeConditionFails as fail:
                    out.append(
                        f"  insert {_split_text(d)}: incompatible with edge "
                        f"{_split_text(fail.witness)} -- empty intersection"
                    )
                    out.append("value = 0 (empty intersection)")
                    print("\n".join(out))
                    return 0
                colored = ", ".join(
                    f"{_split_text(e)}={coloring.edge_colors[e]}"
                    for e in ordered_splits(tree.splits)
                )
                blues = ",".join(
                    str(lab) for lab in tree.ground.labels if coloring.leaf_colors[lab] == "blue"
                )
                out.append(f"  insert {_split_text(d)}: edge colors [{colored}]")
                out.append(f"    blue leaves {{{blues}}}, split vertex v{coloring.split_vertex}")
                tree = meet_divisor(tree, d)

    if decorated is EMPTY:
        out.append("value = 0 (empty intersection)")
        print("\n".join(out))
        return 0

    tree = decorated.tree
    out.append(f"stratum has {tree.num_vertices} internal vertices:")
    for v in tree.vertices:
        leaves = ",".join(str(x) for x in tree.leaves_at(v)) or "-"
        psi = ", ".join(f"psi^{w} at leaf {lab}" for lab, w in decorated.psi_at(v))
        extra = f", {psi}" if psi else ""
        out.append(f"  v{v}: leaves {{{leaves}}}, dim {decorated.vertex_dim(v)}{extra}")
    trace: list = []
    weighting = balance(decorated, trace)
    if trace:
        out.append("greedy balancing, peeling vertices with one unresolved edge:")
        for v, e, near, far in trace:
            out.append(f"  peel v{v} along {_split_text(e)}: k(v{v})={near}, far half={far}")
    if weighting is None:
        out.append("a half-weight went negative: no balanced weighting")
        out.append("value = 0 (no balanced weighting)")
        print("\n".join(out))
        return 0
    result = evaluate(decorated)
    for e, f in result.edge_factors:
        k = decorated.edge_weight[e]
        p, c = tree.edge_ends(e)
        out.append(
            f"edge {_split_text(e)}: ({k}; {weighting.at(p, e)},{weighting.at(c, e)}) -> {f}"
        )
    for v, f in result.vertex_factors:
        out.append(f"vertex v{v}: multinomial of dim {decorated.vertex_dim(v)} -> {f}")
    out.append(f"sign = {'+1' if result.sign > 0 else '-1'}")
    out.append(f"value = {result.value}")
    print("\n".join(out))
    return 0


def _cmd_enumerate(args) -> int:
    count = 0
    for tree in enumerate_stable_trees(args.n, args.codim):
        count += 1
        if not args.count_only:
            if tree.codim == 0:
                print("(trivial stratum)")
            else:
                print(" ; ".join(_split_text(e) for e in ordered_splits(tree.splits)))
    if args.count_only:
        print(count)
    return 0


def _run_flag_suite(n_max: int, seed: int) -> list[dict]:
    rows = []
    for n in range(4, min(n_max, _CHECK_GUARDS["flag"]) + 1):
        limit = None if n <= 6 else _FLAG_SAMPLE
        report = flag_certify(n, sample_limit=limit, seed=seed)
        rows.append(
            {
                "suite": "flag",
                "n": n,
                "checked": report.pairs_checked,
                "failures": len(report.discrepancies),
            }
        )
    return rows


def _run_string_suite(n_max: int) -> list[dict]:
    rows = []
    for n in range(3, min(n_max, _CHECK_GUARDS["string"]) + 1):
        checked = failures = 0
        for vec in compositions(n - 3, n):
            checked += 1
            exps = {i + 1: k for i, k in enumerate(vec)}
            if string_eq_psi_integral(n, exps) != multinomial(n - 3, vec):
                failures += 1
        rows.append({"suite": "string", "n": n, "checked": checked, "failures": failures})
    return rows


def _run_expansion_suite(n_max: int, seed: int) -> list[dict]:
    rows = []
    rng = random.Random(seed)
    for n in range(4, min(n_max, _CHECK_GUARDS["expansion"]) + 1):
        checked = failures = 0
        for _ in range(_EXPANSION_TRIALS):
            checked += 1
            decorated = random_decorated_tree(n, rng)
            result = evaluate(decorated)
            terms = surviving_decompositions(decorated)
            ok = expansion_eval(decorated) == result.value and len(terms) <= 1
            if result.weighting is not None:
                ok = ok and evaluate_ratio(decorated) == result.value
            else:
                ok = ok and result.value == 0
            if not ok:
                failures += 1
        rows.append({"suite": "expansion", "n": n, "checked": checked, "failures": failures})
    return rows


def _cmd_check(args) -> int:
    if args.suite != "all" and args.n_max > _CHECK_GUARDS[args.suite]:
        raise TooLarge(
            f"suite '{args.suite}' is guarded at n <= {_CHECK_GUARDS[args.suite]}, "
            f"got --n-max {args.n_max}"
        )
    rows: list[dict] = []
    if args.suite in ("expansion", "all"):
        rows += _run_expansion_suite(args.n_max, args.seed)
    if args.suite in ("string", "all"):
        rows += _run_string_suite(args.n_max)
    if args.suite in ("flag", "all"):
        rows += _run_flag_suite(args.n_max, args.seed)
    ok = all(r["failures"] == 0 for r in rows)
    if args.format == "json":
        print(json.dumps({"suite": args.suite, "n_max": args.n_max, "seed": args.seed,
                          "results": rows, "ok": ok}, indent=2))
    else:
        for r in rows:
            state = "ok" if r["failures"] == 0 else "FAIL"
            print(f"{r['suite']:9s} n={r['n']}: {r['checked']} checked, "
                  f"{r['failures']} discrepancies [{state}]")
        print("all checks passed" if ok else "DISCREPANCIES FOUND")
    return 0 if ok else 4


def _marked_count(text: str) -> int:
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError("need at least 3 marked points")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="m0nbar",
        description="Exact intersection numbers of boundary divisors and psi classes "
        "on the moduli space of stable genus-zero n-pointed curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a dimension-zero product")
    p.add_argument("--n", type=_marked_count, required=True, help="number of marked points")
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.add_argument("expr", nargs="?", default=None, help="expression; stdin when omitted")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("explain", help="evaluate with a step-by-step derivation")
    p.add_argument("--n", type=_marked_count, required=True)
    p.add_argument("--coloring", action="store_true",
                   help="also show the edge-coloring insertion of each divisor")
    p.add_argument("expr", nargs="?", default=None)
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("enumerate", help="list the stable trees on 1..n")
    p.add_argument("--n", type=_marked_count, required=True)
    p.add_argument("--codim", type=int, default=None, help="restrict to this many internal edges")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("check", help="run the brute-force verification suites")
    p.add_argument("--suite", choices=["expansion", "string", "flag", "all"], required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnstableSplit, LabelOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegreeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())
