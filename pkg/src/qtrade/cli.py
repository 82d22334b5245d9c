"""Command-line front end: ``qtrade <command> [options]``.

Exit codes: 0 ok, 2 bad parameters, 3 verification failed, 4 scale guard,
5 inconclusive search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Optional, Sequence

from .errors import QTradeError, ScaleGuardExceeded
from .gf import DEFAULT_MAX_Q, field_spec
from .grassmann import (
    CanonicalSubspace,
    GrassmannParams,
    check_scale,
    enumerate_subspaces,
    gaussian_binomial,
    grassmann_graph,
    hat_set,
)
from .search import search_below
from .spectra import (
    SignedFunction,
    expected_min_distribution,
    formula_spectrum,
    hat_weight_distribution,
    intersection_numbers,
    numeric_spectrum,
)
from .trades import (
    Bitrade,
    TradeParams,
    construct_minimum,
    min_cardinality,
    min_cardinality_sum,
    reference_generator,
    verify_bitrade,
)

EXIT_OK, EXIT_PARAMS, EXIT_VERIFY, EXIT_SCALE, EXIT_INCONCLUSIVE = 0, 2, 3, 4, 5
DENSE_SPECTRUM_LIMIT = 3000


class Emitted:
    """What a command produced: JSON payload, CSV rows and a text rendering."""

    def __init__(self, payload, rows=None, header=None, text=None, status=EXIT_OK):
        self.payload = payload
        self.rows = rows
        self.header = header
        self.text = text
        self.status = status

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=1)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
            w.writerows(self.rows or [])
            return buf.getvalue().rstrip("\n")
        return self.text if self.text is not None else json.dumps(self.payload, indent=1)


def _spec(args, q: int):
    modulus = json.loads(args.modulus) if args.modulus else None
    return field_spec(q, modulus, max_q=max(args.max_q, DEFAULT_MAX_Q))


def _params(args) -> TradeParams:
    for name in ("q", "t", "k", "v"):
        if getattr(args, name) is None:
            raise QTradeError(f"--{name} is required")
    return TradeParams(args.q, args.t, args.k, args.v)


def _subspace_cell(Y: CanonicalSubspace) -> str:
    return json.dumps([list(r) for r in Y.rows], separators=(",", ":"))


def _load_bitrade(path: str) -> Bitrade:
    if path == "-":
        return Bitrade.from_json(json.load(sys.stdin))
    with open(path) as fh:
        return Bitrade.from_json(json.load(fh))


# -- commands ------------------------------------------------------------------

def cmd_identity(args) -> Emitted:
    qs = [int(x) for x in args.q_list.split(",")]
    rows = []
    for q in qs:
        for t in range(args.t_max + 1):
            prod, sm = min_cardinality(q, t), min_cardinality_sum(q, t)
            rows.append([q, t, prod, sm, "equal" if prod == sm else "DIFFER"])
    header = ["q", "t", "product", "sum", "status"]
    width = max(len(str(r[2])) for r in rows)
    text = "\n".join([f"{'q':>3} {'t':>3} {'product':>{width}} {'sum':>{width}} status"] +
                     [f"{q:>3} {t:>3} {p:>{width}} {s:>{width}} {st}" for q, t, p, s, st in rows])
    payload = [dict(zip(header, r)) for r in rows]
    status = EXIT_OK if all(r[4] == "equal" for r in rows) else EXIT_VERIFY
    return Emitted(payload, rows, header, text, status)


def cmd_enumerate(args) -> Emitted:
    spec = _spec(args, args.q)
    if args.v is None or args.i is None:
        raise QTradeError("--v and --i are required")
    check_scale(gaussian_binomial(args.v, args.i, args.q), args.scale_override)
    subs = list(enumerate_subspaces(args.v, args.i, spec))
    payload = {"field": spec.to_json(), "v": args.v, "i": args.i, "count": len(subs),
               "subspaces": [Y.to_json() for Y in subs]}
    rows = [[n, _subspace_cell(Y)] for n, Y in enumerate(subs)]
    text = "\n".join(_subspace_cell(Y) for Y in subs)
    return Emitted(payload, rows, ["index", "rows"], text)


def _bitrade_rows(b: Bitrade):
    return ([["T0", _subspace_cell(Y)] for Y in sorted(b.t0, key=CanonicalSubspace.sort_key)] +
            [["T1", _subspace_cell(Y)] for Y in sorted(b.t1, key=CanonicalSubspace.sort_key)])


def cmd_construct(args) -> Emitted:
    params = _params(args)
    spec = _spec(args, params.q)
    perm = json.loads(args.perm) if args.perm else None
    b = construct_minimum(params, perm, spec)
    rows = _bitrade_rows(b)
    text = "\n".join(f"{side} {cell}" for side, cell in rows)
    return Emitted(b.to_json(), rows, ["family", "rows"], text)


def cmd_verify(args) -> Emitted:
    b = _load_bitrade(args.bitrade)
    levels = [args.s] if args.s is not None else list(range(b.params.t + 1))
    reports = [verify_bitrade(b, s) for s in levels]
    ok = all(r.balanced for r in reports)
    payload = {"params": b.params.to_json(), "cardinality": b.cardinality,
               "balanced": ok, "levels": [r.to_json() for r in reports]}
    rows = [[r.s, _subspace_cell(X), c0, c1] for r in reports for X, c0, c1 in r.violations]
    text = "\n".join(r.certificate() for r in reports)
    return Emitted(payload, rows, ["s", "x", "count0", "count1"], text,
                   EXIT_OK if ok else EXIT_VERIFY)


def _parse_subspace(text: str, v: int, spec) -> CanonicalSubspace:
    return CanonicalSubspace.span(json.loads(text), v, spec)


def cmd_wdist(args) -> Emitted:
    b = _load_bitrade(args.bitrade)
    p = b.params
    phi = SignedFunction.from_bitrade(b)
    graph = phi.graph(args.scale_override)
    expected = expected_min_distribution(p.q, p.t)
    if args.z:
        Zs = [_parse_subspace(args.z, p.v, b.spec)]
    else:
        Zs = [reference_generator(p, b.spec)]
    if args.samples:
        rng = random.Random(args.seed)
        pool = list(enumerate_subspaces(p.v, p.t + 1, b.spec))
        Zs += rng.sample(pool, min(args.samples, len(pool)))
    results = []
    for Z in Zs:
        wd = hat_weight_distribution(phi, Z, graph)
        results.append((Z, wd, wd.multiple_of(expected)))
    dims = {"q": p.q, "t": p.t, "k": p.k, "v": p.v}
    payload = [dict(wd.to_json(dims), z=Z.to_json(), multiple=m) for Z, wd, m in results]
    if len(payload) == 1:
        payload = payload[0]
    rows = [[_subspace_cell(Z), j, w, expected[j] if j < len(expected) else "", m]
            for Z, wd, m in results for j, w in enumerate(wd.values)]
    lines = []
    for Z, wd, m in results:
        lines.append(f"Z' = {_subspace_cell(Z)}   multiple = {m}")
        lines.append(f"{'j':>3} {'W^j':>8}   (-1)^j q^(j(j-1)/2) [t+1 j]_q")
        for j, w in enumerate(wd.values):
            e = expected[j] if j < len(expected) else "-"
            if j < len(expected):
                term = f"(-1)^{j} * {p.q}^{j * (j - 1) // 2} * {gaussian_binomial(p.t + 1, j, p.q)}"
            else:
                term = ""
            lines.append(f"{j:>3} {w:>8}   {e:>8}  = {term}")
    ok = all(m is not None for _, _, m in results)
    return Emitted(payload, rows, ["z", "j", "W", "expected", "multiple"], "\n".join(lines),
                   EXIT_OK if ok else EXIT_VERIFY)


def cmd_crs(args) -> Emitted:
    if args.k is None or args.v is None:
        raise QTradeError("--k and --v are required")
    spec = _spec(args, args.q)
    if args.x:
        X = _parse_subspace(args.x, args.v, spec)
    else:
        i = args.i if args.i is not None else 1
        X = CanonicalSubspace.coordinate(range(i), args.v, spec)
    graph = grassmann_graph(spec, args.v, args.k, args.scale_override)
    res = intersection_numbers(hat_set(X, args.k), graph)
    payload = {"x": X.to_json(), "k": args.k, "regular": res.regular,
               "shell_sizes": list(res.shell_sizes),
               "numbers": res.numbers.to_json() if res.numbers else None}
    rows = [[r["i"], r["down"], r["same"], r["up"], res.shell_sizes[r["i"]]]
            for r in (res.numbers.to_json() if res.numbers else [])]
    text = "\n".join([f"X = {_subspace_cell(X)}  regular = {res.regular}",
                      f"{'i':>3} {'down':>6} {'same':>6} {'up':>6} {'size':>8}"] +
                     [f"{i:>3} {d:>6} {s:>6} {u:>6} {n:>8}" for i, d, s, u, n in rows])
    return Emitted(payload, rows, ["i", "down", "same", "up", "shell_size"], text)


def cmd_spectrum(args) -> Emitted:
    if args.k is None or args.v is None:
        raise QTradeError("--k and --v are required")
    params = GrassmannParams(args.q, args.v, args.k)
    spec = _spec(args, args.q)
    graph = grassmann_graph(spec, args.v, args.k, args.scale_override)
    formula = formula_spectrum(graph)
    numeric = numeric_spectrum(graph) if len(graph) <= DENSE_SPECTRUM_LIMIT else None
    payload = {"q": args.q, "v": args.v, "k": args.k, "kbar": params.kbar,
               "formula": formula, "numeric": numeric,
               "match": None if numeric is None else numeric == formula}
    rows = [[j, th, "" if numeric is None else numeric[j]] for j, th in enumerate(formula)]
    text = "\n".join([f"{'j':>3} {'formula':>10} {'numeric':>10}"] +
                     [f"{j:>3} {f:>10} {n!s:>10}" for j, f, n in rows])
    bad = numeric is not None and numeric != formula
    return Emitted(payload, rows, ["j", "formula", "numeric"], text,
                   EXIT_VERIFY if bad else EXIT_OK)


def cmd_search(args) -> Emitted:
    params = _params(args)
    spec = _spec(args, params.q)
    bound = args.bound if args.bound is not None else min_cardinality(params.q, params.t)
    verdict = search_below(params, bound, spec, max_nodes=args.max_nodes,
                           time_budget_s=args.time_budget, workers=args.threads)
    payload = verdict.to_json()
    status = EXIT_INCONCLUSIVE if verdict.inconclusive else EXIT_OK
    state = "found" if verdict.found else ("exhausted" if verdict.exhausted else "inconclusive")
    text = (f"params={params.to_json()} bound={bound} result={state} "
            f"nodes={verdict.nodes_visited}")
    if verdict.found:
        text += f" cardinality={verdict.found.cardinality}"
    rows = [[bound, state, verdict.nodes_visited,
             verdict.found.cardinality if verdict.found else ""]]
    return Emitted(payload, rows, ["bound", "result", "nodes", "cardinality"], text, status)


COMMANDS = {
    "identity": cmd_identity,
    "enumerate": cmd_enumerate,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "wdist": cmd_wdist,
    "crs": cmd_crs,
    "spectrum": cmd_spectrum,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2)
    common.add_argument("--t", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--v", type=int)
    common.add_argument("--i", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--bound", type=int)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--scale-override", action="store_true")
    common.add_argument("--modulus", help="field modulus as a JSON coefficient list, low degree first")
    common.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q)

    parser = argparse.ArgumentParser(prog="qtrade", description="Minimum subspace bitrades T_q(t,k,v).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identity", parents=[common], help="check prod(1+q^i) against the q-binomial sum")
    p.add_argument("--t-max", type=int, default=6)
    p.add_argument("--q-list", "--qs", dest="q_list", default="2,3,4,5,7,8,9")

    sub.add_parser("enumerate", parents=[common], help="list Gr(i) of F_q^v in canonical order")

    p = sub.add_parser("construct", parents=[common], help="emit the quadric minimum bitrade")
    p.add_argument("--perm", help="coordinate permutation as a JSON list")

    p = sub.add_parser("verify", parents=[common], help="check covering balance of a bitrade file")
    p.add_argument("bitrade", help="bitrade JSON file, or - for stdin")

    p = sub.add_parser("wdist", parents=[common], help="weight distribution w.r.t. hat(Z')")
    p.add_argument("bitrade")
    p.add_argument("--z", help="Z' basis rows as JSON (default: <e_1..e_{t+1}>)")
    p.add_argument("--samples", type=int, default=0, help="also use N random Z' drawn with --seed")

    p = sub.add_parser("crs", parents=[common], help="intersection numbers of hat(X)")
    p.add_argument("--x", help="X basis rows as JSON (default: <e_1..e_i>)")

    sub.add_parser("spectrum", parents=[common], help="eigenvalues of J_q(v,k)")

    p = sub.add_parser("search", parents=[common], help="exhaustive search for bitrades below a bound")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--time-budget", type=float, help="seconds")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    # identity takes its q grid from --q-list; accept "--q 2,3" there too
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "identity":
        argv = ["--q-list" if a == "--q" else a for a in argv]
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except ScaleGuardExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCALE
    except (QTradeError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMS
    text = out.render(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return out.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
