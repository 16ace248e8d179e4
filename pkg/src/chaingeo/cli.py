"""Command line surface: generate data, compute invariants, manipulate
chains, and run the verification suites, with exact JSON files as the only
interchange format.

Exit codes: 0 success, 1 property failure (check), 2 usage or schema error,
3 all requested checks were skipped.
"""

from __future__ import annotations

import argparse
import json
import sys

from .exactnum import ExactnumError
from .hermitian import GeometryError, HermSpace, span
from .shilov import chain_through, standard_vinf
from .heisenberg import from_chart
from . import chains
from .sampler import SampleConfig, Sampler
from . import serialize
from . import verify


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="chaingeo",
        description="exact chain geometry on the Shilov boundary",
    )
    sub = top.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", help="sample objects to a JSON array")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--kind", required=True,
                     choices=["point", "pair", "triple", "chain", "heis"])
    gen.add_argument("--k", type=int, default=None,
                     help="chain index (only with --kind chain)")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--height", type=int, default=10)
    gen.add_argument("--out", default=None, help="output file (default stdout)")

    inv = sub.add_parser("inv", help="compute invariants of stored objects")
    inv.add_argument("--kind", required=True,
                     choices=["bergmann", "cartan", "index", "span"])
    inv.add_argument("--in", dest="infile", required=True)

    chn = sub.add_parser("chain", help="chain constructions on stored objects")
    chn.add_argument("action",
                     choices=["through", "project", "lift", "intersect"])
    chn.add_argument("--in", dest="infile", required=True)
    chn.add_argument("--out", default=None, help="output file (default stdout)")

    chk = sub.add_parser("check", help="run verification suites")
    chk.add_argument("--suite", default="all",
                     help="'all' or comma-separated check ids")
    chk.add_argument("--m", type=int, required=True)
    chk.add_argument("--n", type=int, required=True)
    chk.add_argument("--trials", type=int, default=100)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--height", type=int, default=10)
    chk.add_argument("--json", action="store_true",
                     help="one JSON report per line instead of a table")
    return top


class _UsageError(Exception):
    pass


def _validate_mn(m: int, n: int):
    if not (1 <= m <= n):
        raise _UsageError("(m, n) must satisfy 1 <= m <= n, got (%d, %d)"
                          % (m, n))


def _emit(payload: str, out):
    if out is None:
        sys.stdout.write(payload + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")


def _load_items(path: str) -> list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _UsageError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise serialize.SchemaError("invalid JSON in %s: %s" % (path, exc))
    if not isinstance(doc, list):
        raise serialize.SchemaError("input must be a JSON array of objects")
    return doc


def _dump(objs: list) -> str:
    return json.dumps(objs, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# gen


def _gen_pair(s: Sampler):
    from .shilov import transverse

    for _ in range(100):
        a = s.chart_point()
        b = s.chart_point()
        if transverse(a, b):
            return (a, b)
    raise GeometryError("could not sample a transverse pair")


def _cmd_gen(args) -> int:
    _validate_mn(args.m, args.n)
    if args.k is not None and args.kind != "chain":
        raise _UsageError("--k is only valid with --kind chain")
    if args.kind == "chain":
        if args.k is None:
            raise _UsageError("--kind chain requires --k")
        space = HermSpace(args.m, args.n)
        if args.k not in chains.valid_k_range(space):
            raise _UsageError(
                "no chain of index %d exists for (m, n) = (%d, %d)"
                % (args.k, args.m, args.n))
    if args.count < 1:
        raise _UsageError("--count must be positive")
    cfg = SampleConfig(args.m, args.n, args.seed, args.height)
    root = Sampler(cfg)
    out = []
    for i in range(args.count):
        s = root.split("gen", args.kind, i)
        if args.kind == "point":
            out.append(serialize.point_to_json(s.point()))
        elif args.kind == "pair":
            out.append(serialize.tuple_to_json("pair", _gen_pair(s)))
        elif args.kind == "triple":
            out.append(serialize.tuple_to_json("triple", s.maximal_triple()))
        elif args.kind == "chain":
            out.append(serialize.chain_to_json(s.chain(args.k)))
        else:
            out.append(serialize.heis_to_json(s.heis_point()))
    _emit(_dump(out), args.out)
    return 0


# ---------------------------------------------------------------------------
# inv


def _inv_one(kind: str, obj):
    from .shilov import bergmann_index, cartan_invariant

    if kind == "bergmann":
        pts = serialize.tuple_from_json(obj)
        if len(pts) != 3:
            raise serialize.SchemaError("bergmann needs triples")
        return "%d" % bergmann_index(*pts)
    if kind == "cartan":
        pts = serialize.tuple_from_json(obj)
        if len(pts) != 3:
            raise serialize.SchemaError("cartan needs triples")
        return "%.12f" % cartan_invariant(*pts)
    if kind == "index":
        if isinstance(obj, dict) and "chain" in obj:
            t = serialize.chain_from_json(obj["chain"])
            x = serialize.point_from_json(obj["point"])
        else:
            t = serialize.chain_from_json(obj)
            x = standard_vinf(t.space)
        return "%d" % chains.intersection_index(x, t)
    pts = serialize.tuple_from_json(obj)
    return "%d" % span(*[p.subspace for p in pts]).dim


def _cmd_inv(args) -> int:
    items = _load_items(args.infile)
    lines = []
    for obj in items:
        try:
            lines.append(_inv_one(args.kind, obj))
        except serialize.SchemaError:
            raise
        except (GeometryError, ExactnumError) as exc:
            lines.append(json.dumps({"error": str(exc)}, sort_keys=True))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# chain


def _chain_one(action: str, obj):
    if action == "through":
        x, y = serialize.tuple_from_json(obj)
        return serialize.chain_to_json(chain_through(x, y))
    if action == "project":
        t = serialize.chain_from_json(obj)
        if chains.intersection_index(standard_vinf(t.space), t) == t.space.m:
            return serialize.w_to_json(chains.project_vertical(t))
        return serialize.circle_to_json(chains.project_chain(t))
    if action == "lift":
        if isinstance(obj, dict) and "circle" in obj:
            c = serialize.circle_from_json(obj["circle"])
            p = serialize.point_from_json(obj["point"])
        else:
            c = serialize.circle_from_json(obj)
            p = from_chart(c.marked)
        return serialize.chain_to_json(chains.lift_circle(c, p))
    if not isinstance(obj, list):
        raise serialize.SchemaError("intersect expects arrays of chains")
    ts = [serialize.chain_from_json(t) for t in obj]
    if not ts:
        raise serialize.SchemaError("intersect needs at least one chain")
    return serialize.point_to_json(chains.intersect_chains(ts))


def _cmd_chain(args) -> int:
    items = _load_items(args.infile)
    out = []
    for obj in items:
        try:
            out.append(_chain_one(args.action, obj))
        except serialize.SchemaError:
            raise
        except (GeometryError, ExactnumError) as exc:
            out.append({"error": str(exc)})
    _emit(_dump(out), args.out)
    return 0


# ---------------------------------------------------------------------------
# check


def _cmd_check(args) -> int:
    _validate_mn(args.m, args.n)
    if args.trials < 1:
        raise _UsageError("--trials must be positive")
    if args.suite == "all":
        ids = "all"
    else:
        ids = [part.strip() for part in args.suite.split(",") if part.strip()]
        if not ids:
            raise _UsageError("empty --suite")
    cfg = SampleConfig(args.m, args.n, args.seed, args.height)
    try:
        reports = verify.run_suite(ids, cfg, args.trials)
    except verify.UnknownCheckError as exc:
        raise _UsageError(str(exc))
    if args.json:
        for rep in reports:
            sys.stdout.write(json.dumps(rep.to_json(), sort_keys=True) + "\n")
    else:
        header = "%-6s %-6s %7s %9s %9s  %s" % (
            "check", "status", "trials", "failures", "elapsed", "description")
        sys.stdout.write(header + "\n")
        for rep in reports:
            sys.stdout.write("%-6s %-6s %7d %9d %8.2fs  %s\n" % (
                rep.check_id, rep.status.upper(), rep.trials, rep.failures,
                rep.elapsed, verify.REGISTRY[rep.check_id].description))
    return verify.suite_exit_code(reports)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.subcommand == "gen":
            return _cmd_gen(args)
        if args.subcommand == "inv":
            return _cmd_inv(args)
        if args.subcommand == "chain":
            return _cmd_chain(args)
        return _cmd_check(args)
    except _UsageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except serialize.SchemaError as exc:
        sys.stderr.write("schema error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
