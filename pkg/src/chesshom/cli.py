"""Command-line interface: ``chesshom <subcommand> ...``.

Subcommands
-----------
betti        homology of one complex (all degrees unless ``--dim``)
verify       run named verification cases, or ``all``
cycle        print, check or compute the order of an explicit cycle
table1       exponent of the bottom homology on the computable rows
faces        list the faces of a complex in canonical order
audit-pair   long exact sequence of a pair over Z/p
audit-dmt    recursive betti bounds over Z/p
kab          convert between (m, n, d) and (k, a, b)

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .chains import GF, Ring
from .complexes import Chessboard, ComplexSpec, enumerate_faces, parse_spec
from .cycles import DomainError, LabelError, build_recipe, is_cycle, recipe_complex
from .homology import betti_numbers, class_order, homology, is_boundary
from .sequences import dmt_inequality_audit, kab_inverse, kab_transform, pair_exactness_audit
from .verify import (DEFAULT_MAX_FACES, REGISTRY, RunConfig, SizeExceeded, UnknownCase,
                     TABLE1_ROWS, pair_specs, run_case, table1)

KNOWN_EXPONENTS = {(m, n): e for _, m, n, e in TABLE1_ROWS}

SCHEMA = "chesshom/1"


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _parse_ring(text: str) -> Ring:
    text = text.strip()
    if text.isdigit():
        return GF(int(text))
    return Ring.parse(text)


def _add_complex_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--complex", dest="kind", required=required,
                   choices=["chessboard", "matching", "gamma", "stage"])
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--stage", type=int, help="filtration stage 0, 1 or 2")


def _spec_from(args) -> ComplexSpec:
    need = {"chessboard": ("m", "n"), "gamma": ("m", "n"), "stage": ("m", "n", "stage"),
            "matching": ("N",)}[args.kind]
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"--complex {args.kind} needs " + ", ".join("--" + k for k in missing))
    try:
        return parse_spec(args.kind, m=args.m, n=args.n, N=args.N, stage=args.stage)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args) -> RunConfig:
    threads = args.threads or int(os.environ.get("CHESSHOM_THREADS", "1"))
    cache = None if args.no_cache else (args.cache_dir or os.environ.get("CHESSHOM_CACHE")
                                        or ".chesshom-cache")
    if cache:
        # library calls (and worker processes) pick the cache up from the environment
        os.environ["CHESSHOM_CACHE"] = cache
    try:
        return RunConfig(max_size=getattr(args, "max", None), p=getattr(args, "p", 3) or 3,
                         threads=threads, cache_dir=cache, fmt=args.format,
                         max_faces=args.max_faces)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(payload: dict, fmt: str, human: str, tsv_rows=None):
    if fmt == "json":
        print(_dump({"schema": SCHEMA, **payload}))
    elif fmt == "tsv":
        for row in tsv_rows or []:
            print("\t".join(str(x) for x in row))
    else:
        print(human)


def cmd_betti(args) -> int:
    cfg = _config(args)
    spec = _spec_from(args)
    ring = _parse_ring(args.ring)
    cfg.guard(spec)
    if args.dim is not None:
        groups = {args.dim: homology(spec, args.dim, ring)}
    else:
        groups = betti_numbers(spec, ring)
    if args.dim is not None and args.format == "json":
        print(_dump(groups[args.dim].to_json()))
        return 0
    _emit({"complex": spec.key, "ring": ring.label,
           "homology": {str(d): g.to_json() for d, g in groups.items()}},
          args.format,
          "\n".join(f"H~_{d}({spec.key}; {ring.label}) = {g}" for d, g in groups.items()),
          [["degree", "free", "torsion"]]
          + [[d, g.free_rank, ",".join(map(str, g.torsion))] for d, g in groups.items()])
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    ids = sorted(REGISTRY) if args.case == "all" else [args.case]
    if args.max_sum is not None:
        cfg.max_size = args.max_sum
    results = []
    for cid in ids:
        try:
            results.append(run_case(cid, cfg))
        except UnknownCase:
            raise UsageError(f"unknown case {cid!r}; known: {', '.join(sorted(REGISTRY))}") from None
    ok = all(r["pass"] for r in results)
    _emit({"pass": ok, "results": results}, args.format,
          "\n".join(f"{'PASS' if r['pass'] else 'FAIL'} {r['case']}: {r['description']}"
                    for r in results),
          [["case", "pass"]] + [[r["case"], r["pass"]] for r in results])
    return 0 if ok else 1


def cmd_cycle(args) -> int:
    try:
        chain = build_recipe(args.recipe)
    except (DomainError, LabelError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if args.check:
        ok = is_cycle(chain)
        _emit({"recipe": args.recipe, "is_cycle": ok}, args.format, f"is_cycle: {ok}",
              [["recipe", "is_cycle"], [args.recipe, ok]])
        return 0 if ok else 1
    if args.order:
        cfg = _config(args)
        spec = _spec_from(args) if args.kind else recipe_complex(args.recipe)
        cfg.guard(spec)
        if args.ring != "Z":
            ring = _parse_ring(args.ring)
            zero = is_boundary(chain.to_ring(ring), spec, ring)
            _emit({"recipe": args.recipe, "complex": spec.key, "ring": ring.label,
                   "boundary": zero}, args.format, "Zero" if zero else "Nonzero",
                  [["recipe", "boundary"], [args.recipe, zero]])
            return 0
        o = class_order(chain, spec)
        _emit({"recipe": args.recipe, "complex": spec.key, **o.to_json()}, args.format, str(o),
              [["recipe", "order"], [args.recipe, str(o)]])
        return 0
    if args.format == "json":
        print(chain.dumps())
    else:
        print(chain)
    return 0


def cmd_table1(args) -> int:
    cfg = _config(args)
    rows = None
    if args.rows:
        rows = []
        for item in args.rows:
            try:
                m, n = (int(x) for x in item.split(","))
            except ValueError:
                raise UsageError(f"bad row {item!r}; expected m,n") from None
            rows.append((2 * m - n, m, n, KNOWN_EXPONENTS.get((m, n))))
    out = table1(cfg, rows)
    ok = all(r["status"] != "fail" for r in out)
    lines = [f"2m-n={r['2m-n']} (m,n)=({r['m']},{r['n']}) nu={r['nu']}: "
             + (r["status"] if r["epsilon"] is None else f"epsilon={r['epsilon']} {r['status']}")
             for r in out]
    _emit({"pass": ok, "rows": out}, args.format, "\n".join(lines),
          [["2m-n", "m", "n", "nu", "epsilon", "status"]]
          + [[r["2m-n"], r["m"], r["n"], r["nu"], r["epsilon"], r["status"]] for r in out])
    return 0 if ok else 1


def cmd_faces(args) -> int:
    spec = _spec_from(args)
    cfg = _config(args)
    cfg.guard(spec)
    fs = enumerate_faces(spec, args.dim)
    if args.count:
        _emit({"complex": spec.key, "dim": args.dim, "count": len(fs)}, args.format, str(len(fs)),
              [["count"], [len(fs)]])
        return 0
    data = [[list(e) for e in f] for f in fs]
    _emit({"complex": spec.key, "dim": args.dim, "faces": data}, args.format,
          "\n".join(" ".join(f"{r}.{c}" for r, c in f) or "{}" for f in fs),
          [[json.dumps(x)] for x in data])
    return 0


def cmd_audit_pair(args) -> int:
    cfg = _config(args)
    try:
        big, small = pair_specs(args.pair, args.m, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg.guard(big)
    rep = pair_exactness_audit(big, small, p=args.p, dmax=args.dmax)
    if args.format == "tsv":
        sys.stdout.write(rep.to_tsv())
    else:
        human = "\n".join(f"d={nd['degree']:>2} {nd['node']:>3} dim={nd['dim']} in={nd['rank_in']} "
                          f"out={nd['rank_out']} {'exact' if nd['exact'] else 'NOT EXACT'}"
                          for nd in rep.nodes)
        _emit(rep.to_json(), args.format, human)
    return 0 if rep.exact else 1


def cmd_audit_dmt(args) -> int:
    cfg = _config(args)
    cells = []
    for m, n in ([(args.m, args.n)] if args.m is not None else
                 [(m, n) for m in range(1, (args.max or 6) + 1) for n in range(1, (args.max or 6) + 1)]):
        cfg.guard(Chessboard(max(m, 1), max(n, 1)))
        ds = [args.d] if args.d is not None else range(-1, min(m, n))
        cells.extend(dmt_inequality_audit(m, n, d, args.p) for d in ds)
    ok = all(c["holds"] for c in cells)
    _emit({"pass": ok, "cells": cells}, args.format,
          "\n".join(f"(m,n,d)=({c['m']},{c['n']},{c['d']}) lhs={c['lhs']} rhs1={c['rhs1']} "
                    f"rhs2={c['rhs2']} {'ok' if c['holds'] else 'VIOLATED'}" for c in cells),
          [["m", "n", "d", "lhs", "rhs1", "rhs2", "holds"]]
          + [[c[k] for k in ("m", "n", "d", "lhs", "rhs1", "rhs2", "holds")] for c in cells])
    return 0 if ok else 1


def cmd_kab(args) -> int:
    if args.k is not None:
        if args.a is None or args.b is None:
            raise UsageError("--k needs --a and --b")
        m, n, d = kab_inverse(args.k, args.a, args.b)
        k, a, b = args.k, args.a, args.b
    else:
        if None in (args.m, args.n, args.d):
            raise UsageError("give --m --n --d or --k --a --b")
        m, n, d = args.m, args.n, args.d
        k, a, b = kab_transform(m, n, d)
    _emit({"m": m, "n": n, "d": d, "k": k, "a": a, "b": b}, args.format,
          f"(m,n,d)=({m},{n},{d}) <-> (k,a,b)=({k},{a},{b})",
          [["m", "n", "d", "k", "a", "b"], [m, n, d, k, a, b]])
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv", "human"], default="json")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default $CHESSHOM_THREADS or 1)")
    common.add_argument("--cache-dir", default=None,
                        help="homology cache (default $CHESSHOM_CACHE or .chesshom-cache)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--max-faces", type=float, default=DEFAULT_MAX_FACES,
                        help="refuse complexes with more faces than this in some degree")

    parser = argparse.ArgumentParser(prog="chesshom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", parents=[common], help="homology of a complex")
    _add_complex_args(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--ring", default="Z", help="Z, Zp:3, or a prime")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("verify", parents=[common], help="run verification cases")
    p.add_argument("case", help="case id or 'all': " + ", ".join(sorted(REGISTRY)))
    p.add_argument("--max", type=int, help="size bound for sweeps")
    p.add_argument("--max-sum", type=int, help="m + n bound for sweeps")
    p.add_argument("--p", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cycle", parents=[common], help="explicit cycles")
    p.add_argument("recipe", help="e.g. rho, z_top:3, gamma_mn:4,5, w_k:0,1,2, gamma_3r:2")
    act = p.add_mutually_exclusive_group()
    act.add_argument("--print", action="store_true", help="chain JSON (default)")
    act.add_argument("--check", action="store_true", help="is the chain a cycle")
    act.add_argument("--order", action="store_true", help="order of its homology class")
    _add_complex_args(p, required=False)
    p.add_argument("--ring", default="Z")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("table1", parents=[common], help="bottom-degree exponents")
    p.add_argument("--rows", nargs="*", help="pairs m,n (default: built-in rows)")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("faces", parents=[common], help="enumerate faces")
    _add_complex_args(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("audit-pair", parents=[common], help="long exact sequence of a pair")
    p.add_argument("--pair", required=True, choices=["M-Gamma", "D2-D1", "D1-D0"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--dmax", type=int)
    p.set_defaults(func=cmd_audit_pair)

    p = sub.add_parser("audit-dmt", parents=[common], help="recursive betti bounds")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--max", type=int, help="sweep m, n <= max when --m is absent")
    p.add_argument("--p", type=int, default=3)
    p.set_defaults(func=cmd_audit_dmt)

    p = sub.add_parser("kab", parents=[common], help="(m,n,d) <-> (k,a,b)")
    for k in ("m", "n", "d", "k", "a", "b"):
        p.add_argument(f"--{k}", type=int)
    p.set_defaults(func=cmd_kab)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SizeExceeded, ValueError) as exc:
        print(f"chesshom {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
