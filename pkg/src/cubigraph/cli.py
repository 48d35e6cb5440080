"""Command-line interface.

Every command reads JSON inputs, prints a deterministic report (human
readable by default, machine readable with --json), and exits with:
0 on success, 1 on a negative mathematical verdict, 2 on input errors,
3 on budget exhaustion or an inconclusive verdict.  Inconclusive is never
conflated with "no".
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import graphs as gr
from . import lifting as lf
from . import nerve as nv
from . import pi1 as p1
from . import presheaf as ps
from . import product as pr
from . import skeleta as sk

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    n: int = 1
    trunc_dim: int | None = None
    support_bound: int = 1
    slack: int = 2
    cell_budget: int = 10**7
    max_steps: int = 20000
    seed: int = 0


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=repr)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


def _emit(report, as_json):
    if as_json:
        print(json.dumps(_jsonable(report), sort_keys=True))
    else:
        for line in report.get("lines", []):
            print(line)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_graph(path):
    try:
        return gr.Graph.from_json(_load(path))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: bad graph file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_graph_map(path):
    try:
        return gr.GraphMap.from_json(_load(path))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: bad graph map file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_presheaf(path):
    try:
        return ps.FinitePresheaf.from_json(_load(path))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: bad presheaf file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_presheaf_map(path):
    try:
        return ps.map_from_json(_load(path))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: bad presheaf map file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _vertex(token):
    try:
        return int(token)
    except ValueError:
        return token


def _parse_word(text):
    return tuple(_vertex(t) for t in text.split(",") if t != "")


def _abelianization_text(rank, torsion):
    parts = ["Z"] * rank + [f"Z/{d}" for d in torsion]
    return " x ".join(parts) if parts else "trivial"


# --- commands -----------------------------------------------------------


def cmd_verify_identities(args, cfg):
    sites = (
        ["cubical", "simplicial"] if args.site == "both" else [args.site]
    )
    n = args.n if args.n is not None else cfg.n
    k_max = args.k_max if args.k_max is not None else n + 3
    lines = []
    results = []
    ok_all = True
    for site in sites:
        for row in sk.verify_skeletal_identities(site, n, k_max):
            results.append({"site": site, **row})
            ok_all = ok_all and row["ok"]
            status = "ok" if row["ok"] else "FAIL"
            lines.append(
                f"{site} n={n} k={row['k']} {row['kind']}: {status}"
            )
    lines.append("all identities hold" if ok_all else "identity failures")
    _emit({"lines": lines, "results": results, "ok": ok_all}, args.json)
    return EXIT_OK if ok_all else EXIT_NEGATIVE


def cmd_check_rlp(args, cfg):
    f = _load_presheaf_map(args.map)
    n = args.n if args.n is not None else cfg.n
    site = f.source.site
    name = ("J_n_prime_" if args.set == "J" else "I_n_prime_") + site
    gens = lf.generating_set(name, n)
    holds, witness = lf.has_rlp(f, gens)
    lines = [f"RLP against {name} (n={n}): {'yes' if holds else 'no'}"]
    if witness is not None:
        lines.append(f"counterexample member: {witness['member']}")
    _emit(
        {"lines": lines, "holds": holds,
         "counterexample_member": witness["member"] if witness else None},
        args.json,
    )
    return EXIT_OK if holds else EXIT_NEGATIVE


def _emit_presheaf(X, args):
    text = json.dumps(_jsonable(X.to_json()), sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        if not args.json:
            print(f"written to {args.output}")
    else:
        print(text)


def cmd_cosk(args, cfg):
    X = _load_presheaf(args.input)
    n = args.n if args.n is not None else cfg.n
    C, _unit = sk.coskeleton(X, n)
    _emit_presheaf(C, args)
    return EXIT_OK


def cmd_sk(args, cfg):
    X = _load_presheaf(args.input)
    n = args.n if args.n is not None else cfg.n
    S, _incl = sk.skeleton(X, n)
    _emit_presheaf(S, args)
    return EXIT_OK


def cmd_triangulate(args, cfg):
    X = _load_presheaf(args.input)
    if X.site != "cubical":
        print("error: triangulation needs a cubical input", file=sys.stderr)
        return EXIT_INPUT
    _emit_presheaf(pr.triangulate(X, args.trunc_dim), args)
    return EXIT_OK


def cmd_geometric_product(args, cfg):
    X = _load_presheaf(args.x)
    Y = _load_presheaf(args.y)
    _emit_presheaf(pr.geometric_product(X, Y, args.trunc_dim), args)
    return EXIT_OK


def cmd_pi0(args, cfg):
    X = _load_graph(args.graph)
    comps = gr.pi0(X)
    lines = [f"{len(comps)} components"]
    for comp in comps:
        lines.append("  " + ", ".join(repr(v) for v in sorted(comp, key=repr)))
    _emit(
        {"lines": lines, "count": len(comps), "components": comps},
        args.json,
    )
    return EXIT_OK


def cmd_a1(args, cfg):
    X = _load_graph(args.graph)
    base = _vertex(args.base) if args.base is not None else X.vertices[0]
    try:
        pres = p1.a1_presentation(X, base)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rank, torsion = pres.abelianization()
    lines = [
        f"generators: {len(pres.generators)}, "
        f"relators: {len(pres.relators)}, "
        f"abelianization: {_abelianization_text(rank, torsion)}"
    ]
    _emit(
        {
            "lines": lines,
            "generators": len(pres.generators),
            "relators": len(pres.relators),
            "abelianization": {"rank": rank, "torsion": torsion},
        },
        args.json,
    )
    return EXIT_OK


def cmd_paths_homotopic(args, cfg):
    X = _load_graph(args.graph)
    try:
        a = p1.make_path(X, _parse_word(args.p1))
        b = p1.make_path(X, _parse_word(args.p2))
        report = p1.path_homotopic_bounded(
            a, b,
            max_support=args.support,
            max_steps=args.max_steps or cfg.max_steps,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    lines = [f"verdict: {report.verdict}"]
    if report.layers:
        for layer in report.layers:
            lines.append("  " + "-".join(repr(v) for v in layer))
    _emit(
        {"lines": lines, "verdict": report.verdict,
         "layers": report.layers, "explored": report.explored},
        args.json,
    )
    if report.verdict == "yes":
        return EXIT_OK
    if report.verdict == "no_exhausted":
        return EXIT_NEGATIVE
    return EXIT_BUDGET


def cmd_check_graph_fibration(args, cfg):
    f = _load_graph_map(args.map)
    n = args.n if args.n is not None else cfg.n
    report = nv.is_graph_n_fibration_bounded(
        f,
        n,
        M_max=args.support if args.support is not None else cfg.support_bound,
        slack=args.slack if args.slack is not None else cfg.slack,
        budget=args.budget if args.budget is not None else cfg.cell_budget,
        seed=args.seed if args.seed is not None else cfg.seed,
    )
    lines = [f"verdict: {report.verdict}"]
    for key in sorted(report.detail):
        if key not in ("u", "w"):
            lines.append(f"  {key}: {report.detail[key]!r}")
    _emit(
        {"lines": lines, "verdict": report.verdict, "detail": report.detail},
        args.json,
    )
    if report.verdict == "yes_on_tested_range":
        return EXIT_OK
    if report.verdict == "counterexample":
        return EXIT_NEGATIVE
    return EXIT_BUDGET


def cmd_psi_check(args, cfg):
    f = _load_graph_map(args.f)
    g = _load_graph_map(args.g)
    if (f.target.vertices != g.target.vertices
            or f.target.edges() != g.target.edges()):
        print("error: the two maps must share a target", file=sys.stderr)
        return EXIT_INPUT
    report = p1.psi_comparison(
        f, g,
        samples=args.samples,
        seed=args.seed if args.seed is not None else cfg.seed,
        max_support=args.support or 8,
        max_steps=args.max_steps or cfg.max_steps,
    )
    lines = [f"pi0: {report['pi0']['verdict']}"]
    for label in ("fullness", "faithfulness"):
        for sample in report[label]:
            lines.append(f"{label}: {sample['verdict']}")
    lines.append("passed" if report["passed"] else "FAILED")
    _emit({"lines": lines, **report}, args.json)
    if not report["passed"]:
        return EXIT_NEGATIVE
    if report["pi0"]["verdict"] == "inconclusive":
        return EXIT_BUDGET
    return EXIT_OK


def cmd_nerve_stats(args, cfg):
    X = _load_graph(args.graph)
    try:
        N = nv.nerve_fragment(
            X,
            args.dim,
            args.support if args.support is not None else cfg.support_bound,
            budget=args.budget if args.budget is not None else cfg.cell_budget,
        )
    except nv.BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BrokenPipeError:
        return EXIT_OK
    counts = {d: len(N.cells[d]) for d in N.dims()}
    nondeg = {d: len(N.nondeg(d)) for d in N.dims()}
    lines = [
        f"dim {d}: {counts[d]} cubes ({nondeg[d]} nondegenerate)"
        for d in sorted(counts)
    ]
    _emit(
        {"lines": lines, "cells": counts, "nondegenerate": nondeg},
        args.json,
    )
    return EXIT_OK


def cmd_selftest(args, cfg):
    n = args.n if args.n is not None else 0
    lines = []
    ok = True

    for site in ("cubical", "simplicial"):
        rows = sk.verify_skeletal_identities(site, n, n + 3)
        good = all(r["ok"] for r in rows)
        ok = ok and good
        lines.append(
            f"identity lemmas ({site}, n={n}): "
            f"{'pass' if good else 'FAIL'} ({len(rows)} checks)"
        )

    for name in ("J_n_prime_cubical", "I_n_prime_cubical",
                 "J_n_prime_simplicial", "I_n_prime_simplicial"):
        gens = lf.generating_set(name, n)
        members = gens.realize(n + 3)
        lines.append(f"generating set {name} (n={n}): {len(members)} members")

    c1 = ps.build_standard("cube", 1, trunc_dim=3).realized
    P = pr.geometric_product(c1, c1, 3)
    c2 = ps.build_standard("cube", 2, trunc_dim=3).realized
    square_ok = ps.is_isomorphic(P, c2)
    ok = ok and square_ok
    lines.append(
        f"interval x interval = square: {'pass' if square_ok else 'FAIL'}"
    )

    pres = p1.a1_presentation(gr.cycle(5), 0)
    rank, torsion = pres.abelianization()
    loops_ok = (rank, torsion) == (1, [])
    ok = ok and loops_ok
    lines.append(
        f"pentagon fundamental group = Z: {'pass' if loops_ok else 'FAIL'}"
    )

    ha = p1.path_homotopic_bounded(
        p1.make_path(gr.cycle(4), (0, 1, 2)),
        p1.make_path(gr.cycle(4), (0, 3, 2)),
    )
    hb_ok = ha.verdict == "yes"
    ok = ok and hb_ok
    lines.append(
        f"square halves homotopic: {'pass' if hb_ok else 'FAIL'}"
    )

    lines.append("selftest passed" if ok else "selftest FAILED")
    _emit({"lines": lines, "ok": ok}, args.json)
    return EXIT_OK if ok else EXIT_NEGATIVE


# --- wiring --------------------------------------------------------------


def _build_parser():
    top = argparse.ArgumentParser(
        prog="cubigraph",
        description="truncated cubical/simplicial presheaves and the "
        "discrete homotopy theory of reflexive graphs",
    )
    top.add_argument("--config", help="JSON file with run configuration")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, func, **flags):
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true",
                       help="machine-readable report")
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kwargs)
        return p

    add(
        "verify-identities", cmd_verify_identities,
        site={"choices": ["cubical", "simplicial", "both"],
              "default": "both"},
        n={"type": int, "default": None},
        k_max={"type": int, "default": None},
    )
    add(
        "check-rlp", cmd_check_rlp,
        map={"required": True},
        set={"choices": ["J", "I"], "default": "J"},
        n={"type": int, "default": None},
    )
    add(
        "cosk", cmd_cosk,
        input={"required": True}, n={"type": int, "default": None},
        output={"default": None},
    )
    add(
        "sk", cmd_sk,
        input={"required": True}, n={"type": int, "default": None},
        output={"default": None},
    )
    add(
        "triangulate", cmd_triangulate,
        input={"required": True},
        trunc_dim={"type": int, "default": None},
        output={"default": None},
    )
    add(
        "geometric-product", cmd_geometric_product,
        x={"required": True}, y={"required": True},
        trunc_dim={"type": int, "default": None},
        output={"default": None},
    )
    add("pi0", cmd_pi0, graph={"required": True})
    add(
        "a1", cmd_a1,
        graph={"required": True}, base={"default": None},
    )
    add(
        "paths-homotopic", cmd_paths_homotopic,
        graph={"required": True},
        p1={"required": True, "help": "comma-separated vertex word"},
        p2={"required": True},
        support={"type": int, "default": None},
        max_steps={"type": int, "default": None},
    )
    add(
        "check-graph-fibration", cmd_check_graph_fibration,
        map={"required": True},
        n={"type": int, "default": None},
        support={"type": int, "default": None},
        slack={"type": int, "default": None},
        budget={"type": int, "default": None},
        seed={"type": int, "default": None},
    )
    add(
        "psi-check", cmd_psi_check,
        f={"required": True}, g={"required": True},
        samples={"type": int, "default": 5},
        support={"type": int, "default": None},
        max_steps={"type": int, "default": None},
        seed={"type": int, "default": None},
    )
    add(
        "nerve-stats", cmd_nerve_stats,
        graph={"required": True},
        dim={"type": int, "required": True},
        support={"type": int, "default": None},
        budget={"type": int, "default": None},
    )
    add("selftest", cmd_selftest, n={"type": int, "default": None})
    return top


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig()
    if args.config:
        data = _load(args.config)
        for key, value in data.items():
            if not hasattr(cfg, key):
                print(f"error: unknown config key {key!r}", file=sys.stderr)
                return EXIT_INPUT
            setattr(cfg, key, value)
    try:
        return args.func(args, cfg)
    except nv.BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
