"""Command-line front end.

Commands: wl-close, fission, aut, iso, schurian, base, wreath, power, exp,
glue, tournament-check.  Reports are human-readable by default and JSON with
--json; exit code 0 means success (schurian / isomorphic), 1 a negative
verdict, 2 an input or usage error.  COHCFG_BUDGET overrides search budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fileio
from .bases import base_number_search
from .errors import BudgetExceeded, CohcfgError
from .perm import color_aut_backtrack
from .products import cartesian_power, exponentiation, glue_disjoint_union, wreath_product
from .recognize import SchurityRefusal, recognize_schurity, tournament_pipeline
from .refine import coherent_closure, fission

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2


def _env_budget():
    raw = os.environ.get("COHCFG_BUDGET")
    return int(raw) if raw else None


def _emit(args, report: dict, human: str, out_text: str | None = None) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    if out_text is not None:
        if getattr(args, "output", None):
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out_text)
        else:
            sys.stdout.write(out_text)
    if human:
        print(human)


def _config_report(command: str, X) -> dict:
    return {"command": command, "ok": True, **fileio.config_to_json(X)}


def _group_fields(G) -> dict:
    return {
        "order": G.order(),
        "generators": [list(g.images) for g in G.generators],
    }


def cmd_wl_close(args) -> int:
    n, rels = fileio.parse_and_validate(args.relations, "rels")
    X = coherent_closure([pairs for _, pairs in rels], n=n)
    if args.pi:
        with open(args.pi, encoding="utf-8") as fh:
            sets = fileio.parse_point_sets(fh.read())
        X = fission(X, sets)
    _emit(args, _config_report("wl-close", X),
          f"# coherent closure: degree {X.n}, rank {X.rank}",
          fileio.serialize_config(X))
    return EXIT_OK


def cmd_fission(args) -> int:
    X = fileio.parse_and_validate(args.config, "ccfg")
    with open(args.pi, encoding="utf-8") as fh:
        sets = fileio.parse_point_sets(fh.read())
    Y = fission(X, sets)
    _emit(args, _config_report("fission", Y),
          f"# fission: degree {Y.n}, rank {Y.rank}", fileio.serialize_config(Y))
    return EXIT_OK


def cmd_aut(args) -> int:
    X = fileio.parse_and_validate(args.config, "ccfg")
    G = color_aut_backtrack(X)
    report = {"command": "aut", "ok": True, **_group_fields(G)}
    human = f"automorphism group order {G.order()}\n" + "\n".join(
        "img " + " ".join(map(str, g.images)) for g in G.generators
    )
    _emit(args, report, human)
    return EXIT_OK


def cmd_schurian(args) -> int:
    X = fileio.parse_and_validate(args.config, "ccfg")
    res = recognize_schurity(X)
    if isinstance(res, SchurityRefusal):
        report = {"command": "schurian", "ok": False, "schurian": False,
                  "refusal": res.reason, "refusal_witness": repr(res.witness)}
        _emit(args, report, f"not schurian: {res.reason}")
        return EXIT_NO
    report = {"command": "schurian", "ok": True, "schurian": True,
              **_group_fields(res)}
    _emit(args, report, f"schurian; automorphism group order {res.order()}")
    return EXIT_OK


def cmd_base(args) -> int:
    X = fileio.parse_and_validate(args.config, "ccfg")
    budget = args.budget if args.budget is not None else _env_budget()
    try:
        result = base_number_search(X, mode=args.mode, budget=budget)
    except BudgetExceeded as exc:
        report = {"command": "base", "ok": False, "mode": args.mode,
                  "refusal": str(exc)}
        _emit(args, report, f"budget exceeded: {exc}")
        return EXIT_NO
    cert = result.certificate
    report = {
        "command": "base", "ok": True, "mode": args.mode, "size": result.size,
        "witness": [list(s) for s in cert.sets], "rank": cert.fission_rank,
    }
    _emit(args, report,
          f"{args.mode} number {result.size}; witness {[list(s) for s in cert.sets]}")
    return EXIT_OK


def cmd_iso(args) -> int:
    T1 = fileio.parse_and_validate(args.first, "trn")
    T2 = fileio.parse_and_validate(args.second, "trn")
    rep = tournament_pipeline(T1, T2)
    isos = rep.isomorphisms or ()
    glue = rep.gluing_isomorphisms or ()
    report = {
        "command": "iso", "ok": bool(isos), "count": len(isos),
        "isomorphisms": [list(f) for f in isos],
        "gluing_isomorphisms": [list(f) for f in glue],
        "routes_agree": isos == glue,
    }
    human = f"{len(isos)} isomorphisms (gluing route: {len(glue)}, agree: {isos == glue})"
    _emit(args, report, human)
    return EXIT_OK if isos else EXIT_NO


def cmd_tournament_check(args) -> int:
    T = fileio.parse_and_validate(args.tournament, "trn")
    rep = tournament_pipeline(T)
    if not rep.schurian:
        report = {"command": "tournament-check", "ok": False, "schurian": False,
                  "refusal": rep.refusal}
        _emit(args, report, f"not schurian: {rep.refusal}")
        return EXIT_NO
    report = {"command": "tournament-check", "ok": True, "schurian": True,
              "order": rep.aut_order,
              "generators": [list(g) for g in rep.aut_generators]}
    _emit(args, report, f"schurian; automorphism group order {rep.aut_order}")
    return EXIT_OK


def cmd_wreath(args) -> int:
    X1 = fileio.parse_and_validate(args.first, "ccfg")
    X2 = fileio.parse_and_validate(args.second, "ccfg")
    X = wreath_product(X1, X2)
    _emit(args, _config_report("wreath", X),
          f"# wreath product: degree {X.n}, rank {X.rank}", fileio.serialize_config(X))
    return EXIT_OK


def cmd_power(args) -> int:
    Y = fileio.parse_and_validate(args.config, "ccfg")
    X = cartesian_power(Y, args.exponent)
    _emit(args, _config_report("power", X),
          f"# cartesian power: degree {X.n}, rank {X.rank}", fileio.serialize_config(X))
    return EXIT_OK


def cmd_exp(args) -> int:
    Y = fileio.parse_and_validate(args.config, "ccfg")
    L = fileio.parse_and_validate(args.group, "grp")
    X = exponentiation(Y, L)
    _emit(args, _config_report("exp", X),
          f"# exponentiation: degree {X.n}, rank {X.rank}", fileio.serialize_config(X))
    return EXIT_OK


def cmd_glue(args) -> int:
    parts = [fileio.parse_and_validate(p, "ccfg") for p in args.parts]
    Q = fileio.parse_and_validate(args.group, "grp") if args.group else None
    psi = None
    if args.link == "identity":
        from .refine import AlgebraicIsomorphism

        psi = {}
        for i in range(len(parts) - 1):
            psi[(i, i + 1)] = AlgebraicIsomorphism(
                parts[i], parts[i + 1], tuple(range(parts[i].rank))
            )
    X = glue_disjoint_union(parts, psi, Q)
    _emit(args, _config_report("glue", X),
          f"# glued union: degree {X.n}, rank {X.rank}", fileio.serialize_config(X))
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--json", action="store_true", help="emit a JSON report")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for parallel searches (serial engine accepts and ignores)")
    sub.add_argument("-o", "--output", help="write primary text output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohcfg",
        description="Coherent configurations, Weisfeiler-Leman closure, bases, "
                    "and schurity recognition",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("wl-close", help="coherent closure of seed relations")
    s.add_argument("relations", help="a .rels file")
    s.add_argument("--pi", help="point-set file; fission the closure by these sets")
    _add_common(s)
    s.set_defaults(func=cmd_wl_close)

    s = subs.add_parser("fission", help="smallest fission by point sets")
    s.add_argument("config", help="a .ccfg file")
    s.add_argument("--pi", required=True, help="point-set file, one set per line")
    _add_common(s)
    s.set_defaults(func=cmd_fission)

    s = subs.add_parser("aut", help="color automorphism group")
    s.add_argument("config")
    _add_common(s)
    s.set_defaults(func=cmd_aut)

    s = subs.add_parser("schurian", help="schurity recognition")
    s.add_argument("config")
    _add_common(s)
    s.set_defaults(func=cmd_schurian)

    s = subs.add_parser("base", help="base / generalized base search")
    s.add_argument("config")
    s.add_argument("--mode", choices=("base", "gb"), default="base")
    s.add_argument("--budget", type=int)
    _add_common(s)
    s.set_defaults(func=cmd_base)

    s = subs.add_parser("iso", help="isomorphisms of two schurian tournaments")
    s.add_argument("first")
    s.add_argument("second")
    _add_common(s)
    s.set_defaults(func=cmd_iso)

    s = subs.add_parser("tournament-check", help="schurity of a tournament")
    s.add_argument("tournament")
    _add_common(s)
    s.set_defaults(func=cmd_tournament_check)

    s = subs.add_parser("wreath", help="wreath product of two configurations")
    s.add_argument("first")
    s.add_argument("second")
    _add_common(s)
    s.set_defaults(func=cmd_wreath)

    s = subs.add_parser("power", help="cartesian power of a configuration")
    s.add_argument("config")
    s.add_argument("exponent", type=int)
    _add_common(s)
    s.set_defaults(func=cmd_power)

    s = subs.add_parser("exp", help="exponentiation by a coordinate group")
    s.add_argument("config")
    s.add_argument("group", help="a .grp file acting on the coordinates")
    _add_common(s)
    s.set_defaults(func=cmd_exp)

    s = subs.add_parser("glue", help="smallest configuration gluing disjoint parts")
    s.add_argument("parts", nargs="+", help=".ccfg files")
    s.add_argument("--group", help="a .grp file acting on the part indices")
    s.add_argument("--link", choices=("identity", "none"), default="identity",
                   help="pair consecutive parts by the identity color bijection "
                        "(parts must be color-aligned), or leave parts unlinked")
    _add_common(s)
    s.set_defaults(func=cmd_glue)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (CohcfgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
