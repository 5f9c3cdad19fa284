"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
parse error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import construct, indifference, postulates, ranking, structures, zsystems
from .logic import LogicError, parse_conditional, parse_kb, render_conditional, render_kb, render_world
from .ranking import INF, OCF

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


class CLIError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _rank_json(r):
    return "inf" if r == INF else r


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from None


def _load_kb(path: str):
    return parse_kb(_read(path))


def _load_ocf(path: str, sig=None) -> OCF:
    try:
        return OCF.loads(_read(path), sig)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CLIError(f"{path}: malformed OCF JSON ({exc})") from None


def _table(rows: list[list[str]], header: list[str] | None = None) -> str:
    rows = ([header] if header else []) + rows
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _opts(args, prior=None) -> construct.SolverOptions:
    return construct.SolverOptions(mode=args.mode, iteration_cap=args.iteration_cap, prior=prior)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args):
    kb = _load_kb(args.kb)
    if args.json:
        return _dump({
            "signature": list(kb.signature.atoms),
            "conditionals": [{"label": c.label, "conditional": render_conditional(c)} for c in kb],
        }), EXIT_OK
    return render_kb(kb), EXIT_OK


def cmd_structures(args):
    kb = _load_kb(args.kb)
    table = structures.structure_table(kb)
    if args.json:
        return _dump({"rows": [{"world": str(w), "structure": str(g)} for w, g in table]}), EXIT_OK
    return _table([[str(w), str(g)] for w, g in table]), EXIT_OK


def cmd_kernel(args):
    kb = _load_kb(args.kb)
    basis = structures.kernel_basis(kb, include_top=args.top)
    if args.json:
        return _dump({
            "include_top": args.top,
            "basis": [[{"world": render_world(w, kb.signature), "exp": e} for w, e in b.exponents] for b in basis],
        }), EXIT_OK
    return "".join(str(b) + "\n" for b in basis), EXIT_OK


def cmd_zrank(args):
    kb = _load_kb(args.kb)
    z = zsystems.z_ranks(kb)
    if args.json:
        return _dump({"Z": z}), EXIT_OK
    return _table([[c.label, str(r)] for c, r in zip(kb, z)], ["rule", "Z"]), EXIT_OK


def cmd_zstar(args):
    kb = _load_kb(args.kb)
    zs = zsystems.z_star(kb)
    if zs is None:
        w = zsystems.core_witness(kb)
        payload = {"minimal_core": False, "witness": kb[w].label if w is not None else None}
        raise CLIError("Z* equations have no solution", EXIT_SOLVER, payload)
    if args.json:
        return _dump({"Zstar": list(zs)}), EXIT_OK
    return _table([[c.label, str(r)] for c, r in zip(kb, zs)], ["rule", "Z*"]), EXIT_OK


def _emit_ocf(k: OCF, cv, args):
    if args.json:
        return _dump({"constants": cv.to_json(), "ocf": k.to_json()})
    cj = cv.to_json()
    head = f"kappa0 = {cj['kappa0']}\nminus  = {cj['minus']}\nplus   = {cj['plus']}\n\n"
    return head + k.render()


def cmd_crep(args):
    kb = _load_kb(args.kb)
    cv = construct.solve_constants(kb, _opts(args))
    if cv is None:
        raise CLIError("no constants found within the iteration cap", EXIT_SOLVER)
    k = construct.compose(OCF.uniform(kb.signature), cv, kb)
    return _emit_ocf(k, cv, args), EXIT_OK


def cmd_revise(args):
    kb = _load_kb(args.kb)
    prior = _load_ocf(args.prior, kb.signature)
    cv = construct.solve_constants(kb, _opts(args, prior))
    if cv is None:
        raise CLIError("no constants found within the iteration cap", EXIT_SOLVER)
    k = construct.compose(prior, cv, kb)
    return _emit_ocf(k, cv, args), EXIT_OK


def _ranking_for(source: str, engine: str, args) -> OCF:
    text = _read(source)
    if text.lstrip().startswith("{"):
        return _load_ocf(source)
    kb = parse_kb(text)
    if engine == "z":
        return zsystems.kappa_z(kb)
    if engine == "zc":
        return zsystems.kappa_z_c(kb)
    if engine == "zstar":
        zs = zsystems.z_star(kb)
        if zs is None:
            raise CLIError("Z* equations have no solution", EXIT_SOLVER)
        return zsystems.kappa_star(kb, zs)
    cv = construct.solve_constants(kb, _opts(args))
    if cv is None:
        raise CLIError("no constants found within the iteration cap", EXIT_SOLVER)
    return construct.compose(OCF.uniform(kb.signature), cv, kb)


def cmd_query(args):
    k = _ranking_for(args.source, args.engine, args)
    c = parse_conditional(args.conditional, k.signature)
    rv = k.rank_of_set(c.verification(k.signature))
    rf = k.rank_of_set(c.falsification(k.signature))
    ok = ranking.accepts(k, c)
    code = EXIT_OK if ok else EXIT_NEGATIVE
    if args.json:
        return _dump({
            "conditional": render_conditional(c),
            "accepted": ok,
            "rank_verifying": _rank_json(rv),
            "rank_falsifying": _rank_json(rf),
        }), code
    word = "accepted" if ok else "not accepted"
    return f"{render_conditional(c)}: {word} ({_rank_json(rv)} vs {_rank_json(rf)})\n", code


def cmd_check_indifference(args):
    kb = _load_kb(args.kb)
    k = _load_ocf(args.ocf, kb.signature)
    verdict = indifference.verdict_json(k, kb)
    code = EXIT_OK if verdict["indifferent"] else EXIT_NEGATIVE
    if args.json:
        return _dump(verdict), code
    lines = [f"indifferent: {'yes' if verdict['indifferent'] else 'no'}"]
    if verdict["constants"]:
        cj = verdict["constants"]
        lines.append(f"kappa0 = {cj['kappa0']}, plus = {cj['plus']}, minus = {cj['minus']}")
    w = verdict["witness"]
    if w and "kernel_element" in w:
        lines.append(f"witness: {w['kernel_element']} has value {w['value']}")
    elif w:
        lines.append(f"witness: unexplained infinite worlds {', '.join(w['infinite_worlds'])}")
    return "\n".join(lines) + "\n", code


def cmd_postulates(args):
    prior = _load_ocf(args.prior)
    post = _load_ocf(args.posterior, prior.signature)
    rev = parse_conditional(args.rev, prior.signature)
    probes = postulates.probe_set(prior.signature, args.max_literals)
    report = postulates.check_cr(prior, post, rev, probes)
    code = EXIT_OK if report.preservation_holds else EXIT_NEGATIVE
    if args.json:
        return _dump({"probes": len(probes), **report.to_json()}), code
    rows = []
    for p in postulates.POSTULATES:
        r = report[p]
        rows.append([p, "holds" if r.holds else "violated", ", ".join(str(c) for c in r.witnesses[:5])])
    return _table(rows, ["postulate", "verdict", "witnesses"]), code


def cmd_compare(args):
    kb = _load_kb(args.kb)
    kz = zsystems.kappa_z(kb)
    kzc = zsystems.kappa_z_c(kb)
    zs = zsystems.z_star(kb)
    kst = zsystems.kappa_star(kb, zs) if zs is not None else None
    rows = []
    for w in kb.signature.worlds():
        rows.append({
            "world": str(w),
            "kappa_z": kz[w],
            "kappa_zc": kzc[w],
            "kappa_star": kst[w] if kst is not None else None,
        })
    if args.json:
        return _dump({"rows": rows, "minimal_core": zs is not None}), EXIT_OK
    text = [[r["world"], str(r["kappa_z"]), str(r["kappa_zc"]),
             "-" if r["kappa_star"] is None else str(r["kappa_star"])] for r in rows]
    return _table(text, ["world", "kappa_z", "kappa_zc", "kappa_star"]), EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--mode", choices=construct.MODES, default="nonneg")
    solver.add_argument("--iteration-cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="condpres", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and echo a knowledge base")
    s.add_argument("kb")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("structures", parents=[common], help="conditional structure of every world")
    s.add_argument("kb")
    s.set_defaults(func=cmd_structures)

    s = sub.add_parser("kernel", parents=[common], help="lattice basis of the structure kernel")
    s.add_argument("kb")
    s.add_argument("--top", action="store_true", help="intersect with the normalization kernel")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("zrank", parents=[common], help="system-Z ranks of the rules")
    s.add_argument("kb")
    s.set_defaults(func=cmd_zrank)

    s = sub.add_parser("zstar", parents=[common], help="system-Z* ranks of the rules")
    s.add_argument("kb")
    s.set_defaults(func=cmd_zstar)

    s = sub.add_parser("crep", parents=[common, solver], help="c-representation of a knowledge base")
    s.add_argument("kb")
    s.set_defaults(func=cmd_crep)

    s = sub.add_parser("revise", parents=[common, solver], help="c-revision of a prior OCF")
    s.add_argument("kb")
    s.add_argument("--prior", required=True)
    s.set_defaults(func=cmd_revise)

    s = sub.add_parser("query", parents=[common, solver], help="acceptance of a conditional")
    s.add_argument("source", help="knowledge base (.ckb) or OCF JSON")
    s.add_argument("conditional")
    s.add_argument("--engine", choices=("z", "zc", "zstar", "crep"), default="crep")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("check-indifference", parents=[common], help="indifference of an OCF")
    s.add_argument("ocf")
    s.add_argument("kb")
    s.set_defaults(func=cmd_check_indifference)

    s = sub.add_parser("postulates", parents=[common], help="check CR5-CR8 for a revision")
    s.add_argument("--prior", required=True)
    s.add_argument("--posterior", required=True)
    s.add_argument("--rev", required=True)
    s.add_argument("--max-literals", type=int, default=2)
    s.set_defaults(func=cmd_postulates)

    s = sub.add_parser("compare", parents=[common], help="system-Z, summed Z and Z* side by side")
    s.add_argument("kb")
    s.set_defaults(func=cmd_compare)
    return p


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out, code = args.func(args)
    except CLIError as exc:
        if exc.payload is not None:
            stdout.write(_dump(exc.payload) if args.json else "".join(f"{k}: {v}\n" for k, v in exc.payload.items()))
        stderr.write(f"condpres: {exc}\n")
        return exc.code
    except construct.SolverError as exc:
        stderr.write(f"condpres: {exc}\n")
        return EXIT_SOLVER
    except zsystems.InconsistentKBError as exc:
        stderr.write(f"condpres: {exc}\n")
        return EXIT_SOLVER
    except (LogicError, ranking.RankingError, ValueError) as exc:
        stderr.write(f"condpres: {exc}\n")
        return EXIT_USAGE
    stdout.write(out)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
