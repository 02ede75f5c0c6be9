"""Command-line front end.

Exit codes: 0 success, 1 mathematical negative (not in general position,
certificate fails, nothing found), 2 malformed input, 3 semantic error,
4 budget or sampling limits.
"""

from __future__ import annotations

import argparse
import json
import sys

from rigidweb.errors import (
    BudgetExceeded,
    ConstructionError,
    InputError,
    SamplingError,
    SemanticError,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_SEMANTIC, EXIT_BUDGET = 0, 1, 2, 3, 4


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from None


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _fmt_subspace(sub) -> str:
    rows = ["  [" + ", ".join(str(x) for x in r) + "]" for r in sub.basis.rows]
    return "\n".join([f"dim {sub.dim} in C^{sub.n}"] + rows)


def _fmt_matrix(m) -> str:
    return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in m.rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    from rigidweb.expr import evaluate, parse, to_text
    from rigidweb.linalg import SubspaceSystem

    system = SubspaceSystem.from_json(_load_json(args.system))
    e = parse(args.expr, len(system))
    sub = evaluate(e, system)
    _emit(args, {"expr": to_text(e), "subspace": sub.to_json(), "dim": sub.dim},
          f"{to_text(e)}\n{_fmt_subspace(sub)}")
    return EXIT_OK


def cmd_genpos(args) -> int:
    from rigidweb.genpos import system_in_general_position
    from rigidweb.linalg import SubspaceSystem

    system = SubspaceSystem.from_json(_load_json(args.system))
    v = system_in_general_position(system, budget=args.budget, method=args.method)
    if v:
        text = f"in general position ({len(system)} members in C^{system.n})"
    else:
        w = v.witness
        text = (
            "NOT in general position\n"
            f"  P = {w.to_json()['P']}  (dim {w.dim_p})\n"
            f"  Q = {w.to_json()['Q']}  (dim {w.dim_q})\n"
            f"  dim(P+Q) = {w.dim_sum}, expected {w.expected}; dim(P&Q) = {w.dim_meet}"
        )
    _emit(args, v.to_json(), text)
    return EXIT_OK if v else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    from rigidweb.linalg import SubspaceSystem
    from rigidweb.rigidity import Certificate, verify_certificate, verify_certificate_generic

    cert = Certificate.from_json(_load_json(args.cert))
    if args.system:
        system = SubspaceSystem.from_json(_load_json(args.system))
        v = verify_certificate(cert, system, genpos=args.genpos, budget=args.budget)
    else:
        v = verify_certificate_generic(cert, trials=args.trials, seed=args.seed,
                                       genpos=args.genpos, budget=args.budget)
    text = v.summary()
    if not v.holds and v.detail:
        text += "\n  " + json.dumps(v.detail, sort_keys=True)
    _emit(args, v.to_json(), text)
    return EXIT_OK if v.holds else EXIT_NEGATIVE


def cmd_build(args) -> int:
    from rigidweb.rigidity import build_certificate, cert_hyperplanes, cert_lines

    dims = _int_list(args.dims)
    n = args.n
    if args.family == "lines":
        cert = cert_lines(n, len(dims), args.target)
        if cert.dims != dims:
            raise SemanticError("the lines family needs every dimension equal to 1")
    elif args.family == "hyperplanes":
        cert = cert_hyperplanes(n, len(dims), args.target)
        if cert.dims != dims:
            raise SemanticError(f"the hyperplanes family needs every dimension equal to {n - 1}")
    else:
        cert = build_certificate(n, dims, args.target, seed=args.seed, trials=args.trials,
                                 budget=args.budget)
    out = cert.to_json()
    text = "\n".join(
        [f"certificate for target X{cert.target}, n={n}, dims={list(dims)}"]
        + [f"  P{k} = {t}" for k, t in enumerate(out["P"], 1)]
        + [f"  Q{l} = {t}" for l, t in enumerate(out["Q"], 1)]
        + [f"  I{k} = {x}" for k, x in enumerate(out["I"], 1)]
    )
    _emit(args, out, text)
    return EXIT_OK


def cmd_search(args) -> int:
    from rigidweb.rigidity import search_certificate

    dims = _int_list(args.dims)
    cert = search_certificate(args.n, dims, args.target, depth=args.depth, seed=args.seed,
                              trials=min(args.trials, 20))
    if cert is None:
        _emit(args, {"found": False, "certificate": None},
              f"no certificate within depth {args.depth}")
        return EXIT_NEGATIVE
    out = cert.to_json()
    _emit(args, {"found": True, "certificate": out},
          "found: " + json.dumps(out, sort_keys=True))
    return EXIT_OK


def _load_block(data, plan, k_flag):
    from rigidweb.linalg import LinearMap, Matrix
    from rigidweb.reconstruct import BlockMap, block

    if not isinstance(data, dict):
        raise InputError("block file must be a JSON object")
    k = k_flag if k_flag is not None else data.get("k")
    if not isinstance(k, int):
        raise InputError("block index k must be given (--k or \"k\" in the block file)")
    if not 1 <= k <= plan.K:
        raise SemanticError(f"block index {k} outside 1..{plan.K}")
    n = plan.cert.n
    if "matrix" in data:
        m = Matrix.from_json(data["matrix"], ncols=n)
        return k, block(LinearMap.from_ambient(m), plan, k)
    if "action" in data:
        src, dst = plan.parts[k - 1], plan.parts2[k - 1]
        m = Matrix.from_json(data["action"], ncols=dst.dim)
        return k, BlockMap(k, LinearMap(src, dst, m))
    raise InputError('block file needs "matrix" (n x n) or "action" (block coordinates)')


def cmd_reconstruct(args) -> int:
    from rigidweb.linalg import SubspaceSystem
    from rigidweb.reconstruct import build_plan, phi
    from rigidweb.rigidity import Certificate

    cert = Certificate.from_json(_load_json(args.cert))
    E = SubspaceSystem.from_json(_load_json(args.system))
    E2 = SubspaceSystem.from_json(_load_json(args.system2)) if args.system2 else E
    plan = build_plan(cert, E, E2)
    k, g_k = _load_block(_load_json(args.block), plan, args.k)
    g = phi(plan, k, g_k)
    m = g.ambient_matrix()
    _emit(args, {"k": k, "matrix": m.to_json()}, _fmt_matrix(m))
    return EXIT_OK


def cmd_web(args) -> int:
    from rigidweb.scalar import parse_scalar
    from rigidweb.web import Presentation, web_report

    pres = Presentation.from_json(_load_json(args.presentation))
    try:
        point = [parse_scalar(x.strip()) for x in args.point.split(",")]
    except ValueError as exc:
        raise InputError(f"bad point {args.point!r}: {exc}") from None
    rep = web_report(pres, point, seed=args.seed, budget=args.budget)
    out = rep.to_json()
    lines = [
        f"tangent dimensions {list(rep.dims)} in C^{rep.n}",
        f"general position: {'yes' if rep.general_position else 'no'}",
        f"s >= N(n): {out['meets_bound']}",
    ]
    if rep.uniform:
        lines.append(f"uniform tuple, s >= n+1: {rep.meets_uniform_bound}")
    lines.append(f"rigid: {rep.rigid}")
    if rep.contained_pairs:
        lines.append(f"tangent containments (i in j): {[list(p) for p in rep.contained_pairs]}")
    _emit(args, out, "\n".join(lines))
    return EXIT_OK if rep.rigid else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def _budget(text: str):
    if text.lower() in ("none", "unlimited"):
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    common.add_argument("--trials", type=int, default=100, help="generic trials (default 100)")
    common.add_argument("--budget", type=_budget, default=8,
                        help="member bound for exhaustive general-position checks (default 8; 'none' lifts it)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="rigidweb", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression on a system")
    s.add_argument("expr")
    s.add_argument("system", help="system JSON file")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("genpos", parents=[common], help="decide general position of a system")
    s.add_argument("system")
    s.add_argument("--method", choices=("lattice", "enumerate"), default="lattice")
    s.set_defaults(func=cmd_genpos)

    s = sub.add_parser("verify", parents=[common], help="verify a certificate (generically without a system)")
    s.add_argument("cert")
    s.add_argument("system", nargs="?")
    s.add_argument("--genpos", choices=("auto", "full", "restricted", "skip"), default="auto")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("build", parents=[common], help="construct a certificate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dims", required=True, help="comma-separated dimensions")
    s.add_argument("--target", type=int, default=1)
    s.add_argument("--family", choices=("general", "lines", "hyperplanes"), default="general")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("search", parents=[common], help="bounded exhaustive certificate search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dims", required=True)
    s.add_argument("--target", type=int, default=1)
    s.add_argument("--depth", type=int, default=3)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("reconstruct", parents=[common], help="rebuild a map of C^n from one block")
    s.add_argument("cert")
    s.add_argument("system", help="system E")
    s.add_argument("system2", nargs="?", help="system E' (default: E)")
    s.add_argument("--block", required=True, help="block JSON: {\"k\", \"action\"} or {\"k\", \"matrix\"}")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("web", parents=[common], help="tangent web report at a point")
    s.add_argument("presentation")
    s.add_argument("--point", required=True, help="comma-separated coordinates")
    s.set_defaults(func=cmd_web)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except (BudgetExceeded, SamplingError) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
